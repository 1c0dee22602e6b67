#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "internal.hpp"
#include "ptmc/error.hpp"

namespace ptmc::cli {

Format parse_format(const std::string& text) {
  if (text == "text") return Format::Text;
  if (text == "csv") return Format::Csv;
  if (text == "jsonl") return Format::Jsonl;
  if (text == "json") return Format::Json;
  throw CliError(kUsage, fmt::format("unknown format '{}'", text));
}

const char* extension(Format format) {
  switch (format) {
    case Format::Text: return "txt";
    case Format::Csv: return "csv";
    case Format::Jsonl: return "jsonl";
    case Format::Json: return "json";
  }
  return "txt";
}

std::uint64_t parse_count(const std::string& flag, const std::string& text) {
  auto bad = [&] {
    return CliError(kUsage, fmt::format("{}: expected a non-negative integer, got '{}'", flag, text));
  };
  if (text.empty() || text[0] == '-' || text[0] == '+') throw bad();
  std::size_t used = 0;
  if (text.find_first_not_of("0123456789") == std::string::npos) {
    try {
      return std::stoull(text, &used);
    } catch (const std::exception&) {
      throw bad();
    }
  }
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw bad();
  }
  if (used != text.size() || !std::isfinite(value) || value < 0 || value != std::floor(value) ||
      value >= 18446744073709551616.0) {
    throw bad();
  }
  return static_cast<std::uint64_t>(value);
}

ResolvedParams resolve(const ParamFlags& flags, bool required) {
  const bool direct = flags.alpha || flags.beta;
  if (direct && !flags.params.empty()) {
    throw CliError(kUsage, "--params cannot be combined with --alpha/--beta");
  }
  if (direct && !(flags.alpha && flags.beta)) {
    throw CliError(kUsage, "--alpha and --beta must be given together");
  }
  if (direct) {
    if (!std::isfinite(*flags.alpha) || !std::isfinite(*flags.beta)) {
      throw CliError(kValidation, "--alpha and --beta must be finite");
    }
    return {EnergyParams{*flags.alpha, *flags.beta, 0.0, 0.0}, "flags"};
  }
  if (!flags.params.empty()) return {resolve_params(flags.params), flags.params};
  if (required) throw CliError(kUsage, "either --alpha and --beta or --params is required");
  return {EnergyParams{}, "default"};
}

Json params_json(const ResolvedParams& p) {
  return Json{{"alpha", p.energy.alpha},
              {"beta", p.energy.beta},
              {"gamma", p.energy.gamma},
              {"delta", p.energy.delta},
              {"source", p.source}};
}

OutputTarget::OutputTarget(std::optional<std::filesystem::path> dir, std::ostream& fallback)
    : dir_(std::move(dir)), fallback_(fallback) {
  if (dir_) {
    std::error_code ec;
    std::filesystem::create_directories(*dir_, ec);
    if (ec || !std::filesystem::is_directory(*dir_)) {
      throw CliError(kValidation, fmt::format("cannot create output directory '{}'", dir_->string()));
    }
  }
}

std::ostream& OutputTarget::open(const std::string& name) {
  if (!dir_) return fallback_;
  auto stream = std::make_unique<std::ofstream>(*dir_ / name, std::ios::binary | std::ios::trunc);
  if (!*stream) throw CliError(kValidation, fmt::format("cannot write '{}'", (*dir_ / name).string()));
  files_.push_back(name);
  streams_.push_back(std::move(stream));
  return *streams_.back();
}

void OutputTarget::close_all() {
  for (auto& s : streams_) {
    s->close();
    if (s->fail()) throw CliError(kValidation, "failed writing output file");
  }
  streams_.clear();
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  return fmt::format("{}", x);
}

TableWriter::TableWriter(std::ostream& out, Format format, std::vector<std::string> columns)
    : out_(out), format_(format), columns_(std::move(columns)) {
  if (format_ == Format::Csv || format_ == Format::Text) {
    for (std::size_t c = 0; c < columns_.size(); ++c) out_ << (c ? "," : "") << columns_[c];
    out_ << '\n';
  } else if (format_ == Format::Json) {
    out_ << '[';
  }
}

void TableWriter::row(const std::vector<Cell>& cells) {
  if (format_ == Format::Csv || format_ == Format::Text) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out_ << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
              out_ << csv_field(v);
            } else if constexpr (std::is_same_v<T, double>) {
              out_ << format_double(v);
            } else if constexpr (std::is_same_v<T, bool>) {
              out_ << (v ? "true" : "false");
            } else if constexpr (std::is_same_v<T, Json>) {
              out_ << csv_field(v.dump());
            } else {
              out_ << v;
            }
          },
          cells[c]);
    }
    out_ << '\n';
  } else {
    Json obj = Json::object();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::visit([&](const auto& v) { obj[columns_[c]] = v; }, cells[c]);
    }
    if (format_ == Format::Json) out_ << (rows_ ? ",\n" : "\n");
    out_ << obj.dump();
    if (format_ == Format::Jsonl) out_ << '\n';
  }
  ++rows_;
}

void TableWriter::finish() {
  if (finished_) return;
  finished_ = true;
  if (format_ == Format::Json) out_ << (rows_ ? "\n]\n" : "]\n");
  out_.flush();
}

void write_json(std::ostream& out, const Json& doc) { out << doc.dump(2) << '\n'; }

std::string hex64(std::uint64_t x) { return fmt::format("{:016x}", x); }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

}  // namespace ptmc::cli

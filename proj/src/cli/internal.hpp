#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ptmc/cli.hpp"
#include "ptmc/energy.hpp"

namespace ptmc::cli {

using Json = nlohmann::ordered_json;

struct CliError : std::runtime_error {
  CliError(ExitCode code, const std::string& what) : std::runtime_error(what), code(code) {}
  ExitCode code;
};

enum class Format { Text, Csv, Jsonl, Json };
Format parse_format(const std::string& text);
const char* extension(Format format);

/// Non-negative integer flag; accepts plain integers and exact scientific
/// notation such as 1e6.
std::uint64_t parse_count(const std::string& flag, const std::string& text);

struct ParamFlags {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::string params;
};

struct ResolvedParams {
  EnergyParams energy;
  std::string source;
};

/// Without any flag the result is alpha = beta = 0 unless `required`.
ResolvedParams resolve(const ParamFlags& flags, bool required);
Json params_json(const ResolvedParams& p);

/// Data files go to a directory when one is configured, otherwise to the
/// provided stream.
class OutputTarget {
 public:
  OutputTarget(std::optional<std::filesystem::path> dir, std::ostream& fallback);

  bool has_dir() const { return dir_.has_value(); }
  const std::optional<std::filesystem::path>& dir() const { return dir_; }
  /// Stream for the named file; the fallback stream without a directory.
  std::ostream& open(const std::string& name);
  void close_all();
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::optional<std::filesystem::path> dir_;
  std::ostream& fallback_;
  std::vector<std::unique_ptr<std::ofstream>> streams_;
  std::vector<std::string> files_;
};

using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string, bool, Json>;

/// Rows with fixed columns as CSV (header row), JSON lines, or one JSON array.
class TableWriter {
 public:
  TableWriter(std::ostream& out, Format format, std::vector<std::string> columns);
  void row(const std::vector<Cell>& cells);
  void finish();

 private:
  std::ostream& out_;
  Format format_;
  std::vector<std::string> columns_;
  std::uint64_t rows_ = 0;
  bool finished_ = false;
};

std::string csv_field(const std::string& text);
std::string format_double(double x);
void write_json(std::ostream& out, const Json& doc);
std::string hex64(std::uint64_t x);
std::string utc_timestamp();

}  // namespace ptmc::cli

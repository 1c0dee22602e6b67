#include "commands.hpp"

#include <cmath>
#include <exception>
#include <istream>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "ptmc/chain.hpp"
#include "ptmc/decomposition.hpp"
#include "ptmc/error.hpp"
#include "ptmc/exact.hpp"
#include "ptmc/tree.hpp"

namespace ptmc::cli {

namespace {

std::size_t parse_m(const std::string& flag, const std::string& text, std::size_t cap,
                    const char* what) {
  const auto m = parse_count(flag, text);
  if (m == 0) throw CliError(kValidation, fmt::format("{} must be at least 1", flag));
  if (m > cap) {
    throw CliError(kCapacity, fmt::format("m = {} exceeds the {} cap of m <= {}; {}", m, what, cap,
                                          "use `sample` to study larger instances"));
  }
  return m;
}

Format table_format(const std::string& text, bool allow_text) {
  const auto f = parse_format(text);
  if (f == Format::Text && !allow_text) throw CliError(kUsage, "--format text is only for convert");
  return f;
}

Json histogram_json(const std::map<std::size_t, std::uint64_t>& h) {
  Json out = Json::array();
  for (const auto& [value, count] : h) out.push_back(Json::array({value, count}));
  return out;
}

// ---- sample ---------------------------------------------------------------

struct ChainStats {
  std::uint64_t samples = 0;
  double sum_energy = 0.0;
  double sum_d0 = 0.0;
  double sum_d1 = 0.0;
  double sum_r = 0.0;
  std::map<std::size_t, std::uint64_t> hist_d0;
  std::map<std::size_t, std::uint64_t> hist_d1;
  std::vector<std::uint64_t> state_counts;
  std::vector<std::uint32_t> d0_trace;
};

// Batch-means standard error of the mean, with about sqrt(n) batches of
// sqrt(n) samples each.
std::optional<double> batch_means_stderr(const std::vector<std::uint32_t>& trace) {
  const std::size_t n = trace.size();
  const auto len = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  if (len < 2) return std::nullopt;
  const std::size_t batches = n / len;
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t j = 0; j < len; ++j) s += trace[b * len + j];
    means[b] = s / static_cast<double>(len);
  }
  double mean = 0.0;
  for (double v : means) mean += v;
  mean /= static_cast<double>(batches);
  double var = 0.0;
  for (double v : means) var += (v - mean) * (v - mean);
  var /= static_cast<double>(batches - 1);
  return std::sqrt(var * static_cast<double>(len) / static_cast<double>(n));
}

Json stats_json(const ChainStats& s) {
  const double n = static_cast<double>(s.samples);
  Json out{{"samples", s.samples}};
  if (s.samples == 0) return out;
  out["mean"] = Json{{"energy", s.sum_energy / n},
                     {"d0", s.sum_d0 / n},
                     {"d1", s.sum_d1 / n},
                     {"r", s.sum_r / n}};
  out["histograms"] = Json{{"d0", histogram_json(s.hist_d0)}, {"d1", histogram_json(s.hist_d1)}};
  return out;
}

}  // namespace

ExitCode cmd_sample(const SampleOptions& o, OutputTarget& target, std::ostream& err) {
  const auto n = parse_count("--n", o.n);
  if (n < 2) throw CliError(kValidation, "--n must be at least 2 (paths of length m = n - 1 >= 1)");
  const std::size_t m = n - 1;
  const auto params = resolve(o.params, true);
  const RunConfig rc{parse_count("--steps", o.steps), parse_count("--burn-in", o.burn_in),
                     parse_count("--thin", o.thin)};
  if (rc.thin == 0) throw CliError(kValidation, "--thin must be at least 1");
  if (rc.burn_in > rc.total_steps) throw CliError(kValidation, "--burn-in exceeds --steps");
  if (o.chains == 0) throw CliError(kValidation, "--chains must be at least 1");
  if (o.chains > 1 && !target.has_dir()) {
    throw CliError(kUsage, fmt::format("--chains > 1 writes per-chain files and needs --out or ${}",
                                       kOutputDirEnv));
  }
  const auto format = table_format(o.format, false);
  std::optional<TwoMotzkinPath> init;
  if (!o.init.empty()) {
    init = TwoMotzkinPath::parse(o.init);
    if (init->size() != m) {
      throw CliError(kValidation, fmt::format("--init has length {}, expected m = {}", init->size(), m));
    }
  }

  std::optional<StateIndex> index;
  if (m <= kExactCap) index.emplace(m);

  std::vector<ChainStats> stats(o.chains);
  std::vector<std::ostream*> streams;
  for (unsigned c = 0; c < o.chains; ++c) {
    const auto name = o.chains == 1 ? fmt::format("samples.{}", extension(format))
                                    : fmt::format("samples-{}.{}", c, extension(format));
    streams.push_back(&target.open(name));
  }

  auto work = [&](unsigned c) {
    auto& s = stats[c];
    if (index) s.state_counts.assign(index->size(), 0);
    Chain chain(ChainConfig{m, params.energy, o.seed, c, init});
    TableWriter table(*streams[c], format, {"step", "path", "energy", "d0", "d1", "r"});
    run(chain, rc, [&](const Sample& x) {
      table.row({x.step, x.path.str(), x.energy, static_cast<std::uint64_t>(x.profile.d0),
                 static_cast<std::uint64_t>(x.profile.d1), static_cast<std::uint64_t>(x.profile.r)});
      ++s.samples;
      s.sum_energy += x.energy;
      s.sum_d0 += static_cast<double>(x.profile.d0);
      s.sum_d1 += static_cast<double>(x.profile.d1);
      s.sum_r += static_cast<double>(x.profile.r);
      ++s.hist_d0[x.profile.d0];
      ++s.hist_d1[x.profile.d1];
      if (index) ++s.state_counts[index->at(x.path)];
      s.d0_trace.push_back(static_cast<std::uint32_t>(x.profile.d0));
    });
    table.finish();
  };

  if (o.chains == 1) {
    work(0);
  } else {
    std::vector<std::exception_ptr> errors(o.chains);
    std::vector<std::thread> threads;
    for (unsigned c = 0; c < o.chains; ++c) {
      threads.emplace_back([&, c] {
        try {
          work(c);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  ChainStats pooled;
  if (index) pooled.state_counts.assign(index->size(), 0);
  for (const auto& s : stats) {
    pooled.samples += s.samples;
    pooled.sum_energy += s.sum_energy;
    pooled.sum_d0 += s.sum_d0;
    pooled.sum_d1 += s.sum_d1;
    pooled.sum_r += s.sum_r;
    for (const auto& [k, v] : s.hist_d0) pooled.hist_d0[k] += v;
    for (const auto& [k, v] : s.hist_d1) pooled.hist_d1[k] += v;
    for (std::size_t i = 0; i < s.state_counts.size(); ++i) pooled.state_counts[i] += s.state_counts[i];
  }

  Json summary{{"m", m},
               {"n", n},
               {"params", params_json(params)},
               {"steps", rc.total_steps},
               {"burn_in", rc.burn_in},
               {"thin", rc.thin},
               {"seed", o.seed},
               {"chains", o.chains}};
  summary.update(stats_json(pooled));

  if (index && pooled.samples > 0) {
    const auto gibbs = gibbs_distribution(*index, params.energy);
    std::vector<double> empirical(index->size());
    double exact_d0 = 0.0;
    for (std::size_t i = 0; i < index->size(); ++i) {
      empirical[i] = static_cast<double>(pooled.state_counts[i]) / static_cast<double>(pooled.samples);
      exact_d0 += gibbs.pi[i] * static_cast<double>(degree_profile(index->path(i)).d0);
    }
    Json exact{{"states", index->size()},
               {"tv", tv_distance(empirical, gibbs.pi)},
               {"mean_d0", exact_d0}};
    // Pooled standard error from independent chains.
    double var = 0.0;
    bool have_se = true;
    for (const auto& s : stats) {
      const auto se = batch_means_stderr(s.d0_trace);
      if (!se) {
        have_se = false;
        break;
      }
      const double w = static_cast<double>(s.samples) / static_cast<double>(pooled.samples);
      var += w * w * *se * *se;
    }
    if (have_se) {
      const double se = std::sqrt(var);
      const double mean = pooled.sum_d0 / static_cast<double>(pooled.samples);
      exact["mean_d0_stderr"] = se;
      exact["mean_d0_z"] = se > 0 ? (mean - exact_d0) / se : 0.0;
    }
    summary["exact"] = exact;
  }
  if (o.chains > 1) {
    Json per = Json::array();
    for (const auto& s : stats) per.push_back(stats_json(s));
    summary["per_chain"] = per;
  }
  write_json(target.has_dir() ? target.open("summary.json") : err, summary);
  return kOk;
}

// ---- convert --------------------------------------------------------------

ExitCode cmd_convert(const ConvertOptions& o, OutputTarget& target, std::istream& in,
                     std::ostream& err) {
  if (o.to != "auto" && o.to != "tree" && o.to != "path") {
    throw CliError(kUsage, "--to must be auto, tree or path");
  }
  const auto format = parse_format(o.format);
  if (o.adjacency && (format == Format::Text || format == Format::Csv)) {
    throw CliError(kUsage, "--adjacency needs --format json or jsonl");
  }

  std::vector<std::string> lines = o.items;
  if (lines.empty()) {
    std::ifstream file;
    std::istream* src = &in;
    if (!o.input.empty() && o.input != "-") {
      file.open(o.input);
      if (!file) throw CliError(kValidation, fmt::format("cannot read '{}'", o.input));
      src = &file;
    }
    std::string line;
    while (std::getline(*src, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
  } else if (!o.input.empty()) {
    throw CliError(kUsage, "give either positional inputs or --input, not both");
  }

  auto& out = target.open(fmt::format("converted.{}", extension(format)));
  std::vector<std::string> columns{"line", "input", "output"};
  if (o.profile) columns.insert(columns.end(), {"d0", "d1", "r"});
  if (o.adjacency) columns.push_back("adjacency");
  std::optional<TableWriter> table;
  if (format != Format::Text) table.emplace(out, format, columns);

  std::size_t failures = 0;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const auto& line = lines[l];
    const bool to_tree =
        o.to == "tree" || (o.to == "auto" && line.find_first_of("()") == std::string::npos);
    try {
      std::string result;
      DegreeProfile profile;
      PlaneTree tree;
      if (to_tree) {
        const auto x = TwoMotzkinPath::parse(line);
        tree = decode(x);
        result = tree_to_text(tree);
        profile = degree_profile(x);
      } else {
        tree = text_to_tree(line);
        result = encode(tree).str();
        profile = degree_profile(tree);
      }
      if (!table) {
        out << result;
        if (o.profile) out << '\t' << profile.d0 << '\t' << profile.d1 << '\t' << profile.r;
        out << '\n';
        continue;
      }
      std::vector<Cell> row{static_cast<std::uint64_t>(l + 1), line, result};
      if (o.profile) {
        row.insert(row.end(), {static_cast<std::uint64_t>(profile.d0),
                               static_cast<std::uint64_t>(profile.d1),
                               static_cast<std::uint64_t>(profile.r)});
      }
      if (o.adjacency) row.emplace_back(Json(tree.adjacency()));
      table->row(row);
    } catch (const Error& e) {
      ++failures;
      err << fmt::format("line {}: {}\n", l + 1, e.what());
    }
  }
  if (table) table->finish();
  if (failures) {
    err << fmt::format("{} of {} lines failed\n", failures, lines.size());
    return kValidation;
  }
  return kOk;
}

// ---- exact ----------------------------------------------------------------

ExitCode cmd_exact(const ExactOptions& o, OutputTarget& target, std::ostream& /*err*/) {
  const std::size_t m = parse_m("--m", o.m, kExactCap, "exhaustive");
  const auto params = resolve(o.params, false);
  const auto format = table_format(o.format, false);
  const auto model = build_transition_model(m, params.energy);
  const StateIndex index(model.states);
  Json doc{{"m", m}, {"params", params_json(params)}, {"state_order_hash", hex64(index.order_hash())}};

  if (o.what == "pi") {
    const auto balance = check_balance(model);
    auto& out = target.open(fmt::format("pi.{}", extension(format)));
    if (format == Format::Json) {
      Json states = Json::array();
      Json pi = Json::array();
      for (std::size_t i = 0; i < model.size(); ++i) {
        states.push_back(model.states[i].str());
        pi.push_back(model.pi[static_cast<Eigen::Index>(i)]);
      }
      doc["states"] = states;
      doc["pi"] = pi;
      doc["log_z"] = model.log_z;
      doc["residual"] = balance.stationarity_residual;
      doc["balance_violation"] = balance.max_violation;
      write_json(out, doc);
    } else {
      TableWriter table(out, format, {"index", "path", "pi"});
      for (std::size_t i = 0; i < model.size(); ++i) {
        table.row({static_cast<std::uint64_t>(i), model.states[i].str(),
                   model.pi[static_cast<Eigen::Index>(i)]});
      }
      table.finish();
    }
    return kOk;
  }

  if (o.what == "gap") {
    SpectralOptions opt;
    if (o.method == "auto") {
      opt.method = SpectralMethod::Auto;
    } else if (o.method == "dense") {
      opt.method = SpectralMethod::Dense;
    } else if (o.method == "power") {
      opt.method = SpectralMethod::PowerIteration;
    } else {
      throw CliError(kUsage, "--method must be auto, dense or power");
    }
    if (opt.method == SpectralMethod::Dense && model.size() > kDenseStateLimit) {
      throw CliError(kCapacity, fmt::format("{} states exceed the dense limit of {}; use --method power",
                                            model.size(), kDenseStateLimit));
    }
    if (!(o.tolerance > 0)) throw CliError(kValidation, "--tol must be positive");
    opt.tolerance = o.tolerance;
    opt.seed = o.seed;
    if (model.size() < 2) throw CliError(kValidation, "the gap needs at least two states");
    const auto r = spectral_gap(model, opt);
    doc["states"] = model.size();
    doc["gap"] = r.gap;
    doc["lambda1"] = r.lambda1;
    doc["relaxation_time"] = r.relaxation_time;
    doc["method"] = to_string(r.method);
    doc["residual"] = r.residual;
    doc["iterations"] = r.iterations;
    auto& out = target.open(fmt::format("gap.{}", extension(format)));
    if (format == Format::Json) {
      write_json(out, doc);
    } else {
      TableWriter table(out, format, {"m", "states", "gap", "lambda1", "relaxation_time", "method",
                                      "residual", "iterations"});
      table.row({static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(model.size()), r.gap,
                 r.lambda1, r.relaxation_time, std::string(to_string(r.method)), r.residual,
                 static_cast<std::uint64_t>(r.iterations)});
      table.finish();
    }
    return kOk;
  }

  // tv-curve
  const auto from = o.from.empty() ? TwoMotzkinPath::all_level(m) : TwoMotzkinPath::parse(o.from);
  if (from.size() != m) {
    throw CliError(kValidation, fmt::format("--from has length {}, expected m = {}", from.size(), m));
  }
  const auto horizon = parse_count("--horizon", o.horizon);
  const auto curve = tv_decay_curve(model, index.at(from), horizon);
  auto& out = target.open(fmt::format("tv-curve.{}", extension(format)));
  if (format == Format::Json) {
    Json tv = Json::array();
    for (const auto& [t, d] : curve) tv.push_back(d);
    doc["from"] = from.str();
    doc["horizon"] = horizon;
    doc["tv"] = tv;
    write_json(out, doc);
  } else {
    TableWriter table(out, format, {"t", "tv"});
    for (const auto& [t, d] : curve) table.row({static_cast<std::uint64_t>(t), d});
    table.finish();
  }
  return kOk;
}

// ---- decompose ------------------------------------------------------------

ExitCode cmd_decompose(const DecomposeOptions& o, OutputTarget& target, std::ostream& err) {
  const std::size_t m = parse_m("--m", o.m, kDenseCap, "dense decomposition");
  PartitionLevel level;
  try {
    level = parse_partition_level(o.level);
  } catch (const Error&) {
    throw CliError(kUsage, "--level must be k, kq or kqs");
  }
  const auto params = resolve(o.params, false);
  const auto format = table_format(o.format, false);
  const auto model = build_transition_model(m, params.energy);
  const auto balance = check_balance(model);

  const auto part = partition_states(model, level);
  const auto bound = check_decomposition_bound(model, part.blocks);
  const auto projection = projection_chain(model, part.blocks);

  // Block masses by number of U steps against the closed form.
  const auto closed = projected_k_distribution(m, params.energy);
  std::vector<double> masses(closed.size(), 0.0);
  for (std::size_t i = 0; i < model.size(); ++i) {
    masses[symbol_counts(model.states[i]).u] += model.pi[static_cast<Eigen::Index>(i)];
  }
  double closed_dev = 0.0;
  for (std::size_t k = 0; k < closed.size(); ++k) {
    closed_dev = std::max(closed_dev, std::abs(closed[k] - masses[k]));
  }
  const bool log_concave = is_log_concave(closed);

  // Every (k, q) cell: constant energy, skeleton block sizes and uniformity.
  const auto cells = partition_states(model, PartitionLevel::KQ);
  double spread = 0.0;
  bool sizes_ok = true;
  bool uniform_ok = true;
  double max_uniform_dev = 0.0;
  double max_transition_dev = 0.0;
  Json table_kqs = Json::array();
  for (const auto& label : cells.labels) {
    const auto rep = check_skeleton_projection(model, label.k, label.q);
    spread = std::max(spread, rep.energy_spread);
    sizes_ok = sizes_ok && rep.sizes_match;
    uniform_ok = uniform_ok && rep.uniform();
    max_uniform_dev = std::max(max_uniform_dev, rep.max_uniform_deviation);
    max_transition_dev = std::max(max_transition_dev, rep.max_transition_deviation);
    if (level == PartitionLevel::KQS) {
      Json skel = Json::array();
      for (std::size_t s = 0; s < rep.skeletons.size(); ++s) {
        skel.push_back(Json{{"s", rep.skeletons[s].str()},
                            {"size", rep.block_sizes[s]},
                            {"pi", rep.projected_pi[s]}});
      }
      Json trans = Json::array();
      for (const auto& t : rep.transitions) {
        trans.push_back(Json{{"from", t.from.str()}, {"to", t.to.str()}, {"probability", t.probability}});
      }
      table_kqs.push_back(Json{{"k", rep.k},
                               {"q", label.q_str()},
                               {"expected_size", rep.expected_block_size},
                               {"sizes_match", rep.sizes_match},
                               {"energy_spread", rep.energy_spread},
                               {"skeletons", skel},
                               {"max_uniform_deviation", rep.max_uniform_deviation},
                               {"transitions", trans},
                               {"reference_transition", rep.reference_transition},
                               {"max_transition_deviation", rep.max_transition_deviation}});
    }
  }
  const bool energy_ok = spread <= 1e-12;

  Json checks{{"balance", balance.ok()},
              {"projected_k_closed_form", closed_dev <= 1e-12},
              {"projected_k_log_concave", log_concave},
              {"energy_constant_on_kq", energy_ok},
              {"skeleton_block_sizes", sizes_ok},
              {"skeleton_projection_uniform", uniform_ok},
              {"gap_bound", bound.holds}};
  bool all_pass = true;
  for (const auto& [name, ok] : checks.items()) all_pass = all_pass && ok.get<bool>();

  auto& out = target.open(fmt::format("decompose.{}", extension(format)));
  if (format == Format::Json) {
    Json blocks = Json::array();
    for (std::size_t b = 0; b < part.blocks.size(); ++b) {
      const auto& label = part.labels[b];
      Json entry{{"k", label.k}};
      if (level != PartitionLevel::K) entry["q"] = label.q_str();
      if (level == PartitionLevel::KQS) entry["s"] = label.s.str();
      entry["size"] = part.blocks[b].size();
      entry["mass"] = projection.weights[static_cast<Eigen::Index>(b)];
      entry["gap"] = bound.restriction_gaps[b];
      blocks.push_back(entry);
    }
    Json doc{{"m", m},
             {"params", params_json(params)},
             {"level", to_string(level)},
             {"states", model.size()},
             {"blocks", blocks},
             {"projected_k",
              Json{{"closed_form", closed},
                   {"block_masses", masses},
                   {"max_deviation", closed_dev},
                   {"log_concave", log_concave}}},
             {"energy_spread_on_kq", spread},
             {"skeleton_projection",
              Json{{"cells", cells.blocks.size()},
                   {"sizes_match", sizes_ok},
                   {"max_uniform_deviation", max_uniform_dev},
                   {"reference_transition", 1.0 / (4.0 * static_cast<double>(m * m))},
                   {"max_transition_deviation", max_transition_dev}}},
             {"bound",
              Json{{"gap", bound.gap},
                   {"projection_gap", bound.projection_gap},
                   {"min_restriction_gap", bound.min_restriction_gap},
                   {"bound", bound.bound},
                   {"holds", bound.holds}}},
             {"checks", checks},
             {"all_pass", all_pass}};
    if (level == PartitionLevel::KQS) doc["kqs_table"] = table_kqs;
    write_json(out, doc);
  } else {
    TableWriter table(out, format, {"k", "q", "s", "size", "mass", "gap"});
    for (std::size_t b = 0; b < part.blocks.size(); ++b) {
      const auto& label = part.labels[b];
      table.row({static_cast<std::uint64_t>(label.k),
                 level == PartitionLevel::K ? std::string() : label.q_str(),
                 level == PartitionLevel::KQS ? label.s.str() : std::string(),
                 static_cast<std::uint64_t>(part.blocks[b].size()),
                 projection.weights[static_cast<Eigen::Index>(b)], bound.restriction_gaps[b]});
    }
    table.finish();
  }
  if (!all_pass) {
    for (const auto& [name, ok] : checks.items()) {
      if (!ok.get<bool>()) err << "check failed: " << name << '\n';
    }
    return kCheckFailed;
  }
  return kOk;
}

}  // namespace ptmc::cli

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "ptmc/error.hpp"

namespace ptmc::cli {

namespace {

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::CapExceeded:
      return kCapacity;
    case ErrorCode::InternalInvariantViolation:
    case ErrorCode::BalanceViolation:
    case ErrorCode::NoConvergence:
      return kCheckFailed;
    default:
      return kValidation;
  }
}

void add_param_flags(CLI::App* app, ParamFlags& p) {
  app->add_option("--alpha", p.alpha, "Energy weight per leaf (d0)");
  app->add_option("--beta", p.beta, "Energy weight per unary non-root node (d1)");
  app->add_option("--params", p.params,
                  "Built-in parameter set (turner89-cg, turner89-gc, turner99-cg, turner99-gc, "
                  "turner04-cg, turner04-gc) or key=value file");
}

Json resolved_flags(const CLI::App* app) {
  Json flags = Json::object();
  for (const auto* opt : app->get_options()) {
    const auto name = opt->get_name();
    if (name == "--help" || name.empty()) continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (opt->get_expected_max() > 1 || results.size() > 1) {
        flags[name] = results;
      } else if (opt->get_type_size() == 0) {
        flags[name] = true;
      } else {
        flags[name] = results.empty() ? std::string() : results.front();
      }
    } else if (opt->get_type_size() == 0) {
      flags[name] = false;
    } else {
      flags[name] = opt->get_default_str();
    }
  }
  return flags;
}

int replay(const std::string& manifest_path, const std::string& out_override, std::ostream& out,
           std::ostream& err) {
  std::ifstream in(manifest_path);
  if (!in) throw CliError(kValidation, fmt::format("cannot read manifest '{}'", manifest_path));
  Json manifest;
  try {
    manifest = Json::parse(in);
  } catch (const std::exception& e) {
    throw CliError(kValidation, fmt::format("manifest is not valid JSON: {}", e.what()));
  }
  if (!manifest.contains("argv") || !manifest["argv"].is_array()) {
    throw CliError(kValidation, "manifest has no argv array");
  }
  std::vector<std::string> argv;
  const auto& recorded = manifest["argv"];
  for (std::size_t i = 0; i < recorded.size(); ++i) {
    const auto arg = recorded[i].get<std::string>();
    if (arg == "--out") {
      ++i;
      continue;
    }
    if (arg.rfind("--out=", 0) == 0) continue;
    argv.push_back(arg);
  }
  if (argv.empty() || argv.front() == "replay") {
    throw CliError(kValidation, "manifest does not record a replayable command");
  }
  const auto dir = out_override.empty()
                       ? std::filesystem::absolute(manifest_path).parent_path().string()
                       : out_override;
  argv.push_back("--out");
  argv.push_back(dir);
  return run(argv, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gibbs sampling of plane trees through 2-Motzkin paths", "ptmc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::string out_dir;

  SampleOptions so;
  auto* sample = app.add_subcommand("sample", "Run the chain and write samples plus a summary");
  sample->add_option("--n", so.n, "Tree edges; paths have length m = n - 1")->required();
  add_param_flags(sample, so.params);
  sample->add_option("--steps", so.steps, "Total steps (1e6 style accepted)")->capture_default_str();
  sample->add_option("--burn-in", so.burn_in, "Steps before the first emitted sample")
      ->capture_default_str();
  sample->add_option("--thin", so.thin, "Emit every thin-th state")->capture_default_str();
  sample->add_option("--init", so.init, "Initial path (default all H)");
  sample->add_option("--seed", so.seed, "RNG seed")->capture_default_str();
  sample->add_option("--chains", so.chains, "Independent chains run in parallel")
      ->capture_default_str();
  sample->add_option("--format", so.format, "csv, jsonl or json")
      ->check(CLI::IsMember({"csv", "jsonl", "json"}))
      ->capture_default_str();
  sample->add_option("--out", out_dir, "Output directory");

  ConvertOptions co;
  std::uint64_t convert_seed = 0;
  auto* convert = app.add_subcommand("convert", "Translate paths to parenthesis trees and back");
  convert->add_option("items", co.items, "Paths or trees (default: read lines from --input)");
  convert->add_option("--input", co.input, "Input file, one item per line ('-' for stdin)");
  convert->add_option("--to", co.to, "tree, path or auto (by input shape)")
      ->check(CLI::IsMember({"auto", "tree", "path"}))
      ->capture_default_str();
  convert->add_flag("--profile", co.profile, "Report d0, d1 and r per line");
  convert->add_flag("--adjacency", co.adjacency, "Include child lists (json, jsonl)");
  convert->add_option("--format", co.format, "text, csv, jsonl or json")
      ->check(CLI::IsMember({"text", "csv", "jsonl", "json"}))
      ->capture_default_str();
  convert->add_option("--seed", convert_seed, "Accepted for uniformity; unused")
      ->capture_default_str();
  convert->add_option("--out", out_dir, "Output directory");

  ExactOptions eo;
  auto* exact = app.add_subcommand("exact", "Exhaustive small-m analysis");
  exact->require_subcommand(1);
  std::vector<CLI::App*> exact_cmds;
  for (const char* what : {"pi", "gap", "tv-curve"}) {
    auto* cmd = exact->add_subcommand(what, std::string("exact ") + what);
    cmd->add_option("--m", eo.m, "Path length")->required();
    add_param_flags(cmd, eo.params);
    cmd->add_option("--seed", eo.seed, "Seed for the iterative eigensolver start")
        ->capture_default_str();
    cmd->add_option("--format", eo.format, "json, csv or jsonl")
        ->check(CLI::IsMember({"json", "csv", "jsonl"}))
        ->capture_default_str();
    cmd->add_option("--out", out_dir, "Output directory");
    if (std::string(what) == "gap") {
      cmd->add_option("--method", eo.method, "auto, dense or power")
          ->check(CLI::IsMember({"auto", "dense", "power"}))
          ->capture_default_str();
      cmd->add_option("--tol", eo.tolerance, "Eigen-residual tolerance")->capture_default_str();
    }
    if (std::string(what) == "tv-curve") {
      cmd->add_option("--from", eo.from, "Start path (default all H)");
      cmd->add_option("--horizon", eo.horizon, "Last time step")->capture_default_str();
    }
    exact_cmds.push_back(cmd);
  }

  DecomposeOptions dco;
  auto* decompose = app.add_subcommand("decompose", "Decomposition checks");
  decompose->require_subcommand(1);
  auto* report = decompose->add_subcommand("report", "Check the block structure and gap bound");
  report->add_option("--m", dco.m, "Path length")->required();
  add_param_flags(report, dco.params);
  report->add_option("--level", dco.level, "Partition: k, kq or kqs")
      ->check(CLI::IsMember({"k", "kq", "kqs"}))
      ->capture_default_str();
  report->add_option("--seed", dco.seed, "Accepted for uniformity; unused")->capture_default_str();
  report->add_option("--format", dco.format, "json, csv or jsonl")
      ->check(CLI::IsMember({"json", "csv", "jsonl"}))
      ->capture_default_str();
  report->add_option("--out", out_dir, "Output directory");

  std::string manifest_path;
  std::string replay_out;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay_cmd->add_option("manifest", manifest_path, "manifest.json")->required();
  replay_cmd->add_option("--out", replay_out, "Output directory (default: the manifest's)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (replay_cmd->parsed()) return replay(manifest_path, replay_out, out, err);

    CLI::App* leaf = sample->parsed() ? sample : convert->parsed() ? convert : report;
    std::string name = leaf->get_name();
    for (auto* cmd : exact_cmds) {
      if (cmd->parsed()) {
        leaf = cmd;
        eo.what = cmd->get_name();
        name = "exact " + eo.what;
      }
    }
    if (leaf == report) name = "decompose report";

    if (out_dir.empty()) {
      if (const char* env = std::getenv(kOutputDirEnv); env && *env) out_dir = env;
    }
    std::optional<std::filesystem::path> dir;
    if (!out_dir.empty()) dir = out_dir;
    OutputTarget target(dir, out);

    const auto started = utc_timestamp();
    ExitCode code = kOk;
    if (leaf == sample) {
      code = cmd_sample(so, target, err);
    } else if (leaf == convert) {
      code = cmd_convert(co, target, std::cin, err);
    } else if (leaf == report) {
      code = cmd_decompose(dco, target, err);
    } else {
      code = cmd_exact(eo, target, err);
    }
    target.close_all();

    if (target.has_dir()) {
      std::uint64_t seed = so.seed;
      if (leaf == convert) seed = convert_seed;
      if (leaf == report) seed = dco.seed;
      if (name.rfind("exact", 0) == 0) seed = eo.seed;
      const Json manifest{{"subcommand", name},
                          {"argv", args},
                          {"flags", resolved_flags(leaf)},
                          {"output_dir", std::filesystem::absolute(*target.dir()).string()},
                          {"seed", seed},
                          {"version", kVersion},
                          {"outputs", target.files()},
                          {"exit_code", static_cast<int>(code)},
                          {"started_at", started},
                          {"finished_at", utc_timestamp()}};
      std::ofstream mf(*target.dir() / "manifest.json", std::ios::binary | std::ios::trunc);
      write_json(mf, manifest);
      if (!mf) throw CliError(kValidation, "cannot write manifest.json");
    }
    return code;
  } catch (const CliError& e) {
    err << "error: " << e.what() << '\n';
    return e.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kCheckFailed;
  }
}

}  // namespace ptmc::cli

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "internal.hpp"

namespace ptmc::cli {

struct SampleOptions {
  std::string n;
  ParamFlags params;
  std::string steps = "0";
  std::string burn_in = "0";
  std::string thin = "1";
  std::string init;
  std::uint64_t seed = 0;
  unsigned chains = 1;
  std::string format = "csv";
};

struct ConvertOptions {
  std::vector<std::string> items;
  std::string input;
  std::string to = "auto";
  bool profile = false;
  bool adjacency = false;
  std::string format = "text";
};

struct ExactOptions {
  std::string what;  // pi, gap or tv-curve
  std::string m;
  ParamFlags params;
  std::uint64_t seed = 0;
  std::string method = "auto";
  double tolerance = 1e-10;
  std::string from;
  std::string horizon = "1000";
  std::string format = "json";
};

struct DecomposeOptions {
  std::string m;
  ParamFlags params;
  std::string level = "k";
  std::uint64_t seed = 0;
  std::string format = "json";
};

/// Each command writes its data files through `target`, diagnostics to
/// `err`, and returns the exit code.
ExitCode cmd_sample(const SampleOptions& o, OutputTarget& target, std::ostream& err);
ExitCode cmd_convert(const ConvertOptions& o, OutputTarget& target, std::istream& in,
                     std::ostream& err);
ExitCode cmd_exact(const ExactOptions& o, OutputTarget& target, std::ostream& err);
ExitCode cmd_decompose(const DecomposeOptions& o, OutputTarget& target, std::ostream& err);

}  // namespace ptmc::cli

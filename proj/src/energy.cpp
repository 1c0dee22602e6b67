#include "ptmc/energy.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ptmc {

EnergyParams derive_params(const NNTMParams& p) {
  EnergyParams e;
  e.alpha = p.f - p.a - 4 * p.b - p.c - p.g;
  e.beta = p.i - p.a - 8 * p.b - 2 * p.c - 2 * p.g;
  e.gamma = -4 * p.b - p.c;
  e.delta = p.a + 8 * p.b + 2 * p.c + p.h + 2 * p.g;
  return e;
}

const std::array<BuiltinParamSet, 6>& builtin_param_sets() {
  // Multiloop, helix, hairpin, interior-loop and dangle values for the
  // sequences A^4 (Y^5 Z A^4 Y Z^5 A^4)^n, from the Turner 1989, 1999 and 2004
  // nearest-neighbor parameter releases.
  //                                 a    b    c      h     f    i     g      alpha beta gamma
  static const std::array<BuiltinParamSet, 6> kSets = {{
      {"turner89-cg", {4.6, 0.4, 0.1, -10.9, 3.8, 3.0, -1.6}, -0.9, -1.8, -1.7},
      {"turner89-gc", {4.6, 0.4, 0.1, -16.5, 3.5, 3.0, -1.9}, -0.9, -1.2, -1.7},
      {"turner99-cg", {3.4, 0.0, 0.4, -12.9, 4.5, 2.3, -1.6}, 2.3, 1.3, -0.4},
      {"turner99-gc", {3.4, 0.0, 0.4, -16.9, 4.1, 2.3, -1.9}, 2.2, 1.9, -0.4},
      {"turner04-cg", {9.3, 0.0, -0.9, -12.9, 4.5, 2.3, -1.1}, -2.8, -3.0, 0.9},
      {"turner04-gc", {9.3, 0.0, -0.9, -16.9, 4.1, 2.3, -1.5}, -2.8, -2.2, 0.9},
  }};
  return kSets;
}

NNTMParams builtin_params(std::string_view name) {
  for (const auto& set : builtin_param_sets()) {
    if (set.name == name) return set.nntm;
  }
  throw Error(ErrorCode::UnknownParameterSet,
              "no builtin parameter set named '" + std::string(name) + "'");
}

EnergyParams parse_params_text(std::string_view text) {
  std::map<std::string, double> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParamsFileInvalid,
                  "line " + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::ParamsFileInvalid,
                  "line " + std::to_string(lineno) + ": bad number '" + value + "'");
    }
    if (!kv.emplace(key, v).second) {
      throw Error(ErrorCode::ParamsFileInvalid, "duplicate key '" + key + "'");
    }
  }

  static const char* const kNNTM[] = {"a", "b", "c", "h", "f", "i", "g"};
  static const char* const kDirect[] = {"alpha", "beta", "gamma", "delta"};
  bool any_nntm = false;
  bool any_direct = false;
  for (const auto& [key, _] : kv) {
    bool known = false;
    for (const char* k : kNNTM) {
      if (key == k) known = any_nntm = true;
    }
    for (const char* k : kDirect) {
      if (key == k) known = any_direct = true;
    }
    if (!known) throw Error(ErrorCode::ParamsFileInvalid, "unknown key '" + key + "'");
  }
  if (any_nntm == any_direct) {
    throw Error(ErrorCode::ParamsFileInvalid,
                "give either all of a,b,c,h,f,i,g or alpha,beta[,gamma,delta]");
  }
  if (any_nntm) {
    for (const char* k : kNNTM) {
      if (!kv.count(k)) {
        throw Error(ErrorCode::ParamsFileInvalid, std::string("missing key '") + k + "'");
      }
    }
    return derive_params({kv["a"], kv["b"], kv["c"], kv["h"], kv["f"], kv["i"], kv["g"]});
  }
  if (!kv.count("alpha") || !kv.count("beta")) {
    throw Error(ErrorCode::ParamsFileInvalid, "alpha and beta are required");
  }
  EnergyParams e;
  e.alpha = kv["alpha"];
  e.beta = kv["beta"];
  if (kv.count("gamma")) e.gamma = kv["gamma"];
  if (kv.count("delta")) e.delta = kv["delta"];
  return e;
}

EnergyParams load_params_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw Error(ErrorCode::ParamsFileInvalid, "cannot open '" + file.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_params_text(buf.str());
}

EnergyParams resolve_params(const std::string& name_or_file) {
  for (const auto& set : builtin_param_sets()) {
    if (set.name == name_or_file) return derive_params(set.nntm);
  }
  if (std::filesystem::is_regular_file(name_or_file)) {
    return load_params_file(name_or_file);
  }
  throw Error(ErrorCode::UnknownParameterSet,
              "'" + name_or_file + "' is neither a builtin set nor a readable file");
}

double tree_energy(const PlaneTree& t, const EnergyParams& e, bool include_root) {
  const auto p = degree_profile(t);
  double energy = e.alpha * static_cast<double>(p.d0) + e.beta * static_cast<double>(p.d1);
  if (include_root) energy += e.gamma * static_cast<double>(p.r);
  return energy;
}

double path_energy(const SymbolCounts& c, const EnergyParams& e) {
  return e.alpha * static_cast<double>(c.u + c.h + 1) + e.beta * static_cast<double>(c.i);
}

double path_energy(const TwoMotzkinPath& x, const EnergyParams& e) {
  return path_energy(symbol_counts(x), e);
}

double gibbs_log_weight(const TwoMotzkinPath& x, const EnergyParams& e) {
  return -path_energy(x, e);
}

}  // namespace ptmc

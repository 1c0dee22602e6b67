#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>

#include "ptmc/paths.hpp"
#include "ptmc/tree.hpp"

namespace ptmc {

/// Coefficients of E = alpha*d0 + beta*d1 + gamma*r + delta*n (kcal/mol).
/// Only alpha and beta enter the sampled weights; delta*n is constant for a
/// fixed size.
struct EnergyParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

/// Multiloop constants (a, b, c) plus helix, hairpin, interior-loop and
/// dangle contributions (h, f, i, g).
struct NNTMParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double h = 0.0;
  double f = 0.0;
  double i = 0.0;
  double g = 0.0;
};

EnergyParams derive_params(const NNTMParams& p);

struct BuiltinParamSet {
  std::string_view name;
  NNTMParams nntm;
  // Published (alpha, beta, gamma), rounded to one decimal.
  double alpha, beta, gamma;
};

/// The six combinatorial-sequence rows: Turner 1989/1999/2004 parameters for
/// (Y, Z) = (C, G) and (G, C).
const std::array<BuiltinParamSet, 6>& builtin_param_sets();

/// Throws UnknownParameterSet.
NNTMParams builtin_params(std::string_view name);

/// Reads key=value lines. Accepts either the seven NNTM keys a,b,c,h,f,i,g or
/// alpha,beta (with optional gamma, delta). '#' starts a comment.
EnergyParams parse_params_text(std::string_view text);
EnergyParams load_params_file(const std::filesystem::path& file);

/// A builtin set name or a path to a key=value file.
EnergyParams resolve_params(const std::string& name_or_file);

double tree_energy(const PlaneTree& t, const EnergyParams& e, bool include_root);
double path_energy(const TwoMotzkinPath& x, const EnergyParams& e);
double path_energy(const SymbolCounts& c, const EnergyParams& e);

/// Unnormalized log Gibbs weight, -E(x).
double gibbs_log_weight(const TwoMotzkinPath& x, const EnergyParams& e);

}  // namespace ptmc

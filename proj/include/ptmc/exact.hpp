#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "ptmc/energy.hpp"
#include "ptmc/paths.hpp"

namespace ptmc {

/// Largest m handled by exhaustive (sparse) machinery: C_11 = 58786 states.
inline constexpr std::size_t kExactCap = 10;
/// Largest m for dense eigensolves by default: C_8 = 1430 states.
inline constexpr std::size_t kDenseCap = 7;
/// Dense eigensolves are allowed up to this many states.
inline constexpr std::size_t kDenseStateLimit = 5000;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Dense indexing of the paths of length m, in enumeration order.
class StateIndex {
 public:
  explicit StateIndex(std::size_t m, std::size_t cap = kExactCap);
  /// Arbitrary sorted set of equal-length paths.
  explicit StateIndex(std::vector<TwoMotzkinPath> sorted_states);

  std::size_t size() const { return states_.size(); }
  const TwoMotzkinPath& path(std::size_t i) const { return states_[i]; }
  const std::vector<TwoMotzkinPath>& paths() const { return states_; }
  std::optional<std::size_t> find(const TwoMotzkinPath& x) const;
  std::size_t at(const TwoMotzkinPath& x) const;

  /// FNV-1a over the newline-terminated state words; identifies the order.
  std::uint64_t order_hash() const;

 private:
  std::vector<TwoMotzkinPath> states_;
};

struct GibbsDistribution {
  std::vector<double> pi;
  double log_z = 0.0;
};

/// pi(x) = exp(-E(x) - log Z) over all paths of length m. Throws CapExceeded.
GibbsDistribution gibbs_distribution(std::size_t m, const EnergyParams& e,
                                     std::size_t cap = kExactCap);
GibbsDistribution gibbs_distribution(const StateIndex& index, const EnergyParams& e);

double log_sum_exp(std::span<const double> values);

struct TransitionModel {
  std::size_t m = 0;
  EnergyParams params;
  std::vector<TwoMotzkinPath> states;
  SparseMatrix P;
  Eigen::VectorXd pi;
  double log_z = 0.0;

  std::size_t size() const { return states.size(); }
};

struct BalanceReport {
  /// max over pairs of |pi(x)P(x,y) - pi(y)P(y,x)|
  double max_violation = 0.0;
  /// max over pairs of pi(x)P(x,y)
  double max_flow = 0.0;
  /// || pi^T P - pi^T ||_inf
  double stationarity_residual = 0.0;
  /// max_x |sum_y P(x,y) - 1|
  double row_sum_error = 0.0;
  std::pair<std::size_t, std::size_t> worst_pair{0, 0};

  bool ok(double tol = 1e-12) const {
    return max_violation <= tol * max_flow && stationarity_residual <= tol &&
           row_sum_error <= tol;
  }
};

BalanceReport check_balance(const SparseMatrix& P, const Eigen::VectorXd& pi);
inline BalanceReport check_balance(const TransitionModel& model) {
  return check_balance(model.P, model.pi);
}

/// Assembles P from chain neighbourhoods and pi from the Gibbs weights, then
/// verifies stochasticity, stationarity and detailed balance. Throws
/// CapExceeded, ConfigInvalid (m == 0) or BalanceViolation.
TransitionModel build_transition_model(std::size_t m, const EnergyParams& e,
                                       std::size_t cap = kExactCap);

/// Strong connectivity of the positive-entry graph.
bool strongly_connected(const SparseMatrix& P);

enum class SpectralMethod { Auto, Dense, PowerIteration };
const char* to_string(SpectralMethod method);

struct SpectralOptions {
  SpectralMethod method = SpectralMethod::Auto;
  double tolerance = 1e-10;
  std::size_t max_iterations = 200000;
  /// Width of the iterated block; 1 is plain power iteration.
  std::size_t block_size = 8;
  std::uint64_t seed = 0;
};

struct SpectralReport {
  /// Second-largest eigenvalue modulus.
  double lambda1 = 0.0;
  double gap = 0.0;
  double relaxation_time = 0.0;
  SpectralMethod method = SpectralMethod::Dense;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Gap of a chain reversible with respect to pi, computed on the symmetrized
/// matrix D^{1/2} P D^{-1/2}. Auto picks dense up to kDenseStateLimit states.
/// Throws ConfigInvalid for a single state and NoConvergence when the
/// iteration budget runs out.
SpectralReport spectral_gap(const SparseMatrix& P, const Eigen::VectorXd& pi,
                            const SpectralOptions& options = {});
SpectralReport spectral_gap(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi,
                            const SpectralOptions& options = {});
inline SpectralReport spectral_gap(const TransitionModel& model,
                                   const SpectralOptions& options = {}) {
  return spectral_gap(model.P, model.pi, options);
}

/// Half the L1 distance. Throws LengthMismatch.
double tv_distance(std::span<const double> p, std::span<const double> q);

/// TV(P^t(x0, .), pi) for t = 0..horizon.
std::vector<std::pair<std::size_t, double>> tv_decay_curve(const TransitionModel& model,
                                                           std::size_t x0,
                                                           std::size_t horizon);

}  // namespace ptmc

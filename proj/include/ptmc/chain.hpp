#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ptmc/energy.hpp"
#include "ptmc/paths.hpp"
#include "ptmc/rng.hpp"
#include "ptmc/tree.hpp"

namespace ptmc {

/// Acceptance probabilities of the four symbol rewrites, each already
/// including the factor 1/2 that makes the chain lazy.
struct MoveProbabilities {
  double ud_to_hh = 0.25;
  double hh_to_ud = 0.25;
  double i_to_h = 0.25;
  double h_to_i = 0.25;

  static MoveProbabilities from(const EnergyParams& e);
};

struct ChainConfig {
  std::size_t m = 1;
  EnergyParams params;
  std::uint64_t seed = 0;
  /// Stream id; chains with equal seeds and distinct streams are independent.
  std::uint64_t stream = 0;
  /// Defaults to the all-H path.
  std::optional<TwoMotzkinPath> initial_state;
};

/// The heat-bath chain on 2-Motzkin paths of length m. Each step draws a
/// move class uniformly from four:
///   1. a random adjacent pair; UD <-> HH,
///   2. a random position; H <-> I,
///   3. two independent random positions; swap if both are U/D, rejecting
///      swaps that leave the valid set,
///   4. a random adjacent pair; swap a U/D with a neighbouring H/I.
/// Every proposal is accepted with an extra factor 1/2.
class Chain {
 public:
  /// Throws ConfigInvalid for m == 0 or an initial state of the wrong length.
  explicit Chain(const ChainConfig& config);

  void step();
  void advance(std::uint64_t steps) {
    for (std::uint64_t s = 0; s < steps; ++s) step();
  }

  const TwoMotzkinPath& state() const { return state_; }
  std::uint64_t steps_taken() const { return steps_; }
  std::size_t length() const { return state_.size(); }
  const EnergyParams& params() const { return params_; }

  /// Replaces the current state; the RNG stream continues.
  void reset_state(TwoMotzkinPath x);

 private:
  TwoMotzkinPath state_;
  EnergyParams params_;
  MoveProbabilities probs_;
  Rng rng_;
  std::uint64_t steps_ = 0;
};

/// Exact one-step transition probability. Throws LengthMismatch.
double transition_probability(const TwoMotzkinPath& x, const TwoMotzkinPath& y,
                              const EnergyParams& e);

/// All y != x with P(x, y) > 0, sorted by y.
std::vector<std::pair<TwoMotzkinPath, double>> neighbors(const TwoMotzkinPath& x,
                                                         const EnergyParams& e);

struct RunConfig {
  std::uint64_t total_steps = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t thin = 1;
};

struct Sample {
  std::uint64_t step;
  const TwoMotzkinPath& path;
  double energy;
  DegreeProfile profile;
};

using SampleCollector = std::function<void(const Sample&)>;

/// Runs the chain for total_steps, emitting the state at every step t with
/// t >= burn_in and (t - burn_in) % thin == 0, counting the initial state as
/// t = 0. Throws ConfigInvalid when thin == 0 or burn_in > total_steps.
/// Returns the number of emitted samples.
std::uint64_t run(Chain& chain, const RunConfig& run_config,
                  const SampleCollector& collect);

}  // namespace ptmc

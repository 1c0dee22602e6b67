#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ptmc/exact.hpp"
#include "ptmc/paths.hpp"

namespace ptmc {

/// (k, q, s): number of U steps, the H/I subsequence, and the skeleton.
/// Sets of paths sharing k, (k, q) and (k, q, s) nest as S_k > T_{k,q} > U_{k,q,s}.
struct PartitionLabel {
  std::size_t k = 0;
  std::vector<Symbol> q;
  DyckPath s;

  std::string q_str() const;

  friend bool operator==(const PartitionLabel&, const PartitionLabel&) = default;
  friend auto operator<=>(const PartitionLabel& a, const PartitionLabel& b) {
    if (auto c = a.k <=> b.k; c != 0) return c;
    if (auto c = a.q <=> b.q; c != 0) return c;
    return a.s <=> b.s;
  }
};

PartitionLabel classify(const TwoMotzkinPath& x);

enum class PartitionLevel { K, KQ, KQS };
const char* to_string(PartitionLevel level);
/// "k", "kq" or "kqs"; throws ConfigInvalid otherwise.
PartitionLevel parse_partition_level(std::string_view text);

using Block = std::vector<std::size_t>;

struct Partition {
  std::vector<Block> blocks;
  /// Label of the first state in each block, truncated to the level.
  std::vector<PartitionLabel> labels;
};

/// Groups model states by label at the given level; blocks ordered by label,
/// states ascending within each block.
Partition partition_states(const TransitionModel& model, PartitionLevel level);

/// The chain confined to a block: moves leaving the block are rejected and
/// their mass stays on the diagonal. Stationary vector is pi renormalized on
/// the block. Throws EmptyBlock.
TransitionModel restriction_chain(const TransitionModel& model, const Block& block);

struct ProjectionModel {
  std::vector<Block> blocks;
  /// pi(block i)
  Eigen::VectorXd weights;
  /// P(i, j) = sum over x in block i, y in block j of pi(x) P(x, y) / pi(block i)
  Eigen::MatrixXd P;
};

/// Throws NotAPartition unless blocks are disjoint and cover every state.
ProjectionModel projection_chain(const TransitionModel& model, const std::vector<Block>& blocks);

/// Closed-form block masses of S_k, k = 0..floor(m/2):
/// proportional to C(m, 2k) C_k e^{-alpha k} (e^{-alpha} + e^{-beta})^{m-2k}.
std::vector<double> projected_k_distribution(std::size_t m, const EnergyParams& e);

/// Gap of a restriction or projection chain; one-state chains have gap 1.
double block_gap(const TransitionModel& model);
double block_gap(const ProjectionModel& projection);

struct SkeletonTransition {
  DyckPath from;
  DyckPath to;
  double probability;
};

struct SkeletonProjectionReport {
  std::size_t m = 0;
  std::size_t k = 0;
  std::vector<Symbol> q;
  std::vector<DyckPath> skeletons;
  std::vector<std::size_t> block_sizes;
  std::size_t expected_block_size = 0;  // C(m, 2k)
  bool sizes_match = false;
  /// max_x,y in T_{k,q} |E(x) - E(y)|
  double energy_spread = 0.0;
  std::vector<double> projected_pi;
  double max_uniform_deviation = 0.0;
  std::vector<SkeletonTransition> transitions;
  /// 1 / (4 m^2), the per-pair value for transposition moves between skeletons.
  double reference_transition = 0.0;
  double max_transition_deviation = 0.0;

  bool uniform(double tol = 1e-12) const { return max_uniform_deviation <= tol; }
};

/// Restricts the chain to T_{k,q}, projects onto skeletons and reports the
/// block sizes, projected stationary vector and projected transitions.
SkeletonProjectionReport check_skeleton_projection(const TransitionModel& model, std::size_t k,
                                                   const std::vector<Symbol>& q);
SkeletonProjectionReport check_skeleton_projection(std::size_t m, std::size_t k,
                                                   const std::vector<Symbol>& q,
                                                   const EnergyParams& e);

struct DecompositionBoundReport {
  PartitionLevel level = PartitionLevel::K;
  std::size_t block_count = 0;
  double gap = 0.0;
  double projection_gap = 0.0;
  std::vector<double> restriction_gaps;
  double min_restriction_gap = 0.0;
  /// (1/2) Gap(projection) min_i Gap(restriction_i)
  double bound = 0.0;
  bool holds = false;
};

/// Compares Gap(P) with the two-level decomposition lower bound for an
/// arbitrary partition of the model's states.
DecompositionBoundReport check_decomposition_bound(const TransitionModel& model,
                                                   const std::vector<Block>& blocks);
DecompositionBoundReport check_decomposition_bound(const TransitionModel& model,
                                                   PartitionLevel level);
DecompositionBoundReport check_decomposition_bound(std::size_t m, const EnergyParams& e,
                                                   PartitionLevel level);

bool is_log_concave(const std::vector<double>& weights, double rel_tol = 1e-12);

}  // namespace ptmc

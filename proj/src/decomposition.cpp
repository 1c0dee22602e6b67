#include "ptmc/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace ptmc {

std::string PartitionLabel::q_str() const {
  std::string out;
  for (Symbol c : q) out.push_back(to_char(c));
  return out;
}

PartitionLabel classify(const TwoMotzkinPath& x) {
  PartitionLabel label;
  std::vector<Symbol> steps;
  for (Symbol c : x.symbols()) {
    if (is_level(c)) {
      label.q.push_back(c);
    } else {
      steps.push_back(c);
      if (c == Symbol::U) ++label.k;
    }
  }
  label.s = DyckPath::from_symbols(std::move(steps));
  return label;
}

const char* to_string(PartitionLevel level) {
  switch (level) {
    case PartitionLevel::K: return "k";
    case PartitionLevel::KQ: return "kq";
    case PartitionLevel::KQS: return "kqs";
  }
  return "unknown";
}

PartitionLevel parse_partition_level(std::string_view text) {
  if (text == "k") return PartitionLevel::K;
  if (text == "kq") return PartitionLevel::KQ;
  if (text == "kqs") return PartitionLevel::KQS;
  throw Error(ErrorCode::ConfigInvalid, "partition level must be k, kq or kqs");
}

Partition partition_states(const TransitionModel& model, PartitionLevel level) {
  std::map<PartitionLabel, Block> groups;
  for (std::size_t i = 0; i < model.size(); ++i) {
    auto label = classify(model.states[i]);
    if (level != PartitionLevel::KQS) label.s = DyckPath();
    if (level == PartitionLevel::K) label.q.clear();
    groups[std::move(label)].push_back(i);
  }
  Partition p;
  for (auto& [label, block] : groups) {
    p.labels.push_back(label);
    p.blocks.push_back(std::move(block));
  }
  return p;
}

TransitionModel restriction_chain(const TransitionModel& model, const Block& block) {
  if (block.empty()) throw Error(ErrorCode::EmptyBlock, "restriction to an empty block");
  Block sorted = block;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Eigen::Index> local(model.size(), -1);
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    if (sorted[j] >= model.size() || (j > 0 && sorted[j] == sorted[j - 1])) {
      throw Error(ErrorCode::NotAPartition, "block holds an invalid or repeated state");
    }
    local[sorted[j]] = static_cast<Eigen::Index>(j);
  }

  TransitionModel r;
  r.m = model.m;
  r.params = model.params;
  const auto n = static_cast<Eigen::Index>(sorted.size());
  r.pi.resize(n);
  double mass = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    r.states.push_back(model.states[sorted[j]]);
    mass += model.pi[static_cast<Eigen::Index>(sorted[j])];
  }
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    r.pi[static_cast<Eigen::Index>(j)] = model.pi[static_cast<Eigen::Index>(sorted[j])] / mass;
  }
  r.log_z = model.log_z + std::log(mass);

  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    const auto x = static_cast<Eigen::Index>(sorted[j]);
    double kept = 0.0;
    for (SparseMatrix::InnerIterator it(model.P, x); it; ++it) {
      if (it.col() == x) continue;
      const Eigen::Index to = local[static_cast<std::size_t>(it.col())];
      if (to < 0) continue;
      entries.emplace_back(static_cast<Eigen::Index>(j), to, it.value());
      kept += it.value();
    }
    entries.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j), 1.0 - kept);
  }
  r.P.resize(n, n);
  r.P.setFromTriplets(entries.begin(), entries.end());
  r.P.makeCompressed();
  return r;
}

ProjectionModel projection_chain(const TransitionModel& model, const std::vector<Block>& blocks) {
  std::vector<Eigen::Index> owner(model.size(), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw Error(ErrorCode::NotAPartition, "partition has an empty block");
    for (std::size_t x : blocks[b]) {
      if (x >= model.size() || owner[x] >= 0) {
        throw Error(ErrorCode::NotAPartition, "blocks overlap or name unknown states");
      }
      owner[x] = static_cast<Eigen::Index>(b);
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end()) {
    throw Error(ErrorCode::NotAPartition, "blocks do not cover every state");
  }

  const auto nb = static_cast<Eigen::Index>(blocks.size());
  ProjectionModel proj;
  proj.blocks = blocks;
  proj.weights = Eigen::VectorXd::Zero(nb);
  proj.P = Eigen::MatrixXd::Zero(nb, nb);
  for (Eigen::Index x = 0; x < model.P.rows(); ++x) {
    const Eigen::Index i = owner[static_cast<std::size_t>(x)];
    proj.weights[i] += model.pi[x];
    for (SparseMatrix::InnerIterator it(model.P, x); it; ++it) {
      proj.P(i, owner[static_cast<std::size_t>(it.col())]) += model.pi[x] * it.value();
    }
  }
  for (Eigen::Index i = 0; i < nb; ++i) proj.P.row(i) /= proj.weights[i];
  return proj;
}

std::vector<double> projected_k_distribution(std::size_t m, const EnergyParams& e) {
  const double level = log_sum_exp(std::vector<double>{-e.alpha, -e.beta});
  std::vector<double> logw;
  for (std::size_t k = 0; 2 * k <= m; ++k) {
    const double n = static_cast<double>(m);
    const double kk = static_cast<double>(k);
    const double log_binom =
        std::lgamma(n + 1) - std::lgamma(2 * kk + 1) - std::lgamma(n - 2 * kk + 1);
    const double log_catalan = std::lgamma(2 * kk + 1) - std::lgamma(kk + 1) - std::lgamma(kk + 2);
    logw.push_back(log_binom + log_catalan - e.alpha * kk + (n - 2 * kk) * level);
  }
  const double log_z = log_sum_exp(logw);
  std::vector<double> out;
  out.reserve(logw.size());
  for (double w : logw) out.push_back(std::exp(w - log_z));
  return out;
}

double block_gap(const TransitionModel& model) {
  if (model.size() == 1) return 1.0;
  return spectral_gap(model).gap;
}

double block_gap(const ProjectionModel& projection) {
  if (projection.P.rows() == 1) return 1.0;
  return spectral_gap(projection.P, projection.weights).gap;
}

SkeletonProjectionReport check_skeleton_projection(const TransitionModel& model, std::size_t k,
                                                   const std::vector<Symbol>& q) {
  SkeletonProjectionReport rep;
  rep.m = model.m;
  rep.k = k;
  rep.q = q;
  rep.skeletons = enumerate_dyck(k);
  rep.expected_block_size = binomial(model.m, 2 * k).convert_to<std::size_t>();
  rep.reference_transition = 1.0 / (4.0 * static_cast<double>(model.m * model.m));

  Block cell;
  std::map<DyckPath, std::size_t> slot;
  for (std::size_t i = 0; i < rep.skeletons.size(); ++i) slot[rep.skeletons[i]] = i;
  std::vector<std::size_t> skeleton_of;
  for (std::size_t x = 0; x < model.size(); ++x) {
    auto label = classify(model.states[x]);
    if (label.k != k || label.q != q) continue;
    cell.push_back(x);
    skeleton_of.push_back(slot.at(label.s));
  }
  if (cell.empty()) throw Error(ErrorCode::EmptyBlock, "no paths with the requested (k, q)");

  double emin = std::numeric_limits<double>::infinity();
  double emax = -emin;
  for (std::size_t x : cell) {
    const double energy = path_energy(model.states[x], model.params);
    emin = std::min(emin, energy);
    emax = std::max(emax, energy);
  }
  rep.energy_spread = emax - emin;

  // The restriction keeps T_{k,q} states in ascending order, so local index j
  // corresponds to cell[j].
  const auto restricted = restriction_chain(model, cell);
  std::vector<Block> by_skeleton(rep.skeletons.size());
  for (std::size_t j = 0; j < cell.size(); ++j) by_skeleton[skeleton_of[j]].push_back(j);
  rep.block_sizes.reserve(by_skeleton.size());
  rep.sizes_match = true;
  for (const auto& b : by_skeleton) {
    rep.block_sizes.push_back(b.size());
    rep.sizes_match = rep.sizes_match && b.size() == rep.expected_block_size;
  }

  const auto proj = projection_chain(restricted, by_skeleton);
  const double uniform = 1.0 / static_cast<double>(rep.skeletons.size());
  for (Eigen::Index i = 0; i < proj.weights.size(); ++i) {
    rep.projected_pi.push_back(proj.weights[i]);
    rep.max_uniform_deviation =
        std::max(rep.max_uniform_deviation, std::abs(proj.weights[i] - uniform));
  }
  for (Eigen::Index i = 0; i < proj.P.rows(); ++i) {
    for (Eigen::Index j = 0; j < proj.P.cols(); ++j) {
      if (i == j || proj.P(i, j) <= 0) continue;
      rep.transitions.push_back({rep.skeletons[static_cast<std::size_t>(i)],
                                 rep.skeletons[static_cast<std::size_t>(j)], proj.P(i, j)});
      rep.max_transition_deviation = std::max(
          rep.max_transition_deviation, std::abs(proj.P(i, j) - rep.reference_transition));
    }
  }
  return rep;
}

SkeletonProjectionReport check_skeleton_projection(std::size_t m, std::size_t k,
                                                   const std::vector<Symbol>& q,
                                                   const EnergyParams& e) {
  return check_skeleton_projection(build_transition_model(m, e), k, q);
}

DecompositionBoundReport check_decomposition_bound(const TransitionModel& model,
                                                   const std::vector<Block>& blocks) {
  DecompositionBoundReport rep;
  rep.block_count = blocks.size();
  rep.gap = spectral_gap(model).gap;
  rep.projection_gap = block_gap(projection_chain(model, blocks));
  rep.min_restriction_gap = 1.0;
  for (const auto& b : blocks) {
    rep.restriction_gaps.push_back(block_gap(restriction_chain(model, b)));
    rep.min_restriction_gap = std::min(rep.min_restriction_gap, rep.restriction_gaps.back());
  }
  rep.bound = 0.5 * rep.projection_gap * rep.min_restriction_gap;
  rep.holds = rep.gap >= rep.bound;
  return rep;
}

DecompositionBoundReport check_decomposition_bound(const TransitionModel& model,
                                                   PartitionLevel level) {
  auto rep = check_decomposition_bound(model, partition_states(model, level).blocks);
  rep.level = level;
  return rep;
}

DecompositionBoundReport check_decomposition_bound(std::size_t m, const EnergyParams& e,
                                                   PartitionLevel level) {
  if (m > kDenseCap) {
    throw Error(ErrorCode::CapExceeded, "decomposition checks use dense eigensolves; m <= " +
                                            std::to_string(kDenseCap));
  }
  return check_decomposition_bound(build_transition_model(m, e), level);
}

bool is_log_concave(const std::vector<double>& w, double rel_tol) {
  for (std::size_t k = 1; k + 1 < w.size(); ++k) {
    const double lhs = w[k] * w[k];
    const double rhs = w[k - 1] * w[k + 1];
    if (lhs < rhs * (1.0 - rel_tol)) return false;
  }
  return true;
}

}  // namespace ptmc

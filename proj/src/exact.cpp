#include "ptmc/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "ptmc/chain.hpp"
#include "ptmc/rng.hpp"

namespace ptmc {

StateIndex::StateIndex(std::size_t m, std::size_t cap) : states_(enumerate_paths(m, cap)) {}

StateIndex::StateIndex(std::vector<TwoMotzkinPath> sorted_states)
    : states_(std::move(sorted_states)) {
  if (!std::is_sorted(states_.begin(), states_.end())) {
    throw Error(ErrorCode::ConfigInvalid, "state index requires sorted paths");
  }
}

std::optional<std::size_t> StateIndex::find(const TwoMotzkinPath& x) const {
  const auto it = std::lower_bound(states_.begin(), states_.end(), x);
  if (it == states_.end() || *it != x) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

std::size_t StateIndex::at(const TwoMotzkinPath& x) const {
  if (auto i = find(x)) return *i;
  throw Error(ErrorCode::LengthMismatch, "path '" + x.str() + "' is not in the state index");
}

std::uint64_t StateIndex::order_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& x : states_) {
    for (Symbol s : x.symbols()) mix(static_cast<unsigned char>(to_char(s)));
    mix('\n');
  }
  return h;
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - top);
  return top + std::log(sum);
}

GibbsDistribution gibbs_distribution(const StateIndex& index, const EnergyParams& e) {
  std::vector<double> logw(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) logw[i] = gibbs_log_weight(index.path(i), e);
  GibbsDistribution g;
  g.log_z = log_sum_exp(logw);
  g.pi.resize(logw.size());
  for (std::size_t i = 0; i < logw.size(); ++i) g.pi[i] = std::exp(logw[i] - g.log_z);
  return g;
}

GibbsDistribution gibbs_distribution(std::size_t m, const EnergyParams& e, std::size_t cap) {
  return gibbs_distribution(StateIndex(m, cap), e);
}

BalanceReport check_balance(const SparseMatrix& P, const Eigen::VectorXd& pi) {
  BalanceReport r;
  const Eigen::Index n = P.rows();
  Eigen::VectorXd flow_in = Eigen::VectorXd::Zero(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(P, x); it; ++it) {
      const Eigen::Index y = it.col();
      const double forward = pi[x] * it.value();
      row += it.value();
      flow_in[y] += forward;
      r.max_flow = std::max(r.max_flow, forward);
      if (y == x) continue;
      const double backward = pi[y] * P.coeff(y, x);
      const double diff = std::abs(forward - backward);
      if (diff > r.max_violation) {
        r.max_violation = diff;
        r.worst_pair = {static_cast<std::size_t>(x), static_cast<std::size_t>(y)};
      }
    }
    r.row_sum_error = std::max(r.row_sum_error, std::abs(row - 1.0));
  }
  r.stationarity_residual = (flow_in - pi).cwiseAbs().maxCoeff();
  return r;
}

TransitionModel build_transition_model(std::size_t m, const EnergyParams& e,
                                       std::size_t cap) {
  if (m == 0) throw Error(ErrorCode::ConfigInvalid, "transition model needs m >= 1");
  StateIndex index(m, cap);
  const auto gibbs = gibbs_distribution(index, e);

  TransitionModel model;
  model.m = m;
  model.params = e;
  model.log_z = gibbs.log_z;
  model.pi = Eigen::Map<const Eigen::VectorXd>(gibbs.pi.data(),
                                               static_cast<Eigen::Index>(gibbs.pi.size()));

  const auto n = static_cast<Eigen::Index>(index.size());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(index.size() * (2 * m + 1));
  for (std::size_t i = 0; i < index.size(); ++i) {
    double leaving = 0.0;
    for (const auto& [y, p] : neighbors(index.path(i), e)) {
      entries.emplace_back(static_cast<Eigen::Index>(i),
                           static_cast<Eigen::Index>(index.at(y)), p);
      leaving += p;
    }
    entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i),
                         1.0 - leaving);
  }
  model.P.resize(n, n);
  model.P.setFromTriplets(entries.begin(), entries.end());
  model.P.makeCompressed();
  model.states = index.paths();

  const auto report = check_balance(model);
  if (!report.ok()) {
    const auto [x, y] = report.worst_pair;
    throw Error(ErrorCode::BalanceViolation,
                "detailed balance fails between " + model.states[x].str() + " and " +
                    model.states[y].str() + " (|diff| = " +
                    std::to_string(report.max_violation) + ")");
  }
  return model;
}

bool strongly_connected(const SparseMatrix& P) {
  const Eigen::Index n = P.rows();
  if (n == 0) return true;
  SparseMatrix T = P.transpose();
  auto reaches_all = [n](const SparseMatrix& M) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<Eigen::Index> stack{0};
    seen[0] = 1;
    Eigen::Index count = 1;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (SparseMatrix::InnerIterator it(M, v); it; ++it) {
        if (it.value() > 0 && !seen[static_cast<std::size_t>(it.col())]) {
          seen[static_cast<std::size_t>(it.col())] = 1;
          ++count;
          stack.push_back(it.col());
        }
      }
    }
    return count == n;
  };
  return reaches_all(P) && reaches_all(T);
}

const char* to_string(SpectralMethod method) {
  switch (method) {
    case SpectralMethod::Auto: return "auto";
    case SpectralMethod::Dense: return "dense";
    case SpectralMethod::PowerIteration: return "power-iteration";
  }
  return "unknown";
}

namespace {

SpectralReport finish(double lambda1, SpectralMethod method, double residual,
                      std::size_t iterations) {
  SpectralReport r;
  r.lambda1 = lambda1;
  r.gap = 1.0 - lambda1;
  r.relaxation_time = r.gap > 0 ? 1.0 / r.gap : std::numeric_limits<double>::infinity();
  r.method = method;
  r.residual = residual;
  r.iterations = iterations;
  return r;
}

SpectralReport dense_gap(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "dense symmetric eigensolver failed");
  }
  const auto& values = solver.eigenvalues();  // ascending
  const Eigen::Index n = values.size();
  // The top eigenvalue belongs to sqrt(pi); the next one and the bottom one
  // compete for the second-largest modulus.
  Eigen::Index pick = n - 2;
  if (std::abs(values[0]) > std::abs(values[n - 2])) pick = 0;
  const Eigen::VectorXd v = solver.eigenvectors().col(pick);
  const double residual = (S * v - values[pick] * v).norm();
  return finish(std::abs(values[pick]), SpectralMethod::Dense, residual, 0);
}

Eigen::VectorXd sqrt_vec(const Eigen::VectorXd& pi) { return pi.cwiseSqrt(); }

SparseMatrix symmetrize(const SparseMatrix& P, const Eigen::VectorXd& pi) {
  const Eigen::VectorXd s = sqrt_vec(pi);
  const Eigen::VectorXd inv = s.cwiseInverse();
  SparseMatrix S = s.asDiagonal() * P * inv.asDiagonal();
  SparseMatrix St = S.transpose();
  SparseMatrix sym = 0.5 * (S + St);
  sym.makeCompressed();
  return sym;
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi) {
  const Eigen::VectorXd s = sqrt_vec(pi);
  const Eigen::MatrixXd S = s.asDiagonal() * P * s.cwiseInverse().asDiagonal();
  return 0.5 * (S + S.transpose());
}

// Subspace (block power) iteration on the complement of sqrt(pi), with a
// Rayleigh-Ritz extraction each sweep.
template <typename Matrix>
SpectralReport power_gap(const Matrix& S, const Eigen::VectorXd& top,
                         const SpectralOptions& opt) {
  const Eigen::Index n = S.rows();
  const Eigen::Index width =
      std::min<Eigen::Index>(static_cast<Eigen::Index>(std::max<std::size_t>(opt.block_size, 1)),
                             n - 1);
  const Eigen::VectorXd u = top.normalized();

  Rng rng(opt.seed, 0x5eed);
  Eigen::MatrixXd V(n, width);
  for (Eigen::Index j = 0; j < width; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) V(i, j) = rng.uniform() - 0.5;
  }
  auto orthonormalize = [&](Eigen::MatrixXd& W) {
    // Two passes of projection keep W orthogonal to u at working precision.
    for (int pass = 0; pass < 2; ++pass) W -= u * (u.transpose() * W);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(W);
    W = qr.householderQ() * Eigen::MatrixXd::Identity(n, width);
  };
  orthonormalize(V);

  double residual = std::numeric_limits<double>::infinity();
  double theta = 0.0;
  for (std::size_t iter = 1; iter <= opt.max_iterations; ++iter) {
    Eigen::MatrixXd W = S * V;
    for (int pass = 0; pass < 2; ++pass) W -= u * (u.transpose() * W);
    const Eigen::MatrixXd H = V.transpose() * W;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(0.5 * (H + H.transpose()));
    const auto& values = ritz.eigenvalues();
    Eigen::Index pick = width - 1;
    if (std::abs(values[0]) > std::abs(values[width - 1])) pick = 0;
    theta = values[pick];
    const Eigen::VectorXd y = ritz.eigenvectors().col(pick);
    const Eigen::VectorXd v = V * y;
    const Eigen::VectorXd Sv = W * y;
    residual = (Sv - theta * v).norm();
    if (residual <= opt.tolerance) {
      return finish(std::abs(theta), SpectralMethod::PowerIteration, residual, iter);
    }
    V = std::move(W);
    orthonormalize(V);
  }
  throw Error(ErrorCode::NoConvergence,
              "power iteration stopped after " + std::to_string(opt.max_iterations) +
                  " iterations with residual " + std::to_string(residual));
}

void require_states(Eigen::Index n, const Eigen::VectorXd& pi) {
  if (pi.size() != n) throw Error(ErrorCode::LengthMismatch, "pi length differs from P");
  if (n < 2) {
    throw Error(ErrorCode::ConfigInvalid, "spectral gap needs at least two states (m >= 1)");
  }
}

}  // namespace

SpectralReport spectral_gap(const SparseMatrix& P, const Eigen::VectorXd& pi,
                            const SpectralOptions& options) {
  require_states(P.rows(), pi);
  auto method = options.method;
  if (method == SpectralMethod::Auto) {
    method = static_cast<std::size_t>(P.rows()) <= kDenseStateLimit
                 ? SpectralMethod::Dense
                 : SpectralMethod::PowerIteration;
  }
  const SparseMatrix S = symmetrize(P, pi);
  if (method == SpectralMethod::Dense) return dense_gap(Eigen::MatrixXd(S));
  return power_gap(S, sqrt_vec(pi), options);
}

SpectralReport spectral_gap(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi,
                            const SpectralOptions& options) {
  require_states(P.rows(), pi);
  const Eigen::MatrixXd S = symmetrize(P, pi);
  if (options.method == SpectralMethod::PowerIteration) {
    return power_gap(S, sqrt_vec(pi), options);
  }
  return dense_gap(S);
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::LengthMismatch, "distributions differ in length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

std::vector<std::pair<std::size_t, double>> tv_decay_curve(const TransitionModel& model,
                                                           std::size_t x0,
                                                           std::size_t horizon) {
  if (x0 >= model.size()) {
    throw Error(ErrorCode::ConfigInvalid, "start state index out of range");
  }
  Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(model.size()));
  mu[static_cast<Eigen::Index>(x0)] = 1.0;
  const std::span<const double> pi(model.pi.data(), model.size());
  std::vector<std::pair<std::size_t, double>> curve;
  curve.reserve(horizon + 1);
  for (std::size_t t = 0;; ++t) {
    curve.emplace_back(t, tv_distance(std::span<const double>(mu.data(), model.size()), pi));
    if (t == horizon) break;
    Eigen::RowVectorXd next = mu * model.P;
    mu = std::move(next);
  }
  return curve;
}

}  // namespace ptmc

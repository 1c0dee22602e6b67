#include "ptmc/chain.hpp"

#include <algorithm>
#include <cmath>

namespace ptmc {

namespace {

// 1 / (1 + e^{-z}) without overflow for large |z|.
double logistic(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double ez = std::exp(z);
  return ez / (1.0 + ez);
}

}  // namespace

MoveProbabilities MoveProbabilities::from(const EnergyParams& e) {
  MoveProbabilities p;
  p.ud_to_hh = 0.5 * logistic(-e.alpha);
  p.hh_to_ud = 0.5 * logistic(e.alpha);
  p.i_to_h = 0.5 * logistic(e.beta - e.alpha);
  p.h_to_i = 0.5 * logistic(e.alpha - e.beta);
  return p;
}

Chain::Chain(const ChainConfig& config)
    : params_(config.params),
      probs_(MoveProbabilities::from(config.params)),
      rng_(config.seed, config.stream) {
  if (config.m == 0) {
    throw Error(ErrorCode::ConfigInvalid, "chain needs path length m >= 1");
  }
  if (config.initial_state) {
    if (config.initial_state->size() != config.m) {
      throw Error(ErrorCode::ConfigInvalid, "initial state has length " +
                                                std::to_string(config.initial_state->size()) +
                                                ", expected " + std::to_string(config.m));
    }
    state_ = *config.initial_state;
  } else {
    state_ = TwoMotzkinPath::all_level(config.m);
  }
}

void Chain::reset_state(TwoMotzkinPath x) {
  if (x.size() != state_.size()) {
    throw Error(ErrorCode::LengthMismatch, "reset_state with a path of different length");
  }
  state_ = std::move(x);
}

void Chain::step() {
  ++steps_;
  auto& x = detail::PathAccess::raw(state_);
  const std::uint64_t m = x.size();
  switch (rng_.below(4)) {
    case 0: {  // UD <-> HH on an adjacent pair
      if (m < 2) return;
      const auto i = rng_.below(m - 1);
      if (x[i] == Symbol::U && x[i + 1] == Symbol::D) {
        if (rng_.bernoulli(probs_.ud_to_hh)) x[i] = x[i + 1] = Symbol::H;
      } else if (x[i] == Symbol::H && x[i + 1] == Symbol::H) {
        if (rng_.bernoulli(probs_.hh_to_ud)) {
          x[i] = Symbol::U;
          x[i + 1] = Symbol::D;
        }
      }
      return;
    }
    case 1: {  // H <-> I at one position
      const auto i = rng_.below(m);
      if (x[i] == Symbol::I) {
        if (rng_.bernoulli(probs_.i_to_h)) x[i] = Symbol::H;
      } else if (x[i] == Symbol::H) {
        if (rng_.bernoulli(probs_.h_to_i)) x[i] = Symbol::I;
      }
      return;
    }
    case 2: {  // transpose two U/D symbols
      const auto i = rng_.below(m);
      const auto j = rng_.below(m);
      if (is_vertical(x[i]) && is_vertical(x[j]) && rng_.bernoulli(0.5)) {
        std::swap(x[i], x[j]);
        if (!is_valid_path(x)) std::swap(x[i], x[j]);
      }
      return;
    }
    default: {  // move a U/D past an adjacent H/I
      if (m < 2) return;
      const auto i = rng_.below(m - 1);
      const bool mixed = (is_vertical(x[i]) && is_level(x[i + 1])) ||
                         (is_level(x[i]) && is_vertical(x[i + 1]));
      if (mixed && rng_.bernoulli(0.5)) std::swap(x[i], x[i + 1]);
      return;
    }
  }
}

std::vector<std::pair<TwoMotzkinPath, double>> neighbors(const TwoMotzkinPath& x,
                                                         const EnergyParams& e) {
  const auto probs = MoveProbabilities::from(e);
  const std::size_t m = x.size();
  std::vector<std::pair<TwoMotzkinPath, double>> out;
  std::vector<Symbol> y(x.symbols().begin(), x.symbols().end());
  auto emit = [&](double p) { out.emplace_back(detail::PathAccess::adopt(y), p); };

  const double per_class = 0.25;
  if (m >= 2) {
    const double per_pair = per_class / static_cast<double>(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const Symbol a = y[i];
      const Symbol b = y[i + 1];
      if (a == Symbol::U && b == Symbol::D) {
        y[i] = y[i + 1] = Symbol::H;
        emit(per_pair * probs.ud_to_hh);
      } else if (a == Symbol::H && b == Symbol::H) {
        y[i] = Symbol::U;
        y[i + 1] = Symbol::D;
        emit(per_pair * probs.hh_to_ud);
      } else if ((is_vertical(a) && is_level(b)) || (is_level(a) && is_vertical(b))) {
        std::swap(y[i], y[i + 1]);
        emit(per_pair * 0.5);
      } else {
        continue;
      }
      y[i] = a;
      y[i + 1] = b;
    }
  }

  const double per_site = per_class / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (y[i] == Symbol::H) {
      y[i] = Symbol::I;
      emit(per_site * probs.h_to_i);
      y[i] = Symbol::H;
    } else if (y[i] == Symbol::I) {
      y[i] = Symbol::H;
      emit(per_site * probs.i_to_h);
      y[i] = Symbol::I;
    }
  }

  // Ordered draws (i, j) and (j, i) propose the same swap.
  const double per_unordered = 2.0 * per_class / static_cast<double>(m * m) * 0.5;
  for (std::size_t i = 0; i < m; ++i) {
    if (!is_vertical(y[i])) continue;
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!is_vertical(y[j]) || y[i] == y[j]) continue;
      std::swap(y[i], y[j]);
      if (is_valid_path(y)) emit(per_unordered);
      std::swap(y[i], y[j]);
    }
  }

  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Sum probabilities of any moves that reach the same target.
  std::vector<std::pair<TwoMotzkinPath, double>> merged;
  merged.reserve(out.size());
  for (auto& entry : out) {
    if (!merged.empty() && merged.back().first == entry.first) {
      merged.back().second += entry.second;
    } else {
      merged.push_back(std::move(entry));
    }
  }
  return merged;
}

double transition_probability(const TwoMotzkinPath& x, const TwoMotzkinPath& y,
                              const EnergyParams& e) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "transition between paths of different length");
  }
  const auto out = neighbors(x, e);
  if (x == y) {
    double leaving = 0.0;
    for (const auto& [_, p] : out) leaving += p;
    return 1.0 - leaving;
  }
  const auto it = std::lower_bound(out.begin(), out.end(), y,
                                   [](const auto& a, const auto& key) { return a.first < key; });
  return (it != out.end() && it->first == y) ? it->second : 0.0;
}

std::uint64_t run(Chain& chain, const RunConfig& rc, const SampleCollector& collect) {
  if (rc.thin == 0) throw Error(ErrorCode::ConfigInvalid, "thin must be positive");
  if (rc.burn_in > rc.total_steps) {
    throw Error(ErrorCode::ConfigInvalid, "burn-in exceeds total steps");
  }
  std::uint64_t emitted = 0;
  auto emit_if_due = [&](std::uint64_t t) {
    if (t < rc.burn_in || (t - rc.burn_in) % rc.thin != 0) return;
    const auto& x = chain.state();
    collect(Sample{chain.steps_taken(), x, path_energy(x, chain.params()), degree_profile(x)});
    ++emitted;
  };
  emit_if_due(0);
  for (std::uint64_t t = 1; t <= rc.total_steps; ++t) {
    chain.step();
    emit_if_due(t);
  }
  return emitted;
}

}  // namespace ptmc

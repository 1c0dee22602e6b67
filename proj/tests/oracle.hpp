#pragma once

// Test-only reference computations, written against plain strings so they
// share no code path with the library.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

inline bool valid_word(const std::string& w) {
  long h = 0;
  for (char c : w) {
    if (c == 'U') ++h;
    if (c == 'D' && --h < 0) return false;
  }
  return h == 0;
}

/// Every word in {U,H,I,D}^m that is a valid path, in U<H<I<D order.
inline std::vector<std::string> brute_force_paths(std::size_t m) {
  static const char kAlphabet[] = {'U', 'H', 'I', 'D'};
  std::vector<std::string> out;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= 4;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::string w(m, ' ');
    std::uint64_t c = code;
    for (std::size_t i = 0; i < m; ++i) {
      w[m - 1 - i] = kAlphabet[c % 4];
      c /= 4;
    }
    if (valid_word(w)) out.push_back(w);
  }
  return out;
}

/// Catalan numbers by the convolution recurrence.
inline std::vector<std::uint64_t> catalan_table(std::size_t n) {
  std::vector<std::uint64_t> c(n + 1, 0);
  c[0] = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 0; j < i; ++j) c[i] += c[j] * c[i - 1 - j];
  }
  return c;
}

/// Binomials by Pascal's triangle.
inline std::uint64_t choose(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::vector<std::uint64_t> row(n + 1, 0);
  row[0] = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = i; j > 0; --j) row[j] += row[j - 1];
  }
  return row[k];
}

/// Plane trees with n edges as balanced-parenthesis strings (all Dyck words).
inline std::set<std::string> all_tree_texts(std::size_t n) {
  std::set<std::string> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (2 * n)); ++bits) {
    std::string s;
    long h = 0;
    bool ok = true;
    for (std::size_t i = 0; i < 2 * n; ++i) {
      const bool open = (bits >> (2 * n - 1 - i)) & 1;
      s.push_back(open ? '(' : ')');
      h += open ? 1 : -1;
      if (h < 0) ok = false;
    }
    if (ok && h == 0) out.insert(s);
  }
  return out;
}

inline double word_energy(const std::string& w, double alpha, double beta) {
  double u = 0, h = 0, i = 0;
  for (char c : w) {
    if (c == 'U') ++u;
    if (c == 'H') ++h;
    if (c == 'I') ++i;
  }
  return alpha * (u + h + 1) + beta * i;
}

/// One step of the chain written out as the literal pseudocode, enumerating
/// every outcome of the random draws (move class, indices, coin flips) and
/// accumulating the resulting distribution over next states.
inline std::map<std::string, double> algorithm_kernel(const std::string& x, double alpha,
                                                      double beta) {
  const std::size_t m = x.size();
  std::map<std::string, double> dist;
  const double ea = std::exp(-alpha);
  const double eb = std::exp(-beta);

  // l = 1
  if (m >= 2) {
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double w = 0.25 / static_cast<double>(m - 1);
      std::string y = x;
      double p = 0.0;
      if (x.substr(i, 2) == "UD") {
        p = ea / (2 * (1 + ea));
        y.replace(i, 2, "HH");
      } else if (x.substr(i, 2) == "HH") {
        p = 1 / (2 * (1 + ea));
        y.replace(i, 2, "UD");
      }
      dist[y] += w * p;
      dist[x] += w * (1 - p);
    }
  } else {
    dist[x] += 0.25;
  }
  // l = 2
  for (std::size_t i = 0; i < m; ++i) {
    const double w = 0.25 / static_cast<double>(m);
    std::string y = x;
    double p = 0.0;
    if (x[i] == 'I') {
      p = ea / (2 * (ea + eb));
      y[i] = 'H';
    } else if (x[i] == 'H') {
      p = eb / (2 * (ea + eb));
      y[i] = 'I';
    }
    dist[y] += w * p;
    dist[x] += w * (1 - p);
  }
  // l = 3
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double w = 0.25 / static_cast<double>(m * m);
      auto ud = [](char c) { return c == 'U' || c == 'D'; };
      if (ud(x[i]) && ud(x[j])) {
        std::string y = x;
        std::swap(y[i], y[j]);
        if (!valid_word(y)) y = x;
        dist[y] += w * 0.5;
        dist[x] += w * 0.5;
      } else {
        dist[x] += w;
      }
    }
  }
  // l = 4
  if (m >= 2) {
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double w = 0.25 / static_cast<double>(m - 1);
      auto ud = [](char c) { return c == 'U' || c == 'D'; };
      auto hi = [](char c) { return c == 'H' || c == 'I'; };
      if ((ud(x[i]) && hi(x[i + 1])) || (hi(x[i]) && ud(x[i + 1]))) {
        std::string y = x;
        std::swap(y[i], y[i + 1]);
        dist[y] += w * 0.5;
        dist[x] += w * 0.5;
      } else {
        dist[x] += w;
      }
    }
  } else {
    dist[x] += 0.25;
  }
  for (auto it = dist.begin(); it != dist.end();) {
    it = it->second == 0.0 ? dist.erase(it) : std::next(it);
  }
  return dist;
}

}  // namespace oracle

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ptmc/error.hpp"

namespace ptmc {

using BigInt = boost::multiprecision::cpp_int;

// Byte values fix the enumeration order U < H < I < D.
enum class Symbol : std::uint8_t { U = 0, H = 1, I = 2, D = 3 };

char to_char(Symbol s);
std::optional<Symbol> symbol_from_char(char c);

/// U or D: a step that changes height.
inline bool is_vertical(Symbol s) { return s == Symbol::U || s == Symbol::D; }
/// H or I: one of the two colored level steps.
inline bool is_level(Symbol s) { return s == Symbol::H || s == Symbol::I; }

struct SymbolCounts {
  std::size_t u = 0;
  std::size_t h = 0;
  std::size_t i = 0;
  std::size_t d = 0;

  std::size_t length() const { return u + h + i + d; }
  friend bool operator==(const SymbolCounts&, const SymbolCounts&) = default;
};

namespace detail {
struct PathAccess;
}

/// Word over {U, H, I, D} whose prefix heights never go negative and which
/// ends at height zero. Instances are always valid.
class TwoMotzkinPath {
 public:
  TwoMotzkinPath() = default;

  /// Validates ASCII text. Throws Error with InvalidSymbol, NegativePrefix
  /// or Unbalanced, carrying the first offending index.
  static TwoMotzkinPath parse(std::string_view text);
  static TwoMotzkinPath from_symbols(std::vector<Symbol> symbols);
  /// The all-H path of length m; valid for every m.
  static TwoMotzkinPath all_level(std::size_t m, Symbol level = Symbol::H);

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  std::span<const Symbol> symbols() const { return symbols_; }
  std::string str() const;

  friend bool operator==(const TwoMotzkinPath&, const TwoMotzkinPath&) = default;
  friend std::strong_ordering operator<=>(const TwoMotzkinPath& a,
                                          const TwoMotzkinPath& b) {
    return a.symbols_ <=> b.symbols_;
  }

 private:
  friend struct detail::PathAccess;
  explicit TwoMotzkinPath(std::vector<Symbol> symbols)
      : symbols_(std::move(symbols)) {}

  std::vector<Symbol> symbols_;
};

std::ostream& operator<<(std::ostream& os, const TwoMotzkinPath& x);

/// Balanced word over {U, D} only.
class DyckPath {
 public:
  DyckPath() = default;
  static DyckPath parse(std::string_view text);
  static DyckPath from_symbols(std::vector<Symbol> symbols);

  std::size_t size() const { return symbols_.size(); }
  std::size_t semilength() const { return symbols_.size() / 2; }
  std::span<const Symbol> symbols() const { return symbols_; }
  std::string str() const;

  friend bool operator==(const DyckPath&, const DyckPath&) = default;
  friend std::strong_ordering operator<=>(const DyckPath& a, const DyckPath& b) {
    return a.symbols_ <=> b.symbols_;
  }

 private:
  explicit DyckPath(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}
  std::vector<Symbol> symbols_;
};

namespace detail {
// Unchecked construction and mutation for code that preserves validity by
// construction (the chain moves, enumeration).
struct PathAccess {
  static TwoMotzkinPath adopt(std::vector<Symbol> symbols) {
    return TwoMotzkinPath(std::move(symbols));
  }
  static std::vector<Symbol>& raw(TwoMotzkinPath& x) { return x.symbols_; }
};
}  // namespace detail

struct PathViolation {
  ErrorCode code;
  std::size_t index;
};

/// Checks a symbol sequence without constructing a path. Returns the
/// violation (code and first offending index) or nothing when valid.
std::optional<PathViolation> find_violation(std::span<const Symbol> word);
bool is_valid_path(std::span<const Symbol> word);

SymbolCounts symbol_counts(const TwoMotzkinPath& x);
DyckPath skeleton(const TwoMotzkinPath& x);

inline constexpr std::size_t kDefaultEnumerationCap = 12;

/// All paths of length m in lexicographic order (U < H < I < D).
std::vector<TwoMotzkinPath> enumerate_paths(std::size_t m,
                                            std::size_t cap = kDefaultEnumerationCap);
/// All Dyck paths of semilength k in lexicographic order.
std::vector<DyckPath> enumerate_dyck(std::size_t k);

BigInt binomial(std::size_t n, std::size_t k);
BigInt catalan(std::size_t n);
BigInt motzkin(std::size_t n);

/// One path per line, newline-terminated.
std::vector<TwoMotzkinPath> read_paths(std::istream& in);
void write_paths(std::ostream& out, std::span<const TwoMotzkinPath> paths);

}  // namespace ptmc

#include "ptmc/paths.hpp"

#include <istream>
#include <ostream>

namespace ptmc {

char to_char(Symbol s) {
  static constexpr char kChars[] = {'U', 'H', 'I', 'D'};
  return kChars[static_cast<std::uint8_t>(s)];
}

std::optional<Symbol> symbol_from_char(char c) {
  switch (c) {
    case 'U': return Symbol::U;
    case 'H': return Symbol::H;
    case 'I': return Symbol::I;
    case 'D': return Symbol::D;
    default: return std::nullopt;
  }
}

namespace {

std::string render(std::span<const Symbol> symbols) {
  std::string out;
  out.reserve(symbols.size());
  for (Symbol s : symbols) out.push_back(to_char(s));
  return out;
}

std::vector<Symbol> decode_text(std::string_view text) {
  std::vector<Symbol> word;
  word.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto s = symbol_from_char(text[i]);
    if (!s) {
      throw Error(ErrorCode::InvalidSymbol,
                  "character '" + std::string(1, text[i]) + "' at index " +
                      std::to_string(i),
                  i);
    }
    word.push_back(*s);
  }
  return word;
}

[[noreturn]] void raise(const PathViolation& v) {
  throw Error(v.code, "path invalid at index " + std::to_string(v.index), v.index);
}

void build_paths(std::size_t m, std::vector<Symbol>& prefix, std::size_t height,
                 std::vector<TwoMotzkinPath>& out) {
  const std::size_t remaining = m - prefix.size();
  if (remaining == 0) {
    out.push_back(detail::PathAccess::adopt(prefix));
    return;
  }
  // Order of recursion is U, H, I, D so the output is lexicographic.
  if (height + 1 <= remaining - 1) {
    prefix.push_back(Symbol::U);
    build_paths(m, prefix, height + 1, out);
    prefix.pop_back();
  }
  if (height <= remaining - 1) {
    for (Symbol s : {Symbol::H, Symbol::I}) {
      prefix.push_back(s);
      build_paths(m, prefix, height, out);
      prefix.pop_back();
    }
  }
  if (height > 0) {
    prefix.push_back(Symbol::D);
    build_paths(m, prefix, height - 1, out);
    prefix.pop_back();
  }
}

void build_dyck(std::size_t len, std::vector<Symbol>& prefix, std::size_t height,
                std::vector<DyckPath>& out) {
  const std::size_t remaining = len - prefix.size();
  if (remaining == 0) {
    out.push_back(DyckPath::from_symbols(prefix));
    return;
  }
  if (height + 1 <= remaining - 1) {
    prefix.push_back(Symbol::U);
    build_dyck(len, prefix, height + 1, out);
    prefix.pop_back();
  }
  if (height > 0) {
    prefix.push_back(Symbol::D);
    build_dyck(len, prefix, height - 1, out);
    prefix.pop_back();
  }
}

}  // namespace

std::optional<PathViolation> find_violation(std::span<const Symbol> word) {
  // Positions of U steps not yet closed; the bottom one is reported when the
  // word ends above the axis.
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < word.size(); ++i) {
    switch (word[i]) {
      case Symbol::U: open.push_back(i); break;
      case Symbol::D:
        if (open.empty()) return PathViolation{ErrorCode::NegativePrefix, i};
        open.pop_back();
        break;
      case Symbol::H:
      case Symbol::I: break;
      default: return PathViolation{ErrorCode::InvalidSymbol, i};
    }
  }
  if (!open.empty()) return PathViolation{ErrorCode::Unbalanced, open.front()};
  return std::nullopt;
}

bool is_valid_path(std::span<const Symbol> word) {
  std::size_t height = 0;
  for (Symbol s : word) {
    if (s == Symbol::U) {
      ++height;
    } else if (s == Symbol::D) {
      if (height == 0) return false;
      --height;
    }
  }
  return height == 0;
}

TwoMotzkinPath TwoMotzkinPath::parse(std::string_view text) {
  return from_symbols(decode_text(text));
}

TwoMotzkinPath TwoMotzkinPath::from_symbols(std::vector<Symbol> symbols) {
  if (auto v = find_violation(symbols)) raise(*v);
  return TwoMotzkinPath(std::move(symbols));
}

TwoMotzkinPath TwoMotzkinPath::all_level(std::size_t m, Symbol level) {
  if (!is_level(level)) {
    throw Error(ErrorCode::InvalidSymbol, "all_level requires H or I");
  }
  return TwoMotzkinPath(std::vector<Symbol>(m, level));
}

std::string TwoMotzkinPath::str() const { return render(symbols_); }

std::ostream& operator<<(std::ostream& os, const TwoMotzkinPath& x) {
  return os << x.str();
}

DyckPath DyckPath::parse(std::string_view text) {
  return from_symbols(decode_text(text));
}

DyckPath DyckPath::from_symbols(std::vector<Symbol> symbols) {
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (!is_vertical(symbols[i])) {
      throw Error(ErrorCode::InvalidSymbol, "Dyck path holds only U and D", i);
    }
  }
  if (auto v = find_violation(symbols)) raise(*v);
  return DyckPath(std::move(symbols));
}

std::string DyckPath::str() const { return render(symbols_); }

SymbolCounts symbol_counts(const TwoMotzkinPath& x) {
  SymbolCounts c;
  for (Symbol s : x.symbols()) {
    switch (s) {
      case Symbol::U: ++c.u; break;
      case Symbol::H: ++c.h; break;
      case Symbol::I: ++c.i; break;
      case Symbol::D: ++c.d; break;
    }
  }
  return c;
}

DyckPath skeleton(const TwoMotzkinPath& x) {
  std::vector<Symbol> steps;
  for (Symbol s : x.symbols()) {
    if (is_vertical(s)) steps.push_back(s);
  }
  return DyckPath::from_symbols(std::move(steps));
}

std::vector<TwoMotzkinPath> enumerate_paths(std::size_t m, std::size_t cap) {
  if (m > cap) {
    throw Error(ErrorCode::CapExceeded, "enumeration of length " + std::to_string(m) +
                                            " exceeds cap " + std::to_string(cap));
  }
  std::vector<TwoMotzkinPath> out;
  out.reserve(catalan(m + 1).convert_to<std::size_t>());
  std::vector<Symbol> prefix;
  prefix.reserve(m);
  build_paths(m, prefix, 0, out);
  return out;
}

std::vector<DyckPath> enumerate_dyck(std::size_t k) {
  std::vector<DyckPath> out;
  std::vector<Symbol> prefix;
  build_dyck(2 * k, prefix, 0, out);
  return out;
}

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  // Each partial product r * (n - i) / (i + 1) is itself a binomial.
  for (std::size_t i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}

BigInt catalan(std::size_t n) { return binomial(2 * n, n) / (n + 1); }

BigInt motzkin(std::size_t n) {
  BigInt total = 0;
  for (std::size_t k = 0; 2 * k <= n; ++k) total += binomial(n, 2 * k) * catalan(k);
  return total;
}

std::vector<TwoMotzkinPath> read_paths(std::istream& in) {
  std::vector<TwoMotzkinPath> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(TwoMotzkinPath::parse(line));
  return out;
}

void write_paths(std::ostream& out, std::span<const TwoMotzkinPath> paths) {
  for (const auto& p : paths) out << p.str() << '\n';
}

}  // namespace ptmc

// Ordinals in Cantor normal form with lexicographic comparison.
//
// Sweep traces only ever measure below omega^2 (shape w*k + n: one limit
// node per w, trailing successor nodes as the finite part), but comparison
// and printing work for any normal form.
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace realind {

struct Ordinal {
  // descending exponents, positive coefficients; empty list is zero
  std::vector<std::pair<Ordinal, std::uint64_t>> terms;

  static Ordinal finite(std::uint64_t n) {
    Ordinal o;
    if (n > 0) o.terms.push_back({Ordinal{}, n});
    return o;
  }

  static Ordinal omega_times_plus(std::uint64_t k, std::uint64_t n) {
    Ordinal o;
    if (k > 0) o.terms.push_back({finite(1), k});
    if (n > 0) o.terms.push_back({Ordinal{}, n});
    return o;
  }

  bool is_zero() const { return terms.empty(); }
};

inline std::strong_ordering compare(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms.size(), b.terms.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = compare(a.terms[i].first, b.terms[i].first);
    if (c != std::strong_ordering::equal) return c;
    if (a.terms[i].second != b.terms[i].second)
      return a.terms[i].second <=> b.terms[i].second;
  }
  return a.terms.size() <=> b.terms.size();
}

inline bool operator==(const Ordinal& a, const Ordinal& b) {
  return compare(a, b) == std::strong_ordering::equal;
}

inline bool operator<(const Ordinal& a, const Ordinal& b) {
  return compare(a, b) == std::strong_ordering::less;
}

inline bool operator<=(const Ordinal& a, const Ordinal& b) { return !(b < a); }

inline std::string to_string(const Ordinal& o) {
  if (o.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [exp, coeff] : o.terms) {
    if (!first) out += '+';
    first = false;
    if (exp.is_zero()) {
      out += std::to_string(coeff);
      continue;
    }
    if (exp == Ordinal::finite(1)) {
      out += 'w';
    } else {
      out += "w^(" + to_string(exp) + ")";
    }
    if (coeff != 1) out += "*" + std::to_string(coeff);
  }
  return out;
}

}  // namespace realind

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace rmlab {

// All measures, distances and budgets that feed exact comparisons are kept as
// arbitrary-precision rationals; floating point only appears in Monte-Carlo
// summaries and statistical tests.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(const Int& num, const Int& den) { return Rat(num, den); }
inline Rat rat(std::int64_t num, std::int64_t den) { return Rat(num, den); }

inline Int rat_floor(const Rat& r) {
  Int q = numerator(r) / denominator(r);
  if (numerator(r) < 0 && q * denominator(r) != numerator(r)) --q;
  return q;
}

inline Int rat_ceil(const Rat& r) {
  Int q = numerator(r) / denominator(r);
  if (numerator(r) > 0 && q * denominator(r) != numerator(r)) ++q;
  return q;
}

inline Int ipow(Int base, unsigned exp) {
  Int acc = 1;
  while (exp) {
    if (exp & 1u) acc *= base;
    base *= base;
    exp >>= 1;
  }
  return acc;
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline std::string rat_string(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace rmlab

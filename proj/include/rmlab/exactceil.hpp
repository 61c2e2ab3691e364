#pragma once

#include <cstdint>

#include "rmlab/rational.hpp"

namespace rmlab::exactceil {

// Bit-reproducible ceilings of products involving logarithms and fractional
// powers. Lower and upper enclosures are computed with outward rounding and
// the precision is widened until both round to the same integer.

// ceil( c * m * ln(q) * q^(pow_num/pow_den) ).  Zero when c*m == 0.
std::uint64_t ceil_log_power(std::uint64_t c, std::uint64_t m, unsigned q, unsigned pow_num,
                             unsigned pow_den);

// ceil( c * m * ln(q) * num/den ) for a positive rational factor num/den.
std::uint64_t ceil_log_rational(std::uint64_t c, std::uint64_t m, unsigned q, const Int& num,
                                const Int& den);

// ceil( c * ln(N) * num/den ) for a big-integer N >= 1.
std::uint64_t ceil_count_log(std::uint64_t c, const Int& N, const Int& num, const Int& den);

}  // namespace rmlab::exactceil

#include "rmlab/exactceil.hpp"

#include <mpfr.h>

#include <stdexcept>
#include <string>

namespace rmlab::exactceil {
namespace {

void set_from_int(mpfr_t dst, const Int& v, mpfr_rnd_t rnd) {
  const std::string s = v.str();
  mpfr_set_str(dst, s.c_str(), 10, rnd);
}

std::intmax_t ceil_at(mpfr_t value) {
  mpfr_ceil(value, value);
  return mpfr_get_sj(value, MPFR_RNDN);
}

// Generic driver: compute() fills `out` with a directed-rounding enclosure of
// the target; precision doubles until both endpoints share a ceiling.
template <typename Fn>
std::uint64_t agree_ceil(const Fn& compute) {
  for (mpfr_prec_t prec = 128; prec <= 1 << 14; prec *= 2) {
    mpfr_t lo, hi;
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
    compute(lo, MPFR_RNDD);
    compute(hi, MPFR_RNDU);
    const std::intmax_t cl = ceil_at(lo);
    const std::intmax_t ch = ceil_at(hi);
    mpfr_clear(lo);
    mpfr_clear(hi);
    if (cl == ch) {
      if (cl < 0) throw std::logic_error("negative ceiling in budget formula");
      return static_cast<std::uint64_t>(cl);
    }
  }
  throw std::logic_error("ceiling did not stabilize; value may be an exact integer");
}

}  // namespace

std::uint64_t ceil_log_power(std::uint64_t c, std::uint64_t m, unsigned q, unsigned pow_num,
                             unsigned pow_den) {
  if (c == 0 || m == 0) return 0;
  if (q < 2) throw std::invalid_argument("ceil_log_power requires q >= 2");
  if (pow_den == 0) throw std::invalid_argument("zero denominator in power");
  return agree_ceil([&](mpfr_t out, mpfr_rnd_t rnd) {
    mpfr_set_ui(out, q, rnd);
    mpfr_log(out, out, rnd);  // ln q  (positive, so directed rounding composes)
    mpfr_mul_ui(out, out, static_cast<unsigned long>(c), rnd);
    mpfr_mul_ui(out, out, static_cast<unsigned long>(m), rnd);
    if (pow_num > 0) {
      mpfr_t w;
      mpfr_init2(w, mpfr_get_prec(out));
      mpfr_ui_pow_ui(w, q, pow_num, rnd);
      mpfr_rootn_ui(w, w, pow_den, rnd);
      mpfr_mul(out, out, w, rnd);
      mpfr_clear(w);
    }
  });
}

std::uint64_t ceil_log_rational(std::uint64_t c, std::uint64_t m, unsigned q, const Int& num,
                                const Int& den) {
  if (c == 0 || m == 0) return 0;
  if (num <= 0 || den <= 0) throw std::invalid_argument("rational factor must be positive");
  return agree_ceil([&](mpfr_t out, mpfr_rnd_t rnd) {
    mpfr_set_ui(out, q, rnd);
    mpfr_log(out, out, rnd);
    mpfr_mul_ui(out, out, static_cast<unsigned long>(c), rnd);
    mpfr_mul_ui(out, out, static_cast<unsigned long>(m), rnd);
    mpfr_t w;
    mpfr_init2(w, mpfr_get_prec(out));
    set_from_int(w, num, rnd);
    mpfr_mul(out, out, w, rnd);
    set_from_int(w, den, rnd == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD);  // divisor rounds opposite
    mpfr_div(out, out, w, rnd);
    mpfr_clear(w);
  });
}

std::uint64_t ceil_count_log(std::uint64_t c, const Int& N, const Int& num, const Int& den) {
  if (c == 0 || N <= 1) return 0;
  if (num <= 0 || den <= 0) throw std::invalid_argument("rational factor must be positive");
  return agree_ceil([&](mpfr_t out, mpfr_rnd_t rnd) {
    set_from_int(out, N, rnd);
    mpfr_log(out, out, rnd);
    mpfr_mul_ui(out, out, static_cast<unsigned long>(c), rnd);
    mpfr_t w;
    mpfr_init2(w, mpfr_get_prec(out));
    set_from_int(w, num, rnd);
    mpfr_mul(out, out, w, rnd);
    set_from_int(w, den, rnd == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD);
    mpfr_div(out, out, w, rnd);
    mpfr_clear(w);
  });
}

}  // namespace rmlab::exactceil

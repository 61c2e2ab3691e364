#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmlab/bounds.hpp"
#include "rmlab/testers.hpp"

using namespace rmlab;
using namespace rmlab::bounds;
using gf::Field;

namespace {

Int binom(unsigned n, unsigned k) {
  Int num = 1, den = 1;
  for (unsigned i = 0; i < k; ++i) {
    num *= n - i;
    den *= i + 1;
  }
  return num / den;
}

}  // namespace

TEST_CASE("lex prefix counts") {
  // q=2: prefixes 00..00, 00..01, 00..10, 00..11 have weights 0,1,1,2
  for (unsigned n : {2u, 5u, 9u}) CHECK(lex_count_low_weight(2, n, Int(4), 1) == 3);
  CHECK(lex_count_low_weight(2, 3, Int(8), 1) == 4);
  // everything counts when d is the maximal weight
  CHECK(lex_count_low_weight(2, 3, Int(8), 3) == 8);
  CHECK(lex_count_low_weight(3, 2, Int(9), 4) == 9);
}

TEST_CASE("digit DP agrees with direct enumeration") {
  for (unsigned q : {2u, 3u})
    for (unsigned n : {6u, 9u, 12u})
      for (unsigned d : {1u, 2u, 4u})
        for (std::uint64_t k : {1ull, 7ull, 100ull, 1000ull, 4096ull}) {
          if (Int(k) > ipow(Int(q), n)) continue;
          CHECK(lex_count_low_weight_enum(q, n, k, d) ==
                lex_count_low_weight(q, n, Int(k), d));
        }
  // force the DP path with a prefix count beyond the enumeration threshold
  const Int big = ipow(Int(3), 16);  // 43 M > 2^24
  CHECK(lex_count_low_weight(3, 18, big, 2) == binom(16 + 2, 2));
  CHECK(lex_count_low_weight(2, 30, ipow(Int(2), 30), 1) == 31);
}

TEST_CASE("lex count is monotone in k and d") {
  for (unsigned q : {2u, 3u}) {
    Int prev = 0;
    const std::uint64_t cap = q == 2 ? 16 : 81;  // q^4
    for (std::uint64_t k = 0; k <= cap; ++k) {
      const Int cur = lex_count_low_weight(q, 4, Int(k), 2);
      CHECK(cur >= prev);
      prev = cur;
    }
    const Int kk = std::min<Int>(Int(50), ipow(Int(q), 4));
    for (unsigned d = 1; d <= 4; ++d)
      CHECK(lex_count_low_weight(q, 4, kk, d) <= lex_count_low_weight(q, 4, kk, d + 1));
  }
}

TEST_CASE("prefix counts of q^r match the binomial form for d < q") {
  for (unsigned q : {2u, 3u, 4u})
    for (unsigned r = 1; r <= 4; ++r)
      for (unsigned d = 1; d < q; ++d)
        CHECK(lex_count_low_weight(q, 8, ipow(Int(q), r), d) == binom(r + d, d));
}

TEST_CASE("query lower bound report") {
  const BoundReport rep = query_lower_bound(2, 8, 1, Int(4));
  CHECK(rep.lower_bound == 3);
  REQUIRE(rep.explicit_floor.has_value());
  CHECK(*rep.explicit_floor == Rat(2));
  CHECK(rep.lower_bound >= rat_ceil(*rep.explicit_floor));

  CHECK(query_lower_bound(2, 6, 1, Int(1)).lower_bound == 1);
  // no weight restriction binds when d >= n(q-1)
  CHECK(query_lower_bound(2, 4, 4, Int(11)).lower_bound == 11);
  CHECK_THROWS_AS(query_lower_bound(2, 4, 1, Int(0)), std::domain_error);

  // explicit floor <= lower bound across a small grid (d <= q)
  for (unsigned q : {2u, 3u})
    for (unsigned d = 1; d <= q; ++d)
      for (std::uint64_t t : {1ull, 2ull, 5ull, 64ull, 600ull}) {
        const BoundReport r = query_lower_bound(q, 8, d, Int(t));
        REQUIRE(r.explicit_floor.has_value());
        CHECK(Rat(r.lower_bound) >= *r.explicit_floor);
      }
}

TEST_CASE("rank witness") {
  RandomStream rng(3);
  auto f2 = Field::make(2);
  // r = n: the evaluation matrix on the whole space has full rank = dim
  const auto full = rank_witness(f2, 3, 2, 3, rng);
  CHECK(full.rank_lex == rm::rm_dim(3, 2, 2));
  CHECK(full.holds);

  const auto small = rank_witness(f2, 4, 1, 2, rng);
  CHECK(small.required == 3);
  CHECK(small.rank_lex >= 3);

  // d = 0: constants evaluate to rank 1 on any nonempty set
  const auto constant = rank_witness(f2, 4, 0, 2, rng);
  CHECK(constant.rank_lex == 1);
  CHECK(constant.required == 1);

  auto f3 = Field::make(3);
  for (unsigned n = 3; n <= 5; ++n)
    for (unsigned d = 1; d <= 2; ++d)
      for (unsigned r = 1; r <= 3; ++r) CHECK(rank_witness(f3, n, d, r, rng).holds);
}

TEST_CASE("budget ratio against q^{-c}") {
  auto f2 = Field::make(2);
  const auto rep = sk_ratio_check(f2, 1, 1, 35);
  CHECK(rep.guaranteed_regime);
  CHECK(rep.holds);

  // small k: outside the guaranteed regime the ratio is only reported
  const auto small = sk_ratio_check(f2, 1, 1, 3);
  CHECK_FALSE(small.guaranteed_regime);
  CHECK_FALSE(small.holds);  // s_3 = 556 > 2^3 / 2

  CHECK(sk_ratio_monotone(f2, 1, 2, 35));
  auto f3 = Field::make(3);
  CHECK(sk_ratio_monotone(f3, 2, 4, 36));
}

TEST_CASE("k_adv sizing") {
  auto f2 = Field::make(2);
  // t = 0: the minimum legal dimension
  const auto zero = k_adv_size(f2, 1, Rat(0), Rat(1, 4));
  CHECK(zero.feasible);
  CHECK(zero.k == 3);

  const auto sized = k_adv_size(f2, 1, Rat(4), Rat(1, 4));
  REQUIRE(sized.feasible);
  // the returned k satisfies the safety inequality exactly; k - 1 does not
  const Rat at_k = Rat(4) * Rat(Int(sized.q_total) * Int(sized.q_total)) /
                   Rat(ipow(Int(2), sized.k));
  CHECK(at_k <= Rat(1, 5));
  {
    const std::uint64_t s_prev = rm::rm_parameters(f2, 1, sized.k - 1).s_k;
    const unsigned reps_prev = testers::repetition_count(s_prev, Rat(1, 4));
    const Rat at_prev = Rat(4) * Rat(Int(s_prev) * Int(reps_prev) * Int(s_prev) * Int(reps_prev)) /
                        Rat(ipow(Int(2), sized.k - 1));
    CHECK(at_prev > Rat(1, 5));
  }

  // doubling t moves k by at most ceil(log_q 2) + 1
  unsigned prev_k = k_adv_size(f2, 1, Rat(1), Rat(1, 4)).k;
  for (Rat t(2); t <= 64; t *= 2) {
    const auto res = k_adv_size(f2, 1, t, Rat(1, 4));
    REQUIRE(res.feasible);
    CHECK(res.k <= prev_k + 2);
    CHECK(res.k >= prev_k);
    prev_k = res.k;
  }

  // infeasibility within a hard cap is reported, not thrown
  const auto capped = k_adv_size(f2, 1, Rat(1), Rat(1, 4), Rat(1, 5), 8);
  CHECK_FALSE(capped.feasible);
}

TEST_CASE("lifted online feasibility gate") {
  auto f2 = Field::make(2);
  auto fam = rm::make_lifted_family(rm::LiftedCode::rm_base(f2, 2, 1, 6));
  CHECK_FALSE(lifted_online_feasible(*fam, 4, Rat(1)));
  CHECK(lifted_online_feasible(*fam, 6, Rat(1, 10000000)));
}

TEST_CASE("digit DP equals enumeration on the full small grid") {
  for (unsigned d : {1u, 2u}) {
    for (std::uint64_t k = 0; k <= 4096; ++k)
      CHECK(lex_count_low_weight_dp(2, 12, Int(k), d) ==
            lex_count_low_weight_enum(2, 12, k, d));
    for (std::uint64_t k = 0; k <= 4096; ++k)
      CHECK(lex_count_low_weight_dp(3, 8, Int(k), d) ==
            lex_count_low_weight_enum(3, 8, k, d));
  }
}

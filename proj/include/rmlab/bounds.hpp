#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmlab/rational.hpp"
#include "rmlab/rm.hpp"
#include "rmlab/rng.hpp"

namespace rmlab::bounds {

using gf::Elem;
using gf::FieldPtr;
using space::Point;

// The first k tuples of {0..q-1}^n in lexicographic order with coordinate 0
// most significant. The j-th tuple is the base-q expansion of j. Returned as
// point indices (which are little-endian), so the conversion is explicit.
std::vector<Point> lex_set(unsigned q, unsigned n, std::uint64_t k);
std::vector<std::vector<Elem>> lex_set_vectors(unsigned q, unsigned n, std::uint64_t k);

// |{x in M_q^n(k) : sum x_i <= d}|: direct enumeration for small k, digit DP
// over the base-q expansion otherwise. The two agree everywhere.
Int lex_count_low_weight(unsigned q, unsigned n, const Int& k, unsigned d);
Int lex_count_low_weight_enum(unsigned q, unsigned n, std::uint64_t k, unsigned d);
Int lex_count_low_weight_dp(unsigned q, unsigned n, const Int& k, unsigned d);

struct BoundReport {
  unsigned q = 0, n = 0, d = 0;
  Int t;
  Int lower_bound;                      // |M_q^n(t)_{<=d}|
  std::optional<Rat> explicit_floor;    // (floor(log_q t)/d)^d when d <= q
  std::string to_json() const;
};

// Query lower bound for testing against a t-online erasure adversary,
// together with the explicit closed-form floor when d <= q.
BoundReport query_lower_bound(unsigned q, unsigned n, unsigned d, const Int& t);

struct RankWitnessReport {
  std::uint64_t set_size = 0;
  std::uint64_t rank_lex = 0;       // rank of the evaluation matrix on the lex prefix
  Int required;                      // |M_q^n(q^r)_{<=d}|
  bool holds = false;                // rank_lex >= required (asserted)
  std::uint64_t rank_random = 0;     // same matrix on a random set; report-only
};

// Rank of the degree-d monomial evaluation matrix on S = M_q^n(q^r); the
// lower bound is asserted for the lex prefix and only reported for random S.
RankWitnessReport rank_witness(const FieldPtr& field, unsigned n, unsigned d, unsigned r,
                               RandomStream& rng);

struct SkRatioReport {
  unsigned q = 0, d = 0, c = 0, k = 0;
  std::uint64_t s_k = 0;
  bool guaranteed_regime = false;  // k >= 8d + 3c + 24
  bool holds = false;              // s_k / q^k <= q^{-c}, exact
};

// Claim-style ratio check: asserts s_k q^c <= q^k inside the guaranteed
// regime, reports the ratio outside it.
SkRatioReport sk_ratio_check(const FieldPtr& field, unsigned d, unsigned c, unsigned k);

// Exact monotonicity of s_k / q^k over k in [k_lo, k_hi]: q s_k >= s_{k+1}.
bool sk_ratio_monotone(const FieldPtr& field, unsigned d, unsigned k_lo, unsigned k_hi);

struct KAdvResult {
  bool feasible = false;
  unsigned k = 0;
  std::uint64_t s_k = 0;
  unsigned repetitions = 0;
  std::uint64_t q_total = 0;
  Rat hit_bound;  // t * q_total^2 / q^k at the returned k
};

// Smallest k with t * (reps(k) * s_k)^2 / q^k <= safety, where reps(k) is the
// repeated-tester round count at distance eps. Searches the implementation's
// actual total query count, up to the hard cap.
KAdvResult k_adv_size(const FieldPtr& field, unsigned d, const Rat& t, const Rat& eps,
                      const Rat& safety = Rat(1, 5), unsigned hard_cap = 64);

// Feasibility gate for lifted-code online testing: Q_k^2 t / q^k <= 1/100.
bool lifted_online_feasible(const rm::CodeFamily& family, unsigned k, const Rat& t);

}  // namespace rmlab::bounds

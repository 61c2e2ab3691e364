#include "rmlab/bounds.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rmlab/testers.hpp"

namespace rmlab::bounds {

std::vector<std::vector<Elem>> lex_set_vectors(unsigned q, unsigned n, std::uint64_t k) {
  std::vector<std::vector<Elem>> out;
  out.reserve(k);
  for (std::uint64_t j = 0; j < k; ++j) {
    std::vector<Elem> v(n, 0);
    std::uint64_t rest = j;
    for (unsigned c = n; c-- > 0 && rest;) {  // coordinate 0 most significant
      v[c] = static_cast<Elem>(rest % q);
      rest /= q;
    }
    if (rest) throw std::invalid_argument("lex_set: k exceeds q^n");
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Point> lex_set(unsigned q, unsigned n, std::uint64_t k) {
  std::vector<Point> out;
  out.reserve(k);
  for (const auto& v : lex_set_vectors(q, n, k)) out.push_back(space::vec_to_point(q, v));
  return out;
}

Int lex_count_low_weight_enum(unsigned q, [[maybe_unused]] unsigned n, std::uint64_t k,
                              unsigned d) {
  // the j-th lex tuple has digit sum = base-q digit sum of j
  std::uint64_t count = 0;
  for (std::uint64_t j = 0; j < k; ++j) {
    unsigned s = 0;
    std::uint64_t rest = j;
    while (rest) {
      s += static_cast<unsigned>(rest % q);
      rest /= q;
    }
    count += s <= d;
  }
  return Int(count);
}

Int lex_count_low_weight(unsigned q, unsigned n, const Int& k, unsigned d) {
  if (k < 0) throw std::domain_error("k must be nonnegative");
  if (k > ipow(Int(q), n)) throw std::domain_error("k exceeds q^n");
  if (k <= Int(1ull << 24))
    return lex_count_low_weight_enum(q, n, k.convert_to<std::uint64_t>(), d);
  return lex_count_low_weight_dp(q, n, k, d);
}

Int lex_count_low_weight_dp(unsigned q, unsigned n, const Int& k, unsigned d) {
  if (k < 0) throw std::domain_error("k must be nonnegative");
  if (k > ipow(Int(q), n)) throw std::domain_error("k exceeds q^n");
  if (k == ipow(Int(q), n)) {
    // no prefix constraint: all vectors with digit sum <= d
    std::vector<Int> free(d + 1, 0);
    free[0] = 1;
    for (unsigned r = 0; r < n; ++r) {
      std::vector<Int> next(d + 1, 0);
      for (unsigned s = 0; s <= d; ++s) {
        if (free[s] == 0) continue;
        for (unsigned e = 0; e < q && s + e <= d; ++e) next[s + e] += free[s];
      }
      free.swap(next);
    }
    Int total = 0;
    for (const Int& v : free) total += v;
    return total;
  }
  // digit DP over the base-q expansion of k: count j < k with digit sum <= d
  std::vector<unsigned> digits(n, 0);
  Int rest = k;
  for (unsigned i = 0; i < n && rest != 0; ++i) {
    digits[i] = static_cast<unsigned>((rest % q).convert_to<std::uint64_t>());
    rest /= q;
  }
  std::reverse(digits.begin(), digits.end());  // most significant first
  // counts[s]: suffixes still tight are handled on the fly; free[s] counts
  // completions of a free suffix with digit sum exactly s
  Int total = 0;
  unsigned prefix_sum = 0;
  for (unsigned pos = 0; pos < n; ++pos) {
    const unsigned remaining = n - pos - 1;
    // free completions table for the remaining digits
    std::vector<Int> free(d + 1, 0);
    free[0] = 1;
    for (unsigned r = 0; r < remaining; ++r) {
      std::vector<Int> next(d + 1, 0);
      for (unsigned s = 0; s <= d; ++s) {
        if (free[s] == 0) continue;
        for (unsigned e = 0; e < q && s + e <= d; ++e) next[s + e] += free[s];
      }
      free.swap(next);
    }
    std::vector<Int> cumulative(d + 2, 0);
    for (unsigned s = 0; s <= d; ++s) cumulative[s + 1] = cumulative[s] + free[s];
    for (unsigned e = 0; e < digits[pos]; ++e) {
      if (prefix_sum + e > d) break;
      total += cumulative[d - prefix_sum - e + 1];
    }
    prefix_sum += digits[pos];
    if (prefix_sum > d) break;
  }
  return total;
}

std::string BoundReport::to_json() const {
  nlohmann::json j;
  j["q"] = q;
  j["n"] = n;
  j["d"] = d;
  j["t"] = t.str();
  j["lower_bound"] = lower_bound.str();
  if (explicit_floor) j["explicit_floor"] = rat_string(*explicit_floor);
  return j.dump();
}

BoundReport query_lower_bound(unsigned q, unsigned n, unsigned d, const Int& t) {
  if (t < 1) throw std::domain_error("query_lower_bound requires t >= 1");
  BoundReport rep;
  rep.q = q;
  rep.n = n;
  rep.d = d;
  rep.t = t;
  const Int clipped = std::min(t, ipow(Int(q), n));
  rep.lower_bound = lex_count_low_weight(q, n, clipped, d);
  if (d <= q && d >= 1) {
    // floor(log_q t)
    unsigned e = 0;
    Int pw = q;
    while (pw <= t) {
      ++e;
      pw *= q;
    }
    const Rat base = Rat(Int(e), Int(d));
    Rat val = 1;
    for (unsigned i = 0; i < d; ++i) val *= base;
    rep.explicit_floor = val;
  }
  return rep;
}

RankWitnessReport rank_witness(const FieldPtr& field, unsigned n, unsigned d, unsigned r,
                               RandomStream& rng) {
  const unsigned q = field->q();
  const std::uint64_t set_size = space::domain_size(q, r);
  if (set_size > (1ull << 16)) throw std::length_error("rank witness budget exceeded");
  const auto exps = rm::monomial_exponents(n, q, d);
  const auto eval_rank = [&](const std::vector<std::vector<Elem>>& pts) {
    space::MatrixFq m(pts.size(), exps.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < exps.size(); ++j) {
        Elem acc = 1;
        for (unsigned c = 0; c < n && acc != 0; ++c)
          if (exps[j][c]) acc = field->mul(acc, field->pow(pts[i][c], exps[j][c]));
        m.at(i, j) = acc;
      }
    return space::matrix_rank(*field, m);
  };

  RankWitnessReport rep;
  rep.set_size = set_size;
  rep.required = lex_count_low_weight(q, n, Int(set_size), d);
  rep.rank_lex = eval_rank(lex_set_vectors(q, n, set_size));
  rep.holds = Int(rep.rank_lex) >= rep.required;
  if (!rep.holds)
    throw LemmaViolation("evaluation-matrix rank fell below the lex-prefix bound");

  // random S of the same size, rank reported without assertion
  const std::uint64_t total = space::domain_size(q, n);
  std::set<Point> pts;
  while (pts.size() < set_size) pts.insert(rng.below(total));
  std::vector<std::vector<Elem>> rand_pts;
  for (Point p : pts) rand_pts.push_back(space::point_to_vec(q, n, p));
  rep.rank_random = eval_rank(rand_pts);
  return rep;
}

SkRatioReport sk_ratio_check(const FieldPtr& field, unsigned d, unsigned c, unsigned k) {
  SkRatioReport rep;
  rep.q = field->q();
  rep.d = d;
  rep.c = c;
  rep.k = k;
  rep.s_k = rm::rm_parameters(field, d, k).s_k;
  rep.guaranteed_regime = k >= 8 * d + 3 * c + 24;
  rep.holds = Int(rep.s_k) * ipow(Int(rep.q), c) <= ipow(Int(rep.q), k);
  if (rep.guaranteed_regime && !rep.holds)
    throw LemmaViolation("s_k/q^k exceeded q^{-c} inside the guaranteed regime");
  return rep;
}

bool sk_ratio_monotone(const FieldPtr& field, unsigned d, unsigned k_lo, unsigned k_hi) {
  std::uint64_t prev = rm::rm_parameters(field, d, k_lo).s_k;
  for (unsigned k = k_lo + 1; k <= k_hi; ++k) {
    const std::uint64_t cur = rm::rm_parameters(field, d, k).s_k;
    // s_{k+1}/q^{k+1} <= s_k/q^k  <=>  s_{k+1} <= q s_k
    if (Int(cur) > Int(field->q()) * Int(prev)) return false;
    prev = cur;
  }
  return true;
}

KAdvResult k_adv_size(const FieldPtr& field, unsigned d, const Rat& t, const Rat& eps,
                      const Rat& safety, unsigned hard_cap) {
  if (t < 0) throw std::domain_error("erasure rate must be nonnegative");
  if (eps <= 0) throw std::domain_error("distance parameter must be positive");
  const unsigned t_qd = rm::testing_dimension(*field, d);
  KAdvResult res;
  if (t == 0) {
    res.feasible = true;
    res.k = t_qd;
    res.s_k = rm::rm_parameters(field, d, res.k).s_k;
    res.repetitions = testers::repetition_count(res.s_k, eps);
    res.q_total = res.s_k * res.repetitions;
    res.hit_bound = 0;
    return res;
  }
  for (unsigned k = t_qd; k <= hard_cap; ++k) {
    const std::uint64_t s_k = rm::rm_parameters(field, d, k).s_k;
    const unsigned reps = testers::repetition_count(s_k, eps);
    const std::uint64_t q_total = s_k * reps;
    const Rat bound = t * Rat(Int(q_total) * Int(q_total)) / Rat(ipow(Int(field->q()), k));
    if (bound <= safety) {
      res.feasible = true;
      res.k = k;
      res.s_k = s_k;
      res.repetitions = reps;
      res.q_total = q_total;
      res.hit_bound = bound;
      return res;
    }
  }
  res.feasible = false;
  res.k = hard_cap;
  return res;
}

bool lifted_online_feasible(const rm::CodeFamily& family, unsigned k, const Rat& t) {
  const std::uint64_t qk = family.query_budget(k);
  const Rat lhs = Rat(Int(qk) * Int(qk)) * t / Rat(ipow(Int(family.field()->q()), k));
  return lhs <= Rat(1, 100);
}

}  // namespace rmlab::bounds

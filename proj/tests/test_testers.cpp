#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "rmlab/adversary.hpp"
#include "rmlab/stats.hpp"
#include "rmlab/testers.hpp"

using namespace rmlab;
using namespace rmlab::testers;
using gf::Elem;
using gf::Field;
using gf::FieldPtr;
using space::Point;

namespace {

FunctionTable table_of(FieldPtr f, unsigned n, std::vector<Elem> vals) {
  return FunctionTable(std::move(f), n, std::move(vals));
}

bool witness_matches(const rm::CodeFamily& fam, unsigned k,
                     const std::vector<std::pair<Point, Elem>>& assignment,
                     const std::vector<Elem>& witness) {
  const gf::Field& f = *fam.field();
  std::vector<Elem> row(witness.size());
  for (const auto& [pt, val] : assignment) {
    fam.basis_row(k, pt, row.data());
    Elem acc = 0;
    for (std::size_t i = 0; i < row.size(); ++i) acc = f.add(acc, f.mul(row[i], witness[i]));
    if (acc != val) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("consistency check against the affine family on F_2^2") {
  auto f2 = Field::make(2);
  auto fam = rm::make_rm_family(f2, 1);

  // points 00, 10, 01 with values 0, 1, 1: x_0 + x_1 fits
  const std::vector<std::pair<Point, Elem>> ok{{0, 0}, {1, 1}, {2, 1}};
  const auto r1 = consistency_check(*fam, 2, ok);
  CHECK(r1.consistent);
  REQUIRE(r1.witness.has_value());
  CHECK(witness_matches(*fam, 2, ok, *r1.witness));

  // adding 11 -> 1 leaves no affine function
  const std::vector<std::pair<Point, Elem>> bad{{0, 0}, {1, 1}, {2, 1}, {3, 1}};
  CHECK_FALSE(consistency_check(*fam, 2, bad).consistent);

  // the empty assignment is vacuously consistent
  CHECK(consistency_check(*fam, 2, {}).consistent);

  // the extensional route agrees with the linear route
  auto lifted = rm::make_lifted_family(rm::LiftedCode::rm_base(f2, 2, 1, 2));
  CHECK(consistency_check(*lifted, 2, ok).consistent);
  CHECK_FALSE(consistency_check(*lifted, 2, bad).consistent);
}

TEST_CASE("sample-based tester: completeness and a forced rejection") {
  auto f2 = Field::make(2);
  auto fam = rm::make_rm_family(f2, 1);
  RandomStream rng(101);
  for (int i = 0; i < 200; ++i) {
    const FunctionTable g = fam->random_codeword(3, rng);
    TableOracle oracle(g);
    const auto res = sample_based_test(oracle, *fam, 3, 20, rng);
    CHECK(res.verdict.decision == Decision::kAccept);
  }
  // indicator of the origin: with 200 draws on 4 points, every point is
  // queried and no affine table matches (1,0,0,0)
  const FunctionTable ind = table_of(f2, 2, {1, 0, 0, 0});
  TableOracle oracle(ind);
  RandomStream r2(5);
  const auto res = sample_based_test(oracle, *fam, 2, 200, r2);
  CHECK(res.verdict.decision == Decision::kReject);
  CHECK(res.verdict.reason == Reason::kNoCodewordFits);
}

TEST_CASE("sample-based tester rejects far functions at rate >= 1/4") {
  // s >= ln(2 |C|) / eps with |C| = 8, eps = 1/4 gives s = 12
  auto f2 = Field::make(2);
  auto fam = rm::make_rm_family(f2, 1);
  const FunctionTable ind = table_of(f2, 2, {1, 0, 0, 0});
  const std::uint64_t s = 12;
  const std::int64_t trials = 10000;
  std::int64_t rejects = 0;
  RandomStream rng(7);
  for (std::int64_t i = 0; i < trials; ++i) {
    TableOracle oracle(ind);
    RandomStream r = rng.child(static_cast<std::uint64_t>(i));
    rejects += sample_based_test(oracle, *fam, 2, s, r).verdict.decision == Decision::kReject;
  }
  CHECK(stats::consistent_with_rate_at_least(rejects, trials, 0.25, 3.0));
}

TEST_CASE("semi-sample tester completeness and k = n equivalence") {
  auto f2 = Field::make(2);
  auto fam = rm::make_rm_family(f2, 1);
  RandomStream rng(11);
  for (int i = 0; i < 200; ++i) {
    const FunctionTable g = fam->random_codeword(4, rng);
    TableOracle oracle(g);
    for (unsigned k = 3; k <= 4; ++k) {
      const auto res = semi_sample_test(oracle, *fam, 4, k, 32, rng);
      CHECK(res.verdict.decision == Decision::kAccept);
    }
  }

  // at k = n the only subspace is the full space, so rejection statistics
  // match the sample-based tester
  const FunctionTable ind = table_of(f2, 3, {1, 0, 0, 0, 0, 0, 0, 0});
  const std::int64_t trials = 4000;
  std::int64_t ra = 0, rb = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    TableOracle oracle(ind);
    RandomStream r1 = rng.child(2 * static_cast<std::uint64_t>(i));
    RandomStream r2 = rng.child(2 * static_cast<std::uint64_t>(i) + 1);
    ra += semi_sample_test(oracle, *fam, 3, 3, 10, r1).verdict.decision == Decision::kReject;
    rb += sample_based_test(oracle, *fam, 3, 10, r2).verdict.decision == Decision::kReject;
  }
  const double p1 = double(ra) / trials, p2 = double(rb) / trials;
  const double pooled = (double(ra) + double(rb)) / (2.0 * trials);
  const double sd = std::sqrt(pooled * (1 - pooled) * 2.0 / trials);
  CHECK(std::fabs(p1 - p2) <= 3 * sd);
}

TEST_CASE("semi-sample queries are uniform inside the chosen subspace") {
  auto f2 = Field::make(2);
  auto fam = rm::make_rm_family(f2, 1);
  const FunctionTable zero(f2, 4);
  TableOracle oracle(zero);
  RandomStream rng(19);
  const std::uint64_t queries = 4000;
  const auto res = semi_sample_test(oracle, *fam, 4, 2, queries, rng);
  std::map<Point, std::uint64_t> freq;
  for (Point p : res.plan.points) freq[p]++;
  CHECK(freq.size() == 4);  // the whole 2-dim subspace is hit
  double chi2 = 0;
  const double expect = double(queries) / 4.0;
  for (const auto& [pt, count] : freq) chi2 += (count - expect) * (count - expect) / expect;
  CHECK(stats::chi_squared_pvalue(chi2, 3) > 1e-4);
}

TEST_CASE("repetition count formula") {
  CHECK(repetition_count(3, Rat(1, 2)) == 7);    // ceil(4 (2/3 + 1))
  CHECK(repetition_count(10, Rat(1, 10)) == 8);  // Q eps = 1: ceil(8)
  CHECK(repetition_count(512, Rat(1, 4)) == 5);
  // Q eps >= 1 keeps the round count at most 8
  for (std::uint64_t qq : {1ull, 2ull, 17ull, 100ull})
    CHECK(repetition_count(qq, Rat(Int(qq), Int(1)) / Rat(Int(qq) * Int(qq))) <= 8);
}

TEST_CASE("repeated tester meets the 2/3 contract on a far input") {
  auto f2 = Field::make(2);
  auto fam = rm::make_rm_family(f2, 1);
  const FunctionTable ind = table_of(f2, 2, {1, 0, 0, 0});
  TesterSpec spec;
  spec.kind = TesterKind::kSample;
  spec.code = fam;
  spec.n = 2;
  spec.queries = 12;
  const std::int64_t trials = 3000;
  std::int64_t rejects = 0;
  RandomStream rng(23);
  for (std::int64_t i = 0; i < trials; ++i) {
    TableOracle oracle(ind);
    RandomStream r = rng.child(static_cast<std::uint64_t>(i));
    rejects +=
        repeated_tester(oracle, spec, Rat(1, 4), r).verdict.decision == Decision::kReject;
  }
  CHECK(stats::consistent_with_rate_at_least(rejects, trials, 2.0 / 3.0, 3.0));

  // completeness of the repeated tester
  RandomStream rc(29);
  for (int i = 0; i < 100; ++i) {
    const FunctionTable g = fam->random_codeword(2, rc);
    TableOracle oracle(g);
    CHECK(repeated_tester(oracle, spec, Rat(1, 4), rc).verdict.decision == Decision::kAccept);
  }
}

TEST_CASE("flat tester decides by full restriction membership") {
  auto f2 = Field::make(2);
  auto fam = rm::make_rm_family(f2, 1);
  RandomStream rng(37);
  for (int i = 0; i < 50; ++i) {
    const FunctionTable g = fam->random_codeword(4, rng);
    TableOracle oracle(g);
    CHECK(flat_test(oracle, *fam, 4, 3, rng).verdict.decision == Decision::kAccept);
  }
  const FunctionTable cubic =
      table_of(f2, 3, {0, 0, 0, 0, 0, 0, 0, 1});  // x0 x1 x2, degree 3
  std::int64_t rejected = 0;
  for (int i = 0; i < 200; ++i) {
    TableOracle oracle(cubic);
    rejected += flat_test(oracle, *fam, 3, 3, rng).verdict.decision == Decision::kReject;
  }
  CHECK(rejected == 200);  // k = n: the restriction is the function itself
}

TEST_CASE("online wrapper accepts on the first erased answer") {
  auto f2 = Field::make(2);
  auto fam = rm::make_rm_family(f2, 1);
  // input with every entry erased: the first query halts the run
  FunctionTable all_erased(f2, 2);
  for (Point x = 0; x < 4; ++x) all_erased.set(x, gf::kErased);
  adversary::OracleSession session(all_erased, {}, adversary::make_strategy("none"),
                                   RandomStream(0));
  TesterSpec spec;
  spec.kind = TesterKind::kSample;
  spec.code = fam;
  spec.n = 2;
  spec.queries = 5;
  RandomStream rng(1);
  const auto res = run_tester(session, spec, rng, ErasurePolicy::kAcceptHalt);
  CHECK(res.verdict.decision == Decision::kAccept);
  CHECK(res.verdict.reason == Reason::kErasureSeen);
  CHECK(res.plan.points.size() == 1);

  // the offline policy treats the same answer as a precondition violation
  adversary::OracleSession s2(all_erased, {}, adversary::make_strategy("none"),
                              RandomStream(0));
  RandomStream rng2(1);
  CHECK_THROWS_AS(run_tester(s2, spec, rng2, ErasurePolicy::kForbid), std::domain_error);
}

TEST_CASE("zero-rate adversary reproduces the offline verdict bitwise") {
  auto f2 = Field::make(2);
  auto fam = rm::make_rm_family(f2, 1);
  const FunctionTable ind = table_of(f2, 3, {1, 0, 1, 0, 0, 1, 1, 0});
  TesterSpec spec;
  spec.kind = TesterKind::kSemiSample;
  spec.code = fam;
  spec.n = 3;
  spec.k = 3;
  spec.queries = 9;
  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    TableOracle offline(ind);
    RandomStream r1(seed);
    const auto res_off = run_tester(offline, spec, r1);

    adversary::SessionConfig cfg;  // erasure, fixed-rate, t = 0
    adversary::OracleSession session(ind, cfg, adversary::make_strategy("random_eraser"),
                                     RandomStream(7));
    RandomStream r2(seed);
    const auto res_on = run_tester(session, spec, r2, ErasurePolicy::kAcceptHalt);
    CHECK(res_off.verdict.decision == res_on.verdict.decision);
    CHECK(res_off.plan.points == res_on.plan.points);
  }
}

TEST_CASE("corruption sessions give two-sided error") {
  auto f2 = Field::make(2);
  auto fam = rm::make_rm_family(f2, 1);
  TesterSpec spec;
  spec.kind = TesterKind::kSample;
  spec.code = fam;
  spec.n = 4;
  spec.queries = 24;
  RandomStream rng(43);
  int rejects_corruption = 0, rejects_erasure = 0;
  for (int i = 0; i < 300; ++i) {
    const FunctionTable g = fam->random_codeword(4, rng);
    adversary::SessionConfig cfg;
    cfg.mode = adversary::Mode::kCorruption;
    cfg.rate = 2;
    adversary::OracleSession session(g, cfg, adversary::make_strategy("random_corruptor"),
                                     rng.split());
    RandomStream r = rng.split();
    rejects_corruption +=
        run_tester(session, spec, r, ErasurePolicy::kAcceptHalt).verdict.decision ==
        Decision::kReject;

    adversary::SessionConfig ecfg;
    ecfg.rate = 2;
    adversary::OracleSession esession(g, ecfg, adversary::make_strategy("random_eraser"),
                                      rng.split());
    RandomStream r2 = rng.split();
    rejects_erasure +=
        run_tester(esession, spec, r2, ErasurePolicy::kAcceptHalt).verdict.decision ==
        Decision::kReject;
  }
  CHECK(rejects_corruption > 0);  // corrupted answers can fool the check
  CHECK(rejects_erasure == 0);    // erasure mode keeps one-sided error
}

TEST_CASE("blr rounds") {
  auto f2 = Field::make(2);
  // strictly linear function: x0 + x1 on F_2^3
  const FunctionTable lin = table_of(f2, 3, {0, 1, 1, 0, 0, 1, 1, 0});
  RandomStream rng(3);
  for (int i = 0; i < 200; ++i) {
    TableOracle oracle(lin);
    CHECK(blr_test(oracle, f2, 3, rng).verdict.decision == Decision::kAccept);
  }

  // f = x0 x1: the pair x = (1,0), y = (0,1) gives 0 + 0 != f(1,1) = 1.
  // scan seeds until that query plan appears, then the round must reject
  const FunctionTable prod = table_of(f2, 2, {0, 0, 0, 1});
  bool found = false;
  for (std::uint64_t seed = 0; seed < 20000 && !found; ++seed) {
    TableOracle oracle(prod);
    RandomStream r(seed);
    const auto res = blr_test(oracle, f2, 2, r);
    if (res.plan.points == std::vector<Point>{1, 2, 3}) {
      CHECK(res.verdict.decision == Decision::kReject);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("blr against the sum eraser accepts regardless of the input") {
  auto f2 = Field::make(2);
  // f = x0 x1 on F_2^6; the domain is large enough that degenerate pairs
  // (x = 0, y = 0, x = y) are rare and the third query is almost always fresh
  FunctionTable prod(f2, 6);
  for (Point x = 0; x < 64; ++x) prod.set(x, static_cast<Elem>((x & 1) & ((x >> 1) & 1)));
  TesterSpec spec;
  spec.kind = TesterKind::kBlr;
  spec.code = rm::make_rm_family(f2, 1);
  spec.n = 6;
  adversary::SessionConfig cfg;
  cfg.rate = 1;
  int erasure_seen = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto rec = adversary::run_game(prod, spec, "sum_eraser", cfg, seed);
    CHECK(rec.verdict.decision == Decision::kAccept);
    erasure_seen += rec.verdict.reason == Reason::kErasureSeen;
  }
  CHECK(erasure_seen >= 450);
}

TEST_CASE("a large uniform sample distinguishes all pairs of a small family") {
  // M >= (2 ln N + ln 2)/delta with N = 8, delta = 1/2 gives M = 10
  auto f2 = Field::make(2);
  auto fam = rm::make_rm_family(f2, 1);
  std::vector<FunctionTable> members;
  fam->for_each_codeword(2, [&](const FunctionTable& g) { members.push_back(g); });
  REQUIRE(members.size() == 8);
  const std::uint64_t m_draws = 10;
  const std::int64_t trials = 4000;
  std::int64_t good = 0;
  RandomStream rng(53);
  for (std::int64_t t = 0; t < trials; ++t) {
    std::vector<Point> s;
    for (std::uint64_t i = 0; i < m_draws; ++i) s.push_back(rng.below(4));
    bool all_pairs = true;
    for (std::size_t a = 0; a < members.size() && all_pairs; ++a)
      for (std::size_t b = a + 1; b < members.size() && all_pairs; ++b) {
        bool differ = false;
        for (Point p : s)
          if (members[a][p] != members[b][p]) {
            differ = true;
            break;
          }
        all_pairs = differ;
      }
    good += all_pairs;
  }
  CHECK(stats::consistent_with_rate_at_least(good, trials, 0.5, 3.0));
}

TEST_CASE("fixed seeds reproduce plans and verdicts") {
  auto f2 = Field::make(2);
  auto fam = rm::make_rm_family(f2, 1);
  const FunctionTable ind = table_of(f2, 3, {1, 0, 0, 0, 0, 0, 0, 0});
  TesterSpec spec;
  spec.kind = TesterKind::kSemiSample;
  spec.code = fam;
  spec.n = 3;
  spec.k = 3;
  spec.queries = 16;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TableOracle o1(ind), o2(ind);
    RandomStream r1(seed), r2(seed);
    const auto a = run_tester(o1, spec, r1);
    const auto b = run_tester(o2, spec, r2);
    CHECK(a.plan.points == b.plan.points);
    CHECK(a.verdict.decision == b.verdict.decision);
  }
}

TEST_CASE("tester spec validation") {
  auto f2 = Field::make(2);
  TesterSpec spec;
  spec.kind = TesterKind::kSemiSample;
  spec.code = rm::make_rm_family(f2, 1);
  spec.n = 4;
  spec.k = 2;  // below the base testing dimension 3
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.k = 5;  // above n
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.k = 3;
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.queries_per_round() == 556);  // family budget at k = 3
}

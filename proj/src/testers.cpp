#include "rmlab/testers.hpp"

#include <algorithm>
#include <unordered_map>

namespace rmlab::testers {

const char* to_string(Decision d) { return d == Decision::kAccept ? "ACCEPT" : "REJECT"; }

const char* to_string(Reason r) {
  switch (r) {
    case Reason::kConsistent: return "CONSISTENT";
    case Reason::kNoCodewordFits: return "NO_CODEWORD_FITS";
    case Reason::kErasureSeen: return "ERASURE_SEEN";
  }
  return "?";
}

TesterKind tester_kind_from_string(const std::string& s) {
  if (s == "sample") return TesterKind::kSample;
  if (s == "semi_sample" || s == "semi-sample") return TesterKind::kSemiSample;
  if (s == "blr") return TesterKind::kBlr;
  if (s == "flat") return TesterKind::kFlat;
  throw ConfigError("unknown tester kind: " + s);
}

const char* to_string(TesterKind k) {
  switch (k) {
    case TesterKind::kSample: return "sample";
    case TesterKind::kSemiSample: return "semi_sample";
    case TesterKind::kBlr: return "blr";
    case TesterKind::kFlat: return "flat";
  }
  return "?";
}

std::uint64_t TesterSpec::queries_per_round() const {
  if (kind == TesterKind::kBlr) return 3;
  if (kind == TesterKind::kFlat) {
    if (!code) throw ConfigError("tester spec has no code family");
    return space::domain_size(code->field()->q(), k);  // the whole subspace
  }
  if (queries > 0) return queries;
  if (!code) throw ConfigError("tester spec has no code family");
  return code->query_budget(kind == TesterKind::kSample ? n : k);
}

void TesterSpec::validate() const {
  if (kind == TesterKind::kBlr) {
    if (n == 0) throw ConfigError("blr tester needs n >= 1");
    if (code && code->field()->q() != 2)
      throw ConfigError("the linearity round is defined over F_2");
    return;
  }
  if (!code) throw ConfigError("tester spec has no code family");
  if (n == 0) throw ConfigError("tester spec needs n >= 1");
  if (kind == TesterKind::kSemiSample || kind == TesterKind::kFlat) {
    if (k < code->base_dim() || k > n)
      throw ConfigError("semi-sample dimension must satisfy t <= k <= n (t=" +
                        std::to_string(code->base_dim()) + ", k=" + std::to_string(k) +
                        ", n=" + std::to_string(n) + ")");
  }
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
}

ConsistencyResult consistency_check(const CodeFamily& family, unsigned k,
                                    const std::vector<std::pair<Point, Elem>>& assignment,
                                    std::uint64_t enum_cap) {
  for (const auto& [pt, val] : assignment)
    if (val == gf::kErased)
      throw std::domain_error("consistency_check requires an erasure-free assignment");

  if (family.linear()) {
    const gf::Field& f = *family.field();
    const std::uint64_t dim = family.dim_at(k);
    const std::size_t width = static_cast<std::size_t>(dim) + 1;  // basis columns + value
    // incremental elimination: keep reduced rows indexed by pivot column
    std::vector<std::vector<Elem>> pivot_rows(width);
    std::vector<bool> has_pivot(width, false);
    std::vector<Elem> row(width);
    for (const auto& [pt, val] : assignment) {
      family.basis_row(k, pt, row.data());
      row[dim] = val;
      for (std::size_t c = 0; c < width; ++c) {
        if (row[c] == 0) continue;
        if (!has_pivot[c]) {
          // normalize and install
          const Elem inv = f.inv(row[c]);
          for (std::size_t j = c; j < width; ++j) row[j] = f.mul(inv, row[j]);
          pivot_rows[c] = row;
          has_pivot[c] = true;
          break;
        }
        const Elem factor = row[c];
        const auto& pr = pivot_rows[c];
        for (std::size_t j = c; j < width; ++j) row[j] = f.sub(row[j], f.mul(factor, pr[j]));
      }
      if (has_pivot[dim]) return {false, std::nullopt};  // pivot in the value column
    }
    // one solution: free coefficients zero, pivots by back-substitution; rows
    // are reduced against earlier pivots only, so substitute from the right
    std::vector<Elem> sol(dim, 0);
    for (std::size_t c = width - 1; c-- > 0;) {
      if (!has_pivot[c]) continue;
      const auto& pr = pivot_rows[c];
      Elem v = pr[dim];
      for (std::size_t j = c + 1; j < dim; ++j)
        if (pr[j] != 0 && sol[j] != 0) v = f.sub(v, f.mul(pr[j], sol[j]));
      sol[c] = v;
    }
    return {true, std::move(sol)};
  }

  if (!family.enumerable_at(k, enum_cap))
    throw std::logic_error("family is neither linear nor enumerable at dimension " +
                           std::to_string(k));
  bool found = false;
  family.for_each_codeword(k, [&](const FunctionTable& g) {
    if (found) return;
    for (const auto& [pt, val] : assignment)
      if (g[pt] != val) return;
    found = true;
  });
  return {found, std::nullopt};
}

namespace {

struct ErasureSeen {};

Symbol ask(Oracle& oracle, Point x, QueryPlan& plan, ErasurePolicy policy) {
  plan.points.push_back(x);
  const Symbol v = oracle.query(x);
  if (v == gf::kErased) {
    if (policy == ErasurePolicy::kForbid)
      throw std::domain_error("offline tester queried an erased entry");
    throw ErasureSeen{};
  }
  return v;
}

Verdict decide(const ConsistencyResult& c) {
  if (c.consistent) return {Decision::kAccept, Reason::kConsistent, c.witness};
  return {Decision::kReject, Reason::kNoCodewordFits, std::nullopt};
}

Verdict sample_round(Oracle& oracle, const CodeFamily& family, unsigned n, std::uint64_t s,
                     RandomStream& rng, QueryPlan& plan, ErasurePolicy policy) {
  const std::uint64_t total = space::domain_size(family.field()->q(), n);
  // flat dedup table when the domain is small, hashing otherwise
  std::vector<std::uint8_t> seen_flat;
  std::unordered_map<Point, Elem> seen_map;
  const bool flat = total <= (1ull << 22);
  if (flat) seen_flat.assign(total, 0);
  std::vector<std::pair<Point, Elem>> assignment;
  for (std::uint64_t i = 0; i < s; ++i) {
    const Point x = rng.below(total);
    const Symbol v = ask(oracle, x, plan, policy);
    // a repeated point repeats its first answer by the oracle contract
    if (flat) {
      if (!seen_flat[x]) {
        seen_flat[x] = 1;
        assignment.emplace_back(x, v);
      }
    } else if (seen_map.emplace(x, v).second) {
      assignment.emplace_back(x, v);
    }
  }
  return decide(consistency_check(family, n, assignment));
}

Verdict semi_sample_round(Oracle& oracle, const CodeFamily& family, unsigned n, unsigned k,
                          std::uint64_t queries, RandomStream& rng, QueryPlan& plan,
                          ErasurePolicy policy) {
  const gf::Field& f = *family.field();
  const unsigned q = f.q();
  const space::Subspace a = space::random_subspace(family.field(), n, k, rng);
  const std::uint64_t local_total = space::domain_size(q, k);

  // chart: local index z -> ambient point, basis rows of the canonical form
  const space::MatrixFq& basis = a.basis();
  const bool flat = local_total <= (1ull << 22);
  std::vector<std::uint8_t> seen;
  if (flat) seen.assign(local_total, 0);
  std::unordered_map<Point, Elem> seen_map;
  std::vector<std::pair<Point, Elem>> assignment;
  std::vector<Elem> x(n);
  for (std::uint64_t i = 0; i < queries; ++i) {
    const Point z = rng.below(local_total);
    std::fill(x.begin(), x.end(), 0);
    Point rest = z;
    for (unsigned r = 0; r < k; ++r) {
      const Elem digit = static_cast<Elem>(rest % q);
      rest /= q;
      if (digit == 0) continue;
      for (unsigned j = 0; j < n; ++j) x[j] = f.add(x[j], f.mul(digit, basis.at(r, j)));
    }
    const Point ambient = space::vec_to_point(q, x);
    const Symbol v = ask(oracle, ambient, plan, policy);
    if (flat) {
      if (!seen[z]) {
        seen[z] = 1;
        assignment.emplace_back(z, v);
      }
    } else if (seen_map.emplace(z, v).second) {
      assignment.emplace_back(z, v);
    }
  }
  return decide(consistency_check(family, k, assignment));
}

Verdict flat_round(Oracle& oracle, const CodeFamily& family, unsigned n, unsigned k,
                   RandomStream& rng, QueryPlan& plan, ErasurePolicy policy) {
  const space::Subspace a = space::random_subspace(family.field(), n, k, rng);
  const std::vector<Point> pts = space::enumerate_points(a);
  std::vector<Elem> values(pts.size());
  for (std::size_t z = 0; z < pts.size(); ++z) values[z] = ask(oracle, pts[z], plan, policy);
  FunctionTable local(family.field(), k, std::move(values));
  if (family.member(local)) return {Decision::kAccept, Reason::kConsistent, std::nullopt};
  return {Decision::kReject, Reason::kNoCodewordFits, std::nullopt};
}

Verdict blr_round(Oracle& oracle, const gf::Field& f, unsigned n, RandomStream& rng,
                  QueryPlan& plan, ErasurePolicy policy) {
  const std::uint64_t total = space::domain_size(f.q(), n);
  const Point xi = rng.below(total);
  const Point yi = rng.below(total);
  const std::vector<Elem> xv = space::point_to_vec(f.q(), n, xi);
  const std::vector<Elem> yv = space::point_to_vec(f.q(), n, yi);
  std::vector<Elem> sv(n);
  for (unsigned j = 0; j < n; ++j) sv[j] = f.add(xv[j], yv[j]);
  const Point si = space::vec_to_point(f.q(), sv);
  const Symbol fx = ask(oracle, xi, plan, policy);
  const Symbol fy = ask(oracle, yi, plan, policy);
  const Symbol fs = ask(oracle, si, plan, policy);
  if (f.add(fx, fy) == fs) return {Decision::kAccept, Reason::kConsistent, std::nullopt};
  return {Decision::kReject, Reason::kNoCodewordFits, std::nullopt};
}

}  // namespace

RunResult sample_based_test(Oracle& oracle, const CodeFamily& family, unsigned n,
                            std::uint64_t s, RandomStream& rng, ErasurePolicy policy) {
  RunResult res;
  try {
    res.verdict = sample_round(oracle, family, n, s, rng, res.plan, policy);
  } catch (const ErasureSeen&) {
    res.verdict = {Decision::kAccept, Reason::kErasureSeen, std::nullopt};
  }
  return res;
}

RunResult semi_sample_test(Oracle& oracle, const CodeFamily& family, unsigned n, unsigned k,
                           std::uint64_t queries, RandomStream& rng, ErasurePolicy policy) {
  RunResult res;
  try {
    res.verdict = semi_sample_round(oracle, family, n, k, queries, rng, res.plan, policy);
  } catch (const ErasureSeen&) {
    res.verdict = {Decision::kAccept, Reason::kErasureSeen, std::nullopt};
  }
  return res;
}

RunResult flat_test(Oracle& oracle, const CodeFamily& family, unsigned n, unsigned k,
                    RandomStream& rng, ErasurePolicy policy) {
  RunResult res;
  try {
    res.verdict = flat_round(oracle, family, n, k, rng, res.plan, policy);
  } catch (const ErasureSeen&) {
    res.verdict = {Decision::kAccept, Reason::kErasureSeen, std::nullopt};
  }
  return res;
}

RunResult blr_test(Oracle& oracle, const gf::FieldPtr& field, unsigned n, RandomStream& rng,
                   ErasurePolicy policy) {
  RunResult res;
  try {
    res.verdict = blr_round(oracle, *field, n, rng, res.plan, policy);
  } catch (const ErasureSeen&) {
    res.verdict = {Decision::kAccept, Reason::kErasureSeen, std::nullopt};
  }
  return res;
}

unsigned repetition_count(std::uint64_t queries_per_round, const Rat& eps) {
  if (eps <= 0) throw std::domain_error("repetition_count requires eps > 0");
  const Rat rounds = 4 * (Rat(1) / (Rat(Int(queries_per_round)) * eps) + 1);
  const Int r = rat_ceil(rounds);
  if (r > Int(1u << 30)) throw std::domain_error("repetition count overflow");
  return static_cast<unsigned>(r.convert_to<std::uint64_t>());
}

RunResult run_tester(Oracle& oracle, const TesterSpec& spec, RandomStream& rng,
                     ErasurePolicy policy) {
  spec.validate();
  const std::uint64_t queries = spec.queries_per_round();
  RunResult out;
  try {
    for (unsigned round = 0; round < spec.repetitions; ++round) {
      Verdict v;
      switch (spec.kind) {
        case TesterKind::kSample:
          v = sample_round(oracle, *spec.code, spec.n, queries, rng, out.plan, policy);
          break;
        case TesterKind::kSemiSample:
          v = semi_sample_round(oracle, *spec.code, spec.n, spec.k, queries, rng, out.plan,
                                policy);
          break;
        case TesterKind::kFlat:
          v = flat_round(oracle, *spec.code, spec.n, spec.k, rng, out.plan, policy);
          break;
        case TesterKind::kBlr: {
          const gf::FieldPtr f =
              spec.code ? spec.code->field() : gf::Field::make(2);
          v = blr_round(oracle, *f, spec.n, rng, out.plan, policy);
          break;
        }
      }
      if (v.decision == Decision::kReject) {
        out.verdict = v;
        return out;
      }
      out.verdict = v;
    }
  } catch (const ErasureSeen&) {
    out.verdict = {Decision::kAccept, Reason::kErasureSeen, std::nullopt};
  }
  return out;
}

RunResult repeated_tester(Oracle& oracle, const TesterSpec& spec, const Rat& eps,
                          RandomStream& rng, ErasurePolicy policy) {
  TesterSpec sized = spec;
  sized.repetitions = repetition_count(sized.queries_per_round(), eps);
  return run_tester(oracle, sized, rng, policy);
}

}  // namespace rmlab::testers

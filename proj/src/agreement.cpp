#include "rmlab/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "rmlab/parallel.hpp"
#include "rmlab/testers.hpp"

namespace rmlab::agreement {

Subspace HyperplaneCollection::hyperplane(std::size_t i) const {
  return space::hyperplane_from_normal(field, normals[i]);
}

Elem HyperplaneCollection::local_value(std::size_t i, Point ambient) const {
  const Subspace w = hyperplane(i);
  const std::vector<Elem> v = space::point_to_vec(field->q(), n, ambient);
  const std::vector<Elem> z = w.coordinates_of(v);
  return locals[i][space::vec_to_point(field->q(), z)];
}

HyperplaneCollection random_collection(const FieldPtr& field, unsigned n, std::size_t m,
                                       RandomStream& rng) {
  const unsigned q = field->q();
  const Int max_m = space::gaussian_binomial(n, n - 1, q);
  if (Int(m) > max_m)
    throw std::invalid_argument("collection larger than the number of hyperplanes");
  const std::uint64_t total = space::domain_size(q, n);
  std::set<std::vector<Elem>> seen;
  HyperplaneCollection coll{field, n, {}, {}};
  while (coll.normals.size() < m) {
    // canonical normal: nonzero functional scaled to leading coefficient 1
    Point raw = 1 + rng.below(total - 1);
    std::vector<Elem> a = space::point_to_vec(q, n, raw);
    unsigned lead = 0;
    for (unsigned j = 0; j < n; ++j)
      if (a[j] != 0) lead = j;
    const Elem inv = field->inv(a[lead]);
    for (unsigned j = 0; j < n; ++j) a[j] = field->mul(inv, a[j]);
    if (seen.insert(a).second) coll.normals.push_back(std::move(a));
  }
  return coll;
}

void write_collection(const HyperplaneCollection& coll, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "q=" << coll.field->q() << " n=" << coll.n << " m=" << coll.size() << "\n";
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (std::size_t i = 0; i < coll.size(); ++i) {
    for (unsigned j = 0; j < coll.n; ++j) out << (j ? "," : "") << unsigned(coll.normals[i][j]);
    if (coll.locals.size() == coll.size()) {
      const std::string table_name =
          std::filesystem::path(path).stem().string() + "_w" + std::to_string(i) + ".tbl";
      functab::write_table_file(coll.locals[i], (base / table_name).string());
      out << " " << table_name;
    }
    out << "\n";
  }
}

HyperplaneCollection read_collection(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw ParseError(1, "missing collection header");
  unsigned q = 0, n = 0;
  std::size_t m = 0;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ParseError(1, "bad header token: " + tok);
      const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "q")
        q = static_cast<unsigned>(std::stoul(val));
      else if (key == "n")
        n = static_cast<unsigned>(std::stoul(val));
      else if (key == "m")
        m = std::stoul(val);
      else
        throw ParseError(1, "unknown header key: " + key);
    }
  }
  if (q == 0 || n == 0 || m == 0) throw ParseError(1, "collection header needs q, n, m");
  HyperplaneCollection coll{gf::Field::make(q), n, {}, {}};
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::string line;
  std::size_t lineno = 1;
  std::set<std::vector<Elem>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string coeffs, table;
    if (!(ls >> coeffs)) continue;
    ls >> table;
    std::vector<Elem> a;
    std::istringstream cs(coeffs);
    std::string cell;
    while (std::getline(cs, cell, ',')) {
      const unsigned long v = std::stoul(cell);
      if (v >= q) throw ParseError(lineno, "coefficient out of field range");
      a.push_back(static_cast<Elem>(v));
    }
    if (a.size() != n) throw ParseError(lineno, "functional has wrong length");
    if (std::all_of(a.begin(), a.end(), [](Elem e) { return e == 0; }))
      throw ParseError(lineno, "zero functional is not a hyperplane");
    // canonicalize to leading coefficient 1 and enforce distinctness
    unsigned lead = 0;
    for (unsigned j = 0; j < n; ++j)
      if (a[j] != 0) lead = j;
    const Elem inv = coll.field->inv(a[lead]);
    for (unsigned j = 0; j < n; ++j) a[j] = coll.field->mul(inv, a[j]);
    if (!seen.insert(a).second) throw ParseError(lineno, "duplicate hyperplane");
    coll.normals.push_back(std::move(a));
    if (!table.empty())
      coll.locals.push_back(functab::read_table_file((base / table).string()));
  }
  if (coll.size() != m) throw ParseError(lineno, "hyperplane count does not match header");
  if (!coll.locals.empty() && coll.locals.size() != coll.size())
    throw ParseError(lineno, "either every hyperplane has a table or none does");
  return coll;
}

std::uint64_t count_containing(const HyperplaneCollection& coll, Point x) {
  const gf::Field& f = *coll.field;
  const unsigned q = f.q();
  const std::vector<Elem> v = space::point_to_vec(q, coll.n, x);
  std::uint64_t count = 0;
  for (const auto& a : coll.normals) {
    Elem dot = 0;
    for (unsigned j = 0; j < coll.n; ++j) dot = f.add(dot, f.mul(a[j], v[j]));
    count += dot == 0;
  }
  return count;
}

std::vector<std::uint32_t> containment_counts(const HyperplaneCollection& coll) {
  const gf::Field& f = *coll.field;
  const unsigned q = f.q();
  const std::uint64_t total = space::domain_size(q, coll.n);
  std::vector<std::uint32_t> counts(total, 0);
  std::vector<Elem> dot(total);
  for (const auto& a : coll.normals) {
    // dot[d*q^m + r] = dot[r] + a_m * d, one pass per hyperplane
    dot[0] = 0;
    std::uint64_t stride = 1;
    for (unsigned m = 0; m < coll.n; ++m) {
      for (unsigned digit = 1; digit < q; ++digit) {
        const Elem inc = f.mul(a[m], static_cast<Elem>(digit));
        if (inc == 0) {
          std::copy(dot.begin(), dot.begin() + static_cast<std::ptrdiff_t>(stride),
                    dot.begin() + static_cast<std::ptrdiff_t>(digit * stride));
        } else {
          for (std::uint64_t r = 0; r < stride; ++r) dot[digit * stride + r] = f.add(dot[r], inc);
        }
      }
      stride *= q;
    }
    for (std::uint64_t x = 0; x < total; ++x) counts[x] += dot[x] == 0;
  }
  return counts;
}

Rat nu_measure(const HyperplaneCollection& coll, const std::vector<Point>& s) {
  if (coll.normals.empty()) throw std::invalid_argument("nu needs at least one hyperplane");
  Int acc = 0;
  for (Point x : s) acc += Int(count_containing(coll, x));
  const unsigned q = coll.field->q();
  return Rat(acc, Int(coll.normals.size()) * ipow(Int(q), coll.n - 1));
}

namespace {

Rat nu_from_counts(const HyperplaneCollection& coll, const std::vector<std::uint32_t>& counts,
                   const std::vector<Point>& s) {
  Int acc = 0;
  for (Point x : s) acc += Int(counts[x]);
  const unsigned q = coll.field->q();
  return Rat(acc, Int(coll.normals.size()) * ipow(Int(q), coll.n - 1));
}

}  // namespace

SamplingBoundReport check_sampling_bounds(const HyperplaneCollection& coll,
                                          const std::vector<Point>& s) {
  const unsigned q = coll.field->q();
  const Int m = Int(coll.normals.size());
  const std::vector<std::uint32_t> counts = containment_counts(coll);
  SamplingBoundReport rep;
  rep.mu = Rat(Int(s.size()), ipow(Int(q), coll.n));
  rep.nu = nu_from_counts(coll, counts, s);
  const Rat err = Rat(Int(q), m);
  rep.lower = (rep.mu - 4 * err) / 2;
  rep.upper = 2 * rep.mu + 8 * err;
  rep.holds = rep.lower <= rep.nu && rep.nu <= rep.upper;
  rep.slack_lower = rep.nu - rep.lower;
  rep.slack_upper = rep.upper - rep.nu;
  if (!rep.holds)
    throw LemmaViolation("sampling bounds failed: mu=" + rat_string(rep.mu) +
                         " nu=" + rat_string(rep.nu));
  return rep;
}

ChebyshevReport check_chebyshev(const HyperplaneCollection& coll, const Rat& c) {
  if (c <= 0) throw std::invalid_argument("chebyshev check needs c > 0");
  const unsigned q = coll.field->q();
  const Int m = Int(coll.normals.size());
  const std::vector<std::uint32_t> counts = containment_counts(coll);
  // |N(x) q - M| >= c M, cross-multiplied with c = cn/cd
  const Int cn = numerator(c), cd = denominator(c);
  Int tail = 0;
  for (std::uint32_t nx : counts) {
    Int dev = Int(nx) * q - m;
    if (dev < 0) dev = -dev;
    if (cd * dev >= cn * m) ++tail;
  }
  ChebyshevReport rep;
  rep.tail = Rat(tail, ipow(Int(q), coll.n));
  rep.bound = Rat(Int(q) * cd * cd, cn * cn * m);
  rep.vacuous = rep.bound >= 1;
  rep.holds = rep.tail <= rep.bound;
  if (!rep.holds)
    throw LemmaViolation("concentration tail exceeded q/(c^2 M): tail=" + rat_string(rep.tail) +
                         " bound=" + rat_string(rep.bound));
  return rep;
}

// ---------------------------------------------------------------------------
// Consistency graph

ConsistencyGraph ConsistencyGraph::from_adjacency(
    std::size_t m, const std::vector<std::pair<unsigned, unsigned>>& edges) {
  ConsistencyGraph g(m);
  for (const auto& [i, j] : edges) g.set_edge(i, j, true);
  return g;
}

void ConsistencyGraph::set_edge(std::size_t i, std::size_t j, bool present) {
  if (i == j) throw std::invalid_argument("no self-loops");
  adj_[i * m_ + j] = present;
  adj_[j * m_ + i] = present;
}

std::size_t ConsistencyGraph::edge_count() const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = i + 1; j < m_; ++j) c += edge(i, j);
  return c;
}

std::size_t ConsistencyGraph::degree(std::size_t v) const {
  std::size_t c = 0;
  for (std::size_t j = 0; j < m_; ++j) c += adj_[v * m_ + j];
  return c;
}

std::size_t ConsistencyGraph::common_neighbors(std::size_t i, std::size_t j) const {
  std::size_t c = 0;
  for (std::size_t k = 0; k < m_; ++k) c += adj_[i * m_ + k] && adj_[j * m_ + k];
  return c;
}

ConsistencyGraph build_consistency_graph(const HyperplaneCollection& coll) {
  const std::size_t m = coll.size();
  if (coll.locals.size() != m)
    throw std::invalid_argument("consistency graph needs one local function per hyperplane");
  const gf::Field& f = *coll.field;
  const unsigned q = f.q();
  ConsistencyGraph g(m);
  std::vector<Subspace> subs;
  subs.reserve(m);
  for (std::size_t i = 0; i < m; ++i) subs.push_back(coll.hyperplane(i));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const Subspace inter = space::intersect(subs[i], subs[j]);
      bool consistent = true;
      for (Point x : space::enumerate_points(inter)) {
        const std::vector<Elem> v = space::point_to_vec(q, coll.n, x);
        const Elem vi = coll.locals[i][space::vec_to_point(q, subs[i].coordinates_of(v))];
        const Elem vj = coll.locals[j][space::vec_to_point(q, subs[j].coordinates_of(v))];
        if (vi != vj) {
          consistent = false;
          break;
        }
      }
      g.set_edge(i, j, consistent);
    }
  }
  return g;
}

Rat beta(const ConsistencyGraph& g) {
  const std::size_t m = g.size();
  std::size_t best = 0;
  bool any_nonedge = false;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      if (g.edge(i, j)) continue;
      any_nonedge = true;
      best = std::max(best, g.common_neighbors(i, j));
    }
  if (!any_nonedge) return Rat(0);
  return Rat(Int(best), Int(m));
}

Rat pair_agreement_fraction(const ConsistencyGraph& g) {
  const Int m = Int(g.size());
  if (m == 0) return Rat(1);
  return Rat(Int(2) * Int(g.edge_count()) + m, m * m);
}

CliqueCover make_transitive(const ConsistencyGraph& g) {
  const std::size_t m = g.size();
  CliqueCover cover;
  cover.beta_value = beta(g);
  // Candidate rule: u joins v's clique when their closed neighborhoods (in
  // the active subgraph) overlap in at least a (1 - 2 sqrt(beta)) fraction of
  // v's closed neighborhood. At beta = 0 this recovers exact cliques.
  // Checked exactly as (nv - common)^2 M <= 4 beta_num nv^2 with
  // beta = beta_num / M.
  const Int beta_num = numerator(cover.beta_value) *
                       (Int(m) / denominator(cover.beta_value));
  std::vector<bool> active(m, true);
  std::size_t remaining = m;
  const auto active_degree = [&](std::size_t v) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < m; ++j) c += active[j] && g.edge(v, j);
    return c;
  };
  while (remaining > 0) {
    // highest active degree, ties to the smallest index
    std::size_t v = m;
    std::size_t best_deg = 0;
    for (std::size_t u = 0; u < m; ++u) {
      if (!active[u]) continue;
      const std::size_t d = active_degree(u);
      if (v == m || d > best_deg) {
        v = u;
        best_deg = d;
      }
    }
    const auto closed = [&](std::size_t a, std::size_t w) {
      return w == a || g.edge(a, w);
    };
    const std::size_t nv = best_deg + 1;  // |closed active neighborhood of v|
    std::vector<unsigned> k_set{static_cast<unsigned>(v)};
    for (std::size_t u = 0; u < m; ++u) {
      if (u == v || !active[u] || !g.edge(u, v)) continue;
      std::size_t common = 0;
      for (std::size_t w = 0; w < m; ++w) common += active[w] && closed(u, w) && closed(v, w);
      const Int gap = Int(nv) - Int(common);
      if (gap <= 0 || gap * gap * Int(m) <= 4 * beta_num * Int(nv) * Int(nv))
        k_set.push_back(static_cast<unsigned>(u));
    }
    // prune to a clique: discard the lowest-degree violator (ties: largest index)
    for (;;) {
      std::vector<std::size_t> miss(k_set.size(), 0);
      bool clique = true;
      for (std::size_t a = 0; a < k_set.size(); ++a)
        for (std::size_t b = a + 1; b < k_set.size(); ++b)
          if (!g.edge(k_set[a], k_set[b])) {
            ++miss[a];
            ++miss[b];
            clique = false;
          }
      if (clique) break;
      std::size_t drop = k_set.size();
      std::size_t drop_deg = 0;
      for (std::size_t a = 0; a < k_set.size(); ++a) {
        if (miss[a] == 0) continue;
        std::size_t deg_in_k = k_set.size() - 1 - miss[a];
        if (drop == k_set.size() || deg_in_k < drop_deg ||
            (deg_in_k == drop_deg && k_set[a] > k_set[drop]))
          drop = a, drop_deg = deg_in_k;
      }
      k_set.erase(k_set.begin() + static_cast<std::ptrdiff_t>(drop));
    }
    std::sort(k_set.begin(), k_set.end());
    for (unsigned u : k_set) {
      active[u] = false;
      --remaining;
    }
    cover.cliques.push_back(std::move(k_set));
  }

  // removed = edges of g not internal to any emitted clique
  std::vector<std::size_t> clique_of(m, m);
  for (std::size_t c = 0; c < cover.cliques.size(); ++c)
    for (unsigned u : cover.cliques[c]) clique_of[u] = c;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (g.edge(i, j) && clique_of[i] != clique_of[j])
        cover.removed_edges.emplace_back(static_cast<unsigned>(i), static_cast<unsigned>(j));

  // the retained graph is a union of vertex-disjoint cliques; verify beta = 0
  ConsistencyGraph retained(m);
  for (const auto& kq : cover.cliques)
    for (std::size_t a = 0; a < kq.size(); ++a)
      for (std::size_t b = a + 1; b < kq.size(); ++b) retained.set_edge(kq[a], kq[b], true);
  if (beta(retained) != 0)
    throw IntegrityError("transitivization produced a non-transitive graph");
  for (const auto& kq : cover.cliques)
    for (std::size_t a = 0; a < kq.size(); ++a)
      for (std::size_t b = a + 1; b < kq.size(); ++b)
        if (!g.edge(kq[a], kq[b]))
          throw IntegrityError("emitted clique is not a clique of the input graph");

  // removed <= 3 sqrt(beta) M^2, i.e. removed^2 <= 9 beta_num M^3 (report-only)
  const Int removed = Int(cover.removed_edges.size());
  cover.removal_within_analytic_bound = removed * removed <= 9 * beta_num * ipow(Int(m), 3);
  return cover;
}

FunctionTable extrapolate(const HyperplaneCollection& coll,
                          const std::vector<unsigned>& clique) {
  const gf::Field& f = *coll.field;
  const unsigned q = f.q();
  if (coll.locals.size() != coll.size())
    throw std::invalid_argument("extrapolation needs local functions");
  std::vector<Subspace> subs;
  subs.reserve(clique.size());
  for (unsigned i : clique) subs.push_back(coll.hyperplane(i));
  // precondition: pairwise consistency on intersections
  for (std::size_t a = 0; a < clique.size(); ++a)
    for (std::size_t b = a + 1; b < clique.size(); ++b) {
      const Subspace inter = space::intersect(subs[a], subs[b]);
      for (Point x : space::enumerate_points(inter)) {
        const std::vector<Elem> v = space::point_to_vec(q, coll.n, x);
        if (coll.locals[clique[a]][space::vec_to_point(q, subs[a].coordinates_of(v))] !=
            coll.locals[clique[b]][space::vec_to_point(q, subs[b].coordinates_of(v))])
          throw IntegrityError("clique members disagree on an intersection");
      }
    }
  std::vector<std::size_t> order(clique.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return clique[a] < clique[b]; });
  FunctionTable out(coll.field, coll.n);
  std::vector<std::uint8_t> assigned(out.size(), 0);
  for (std::size_t oi : order) {
    const Subspace& w = subs[oi];
    for (Point x : space::enumerate_points(w)) {
      if (assigned[x]) continue;
      const std::vector<Elem> v = space::point_to_vec(q, coll.n, x);
      out.set(x, coll.locals[clique[oi]][space::vec_to_point(q, w.coordinates_of(v))]);
      assigned[x] = 1;
    }
  }
  return out;  // unset points keep the fallback value 0
}

PlantedCollection plant_two_codeword_collection(const rm::CodeFamily& family, unsigned n,
                                                std::size_t half, std::uint64_t noise_weight,
                                                RandomStream& rng) {
  const FieldPtr field = family.field();
  const unsigned q = field->q();
  const std::uint64_t total = space::domain_size(q, n);
  if (!family.delta0().within_unique_decoding(Rat(Int(noise_weight), Int(total))))
    throw std::domain_error("noise weight breaks the planted-distance certificate");

  FunctionTable g = family.random_codeword(n, rng);
  FunctionTable g2 = family.random_codeword(n, rng);
  for (int tries = 0; g2 == g; ++tries) {
    if (tries > 256) throw std::logic_error("family appears to have one codeword");
    g2 = family.random_codeword(n, rng);
  }

  // redraw until the first clique covers all but at most 2 * noise_weight
  // points, the regime in which extrapolation stays 3 eps-close
  HyperplaneCollection coll;
  for (int tries = 0;; ++tries) {
    if (tries > 512)
      throw std::logic_error("could not draw a covering clique; increase half or noise");
    coll = random_collection(field, n, 2 * half, rng);
    std::vector<std::uint8_t> covered(total, 0);
    for (std::size_t i = 0; i < half; ++i)
      for (Point x : space::enumerate_points(coll.hyperplane(i))) covered[x] = 1;
    std::uint64_t uncovered = 0;
    for (auto c : covered) uncovered += c == 0;
    if (uncovered <= 2 * noise_weight) break;
  }

  PlantedCollection out{std::move(coll), {}, {}, g, g, Rat(Int(noise_weight), Int(total))};
  for (unsigned i = 0; i < half; ++i) out.clique_a.push_back(i);
  for (unsigned i = 0; i < half; ++i) out.clique_b.push_back(static_cast<unsigned>(half + i));
  for (std::size_t i = 0; i < out.coll.size(); ++i) {
    const FunctionTable& src = i < half ? g : g2;
    out.coll.locals.push_back(functab::restrict(src, out.coll.hyperplane(i)).table);
  }
  // f = g plus noise of exact support size
  std::set<Point> support;
  while (support.size() < noise_weight) support.insert(rng.below(total));
  out.f = g;
  const gf::Field& f = *field;
  for (Point x : support)
    out.f.set(x, f.add(out.f[x], static_cast<Elem>(1 + rng.below(q - 1))));
  return out;
}

DecompositionReport hyperplane_decomposition_check(const FunctionTable& f,
                                                   const rm::CodeFamily& family, unsigned k,
                                                   std::uint64_t queries, std::uint64_t trials,
                                                   RandomStream& rng, double sigma_limit,
                                                   bool exact_hyperplanes) {
  const unsigned n = f.n();
  if (n <= k) throw std::invalid_argument("decomposition check needs n > k");
  const unsigned q = f.field()->q();
  DecompositionReport rep;

  std::vector<std::uint8_t> direct(trials, 0);
  RandomStream direct_root = rng.split();
  parallel_for(trials, [&](std::size_t i) {
    RandomStream r = direct_root.child(i);
    testers::TableOracle oracle(f);
    const auto res = testers::semi_sample_test(oracle, family, n, k, queries, r);
    direct[i] = res.verdict.decision == testers::Decision::kReject;
  });
  rep.trials_direct = trials;
  for (auto v : direct) rep.rejects_direct += v;

  // two-stage: hyperplane first, then the same tester on the restriction
  std::vector<std::vector<Elem>> normals;
  if (exact_hyperplanes) normals = space::hyperplane_normals(f.field(), n);
  std::vector<std::uint8_t> two(trials, 0);
  RandomStream two_root = rng.split();
  const std::uint64_t total = space::domain_size(q, n);
  parallel_for(trials, [&](std::size_t i) {
    RandomStream r = two_root.child(i);
    std::vector<Elem> a;
    if (exact_hyperplanes) {
      a = normals[i % normals.size()];  // stratified over all hyperplanes
    } else {
      Point raw = 1 + r.below(total - 1);
      a = space::point_to_vec(q, n, raw);
      unsigned lead = 0;
      for (unsigned j = 0; j < n; ++j)
        if (a[j] != 0) lead = j;
      const Elem inv = f.field()->inv(a[lead]);
      for (unsigned j = 0; j < n; ++j) a[j] = f.field()->mul(inv, a[j]);
    }
    const Subspace w = space::hyperplane_from_normal(f.field(), a);
    const FunctionTable fw = functab::restrict(f, w).table;
    testers::TableOracle oracle(fw);
    const auto res = testers::semi_sample_test(oracle, family, n - 1, k, queries, r);
    two[i] = res.verdict.decision == testers::Decision::kReject;
  });
  rep.trials_two_stage = trials;
  for (auto v : two) rep.rejects_two_stage += v;

  const double p1 = double(rep.rejects_direct) / double(trials);
  const double p2 = double(rep.rejects_two_stage) / double(trials);
  const double pooled = (double(rep.rejects_direct) + double(rep.rejects_two_stage)) /
                        (2.0 * double(trials));
  const double var = pooled * (1.0 - pooled) * (2.0 / double(trials));
  rep.sigma = var > 0 ? (p1 - p2) / std::sqrt(var) : 0.0;
  rep.consistent = std::fabs(rep.sigma) <= sigma_limit;
  return rep;
}

}  // namespace rmlab::agreement

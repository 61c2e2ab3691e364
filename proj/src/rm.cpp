#include "rmlab/rm.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "rmlab/exactceil.hpp"

namespace rmlab::rm {

unsigned testing_dimension(const Field& f, unsigned d) {
  // q - q/p = p^ell - p^(ell-1), exact in integers
  unsigned step = 1;
  for (unsigned i = 0; i + 1 < f.ell(); ++i) step *= f.p();
  step *= f.p() - 1;
  return (d + 1 + step - 1) / step + 1;
}

unsigned testing_dimension_alt_q2(unsigned d) { return d + 1; }

Delta0 Delta0::rational(Rat r) {
  if (r <= 0 || r > 1) throw std::invalid_argument("delta0 must lie in (0, 1]");
  Delta0 d;
  d.is_power_ = false;
  d.ratio_ = std::move(r);
  return d;
}

Delta0 Delta0::power(unsigned q, unsigned num, unsigned den) {
  if (q < 2 || den == 0) throw std::invalid_argument("bad delta0 power");
  Delta0 d;
  d.is_power_ = true;
  d.q_ = q;
  d.num_ = num;
  d.den_ = den;
  return d;
}

bool Delta0::rat_less(const Rat& r) const {
  if (r <= 0) return true;
  if (!is_power_) return r < ratio_;
  // r < q^(-num/den)  <=>  r^den * q^num < 1
  const Int lhs = ipow(numerator(r), den_) * ipow(Int(q_), num_);
  const Int rhs = ipow(denominator(r), den_);
  return lhs < rhs;
}

bool Delta0::rat_at_least(const Rat& r) const { return !rat_less(r); }

bool Delta0::within_unique_decoding(const Rat& r) const { return rat_less(r * 2); }

double Delta0::approx() const {
  if (!is_power_) return to_double(ratio_);
  return std::pow(double(q_), -double(num_) / double(den_));
}

std::string Delta0::describe() const {
  if (!is_power_) return rat_string(ratio_);
  return std::to_string(q_) + "^(-" + std::to_string(num_) + "/" + std::to_string(den_) + ")";
}

std::uint64_t rm_dim(unsigned k, unsigned q, unsigned d) {
  // digit-sum DP: vectors in {0..q-1}^k with sum <= d
  const unsigned cap = std::min(d, (q - 1) * k);
  std::vector<std::uint64_t> counts(cap + 1, 0);
  counts[0] = 1;
  for (unsigned j = 0; j < k; ++j) {
    std::vector<std::uint64_t> next(cap + 1, 0);
    for (unsigned s = 0; s <= cap; ++s) {
      if (!counts[s]) continue;
      for (unsigned e = 0; e < q && s + e <= cap; ++e) {
        const std::uint64_t v = next[s + e] + counts[s];
        if (v < next[s + e]) throw std::overflow_error("rm_dim overflow");
        next[s + e] = v;
      }
    }
    counts.swap(next);
  }
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) {
    if (total + c < total) throw std::overflow_error("rm_dim overflow");
    total += c;
  }
  return total;
}

std::vector<std::vector<Elem>> monomial_exponents(unsigned k, unsigned q, unsigned d) {
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> cur(k, 0);
  // depth-first enumeration, then graded-lex sort
  std::function<void(unsigned, unsigned)> rec = [&](unsigned pos, unsigned sum) {
    if (pos == k) {
      out.push_back(cur);
      return;
    }
    for (unsigned e = 0; e < q && sum + e <= d; ++e) {
      cur[pos] = static_cast<Elem>(e);
      rec(pos + 1, sum + e);
    }
    cur[pos] = 0;
  };
  rec(0, 0);
  std::sort(out.begin(), out.end(), [](const std::vector<Elem>& a, const std::vector<Elem>& b) {
    unsigned sa = 0, sb = 0;
    for (Elem e : a) sa += e;
    for (Elem e : b) sb += e;
    if (sa != sb) return sa < sb;
    return a < b;  // coordinate 0 most significant
  });
  return out;
}

namespace {

// q x q Vandermonde V[x][e] = x^e and its inverse over F_q.
space::MatrixFq vandermonde(const Field& f) {
  const unsigned q = f.q();
  space::MatrixFq v(q, q);
  for (unsigned x = 0; x < q; ++x)
    for (unsigned e = 0; e < q; ++e) v.at(x, e) = f.pow(static_cast<Elem>(x), e);
  return v;
}

space::MatrixFq invert_matrix(const Field& f, const space::MatrixFq& m) {
  const std::size_t n = m.rows;
  space::MatrixFq aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, n + r) = 1;
  }
  space::RrefResult rr = space::rref(f, aug);
  if (rr.rank != n) throw std::logic_error("matrix is singular");
  space::MatrixFq inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv.at(r, c) = rr.mat.at(r, n + c);
  return inv;
}

// In-place per-axis linear transform: line[e] <- sum_x M[e][x] line[x] along
// every axis-j line of the length-q^n tensor.
void apply_axis(const Field& f, std::vector<Elem>& values, unsigned q, unsigned j,
                const space::MatrixFq& m) {
  std::uint64_t stride = 1;
  for (unsigned i = 0; i < j; ++i) stride *= q;
  const std::uint64_t block = stride * q;
  std::vector<Elem> line(q), out(q);
  for (std::uint64_t base = 0; base < values.size(); base += block) {
    for (std::uint64_t off = 0; off < stride; ++off) {
      for (unsigned x = 0; x < q; ++x) line[x] = values[base + off + x * stride];
      for (unsigned e = 0; e < q; ++e) {
        Elem acc = 0;
        for (unsigned x = 0; x < q; ++x)
          if (line[x] != 0) acc = f.add(acc, f.mul(m.at(e, x), line[x]));
        out[e] = acc;
      }
      for (unsigned e = 0; e < q; ++e) values[base + off + e * stride] = out[e];
    }
  }
}

unsigned digit_sum(unsigned q, Point x) {
  unsigned s = 0;
  while (x) {
    s += static_cast<unsigned>(x % q);
    x /= q;
  }
  return s;
}

}  // namespace

CoefficientTensor interpolate_reduced(const FunctionTable& f) {
  if (f.has_erasures()) throw std::domain_error("cannot interpolate an erased table");
  const Field& fld = *f.field();
  const unsigned q = fld.q();
  CoefficientTensor t{f.field(), f.n(), f.values()};
  const space::MatrixFq inv = invert_matrix(fld, vandermonde(fld));
  for (unsigned j = 0; j < f.n(); ++j) apply_axis(fld, t.coeffs, q, j, inv);
  return t;
}

FunctionTable evaluate_tensor(const CoefficientTensor& c) {
  const Field& fld = *c.field;
  const unsigned q = fld.q();
  std::vector<Elem> values = c.coeffs;
  const space::MatrixFq v = vandermonde(fld);
  for (unsigned j = 0; j < c.n; ++j) apply_axis(fld, values, q, j, v);
  return FunctionTable(c.field, c.n, std::move(values));
}

std::vector<std::pair<Point, Elem>> nonzero_coefficients(const CoefficientTensor& c) {
  std::vector<std::pair<Point, Elem>> out;
  for (Point i = 0; i < c.coeffs.size(); ++i)
    if (c.coeffs[i] != 0) out.emplace_back(i, c.coeffs[i]);
  return out;
}

int degree(const FunctionTable& f) {
  const CoefficientTensor t = interpolate_reduced(f);
  int deg = -1;
  const unsigned q = f.field()->q();
  for (Point i = 0; i < t.coeffs.size(); ++i)
    if (t.coeffs[i] != 0) deg = std::max(deg, static_cast<int>(digit_sum(q, i)));
  return deg;
}

bool rm_membership(const FunctionTable& f, unsigned d) {
  return degree(f) <= static_cast<int>(d);
}

FunctionTable random_rm_codeword(const FieldPtr& field, unsigned n, unsigned d,
                                 RandomStream& rng) {
  const unsigned q = field->q();
  const std::uint64_t total = space::domain_size(q, n);
  if (d == 1 && q > 2) {
    // affine fast path: one digit-DP pass instead of the tensor transform
    std::vector<Elem> coeff(n + 1);
    for (auto& c : coeff) c = static_cast<Elem>(rng.below(q));
    const Field& f = *field;
    std::vector<Elem> values(total);
    values[0] = coeff[0];
    std::uint64_t stride = 1;
    for (unsigned m = 0; m < n; ++m) {
      for (unsigned digit = 1; digit < q; ++digit) {
        const Elem inc = f.mul(coeff[m + 1], static_cast<Elem>(digit));
        for (std::uint64_t r = 0; r < stride; ++r)
          values[digit * stride + r] = f.add(values[r], inc);
      }
      stride *= q;
    }
    return FunctionTable(field, n, std::move(values));
  }
  if (d == 1 && q == 2) {
    std::vector<Elem> coeff(n + 1);
    for (auto& c : coeff) c = static_cast<Elem>(rng.below(2));
    std::vector<Elem> values(total);
    values[0] = coeff[0];
    std::uint64_t stride = 1;
    for (unsigned m = 0; m < n; ++m) {
      if (coeff[m + 1])
        for (std::uint64_t r = 0; r < stride; ++r) values[stride + r] = values[r] ^ 1u;
      else
        for (std::uint64_t r = 0; r < stride; ++r) values[stride + r] = values[r];
      stride <<= 1;
    }
    return FunctionTable(field, n, std::move(values));
  }
  CoefficientTensor t{field, n, std::vector<Elem>(total, 0)};
  for (const auto& e : monomial_exponents(n, q, d))
    t.coeffs[space::vec_to_point(q, e)] = static_cast<Elem>(rng.below(q));
  return evaluate_tensor(t);
}

RmParams rm_parameters(const FieldPtr& field, unsigned d, unsigned k) {
  RmParams p;
  p.t_qd = testing_dimension(*field, d);
  p.t_alt = field->q() == 2 ? testing_dimension_alt_q2(d) : p.t_qd;
  const unsigned den = field->q() - 1;
  p.delta0 = Delta0::power(field->q(), d, den);
  // 1/delta0 = q^(d/(q-1)); ln|RM| = dim * ln q
  p.s_k = exactceil::ceil_log_power(100, rm_dim(k, field->q(), d), field->q(), d, den) + 1;
  return p;
}

// ---------------------------------------------------------------------------
// LiftedCode

void for_each_linear_combination(const std::vector<FunctionTable>& basis,
                                 const std::function<void(const FunctionTable&)>& fn);

namespace {

std::vector<Elem> table_key(const FunctionTable& f) { return f.values(); }

// min weight of a nonzero codeword over an enumerator; nullopt for the
// zero-only code
std::optional<Rat> min_nonzero_weight(
    unsigned q, unsigned k,
    const std::function<void(const std::function<void(const FunctionTable&)>&)>& for_each) {
  const std::uint64_t total = space::domain_size(q, k);
  std::uint64_t best = total + 1;
  for_each([&](const FunctionTable& g) {
    std::uint64_t w = 0;
    for (Point x = 0; x < g.size(); ++x) w += g[x] != 0;
    if (w != 0) best = std::min(best, w);
  });
  if (best > total) return std::nullopt;
  return Rat(Int(best), Int(total));
}

}  // namespace

LiftedCode::LiftedCode(FieldPtr field, unsigned t, unsigned lift_n,
                       std::vector<FunctionTable> base, std::optional<Rat> declared_delta0)
    : field_(std::move(field)), t_(t), n_(lift_n), base_(std::move(base)) {
  if (t_ < 1 || n_ < t_) throw ConfigError("lifted code requires 1 <= t <= n");
  if (base_.empty()) throw ConfigError("lifted code base is empty");
  for (const auto& g : base_) {
    if (g.n() != t_ || !g.field()->same_as(*field_))
      throw ConfigError("base tables must live on F_q^t");
    if (g.has_erasures()) throw ConfigError("base tables cannot contain erasures");
  }
  for (std::size_t i = 0; i < base_.size(); ++i) base_index_.emplace(table_key(base_[i]), i);

  const Field& f = *field_;
  const unsigned q = f.q();
  const std::uint64_t points = space::domain_size(q, t_);

  // exhaustive affine-closure check: f in base => f o T in base for every
  // affine T : F_q^t -> F_q^t, including the non-invertible ones
  {
    const std::uint64_t mats = space::domain_size(q, t_ * t_);
    const std::uint64_t shifts = points;
    std::vector<Point> image(points);
    for (std::uint64_t mi = 0; mi < mats; ++mi) {
      space::MatrixFq m(t_, t_);
      std::uint64_t v = mi;
      for (auto& e : m.a) {
        e = static_cast<Elem>(v % q);
        v /= q;
      }
      for (std::uint64_t bi = 0; bi < shifts; ++bi) {
        const std::vector<Elem> shift = space::point_to_vec(q, t_, bi);
        for (Point z = 0; z < points; ++z) {
          const std::vector<Elem> zv = space::point_to_vec(q, t_, z);
          std::vector<Elem> x = shift;
          for (unsigned r = 0; r < t_; ++r) {
            if (zv[r] == 0) continue;
            for (unsigned c = 0; c < t_; ++c)
              x[c] = f.add(x[c], f.mul(zv[r], m.at(r, c)));
          }
          image[z] = space::vec_to_point(q, x);
        }
        for (const auto& g : base_) {
          std::vector<Elem> composed(points);
          for (Point z = 0; z < points; ++z) composed[z] = g[image[z]];
          if (base_index_.find(composed) == base_index_.end())
            throw ConfigError("base is not affine-invariant (composition leaves the set)");
        }
      }
    }
  }

  // linearity: zero present, closed under addition and scalar multiplication
  base_linear_ = base_index_.count(std::vector<Elem>(points, 0)) > 0;
  if (base_linear_) {
    for (std::size_t i = 0; i < base_.size() && base_linear_; ++i) {
      for (unsigned c = 2; c < q && base_linear_; ++c) {
        std::vector<Elem> scaled(points);
        for (Point x = 0; x < points; ++x) scaled[x] = f.mul(static_cast<Elem>(c), base_[i][x]);
        base_linear_ = base_index_.count(scaled) > 0;
      }
      for (std::size_t j = i; j < base_.size() && base_linear_; ++j) {
        std::vector<Elem> sum(points);
        for (Point x = 0; x < points; ++x) sum[x] = f.add(base_[i][x], base_[j][x]);
        base_linear_ = base_index_.count(sum) > 0;
      }
    }
  }

  // delta0: smallest minimum distance across dims t..n, computed exactly from
  // the enumerable dimensions; a declared value must match the computable part
  std::optional<Rat> computed;
  const Int work_cap = Int(1) << 24;
  bool full_coverage = true;
  for (unsigned k = t_; k <= n_; ++k) {
    std::optional<Rat> dk;
    if (base_linear_) {
      // feasibility pre-check: constraint-matrix cells and enumeration size
      const Int flats = space::gaussian_binomial(k, t_, q) * ipow(Int(q), k - t_);
      const Int cells = flats * Int(points) * ipow(Int(q), k);
      if (cells > (Int(1) << 30)) {
        full_coverage = false;
        continue;
      }
      const auto& basis = lift_basis(k);
      const Int cnt = ipow(Int(q), static_cast<unsigned>(basis.size()));
      if (cnt * ipow(Int(q), k) <= work_cap) {
        dk = min_nonzero_weight(q, k, [&](const std::function<void(const FunctionTable&)>& fn) {
          for_each_linear_combination(basis, fn);
        });
      }
    } else if (k == t_) {
      // pairwise distances over the explicit list
      std::uint64_t best = points;
      bool any = false;
      for (std::size_t i = 0; i < base_.size(); ++i)
        for (std::size_t j = i + 1; j < base_.size(); ++j) {
          std::uint64_t w = 0;
          for (Point x = 0; x < points; ++x) w += base_[i][x] != base_[j][x];
          best = std::min(best, w);
          any = true;
        }
      if (any) dk = Rat(Int(best), Int(points));
    }
    if (!dk) {
      full_coverage = false;
      continue;
    }
    if (!computed || *dk < *computed) computed = *dk;
  }
  if (declared_delta0) {
    if (computed && *declared_delta0 > *computed)
      throw ConfigError("declared delta0 exceeds the computed minimum distance");
    delta0_ = *declared_delta0;
  } else if (computed && full_coverage) {
    delta0_ = *computed;
  } else {
    throw ConfigError("delta0 is not computable at this scale; declare it in the manifest");
  }
}

void for_each_linear_combination(const std::vector<FunctionTable>& basis,
                                 const std::function<void(const FunctionTable&)>& fn) {
  if (basis.empty()) return;
  const FieldPtr field = basis[0].field();
  const Field& f = *field;
  const unsigned q = f.q();
  const std::uint64_t points = basis[0].size();
  const std::size_t m = basis.size();
  std::vector<Elem> coeff(m, 0);
  std::vector<Elem> cur(points, 0);
  const std::uint64_t total = space::domain_size(q, static_cast<unsigned>(m));
  for (std::uint64_t idx = 0;; ++idx) {
    fn(FunctionTable(field, basis[0].n(), cur));
    if (idx + 1 == total) break;
    // odometer increment; each digit change adds (new - old) * basis_i
    std::size_t i = 0;
    for (;; ++i) {
      const Elem old = coeff[i];
      const Elem nxt = old == q - 1 ? 0 : static_cast<Elem>(old + 1);
      coeff[i] = nxt;
      const Elem delta = f.sub(nxt, old);
      for (Point x = 0; x < points; ++x)
        cur[x] = f.add(cur[x], f.mul(delta, basis[i][x]));
      if (nxt != 0) break;
    }
  }
}

std::shared_ptr<const LiftedCode> LiftedCode::rm_base(const FieldPtr& field, unsigned t,
                                                      unsigned d, unsigned lift_n) {
  std::vector<FunctionTable> base;
  const unsigned q = field->q();
  std::vector<FunctionTable> monomials;
  for (const auto& e : monomial_exponents(t, q, d)) {
    CoefficientTensor c{field, t, std::vector<Elem>(space::domain_size(q, t), 0)};
    c.coeffs[space::vec_to_point(q, e)] = 1;
    monomials.push_back(evaluate_tensor(c));
  }
  for_each_linear_combination(monomials,
                              [&](const FunctionTable& g) { base.push_back(g); });
  return std::make_shared<LiftedCode>(field, t, lift_n, std::move(base));
}

std::shared_ptr<const LiftedCode> LiftedCode::load(const std::string& dir, unsigned lift_n) {
  namespace fs = std::filesystem;
  std::ifstream manifest(fs::path(dir) / "manifest");
  if (!manifest) throw ParseError(0, "cannot open " + dir + "/manifest");
  unsigned t = 0, q = 0;
  std::size_t count = 0;
  std::optional<Rat> declared;
  std::string tok;
  while (manifest >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError(1, "bad manifest token: " + tok);
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "t")
      t = static_cast<unsigned>(std::stoul(val));
    else if (key == "q")
      q = static_cast<unsigned>(std::stoul(val));
    else if (key == "count")
      count = std::stoul(val);
    else if (key == "delta0") {
      const auto slash = val.find('/');
      if (slash == std::string::npos)
        declared = Rat(Int(val));
      else
        declared = Rat(Int(val.substr(0, slash)), Int(val.substr(slash + 1)));
    } else
      throw ParseError(1, "unknown manifest key: " + key);
  }
  if (t == 0 || q == 0 || count == 0) throw ParseError(1, "manifest needs t, q, count");
  std::vector<FunctionTable> base;
  FieldPtr field;
  for (std::size_t i = 0; i < count; ++i) {
    FunctionTable tab = functab::read_table_file(
        (fs::path(dir) / ("base_" + std::to_string(i) + ".tbl")).string());
    if (tab.field()->q() != q || tab.n() != t)
      throw ParseError(0, "base table " + std::to_string(i) + " does not match manifest");
    if (!field) field = tab.field();
    base.push_back(std::move(tab));
  }
  return std::make_shared<LiftedCode>(field, t, lift_n, std::move(base), declared);
}

bool LiftedCode::base_contains(const FunctionTable& g) const {
  return base_index_.find(table_key(g)) != base_index_.end();
}

bool LiftedCode::member(const FunctionTable& f) const {
  if (f.has_erasures()) throw std::domain_error("membership is undefined on erased tables");
  if (!f.field()->same_as(*field_)) throw std::domain_error("field mismatch");
  const unsigned nf = f.n();
  if (nf < t_ || nf > n_) throw std::domain_error("dimension outside the lift range");
  if (nf == t_) return base_contains(f);
  const unsigned q = field_->q();
  const Int flats = space::gaussian_binomial(nf, t_, q) * ipow(Int(q), nf - t_);
  if (flats * Int(space::domain_size(q, t_)) > Int(1ull << 26))
    throw std::length_error("flat enumeration budget exceeded");
  for (const auto& flat : space::enumerate_affine_flats(field_, nf, t_)) {
    const functab::Restriction r = functab::restrict(f, flat);
    if (!base_contains(r.table)) return false;
  }
  return true;
}

const std::vector<FunctionTable>& LiftedCode::lift_basis(unsigned k) const {
  if (!base_linear_) throw std::logic_error("lift basis requires a linear base");
  if (k < t_) throw std::domain_error("lift basis needs k >= t");
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = basis_cache_.find(k);
  if (it != basis_cache_.end()) return it->second;

  const Field& f = *field_;
  const unsigned q = f.q();
  const std::uint64_t points_t = space::domain_size(q, t_);
  const std::uint64_t points_k = space::domain_size(q, k);

  std::vector<FunctionTable> basis;
  if (k == t_) {
    // RREF of the base list itself
    space::MatrixFq rows(base_.size(), points_t);
    for (std::size_t i = 0; i < base_.size(); ++i)
      std::copy(base_[i].values().begin(), base_[i].values().end(),
                rows.a.begin() + static_cast<std::ptrdiff_t>(i * points_t));
    space::RrefResult rr = space::rref(f, rows);
    for (std::size_t r = 0; r < rr.rank; ++r) {
      std::vector<Elem> vals(points_t);
      for (std::uint64_t c = 0; c < points_t; ++c) vals[c] = rr.mat.at(r, c);
      basis.emplace_back(field_, t_, std::move(vals));
    }
  } else {
    // The lift is the null space of the linear system "every affine t-flat
    // restriction is orthogonal to the dual of the base span".
    space::MatrixFq base_rows(base_.size(), points_t);
    for (std::size_t i = 0; i < base_.size(); ++i)
      std::copy(base_[i].values().begin(), base_[i].values().end(),
                base_rows.a.begin() + static_cast<std::ptrdiff_t>(i * points_t));
    const space::Subspace base_span =
        space::Subspace::from_basis(field_, static_cast<unsigned>(points_t), base_rows);
    const space::Subspace dual = space::null_space(base_span);

    const auto flats = space::enumerate_affine_flats(field_, k, t_);
    space::MatrixFq constraints(flats.size() * dual.dim(), points_k);
    std::size_t row = 0;
    for (const auto& flat : flats) {
      // ambient positions of the flat in local order
      std::vector<Point> pts = space::enumerate_points(flat);
      for (unsigned drow = 0; drow < dual.dim(); ++drow) {
        for (Point z = 0; z < points_t; ++z) {
          const Elem h = dual.basis().at(drow, static_cast<std::size_t>(z));
          if (h != 0)
            constraints.at(row, pts[z]) = f.add(constraints.at(row, pts[z]), h);
        }
        ++row;
      }
    }
    const space::Subspace constraint_space =
        space::Subspace::from_basis(field_, static_cast<unsigned>(points_k), constraints);
    const space::Subspace lift = space::null_space(constraint_space);
    for (unsigned r = 0; r < lift.dim(); ++r) {
      std::vector<Elem> vals(points_k);
      for (std::uint64_t c = 0; c < points_k; ++c) vals[c] = lift.basis().at(r, c);
      basis.emplace_back(field_, k, std::move(vals));
    }
  }
  auto [pos, inserted] = basis_cache_.emplace(k, std::move(basis));
  return pos->second;
}

// ---------------------------------------------------------------------------
// CodeFamily

std::uint64_t CodeFamily::dim_at(unsigned) const {
  throw std::logic_error("family has no linear basis");
}
void CodeFamily::basis_row(unsigned, Point, Elem*) const {
  throw std::logic_error("family has no linear basis");
}
Int CodeFamily::count_at(unsigned) const {
  throw std::logic_error("family size is not available");
}
bool CodeFamily::enumerable_at(unsigned k, std::uint64_t cap) const {
  try {
    return count_at(k) <= Int(cap);
  } catch (const std::logic_error&) {
    return false;
  }
}
void CodeFamily::for_each_codeword(unsigned,
                                   const std::function<void(const FunctionTable&)>&) const {
  throw std::logic_error("family is not enumerable");
}
FunctionTable CodeFamily::random_codeword(unsigned, RandomStream&) const {
  throw std::logic_error("family cannot sample codewords");
}
std::uint64_t CodeFamily::query_budget(unsigned k) const {
  const Delta0 d0 = delta0();
  if (linear()) {
    const std::uint64_t m = dim_at(k);
    if (d0.is_power())
      return exactceil::ceil_log_power(100, m, field()->q(), d0.pow_num(), d0.pow_den()) + 1;
    return exactceil::ceil_log_rational(100, m, field()->q(), denominator(d0.ratio()),
                                        numerator(d0.ratio())) +
           1;
  }
  if (d0.is_power()) throw std::logic_error("power-form delta0 requires a linear family");
  return exactceil::ceil_count_log(100, count_at(k), denominator(d0.ratio()),
                                   numerator(d0.ratio())) +
         1;
}

namespace {

class RmFamily final : public CodeFamily {
 public:
  RmFamily(FieldPtr field, unsigned d) : field_(std::move(field)), d_(d) {
    t_ = testing_dimension(*field_, d_);
    delta0_ = Delta0::power(field_->q(), d_, field_->q() - 1);
  }

  std::string name() const override {
    return "rm[q=" + std::to_string(field_->q()) + ",d=" + std::to_string(d_) + "]";
  }
  const FieldPtr& field() const override { return field_; }
  unsigned base_dim() const override { return t_; }
  Delta0 delta0() const override { return delta0_; }
  bool member(const FunctionTable& f) const override { return rm_membership(f, d_); }
  bool linear() const override { return true; }
  std::uint64_t dim_at(unsigned k) const override { return rm_dim(k, field_->q(), d_); }

  void basis_row(unsigned k, Point z, Elem* out) const override {
    const auto& exps = exponents_at(k);
    const Field& f = *field_;
    const unsigned q = f.q();
    // digit powers z_j^e for e <= d
    const unsigned maxe = std::min(d_, q - 1);
    std::vector<Elem> powers(k * (maxe + 1));
    Point rest = z;
    for (unsigned j = 0; j < k; ++j) {
      const Elem digit = static_cast<Elem>(rest % q);
      rest /= q;
      powers[j * (maxe + 1)] = 1;
      for (unsigned e = 1; e <= maxe; ++e)
        powers[j * (maxe + 1) + e] = f.mul(powers[j * (maxe + 1) + e - 1], digit);
    }
    for (std::size_t i = 0; i < exps.size(); ++i) {
      Elem acc = 1;
      for (unsigned j = 0; j < k && acc != 0; ++j) {
        const Elem e = exps[i][j];
        if (e != 0) acc = f.mul(acc, powers[j * (maxe + 1) + e]);
      }
      out[i] = acc;
    }
  }

  Int count_at(unsigned k) const override { return ipow(Int(field_->q()), dim_at(k)); }

  void for_each_codeword(unsigned k,
                         const std::function<void(const FunctionTable&)>& fn) const override {
    std::vector<FunctionTable> monos;
    const unsigned q = field_->q();
    for (const auto& e : monomial_exponents(k, q, d_)) {
      CoefficientTensor c{field_, k, std::vector<Elem>(space::domain_size(q, k), 0)};
      c.coeffs[space::vec_to_point(q, e)] = 1;
      monos.push_back(evaluate_tensor(c));
    }
    for_each_linear_combination(monos, fn);
  }

  FunctionTable random_codeword(unsigned n, RandomStream& rng) const override {
    return random_rm_codeword(field_, n, d_, rng);
  }

  std::uint64_t query_budget(unsigned k) const override {
    return rm_parameters(field_, d_, k).s_k;
  }

  unsigned degree_bound() const { return d_; }

 private:
  const std::vector<std::vector<Elem>>& exponents_at(unsigned k) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = exp_cache_.find(k);
    if (it == exp_cache_.end())
      it = exp_cache_.emplace(k, monomial_exponents(k, field_->q(), d_)).first;
    return it->second;
  }

  FieldPtr field_;
  unsigned d_, t_;
  Delta0 delta0_;
  mutable std::mutex mutex_;
  mutable std::map<unsigned, std::vector<std::vector<Elem>>> exp_cache_;
};

class LiftedFamily final : public CodeFamily {
 public:
  explicit LiftedFamily(std::shared_ptr<const LiftedCode> code) : code_(std::move(code)) {
    delta0_ = Delta0::rational(code_->delta0());
  }

  std::string name() const override {
    return "lifted[t=" + std::to_string(code_->t()) + ",q=" +
           std::to_string(code_->field()->q()) + ",base=" + std::to_string(code_->base().size()) +
           "]";
  }
  const FieldPtr& field() const override { return code_->field(); }
  unsigned base_dim() const override { return code_->t(); }
  Delta0 delta0() const override { return delta0_; }
  bool member(const FunctionTable& f) const override { return code_->member(f); }
  bool linear() const override { return code_->base_linear(); }
  std::uint64_t dim_at(unsigned k) const override { return code_->lift_basis(k).size(); }

  void basis_row(unsigned k, Point z, Elem* out) const override {
    const auto& basis = code_->lift_basis(k);
    for (std::size_t i = 0; i < basis.size(); ++i) out[i] = basis[i][z];
  }

  Int count_at(unsigned k) const override {
    if (linear()) return ipow(Int(code_->field()->q()), dim_at(k));
    if (k == code_->t()) return Int(code_->base().size());
    throw std::logic_error("nonlinear lift size is not available above the base dimension");
  }

  void for_each_codeword(unsigned k,
                         const std::function<void(const FunctionTable&)>& fn) const override {
    if (linear()) {
      for_each_linear_combination(code_->lift_basis(k), fn);
      return;
    }
    if (k != code_->t()) throw std::logic_error("nonlinear lift is not enumerable above t");
    for (const auto& g : code_->base()) fn(g);
  }

  FunctionTable random_codeword(unsigned n, RandomStream& rng) const override {
    if (linear()) {
      const auto& basis = code_->lift_basis(n);
      const Field& f = *code_->field();
      FunctionTable out(code_->field(), n);
      for (const auto& b : basis) {
        const Elem c = static_cast<Elem>(rng.below(f.q()));
        if (c == 0) continue;
        for (Point x = 0; x < out.size(); ++x) out.set(x, f.add(out[x], f.mul(c, b[x])));
      }
      return out;
    }
    if (n != code_->t()) throw std::logic_error("cannot sample the nonlinear lift above t");
    return code_->base()[rng.below(code_->base().size())];
  }

 private:
  std::shared_ptr<const LiftedCode> code_;
  Delta0 delta0_;
};

class GenericFamily final : public CodeFamily {
 public:
  GenericFamily(FieldPtr field, std::string name, unsigned base_dim, Delta0 d0,
                std::function<bool(const FunctionTable&)> membership)
      : field_(std::move(field)), name_(std::move(name)), t_(base_dim), delta0_(d0),
        membership_(std::move(membership)) {}

  std::string name() const override { return name_; }
  const FieldPtr& field() const override { return field_; }
  unsigned base_dim() const override { return t_; }
  Delta0 delta0() const override { return delta0_; }
  bool member(const FunctionTable& f) const override { return membership_(f); }
  bool linear() const override { return false; }

 private:
  FieldPtr field_;
  std::string name_;
  unsigned t_;
  Delta0 delta0_;
  std::function<bool(const FunctionTable&)> membership_;
};

}  // namespace

std::shared_ptr<const CodeFamily> make_rm_family(const FieldPtr& field, unsigned d) {
  return std::make_shared<RmFamily>(field, d);
}

std::shared_ptr<const CodeFamily> make_lifted_family(std::shared_ptr<const LiftedCode> code) {
  return std::make_shared<LiftedFamily>(std::move(code));
}

std::shared_ptr<const CodeFamily> make_generic_family(
    FieldPtr field, std::string name, unsigned base_dim, Delta0 delta0,
    std::function<bool(const FunctionTable&)> membership) {
  return std::make_shared<GenericFamily>(std::move(field), std::move(name), base_dim, delta0,
                                         std::move(membership));
}

Rat exact_distance(const FunctionTable& f, const CodeFamily& family, std::uint64_t cap) {
  if (!family.enumerable_at(f.n(), cap))
    throw std::length_error(
        "family too large for exhaustive distance; use plant-certified instances");
  const std::uint64_t total = f.size();
  std::uint64_t best = total + 1;
  family.for_each_codeword(f.n(), [&](const FunctionTable& g) {
    std::uint64_t w = 0;
    for (Point x = 0; x < total; ++x) w += f[x] != g[x];
    best = std::min(best, w);
  });
  return Rat(Int(best), Int(total));
}

PlantedInstance plant(const CodeFamily& family, unsigned n, std::uint64_t noise_weight,
                      RandomStream& rng) {
  const unsigned q = family.field()->q();
  const std::uint64_t total = space::domain_size(q, n);
  if (noise_weight > 0 &&
      !family.delta0().within_unique_decoding(Rat(Int(noise_weight), Int(total))))
    throw std::domain_error(
        "noise weight reaches the unique-decoding radius; distance would not be certified");
  PlantedInstance inst{family.random_codeword(n, rng), {}, FunctionTable(family.field(), n),
                       Rat(Int(noise_weight), Int(total))};
  // distinct support points
  std::set<Point> support;
  while (support.size() < noise_weight) support.insert(rng.below(total));
  inst.support.assign(support.begin(), support.end());
  inst.f = inst.codeword;
  const Field& fld = *family.field();
  for (Point x : inst.support) {
    const Elem offset = static_cast<Elem>(1 + rng.below(q - 1));
    inst.f.set(x, fld.add(inst.f[x], offset));
  }
  return inst;
}

}  // namespace rmlab::rm

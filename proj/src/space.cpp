#include "rmlab/space.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rmlab::space {

std::uint64_t domain_size(unsigned q, unsigned n) {
  std::uint64_t size = 1;
  for (unsigned i = 0; i < n; ++i) {
    if (size > kMaxTableEntries / q)
      throw std::length_error("q^n exceeds the dense-table guard of 2^28 entries");
    size *= q;
  }
  return size;
}

std::vector<Elem> point_to_vec(unsigned q, unsigned n, Point x) {
  std::vector<Elem> v(n, 0);
  for (unsigned j = 0; j < n; ++j) {
    v[j] = static_cast<Elem>(x % q);
    x /= q;
  }
  return v;
}

Point vec_to_point(unsigned q, const std::vector<Elem>& v) {
  Point x = 0;
  for (std::size_t j = v.size(); j-- > 0;) x = x * q + v[j];
  return x;
}

MatrixFq MatrixFq::identity(std::size_t n) {
  MatrixFq m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RrefResult rref(const Field& f, MatrixFq m) {
  RrefResult res;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < m.cols && pivot_row < m.rows; ++col) {
    std::size_t sel = pivot_row;
    while (sel < m.rows && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows) continue;
    if (sel != pivot_row)
      for (std::size_t c = 0; c < m.cols; ++c) std::swap(m.at(sel, c), m.at(pivot_row, c));
    const Elem inv = f.inv(m.at(pivot_row, col));
    for (std::size_t c = col; c < m.cols; ++c) m.at(pivot_row, c) = f.mul(inv, m.at(pivot_row, c));
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (r == pivot_row) continue;
      const Elem factor = m.at(r, col);
      if (factor == 0) continue;
      for (std::size_t c = col; c < m.cols; ++c)
        m.at(r, c) = f.sub(m.at(r, c), f.mul(factor, m.at(pivot_row, c)));
    }
    res.pivot_cols.push_back(static_cast<unsigned>(col));
    ++pivot_row;
  }
  res.rank = pivot_row;
  res.mat = std::move(m);
  return res;
}

std::size_t matrix_rank(const Field& f, const MatrixFq& m) { return rref(f, m).rank; }

std::vector<Elem> mul_row(const Field& f, const std::vector<Elem>& row, const MatrixFq& mat) {
  std::vector<Elem> out(mat.cols, 0);
  for (std::size_t r = 0; r < mat.rows; ++r) {
    const Elem c = row[r];
    if (c == 0) continue;
    for (std::size_t j = 0; j < mat.cols; ++j)
      out[j] = f.add(out[j], f.mul(c, mat.at(r, j)));
  }
  return out;
}

Subspace Subspace::from_basis(FieldPtr field, unsigned ambient, const MatrixFq& rows) {
  if (rows.cols != ambient && rows.rows != 0)
    throw std::invalid_argument("basis width does not match ambient dimension");
  MatrixFq m = rows;
  m.cols = ambient;
  if (m.rows == 0) m.a.clear();
  RrefResult r = rref(*field, std::move(m));
  MatrixFq basis(r.rank, ambient);
  std::copy(r.mat.a.begin(), r.mat.a.begin() + static_cast<std::ptrdiff_t>(r.rank * ambient),
            basis.a.begin());
  return Subspace(std::move(field), ambient, std::move(basis), std::move(r.pivot_cols));
}

Subspace Subspace::zero(FieldPtr field, unsigned ambient) {
  return Subspace(std::move(field), ambient, MatrixFq(0, ambient), {});
}

Subspace Subspace::full(FieldPtr field, unsigned ambient) {
  std::vector<unsigned> piv(ambient);
  for (unsigned i = 0; i < ambient; ++i) piv[i] = i;
  return Subspace(std::move(field), ambient, MatrixFq::identity(ambient), std::move(piv));
}

bool Subspace::contains(const std::vector<Elem>& v) const {
  // reduce v by the RREF basis; membership iff the residue is zero
  const Field& f = *field_;
  std::vector<Elem> r = v;
  for (std::size_t row = 0; row < basis_.rows; ++row) {
    const Elem c = r[pivots_[row]];
    if (c == 0) continue;
    for (unsigned j = 0; j < ambient_; ++j) r[j] = f.sub(r[j], f.mul(c, basis_.at(row, j)));
  }
  return std::all_of(r.begin(), r.end(), [](Elem e) { return e == 0; });
}

bool Subspace::contains(Point x) const {
  return contains(point_to_vec(field_->q(), ambient_, x));
}

std::vector<Elem> Subspace::coordinates_of(const std::vector<Elem>& v) const {
  std::vector<Elem> z(basis_.rows);
  for (std::size_t row = 0; row < basis_.rows; ++row) z[row] = v[pivots_[row]];
  return z;
}

std::string Subspace::serialize() const {
  std::ostringstream out;
  out << dim() << " " << ambient_;
  for (std::size_t r = 0; r < basis_.rows; ++r) {
    out << " ;";
    for (unsigned c = 0; c < ambient_; ++c) out << (c ? "," : " ") << unsigned(basis_.at(r, c));
  }
  return out.str();
}

Subspace Subspace::deserialize(FieldPtr field, const std::string& text) {
  std::istringstream in(text);
  unsigned k = 0, n = 0;
  if (!(in >> k >> n)) throw ParseError(1, "subspace header needs \"k n\"");
  MatrixFq m(k, n);
  std::string tok;
  for (unsigned r = 0; r < k; ++r) {
    if (!(in >> tok) || tok != ";") throw ParseError(1, "expected ';' before basis row");
    if (!(in >> tok)) throw ParseError(1, "missing basis row");
    std::istringstream row(tok);
    std::string cell;
    unsigned c = 0;
    while (std::getline(row, cell, ',')) {
      if (c >= n) throw ParseError(1, "basis row too long");
      const unsigned long v = std::stoul(cell);
      if (v >= field->q()) throw ParseError(1, "basis entry out of field range");
      m.at(r, c++) = static_cast<Elem>(v);
    }
    if (c != n) throw ParseError(1, "basis row too short");
  }
  Subspace s = Subspace::from_basis(field, n, m);
  if (s.dim() != k) throw ParseError(1, "basis rows are linearly dependent");
  return s;
}

AffineFlat::AffineFlat(Subspace dir, std::vector<Elem> raw_shift) : direction(std::move(dir)) {
  const Field& f = *direction.field();
  std::vector<Elem> s = std::move(raw_shift);
  if (s.size() != direction.ambient_dim())
    throw std::invalid_argument("shift length does not match ambient dimension");
  const MatrixFq& b = direction.basis();
  for (std::size_t row = 0; row < b.rows; ++row) {
    const Elem c = s[direction.pivots()[row]];
    if (c == 0) continue;
    for (unsigned j = 0; j < direction.ambient_dim(); ++j)
      s[j] = f.sub(s[j], f.mul(c, b.at(row, j)));
  }
  shift = std::move(s);
}

Int gaussian_binomial(unsigned n, unsigned k, unsigned q) {
  if (k > n) throw std::domain_error("gaussian_binomial requires k <= n");
  Int num = 1, den = 1;
  const Int Q = q;
  for (unsigned i = 0; i < k; ++i) {
    num *= ipow(Q, n) - ipow(Q, i);
    den *= ipow(Q, k) - ipow(Q, i);
  }
  return num / den;
}

Subspace random_subspace(const FieldPtr& field, unsigned n, unsigned k, RandomStream& rng) {
  if (k < 1 || k > n) throw std::invalid_argument("random_subspace requires 1 <= k <= n");
  const unsigned q = field->q();
  for (;;) {
    MatrixFq m(k, n);
    for (auto& e : m.a) e = static_cast<Elem>(rng.below(q));
    RrefResult r = rref(*field, m);
    if (r.rank == k) {
      MatrixFq basis(k, n);
      std::copy(r.mat.a.begin(), r.mat.a.begin() + static_cast<std::ptrdiff_t>(k) * n,
                basis.a.begin());
      return Subspace::from_basis(field, n, basis);
    }
  }
}

MatrixFq random_invertible(const FieldPtr& field, unsigned n, RandomStream& rng) {
  if (n < 1) throw std::invalid_argument("random_invertible requires n >= 1");
  const unsigned q = field->q();
  for (;;) {
    MatrixFq m(n, n);
    for (auto& e : m.a) e = static_cast<Elem>(rng.below(q));
    if (matrix_rank(*field, m) == n) return m;
  }
}

std::vector<std::vector<Elem>> hyperplane_normals(const FieldPtr& field, unsigned n) {
  const unsigned q = field->q();
  std::vector<std::vector<Elem>> out;
  // leading (highest-index nonzero) coefficient fixed to 1
  std::vector<Elem> a(n, 0);
  for (unsigned lead = 0; lead < n; ++lead) {
    const std::uint64_t combos = domain_size(q, lead);
    for (std::uint64_t low = 0; low < combos; ++low) {
      std::fill(a.begin(), a.end(), 0);
      std::uint64_t v = low;
      for (unsigned j = 0; j < lead; ++j) {
        a[j] = static_cast<Elem>(v % q);
        v /= q;
      }
      a[lead] = 1;
      out.push_back(a);
    }
  }
  return out;
}

Subspace hyperplane_from_normal(const FieldPtr& field, const std::vector<Elem>& normal) {
  const Field& f = *field;
  const unsigned n = static_cast<unsigned>(normal.size());
  unsigned lead = n;
  for (unsigned j = 0; j < n; ++j)
    if (normal[j] != 0) lead = j;
  if (lead == n) throw std::invalid_argument("hyperplane normal must be nonzero");
  // kernel basis: e_j - (a_j / a_lead) e_lead for j != lead
  const Elem inv_lead = f.inv(normal[lead]);
  MatrixFq m(n - 1, n);
  std::size_t r = 0;
  for (unsigned j = 0; j < n; ++j) {
    if (j == lead) continue;
    m.at(r, j) = 1;
    m.at(r, lead) = f.neg(f.mul(normal[j], inv_lead));
    ++r;
  }
  return Subspace::from_basis(field, n, m);
}

std::vector<Subspace> enumerate_hyperplanes(const FieldPtr& field, unsigned n) {
  std::vector<Subspace> out;
  for (const auto& a : hyperplane_normals(field, n)) out.push_back(hyperplane_from_normal(field, a));
  return out;
}

Subspace null_space(const Subspace& u) {
  const Field& f = *u.field();
  const unsigned n = u.ambient_dim();
  const MatrixFq& b = u.basis();
  // solutions x of B x^T = 0, read off the RREF: free coordinates parametrize
  std::vector<bool> is_pivot(n, false);
  for (unsigned p : u.pivots()) is_pivot[p] = true;
  MatrixFq out(n - u.dim(), n);
  std::size_t r = 0;
  for (unsigned freec = 0; freec < n; ++freec) {
    if (is_pivot[freec]) continue;
    out.at(r, freec) = 1;
    for (std::size_t row = 0; row < b.rows; ++row)
      out.at(r, u.pivots()[row]) = f.neg(b.at(row, freec));
    ++r;
  }
  return Subspace::from_basis(u.field(), n, out);
}

Subspace intersect(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim())
    throw std::invalid_argument("intersect requires a common ambient space");
  // U cap V = null(dual(U) stacked with dual(V))
  const Subspace du = null_space(u);
  const Subspace dv = null_space(v);
  MatrixFq stack(du.dim() + dv.dim(), u.ambient_dim());
  std::copy(du.basis().a.begin(), du.basis().a.end(), stack.a.begin());
  std::copy(dv.basis().a.begin(), dv.basis().a.end(),
            stack.a.begin() + static_cast<std::ptrdiff_t>(du.dim()) * u.ambient_dim());
  return null_space(Subspace::from_basis(u.field(), u.ambient_dim(), stack));
}

namespace {

// Enumerates x = shift + z * basis over all z in index order; O(1) extra work
// per point by extending prefixes digit by digit.
std::vector<Point> span_points(const Field& f, const MatrixFq& basis,
                               const std::vector<Elem>* shift) {
  const unsigned q = f.q();
  const unsigned n = static_cast<unsigned>(basis.cols);
  const unsigned k = static_cast<unsigned>(basis.rows);
  const std::uint64_t count = domain_size(q, k);
  std::vector<std::vector<Elem>> vecs(count);
  std::vector<Point> out(count);
  vecs[0] = shift ? *shift : std::vector<Elem>(n, 0);
  out[0] = vec_to_point(q, vecs[0]);
  std::uint64_t filled = 1;
  for (unsigned row = 0; row < k; ++row) {
    const std::uint64_t block = filled;
    for (unsigned digit = 1; digit < q; ++digit) {
      for (std::uint64_t r = 0; r < block; ++r) {
        std::vector<Elem> v = vecs[r];
        for (unsigned j = 0; j < n; ++j)
          v[j] = f.add(v[j], f.mul(static_cast<Elem>(digit), basis.at(row, j)));
        vecs[filled] = std::move(v);
        out[filled] = vec_to_point(q, vecs[filled]);
        ++filled;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Point> enumerate_points(const Subspace& s) {
  return span_points(*s.field(), s.basis(), nullptr);
}

std::vector<Point> enumerate_points(const AffineFlat& flat) {
  return span_points(*flat.direction.field(), flat.direction.basis(), &flat.shift);
}

std::vector<Subspace> enumerate_subspaces(const FieldPtr& field, unsigned n, unsigned k) {
  if (k > n) throw std::domain_error("enumerate_subspaces requires k <= n");
  std::vector<Subspace> out;
  // Schubert cells: choose pivot columns, then fill the free entries. An RREF
  // matrix has arbitrary entries at (r, c) with c > pivot_r and c not a pivot.
  std::vector<unsigned> pivots(k);
  const unsigned q = field->q();
  const auto emit = [&]() {
    std::vector<std::pair<unsigned, unsigned>> free_cells;
    std::vector<bool> is_pivot(n, false);
    for (unsigned p : pivots) is_pivot[p] = true;
    for (unsigned r = 0; r < k; ++r)
      for (unsigned c = pivots[r] + 1; c < n; ++c)
        if (!is_pivot[c]) free_cells.emplace_back(r, c);
    const std::uint64_t combos = domain_size(q, static_cast<unsigned>(free_cells.size()));
    for (std::uint64_t v = 0; v < combos; ++v) {
      MatrixFq m(k, n);
      for (unsigned r = 0; r < k; ++r) m.at(r, pivots[r]) = 1;
      std::uint64_t rest = v;
      for (const auto& [r, c] : free_cells) {
        m.at(r, c) = static_cast<Elem>(rest % q);
        rest /= q;
      }
      out.push_back(Subspace::from_basis(field, n, m));
    }
  };
  // iterate pivot combinations in lexicographic order
  for (unsigned i = 0; i < k; ++i) pivots[i] = i;
  if (k == 0) {
    out.push_back(Subspace::zero(field, n));
    return out;
  }
  for (;;) {
    emit();
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && pivots[static_cast<unsigned>(i)] == n - k + static_cast<unsigned>(i)) --i;
    if (i < 0) break;
    ++pivots[static_cast<unsigned>(i)];
    for (unsigned j = static_cast<unsigned>(i) + 1; j < k; ++j) pivots[j] = pivots[j - 1] + 1;
  }
  return out;
}

std::vector<AffineFlat> enumerate_affine_flats(const FieldPtr& field, unsigned n, unsigned k) {
  const unsigned q = field->q();
  std::vector<AffineFlat> out;
  for (const Subspace& dir : enumerate_subspaces(field, n, k)) {
    // canonical coset representatives: zero at the pivot coordinates
    std::vector<bool> is_pivot(n, false);
    for (unsigned p : dir.pivots()) is_pivot[p] = true;
    std::vector<unsigned> free_coords;
    for (unsigned j = 0; j < n; ++j)
      if (!is_pivot[j]) free_coords.push_back(j);
    const std::uint64_t combos = domain_size(q, static_cast<unsigned>(free_coords.size()));
    for (std::uint64_t v = 0; v < combos; ++v) {
      std::vector<Elem> shift(n, 0);
      std::uint64_t rest = v;
      for (unsigned j : free_coords) {
        shift[j] = static_cast<Elem>(rest % q);
        rest /= q;
      }
      out.emplace_back(dir, std::move(shift));
    }
  }
  return out;
}

}  // namespace rmlab::space

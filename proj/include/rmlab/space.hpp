#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmlab/gf.hpp"
#include "rmlab/rational.hpp"
#include "rmlab/rng.hpp"

namespace rmlab::space {

using gf::Elem;
using gf::Field;
using gf::FieldPtr;

// Index of a point of F_q^n: idx = sum_j x_j q^j, coordinate 0 least
// significant. This fixes the table file format and restriction maps.
using Point = std::uint64_t;

// Dense tables refuse domains larger than this many entries.
inline constexpr std::uint64_t kMaxTableEntries = 1ull << 28;

std::uint64_t domain_size(unsigned q, unsigned n);  // q^n, overflow-checked

std::vector<Elem> point_to_vec(unsigned q, unsigned n, Point x);
Point vec_to_point(unsigned q, const std::vector<Elem>& v);

struct MatrixFq {
  std::size_t rows = 0, cols = 0;
  std::vector<Elem> a;

  MatrixFq() = default;
  MatrixFq(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

  Elem& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  Elem at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
  bool operator==(const MatrixFq& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
  static MatrixFq identity(std::size_t n);
};

struct RrefResult {
  MatrixFq mat;
  std::size_t rank = 0;
  std::vector<unsigned> pivot_cols;
};

RrefResult rref(const Field& f, MatrixFq m);

std::size_t matrix_rank(const Field& f, const MatrixFq& m);

// row * mat over F_q (row length = mat.rows)
std::vector<Elem> mul_row(const Field& f, const std::vector<Elem>& row, const MatrixFq& mat);

// Linear subspace in canonical form: the basis is the RREF of any generating
// set, so structural equality coincides with subspace equality.
class Subspace {
 public:
  static Subspace from_basis(FieldPtr field, unsigned ambient, const MatrixFq& rows);
  static Subspace zero(FieldPtr field, unsigned ambient);
  static Subspace full(FieldPtr field, unsigned ambient);

  const FieldPtr& field() const { return field_; }
  unsigned ambient_dim() const { return ambient_; }
  unsigned dim() const { return static_cast<unsigned>(basis_.rows); }
  const MatrixFq& basis() const { return basis_; }
  const std::vector<unsigned>& pivots() const { return pivots_; }

  bool contains(const std::vector<Elem>& v) const;
  bool contains(Point x) const;
  // Coordinates z with z * basis = v; in RREF form these are the pivot
  // coordinates of v. Requires membership.
  std::vector<Elem> coordinates_of(const std::vector<Elem>& v) const;

  bool operator==(const Subspace& o) const {
    return ambient_ == o.ambient_ && basis_ == o.basis_;
  }
  bool operator!=(const Subspace& o) const { return !(*this == o); }

  std::string serialize() const;  // "k n ; row ; row ; ..."
  static Subspace deserialize(FieldPtr field, const std::string& text);

 private:
  Subspace(FieldPtr field, unsigned ambient, MatrixFq basis, std::vector<unsigned> pivots)
      : field_(std::move(field)), ambient_(ambient), basis_(std::move(basis)),
        pivots_(std::move(pivots)) {}

  FieldPtr field_;
  unsigned ambient_ = 0;
  MatrixFq basis_;  // dim x ambient, RREF
  std::vector<unsigned> pivots_;
};

// Affine flat: direction subspace plus a shift reduced modulo the direction
// (pivot coordinates zeroed), which is the lexicographically smallest coset
// representative.
struct AffineFlat {
  Subspace direction;
  std::vector<Elem> shift;

  AffineFlat(Subspace dir, std::vector<Elem> raw_shift);
  unsigned ambient_dim() const { return direction.ambient_dim(); }
  unsigned dim() const { return direction.dim(); }
  bool operator==(const AffineFlat& o) const {
    return direction == o.direction && shift == o.shift;
  }
};

// Number of k-dimensional subspaces of F_q^n, exact.
Int gaussian_binomial(unsigned n, unsigned k, unsigned q);

// Uniform over k-dimensional subspaces, by redrawing k x n matrices with
// i.i.d. uniform entries until full rank. Every subspace has the same number
// of ordered bases, so the result is exactly uniform.
Subspace random_subspace(const FieldPtr& field, unsigned n, unsigned k, RandomStream& rng);

MatrixFq random_invertible(const FieldPtr& field, unsigned n, RandomStream& rng);

// Canonical hyperplane normals: nonzero functionals with leading coefficient
// 1, one per hyperplane; (q^n - 1)/(q - 1) of them.
std::vector<std::vector<Elem>> hyperplane_normals(const FieldPtr& field, unsigned n);
Subspace hyperplane_from_normal(const FieldPtr& field, const std::vector<Elem>& normal);
std::vector<Subspace> enumerate_hyperplanes(const FieldPtr& field, unsigned n);

Subspace intersect(const Subspace& u, const Subspace& v);

// Dual (null) space of the row space.
Subspace null_space(const Subspace& u);

std::vector<Point> enumerate_points(const Subspace& s);
std::vector<Point> enumerate_points(const AffineFlat& flat);

std::vector<Subspace> enumerate_subspaces(const FieldPtr& field, unsigned n, unsigned k);
std::vector<AffineFlat> enumerate_affine_flats(const FieldPtr& field, unsigned n, unsigned k);

}  // namespace rmlab::space

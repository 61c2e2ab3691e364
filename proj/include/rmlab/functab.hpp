#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rmlab/gf.hpp"
#include "rmlab/rational.hpp"
#include "rmlab/rng.hpp"
#include "rmlab/space.hpp"

namespace rmlab::functab {

using gf::Elem;
using gf::Field;
using gf::FieldPtr;
using gf::kErased;
using space::AffineFlat;
using space::MatrixFq;
using space::Point;
using space::Subspace;

// Symbol is either a field element index or the erasure mark.
using Symbol = gf::Elem;

// Dense evaluation table of f: F_q^n -> F_q. Freshly constructed mathematical
// functions carry no erasure marks; those appear only in oracle snapshots and
// files that declare them.
class FunctionTable {
 public:
  FunctionTable(FieldPtr field, unsigned n);
  FunctionTable(FieldPtr field, unsigned n, std::vector<Symbol> values);

  const FieldPtr& field() const { return field_; }
  unsigned n() const { return n_; }
  std::uint64_t size() const { return values_.size(); }
  Symbol operator[](Point x) const { return values_[x]; }
  void set(Point x, Symbol v);
  const std::vector<Symbol>& values() const { return values_; }

  bool has_erasures() const;
  bool operator==(const FunctionTable& o) const {
    return n_ == o.n_ && values_ == o.values_ && field_->same_as(*o.field_);
  }

 private:
  FieldPtr field_;
  unsigned n_ = 0;
  std::vector<Symbol> values_;
};

// Restriction of a table to a flat, together with the affine chart
// z -> shift + z * basis whose image is the flat.
struct Restriction {
  MatrixFq basis;            // k x n chart rows (canonical flat basis)
  std::vector<Elem> shift;   // length n
  FunctionTable table;       // values over F_q^k

  Point map_to_ambient(Point z) const;
};

Restriction restrict(const FunctionTable& f, const AffineFlat& flat);
Restriction restrict(const FunctionTable& f, const Subspace& s);

// Exact fractional Hamming distance; rejects erased entries.
Rat hamming_distance(const FunctionTable& f, const FunctionTable& g);

// Table file format: line 1 is "q=<int> n=<int> [modulus=<coeffs>]", then q^n
// whitespace-separated symbols in point-index order, "*" marking erasures.
// "#" starts a comment.
FunctionTable read_table(std::istream& in);
FunctionTable read_table_file(const std::string& path);
void write_table(const FunctionTable& f, std::ostream& out);
void write_table_file(const FunctionTable& f, const std::string& path);

}  // namespace rmlab::functab

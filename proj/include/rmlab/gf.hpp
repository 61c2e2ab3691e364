#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rmlab/errors.hpp"

namespace rmlab::gf {

// Field elements are small integer indices. The base-p digits of an index are
// the coefficients of the polynomial residue, constant term first. One byte
// per element keeps dense tables of length q^n affordable.
using Elem = std::uint8_t;

// Erasure mark used by oracle snapshots and table files; never a field element.
inline constexpr Elem kErased = 0xFF;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
 public:
  // q = p^ell with a built-in irreducible modulus for q in {4,8,9,16,25,27,32};
  // other non-prime q require an explicit modulus (F_p coefficients, constant
  // term first, monic of degree ell). Irreducibility is verified by trial
  // division against every monic polynomial of degree <= ell/2.
  static FieldPtr make(unsigned q);
  static FieldPtr make(unsigned q, const std::vector<unsigned>& modulus);

  // Config form: "q=<int>" with optional "modulus=<c0,c1,...>".
  static FieldPtr parse_spec(const std::string& text);

  unsigned p() const { return p_; }
  unsigned ell() const { return ell_; }
  unsigned q() const { return q_; }
  const std::vector<unsigned>& modulus() const { return modulus_; }

  Elem add(Elem a, Elem b) const { return add_[size_t(a) * q_ + b]; }
  Elem sub(Elem a, Elem b) const { return add_[size_t(a) * q_ + neg_[b]]; }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem mul(Elem a, Elem b) const { return mul_[size_t(a) * q_ + b]; }
  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("inv(0) is undefined");
    return inv_[a];
  }
  Elem pow(Elem a, std::uint64_t e) const;

  std::vector<Elem> elements() const;  // 0 .. q-1 in index order

  // Structural equality of the field specification.
  bool same_as(const Field& other) const {
    return p_ == other.p_ && ell_ == other.ell_ && modulus_ == other.modulus_;
  }

  std::string spec_string() const;

 private:
  Field(unsigned p, unsigned ell, std::vector<unsigned> modulus);
  void build_tables();

  unsigned p_ = 0, ell_ = 0, q_ = 0;
  std::vector<unsigned> modulus_;  // empty when ell == 1
  std::vector<Elem> add_, mul_, inv_, neg_;
};

// Checked value type; arithmetic across distinct field specs is a config error.
struct FieldElem {
  FieldPtr field;
  Elem index = 0;

  FieldElem() = default;
  FieldElem(FieldPtr f, Elem i) : field(std::move(f)), index(i) {}

  FieldElem operator+(const FieldElem& o) const {
    require_same(o);
    return {field, field->add(index, o.index)};
  }
  FieldElem operator*(const FieldElem& o) const {
    require_same(o);
    return {field, field->mul(index, o.index)};
  }
  FieldElem inverse() const { return {field, field->inv(index)}; }
  bool operator==(const FieldElem& o) const {
    return index == o.index && field->same_as(*o.field);
  }

 private:
  void require_same(const FieldElem& o) const {
    if (!field || !o.field || !field->same_as(*o.field))
      throw ConfigError("field elements belong to different field specs");
  }
};

bool is_prime(unsigned n);

}  // namespace rmlab::gf

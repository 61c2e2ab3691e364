#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rmlab/functab.hpp"
#include "rmlab/gf.hpp"
#include "rmlab/rational.hpp"
#include "rmlab/rng.hpp"
#include "rmlab/space.hpp"

namespace rmlab::rm {

using functab::FunctionTable;
using gf::Elem;
using gf::Field;
using gf::FieldPtr;
using space::Point;

// Testing dimension ceil((d+1)/(q - q/p)) + 1, with q - q/p as the integer
// p^ell - p^(ell-1).
unsigned testing_dimension(const Field& f, unsigned d);

// Alternate value d+1 sometimes quoted for q = 2; reported alongside the
// primary formula, never used by tester logic.
unsigned testing_dimension_alt_q2(unsigned d);

// Minimum-distance lower bound of a code family, kept exact: either a
// rational, or q^(-num/den) stored as the exponent pair. All comparisons
// cross-multiply/cross-power integers.
class Delta0 {
 public:
  static Delta0 rational(Rat r);
  static Delta0 power(unsigned q, unsigned num, unsigned den);  // q^(-num/den)

  bool is_power() const { return is_power_; }
  unsigned q() const { return q_; }
  unsigned pow_num() const { return num_; }
  unsigned pow_den() const { return den_; }
  const Rat& ratio() const { return ratio_; }

  bool rat_less(const Rat& r) const;         // r < delta0
  bool rat_at_least(const Rat& r) const;     // r >= delta0
  bool within_unique_decoding(const Rat& r) const;  // r < delta0 / 2
  double approx() const;
  std::string describe() const;

 private:
  bool is_power_ = false;
  unsigned q_ = 0, num_ = 0, den_ = 1;
  Rat ratio_;  // used when !is_power_
};

// Number of monomials with per-variable degree <= q-1 and total degree <= d.
std::uint64_t rm_dim(unsigned k, unsigned q, unsigned d);

// Exponent vectors of those monomials in graded-lex order (total degree
// first, then lexicographic with coordinate 0 most significant).
std::vector<std::vector<Elem>> monomial_exponents(unsigned k, unsigned q, unsigned d);

// Dense tensor of reduced-polynomial coefficients, indexed exactly like
// points (exponent vector packed little-endian base q).
struct CoefficientTensor {
  FieldPtr field;
  unsigned n = 0;
  std::vector<Elem> coeffs;
};

// Unique reduced polynomial agreeing with f everywhere, via per-axis inverse
// Vandermonde passes.
CoefficientTensor interpolate_reduced(const FunctionTable& f);
FunctionTable evaluate_tensor(const CoefficientTensor& c);
std::vector<std::pair<Point, Elem>> nonzero_coefficients(const CoefficientTensor& c);

// Total degree of the reduced polynomial; the zero function reports -1 so
// that "deg <= d" holds for every d >= 0.
int degree(const FunctionTable& f);
bool rm_membership(const FunctionTable& f, unsigned d);

FunctionTable random_rm_codeword(const FieldPtr& field, unsigned n, unsigned d,
                                 RandomStream& rng);

struct RmParams {
  unsigned t_qd = 0;     // primary testing dimension
  unsigned t_alt = 0;    // alternate q=2 value, report-only
  Delta0 delta0;
  std::uint64_t s_k = 0;  // ceil(100 ln|RM[k,q,d]| / delta0) + 1
};
RmParams rm_parameters(const FieldPtr& field, unsigned d, unsigned k);

// Lifted code with an extensional base: explicit tables on F_q^t, closed
// under every affine self-map of F_q^t (verified exhaustively at load).
class LiftedCode {
 public:
  LiftedCode(FieldPtr field, unsigned t, unsigned lift_n, std::vector<FunctionTable> base,
             std::optional<Rat> declared_delta0 = std::nullopt);

  // Base = all tables of degree-<=d polynomials on F_q^t.
  static std::shared_ptr<const LiftedCode> rm_base(const FieldPtr& field, unsigned t, unsigned d,
                                                   unsigned lift_n);
  // Directory layout: manifest file "manifest" with "t=<int> q=<int>
  // count=<int>" plus table files base_<i>.tbl.
  static std::shared_ptr<const LiftedCode> load(const std::string& dir, unsigned lift_n);

  const FieldPtr& field() const { return field_; }
  unsigned t() const { return t_; }
  unsigned lift_n() const { return n_; }
  const std::vector<FunctionTable>& base() const { return base_; }
  bool base_contains(const FunctionTable& g) const;
  bool base_linear() const { return base_linear_; }
  Rat delta0() const { return delta0_; }

  // Membership: every affine t-flat restriction lies in the base.
  bool member(const FunctionTable& f) const;

  // Basis of the dimension-k lift (linear bases only), cached per k.
  const std::vector<FunctionTable>& lift_basis(unsigned k) const;

 private:
  FieldPtr field_;
  unsigned t_ = 0, n_ = 0;
  std::vector<FunctionTable> base_;
  std::map<std::vector<Elem>, std::size_t> base_index_;
  bool base_linear_ = false;
  Rat delta0_;
  mutable std::mutex cache_mutex_;
  mutable std::map<unsigned, std::vector<FunctionTable>> basis_cache_;
};

// Applies fn to every linear combination of the basis tables, maintained
// incrementally by a base-q odometer over coefficient indices.
void for_each_linear_combination(const std::vector<FunctionTable>& basis,
                                 const std::function<void(const FunctionTable&)>& fn);

// Family descriptor: per-dimension membership, enumerability, distance bound,
// query budgets. Instantiated for Reed-Muller and lifted codes; arbitrary
// membership callbacks are accepted for pluggable families, whose soundness
// constants are reported as unchecked metadata.
class CodeFamily {
 public:
  virtual ~CodeFamily() = default;
  virtual std::string name() const = 0;
  virtual const FieldPtr& field() const = 0;
  virtual unsigned base_dim() const = 0;  // t
  virtual Delta0 delta0() const = 0;
  virtual bool member(const FunctionTable& f) const = 0;
  virtual bool linear() const = 0;

  // Linear families expose a local basis at every dimension k >= base_dim.
  virtual std::uint64_t dim_at(unsigned k) const;
  virtual void basis_row(unsigned k, Point z, Elem* out) const;

  virtual Int count_at(unsigned k) const;
  bool enumerable_at(unsigned k, std::uint64_t cap) const;
  virtual void for_each_codeword(unsigned k,
                                 const std::function<void(const FunctionTable&)>& fn) const;
  virtual FunctionTable random_codeword(unsigned n, RandomStream& rng) const;

  // ceil(100 ln|C_k| / delta0) + 1
  virtual std::uint64_t query_budget(unsigned k) const;
};

std::shared_ptr<const CodeFamily> make_rm_family(const FieldPtr& field, unsigned d);
std::shared_ptr<const CodeFamily> make_lifted_family(std::shared_ptr<const LiftedCode> code);
std::shared_ptr<const CodeFamily> make_generic_family(
    FieldPtr field, std::string name, unsigned base_dim, Delta0 delta0,
    std::function<bool(const FunctionTable&)> membership);

// Exhaustive minimum distance to the family at f's dimension. Refuses when
// |C_n| exceeds the cap; plant-certified instances cover that regime.
Rat exact_distance(const FunctionTable& f, const CodeFamily& family,
                   std::uint64_t cap = 1ull << 22);

// Codeword plus noise of exact support size within the unique-decoding
// radius, so the distance certificate is exact.
struct PlantedInstance {
  FunctionTable codeword;
  std::vector<Point> support;
  FunctionTable f;
  Rat certified_distance;
};
PlantedInstance plant(const CodeFamily& family, unsigned n, std::uint64_t noise_weight,
                      RandomStream& rng);

}  // namespace rmlab::rm

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rmlab/functab.hpp"
#include "rmlab/rm.hpp"
#include "rmlab/rng.hpp"

namespace rmlab::testers {

using functab::FunctionTable;
using functab::Symbol;
using gf::Elem;
using rm::CodeFamily;
using space::Point;

enum class Decision { kAccept, kReject };
enum class Reason { kConsistent, kNoCodewordFits, kErasureSeen };

struct Verdict {
  Decision decision = Decision::kAccept;
  Reason reason = Reason::kConsistent;
  // one fitted local solution (coefficients over the family's basis) when the
  // constraint system is consistent
  std::optional<std::vector<Elem>> witness;
};

const char* to_string(Decision d);
const char* to_string(Reason r);

// Ambient points in the order the oracle was asked.
struct QueryPlan {
  std::vector<Point> points;
};

enum class TesterKind { kSample, kSemiSample, kBlr, kFlat };

TesterKind tester_kind_from_string(const std::string& s);
const char* to_string(TesterKind k);

struct TesterSpec {
  TesterKind kind = TesterKind::kSemiSample;
  std::shared_ptr<const CodeFamily> code;
  unsigned n = 0;            // ambient dimension
  unsigned k = 0;            // subspace dimension (semi-sample / flat)
  std::uint64_t queries = 0; // per round; 0 = family budget at k
  unsigned repetitions = 1;
  std::uint64_t seed = 0;

  std::uint64_t queries_per_round() const;
  void validate() const;
};

// Oracle abstraction; the offline table and the adversarial session both
// implement it.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual Symbol query(Point x) = 0;
};

class TableOracle final : public Oracle {
 public:
  explicit TableOracle(const FunctionTable& f) : f_(&f) {}
  Symbol query(Point x) override { return (*f_)[x]; }

 private:
  const FunctionTable* f_;
};

// What to do when the oracle answers with the erasure mark: offline testers
// treat it as a precondition violation, the online wrapper halts and accepts.
enum class ErasurePolicy { kForbid, kAcceptHalt };

struct RunResult {
  Verdict verdict;
  QueryPlan plan;
};

// Accept iff some member of the family at dimension k agrees with the
// assignment. Linear families solve the augmented system by elimination;
// extensional families scan their enumerator.
struct ConsistencyResult {
  bool consistent = false;
  std::optional<std::vector<Elem>> witness;
};
ConsistencyResult consistency_check(const CodeFamily& family, unsigned k,
                                    const std::vector<std::pair<Point, Elem>>& assignment,
                                    std::uint64_t enum_cap = 1ull << 22);

// Draw s uniform points of F_q^n with replacement; accept iff some codeword
// explains the answers. Duplicate points collapse to one constraint.
RunResult sample_based_test(Oracle& oracle, const CodeFamily& family, unsigned n,
                            std::uint64_t s, RandomStream& rng,
                            ErasurePolicy policy = ErasurePolicy::kForbid);

// Choose a uniform k-dimensional subspace, then run the sample-based test
// inside it (queries mapped through the subspace chart).
RunResult semi_sample_test(Oracle& oracle, const CodeFamily& family, unsigned n, unsigned k,
                           std::uint64_t queries, RandomStream& rng,
                           ErasurePolicy policy = ErasurePolicy::kForbid);

// Restrict to a uniform k-subspace and decide by full membership of the
// restriction (queries the whole subspace).
RunResult flat_test(Oracle& oracle, const CodeFamily& family, unsigned n, unsigned k,
                    RandomStream& rng, ErasurePolicy policy = ErasurePolicy::kForbid);

// One linearity round over F_2: checks f(x) + f(y) = f(x+y).
RunResult blr_test(Oracle& oracle, const gf::FieldPtr& field, unsigned n, RandomStream& rng,
                   ErasurePolicy policy = ErasurePolicy::kForbid);

// ceil(4 (1/(Q eps) + 1)) independent rounds, exact in rationals.
unsigned repetition_count(std::uint64_t queries_per_round, const Rat& eps);

// Runs spec.repetitions rounds of the base tester; rejects iff any round
// rejects. Under kAcceptHalt the whole run stops at the first erased answer.
RunResult run_tester(Oracle& oracle, const TesterSpec& spec, RandomStream& rng,
                     ErasurePolicy policy = ErasurePolicy::kForbid);

// Convenience wrapper matching the repeated-tester contract: sizes the
// round count from eps, then runs.
RunResult repeated_tester(Oracle& oracle, const TesterSpec& spec, const Rat& eps,
                          RandomStream& rng, ErasurePolicy policy = ErasurePolicy::kForbid);

}  // namespace rmlab::testers

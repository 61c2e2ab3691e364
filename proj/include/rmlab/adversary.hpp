#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "rmlab/functab.hpp"
#include "rmlab/rational.hpp"
#include "rmlab/rng.hpp"
#include "rmlab/testers.hpp"

namespace rmlab::adversary {

using functab::FunctionTable;
using functab::Symbol;
using gf::Elem;
using space::Point;

enum class Mode { kErasure, kCorruption };
enum class Accounting { kFixedRate, kBudget };

Mode mode_from_string(const std::string& s);
Accounting accounting_from_string(const std::string& s);
const char* to_string(Mode m);
const char* to_string(Accounting a);

struct SessionConfig {
  Mode mode = Mode::kErasure;
  Accounting accounting = Accounting::kFixedRate;
  Rat rate = 0;  // t; rational rates are meaningful under the floor accounting
};

// One manipulation: point plus replacement value (the erasure mark in
// erasure mode). Each move must change the current oracle.
struct Move {
  Point point = 0;
  Symbol value = gf::kErased;
};

// What a strategy is allowed to see: queries and answers so far, the
// manipulation state, and its own randomness. Never the tester's internals.
struct StrategyView {
  const gf::FieldPtr& field;
  unsigned n;
  Mode mode;
  const std::vector<std::pair<Point, Symbol>>& trace;          // query order
  const std::vector<Point>& distinct_queries;                  // first-seen order
  const std::set<Point>& queried;
  const std::set<Point>& manipulated;
  const FunctionTable& truth;
  RandomStream& rng;
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::string name() const = 0;
  // Propose at most `allowance` moves for the step after the latest answer.
  virtual void propose(const StrategyView& view, std::uint64_t allowance,
                       std::vector<Move>& out) = 0;
  virtual void reset() {}
};

// Built-in strategies: none, random_eraser, sum_eraser, span_inference_eraser,
// random_corruptor.
std::unique_ptr<Strategy> make_strategy(const std::string& name);
std::vector<std::string> builtin_strategy_names();
std::vector<std::string> builtin_erasure_strategy_names();

// The online oracle protocol: oracle i answers query i; after each answer the
// adversary may manipulate within its allowance. Repeat queries return the
// first answer. Session invariants are asserted after every move.
class OracleSession final : public testers::Oracle {
 public:
  OracleSession(FunctionTable truth, SessionConfig config, std::shared_ptr<Strategy> strategy,
                RandomStream adversary_rng);

  Symbol query(Point x) override;

  std::uint64_t answered() const { return answered_; }
  const FunctionTable& truth() const { return truth_; }
  const FunctionTable& current() const { return current_; }
  const std::vector<std::pair<Point, Symbol>>& trace() const { return trace_; }
  // (answered-so-far, point, value) triples in application order
  const std::vector<std::tuple<std::uint64_t, Point, Symbol>>& manipulation_log() const {
    return manipulations_;
  }
  std::uint64_t dist_from_truth() const { return dist_from_truth_; }
  bool saw_erased_answer() const { return saw_erased_answer_; }

  // Allowance for the step after answer i (fixed-rate: floor((i+1)t) -
  // floor(it); budget: floor(it) - spent).
  Int allowance_after(std::uint64_t i) const;

 private:
  void adversary_step();
  void apply_move(const Move& m);

  FunctionTable truth_;
  FunctionTable current_;
  SessionConfig config_;
  std::shared_ptr<Strategy> strategy_;
  RandomStream adv_rng_;
  std::uint64_t answered_ = 0;
  std::vector<std::pair<Point, Symbol>> trace_;
  std::vector<Point> distinct_queries_;
  std::set<Point> queried_;
  std::set<Point> manipulated_;
  std::unordered_map<Point, Symbol> memo_;
  std::vector<std::tuple<std::uint64_t, Point, Symbol>> manipulations_;
  std::uint64_t dist_from_truth_ = 0;
  bool saw_erased_answer_ = false;
};

struct GameRecord {
  testers::TesterSpec spec;
  std::string strategy;
  SessionConfig session;
  std::uint64_t seed = 0;
  testers::Verdict verdict;
  bool forfeit = false;  // the strategy broke protocol; game scored against it
  std::string forfeit_reason;
  std::vector<std::pair<Point, Symbol>> trace;
  std::vector<std::tuple<std::uint64_t, Point, Symbol>> manipulations;
  bool erasure_hit = false;

  std::string to_json_line() const;
};

// Fresh session on f; the tester runs through it with the accept-on-erasure
// wrapper; protocol violations are recorded as adversary forfeits.
GameRecord run_game(const FunctionTable& f, const testers::TesterSpec& spec,
                    const std::string& strategy_name, const SessionConfig& session,
                    std::uint64_t seed);

struct HitRateReport {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  std::uint64_t q_total = 0;  // queries issued per game
  Rat bound;                  // t * Q_total^2 / q^k
  bool vacuous = false;       // bound >= 1
};

// Fraction of games in which any query returned the erasure mark, against the
// union bound t * Q_total^2 / q^k. Games run on fresh random codewords.
HitRateReport erasure_hit_rate(const testers::TesterSpec& spec, const std::string& strategy_name,
                               const SessionConfig& session, std::uint64_t trials,
                               std::uint64_t seed);

}  // namespace rmlab::adversary

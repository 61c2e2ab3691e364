#include "rmlab/adversary.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <json.hpp>

#include "rmlab/parallel.hpp"
#include "rmlab/rm.hpp"

namespace rmlab::adversary {

using json = nlohmann::json;

Mode mode_from_string(const std::string& s) {
  if (s == "erasure") return Mode::kErasure;
  if (s == "corruption") return Mode::kCorruption;
  throw ConfigError("unknown adversary mode: " + s);
}

Accounting accounting_from_string(const std::string& s) {
  if (s == "fixed_rate" || s == "fixed-rate") return Accounting::kFixedRate;
  if (s == "budget") return Accounting::kBudget;
  throw ConfigError("unknown accounting mode: " + s);
}

const char* to_string(Mode m) { return m == Mode::kErasure ? "erasure" : "corruption"; }
const char* to_string(Accounting a) {
  return a == Accounting::kFixedRate ? "fixed_rate" : "budget";
}

// ---------------------------------------------------------------------------
// Built-in strategies

namespace {

class NoneStrategy final : public Strategy {
 public:
  std::string name() const override { return "none"; }
  void propose(const StrategyView&, std::uint64_t, std::vector<Move>&) override {}
};

class RandomEraser final : public Strategy {
 public:
  std::string name() const override { return "random_eraser"; }

  void propose(const StrategyView& view, std::uint64_t allowance,
               std::vector<Move>& out) override {
    const std::uint64_t total = view.truth.size();
    std::set<Point> taken;  // avoid proposing the same point twice in a batch
    for (std::uint64_t m = 0; m < allowance; ++m) {
      bool found = false;
      for (int attempt = 0; attempt < 64 && !found; ++attempt) {
        const Point x = view.rng.below(total);
        if (view.queried.count(x) || view.manipulated.count(x) || taken.count(x)) continue;
        out.push_back({x, gf::kErased});
        taken.insert(x);
        found = true;
      }
      if (!found) {
        // dense regime: linear scan from a random start
        const Point start = view.rng.below(total);
        for (std::uint64_t i = 0; i < total; ++i) {
          const Point x = (start + i) % total;
          if (view.queried.count(x) || view.manipulated.count(x) || taken.count(x)) continue;
          out.push_back({x, gf::kErased});
          taken.insert(x);
          found = true;
          break;
        }
      }
      if (!found) return;  // everything queried or erased already
    }
  }
};

// Erases combinations a*x_i + b*x_j (a, b nonzero) of observed query points,
// most recent pairs first, with a deterministic combo order inside each pair.
class SumEraser final : public Strategy {
 public:
  std::string name() const override { return "sum_eraser"; }
  void reset() override {
    pending_.clear();
    seen_points_ = 0;
  }

  void propose(const StrategyView& view, std::uint64_t allowance,
               std::vector<Move>& out) override {
    const gf::Field& f = *view.field;
    const unsigned q = f.q();
    const auto& pts = view.distinct_queries;
    // new distinct points spawn pairs, newest pair first
    while (seen_points_ < pts.size()) {
      const std::size_t j = seen_points_++;
      for (std::size_t i = j; i-- > 0;) pending_.push_back({j, i, 0});
      // rotate the fresh block to the front, preserving its order
      std::rotate(pending_.begin(), pending_.end() - static_cast<std::ptrdiff_t>(j),
                  pending_.end());
    }
    std::set<Point> taken;
    std::uint64_t used = 0;
    while (used < allowance && !pending_.empty()) {
      PairState& ps = pending_.front();
      const std::uint64_t combos = static_cast<std::uint64_t>(q - 1) * (q - 1);
      bool emitted = false;
      while (ps.combo < combos) {
        const Elem a = static_cast<Elem>(1 + ps.combo / (q - 1));
        const Elem b = static_cast<Elem>(1 + ps.combo % (q - 1));
        ++ps.combo;
        const Point target = combine(f, view.n, pts[ps.j], pts[ps.i], a, b);
        if (view.queried.count(target) || view.manipulated.count(target) ||
            taken.count(target))
          continue;
        out.push_back({target, gf::kErased});
        taken.insert(target);
        ++used;
        emitted = true;
        break;
      }
      if (ps.combo >= combos) pending_.pop_front();
      if (!emitted) continue;
    }
  }

 private:
  struct PairState {
    std::size_t j, i;       // pts[j] newer than pts[i]
    std::uint64_t combo;    // next (a,b) index
  };

  static Point combine(const gf::Field& f, unsigned n, Point pj, Point pi, Elem a, Elem b) {
    const unsigned q = f.q();
    const std::vector<Elem> vj = space::point_to_vec(q, n, pj);
    const std::vector<Elem> vi = space::point_to_vec(q, n, pi);
    std::vector<Elem> v(n);
    for (unsigned c = 0; c < n; ++c) v[c] = f.add(f.mul(a, vj[c]), f.mul(b, vi[c]));
    return space::vec_to_point(q, v);
  }

  std::deque<PairState> pending_;
  std::size_t seen_points_ = 0;
};

// Erases unqueried points inside the linear span of the observed queries, in
// span-enumeration order over the current basis.
class SpanInferenceEraser final : public Strategy {
 public:
  std::string name() const override { return "span_inference_eraser"; }
  void reset() override {
    rows_.clear();
    pivots_.clear();
    seen_points_ = 0;
    cursor_ = 0;
  }

  void propose(const StrategyView& view, std::uint64_t allowance,
               std::vector<Move>& out) override {
    const gf::Field& f = *view.field;
    const unsigned q = f.q();
    const unsigned n = view.n;
    const auto& pts = view.distinct_queries;
    while (seen_points_ < pts.size()) {
      std::vector<Elem> v = space::point_to_vec(q, n, pts[seen_points_++]);
      // eliminate against current rows
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        const Elem c = v[pivots_[r]];
        if (c == 0) continue;
        for (unsigned j = 0; j < n; ++j) v[j] = f.sub(v[j], f.mul(c, rows_[r][j]));
      }
      unsigned piv = n;
      for (unsigned j = 0; j < n; ++j)
        if (v[j] != 0) {
          piv = j;
          break;
        }
      if (piv == n) continue;  // already in the span
      const Elem inv = f.inv(v[piv]);
      for (unsigned j = 0; j < n; ++j) v[j] = f.mul(inv, v[j]);
      rows_.push_back(std::move(v));
      pivots_.push_back(piv);
      cursor_ = 0;  // span grew; restart the sweep
    }
    if (rows_.empty()) return;
    const unsigned rank = static_cast<unsigned>(rows_.size());
    if (rank > 60) return;
    const std::uint64_t span = space::domain_size(q, rank);
    std::set<Point> taken;
    std::uint64_t used = 0;
    while (used < allowance && cursor_ < span) {
      const Point z = cursor_++;
      std::vector<Elem> x(n, 0);
      Point rest = z;
      for (unsigned r = 0; r < rank; ++r) {
        const Elem digit = static_cast<Elem>(rest % q);
        rest /= q;
        if (digit == 0) continue;
        for (unsigned j = 0; j < n; ++j) x[j] = f.add(x[j], f.mul(digit, rows_[r][j]));
      }
      const Point target = space::vec_to_point(q, x);
      if (view.queried.count(target) || view.manipulated.count(target) || taken.count(target))
        continue;
      out.push_back({target, gf::kErased});
      taken.insert(target);
      ++used;
    }
  }

 private:
  std::vector<std::vector<Elem>> rows_;
  std::vector<unsigned> pivots_;
  std::size_t seen_points_ = 0;
  std::uint64_t cursor_ = 0;
};

class RandomCorruptor final : public Strategy {
 public:
  std::string name() const override { return "random_corruptor"; }

  void propose(const StrategyView& view, std::uint64_t allowance,
               std::vector<Move>& out) override {
    if (view.mode != Mode::kCorruption)
      throw ProtocolViolation("random_corruptor requires corruption mode");
    const gf::Field& f = *view.field;
    const unsigned q = f.q();
    const std::uint64_t total = view.truth.size();
    std::set<Point> taken;
    for (std::uint64_t m = 0; m < allowance; ++m) {
      bool found = false;
      for (int attempt = 0; attempt < 64 && !found; ++attempt) {
        const Point x = view.rng.below(total);
        if (view.manipulated.count(x) || taken.count(x)) continue;
        if (view.truth[x] == gf::kErased) continue;
        const Elem offset = static_cast<Elem>(1 + view.rng.below(q - 1));
        out.push_back({x, f.add(view.truth[x], offset)});
        taken.insert(x);
        found = true;
      }
      if (!found) return;
    }
  }
};

}  // namespace

std::unique_ptr<Strategy> make_strategy(const std::string& name) {
  if (name == "none" || name == "none_adv") return std::make_unique<NoneStrategy>();
  if (name == "random_eraser") return std::make_unique<RandomEraser>();
  if (name == "sum_eraser") return std::make_unique<SumEraser>();
  if (name == "span_inference_eraser") return std::make_unique<SpanInferenceEraser>();
  if (name == "random_corruptor") return std::make_unique<RandomCorruptor>();
  throw ConfigError("unknown adversary strategy: " + name);
}

std::vector<std::string> builtin_strategy_names() {
  return {"none", "random_eraser", "sum_eraser", "span_inference_eraser", "random_corruptor"};
}

std::vector<std::string> builtin_erasure_strategy_names() {
  return {"none", "random_eraser", "sum_eraser", "span_inference_eraser"};
}

// ---------------------------------------------------------------------------
// OracleSession

OracleSession::OracleSession(FunctionTable truth, SessionConfig config,
                             std::shared_ptr<Strategy> strategy, RandomStream adversary_rng)
    : truth_(std::move(truth)), current_(truth_), config_(std::move(config)),
      strategy_(std::move(strategy)), adv_rng_(adversary_rng) {
  if (config_.rate < 0) throw ConfigError("adversary rate must be nonnegative");
  if (strategy_) strategy_->reset();
}

Int OracleSession::allowance_after(std::uint64_t i) const {
  const Rat t = config_.rate;
  if (config_.accounting == Accounting::kFixedRate)
    return rat_floor(Rat(Int(i + 1)) * t) - rat_floor(Rat(Int(i)) * t);
  // budget-managing: Dist(O_1, O_{i+1}) <= i*t at all times
  const Int cap = rat_floor(Rat(Int(i)) * t);
  const Int spent = Int(dist_from_truth_);
  return cap > spent ? cap - spent : Int(0);
}

Symbol OracleSession::query(Point x) {
  Symbol answer;
  const auto memo_it = memo_.find(x);
  if (memo_it != memo_.end()) {
    answer = memo_it->second;  // a repeat query repeats its first answer
  } else {
    answer = current_[x];
    memo_.emplace(x, answer);
    queried_.insert(x);
    distinct_queries_.push_back(x);
  }
  if (answer == gf::kErased) saw_erased_answer_ = true;
  trace_.emplace_back(x, answer);
  ++answered_;
  adversary_step();
  return answer;
}

void OracleSession::adversary_step() {
  if (!strategy_) return;
  const Int allowance = allowance_after(answered_);
  if (allowance <= 0) return;
  const std::uint64_t allow = allowance.convert_to<std::uint64_t>();
  std::vector<Move> moves;
  StrategyView view{truth_.field(), truth_.n(),    config_.mode, trace_, distinct_queries_,
                    queried_,       manipulated_, truth_,       adv_rng_};
  strategy_->propose(view, allow, moves);
  if (moves.size() > allow)
    throw ProtocolViolation(strategy_->name() + " overspent its allowance (" +
                            std::to_string(moves.size()) + " > " + std::to_string(allow) + ")");
  for (const Move& m : moves) apply_move(m);
  if (config_.accounting == Accounting::kBudget) {
    const Int cap = rat_floor(Rat(Int(answered_)) * config_.rate);
    if (Int(dist_from_truth_) > cap)
      throw ProtocolViolation("budget exceeded: Dist(O_1, O_{i+1}) > floor(i*t)");
  }
}

void OracleSession::apply_move(const Move& m) {
  if (m.point >= current_.size()) throw ProtocolViolation("manipulation outside the domain");
  const Symbol old = current_[m.point];
  if (config_.mode == Mode::kErasure) {
    if (m.value != gf::kErased)
      throw ProtocolViolation("erasure adversary may only write the erasure mark");
    if (old == gf::kErased)
      throw ProtocolViolation("re-erasing an erased point does not change the oracle");
  } else {
    if (m.value == gf::kErased)
      throw ProtocolViolation("corruption adversary must write field values");
    if (m.value >= truth_.field()->q()) throw ProtocolViolation("corruption value out of range");
    if (m.value == old) throw ProtocolViolation("corruption must change the oracle");
  }
  const bool was_diff = old != truth_[m.point];
  const bool now_diff = m.value != truth_[m.point];
  current_.set(m.point, m.value);
  if (!was_diff && now_diff) ++dist_from_truth_;
  if (was_diff && !now_diff) --dist_from_truth_;
  manipulated_.insert(m.point);
  manipulations_.emplace_back(answered_, m.point, m.value);
}

// ---------------------------------------------------------------------------
// Games

std::string GameRecord::to_json_line() const {
  json j;
  j["tester"] = {{"kind", testers::to_string(spec.kind)},
                 {"n", spec.n},
                 {"k", spec.k},
                 {"Q", spec.queries_per_round()},
                 {"reps", spec.repetitions}};
  if (spec.code) j["tester"]["code"] = spec.code->name();
  j["adversary"] = strategy;
  j["mode"] = to_string(session.mode);
  j["accounting"] = to_string(session.accounting);
  j["t"] = rat_string(session.rate);
  j["seed"] = seed;
  j["forfeit"] = forfeit;
  if (forfeit) j["forfeit_reason"] = forfeit_reason;
  j["verdict"] = {{"decision", testers::to_string(verdict.decision)},
                  {"reason", testers::to_string(verdict.reason)}};
  j["erasure_hit"] = erasure_hit;
  json tr = json::array();
  for (const auto& [pt, val] : trace)
    tr.push_back({pt, val == gf::kErased ? -1 : static_cast<int>(val)});
  j["trace"] = std::move(tr);
  json ml = json::array();
  for (const auto& [after, pt, val] : manipulations)
    ml.push_back({after, pt, val == gf::kErased ? -1 : static_cast<int>(val)});
  j["manipulations"] = std::move(ml);
  return j.dump();
}

GameRecord run_game(const FunctionTable& f, const testers::TesterSpec& spec,
                    const std::string& strategy_name, const SessionConfig& session_config,
                    std::uint64_t seed) {
  RandomStream root(seed);
  RandomStream tester_rng = root.child(1);
  RandomStream adv_rng = root.child(2);

  std::shared_ptr<Strategy> strategy = make_strategy(strategy_name);
  OracleSession session(f, session_config, strategy, adv_rng);

  GameRecord rec;
  rec.spec = spec;
  rec.strategy = strategy_name;
  rec.session = session_config;
  rec.seed = seed;
  try {
    const testers::RunResult run =
        testers::run_tester(session, spec, tester_rng, testers::ErasurePolicy::kAcceptHalt);
    rec.verdict = run.verdict;
  } catch (const ProtocolViolation& e) {
    rec.forfeit = true;
    rec.forfeit_reason = e.what();
    rec.verdict = {testers::Decision::kReject, testers::Reason::kNoCodewordFits, std::nullopt};
  }
  rec.trace = session.trace();
  rec.manipulations = session.manipulation_log();
  rec.erasure_hit = session.saw_erased_answer();
  return rec;
}

HitRateReport erasure_hit_rate(const testers::TesterSpec& spec, const std::string& strategy_name,
                               const SessionConfig& session_config, std::uint64_t trials,
                               std::uint64_t seed) {
  if (session_config.mode != Mode::kErasure)
    throw ConfigError("erasure_hit_rate requires erasure mode");
  spec.validate();
  HitRateReport rep;
  rep.trials = trials;
  rep.q_total = spec.queries_per_round() * spec.repetitions;
  const unsigned q = spec.code->field()->q();
  const unsigned dim = spec.kind == testers::TesterKind::kSample ? spec.n : spec.k;
  rep.bound = session_config.rate * Rat(Int(rep.q_total) * Int(rep.q_total)) /
              Rat(ipow(Int(q), dim));
  rep.vacuous = rep.bound >= 1;

  RandomStream root(seed);
  // One codeword serves every game: the built-in strategies act on query
  // locations only, and truthful codeword answers never shorten a run, so
  // this is the maximal-exposure input for the hit event.
  RandomStream gen = root.child(0xf00d);
  const FunctionTable f = spec.code->random_codeword(spec.n, gen);
  std::vector<std::uint8_t> hit(trials, 0);
  parallel_for(trials, [&](std::size_t i) {
    RandomStream trial_rng = root.child(i);
    const GameRecord rec =
        run_game(f, spec, strategy_name, session_config, trial_rng.next_u64());
    hit[i] = rec.erasure_hit ? 1 : 0;
  });
  rep.hits = 0;
  for (auto h : hit) rep.hits += h;
  return rep;
}

}  // namespace rmlab::adversary

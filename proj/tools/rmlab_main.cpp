// rmlab: batch experiment driver for the finite-field property-testing lab.
// Subcommands: test, sweep, game, arena, agreement, bounds.
// Exit codes: 0 success, 1 usage/config, 2 parse, 3 protocol violation,
// 4 lemma-check failure.

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmlab/adversary.hpp"
#include "rmlab/agreement.hpp"
#include "rmlab/bounds.hpp"
#include "rmlab/errors.hpp"
#include "rmlab/parallel.hpp"
#include "rmlab/stats.hpp"
#include "rmlab/testers.hpp"

#ifndef RMLAB_VERSION
#define RMLAB_VERSION "v0.0.0-unknown"
#endif

namespace {

using json = nlohmann::json;
using namespace rmlab;

// key=value config files: applied after parsing for every option the command
// line did not set, so flags win
std::map<std::string, std::function<void(const std::string&)>>& bindings(const CLI::App* cmd) {
  static std::map<const CLI::App*, std::map<std::string, std::function<void(const std::string&)>>>
      b;
  return b[cmd];
}

template <typename T>
void set_from_string(T& var, const std::string& v) {
  if constexpr (std::is_same_v<T, std::string>)
    var = v;
  else if constexpr (std::is_same_v<T, double>)
    var = std::stod(v);
  else
    var = static_cast<T>(std::stoull(v));
}

template <typename T>
CLI::Option* bind_opt(CLI::App* cmd, const std::string& name, T& var, const std::string& desc) {
  bindings(cmd)[name.substr(2)] = [&var](const std::string& v) { set_from_string(var, v); };
  return cmd->add_option(name, var, desc);
}

void apply_config_file(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw rmlab::ConfigError("cannot open config file " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw rmlab::ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    auto& binds = bindings(cmd);
    const auto it = binds.find(key);
    if (it == binds.end())
      throw rmlab::ConfigError("config line " + std::to_string(lineno) + ": unknown key " + key);
    const CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt && opt->count() > 0) continue;  // the flag wins
    it->second(val);
  }
}

struct CommonOpts {
  unsigned q = 2;
  std::string modulus;  // comma-separated coefficients, constant first
  unsigned n = 0;
  unsigned d = 1;
  std::string lifted_base;  // directory; overrides the degree family
  std::string kind = "semi_sample";
  unsigned k = 0;
  std::uint64_t queries = 0;
  unsigned reps = 1;
  std::uint64_t seed = 1;
  std::string adversary = "none";
  std::string mode = "erasure";
  std::string accounting = "fixed_rate";
  std::string rate = "0";  // t, as integer or num/den
  std::string output;
  double sigma = 3.0;
};

Rat parse_rat(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(Int(s));
  return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

gf::FieldPtr make_field(const CommonOpts& o) {
  std::string spec = "q=" + std::to_string(o.q);
  if (!o.modulus.empty()) spec += " modulus=" + o.modulus;
  return gf::Field::parse_spec(spec);
}

std::shared_ptr<const rm::CodeFamily> make_family(const CommonOpts& o, unsigned ambient_n) {
  if (!o.lifted_base.empty())
    return rm::make_lifted_family(rm::LiftedCode::load(o.lifted_base, ambient_n));
  return rm::make_rm_family(make_field(o), o.d);
}

testers::TesterSpec make_spec(const CommonOpts& o, unsigned ambient_n) {
  testers::TesterSpec spec;
  spec.kind = testers::tester_kind_from_string(o.kind);
  spec.code = make_family(o, ambient_n);
  spec.n = ambient_n;
  spec.k = o.k;
  spec.queries = o.queries;
  spec.repetitions = o.reps;
  spec.seed = o.seed;
  return spec;
}

adversary::SessionConfig make_session(const CommonOpts& o) {
  adversary::SessionConfig s;
  s.mode = adversary::mode_from_string(o.mode);
  s.accounting = adversary::accounting_from_string(o.accounting);
  s.rate = parse_rat(o.rate);
  return s;
}

json config_echo(const CommonOpts& o) {
  json j;
  j["q"] = o.q;
  if (!o.modulus.empty()) j["modulus"] = o.modulus;
  j["n"] = o.n;
  j["d"] = o.d;
  if (!o.lifted_base.empty()) j["lifted_base"] = o.lifted_base;
  j["kind"] = o.kind;
  j["k"] = o.k;
  j["Q"] = o.queries;
  j["reps"] = o.reps;
  j["seed"] = o.seed;
  j["adversary"] = o.adversary;
  j["mode"] = o.mode;
  j["accounting"] = o.accounting;
  j["t"] = o.rate;
  return j;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + path);
  out << text;
}

void add_common(CLI::App* cmd, CommonOpts& o, std::string& config_path, bool with_adversary) {
  bind_opt(cmd, "--q", o.q, "field size q = p^ell");
  bind_opt(cmd, "--modulus", o.modulus, "modulus coefficients, constant term first");
  bind_opt(cmd, "--n", o.n, "ambient dimension");
  bind_opt(cmd, "--d", o.d, "degree bound of the Reed-Muller family");
  bind_opt(cmd, "--lifted-base", o.lifted_base, "directory with a lifted-code base");
  bind_opt(cmd, "--kind", o.kind, "tester kind: sample|semi_sample|blr|flat");
  bind_opt(cmd, "--k", o.k, "subspace dimension for semi-sample/flat testers");
  bind_opt(cmd, "--Q", o.queries, "queries per round (0 = family budget)");
  bind_opt(cmd, "--reps", o.reps, "tester repetitions");
  bind_opt(cmd, "--seed", o.seed, "root seed");
  bind_opt(cmd, "--output", o.output, "output file (default stdout)")->group("Output");
  cmd->add_option("-o", o.output, "output file (short form)");
  bind_opt(cmd, "--sigma", o.sigma, "sigma-equivalent level for statistical pass/fail");
  if (with_adversary) {
    bind_opt(cmd, "--adversary", o.adversary, "strategy name (none for offline)");
    bind_opt(cmd, "--mode", o.mode, "erasure|corruption");
    bind_opt(cmd, "--accounting", o.accounting, "fixed_rate|budget");
    bind_opt(cmd, "--t", o.rate, "manipulation rate t (integer or num/den)");
  }
  cmd->add_option("--config", config_path, "key=value config file (flags win)");
}

int cmd_test(const CommonOpts& o, const std::string& input) {
  functab::FunctionTable f = functab::read_table_file(input);
  CommonOpts opts = o;
  opts.n = f.n();
  if (opts.k == 0) opts.k = opts.n;
  const testers::TesterSpec spec = make_spec(opts, f.n());
  json rec;
  rec["version"] = RMLAB_VERSION;
  rec["config"] = config_echo(opts);
  rec["input"] = input;
  if (spec.code) {
    rec["family"] = {{"name", spec.code->name()},
                     {"base_dim", spec.code->base_dim()},
                     {"delta0", spec.code->delta0().describe()},
                     {"budget", spec.code->query_budget(
                                    spec.kind == testers::TesterKind::kSample ? spec.n : spec.k)}};
  }
  if (o.adversary != "none" || parse_rat(o.rate) != 0) {
    const adversary::GameRecord game =
        adversary::run_game(f, spec, o.adversary, make_session(opts), opts.seed);
    rec["verdict"] = {{"decision", testers::to_string(game.verdict.decision)},
                      {"reason", testers::to_string(game.verdict.reason)}};
    rec["forfeit"] = game.forfeit;
    rec["erasure_hit"] = game.erasure_hit;
  } else {
    RandomStream rng(opts.seed);
    testers::TableOracle oracle(f);
    const testers::RunResult run = testers::run_tester(oracle, spec, rng);
    rec["verdict"] = {{"decision", testers::to_string(run.verdict.decision)},
                      {"reason", testers::to_string(run.verdict.reason)}};
    rec["queries"] = run.plan.points;
  }
  emit(opts.output, rec.dump(2) + "\n");
  std::cerr << "verdict: " << rec["verdict"]["decision"].get<std::string>() << "\n";
  return 0;
}

std::vector<std::uint64_t> parse_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stoull(tok));
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_sweep(const CommonOpts& o, const std::string& eps_list, const std::string& k_list,
              std::uint64_t trials) {
  const auto sweep_start = std::chrono::steady_clock::now();
  CommonOpts opts = o;
  const gf::FieldPtr field = make_field(opts);
  const std::uint64_t domain = space::domain_size(opts.q, opts.n);
  const auto family = make_family(opts, opts.n);
  std::ostringstream csv;
  csv << "# rmlab sweep version=" << RMLAB_VERSION << " seed=" << opts.seed << "\n";
  csv << "# config " << config_echo(opts).dump() << " trials=" << trials << "\n";
  csv << "q,n,d,k,Q,eps_num,eps_den,trials,rejects,rate,bound,pass\n";
  for (std::uint64_t k : parse_list(k_list)) {
    const std::uint64_t budget = family->query_budget(static_cast<unsigned>(k));
    const std::uint64_t queries =
        opts.queries ? opts.queries : std::min<std::uint64_t>(budget, 512);
    for (std::uint64_t eps_num : parse_list(eps_list)) {
      std::vector<std::uint8_t> rejects(trials, 0);
      RandomStream root(opts.seed);
      RandomStream cell =
          root.child(k * 1000003 + eps_num);  // independent stream per cell
      parallel_for(trials, [&](std::size_t i) {
        RandomStream rng = cell.child(i);
        const rm::PlantedInstance inst = rm::plant(*family, opts.n, eps_num, rng);
        testers::TableOracle oracle(inst.f);
        const auto res = testers::semi_sample_test(oracle, *family, opts.n,
                                                   static_cast<unsigned>(k), queries, rng);
        rejects[i] = res.verdict.decision == testers::Decision::kReject;
      });
      std::uint64_t reject_count = 0;
      for (auto v : rejects) reject_count += v;
      const double eps = double(eps_num) / double(domain);
      const double bound = std::min(1.0 / 128.0, double(queries) * eps / 8.0);
      const bool pass = stats::consistent_with_rate_at_least(
          static_cast<std::int64_t>(reject_count), static_cast<std::int64_t>(trials), bound,
          opts.sigma);
      char row[256];
      std::snprintf(row, sizeof(row),
                    "%u,%u,%u,%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64
                    ",%" PRIu64 ",%.9g,%.9g,%d\n",
                    opts.q, opts.n, opts.d, k, queries, eps_num, domain, trials, reject_count,
                    double(reject_count) / double(trials), bound, pass ? 1 : 0);
      csv << row;
    }
  }
  emit(opts.output, csv.str());
  std::cerr << "sweep finished in " << seconds_since(sweep_start) << "s\n";
  return 0;
}

int cmd_arena(const CommonOpts& o, const std::string& input, std::uint64_t trials,
              bool single_game) {
  CommonOpts opts = o;
  std::optional<functab::FunctionTable> fixed;
  if (!input.empty()) {
    fixed = functab::read_table_file(input);
    opts.n = fixed->n();
  }
  if (opts.n == 0) throw ConfigError("arena needs --n or --input");
  if (opts.k == 0) opts.k = opts.n;
  const testers::TesterSpec spec = make_spec(opts, opts.n);
  const adversary::SessionConfig session = make_session(opts);
  if (single_game) trials = 1;

  std::ostringstream lines;
  std::uint64_t accepts = 0, rejectc = 0, hits = 0, forfeits = 0;
  std::vector<std::string> recs(trials);
  RandomStream root(opts.seed);
  parallel_for(trials, [&](std::size_t i) {
    RandomStream rng = root.child(i);
    functab::FunctionTable f =
        fixed ? *fixed : spec.code->random_codeword(opts.n, rng);
    adversary::GameRecord rec =
        adversary::run_game(f, spec, opts.adversary, session, rng.next_u64());
    recs[i] = rec.to_json_line();
  });
  for (const auto& line : recs) {
    lines << line << "\n";
    const json j = json::parse(line);
    if (j["forfeit"].get<bool>()) ++forfeits;
    if (j["erasure_hit"].get<bool>()) ++hits;
    if (j["verdict"]["decision"] == "ACCEPT")
      ++accepts;
    else
      ++rejectc;
  }
  std::string head = "# rmlab arena version=" RMLAB_VERSION " seed=" +
                     std::to_string(opts.seed) + " config=" + config_echo(opts).dump() + "\n";
  emit(opts.output, head + lines.str());
  std::cerr << "games=" << trials << " accept=" << accepts << " reject=" << rejectc
            << " erasure_hit=" << hits << " forfeit=" << forfeits << "\n";
  return 0;
}

int cmd_agreement(const CommonOpts& o, std::uint64_t instances, std::uint64_t max_m) {
  CommonOpts opts = o;
  if (opts.n == 0) throw ConfigError("agreement needs --n");
  const gf::FieldPtr field = make_field(opts);
  const std::uint64_t domain = space::domain_size(opts.q, opts.n);
  RandomStream root(opts.seed);
  json rep;
  rep["version"] = RMLAB_VERSION;
  rep["config"] = config_echo(opts);
  rep["instances"] = instances;
  std::uint64_t sampling_ok = 0, chebyshev_ok = 0;
  Rat min_slack_lower, min_slack_upper;
  bool have_slack = false;
  const Int hyperplanes = space::gaussian_binomial(opts.n, opts.n - 1, opts.q);
  const std::uint64_t cap =
      std::min<std::uint64_t>(max_m, hyperplanes.convert_to<std::uint64_t>());
  for (std::uint64_t i = 0; i < instances; ++i) {
    RandomStream rng = root.child(i);
    const std::size_t m = 1 + rng.below(cap);
    agreement::HyperplaneCollection coll =
        agreement::random_collection(field, opts.n, m, rng);
    std::vector<space::Point> s;
    for (space::Point x = 0; x < domain; ++x)
      if (rng.below(2) == 0) s.push_back(x);
    const agreement::SamplingBoundReport sb = agreement::check_sampling_bounds(coll, s);
    sampling_ok += sb.holds;
    if (!have_slack || sb.slack_lower < min_slack_lower) min_slack_lower = sb.slack_lower;
    if (!have_slack || sb.slack_upper < min_slack_upper) min_slack_upper = sb.slack_upper;
    have_slack = true;
    bool all = true;
    for (const Rat c : {Rat(1, 2), Rat(1), Rat(2)})
      all = all && agreement::check_chebyshev(coll, c).holds;
    chebyshev_ok += all;
  }
  rep["sampling_ok"] = sampling_ok;
  rep["chebyshev_ok"] = chebyshev_ok;
  if (have_slack) {
    rep["min_slack_lower"] = rat_string(min_slack_lower);
    rep["min_slack_upper"] = rat_string(min_slack_upper);
  }
  rep["pass"] = sampling_ok == instances && chebyshev_ok == instances;
  emit(opts.output, rep.dump(2) + "\n");
  return rep["pass"].get<bool>() ? 0 : 4;
}

int cmd_bounds(const CommonOpts& o, const std::string& t_str, unsigned rank_r) {
  CommonOpts opts = o;
  const Int t(t_str);
  bounds::BoundReport rep = bounds::query_lower_bound(opts.q, opts.n, opts.d, t);
  json j = json::parse(rep.to_json());
  j["version"] = RMLAB_VERSION;
  j["config"] = config_echo(opts);
  j["seed"] = opts.seed;
  // testing dimension: the primary formula, plus the alternate d+1 reading
  // sometimes quoted for q = 2 (report-only, never used by tester logic)
  const gf::FieldPtr field = make_field(opts);
  j["testing_dimension"] = rm::testing_dimension(*field, opts.d);
  if (opts.q == 2) j["testing_dimension_alt_q2"] = rm::testing_dimension_alt_q2(opts.d);
  if (opts.k > 0) {
    // Q_total of the configured online tester, for upper-vs-lower comparison
    const auto family = make_family(opts, opts.n);
    const std::uint64_t queries =
        opts.queries ? opts.queries : family->query_budget(opts.k);
    j["tester_queries"] = queries * opts.reps;
  }
  if (rank_r > 0) {
    RandomStream rng(opts.seed);
    const auto rw = bounds::rank_witness(make_field(opts), opts.n, opts.d, rank_r, rng);
    j["rank_witness"] = {{"set_size", rw.set_size},
                         {"rank_lex", rw.rank_lex},
                         {"required", rw.required.str()},
                         {"rank_random", rw.rank_random}};
  }
  emit(opts.output, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-field property-testing laboratory"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string input, eps_list = "1", k_list, t_str = "1", config_path;
  std::uint64_t trials = 100, instances = 100, max_m = 24;
  unsigned rank_r = 0;

  CLI::App* test = app.add_subcommand("test", "run one tester on a table file");
  add_common(test, o, config_path, true);
  bind_opt(test, "--input", input, "table file")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "soundness sweep over planted instances");
  add_common(sweep, o, config_path, false);
  bind_opt(sweep, "--eps", eps_list, "noise weights, comma separated");
  bind_opt(sweep, "--k-list", k_list, "subspace dimensions, comma separated");
  bind_opt(sweep, "--trials", trials, "trials per cell");

  CLI::App* game = app.add_subcommand("game", "one tester-vs-adversary game");
  add_common(game, o, config_path, true);
  bind_opt(game, "--input", input, "table file (default: random codeword)");

  CLI::App* arena = app.add_subcommand("arena", "many games, JSON-lines trace");
  add_common(arena, o, config_path, true);
  bind_opt(arena, "--input", input, "table file (default: random codewords)");
  bind_opt(arena, "--trials", trials, "number of games");

  CLI::App* agreementc = app.add_subcommand("agreement", "hyperplane sampling lemma checks");
  add_common(agreementc, o, config_path, false);
  bind_opt(agreementc, "--instances", instances, "random instances");
  bind_opt(agreementc, "--max-m", max_m, "largest collection size");

  CLI::App* boundsc = app.add_subcommand("bounds", "query lower-bound calculators");
  add_common(boundsc, o, config_path, false);
  bind_opt(boundsc, "--t", t_str, "erasure parameter t");
  bind_opt(boundsc, "--rank-witness", rank_r, "also emit the rank witness at this r");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  CLI::App* active = nullptr;
  for (CLI::App* cmd : {test, sweep, game, arena, agreementc, boundsc})
    if (cmd->parsed()) active = cmd;

  try {
    if (active) apply_config_file(active, config_path);
    if (test->parsed()) return cmd_test(o, input);
    if (sweep->parsed()) {
      if (k_list.empty()) k_list = std::to_string(o.k ? o.k : o.n);
      return cmd_sweep(o, eps_list, k_list, trials);
    }
    if (game->parsed()) return cmd_arena(o, input, 1, true);
    if (arena->parsed()) return cmd_arena(o, input, trials, false);
    if (agreementc->parsed()) return cmd_agreement(o, instances, max_m);
    if (boundsc->parsed()) return cmd_bounds(o, t_str, rank_r);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ProtocolViolation& e) {
    std::cerr << "protocol violation: " << e.what() << "\n";
    return 3;
  } catch (const LemmaViolation& e) {
    std::cerr << "lemma check failed: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

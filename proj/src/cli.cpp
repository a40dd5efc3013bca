#include "balance/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "balance/borda.hpp"
#include "balance/checker.hpp"
#include "balance/errors.hpp"
#include "balance/paths.hpp"
#include "balance/report.hpp"
#include "balance/rules.hpp"

namespace balance {
namespace {

struct UsageError : Error {
  using Error::Error;
};

struct Options {
  std::string rule;
  std::string profile_file;
  int m = 0;
  int n = 0;
  int k = 0;
  bool exhaustive = false;
  bool sample = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  int workers = 1;
  std::uint64_t cap = kDefaultProfileCap;
  std::string labels;
  std::string a, b, c;
  std::string weights;
  std::string w;
  int voter = 0;
  std::string sweep;
  bool json = false;
  bool no_timing = false;
};

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? sep : "") + parts[k];
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::string format_weights(const Weights& w) {
  std::vector<std::string> parts;
  for (const auto& s : w.values()) parts.push_back(to_string(s));
  return join(parts, ",");
}

Weights parse_weights(const std::string& text) {
  std::vector<Rational> s;
  for (const auto& p : split(text, ',')) s.push_back(parse_rational(p));
  return Weights(std::move(s));
}

LabeledProfile read_profile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read profile file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_profile(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

Labels labels_for(const Options& o) {
  if (o.labels.empty()) return Labels::defaults(o.m);
  auto names = split(o.labels, ',');
  if (static_cast<int>(names.size()) != o.m) throw UsageError("--labels must name exactly m alternatives");
  std::sort(names.begin(), names.end());
  return Labels(std::move(names));
}

void require_size(const Options& o) {
  if (o.m < 2 || o.n < 2) throw UsageError("-m and -n are required (m >= 2, n >= 2)");
}

SearchMode search_mode(const Options& o) {
  if (o.exhaustive == o.sample) throw UsageError("choose exactly one of --exhaustive or --sample");
  if (o.exhaustive) return Exhaustive{o.cap, o.workers};
  if (!o.seed) throw UsageError("--sample requires an explicit --seed");
  if (!o.trials) throw UsageError("--sample requires --trials");
  return Sampled{*o.seed, *o.trials};
}

void put_mode(Report& r, const SearchMode& mode) {
  if (const auto* s = std::get_if<Sampled>(&mode)) {
    r.set("mode", "sampled");
    r.set("seed", std::to_string(s->seed));
    r.set("trials", std::to_string(s->trials));
  } else {
    const auto& e = std::get<Exhaustive>(mode);
    r.set("mode", "exhaustive");
    r.set("cap", std::to_string(e.cap));
    r.set("workers", std::to_string(e.workers));
  }
}

void put_balance_witness(Report& r, const BalanceWitness& w, const Labels& labels, const std::string& prefix = "") {
  r.set(prefix + "pair", format_pair(w.pair, labels));
  r.set(prefix + "before_choice", format_choice(w.before_choice, labels));
  r.set(prefix + "after_choice", format_choice(w.after_choice, labels));
  r.add_block(prefix + "before", format_profile(w.before, labels));
  r.add_block(prefix + "after", format_profile(w.after, labels));
}

void put_pair_witness(Report& r, const PairWitness& w, const Labels& labels, const std::string& prefix = "") {
  r.set(prefix + "first_choice", format_choice(w.first_choice, labels));
  r.set(prefix + "second_choice", format_choice(w.second_choice, labels));
  r.add_block(prefix + "first", format_profile(w.first, labels));
  r.add_block(prefix + "second", format_profile(w.second, labels));
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void emit(std::ostream& out, Report& r, const Options& o, const Timer& t) {
  if (!o.no_timing) r.set("elapsed_ms", std::to_string(t.ms()));
  out << (o.json ? r.to_json() : r.to_text());
}

// ---------------------------------------------------------------------------

int cmd_eval(const Options& o, Report& r, std::ostream& out) {
  const LabeledProfile lp = read_profile(o.profile_file);
  const RuleSpec rule = parse_rule(o.rule, lp.labels);
  check_rule_fits(rule, lp.profile.m(), lp.profile.n());
  const ChoiceSet g = evaluate(rule, lp.profile);
  if (o.json) {
    r.set("rule", format_rule(rule, lp.labels));
    r.set("m", std::to_string(lp.profile.m()));
    r.set("n", std::to_string(lp.profile.n()));
    r.set("choice", format_choice(g, lp.labels));
    r.add_block("profile", format_profile(lp.profile, lp.labels));
    out << r.to_json();
  } else {
    out << format_choice(g, lp.labels) << '\n';
  }
  return kExitHolds;
}

int cmd_check(const std::string& kind, const Options& o, Report& r, std::ostream& out) {
  require_size(o);
  const Labels labels = labels_for(o);
  const RuleSpec rule = parse_rule(o.rule, labels);
  check_rule_fits(rule, o.m, o.n);
  r.set("check", kind);
  r.set("rule", format_rule(rule, labels));
  r.set("m", std::to_string(o.m));
  r.set("n", std::to_string(o.n));

  Timer timer;
  int code = kExitHolds;
  if (kind == "balance") {
    const SearchMode mode = search_mode(o);
    put_mode(r, mode);
    const BalanceVerdict v = check_balanced(rule, o.m, o.n, mode);
    r.set("status", to_string(v.status));
    r.set("searched", std::to_string(v.searched));
    if (v.witness) {
      r.set("witness_verified", revalidate(rule, *v.witness) ? "yes" : "no");
      put_balance_witness(r, *v.witness, labels);
      code = kExitWitness;
    }
  } else if (kind == "topsonly" || kind == "topk") {
    const int k = kind == "topsonly" ? 1 : o.k;
    if (k < 1 || k >= o.m) throw UsageError("--k must satisfy 1 <= k < m");
    const SearchMode mode = search_mode(o);
    r.set("k", std::to_string(k));
    put_mode(r, mode);
    const PropertyVerdict v = check_top_k_only(rule, o.m, o.n, k, mode);
    r.set("status", to_string(v.status));
    r.set("searched", std::to_string(v.searched));
    if (v.witness) {
      put_pair_witness(r, *v.witness, labels);
      code = kExitWitness;
    }
  } else {
    if (o.sample) throw UsageError("check effective supports --exhaustive only");
    r.set("mode", "exhaustive");
    r.set("cap", std::to_string(o.cap));
    const EffectivenessReport rep = check_effectiveness(rule, o.m, o.n, o.cap);
    std::vector<std::string> ineffective;
    for (const auto& ind : rep.individuals) {
      const std::string key = "voter." + std::to_string(ind.voter);
      r.set(key, ind.effective ? "effective" : "ineffective");
      if (!ind.effective) ineffective.push_back(std::to_string(ind.voter));
      if (ind.witness) put_pair_witness(r, *ind.witness, labels, key + ".");
    }
    r.set("ineffective", join(ineffective, " "));
    r.set("status", ineffective.empty() ? "AllEffective" : "SomeIneffective");
    code = ineffective.empty() ? kExitHolds : kExitWitness;
  }
  emit(out, r, o, timer);
  return code;
}

std::string describe_move(const Move& move, const Labels& labels) {
  if (const auto* p = std::get_if<PairMove>(&move)) return "pair " + format_pair(p->pair, labels);
  if (const auto* t = std::get_if<TopsPreservingReorder>(&move)) {
    return "tops-reorder " + std::to_string(t->voter) + " " + format_ordering(t->ordering, labels);
  }
  const auto& t = std::get<Top2PreservingReorder>(move);
  return "top2-reorder " + std::to_string(t.voter) + " " + format_ordering(t.ordering, labels);
}

int cmd_path(const std::string& regime, const Options& o, Report& r, std::ostream& out) {
  const LabeledProfile lp = read_profile(o.profile_file);
  const Labels& labels = lp.labels;
  auto pick = [&](const std::string& label, AltId fallback) { return label.empty() ? fallback : labels.id(label); };
  const AltId a = pick(o.a, 0);
  const AltId b = pick(o.b, 1);
  const AltId c = pick(o.c, 2);
  r.set("regime", regime);
  r.set("m", std::to_string(lp.profile.m()));
  r.set("n", std::to_string(lp.profile.n()));
  r.set("a", labels.name(a));
  r.set("b", labels.name(b));
  if (regime == "top2") r.set("c", labels.name(c));

  Timer timer;
  const ProfilePath path = regime == "tops" ? tops_path(lp.profile, a, b) : top2_path(lp.profile, a, b, c);
  const PathCheck check = validate_path(path);
  r.set("steps", std::to_string(path.steps.size()));
  r.set("valid", check.ok ? "yes" : "no");
  if (!check.ok) {
    r.set("failing_step", std::to_string(check.failing_step.value_or(0)));
    r.set("reason", check.reason);
  }
  r.add_block("start", format_profile(path.start, labels));
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    const std::string key = "step." + std::to_string(k + 1);
    r.set(key, describe_move(path.steps[k].move, labels));
    r.add_block(key, format_profile(path.steps[k].result, labels));
  }
  emit(out, r, o, timer);
  return check.ok ? kExitHolds : kExitWitness;
}

int cmd_witness_equal_leading(const Options& o, Report& r, std::ostream& out) {
  if (o.weights.empty()) throw UsageError("--weights is required");
  const Weights w = parse_weights(o.weights);
  const int m = static_cast<int>(w.values().size());
  if (o.m != 0 && o.m != m) throw UsageError("-m does not match the number of weights");
  if (o.n < 2) throw UsageError("-n is required (n >= 2)");
  const Labels labels = Labels::defaults(m);
  Timer timer;
  const EqualLeadingWitness wit = equal_leading_weights_witness(w, m, o.n);
  r.set("weights", format_weights(w));
  r.set("m", std::to_string(m));
  r.set("n", std::to_string(o.n));
  r.set("k", std::to_string(wit.k));
  r.set("x", labels.name(wit.x));
  r.set("y", labels.name(wit.y));
  put_balance_witness(r, wit.witness, labels);
  emit(out, r, o, timer);
  return kExitWitness;
}

int cmd_witness_insertion(const Options& o, Report& r, std::ostream& out) {
  if (o.w.empty()) throw UsageError("--w is required");
  Timer timer;
  const InsertionWitness wit = insertion_witness(o.m, o.n, parse_rational(o.w));
  r.set("weights", format_weights(wit.weights));
  r.set("m", std::to_string(wit.m));
  r.set("n", std::to_string(wit.n));
  r.set("predicted", wit.predicted ? "closed-form" : "evaluated");
  const ScoreTable before = scoring_scores(wit.witness.before, wit.weights);
  const ScoreTable after = scoring_scores(wit.witness.after, wit.weights);
  for (AltId x = 0; x < wit.m; ++x) {
    r.set("score.before." + wit.labels.name(x), to_string(before[x]));
    r.set("score.after." + wit.labels.name(x), to_string(after[x]));
  }
  put_balance_witness(r, wit.witness, wit.labels);
  emit(out, r, o, timer);
  return kExitWitness;
}

int cmd_witness_ineffective(const Options& o, Report& r, std::ostream& out) {
  require_size(o);
  const Labels labels = labels_for(o);
  const RuleSpec rule = parse_rule(o.rule, labels);
  check_rule_fits(rule, o.m, o.n);
  r.set("rule", format_rule(rule, labels));
  r.set("m", std::to_string(o.m));
  r.set("n", std::to_string(o.n));
  Timer timer;
  std::vector<int> voters;
  if (o.voter != 0) {
    voters.push_back(o.voter);
  } else {
    for (const auto& ind : check_effectiveness(rule, o.m, o.n, o.cap).individuals) {
      if (!ind.effective) voters.push_back(ind.voter);
    }
  }
  if (voters.empty()) throw PreconditionError("every individual is effective: nothing to witness");
  std::vector<std::string> listed;
  for (int v : voters) {
    const IneffectiveWitness wit = ineffective_voter_witness(rule, o.m, o.n, v, o.cap);
    const std::string key = "voter." + std::to_string(v) + ".";
    listed.push_back(std::to_string(v));
    r.set(key + "chain_length", std::to_string(wit.chain_length));
    r.set(key + "change_step", std::to_string(wit.change_step));
    r.set(key + "verified", revalidate(rule, wit.violation) ? "yes" : "no");
    r.add_block(key + "start", format_profile(wit.start, labels));
    r.add_block(key + "target", format_profile(wit.target, labels));
    put_balance_witness(r, wit.violation, labels, key);
  }
  r.set("voters", join(listed, " "));
  emit(out, r, o, timer);
  return kExitWitness;
}

int cmd_characterize(const Options& o, Report& r, std::ostream& out) {
  Timer timer;
  const Characterization ch = characterize(o.m, o.n);
  r.set("m", std::to_string(o.m));
  r.set("n", std::to_string(o.n));
  r.set("verdict", to_string(ch.kind));
  if (ch.derivation) {
    const BordaDerivation& d = *ch.derivation;
    r.set("forced", format_choice(d.forced, d.labels));
    for (std::size_t k = 0; k < d.constraints.size(); ++k) {
      r.set("constraint." + std::to_string(k + 1), to_string(d.constraints[k]));
      r.set("equation." + std::to_string(k + 1), to_string(d.equations[k]));
    }
    if (d.solution) {
      for (std::size_t k = 0; k < d.solution->size(); ++k) {
        r.set("s_" + std::to_string(k + 3), to_string((*d.solution)[k]));
      }
    }
    for (std::size_t k = 0; k < d.profiles.size(); ++k) {
      r.add_block("profile." + std::to_string(k + 1), format_profile(d.profiles[k], d.labels));
    }
  }
  if (ch.counterexample) {
    r.set("weights", format_weights(*ch.counterexample));
    r.set("status", to_string(ch.counterexample_check->status));
    r.set("searched", std::to_string(ch.counterexample_check->searched));
  }
  if (!o.sweep.empty()) {
    if (o.m != 3 || o.n != 3) throw UsageError("--sweep applies to -m 3 -n 3 only");
    std::vector<Rational> grid;
    for (const auto& p : split(o.sweep, ',')) grid.push_back(parse_rational(p));
    for (const auto& [s, status] : sweep_third_weight(grid)) r.set("sweep." + to_string(s), to_string(status));
  }
  emit(out, r, o, timer);
  return kExitHolds;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Balancedness checks for social choice correspondences", "balance"};
  app.require_subcommand(1);

  auto add_rule = [&](CLI::App* s) { s->add_option("--rule", o.rule, "Rule spec (see `rules list`)")->required(); };
  auto add_size = [&](CLI::App* s) {
    s->add_option("-m", o.m, "Number of alternatives");
    s->add_option("-n", o.n, "Number of individuals");
  };
  auto add_output = [&](CLI::App* s) {
    s->add_flag("--json", o.json, "Emit a JSON document");
    s->add_flag("--no-timing", o.no_timing, "Omit elapsed_ms");
  };

  auto* eval = app.add_subcommand("eval", "Evaluate a rule at a profile file");
  add_rule(eval);
  eval->add_option("--profile", o.profile_file, "Profile file")->required();
  eval->add_flag("--json", o.json, "Emit a JSON document");

  auto* check = app.add_subcommand("check", "Check a property of a rule");
  check->require_subcommand(1);
  std::vector<CLI::App*> checks;
  for (const char* kind : {"balance", "topsonly", "topk", "effective"}) {
    auto* s = check->add_subcommand(kind);
    add_rule(s);
    add_size(s);
    s->add_flag("--exhaustive", o.exhaustive, "Enumerate every profile");
    s->add_flag("--sample", o.sample, "Sample profiles (requires --seed, --trials)");
    s->add_option("--seed", o.seed, "Random seed for --sample");
    s->add_option("--trials", o.trials, "Trials for --sample");
    s->add_option("--workers", o.workers, "Parallel workers (exhaustive)")->check(CLI::PositiveNumber);
    s->add_option("--cap", o.cap, "Profile-space cap");
    s->add_option("--labels", o.labels, "Comma-separated alternative labels");
    if (std::string(kind) == "topk") s->add_option("--k", o.k, "Size of the top set")->required();
    add_output(s);
    checks.push_back(s);
  }

  auto* path = app.add_subcommand("path", "Build and validate a path to the canonical target");
  path->require_subcommand(1);
  std::vector<CLI::App*> paths;
  for (const char* regime : {"tops", "top2"}) {
    auto* s = path->add_subcommand(regime);
    s->add_option("--from", o.profile_file, "Start profile file")->required();
    s->add_option("--a", o.a, "Label of a");
    s->add_option("--b", o.b, "Label of b");
    if (std::string(regime) == "top2") s->add_option("--c", o.c, "Label of c");
    add_output(s);
    paths.push_back(s);
  }

  auto* witness = app.add_subcommand("witness", "Construct a balancedness violation");
  witness->require_subcommand(1);
  auto* w_equal = witness->add_subcommand("equal-leading", "Scoring rule with s_1 = s_2");
  w_equal->alias("lemma0");
  w_equal->add_option("--weights", o.weights, "Comma-separated weights, s_1 = s_2")->required();
  add_size(w_equal);
  add_output(w_equal);
  auto* w_insert = witness->add_subcommand("insertion", "Weights 1..m-1 then w, w != m");
  add_size(w_insert);
  w_insert->add_option("--w", o.w, "Top weight")->required();
  add_output(w_insert);
  auto* w_ineff = witness->add_subcommand("ineffective", "Violation through an ineffective individual");
  w_ineff->alias("theorem1");
  add_rule(w_ineff);
  add_size(w_ineff);
  w_ineff->add_option("--voter", o.voter, "Individual (default: every ineffective one)");
  w_ineff->add_option("--cap", o.cap, "Profile-space cap");
  w_ineff->add_option("--labels", o.labels, "Comma-separated alternative labels");
  add_output(w_ineff);

  auto* charact = app.add_subcommand("characterize", "Does balancedness force Borda at (m, n)?");
  add_size(charact);
  charact->add_option("--sweep", o.sweep, "At (3,3): comma-separated values of s_3 to check");
  add_output(charact);

  auto* rules = app.add_subcommand("rules", "Rule reference");
  rules->require_subcommand(1);
  auto* rules_list = rules->add_subcommand("list", "List rule specs");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitHolds : kExitUsage;
  }

  Report report("balance " + join(args, " "));
  try {
    if (eval->parsed()) return cmd_eval(o, report, out);
    for (auto* s : checks) {
      if (s->parsed()) return cmd_check(s->get_name(), o, report, out);
    }
    for (auto* s : paths) {
      if (s->parsed()) return cmd_path(s->get_name(), o, report, out);
    }
    if (w_equal->parsed()) return cmd_witness_equal_leading(o, report, out);
    if (w_insert->parsed()) return cmd_witness_insertion(o, report, out);
    if (w_ineff->parsed()) return cmd_witness_ineffective(o, report, out);
    if (charact->parsed()) return cmd_characterize(o, report, out);
    if (rules_list->parsed()) {
      out << rule_syntax_help();
      return kExitHolds;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace balance

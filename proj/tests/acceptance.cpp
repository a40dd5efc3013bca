// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "balance/borda.hpp"
#include "balance/checker.hpp"
#include "balance/paths.hpp"
#include "balance/rules.hpp"

using namespace balance;

namespace {

Rational r(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

Weights weights(std::initializer_list<Rational> s) { return Weights(std::vector<Rational>(s)); }

Profile rows(int m, std::initializer_list<const char*> text) {
  std::vector<Ordering> os;
  for (const char* row : text) {
    std::vector<AltId> ids;
    for (const char* c = row; *c; ++c) ids.push_back(*c - 'a');
    os.emplace_back(ids);
  }
  return Profile(m, os);
}

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  std::string id;
  std::string title;
  double limit_s;
  std::function<void(Outcome&)> body;
};

bool balanced(const RuleSpec& rule, int m, int n) {
  return check_balanced(rule, m, n, Exhaustive{}).status == BalanceStatus::Balanced;
}

void ac1(Outcome& o) {
  // Labels x, y, z as ids 0, 1, 2.
  const Profile u = rows(3, {"abc", "abc", "bca"});
  const Weights w = weights({r(1), r(2), r(31, 10)});
  o.require(borda(u) == ChoiceSet{0, 1}, "Borda = {x,y}");
  o.require(scoring_choice(u, w) == ChoiceSet{1}, "Scoring(1,2,31/10) = {y}");
  const auto v = check_balanced(RuleSpec::scoring(w), 3, 3, Exhaustive{});
  o.require(v.status == BalanceStatus::Balanced, "Scoring(1,2,31/10) balanced at (3,3)");
  o.detail << " profiles=" << profile_space_size(3, 3) << " moves=" << v.searched;
}

void ac2(Outcome& o) {
  for (const auto& [m, n] : std::vector<std::pair<int, int>>{{3, 2}, {3, 3}, {3, 4}, {4, 3}}) {
    o.require(balanced(RuleSpec::borda(), m, n), "Borda at (" + std::to_string(m) + "," + std::to_string(n) + ")");
  }
  for (const auto& rule : {RuleSpec::pareto(), RuleSpec::copeland(), RuleSpec::top_cycle()}) {
    for (int n : {3, 5}) {
      o.require(balanced(rule, 3, n), format_rule(rule, Labels::defaults(3)) + " at (3," + std::to_string(n) + ")");
    }
  }
}

void ac3(Outcome& o) {
  const Labels l3 = Labels::defaults(3);
  auto expect_witness = [&](const RuleSpec& rule, const std::vector<std::pair<int, int>>& sizes) {
    const auto steps = search_balance_escalating(rule, sizes);
    const auto& last = steps.back();
    const std::string name = format_rule(rule, Labels::defaults(last.m));
    const bool found = last.verdict.status == BalanceStatus::Unbalanced && last.verdict.witness &&
                       revalidate(rule, *last.verdict.witness);
    o.require(found, name + " witness");
    o.detail << " " << name << (found ? "@(" : ":none-up-to(") << last.m << "," << last.n << ")";
  };
  expect_witness(RuleSpec::plurality(), {{3, 2}});
  expect_witness(RuleSpec::dictatorship(1), {{3, 2}});
  expect_witness(RuleSpec::union_of_tops(), {{3, 3}});
  expect_witness(RuleSpec::k_approval(2), {{3, 3}, {4, 3}});
  expect_witness(RuleSpec::maximin(), {{3, 3}, {4, 3}, {3, 4}, {4, 4}});
}

void ac4(Outcome& o) {
  const RuleSpec dict = RuleSpec::dictatorship(1);
  const EffectivenessReport rep = check_effectiveness(dict, 3, 3);
  o.require(rep.effective(1), "individual 1 effective");
  for (int voter : {2, 3}) {
    o.require(!rep.effective(voter), "individual " + std::to_string(voter) + " ineffective");
    const IneffectiveWitness w = ineffective_voter_witness(dict, 3, 3, voter);
    o.require(revalidate(dict, w.violation), "violation through individual " + std::to_string(voter));
    o.require(w.violation.pair.i == voter || w.violation.pair.j == voter, "pair involves the ineffective individual");
  }
}

void ac5(Outcome& o) {
  std::uint64_t count33 = 0, count43 = 0, steps = 0;
  auto run = [&](int m, int n, std::uint64_t& count) {
    for (const auto& u : ProfileSpace(m, n)) {
      if (!is_non_unanimous(u)) continue;
      ++count;
      const ProfilePath path = tops_path(u);
      const PathCheck c = validate_path(path);
      bool inside = true;
      for (const auto& s : path.steps) inside = inside && is_non_unanimous(s.result);
      if (!c.ok || !inside || path.end() != tops_path_target(m, n)) {
        o.require(false, "path from a (" + std::to_string(m) + "," + std::to_string(n) + ") profile");
        return;
      }
      steps += path.steps.size();
    }
  };
  run(3, 3, count33);
  run(4, 3, count43);
  // The (3,3) space has 216 profiles of which 192 are non-unanimous.
  o.require(count33 == 192, "192 non-unanimous profiles at (3,3)");
  o.detail << " starts(3,3)=" << count33 << " starts(4,3)=" << count43 << " total_steps=" << steps;
}

void ac6(Outcome& o) {
  std::uint64_t count = 0, steps = 0;
  for (const auto& u : ProfileSpace(4, 3)) {
    if (!in_domain_d(u)) continue;
    ++count;
    const ProfilePath path = top2_path(u);
    const PathCheck c = validate_path(path);
    bool inside = true;
    for (const auto& s : path.steps) inside = inside && in_domain_d(s.result);
    if (!c.ok || !inside || path.end() != top2_path_target(4, 3)) {
      o.require(false, "top-2 path");
      return;
    }
    steps += path.steps.size();
  }
  o.require(count == 13440, "13440 D profiles at (4,3)");
  o.detail << " starts=" << count << " total_steps=" << steps;
}

void ac7(Outcome& o) {
  for (const auto& [w, m, n] : std::vector<std::tuple<Weights, int, int>>{
           {weights({r(1), r(1), r(2)}), 3, 3}, {weights({r(1), r(1), r(1), r(2)}), 4, 2}}) {
    const auto e = equal_leading_weights_witness(w, m, n);
    const auto& b = e.witness.before_choice;
    const auto& a = e.witness.after_choice;
    o.require(b.contains(e.x) && !b.contains(e.y), "x in, y out before");
    o.require(!a.contains(e.x) && a.contains(e.y), "x out, y in after");
    o.require(revalidate(RuleSpec::scoring(w), e.witness), "witness re-validates");
  }
}

void ac8(Outcome& o) {
  for (int n : {4, 5}) {
    const BordaDerivation d = derive_borda_constraints(3, n);
    o.require(d.solution && *d.solution == std::vector<Rational>{r(3)}, "s_3 = 3 at (3," + std::to_string(n) + ")");
  }
  const BordaDerivation d = derive_borda_constraints(4, 3);
  o.require(d.solution && *d.solution == std::vector<Rational>{r(3), r(4)}, "s_3 = 3, s_4 = 4 at (4,3)");
  const LinearEquation first{{{3, r(2)}, {4, r(-1)}}, r(2)};
  const LinearEquation second{{{3, r(1)}, {4, r(-1)}}, r(-1)};
  o.require(d.equations == std::vector<LinearEquation>{first, second}, "equations 2 s_3 - s_4 = 2, s_3 - s_4 = -1");
}

void ac9(Outcome& o) {
  {
    const InsertionWitness iw = insertion_witness(4, 3, r(41, 10));
    const AltId a = iw.labels.id("a"), x = iw.labels.id("x");
    o.require(iw.witness.before_choice == ChoiceSet{x}, "(4,3): G(u) = {x}");
    o.require(iw.witness.after_choice == ChoiceSet{x, a}, "(4,3): G(v) = {x,a}");
  }
  {
    const Rational w = r(51, 10);
    const InsertionWitness iw = insertion_witness(5, 3, w);
    const AltId a = iw.labels.id("a"), x = iw.labels.id("x");
    const auto s = scoring_scores(iw.witness.before, iw.weights);
    o.require(s[a] == r(8), "S(a) = 8");
    o.require(s[x] == r(3) + w, "S(x) = 3 + w");
    o.require(iw.witness.before_choice == ChoiceSet{a}, "(5,3): G(u) = {a}");
    o.require(iw.witness.after_choice == ChoiceSet{a, x}, "(5,3): G(v) = {a,x}");
  }
}

void ac10(Outcome& o) {
  std::vector<RuleSpec> rules{RuleSpec::plurality(),   RuleSpec::dictatorship(1), RuleSpec::dictatorship(3),
                              RuleSpec::borda(),       RuleSpec::copeland(),      RuleSpec::top_cycle(),
                              RuleSpec::pareto(),      RuleSpec::maximin(),       RuleSpec::union_of_tops(),
                              RuleSpec::k_approval(2), RuleSpec::tops_unanimity(std::nullopt)};
  int qualifying = 0;
  for (const auto& rule : rules) {
    const bool tops = check_tops_only(rule, 3, 3, Exhaustive{}).status == PropertyStatus::Holds;
    const bool pareto = check_pareto_compliance(rule, 3, 3).status == PropertyStatus::Holds;
    if (!(tops && pareto)) continue;
    ++qualifying;
    o.require(!balanced(rule, 3, 3), format_rule(rule, Labels::defaults(3)) + " unbalanced");
  }
  for (const auto& rule : {RuleSpec::plurality(), RuleSpec::dictatorship(1)}) {
    o.require(check_tops_only(rule, 3, 3, Exhaustive{}).status == PropertyStatus::Holds, "tops-only");
    o.require(check_pareto_compliance(rule, 3, 3).status == PropertyStatus::Holds, "Pareto containment");
  }
  o.detail << " qualifying_rules=" << qualifying;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "three-voter example and balanced Scoring(1,2,31/10) at (3,3)", 5, ac1},
      {"AC2", "balanced-rule suite", 60, ac2},
      {"AC3", "unbalanced-rule suite with verified witnesses", 600, ac3},
      {"AC4", "ineffective individuals of Dictatorship(1) and their violations", 60, ac4},
      {"AC5", "tops paths from every non-unanimous profile", 120, ac5},
      {"AC6", "top-2 paths from every D profile at (4,3)", 600, ac6},
      {"AC7", "equal leading weights flip the choice set", 60, ac7},
      {"AC8", "constraint derivation pins the weights to Borda", 60, ac8},
      {"AC9", "alternative-insertion witnesses", 60, ac9},
      {"AC10", "tops-only Pareto rules are unbalanced at (3,3)", 60, ac10},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_s) o.require(false, "runtime over " + std::to_string(c.limit_s) + " s");
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS " : "FAIL ") << c.id << " " << c.title << " (" << std::fixed;
    std::cout.precision(3);
    std::cout << secs << " s)" << o.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}

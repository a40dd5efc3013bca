#pragma once

// Social choice correspondences behind a single evaluate() entry point.
//
// Scoring rules follow the lowest-score convention: rank k earns weight s_k
// with s_1 <= s_2 <= ... <= s_m, and the alternatives with the smallest total
// are chosen. All scores are exact rationals.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "balance/prefs.hpp"
#include "balance/rational.hpp"

namespace balance {

/// Non-decreasing scoring weights s_1..s_m with at least two distinct values.
class Weights {
 public:
  explicit Weights(std::vector<Rational> s);

  /// 1, 2, ..., m.
  static Weights borda(int m);

  int size() const noexcept { return static_cast<int>(s_.size()); }
  /// s_rank for 1-based rank.
  const Rational& at(int rank) const;
  std::span<const Rational> values() const noexcept { return s_; }

  friend bool operator==(const Weights&, const Weights&) = default;

 private:
  std::vector<Rational> s_;
};

/// S(x, u) indexed by alternative id.
using ScoreTable = std::vector<Rational>;

enum class RuleKind {
  Borda,
  Scoring,
  Plurality,
  KApproval,
  Copeland,
  TopCycle,
  ParetoSet,
  Maximin,
  Dictatorship,
  UnionOfTops,
  Constant,
  TopsUnanimity,
};

class RuleSpec {
 public:
  static RuleSpec borda() { return RuleSpec(RuleKind::Borda); }
  static RuleSpec scoring(Weights w);
  static RuleSpec plurality() { return RuleSpec(RuleKind::Plurality); }
  static RuleSpec k_approval(int k);
  static RuleSpec copeland() { return RuleSpec(RuleKind::Copeland); }
  static RuleSpec top_cycle() { return RuleSpec(RuleKind::TopCycle); }
  static RuleSpec pareto() { return RuleSpec(RuleKind::ParetoSet); }
  static RuleSpec maximin() { return RuleSpec(RuleKind::Maximin); }
  static RuleSpec dictatorship(int voter);
  static RuleSpec union_of_tops() { return RuleSpec(RuleKind::UnionOfTops); }
  /// Always `set`; std::nullopt stands for the whole universe X.
  static RuleSpec constant(std::optional<ChoiceSet> set);
  /// The common top on unanimous-top profiles, otherwise `fallback` (nullopt = X).
  static RuleSpec tops_unanimity(std::optional<ChoiceSet> fallback);

  RuleKind kind() const noexcept { return kind_; }
  const Weights& weights() const;
  int k() const noexcept { return k_; }
  int dictator() const noexcept { return dictator_; }
  /// Fixed set of Constant / TopsUnanimity resolved against a universe of size m.
  ChoiceSet fixed_set(int m) const;
  bool fixed_set_is_universe() const noexcept { return !fixed_.has_value(); }

  friend bool operator==(const RuleSpec&, const RuleSpec&) = default;

 private:
  explicit RuleSpec(RuleKind kind) : kind_(kind) {}

  RuleKind kind_;
  std::optional<Weights> weights_;
  int k_ = 0;
  int dictator_ = 0;
  std::optional<ChoiceSet> fixed_;
};

/// Throws PreconditionError when the rule's parameters do not fit (m, n).
void check_rule_fits(const RuleSpec& rule, int m, int n);

/// G(u). Always non-empty.
ChoiceSet evaluate(const RuleSpec& rule, const Profile& u);

ScoreTable scoring_scores(const Profile& u, const Weights& w);
/// argmin of scoring_scores.
ChoiceSet scoring_choice(const Profile& u, const Weights& w);

ChoiceSet borda(const Profile& u);
ChoiceSet plurality(const Profile& u);
/// Most frequent members of the top-k sets; 1 <= k < m.
ChoiceSet k_approval(const Profile& u, int k);

/// support[x][y] = #{i : x above y in u(i)}.
std::vector<std::vector<int>> pairwise_support(const Profile& u);

/// argmax of (strict pairwise wins - strict pairwise losses).
ChoiceSet copeland(const Profile& u);
/// Maximal elements of the transitive closure of the weak majority relation.
ChoiceSet top_cycle(const Profile& u);
ChoiceSet pareto_set(const Profile& u);
/// Simpson-Kramer: argmax over x of min_{y != x} support[x][y].
ChoiceSet maximin(const Profile& u);
ChoiceSet dictatorship(const Profile& u, int voter);
ChoiceSet union_of_tops(const Profile& u);
ChoiceSet tops_unanimity(const Profile& u, const ChoiceSet& fallback);

/// Parses the CLI rule syntax, e.g. "borda", "scoring:1,2,3.1", "kapproval:2",
/// "dictator:1", "constant:a,b", "topsunan:x". "*" in a set position means X.
RuleSpec parse_rule(std::string_view text, const Labels& labels);

/// Canonical text form; parse_rule(format_rule(r, l), l) == r.
std::string format_rule(const RuleSpec& rule, const Labels& labels);

/// One line per rule kind describing its syntax.
std::string rule_syntax_help();

}  // namespace balance

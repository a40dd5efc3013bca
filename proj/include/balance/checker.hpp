#pragma once

// Exhaustive and sampled property checks over L(X)^N: balancedness,
// tops-only / top-k-only, individual effectiveness, Pareto containment, and
// the ineffective-individual witness construction.
//
// Exhaustive searches report the first violation in (profile index, pair
// order) sequence, so the witness is independent of how work is partitioned.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "balance/prefs.hpp"
#include "balance/rules.hpp"

namespace balance {

struct Exhaustive {
  std::uint64_t cap = kDefaultProfileCap;
  /// Workers scan indices congruent to their id modulo `workers`.
  int workers = 1;
};

/// Uniform profiles, then a uniform move among that profile's valid pairs.
/// Reproducible from `seed`; there are no defaults.
struct Sampled {
  std::uint64_t seed;
  std::uint64_t trials;
};

using SearchMode = std::variant<Exhaustive, Sampled>;

std::string describe(const SearchMode& mode);

// ---------------------------------------------------------------------------
// Balancedness

enum class BalanceStatus { Balanced, Unbalanced, Inconclusive };
std::string to_string(BalanceStatus s);

struct BalanceWitness {
  Profile before;
  TranspositionPair pair;
  Profile after;
  ChoiceSet before_choice;
  ChoiceSet after_choice;
};

struct BalanceVerdict {
  BalanceStatus status;
  /// (profile, move) combinations examined.
  std::uint64_t searched = 0;
  std::optional<BalanceWitness> witness;
};

/// Re-evaluates both sides; true iff the pair is valid at `u` and changes G.
bool is_balance_violation(const RuleSpec& rule, const Profile& u, const TranspositionPair& p);

/// Builds a witness record for (u, p) without checking that it is a violation.
BalanceWitness make_balance_witness(const RuleSpec& rule, const Profile& u, const TranspositionPair& p);

/// Witness soundness: the pair is valid, `after` is its result, and both
/// recorded choice sets reproduce and differ.
bool revalidate(const RuleSpec& rule, const BalanceWitness& w);

BalanceVerdict check_balanced(const RuleSpec& rule, int m, int n, const SearchMode& mode);

struct EscalationStep {
  int m;
  int n;
  BalanceVerdict verdict;
};

/// Exhaustive balance checks over `sizes` in order, stopping at the first witness.
std::vector<EscalationStep> search_balance_escalating(const RuleSpec& rule,
                                                      const std::vector<std::pair<int, int>>& sizes,
                                                      std::uint64_t cap = kDefaultProfileCap);

// ---------------------------------------------------------------------------
// Information restrictions

enum class PropertyStatus { Holds, Fails, Inconclusive };
std::string to_string(PropertyStatus s);

/// Two profiles related by the property's premise but with different outcomes.
struct PairWitness {
  Profile first;
  Profile second;
  ChoiceSet first_choice;
  ChoiceSet second_choice;
};

struct PropertyVerdict {
  PropertyStatus status;
  /// Profiles (exhaustive) or profile pairs (sampled) examined.
  std::uint64_t searched = 0;
  std::optional<PairWitness> witness;
};

/// G(u) = G(v) whenever every voter's top-k set agrees. 1 <= k < m.
PropertyVerdict check_top_k_only(const RuleSpec& rule, int m, int n, int k, const SearchMode& mode);
PropertyVerdict check_tops_only(const RuleSpec& rule, int m, int n, const SearchMode& mode);

/// G(u) is contained in the Pareto set at every profile. Witness: `first`
/// is the offending profile and `second_choice` its Pareto set.
PropertyVerdict check_pareto_compliance(const RuleSpec& rule, int m, int n, std::uint64_t cap = kDefaultProfileCap);

// ---------------------------------------------------------------------------
// Effectiveness and the ineffective-individual construction

struct IndividualEffect {
  int voter;
  bool effective;
  /// Groups of profiles agreeing off `voter` that were compared in full.
  std::uint64_t groups_examined;
  /// For an effective voter: two profiles differing only in that voter's ordering.
  std::optional<PairWitness> witness;
};

struct EffectivenessReport {
  int m;
  int n;
  std::vector<IndividualEffect> individuals;

  bool effective(int voter) const { return individuals.at(voter - 1).effective; }
};

EffectivenessReport check_effectiveness(const RuleSpec& rule, int m, int n, std::uint64_t cap = kDefaultProfileCap);

struct IneffectiveWitness {
  int voter;
  /// u and u* with G(u) != G(u*) and u(voter) = u*(voter).
  Profile start;
  Profile target;
  /// Single adjacent swaps by voters other than `voter` leading from start to target.
  std::size_t chain_length;
  /// 1-based step of the chain at which G first changes.
  std::size_t change_step;
  BalanceWitness violation;
};

/// Follows the chain argument: adjacent-swap path from u to u* avoiding
/// `voter`, first step where G changes, lifted to a transposition pair through
/// `voter`. Throws PreconditionError if the rule is constant on L(X)^N or the
/// voter is effective.
IneffectiveWitness ineffective_voter_witness(const RuleSpec& rule, int m, int n, int voter,
                                            std::uint64_t cap = kDefaultProfileCap);

}  // namespace balance

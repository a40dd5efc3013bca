#pragma once

// Scoring rules under balancedness: weight normalization, the equal-leading-
// weights witness, the three-alternative profile family, symbolic score forms,
// the constraint derivation that pins the weights to Borda's, and the
// alternative-insertion witnesses for larger universes.
//
// Unknown weights are written s_k with 1-based rank k. After normalization
// s_1 = 1 and s_2 = 2, so the unknowns are s_3, ..., s_m.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "balance/checker.hpp"
#include "balance/prefs.hpp"
#include "balance/rational.hpp"
#include "balance/rules.hpp"

namespace balance {

/// The affine image t = alpha + beta * s with beta > 0 sending s_1 to 1 and
/// s_2 to 2. Throws PreconditionError when s_1 == s_2.
Weights normalize_weights(const Weights& w);

// ---------------------------------------------------------------------------
// Symbolic scores

/// constant + sum_k coefficients[k] * s_k.
struct SymbolicScore {
  Rational constant{0};
  std::map<int, Rational> coefficients;

  Rational evaluate(const Weights& w) const;
  friend bool operator==(const SymbolicScore&, const SymbolicScore&) = default;
};

SymbolicScore operator-(const SymbolicScore& a, const SymbolicScore& b);

/// "4 + 2 s_3", "8", "1 + s_3 + s_4".
std::string to_string(const SymbolicScore& s);

/// Score forms per alternative (indexed by AltId). Ranks outside `unknowns`
/// carry their Borda value k.
std::vector<SymbolicScore> symbolic_scores(const Profile& u, const std::set<int>& unknowns);

/// sum_k coefficients[k] * s_k = rhs, scaled to coprime integers with the
/// lowest-index coefficient positive.
struct LinearEquation {
  std::map<int, Rational> coefficients;
  Rational rhs{0};
  friend bool operator==(const LinearEquation&, const LinearEquation&) = default;
};

std::string to_string(const LinearEquation& e);

struct WeightConstraint {
  SymbolicScore left;
  SymbolicScore right;

  /// Nullopt when both sides are identical.
  std::optional<LinearEquation> normalized() const;
};

std::string to_string(const WeightConstraint& c);

// ---------------------------------------------------------------------------
// Equal leading weights

struct EqualLeadingWitness {
  /// Number of leading weights equal to s_1.
  int k;
  AltId x;
  AltId y;
  BalanceWitness witness;
};

/// Requires s_1 == s_2, w.size() == m >= 3, n >= 2. Voters 1..n-1 rank y then
/// x on top; voter n has x at rank k and y at k+1. The pair exchanges x and y
/// through voters 1 and n. Re-verified before returning.
EqualLeadingWitness equal_leading_weights_witness(const Weights& w, int m, int n);

// ---------------------------------------------------------------------------
// Three alternatives, four to six voters

/// Alternatives x, y, z with ids 0, 1, 2.
Labels xyz_labels();

/// The fixed profile for n in {4, 5, 6}.
Profile small_electorate_profile(int n);

/// The transposition pairs applied in sequence to small_electorate_profile(n).
std::vector<TranspositionPair> small_electorate_pairs(int n);

/// Appends t copies of the three-voter cycle xyz, yzx, zxy. Requires m = 3.
Profile paradox_pad(const Profile& u, int t);

// ---------------------------------------------------------------------------
// Constraint derivation

struct BordaDerivation {
  int m;
  int n;
  Labels labels;
  /// Profiles whose choice sets balancedness forces to coincide.
  std::vector<Profile> profiles;
  /// moves[k] leads from profiles[k] to profiles[k + 1].
  std::vector<std::vector<TranspositionPair>> moves;
  /// scores[k][x]: form for alternative x at profiles[k], unknowns s_3..s_m.
  std::vector<std::vector<SymbolicScore>> scores;
  /// Alternatives that must belong to the common choice set for every
  /// admissible weighting 1 < 2 <= s_3 <= ... <= s_m.
  ChoiceSet forced;
  std::vector<WeightConstraint> constraints;
  std::vector<LinearEquation> equations;
  /// s_3..s_m when the equations determine them uniquely.
  std::optional<std::vector<Rational>> solution;

  /// (1, 2, s_3, ..., s_m) from `solution`.
  std::optional<Weights> solved_weights() const;
};

/// Supported: m = 3 with n >= 4 (n > 6 through paradox padding), and (4, 3).
BordaDerivation derive_borda_constraints(int m, int n);

// ---------------------------------------------------------------------------
// Alternative insertion

struct InsertionWitness {
  int m;
  int n;
  Weights weights;
  Labels labels;
  BalanceWitness witness;
  /// Choice sets predicted by the construction's score analysis, when it
  /// gives them in closed form for these parameters. Always agree with the
  /// evaluated sets in `witness`.
  std::optional<std::pair<ChoiceSet, ChoiceSet>> predicted;
};

/// Weights (1, 2, ..., m-1, w). Requires m >= 4, n in {3, 4, 5, 6}, w != m and
/// w >= m - 1. Free ranks are filled in ascending id order.
InsertionWitness insertion_witness(int m, int n, const Rational& w);

// ---------------------------------------------------------------------------
// Characterization

enum class CharacterizationKind { BordaForced, NotForced };
std::string to_string(CharacterizationKind k);

struct Characterization {
  CharacterizationKind kind;
  int m;
  int n;
  std::optional<BordaDerivation> derivation;
  /// NotForced: balanced non-Borda weights and their exhaustive check.
  std::optional<Weights> counterexample;
  std::optional<BalanceVerdict> counterexample_check;
};

/// (3, 3) is NotForced with (1, 2, 31/10); m = 3 with n >= 4 and (4, 3) are
/// BordaForced. Other sizes throw PreconditionError.
Characterization characterize(int m, int n);

/// Exhaustive balance check of Scoring(1, 2, s) at (3, 3) for each s in the grid.
std::vector<std::pair<Rational, BalanceStatus>> sweep_third_weight(const std::vector<Rational>& grid);

}  // namespace balance

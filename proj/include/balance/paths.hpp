#pragma once

// Executable versions of the two path constructions that drive the
// "constant on a subdomain" results:
//
//  * tops regime: any profile without a unanimous top is joined to a fixed
//    target by tops-preserving reorders and transposition pairs, never passing
//    through a unanimous-top profile;
//  * top-2 regime: any profile in D (at least three alternatives among the
//    top-two sets) is joined to a fixed target by top-2-preserving reorders
//    and transposition pairs, staying inside D.
//
// A correspondence that is balanced and depends only on the regime's statistic
// is therefore constant along every path these builders emit. validate_path()
// re-checks each step independently of the builders.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "balance/prefs.hpp"

namespace balance {

enum class Regime { TopsOnly, Top2Only };
std::string to_string(Regime r);

struct PairMove {
  TranspositionPair pair;
  friend bool operator==(const PairMove&, const PairMove&) = default;
};

/// Replace one voter's ordering with one sharing its top alternative.
struct TopsPreservingReorder {
  int voter;
  Ordering ordering;
  friend bool operator==(const TopsPreservingReorder&, const TopsPreservingReorder&) = default;
};

/// Replace one voter's ordering with one sharing its top-two set.
struct Top2PreservingReorder {
  int voter;
  Ordering ordering;
  friend bool operator==(const Top2PreservingReorder&, const Top2PreservingReorder&) = default;
};

using Move = std::variant<PairMove, TopsPreservingReorder, Top2PreservingReorder>;

struct PathStep {
  Move move;
  Profile result;
};

struct ProfilePath {
  Profile start;
  std::vector<PathStep> steps;
  Regime regime;

  const Profile& end() const { return steps.empty() ? start : steps.back().result; }
};

struct PathCheck {
  bool ok = true;
  /// 0 refers to the start profile, k >= 1 to the k-th step.
  std::optional<std::size_t> failing_step;
  std::string reason;

  explicit operator bool() const noexcept { return ok; }
};

/// At least two distinct tops.
bool is_non_unanimous(const Profile& u);

/// Membership in D: the voters' top-two sets are not all equal. Requires m >= 3.
bool in_domain_d(const Profile& u);

/// 10 * m * n * m!, saturating.
std::size_t step_budget(int m, int n);

/// Voter 1 ranks a first, voters 2..n rank b first; remaining ranks in id order.
Profile tops_path_target(int m, int n, AltId a = 0, AltId b = 1);

/// Path from a non-unanimous-top profile to tops_path_target(m, n, a, b).
/// Requires m >= 3 and n >= 3.
ProfilePath tops_path(const Profile& u, AltId a = 0, AltId b = 1);

/// c first for everyone, a second for voter 1, b second for the rest;
/// remaining ranks in id order. Requires m >= 4, n >= 3.
Profile top2_path_target(int m, int n, AltId a = 0, AltId b = 1, AltId c = 2);

/// Path inside D from u to top2_path_target(m, n, a, b, c). Requires u in D,
/// m >= 4 and n >= 3.
ProfilePath top2_path(const Profile& u, AltId a = 0, AltId b = 1, AltId c = 2);

/// Checks that the chain is contiguous, every move is legal for the regime and
/// every profile (start included) lies in the regime's subdomain.
PathCheck validate_path(const ProfilePath& path);

}  // namespace balance

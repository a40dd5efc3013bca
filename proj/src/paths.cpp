#include "balance/paths.hpp"

#include <algorithm>
#include <limits>

#include "balance/errors.hpp"

namespace balance {
namespace {

bool in_regime(Regime regime, const Profile& u) {
  return regime == Regime::TopsOnly ? is_non_unanimous(u) : u.m() >= 3 && in_domain_d(u);
}

// Accumulates steps and rejects any move the regime does not allow. A
// rejection here is a defect in the construction, not in the input.
class PathBuilder {
 public:
  PathBuilder(Profile start, Regime regime) : path_{start, {}, regime}, current_(std::move(start)) {}

  const Profile& current() const { return current_; }
  const Ordering& voter(int i) const { return current_.voter(i); }

  void reorder(int i, Ordering next) {
    const Ordering& prev = current_.voter(i);
    if (next == prev) return;
    if (path_.regime == Regime::TopsOnly) {
      if (next.top() != prev.top()) throw Error("path construction changed a top");
      append(TopsPreservingReorder{i, next}, current_.with_voter(i, next));
    } else {
      if (top_k_set(next, 2) != top_k_set(prev, 2)) throw Error("path construction changed a top-two set");
      append(Top2PreservingReorder{i, next}, current_.with_voter(i, next));
    }
  }

  void pair(TranspositionPair p) { append(PairMove{p.canonical()}, apply_pair(current_, p)); }

  ProfilePath finish() && {
    if (path_.steps.size() > step_budget(current_.m(), current_.n())) {
      throw Error("path construction exceeded its step budget");
    }
    return std::move(path_);
  }

 private:
  void append(Move move, Profile next) {
    if (!in_regime(path_.regime, next)) throw Error("path construction left the regime's subdomain");
    current_ = next;
    path_.steps.push_back({std::move(move), std::move(next)});
    if (path_.steps.size() > step_budget(current_.m(), current_.n())) {
      throw Error("path construction exceeded its step budget");
    }
  }

  ProfilePath path_;
  Profile current_;
};

template <typename Pred>
int lowest_voter(const Profile& u, Pred pred) {
  for (int i = 1; i <= u.n(); ++i) {
    if (pred(i)) return i;
  }
  return 0;
}

AltId lowest_alternative_except(int m, std::initializer_list<AltId> excluded) {
  for (AltId x = 0; x < m; ++x) {
    if (std::find(excluded.begin(), excluded.end(), x) == excluded.end()) return x;
  }
  throw Error("no spare alternative");
}

// Canonical ordering: `head` first, then the rest in ascending id order.
Ordering head_then_ascending(int m, std::initializer_list<AltId> head) {
  return Ordering::identity(m).with_prefix(head);
}

AltId reduce_id(AltId x, AltId removed) { return x < removed ? x : x - 1; }
AltId lift_id(AltId x, AltId removed) { return x < removed ? x : x + 1; }

Ordering drop_alternative(const Ordering& r, AltId removed) {
  std::vector<AltId> out;
  for (AltId x : r.alternatives()) {
    if (x != removed) out.push_back(reduce_id(x, removed));
  }
  return Ordering(std::move(out));
}

Ordering prepend_alternative(const Ordering& r, AltId added) {
  std::vector<AltId> out{added};
  for (AltId x : r.alternatives()) out.push_back(lift_id(x, added));
  return Ordering(std::move(out));
}

Profile prepend_everywhere(const Profile& u, AltId added) {
  std::vector<Ordering> os;
  for (const auto& r : u.orderings()) os.push_back(prepend_alternative(r, added));
  return Profile(u.m() + 1, std::move(os));
}

void check_alternative(AltId x, int m, const char* name) {
  if (x < 0 || x >= m) throw PreconditionError(std::string("alternative ") + name + " outside the universe");
}

}  // namespace

std::string to_string(Regime r) { return r == Regime::TopsOnly ? "tops" : "top2"; }

bool is_non_unanimous(const Profile& u) { return tops_set(u).size() >= 2; }

bool in_domain_d(const Profile& u) {
  if (u.m() < 3) throw PreconditionError("domain D needs m >= 3");
  ChoiceSet seen;
  for (const auto& r : u.orderings()) seen = ChoiceSet::from_bits(seen.bits() | top_k_set(r, 2).bits());
  return seen.size() >= 3;
}

std::size_t step_budget(int m, int n) {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  std::size_t budget = 10 * static_cast<std::size_t>(m) * static_cast<std::size_t>(n);
  for (int k = 2; k <= m; ++k) {
    if (budget > kMax / static_cast<std::size_t>(k)) return kMax;
    budget *= static_cast<std::size_t>(k);
  }
  return budget;
}

Profile tops_path_target(int m, int n, AltId a, AltId b) {
  if (m < 3 || n < 3) throw PreconditionError("tops path needs m >= 3 and n >= 3");
  check_alternative(a, m, "a");
  check_alternative(b, m, "b");
  if (a == b) throw PreconditionError("tops path target needs a != b");
  std::vector<Ordering> os{head_then_ascending(m, {a})};
  for (int i = 2; i <= n; ++i) os.push_back(head_then_ascending(m, {b}));
  return Profile(m, std::move(os));
}

ProfilePath tops_path(const Profile& u, AltId a, AltId b) {
  const int m = u.m();
  const int n = u.n();
  if (n < 3) throw PreconditionError("tops path needs n >= 3 (no construction is given for n = 2)");
  const Profile target = tops_path_target(m, n, a, b);
  if (!is_non_unanimous(u)) throw PreconditionError("tops path needs a profile without a unanimous top");

  PathBuilder pb(u, Regime::TopsOnly);
  auto top = [&](int i) { return pb.voter(i).top(); };

  // Neither a nor b is a top: bring a in through a voter whose top is c.
  ChoiceSet tops = tops_set(pb.current());
  if (!tops.contains(a) && !tops.contains(b)) {
    const int i = 1;
    const AltId c = top(i);
    const int j = lowest_voter(pb.current(), [&](int v) { return top(v) != c; });
    pb.reorder(i, pb.voter(i).with_prefix({c, a}));
    pb.reorder(j, pb.voter(j).placed_just_above(a, c));
    pb.pair({c, a, i, j});
  }

  // Exactly one of a, b is a top: bring in the other the same way.
  tops = tops_set(pb.current());
  if (tops.contains(a) != tops.contains(b)) {
    const AltId present = tops.contains(a) ? a : b;
    const AltId missing = tops.contains(a) ? b : a;
    const int i = lowest_voter(pb.current(), [&](int v) { return top(v) == present; });
    const int j = lowest_voter(pb.current(), [&](int v) { return top(v) != present; });
    const AltId c = top(j);
    pb.reorder(j, pb.voter(j).with_prefix({c, missing}));
    pb.reorder(i, pb.voter(i).placed_just_above(missing, c));
    pb.pair({missing, c, i, j});
  }

  // Both present: turn every other top into b, one voter at a time.
  while (true) {
    const int i = lowest_voter(pb.current(), [&](int v) { return top(v) != a && top(v) != b; });
    if (i == 0) break;
    const AltId c = top(i);
    const int j = lowest_voter(pb.current(), [&](int v) { return top(v) == a; });
    pb.reorder(i, pb.voter(i).with_prefix({c, b}));
    pb.reorder(j, pb.voter(j).placed_just_above(b, c));
    pb.pair({b, c, j, i});
  }

  // Tops are exactly {a, b}. Give voter 1 the a.
  if (top(1) == b) {
    const int i = lowest_voter(pb.current(), [&](int v) { return v > 1 && top(v) == a; });
    pb.reorder(1, pb.voter(1).with_prefix({b, a}));
    pb.reorder(i, pb.voter(i).with_prefix({a, b}));
    pb.pair({b, a, 1, i});
  }

  // Every other a becomes c through a b-topped voter, then b through voter 1.
  while (true) {
    const int j = lowest_voter(pb.current(), [&](int v) { return v > 1 && top(v) == a; });
    if (j == 0) break;
    const int i = lowest_voter(pb.current(), [&](int v) { return v > 1 && top(v) == b; });
    const AltId c = lowest_alternative_except(m, {a, b});
    pb.reorder(j, pb.voter(j).with_prefix({a, c}));
    pb.reorder(i, pb.voter(i).placed_just_above(c, a));
    pb.pair({a, c, j, i});
    pb.reorder(1, pb.voter(1).with_prefix({a, b, c}));
    pb.reorder(j, pb.voter(j).with_prefix({c, b}));
    pb.pair({b, c, 1, j});
  }

  for (int i = 1; i <= n; ++i) pb.reorder(i, target.voter(i));
  return std::move(pb).finish();
}

Profile top2_path_target(int m, int n, AltId a, AltId b, AltId c) {
  if (m < 4 || n < 3) throw PreconditionError("top-2 path needs m >= 4 and n >= 3");
  check_alternative(a, m, "a");
  check_alternative(b, m, "b");
  check_alternative(c, m, "c");
  if (a == b || a == c || b == c) throw PreconditionError("top-2 path target needs distinct a, b, c");
  std::vector<Ordering> os{head_then_ascending(m, {c, a})};
  for (int i = 2; i <= n; ++i) os.push_back(head_then_ascending(m, {c, b}));
  return Profile(m, std::move(os));
}

ProfilePath top2_path(const Profile& u, AltId a, AltId b, AltId c) {
  const int m = u.m();
  const int n = u.n();
  const Profile target = top2_path_target(m, n, a, b, c);
  if (!in_domain_d(u)) {
    throw PreconditionError("top-2 path needs a profile in D (at least three alternatives in the top-two sets)");
  }

  PathBuilder pb(u, Regime::Top2Only);
  auto has_c = [&](int i) { return top_k_set(pb.voter(i), 2).contains(c); };
  auto first = [&](int i) { return pb.voter(i).at(1); };
  auto second = [&](int i) { return pb.voter(i).at(2); };
  auto top2 = [&](int i) { return top_k_set(pb.voter(i), 2); };

  // Induction on the number of voters without c in their top two.
  while (true) {
    std::vector<int> with_c;
    std::vector<int> without_c;
    for (int i = 1; i <= n; ++i) {
      if (has_c(i)) {
        pb.reorder(i, pb.voter(i).with_prefix({c}));
        with_c.push_back(i);
      } else {
        without_c.push_back(i);
      }
    }
    if (without_c.empty()) break;

    // Some top-two member x of a voter k without c is second for a voter l with c.
    bool progressed = false;
    for (int k : without_c) {
      for (AltId x : {first(k), second(k)}) {
        auto l = std::find_if(with_c.begin(), with_c.end(), [&](int v) { return second(v) == x; });
        if (l == with_c.end()) continue;
        const AltId y = x == first(k) ? second(k) : first(k);
        pb.reorder(k, pb.voter(k).with_prefix({y, x, c}));
        pb.pair({c, x, *l, k});
        progressed = true;
        break;
      }
      if (progressed) break;
    }
    if (progressed) continue;

    if (with_c.empty()) {
      // Nobody has c in the top two: bring c in through a voter holding a third alternative.
      const int k1 = without_c.front();
      const AltId x = first(k1);
      const AltId y = second(k1);
      const int k2 = lowest_voter(pb.current(), [&](int v) { return !top2(v).subset_of(top2(k1)); });
      const AltId z = top2(k1).contains(first(k2)) ? second(k2) : first(k2);
      const AltId w = z == first(k2) ? second(k2) : first(k2);
      pb.reorder(k2, pb.voter(k2).with_prefix({w, z, c}));
      pb.reorder(k1, pb.voter(k1).with_prefix({x, y, c, z}));
      pb.pair({c, z, k1, k2});
      continue;
    }

    // Two voters with c share their second alternative t.
    int l1 = 0;
    int l2 = 0;
    for (std::size_t q2 = 0; q2 < with_c.size() && l1 == 0; ++q2) {
      for (std::size_t q1 = 0; q1 < q2; ++q1) {
        if (second(with_c[q1]) == second(with_c[q2])) {
          l1 = with_c[q1];
          l2 = with_c[q2];
          break;
        }
      }
    }
    const int k = without_c.front();
    const AltId x = first(k);
    const AltId y = second(k);
    if (l1 != 0) {
      const AltId t = second(l1);
      pb.reorder(l2, pb.voter(l2).with_prefix({c, t, y}));
      pb.reorder(k, pb.voter(k).with_prefix({x, y, t}));
      pb.pair({t, y, l2, k});
      continue;
    }

    if (with_c.size() >= 2) {
      // Distinct seconds s, t: pass t to k through the first voter with c.
      const int first_c = with_c[0];
      const AltId s = second(first_c);
      const AltId t = second(with_c[1]);
      pb.reorder(first_c, pb.voter(first_c).with_prefix({c, s, t, y}));
      pb.reorder(k, pb.voter(k).with_prefix({x, y, t}));
      pb.pair({t, y, first_c, k});
      continue;
    }

    // Exactly one voter l has c in the top two.
    const int l = with_c.front();
    const AltId s = second(l);
    const int k2 = [&] {
      for (int v : without_c) {
        if (top2(v) != top2(k)) return v;
      }
      return 0;
    }();
    if (k2 != 0) {
      const AltId z = top2(k).contains(first(k2)) ? second(k2) : first(k2);
      const AltId w = z == first(k2) ? second(k2) : first(k2);
      pb.reorder(k2, pb.voter(k2).with_prefix({w, z, c}));
      pb.reorder(k, pb.voter(k).with_prefix({x, y, c, z}));
      pb.pair({c, z, k, k2});
    } else {
      pb.reorder(l, pb.voter(l).with_prefix({c, s, y}));
      pb.reorder(k, pb.voter(k).with_prefix({x, y, s}));
      pb.pair({s, y, l, k});
    }
  }

  // Everyone ranks c first: solve the tops problem on X \ {c} and lift it back.
  std::vector<Ordering> reduced_orderings;
  for (const auto& r : pb.current().orderings()) reduced_orderings.push_back(drop_alternative(r, c));
  const Profile reduced(m - 1, std::move(reduced_orderings));
  const ProfilePath sub = tops_path(reduced, reduce_id(a, c), reduce_id(b, c));
  for (const auto& step : sub.steps) {
    const Profile lifted = prepend_everywhere(step.result, c);
    if (const auto* pm = std::get_if<PairMove>(&step.move)) {
      const auto& p = pm->pair;
      pb.pair({lift_id(p.x, c), lift_id(p.y, c), p.i, p.j});
    } else {
      const auto& re = std::get<TopsPreservingReorder>(step.move);
      pb.reorder(re.voter, prepend_alternative(re.ordering, c));
    }
    if (pb.current() != lifted) throw Error("lifted reduced path diverged");
  }

  if (pb.current() != target) throw Error("top-2 path did not reach its target");
  return std::move(pb).finish();
}

PathCheck validate_path(const ProfilePath& path) {
  auto fail = [](std::size_t step, std::string reason) { return PathCheck{false, step, std::move(reason)}; };
  auto subdomain_ok = [&](const Profile& u) {
    if (path.regime == Regime::Top2Only && u.m() < 3) return false;
    return in_regime(path.regime, u);
  };

  if (!subdomain_ok(path.start)) {
    return fail(0, path.regime == Regime::TopsOnly ? "start profile has a unanimous top"
                                                   : "start profile is outside D");
  }
  const Profile* prev = &path.start;
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    const std::size_t index = k + 1;
    const PathStep& step = path.steps[k];
    if (step.result.m() != prev->m() || step.result.n() != prev->n()) {
      return fail(index, "profile dimensions change");
    }

    std::optional<Profile> expected;
    std::string problem;
    std::visit(
        [&](const auto& move) {
          using T = std::decay_t<decltype(move)>;
          if constexpr (std::is_same_v<T, PairMove>) {
            if (!is_valid_pair(*prev, move.pair)) {
              problem = "transposition pair is not valid at the preceding profile";
            } else {
              expected = apply_pair(*prev, move.pair);
            }
          } else {
            const bool tops = std::is_same_v<T, TopsPreservingReorder>;
            if (tops != (path.regime == Regime::TopsOnly)) {
              problem = "reorder kind not allowed in the " + to_string(path.regime) + " regime";
            } else if (move.voter < 1 || move.voter > prev->n()) {
              problem = "reorder names an individual outside 1..n";
            } else if (move.ordering.size() != prev->m()) {
              problem = "reorder ordering has the wrong size";
            } else {
              const Ordering& before = prev->voter(move.voter);
              const int k_stat = tops ? 1 : 2;
              if (top_k_set(before, k_stat) != top_k_set(move.ordering, k_stat)) {
                problem = tops ? "reorder changes individual " + std::to_string(move.voter) + "'s top"
                               : "reorder changes individual " + std::to_string(move.voter) + "'s top-two set";
              } else {
                expected = prev->with_voter(move.voter, move.ordering);
              }
            }
          }
        },
        step.move);
    if (!expected) return fail(index, problem);
    if (*expected != step.result) return fail(index, "recorded profile does not follow from the move");
    if (!subdomain_ok(step.result)) {
      return fail(index, path.regime == Regime::TopsOnly ? "intermediate profile has a unanimous top"
                                                         : "intermediate profile leaves D");
    }
    prev = &step.result;
  }
  return {};
}

}  // namespace balance

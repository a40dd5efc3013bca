#include <doctest.h>

#include "balance/errors.hpp"
#include "balance/paths.hpp"
#include "support.hpp"

using namespace balance;
using testing::prof;

namespace {

// Independent re-check of a path's content: contiguity and the regime's
// statistic, step by step.
bool statistic_preserved(const ProfilePath& path) {
  const int k = path.regime == Regime::TopsOnly ? 1 : 2;
  const Profile* prev = &path.start;
  for (const auto& step : path.steps) {
    if (const auto* re = std::get_if<TopsPreservingReorder>(&step.move)) {
      if (top_k_set(re->ordering, k) != top_k_set(prev->voter(re->voter), k)) return false;
    } else if (const auto* re2 = std::get_if<Top2PreservingReorder>(&step.move)) {
      if (top_k_set(re2->ordering, k) != top_k_set(prev->voter(re2->voter), k)) return false;
    }
    prev = &step.result;
  }
  return true;
}

void check_tops_path(const Profile& u, AltId a, AltId b) {
  const ProfilePath path = tops_path(u, a, b);
  const PathCheck check = validate_path(path);
  CHECK_MESSAGE(check.ok, check.reason);
  CHECK(path.start == u);
  CHECK(path.end() == tops_path_target(u.m(), u.n(), a, b));
  CHECK(path.steps.size() <= step_budget(u.m(), u.n()));
  CHECK(statistic_preserved(path));
  for (const auto& s : path.steps) CHECK(is_non_unanimous(s.result));
}

void check_top2_path(const Profile& u, AltId a, AltId b, AltId c) {
  const ProfilePath path = top2_path(u, a, b, c);
  const PathCheck check = validate_path(path);
  CHECK_MESSAGE(check.ok, check.reason);
  CHECK(path.end() == top2_path_target(u.m(), u.n(), a, b, c));
  CHECK(path.steps.size() <= step_budget(u.m(), u.n()));
  CHECK(statistic_preserved(path));
  for (const auto& s : path.steps) CHECK(in_domain_d(s.result));
}

}  // namespace

TEST_CASE("subdomain predicates") {
  CHECK(is_non_unanimous(prof({"abc", "bac"})));
  CHECK_FALSE(is_non_unanimous(prof({"abc", "acb", "abc"})));
  CHECK(in_domain_d(prof({"abcd", "acbd", "abcd"})));
  CHECK_FALSE(in_domain_d(prof({"abcd", "bacd", "abdc"})));
  CHECK_THROWS_AS(in_domain_d(prof({"ab", "ba"})), PreconditionError);
  CHECK(step_budget(3, 3) == 10 * 3 * 3 * 6);
}

TEST_CASE("canonical targets") {
  CHECK(tops_path_target(3, 3) == prof({"abc", "bac", "bac"}));
  CHECK(tops_path_target(4, 3, 2, 0) == prof({"cabd", "abcd", "abcd"}));
  CHECK(top2_path_target(4, 3) == prof({"cabd", "cbad", "cbad"}));
  CHECK_THROWS_AS(tops_path_target(3, 3, 1, 1), PreconditionError);
  CHECK_THROWS_AS(top2_path_target(3, 3), PreconditionError);
}

TEST_CASE("tops paths from every non-unanimous profile at (3,3)") {
  std::size_t starts = 0;
  for (const auto& u : ProfileSpace(3, 3)) {
    if (!is_non_unanimous(u)) continue;
    ++starts;
    check_tops_path(u, 0, 1);
    check_tops_path(u, 2, 0);
  }
  CHECK(starts == 192);
}

TEST_CASE("tops paths at (3,4) and (4,3)") {
  for (const auto& [m, n] : std::vector<std::pair<int, int>>{{3, 4}, {4, 3}}) {
    for (const auto& u : ProfileSpace(m, n)) {
      if (is_non_unanimous(u)) check_tops_path(u, 0, 1);
    }
  }
}

TEST_CASE("tops paths at a larger size, strided") {
  const ProfileSpace space(5, 3);
  for (std::uint64_t idx = 0; idx < space.size(); idx += 997) {
    const Profile u = space.at(idx);
    if (is_non_unanimous(u)) check_tops_path(u, 3, 1);
  }
}

TEST_CASE("top-2 paths from every D profile at (4,3)") {
  std::size_t starts = 0;
  for (const auto& u : ProfileSpace(4, 3)) {
    if (!in_domain_d(u)) continue;
    ++starts;
    check_top2_path(u, 0, 1, 2);
  }
  CHECK(starts == 13440);
}

TEST_CASE("top-2 paths with other anchors and sizes") {
  const ProfileSpace space44(4, 4);
  for (std::uint64_t idx = 0; idx < space44.size(); idx += 37) {
    const Profile u = space44.at(idx);
    if (in_domain_d(u)) check_top2_path(u, 3, 0, 1);
  }
  const ProfileSpace space53(5, 3);
  for (std::uint64_t idx = 0; idx < space53.size(); idx += 613) {
    const Profile u = space53.at(idx);
    if (in_domain_d(u)) check_top2_path(u, 4, 2, 0);
  }
}

TEST_CASE("builders reject inputs outside their preconditions") {
  CHECK_THROWS_AS(tops_path(prof({"abc", "acb", "abc"})), PreconditionError);
  CHECK_THROWS_AS(tops_path(prof({"abc", "bac"})), PreconditionError);
  CHECK_THROWS_AS(tops_path(prof({"abc", "bac", "cab"}), 0, 0), PreconditionError);
  CHECK_THROWS_AS(top2_path(prof({"abcd", "bacd", "abdc"})), PreconditionError);
  CHECK_THROWS_AS(top2_path(prof({"abc", "bca", "cab"})), PreconditionError);
  CHECK_THROWS_AS(top2_path(prof({"abcd", "cdab", "bcda"}), 0, 1, 1), PreconditionError);
}

TEST_CASE("a start already at the target gives an empty path") {
  const Profile t = tops_path_target(3, 3);
  const ProfilePath path = tops_path(t);
  CHECK(path.steps.empty());
  CHECK(validate_path(path).ok);
}

TEST_CASE("validation catches tampered paths") {
  const Profile u = prof({"cab", "cba", "bca"});
  const ProfilePath good = tops_path(u);
  REQUIRE(good.steps.size() >= 3);
  REQUIRE(validate_path(good).ok);

  SUBCASE("wrong recorded profile") {
    ProfilePath bad = good;
    bad.steps[0].result = bad.steps[1].result;
    const PathCheck c = validate_path(bad);
    CHECK_FALSE(c.ok);
    CHECK(c.failing_step == 1u);
  }
  SUBCASE("missing step") {
    ProfilePath bad = good;
    bad.steps.erase(bad.steps.begin() + 1);
    CHECK_FALSE(validate_path(bad).ok);
  }
  SUBCASE("reorder that moves a top") {
    ProfilePath bad = good;
    const Ordering moved = u.voter(1).with_prefix({1});
    bad.steps.insert(bad.steps.begin(), PathStep{TopsPreservingReorder{1, moved}, u.with_voter(1, moved)});
    const PathCheck c = validate_path(bad);
    CHECK_FALSE(c.ok);
    CHECK(c.failing_step == 1u);
    CHECK(c.reason.find("top") != std::string::npos);
  }
  SUBCASE("move kind outside the regime") {
    ProfilePath bad = good;
    bad.regime = Regime::Top2Only;
    CHECK_FALSE(validate_path(bad).ok);
  }
  SUBCASE("invalid pair") {
    ProfilePath bad = good;
    bad.steps.insert(bad.steps.begin(), PathStep{PairMove{{0, 1, 1, 2}}, u});
    CHECK_FALSE(validate_path(bad).ok);
  }
  SUBCASE("individual out of range") {
    ProfilePath bad = good;
    bad.steps.insert(bad.steps.begin(), PathStep{TopsPreservingReorder{4, u.voter(1)}, u});
    CHECK_FALSE(validate_path(bad).ok);
  }
  SUBCASE("start outside the subdomain") {
    ProfilePath bad{prof({"abc", "acb", "abc"}), {}, Regime::TopsOnly};
    const PathCheck c = validate_path(bad);
    CHECK_FALSE(c.ok);
    CHECK(c.failing_step == 0u);
  }
}

TEST_CASE("no single pair makes a non-unanimous profile unanimous") {
  for (const auto& [m, n] : std::vector<std::pair<int, int>>{{3, 3}, {4, 3}, {3, 4}}) {
    for (const auto& u : ProfileSpace(m, n)) {
      if (!is_non_unanimous(u)) continue;
      for (const auto& p : valid_pairs(u)) CHECK(is_non_unanimous(apply_pair(u, p)));
    }
  }
}

TEST_CASE("no single pair takes a D profile out of D") {
  for (const auto& u : ProfileSpace(4, 3)) {
    if (!in_domain_d(u)) continue;
    for (const auto& p : valid_pairs(u)) CHECK(in_domain_d(apply_pair(u, p)));
  }
}

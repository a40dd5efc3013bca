#include <doctest.h>

#include <algorithm>
#include <limits>
#include <map>

#include "balance/errors.hpp"
#include "balance/prefs.hpp"
#include "support.hpp"

using namespace balance;
using testing::prof;

TEST_CASE("ordering basics") {
  const Ordering r({2, 0, 1});
  CHECK(r.size() == 3);
  CHECK(r.top() == 2);
  CHECK(r.at(3) == 1);
  CHECK(r.rank_of(0) == 2);
  CHECK(r.immediately_above(2, 0));
  CHECK_FALSE(r.immediately_above(0, 2));
  CHECK_FALSE(r.immediately_above(2, 1));
  CHECK(r.swapped(2, 0) == Ordering({0, 2, 1}));

  CHECK_THROWS_AS(Ordering({0, 0, 1}), PreconditionError);
  CHECK_THROWS_AS(Ordering({0, 3, 1}), PreconditionError);
  CHECK_THROWS_AS(r.at(0), PreconditionError);
}

TEST_CASE("ordering rearrangements keep the remaining order") {
  const Ordering r({0, 1, 2, 3, 4});
  CHECK(r.with_prefix({3, 1}) == Ordering({3, 1, 0, 2, 4}));
  CHECK(r.with_prefix({}) == r);
  CHECK(r.placed_just_above(4, 1) == Ordering({0, 4, 1, 2, 3}));
  CHECK(r.placed_just_above(0, 3) == Ordering({1, 2, 0, 3, 4}));
  CHECK(r.placed_just_above(2, 3) == r);
}

TEST_CASE("choice sets") {
  ChoiceSet s{0, 3};
  CHECK(s.size() == 2);
  CHECK(s.contains(3));
  CHECK_FALSE(s.contains(1));
  s.insert(1);
  CHECK(s.members() == std::vector<AltId>{0, 1, 3});
  CHECK(ChoiceSet{1}.subset_of(s));
  CHECK(ChoiceSet::all(4) == ChoiceSet{0, 1, 2, 3});
  CHECK(ChoiceSet{}.empty());
}

TEST_CASE("orderings are enumerated lexicographically") {
  const auto all = enumerate_orderings(3);
  REQUIRE(all.size() == 6);
  CHECK(all[0] == Ordering({0, 1, 2}));
  CHECK(all[1] == Ordering({0, 2, 1}));
  CHECK(all[5] == Ordering({2, 1, 0}));
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK_THROWS_AS(enumerate_orderings(0), Error);
  CHECK_THROWS_AS(enumerate_orderings(11), CapExceeded);
}

TEST_CASE("ordering index agrees with enumeration position") {
  const auto all = enumerate_orderings(5);
  for (std::size_t k = 0; k < all.size(); ++k) CHECK(ordering_index(all[k]) == k);
}

TEST_CASE("profile space size and indexing") {
  CHECK(profile_space_size(3, 3) == 216);
  CHECK(profile_space_size(4, 3) == 13824);
  CHECK(profile_space_size(10, 30) == std::numeric_limits<std::uint64_t>::max());

  const ProfileSpace space(3, 2);
  CHECK(space.size() == 36);
  CHECK(space.at(0) == prof({"abc", "abc"}));
  // Voter 1 is the most significant digit.
  CHECK(space.at(1) == prof({"abc", "acb"}));
  CHECK(space.at(6) == prof({"acb", "abc"}));
  std::uint64_t k = 0;
  for (const auto& u : space) CHECK(space.index_of(u) == k++);
  CHECK(k == 36);

  CHECK_THROWS_AS(ProfileSpace(4, 3, 1000), CapExceeded);
  CHECK_THROWS_AS(space.at(36), PreconditionError);
}

TEST_CASE("profile construction is validated") {
  CHECK_THROWS_AS(Profile(3, {Ordering({0, 1, 2})}), PreconditionError);
  CHECK_THROWS_AS(Profile(3, {Ordering({0, 1, 2}), Ordering({0, 1})}), PreconditionError);
  const Profile u = prof({"abc", "cba"});
  CHECK(u.voter(2).top() == 2);
  CHECK_THROWS_AS(u.voter(3), PreconditionError);
  CHECK(u.with_voter(1, Ordering({1, 0, 2})).voter(1).top() == 1);
}

TEST_CASE("top sets") {
  const Profile u = prof({"abcd", "bcad", "dbca"});
  CHECK(top_k_set(u.voter(1), 2) == ChoiceSet{0, 1});
  CHECK(tops_set(u) == ChoiceSet{0, 1, 3});
}

// Independent count of transposition pairs: quadruples (x, y, i < j) with x
// just above y for i and y just above x for j.
static std::size_t naive_pair_count(const Profile& u) {
  std::size_t count = 0;
  for (int i = 1; i <= u.n(); ++i) {
    for (int j = i + 1; j <= u.n(); ++j) {
      for (AltId x = 0; x < u.m(); ++x) {
        for (AltId y = 0; y < u.m(); ++y) {
          if (x != y && u.voter(i).immediately_above(x, y) && u.voter(j).immediately_above(y, x)) ++count;
        }
      }
    }
  }
  return count;
}

TEST_CASE("valid pairs match a brute-force count and apply as involutions") {
  for (const auto& u : ProfileSpace(3, 3)) {
    const auto pairs = valid_pairs(u);
    CHECK(pairs.size() == naive_pair_count(u));
    for (const auto& p : pairs) {
      REQUIRE(is_valid_pair(u, p));
      CHECK(p.i < p.j);
      const Profile v = apply_pair(u, p);
      CHECK(v != u);
      CHECK(apply_pair(u, p.flipped()) == v);
      CHECK(is_valid_pair(v, p.inverse()));
      CHECK(apply_pair(v, p.inverse()) == u);
      // Only voters i and j change, each by one adjacent swap.
      for (int h = 1; h <= u.n(); ++h) {
        if (h == p.i || h == p.j) continue;
        CHECK(v.voter(h) == u.voter(h));
      }
      CHECK(v.voter(p.i) == u.voter(p.i).swapped(p.x, p.y));
    }
  }
}

TEST_CASE("applying an invalid pair names the failing adjacency") {
  const Profile u = prof({"abc", "abc"});
  try {
    apply_pair(u, {0, 1, 1, 2});
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("individual 2") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_pair(u, {0, 1, 1, 1}), PreconditionError);
  CHECK_THROWS_AS(apply_pair(u, {0, 1, 1, 3}), PreconditionError);
}

TEST_CASE("labels") {
  CHECK(Labels::defaults(3).names() == std::vector<std::string>{"a", "b", "c"});
  CHECK(Labels::defaults(30).name(12) == "a12");
  CHECK(is_valid_label("x1"));
  CHECK_FALSE(is_valid_label("1x"));
  CHECK_FALSE(is_valid_label("X"));
  CHECK_THROWS_AS(Labels({"a", "a"}), PreconditionError);
  const Labels l({"x", "y"});
  CHECK(l.id("y") == 1);
  CHECK_FALSE(l.find("z"));
  CHECK_THROWS_AS(l.id("z"), PreconditionError);
}

TEST_CASE("profile files round-trip") {
  const std::string text = "3 3\nx y z\nx y z\ny z x\n";
  const LabeledProfile lp = parse_profile(text);
  CHECK(lp.labels.names() == std::vector<std::string>{"x", "y", "z"});
  CHECK(lp.profile.voter(3) == Ordering({1, 2, 0}));
  CHECK(format_profile(lp.profile, lp.labels) == text);
  CHECK(parse_profile("3 3\r\nx y z\r\nx y z\r\ny z x\r\n\n\n").profile == lp.profile);

  // Ids follow alphabetical order, not first appearance.
  const LabeledProfile lp2 = parse_profile("2 2\nq p\np q\n");
  CHECK(lp2.labels.names() == std::vector<std::string>{"p", "q"});
  CHECK(lp2.profile.voter(1) == Ordering({1, 0}));
}

TEST_CASE("every (3,2) profile survives format and parse") {
  const Labels labels({"x", "y", "z"});
  for (const auto& u : ProfileSpace(3, 2)) {
    const LabeledProfile lp = parse_profile(format_profile(u, labels));
    CHECK(lp.profile == u);
    CHECK(lp.labels == labels);
  }
}

static std::size_t error_line(const std::string& text) {
  try {
    parse_profile(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST_CASE("profile parse errors carry line numbers") {
  CHECK(error_line("") == 1);
  CHECK(error_line("3\nx y z\n") == 1);
  CHECK(error_line("3 2\nx y z\n") == 3);
  CHECK(error_line("3 2\nx y z\nx y\n") == 3);
  CHECK(error_line("3 2\nx y z\nx y w\n") == 3);
  CHECK(error_line("3 2\nx y z\nx x z\n") == 3);
  CHECK(error_line("3 2\nx y Z\nx y z\n") == 2);
  CHECK(error_line("3 2\nx y z\nx y z\nx y z\n") == 4);
  CHECK(error_line("3 1\nx y z\n") == 1);
}

TEST_CASE("formatting helpers") {
  const Labels l({"x", "y", "z"});
  CHECK(format_choice(ChoiceSet{2, 0}, l) == "x z");
  CHECK(format_choice(ChoiceSet{}, l) == "");
  CHECK(format_pair({0, 1, 1, 2}, l) == "(x,y,1,2)");
  CHECK(format_ordering(Ordering({2, 0, 1}), l) == "z x y");
}

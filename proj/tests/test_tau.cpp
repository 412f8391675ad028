#include <doctest.h>

#include <algorithm>
#include <set>

#include "cubic_euler/tau.hpp"
#include "oracle.hpp"

using namespace cubic_euler;

namespace {

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("admissibility of small prefixes") {
  CHECK(is_admissible({0}));
  CHECK(is_admissible({0, 1, 2, 3}));
  CHECK_FALSE(is_admissible({0, 2}));
  CHECK_FALSE(is_admissible({1}));
  CHECK_FALSE(is_admissible({}));
  // (0,1) has no markers on the orbit 2 -> 1 -> 0, so tau(3) is 2 or 0.
  CHECK_FALSE(is_admissible({0, 1, 1}));
  CHECK_FALSE(is_admissible({0, 1, 1, 1}));
  CHECK(is_admissible({0, 0, 1, 1}));
  CHECK_THROWS_AS(TauPrefix({0, 1, 1}), InadmissibleError);
  CHECK_THROWS_AS(TauPrefix({0, -1}), InadmissibleError);
}

TEST_CASE("order") {
  CHECK(order(TauPrefix{0, 1, 2}, 3) == 3);
  CHECK(order(TauPrefix{0, 0, 1}, 3) == 2);
  CHECK(order(TauPrefix{0}, 1) == 1);
  CHECK_THROWS(order(TauPrefix{0}, 2));
}

TEST_CASE("markers and marked levels") {
  auto md = marker_data(TauPrefix{0, 1, 2, 3});
  CHECK(md.markers.empty());
  CHECK(md.marked_levels == std::set<int>{0});

  md = marker_data(TauPrefix{0, 1, 0});
  CHECK(md.markers == std::set<int>{2});
  CHECK(md.marked_levels == std::set<int>{0, 1});

  md = marker_data(TauPrefix{0, 0, 1, 1});
  CHECK(md.markers == std::set<int>{1, 3});
  CHECK(md.marked_levels == std::set<int>{0, 1});
}

TEST_CASE("extension ladder") {
  auto ladder = extension_ladder(TauPrefix{0, 0, 1});
  CHECK(ladder.levels == std::vector<int>{1, 0});
  CHECK(ladder.marker_levels == std::vector<int>{1});
  CHECK(ladder.k() == 1);
  CHECK_FALSE(ladder.zero_allowed);
  CHECK(as_set(admissible_extensions(TauPrefix{0, 0, 1})) == std::set<int>{2, 1});

  ladder = extension_ladder(TauPrefix{0});
  CHECK(ladder.levels == std::vector<int>{0});
  CHECK(ladder.zero_allowed);
  CHECK(as_set(admissible_extensions(TauPrefix{0})) == std::set<int>{1, 0});

  ladder = extension_ladder(TauPrefix{0, 1, 0});
  CHECK(ladder.levels == std::vector<int>{0});
  CHECK(ladder.k() == 0);
  CHECK(ladder.zero_allowed);

  CHECK(as_set(admissible_extensions(TauPrefix{0, 1, 2})) == std::set<int>{3, 0});
  CHECK(as_set(admissible_extensions(TauPrefix{0, 0})) == std::set<int>{1, 0});
  CHECK(as_set(admissible_extensions(TauPrefix{0, 1})) == std::set<int>{2, 0});
}

TEST_CASE("ladder index lookup") {
  const auto ladder = extension_ladder(TauPrefix{0, 0, 1});
  CHECK(ladder.index_of(2) == 0);
  CHECK(ladder.index_of(1) == 1);
  CHECK(ladder.index_of(0) == -1);
  CHECK(ladder.index_of(3) == -1);
}

TEST_CASE("prefix formatting and stack round trip") {
  const TauPrefix t{0, 1, 0, 1};
  CHECK(t.to_string() == "(0,1,0,1)");
  CHECK(t(3) == 0);
  CHECK(t.at(4) == 1);
  CHECK_THROWS(t.at(5));
  const TauStack s = t.to_stack();
  CHECK(s.values() == t.values());
}

TEST_CASE("stack push/pop restores marked levels") {
  TauStack s(16);
  s.push(0);
  s.push(1);
  s.push(2);
  CHECK_FALSE(s.is_marked_level(1));
  s.push(0);  // 3 becomes a marker; marks 2, 1
  CHECK(s.is_marked_level(2));
  CHECK(s.is_marked_level(1));
  s.pop();
  CHECK_FALSE(s.is_marked_level(2));
  CHECK_FALSE(s.is_marked_level(1));
  CHECK_THROWS_AS(s.push(2), InadmissibleError);
  CHECK(s.length() == 3);
}

// Exhaustive: the ladder rule and the literal (A)-(E) rules agree on every
// one-step extension of every admissible prefix up to length 12.
TEST_CASE("ladder agrees with rules A-E up to length 12") {
  std::size_t prefixes = 0;
  oracle::for_each_admissible(12, [&](const oracle::Seq& t) {
    ++prefixes;
    const std::vector<int> values(t.begin() + 1, t.end());
    REQUIRE(is_admissible(std::span<const int>(values)));
    const TauPrefix prefix(values);
    const std::set<int> fast = as_set(admissible_extensions(prefix));
    std::set<int> slow;
    oracle::Seq ext = t;
    for (int v = 0; v <= t.back() + 1; ++v) {
      ext.push_back(v);
      if (oracle::admissible(ext)) slow.insert(v);
      ext.pop_back();
    }
    REQUIRE_MESSAGE(fast == slow, prefix.to_string());

    const MarkerData md = marker_data(prefix);
    REQUIRE(md.markers == oracle::markers(t));
    REQUIRE(md.marked_levels == oracle::marked_levels(t));
    for (int n = 1; n < static_cast<int>(t.size()); ++n) REQUIRE(order(prefix, n) == oracle::ord(t, n));
  });
  CHECK(prefixes > 1000);
}

TEST_CASE("properties: marked set closed under tau, ord decreases by one") {
  oracle::for_each_admissible(10, [&](const oracle::Seq& t) {
    const TauPrefix prefix(std::vector<int>(t.begin() + 1, t.end()));
    const MarkerData md = marker_data(prefix);
    REQUIRE(md.marked_levels.contains(0));
    for (int l : md.marked_levels) {
      if (l > 0) REQUIRE(md.marked_levels.contains(t[l]));
    }
    for (int n = 1; n < static_cast<int>(t.size()); ++n) {
      REQUIRE(t[n] < n);
      if (t[n] > 0) REQUIRE(order(prefix, n) == order(prefix, t[n]) + 1);
    }
    const ExtensionLadder ladder = extension_ladder(prefix);
    REQUIRE(ladder.levels.front() == t.back());
    REQUIRE(std::is_sorted(ladder.levels.rbegin(), ladder.levels.rend()));
    REQUIRE(std::adjacent_find(ladder.levels.begin(), ladder.levels.end()) == ladder.levels.end());
    REQUIRE(ladder.zero_allowed == (ladder.k() == 0 || ladder.levels.back() > 0));
    // Extending by tau(N) + 1 is always admissible.
    REQUIRE(ladder.index_of(t.back() + 1) == 0);
  });
}

#include <doctest.h>

#include <algorithm>
#include <mutex>
#include <set>

#include "cubic_euler/periodic.hpp"
#include "oracle.hpp"

using namespace cubic_euler;

namespace {

std::set<std::vector<int>> collect(int p, unsigned workers = 1) {
  std::set<std::vector<int>> out;
  std::mutex m;
  enumerate_periodic(p, workers, [&](const PeriodicTau& t, unsigned) {
    std::lock_guard lock(m);
    REQUIRE(t.period() == p);
    REQUIRE(out.insert(t.prefix().values()).second);
  });
  return out;
}

}  // namespace

TEST_CASE("periodic tau construction") {
  const PeriodicTau t(TauPrefix{0, 1, 0}, 3);
  CHECK(t.defining_length() == 3);
  CHECK(t(4) == 1);
  CHECK(t(10) == 7);
  CHECK(t.values(5) == std::vector<int>{0, 1, 0, 1, 2});
  CHECK(t.to_string() == "(0,1,0) p=3");
  // (0,0,0) already reaches the tail at n = 2, which is not minimal for p = 2
  // but is for p = 3.
  CHECK_THROWS(PeriodicTau(TauPrefix{0, 0, 0}, 2));
  CHECK_THROWS(PeriodicTau(TauPrefix{0, 1, 2}, 3));
  CHECK_NOTHROW(PeriodicTau(TauPrefix{0, 0, 0}, 3));
}

TEST_CASE("small periods") {
  CHECK(collect(1) == std::set<std::vector<int>>{{0}});
  CHECK(collect(2) == std::set<std::vector<int>>{{0, 0}});
  CHECK(collect(3) == std::set<std::vector<int>>{{0, 0, 0}, {0, 1, 0}, {0, 0, 1, 1}});

  const EnumStats s1 = enumerate_periodic(1, [](const PeriodicTau&) {});
  CHECK(s1.first_length() == 1);
  CHECK(s1.last_length() == 1);
  CHECK(s1.total_periodic() == 1);
}

TEST_CASE("pruned enumeration matches brute force for p <= 7") {
  for (int p = 1; p <= 7; ++p) {
    CAPTURE(p);
    CHECK(collect(p) == oracle::periodic_taus(p));
  }
}

TEST_CASE("period 10 per-length statistics") {
  const EnumStats s = enumerate_periodic(10, [](const PeriodicTau&) {});
  const std::vector<LengthCounts> expected{
      {205, 1, 435}, {201, 242, 506}, {139, 567, 479}, {57, 780, 279}, {26, 497, 134},
      {12, 251, 61}, {6, 122, 21},    {2, 43, 6},      {1, 13, 0}};
  REQUIRE(s.last_length() == 18);
  for (int len = 10; len <= 18; ++len) {
    CAPTURE(len);
    CHECK(s.at(len) == expected[static_cast<std::size_t>(len - 10)]);
  }
  CHECK(s.total_periodic() == 649);
}

TEST_CASE("worker count does not change results") {
  for (int p : {6, 9, 11}) {
    CAPTURE(p);
    const auto serial = collect(p, 1);
    CHECK(collect(p, 4) == serial);
    EnumStats a = enumerate_periodic(p, 1, [](const PeriodicTau&, unsigned) {});
    EnumStats b = enumerate_periodic(p, 3, [](const PeriodicTau&, unsigned) {});
    CHECK(a == b);
  }
}

TEST_CASE("enumerator runs in slices and restores") {
  const int p = 9;
  const EnumStats whole = enumerate_periodic(p, [](const PeriodicTau&) {});

  PeriodicEnumerator first(p);
  std::size_t emitted = 0;
  auto sink = [&](const PeriodicTau&, unsigned) { ++emitted; };
  first.initialize(sink);
  CHECK(first.pending() == whole.at(p).cont);
  CHECK(first.run(5, 1, sink) == 5);
  CHECK(first.run(7, 2, sink) == 7);

  PeriodicEnumerator second(p);
  second.restore(first.stats(), first.remaining());
  CHECK(second.pending() == first.pending());
  while (!second.done()) second.run(3, 2, sink);
  CHECK(second.stats() == whole);
  CHECK(emitted == whole.total_periodic());
}

TEST_CASE("frontier storage") {
  Frontier f(3);
  f.push(TauPrefix{0, 1, 0});
  f.push(TauPrefix{0, 0, 1});
  CHECK(f.size() == 2);
  CHECK(f.item(1) == TauPrefix{0, 0, 1});
  CHECK(f.suffix(1).size() == 1);
  CHECK(f.suffix(1).item(0) == TauPrefix{0, 0, 1});
  CHECK_THROWS(f.push(TauPrefix{0, 1}));
}

TEST_CASE("continuation bound") {
  CHECK_FALSE(continuation_bound_check(TauPrefix{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, 10));
  CHECK_FALSE(continuation_bound_check(TauPrefix{0, 0, 1, 2, 3}, 5));
  // Marker 4 with tau(4) = 3 = p - 1.
  CHECK(continuation_bound_check(TauPrefix{0, 1, 2, 3, 0}, 4));
  CHECK(max_marker_level(TauPrefix{0, 1, 2, 3, 0}.to_stack()) == 3);
  CHECK(max_marker_level(TauPrefix{0, 1, 2}.to_stack()) == -1);
}

TEST_CASE("exception families") {
  SUBCASE("named examples for p = 5") {
    const auto fam = exception_families(5);
    const auto has = [&](const TauPrefix& t) {
      return std::any_of(fam.begin(), fam.end(), [&](const auto& f) { return f.tau.prefix() == t; });
    };
    CHECK(has(TauPrefix{0, 1, 2, 0, 1, 2, 3, 3}));
    CHECK(has(TauPrefix{0, 1, 0, 1, 2, 2, 2}));
  }
  SUBCASE("unique tau off the tail at 2p-3") {
    for (int p = 3; p <= 9; ++p) {
      CAPTURE(p);
      const auto taus = oracle::periodic_taus(p);
      const auto late = std::count_if(taus.begin(), taus.end(),
                                      [&](const auto& v) { return static_cast<int>(v.size()) == 2 * p - 2; });
      CHECK(late == 1);
    }
  }
  SUBCASE("enumeration exceptions are exactly the families, p = 5..10") {
    for (int p = 5; p <= 10; ++p) {
      CAPTURE(p);
      std::set<std::vector<int>> expected;
      for (const auto& f : exception_families(p)) expected.insert(f.tau.prefix().values());
      std::set<std::vector<int>> found;
      ExceptionAudit audit(p);
      enumerate_periodic(p, [&](const PeriodicTau& t) {
        audit.observe(t);
        if (t.defining_length() > 2 * p - 5) found.insert(t.prefix().values());
      });
      CHECK(found == expected);
      CHECK_MESSAGE(audit.passed(), audit.diagnostic());
    }
  }
  SUBCASE("audit flags strangers") {
    ExceptionAudit audit(6);
    // Period 6 with a late tail that is not in any family would be counted;
    // an ordinary early-tail tau is ignored.
    CHECK_FALSE(audit.observe(PeriodicTau(TauPrefix{0, 0, 0, 0, 0, 0}, 6)));
    CHECK_FALSE(audit.passed());
  }
}

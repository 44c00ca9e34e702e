#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "qhc/topology.hpp"

using namespace qhc;

namespace {

PointSet named(const FiniteSpace& sp, std::initializer_list<const char*> names) {
  PointSet s = 0;
  for (const char* n : names) s |= 1u << sp.point_index(n);
  return s;
}

// Independent oracle: the interior of S is the union of all up-sets inside S.
PointSet interior_oracle(const FiniteSpace& sp, PointSet s) {
  PointSet out = 0;
  for (PointSet u = 0; u <= sp.all(); ++u) {
    if ((u & ~s) != 0) continue;
    bool up_closed = true;
    for (int x = 0; x < sp.size() && up_closed; ++x)
      if ((u >> x) & 1u)
        if ((sp.up(x) & ~u) != 0) up_closed = false;
    if (up_closed) out |= u;
  }
  return out;
}

}  // namespace

TEST_CASE("interior on the fork") {
  FiniteSpace i3 = spaces::i3();
  CHECK(i3.interior(named(i3, {"l"})) == 0);
  CHECK(i3.interior(i3.all()) == i3.all());
  CHECK(i3.interior(0) == 0);
  CHECK(i3.interior(named(i3, {"l", "m"})) == named(i3, {"l", "m"}));

  for (PointSet s = 0; s <= i3.all(); ++s)
    CHECK(i3.interior(s) == interior_oracle(i3, s));
}

TEST_CASE("closure is the down-closure") {
  FiniteSpace i3 = spaces::i3();
  CHECK(i3.closure(named(i3, {"l", "m"})) == i3.all());
  CHECK(i3.closure(0) == 0);

  FiniteSpace v3 = spaces::v3();
  CHECK(v3.closure(named(v3, {"t1"})) == named(v3, {"t1", "b"}));

  // Cl S is the complement of the interior of the complement.
  for (PointSet s = 0; s <= i3.all(); ++s)
    CHECK(i3.closure(s) == (i3.all() & ~i3.interior(i3.all() & ~s)));
}

TEST_CASE("regular open tests") {
  FiniteSpace v3 = spaces::v3();
  CHECK(v3.is_regular_open(named(v3, {"t1"})));
  FiniteSpace i3 = spaces::i3();
  CHECK_FALSE(i3.is_regular_open(named(i3, {"l", "m"})));
  CHECK(i3.is_regular_open(0));
  CHECK(i3.is_regular_open(i3.all()));
  CHECK(v3.is_regular_open(0));
  CHECK(v3.is_regular_open(v3.all()));
}

TEST_CASE("interior and closure laws") {
  for (const FiniteSpace& sp : enumerate_spaces(3)) {
    for (PointSet s = 0; s <= sp.all(); ++s) {
      PointSet i = sp.interior(s);
      CHECK((i & ~s) == 0);                      // deflationary
      CHECK(sp.interior(i) == i);                // idempotent
      CHECK(sp.interior(sp.all() & ~s) == (sp.all() & ~sp.closure(s)));
      for (PointSet t = s; t <= sp.all(); ++t)
        if ((s & ~t) == 0) CHECK((sp.interior(s) & ~sp.interior(t)) == 0);  // monotone
    }
  }
}

TEST_CASE("interior commutes with arbitrary intersections of opens") {
  // The Alexandrov law; it justifies reporting exhaustion for principles
  // whose refutation needs a non-Alexandrov interior.
  for (const FiniteSpace& sp : enumerate_spaces(3)) {
    const auto& opens = sp.opens();
    for (PointSet a : opens)
      for (PointSet b : opens) CHECK(sp.is_open(a & b));
    for (PointSet s = 0; s <= sp.all(); ++s)
      for (PointSet t = 0; t <= sp.all(); ++t)
        CHECK(sp.interior(s & t) == (sp.interior(s) & sp.interior(t)));
  }
}

TEST_CASE("regular opens form a boolean algebra") {
  for (const FiniteSpace& sp : enumerate_spaces(3)) {
    auto ro = sp.regular_opens();
    std::set<PointSet> ros(ro.begin(), ro.end());
    for (PointSet a : ro) {
      CHECK(ros.count(sp.interior(sp.all() & ~a)));  // complement: Int of complement
      for (PointSet b : ro) {
        CHECK(ros.count(a & b));                                  // meet
        CHECK(ros.count(sp.interior(sp.closure(a | b))));         // join
      }
    }
  }
}

TEST_CASE("space enumeration counts and canonical order") {
  CHECK(enumerate_spaces(1).size() == 1);
  CHECK(enumerate_spaces(2).size() == 3);   // point; antichain-2; chain-2
  CHECK(enumerate_spaces(3).size() == 8);   // 1 + 2 + 5
  CHECK(enumerate_spaces(4).size() == 24);  // 1 + 2 + 5 + 16

  auto sps = enumerate_spaces(3);
  // Deterministic order: repeated enumeration yields identical keys.
  auto again = enumerate_spaces(3);
  REQUIRE(sps.size() == again.size());
  for (size_t i = 0; i < sps.size(); ++i)
    CHECK(sps[i].canonical_key() == again[i].canonical_key());
  // Sorted by size, then canonical key.
  for (size_t i = 0; i + 1 < sps.size(); ++i) {
    CHECK(sps[i].size() <= sps[i + 1].size());
    if (sps[i].size() == sps[i + 1].size())
      CHECK(sps[i].canonical_key() < sps[i + 1].canonical_key());
  }
}

TEST_CASE("isomorphism detection") {
  FiniteSpace a = FiniteSpace::from_relation_named({"x", "y", "z"}, {{"x", "y"}, {"z", "y"}});
  CHECK(a.isomorphic_to(spaces::i3()));
  CHECK_FALSE(a.isomorphic_to(spaces::v3()));
  CHECK_FALSE(spaces::chain(3).isomorphic_to(spaces::antichain(3)));
}

TEST_CASE("relation closure and validation on load") {
  FiniteSpace c = FiniteSpace::from_relation_named({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  CHECK(c.le(c.point_index("a"), c.point_index("c")));  // transitivity applied
  CHECK_THROWS(FiniteSpace::from_relation_named({"a", "b"}, {{"a", "b"}, {"b", "a"}}));
}

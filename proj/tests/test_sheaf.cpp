#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "qhc/sheaf.hpp"
#include "qhc/sheaf_models.hpp"

using namespace qhc;

namespace {

SpacePtr shared(FiniteSpace sp) { return std::make_shared<const FiniteSpace>(std::move(sp)); }

PointSet named(const FiniteSpace& sp, std::initializer_list<const char*> names) {
  PointSet s = 0;
  for (const char* n : names) s |= 1u << sp.point_index(n);
  return s;
}

// Independent brute-force oracle: enumerate every assignment in the full
// cartesian product of stalks over U and keep the compatible ones. Slower
// than the library's fiber-directed search and independent of it.
std::vector<std::vector<int32_t>> sections_oracle(const StalkSheaf& f, PointSet u) {
  const FiniteSpace& X = f.space();
  std::vector<int> pts;
  for (int x = 0; x < X.size(); ++x)
    if ((u >> x) & 1u) pts.push_back(x);
  std::vector<std::vector<int32_t>> out;
  std::vector<int32_t> pick(pts.size(), 0);
  for (bool more = true; more;) {
    bool total = true, compatible = true;
    for (size_t i = 0; i < pts.size() && total; ++i)
      if (f.stalk_size(pts[i]) == 0) total = false;
    if (total) {
      for (size_t i = 0; i < pts.size() && compatible; ++i)
        for (size_t j = 0; j < pts.size() && compatible; ++j) {
          if (i == j || !X.le(pts[i], pts[j])) continue;
          if (f.restrict_elem(pts[i], pts[j], pick[i]) != static_cast<uint32_t>(pick[j]))
            compatible = false;
        }
      if (compatible) {
        std::vector<int32_t> sec(X.size(), -1);
        for (size_t i = 0; i < pts.size(); ++i) sec[pts[i]] = pick[i];
        out.push_back(sec);
      }
    }
    more = false;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (f.stalk_size(pts[i]) == 0) break;
      if (++pick[i] < static_cast<int32_t>(f.stalk_size(pts[i]))) {
        more = true;
        break;
      }
      pick[i] = 0;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// The fork with the two-branch coproduct from the refutation examples.
StalkSheaf fork_coproduct(const SpacePtr& i3) {
  StalkSheaf left = characteristic(i3, named(*i3, {"l", "m"}));
  StalkSheaf right = characteristic(i3, named(*i3, {"r", "m"}));
  return coproduct(left, right);
}

}  // namespace

TEST_CASE("characteristic sheaves and sections") {
  SpacePtr i3 = shared(spaces::i3());
  PointSet u = named(*i3, {"l", "m"});
  StalkSheaf chi = characteristic(i3, u);
  chi.validate();
  CHECK(support(chi) == u);
  CHECK(sections(chi, u).size() == 1);
  CHECK(sections(chi, i3->all()).size() == 0);
  CHECK_THROWS_AS(characteristic(i3, named(*i3, {"l"})), SheafError);  // not open
  CHECK_THROWS_AS(sections(chi, named(*i3, {"l"})), SheafError);
}

TEST_CASE("the fork coproduct has full support but no global section") {
  SpacePtr i3 = shared(spaces::i3());
  StalkSheaf f = fork_coproduct(i3);
  f.validate();
  CHECK(support(f) == i3->all());
  CHECK(f.stalk_size(i3->point_index("m")) == 2);
  CHECK(sections(f, i3->all()).empty());
  CHECK_FALSE(has_global_section(f));
  CHECK(sections(f, named(*i3, {"l", "m"})).size() == 1);
  CHECK(sections(f, named(*i3, {"m"})).size() == 2);
}

TEST_CASE("sections agree with the brute-force oracle") {
  SpacePtr i3 = shared(spaces::i3());
  SpacePtr b4 = shared(spaces::b4());
  std::vector<StalkSheaf> samples;
  samples.push_back(fork_coproduct(i3));
  samples.push_back(characteristic(i3, named(*i3, {"m"})));
  samples.push_back(product(fork_coproduct(i3), fork_coproduct(i3)));
  samples.push_back(hom(fork_coproduct(i3), fork_coproduct(i3)));
  samples.push_back(characteristic(b4, b4->all()));
  samples.push_back(coproduct(characteristic(b4, named(*b4, {"l", "m"})),
                              characteristic(b4, named(*b4, {"r", "m"}))));
  for (const auto& f : samples) {
    const FiniteSpace& X = f.space();
    for (PointSet u : X.opens()) CHECK(sections(f, u) == sections_oracle(f, u));
  }
}

TEST_CASE("product and coproduct") {
  SpacePtr i3 = shared(spaces::i3());
  StalkSheaf left = characteristic(i3, named(*i3, {"l", "m"}));
  StalkSheaf right = characteristic(i3, named(*i3, {"r", "m"}));
  StalkSheaf f = fork_coproduct(i3);

  CHECK(coproduct(left, right).stalk_size(i3->point_index("m")) == 2);
  CHECK(isomorphic(product(f, characteristic(i3, i3->all())), f));
  CHECK(isomorphic(product(f, empty_sheaf(i3)), empty_sheaf(i3)));
  CHECK(support(coproduct(left, right)) == (support(left) | support(right)));
  CHECK(support(product(left, right)) == (support(left) & support(right)));
}

TEST_CASE("hom of characteristic sheaves is the characteristic of the implication") {
  SpacePtr i3 = shared(spaces::i3());
  PointSet u = named(*i3, {"l", "m"}), v = named(*i3, {"r", "m"});
  StalkSheaf h = hom(characteristic(i3, u), characteristic(i3, v));
  PointSet w = i3->interior((i3->all() & ~u) | v);
  CHECK(w == named(*i3, {"r", "m"}));
  CHECK(isomorphic(h, characteristic(i3, w)));

  // Every pair of opens, on several spaces.
  for (FiniteSpace raw : {spaces::i3(), spaces::v3(), spaces::b4(), spaces::chain(3)}) {
    SpacePtr sp = shared(std::move(raw));
    for (PointSet a : sp->opens())
      for (PointSet b : sp->opens()) {
        StalkSheaf hh = hom(characteristic(sp, a), characteristic(sp, b));
        PointSet ww = sp->interior((sp->all() & ~a) | b);
        CAPTURE(sp->set_to_string(a));
        CAPTURE(sp->set_to_string(b));
        CHECK(isomorphic(hh, characteristic(sp, ww)));
      }
  }

  CHECK(isomorphic(hom(empty_sheaf(i3), empty_sheaf(i3)), characteristic(i3, i3->all())));
}

TEST_CASE("hom can lose support strictly inside the interior bound") {
  SpacePtr b4 = shared(spaces::b4());
  StalkSheaf f = characteristic(b4, named(*b4, {"l", "m", "r"}));
  StalkSheaf g = coproduct(characteristic(b4, named(*b4, {"l", "m"})),
                           characteristic(b4, named(*b4, {"r", "m"})));
  StalkSheaf h = hom(f, g);
  CHECK(h.stalk_size(b4->point_index("b")) == 0);
  CHECK(support(h) == named(*b4, {"l", "m", "r"}));
  PointSet bound = b4->interior((b4->all() & ~support(f)) | support(g));
  CHECK(bound == b4->all());
  CHECK(support(h) != bound);
  CHECK((support(h) & ~bound) == 0);
}

TEST_CASE("support laws") {
  SpacePtr i3 = shared(spaces::i3());
  std::vector<StalkSheaf> pool = {
      fork_coproduct(i3), characteristic(i3, named(*i3, {"m"})),
      characteristic(i3, i3->all()), empty_sheaf(i3),
      product(fork_coproduct(i3), fork_coproduct(i3))};
  for (const auto& f : pool)
    for (const auto& g : pool) {
      CHECK(i3->is_open(support(f)));
      CHECK(support(coproduct(f, g)) == (support(f) | support(g)));
      CHECK(support(product(f, g)) == (support(f) & support(g)));
      PointSet bound = i3->interior((i3->all() & ~support(f)) | support(g));
      CHECK((support(hom(f, g)) & ~bound) == 0);
    }
}

TEST_CASE("sheafification and the presheaf of sections") {
  SpacePtr i3 = shared(spaces::i3());
  PointSet u = named(*i3, {"l", "m"});
  StalkSheaf chi = characteristic(i3, u);

  OpenPresheaf p = sections_of(chi);
  p.validate();
  for (PointSet v : i3->opens())
    CHECK(p.size_at(v) == (v & ~u ? 0u : 1u));

  SUBCASE("sheafify recovers the sheaf") {
    StalkSheaf f = fork_coproduct(i3);
    CHECK(isomorphic(sheafify(sections_of(f)), f));
    for (int x = 0; x < i3->size(); ++x)
      CHECK(sheafify(sections_of(f)).stalk_size(x) ==
            static_cast<uint32_t>(sections(f, i3->up(x)).size()));
    CHECK(is_sheaf(sections_of(f)));
  }

  SUBCASE("presheaf coproduct differs from the sheaf coproduct before sheafifying") {
    OpenPresheaf pl = sections_of(characteristic(i3, named(*i3, {"l", "m"})));
    OpenPresheaf pr = sections_of(characteristic(i3, named(*i3, {"r", "m"})));
    OpenPresheaf pc = presheaf_coproduct(pl, pr);
    pc.validate();
    CHECK(pc.size_at(i3->all()) == 0);  // no section over the whole fork
    CHECK(pc.size_at(0) == 2);          // objectwise: the empty open doubles
    CHECK_FALSE(is_sheaf(pc));
    StalkSheaf sh = sheafify(pc);
    CHECK(isomorphic(sh, fork_coproduct(i3)));
    // Same (empty) global sections, different intermediate structure.
    CHECK(sections(sh, i3->all()).empty());
    CHECK(sections_of(sh).size_at(named(*i3, {"m"})) == 2);
    CHECK(pc.size_at(named(*i3, {"m"})) == 2);
  }

  SUBCASE("hom of characteristic presheaves") {
    PointSet v = named(*i3, {"r", "m"});
    OpenPresheaf hu = presheaf_hom(presheaf_characteristic(i3, u),
                                   presheaf_characteristic(i3, v));
    PointSet w = i3->interior((i3->all() & ~u) | v);
    CHECK(presheaf_isomorphic(hu, presheaf_characteristic(i3, w)));
  }
}

TEST_CASE("sheaf isomorphism is sensitive to the restriction structure") {
  SpacePtr c2 = shared(spaces::chain(2));
  // Two sheaves with stalks {2,2}: identity maps vs a constant map.
  std::map<std::pair<int, int>, std::vector<uint32_t>> ident{{{0, 1}, {0, 1}}};
  std::map<std::pair<int, int>, std::vector<uint32_t>> konst{{{0, 1}, {0, 0}}};
  StalkSheaf a(c2, {2, 2}, ident);
  StalkSheaf b(c2, {2, 2}, konst);
  CHECK(isomorphic(a, a));
  CHECK_FALSE(isomorphic(a, b));
  std::map<std::pair<int, int>, std::vector<uint32_t>> swapped{{{0, 1}, {1, 0}}};
  StalkSheaf c(c2, {2, 2}, swapped);
  CHECK(isomorphic(a, c));  // relabeling the top stalk
}

TEST_CASE("functoriality validation") {
  SpacePtr c3 = shared(spaces::chain(3));
  std::map<std::pair<int, int>, std::vector<uint32_t>> maps{
      {{0, 1}, {0}}, {{1, 2}, {0}}, {{0, 2}, {0}}};
  CHECK_NOTHROW(StalkSheaf(c3, {1, 1, 1}, maps).validate());

  std::map<std::pair<int, int>, std::vector<uint32_t>> bad{
      {{0, 1}, {0}}, {{1, 2}, {0, 1}}, {{0, 2}, {1}}};
  StalkSheaf b(c3, {1, 2, 2}, bad);
  CHECK_THROWS_AS(b.validate(), SheafError);
}

TEST_CASE("sheaf model evaluation") {
  SpacePtr i3 = shared(spaces::i3());
  Signature sig({{"a", Sort::Problem, 0}, {"p", Sort::Proposition, 0}});

  SheafModel m;
  m.space = i3;
  m.domain = {"d"};
  m.signature = sig;
  m.prob_atoms["a"][{}] = fork_coproduct(i3);
  m.prop_atoms["p"][{}] = named(*i3, {"l"});
  m.validate();

  SUBCASE("support refutes the top rule") {
    CHECK(valid_sheaf(m, parse("?a", sig)));
    CHECK_FALSE(valid_sheaf(m, parse("a", sig)));
  }

  SUBCASE("unit law is valid") {
    CHECK(valid_sheaf(m, parse("a -> !?a", sig)));
  }

  SUBCASE("bang of a set with empty interior is the empty sheaf") {
    SheafValue v = eval_sheaf(m, parse("!p", sig));
    CHECK(m.algebra().support(v.sheaf) == 0);
    CHECK(valid_sheaf(m, parse("?!p -> p", sig)));
  }

  SUBCASE("validity by morphism search agrees with materialized sections") {
    for (const char* text :
         {"a -> a", "a -> a \\/ a", "a /\\ a -> a", "bot -> a", "a -> (a -> a /\\ a)",
          "(a -> bot) -> (a -> bot)", "!p -> a \\/ !p"}) {
      CAPTURE(text);
      Formula f = parse(text, sig);
      bool by_search = valid_sheaf(m, f);
      bool by_sections = has_global_section(eval_sheaf_problem(m, f));
      CHECK(by_search == by_sections);
    }
  }
}

TEST_CASE("presheaf model evaluation covers the implication fragment") {
  SpacePtr i3 = shared(spaces::i3());
  Signature sig({{"a", Sort::Problem, 0}, {"p", Sort::Proposition, 0}});

  PresheafModel m;
  m.space = i3;
  m.domain = {"d"};
  m.signature = sig;
  OpenPresheaf pa = presheaf_coproduct(
      presheaf_characteristic(i3, named(*i3, {"l", "m"})),
      presheaf_characteristic(i3, named(*i3, {"r", "m"})));
  m.prob_atoms["a"][{}] = pa;
  m.prop_atoms["p"][{}] = named(*i3, {"l"});

  CHECK(valid_presheaf(m, parse("?a", sig)));       // support is everything
  CHECK_FALSE(valid_presheaf(m, parse("a", sig)));  // no global section
  CHECK(valid_presheaf(m, parse("a -> !?a", sig)));
  CHECK(valid_presheaf(m, parse("?!p -> p", sig)));
  CHECK(valid_presheaf(m, parse("a /\\ a -> a", sig)));
  CHECK_THROWS_AS(valid_presheaf(m, parse("a \\/ a", sig)), FragmentError);
}

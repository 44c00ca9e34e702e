#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhc/principles.hpp"

using namespace qhc;

namespace {
SpacePtr shared(FiniteSpace sp) { return std::make_shared<const FiniteSpace>(std::move(sp)); }

PointSet named(const FiniteSpace& sp, std::initializer_list<const char*> names) {
  PointSet s = 0;
  for (const char* n : names) s |= 1u << sp.point_index(n);
  return s;
}
}  // namespace

TEST_CASE("catalog names, kinds and the status table") {
  CHECK(principle_catalog().size() == 22);
  for (const char* name :
       {"top-rule", "bot-rule", "quest", "forall", "or", "exists", "bang", "quest-star",
        "forall-star", "or-star", "exists-star", "stability", "no-ignorabimus", "edr",
        "expr-1", "expr-2", "expr-3", "expr-4", "expr-1p", "expr-2p", "expr-3p",
        "expr-4p"}) {
    CAPTURE(name);
    CHECK(find_principle(name) != nullptr);
  }
  CHECK(find_principle("top-rule")->kind == PrincipleKind::Rule);
  CHECK(find_principle("edr")->kind == PrincipleKind::Rule);
  CHECK(find_principle("quest")->kind == PrincipleKind::Law);
  CHECK(!find_principle("edr")->notes.empty());  // flagged as reconstructed

  CHECK(status_table().size() == 66);

  SUBCASE("expected lookups") {
    const StatusEntry* a = lookup_status("top-rule", ModelClass::Sheaf);
    REQUIRE(a);
    CHECK(a->expected == Expectation::FailsSomewhere);
    CHECK(a->refutability == Refutability::FiniteWitness);

    const StatusEntry* b = lookup_status("edr", ModelClass::Sheaf);
    REQUIRE(b);
    CHECK(b->expected == Expectation::HoldsInAll);

    const StatusEntry* c = lookup_status("forall-star", ModelClass::ET);
    REQUIRE(c);
    CHECK(c->expected == Expectation::FailsSomewhere);
    CHECK(c->refutability == Refutability::RequiresInfinite);
    CHECK(!c->note.empty());

    const StatusEntry* d = lookup_status("forall", ModelClass::TK);
    REQUIRE(d);
    CHECK(d->refutability == Refutability::RequiresInfinite);

    // The solubility-identity side.
    CHECK(lookup_status("quest", ModelClass::ET)->expected == Expectation::HoldsInAll);
    CHECK(lookup_status("quest", ModelClass::TK)->expected == Expectation::HoldsInAll);
    CHECK(lookup_status("quest", ModelClass::Sheaf)->expected ==
          Expectation::FailsSomewhere);
    CHECK(lookup_status("stability", ModelClass::ET)->expected ==
          Expectation::FailsSomewhere);
    CHECK(lookup_status("stability", ModelClass::TK)->expected == Expectation::HoldsInAll);
  }
}

TEST_CASE("checking principles on given models") {
  InstanceGen gen = InstanceGen::standard();
  Signature sig = corpus_signature();

  SUBCASE("edr counterinstance in a double-negation model") {
    SpacePtr v3 = shared(spaces::v3());
    TKModel m;
    m.space = v3;
    m.domain = {"d0", "d1"};
    m.signature = sig;
    m.prob_atoms["a"][{0}] = named(*v3, {"t1"});
    m.prob_atoms["a"][{1}] = named(*v3, {"t2"});
    m.prop_atoms["p"][{0}] = 0;
    m.prop_atoms["p"][{1}] = 0;
    CheckResult r = check_principle(m, *find_principle("edr"), gen);
    CHECK_FALSE(r.holds);
    REQUIRE(r.premises.size() == 1);

    // The same model validates every quest-principle instance.
    CHECK(check_principle(m, *find_principle("quest"), gen, true).holds);
  }

  SUBCASE("exists-principle counterinstance in an interior model") {
    SpacePtr i3 = shared(spaces::i3());
    ETModel m;
    m.space = i3;
    m.domain = {"d0", "d1"};
    m.signature = sig;
    m.prob_atoms["a"][{0}] = 0;
    m.prob_atoms["a"][{1}] = 0;
    m.prop_atoms["p"][{0}] = named(*i3, {"l", "m"});
    m.prop_atoms["p"][{1}] = named(*i3, {"r"});
    CheckResult r = check_principle(m, *find_principle("exists"), gen);
    CHECK_FALSE(r.holds);
  }
}

TEST_CASE("countermodel searches") {
  SearchBounds bounds;
  bounds.max_points = 3;

  SUBCASE("top-rule finite witness on the fork") {
    SearchOutcome o = find_countermodel(*find_principle("top-rule"), ModelClass::Sheaf,
                                        bounds);
    REQUIRE(o.found);
    REQUIRE(o.sheaf);
    CHECK(o.sheaf->space->isomorphic_to(spaces::i3()));
    const StalkSheaf& witness = o.sheaf->prob_atoms.at("a").at({0});
    CHECK(witness.support() == o.sheaf->space->all());
    CHECK_FALSE(has_global_section(witness));
  }

  SUBCASE("stability witness in an interior model") {
    SearchOutcome o = find_countermodel(*find_principle("stability"), ModelClass::ET,
                                        bounds);
    REQUIRE(o.found);
    REQUIRE(o.et);
  }

  SUBCASE("exhaustion carries the finiteness argument") {
    SearchOutcome o = find_countermodel(*find_principle("forall-star"), ModelClass::ET,
                                        bounds);
    CHECK_FALSE(o.found);
    CHECK(o.census.models > 0);
    CHECK(o.exhaustion_note.find("Alexandrov") != std::string::npos);
  }

  SUBCASE("jobs do not change the outcome") {
    SearchBounds par = bounds;
    par.jobs = 4;
    SearchOutcome a = find_countermodel(*find_principle("bot-rule"), ModelClass::ET, bounds);
    SearchOutcome b = find_countermodel(*find_principle("bot-rule"), ModelClass::ET, par);
    REQUIRE(a.found);
    REQUIRE(b.found);
    CHECK(a.counterinstance.statement == b.counterinstance.statement);
    CHECK(a.et->prob_atoms == b.et->prob_atoms);
    CHECK(a.et->prop_atoms == b.et->prop_atoms);
    CHECK(a.et->space->canonical_key() == b.et->space->canonical_key());
  }
}

TEST_CASE("finite strictness witnesses for the starred hierarchy") {
  // A model validating every starred-quest instance while refuting a bang
  // instance, and one validating no-ignorabimus while refuting stability.
  InstanceGen gen = InstanceGen::standard();
  Signature sig = corpus_signature();
  SpacePtr i3 = shared(spaces::i3());
  ETModel m;
  m.space = i3;
  m.domain = {"d0"};
  m.signature = sig;
  m.prob_atoms["a"][{0}] = 0;
  m.prop_atoms["p"][{0}] = named(*i3, {"l"});

  CHECK(check_principle(m, *find_principle("quest-star"), gen, true).holds);
  CHECK_FALSE(check_principle(m, *find_principle("bang"), gen).holds);
  CHECK(check_principle(m, *find_principle("no-ignorabimus"), gen, true).holds);
  CHECK_FALSE(check_principle(m, *find_principle("stability"), gen).holds);
}

TEST_CASE("implication matrix is clean on the two-point corpus") {
  CorpusBounds small;
  small.max_points = 2;
  MatrixReport r = implication_matrix_check(small);
  CHECK(r.entries.size() == implication_table().size());
  for (const auto& e : r.entries) {
    CAPTURE(e.implication.conclusion);
    CHECK_FALSE(e.violated);
    CHECK(e.models_checked > 0);
  }
}

TEST_CASE("aux schemes parse and are well-sorted") {
  for (const auto& aux : aux_schemes()) {
    CAPTURE(aux.name);
    CHECK_FALSE(aux.statement.is_null());
  }
  CHECK(aux_schemes().size() == 9);
}

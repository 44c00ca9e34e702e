#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qhc/syntax.hpp"

using namespace qhc;

namespace {

Signature sig_pq() {
  return Signature({{"p", Sort::Proposition, 0},
                    {"q", Sort::Proposition, 0},
                    {"a", Sort::Problem, 0},
                    {"b", Sort::Problem, 0},
                    {"cong", Sort::Proposition, 4},
                    {"bet", Sort::Proposition, 3},
                    {"g", Sort::Problem, 2},
                    {"pp", Sort::Proposition, 1},
                    {"aa", Sort::Problem, 1}});
}

}  // namespace

TEST_CASE("parse builds sort-correct formulas") {
  Signature sig = sig_pq();

  Formula f = parse("?!p -> p", sig);
  Formula p = Formula::atom("p", {}, Sort::Proposition);
  CHECK(f == Formula::imp(Formula::quest(Formula::bang(p)), p));
  CHECK(f.sort() == Sort::Proposition);

  Formula a = parse("a", sig);
  CHECK(a == Formula::atom("a", {}, Sort::Problem));
  CHECK(a.sort() == Sort::Problem);

  CHECK(parse("box p", sig) == Formula::box(p));
  CHECK(parse("nabla a", sig) == Formula::nabla(parse("a", sig)));
  CHECK(parse("dia p", sig) == Formula::dia(p));
  CHECK(sort_of(parse("box p", sig)) == Sort::Proposition);
  CHECK(sort_of(parse("nabla a", sig)) == Sort::Problem);
}

TEST_CASE("parse rejects sort clashes, unknown atoms and arity errors") {
  Signature sig = sig_pq();

  CHECK_THROWS_AS(parse("!a", sig), ParseError);
  try {
    parse("!a", sig);
  } catch (const ParseError& e) {
    CHECK(e.category == ParseError::Category::SortClash);
  }
  try {
    parse("zzz", sig);
  } catch (const ParseError& e) {
    CHECK(e.category == ParseError::Category::UnknownAtom);
  }
  try {
    parse("cong(x,y)", sig);
  } catch (const ParseError& e) {
    CHECK(e.category == ParseError::Category::Arity);
  }
  try {
    parse("p /\\ a", sig);
  } catch (const ParseError& e) {
    CHECK(e.category == ParseError::Category::SortClash);
  }
  CHECK_THROWS_AS(parse("p -> (", sig), ParseError);
  CHECK_THROWS_AS(parse("?p", sig), ParseError);
}

TEST_CASE("unicode aliases accepted on input") {
  Signature sig = sig_pq();
  CHECK(parse("p ∧ q", sig) == parse("p /\\ q", sig));
  CHECK(parse("p ∨ q", sig) == parse("p \\/ q", sig));
  CHECK(parse("p → q", sig) == parse("p -> q", sig));
  CHECK(parse("¬ p", sig) == parse("~p", sig));
  CHECK(parse("∀ x. pp(x)", sig) == parse("forall x. pp(x)", sig));
  CHECK(parse("∃ x. aa(x)", sig) == parse("exists x. aa(x)", sig));
}

TEST_CASE("print round-trips and expands modal sugar by default") {
  Signature sig = sig_pq();
  Formula p = Formula::atom("p", {}, Sort::Proposition);

  CHECK(print(parse("?!p -> p", sig)) == "?!p -> p");
  CHECK(print(Formula::nabla(parse("a", sig))) == "!?a");
  PrintOptions sugar;
  sugar.modal_sugar = true;
  CHECK(print(Formula::nabla(parse("a", sig)), sugar) == "nabla a");
  CHECK(print(Formula::box(p), sugar) == "box p");
  CHECK(print(Formula::dia(p), sugar) == "dia p");

  Formula cong = Formula::atom("cong", {"x", "x", "x", "x"}, Sort::Proposition);
  CHECK(print(Formula::forall("x", Formula::bang(cong))) == "forall x. !cong(x,x,x,x)");
}

TEST_CASE("substitute is capture avoiding") {
  Signature sig = sig_pq();

  Formula f = parse("bet(x,y,z)", sig);
  CHECK(substitute(f, {{"x", "w"}}) == parse("bet(w,y,z)", sig));

  Formula g = parse("forall x. pp(x)", sig);
  CHECK(substitute(g, {{"x", "w"}}) == g);

  Formula h = parse("exists x. g(x,y)", sig);
  Formula hs = substitute(h, {{"y", "x"}});
  CHECK(hs.kind() == Formula::Kind::Exists);
  CHECK(hs.bound_var() != "x");
  CHECK(hs.body().atom_args() == std::vector<Var>{hs.bound_var(), "x"});
  CHECK(alpha_equal(hs, parse("exists u. g(u,x)", sig)));
}

TEST_CASE("substitution composes on disjoint supports") {
  Signature sig = sig_pq();
  Formula f = parse("g(x,y) /\\ exists z. g(z,x)", sig);
  Formula once = substitute(substitute(f, {{"x", "u"}}), {{"y", "v"}});
  Formula both = substitute(f, {{"x", "u"}, {"y", "v"}});
  CHECK(once == both);
}

TEST_CASE("schema instantiation") {
  Signature sig = sig_pq();

  SUBCASE("counit at ff") {
    Schema counit{"counit",
                  {{"p", Sort::Proposition, 0}},
                  {},
                  Formula::imp(Formula::quest(Formula::bang(
                                   Formula::atom("p", {}, Sort::Proposition))),
                               Formula::atom("p", {}, Sort::Proposition))};
    MetaAssignment assign;
    assign.formulas["p"] = {{}, Formula::ff()};
    CHECK(instantiate_schema(counit, assign) == parse("?!ff -> ff", sig));
  }

  SUBCASE("quest principle shape") {
    Formula alpha = Formula::atom("alpha", {}, Sort::Problem);
    Formula beta = Formula::atom("beta", {}, Sort::Problem);
    Schema quest_principle{
        "quest-principle",
        {{"alpha", Sort::Problem, 0}, {"beta", Sort::Problem, 0}},
        {},
        Formula::iff(Formula::quest(Formula::imp(alpha, beta)),
                     Formula::box(Formula::imp(Formula::quest(alpha),
                                               Formula::quest(beta))))};
    MetaAssignment assign;
    assign.formulas["alpha"] = {{}, parse("a", sig)};
    assign.formulas["beta"] = {{}, parse("b", sig)};
    CHECK(instantiate_schema(quest_principle, assign) ==
          parse("?(a -> b) <-> ?!(?a -> ?b)", sig));
  }

  SUBCASE("unary metavariable with universal closure") {
    Formula ax = Formula::atom("A", {"x"}, Sort::Problem);
    Schema forall_principle{
        "forall-principle",
        {{"A", Sort::Problem, 1}},
        {},
        Formula::iff(Formula::quest(Formula::forall("x", ax)),
                     Formula::box(Formula::forall("x", Formula::quest(ax))))};
    MetaAssignment assign;
    assign.formulas["A"] = {{"x"}, parse("aa(x)", sig)};
    Formula inst = instantiate_schema(forall_principle, assign);
    CHECK(is_closed(inst));
    CHECK(inst == parse("?(forall x. aa(x)) <-> ?! forall x. ?aa(x)", sig));
  }

  SUBCASE("sort mismatch and missing metavariable rejected") {
    Schema counit{"counit",
                  {{"p", Sort::Proposition, 0}},
                  {},
                  Formula::imp(Formula::quest(Formula::bang(
                                   Formula::atom("p", {}, Sort::Proposition))),
                               Formula::atom("p", {}, Sort::Proposition))};
    MetaAssignment bad;
    bad.formulas["p"] = {{}, parse("a", sig)};
    CHECK_THROWS_AS(instantiate_schema(counit, bad), SchemaError);
    MetaAssignment empty;
    CHECK_THROWS_AS(instantiate_schema(counit, empty), SchemaError);
  }

  SUBCASE("pattern binders are renamed to avoid capture") {
    Formula ax = Formula::atom("A", {"x"}, Sort::Problem);
    Schema sch{"inst",
               {{"A", Sort::Problem, 1}},
               {},
               Formula::forall("x", ax)};
    MetaAssignment assign;
    assign.formulas["A"] = {{"y"}, parse("g(y,x)", sig)};
    Formula inst = instantiate_schema(sch, assign, /*close=*/false);
    // The free x of the body must not be captured by the pattern binder.
    CHECK(inst.kind() == Formula::Kind::Forall);
    CHECK(inst.bound_var() != "x");
    CHECK(alpha_equal(inst, parse("forall u. g(u,x)", sig)));
  }
}

namespace {

Formula random_formula(std::mt19937& rng, const Signature& sig, Sort sort, int depth,
                       std::vector<Var> scope) {
  std::uniform_int_distribution<int> pick(0, 9);
  auto atom_of = [&](Sort s) {
    std::vector<const AtomDecl*> opts;
    for (const auto& d : sig.atoms())
      if (d.sort == s && (d.arity == 0 || !scope.empty())) opts.push_back(&d);
    const AtomDecl* d = opts[rng() % opts.size()];
    std::vector<Var> args;
    for (int i = 0; i < d->arity; ++i) args.push_back(scope[rng() % scope.size()]);
    return Formula::atom(d->name, args, d->sort);
  };
  if (depth == 0) {
    int c = pick(rng);
    if (c < 6) return atom_of(sort);
    if (sort == Sort::Problem) return Formula::bot();
    return c % 2 ? Formula::tt() : Formula::ff();
  }
  switch (pick(rng)) {
    case 0:
      return Formula::conj(random_formula(rng, sig, sort, depth - 1, scope),
                           random_formula(rng, sig, sort, depth - 1, scope));
    case 1:
      return Formula::disj(random_formula(rng, sig, sort, depth - 1, scope),
                           random_formula(rng, sig, sort, depth - 1, scope));
    case 2:
      return Formula::imp(random_formula(rng, sig, sort, depth - 1, scope),
                          random_formula(rng, sig, sort, depth - 1, scope));
    case 3:
      return Formula::neg(random_formula(rng, sig, sort, depth - 1, scope));
    case 4: {
      Var v = "v" + std::to_string(scope.size());
      scope.push_back(v);
      return Formula::forall(v, random_formula(rng, sig, sort, depth - 1, scope));
    }
    case 5: {
      Var v = "v" + std::to_string(scope.size());
      scope.push_back(v);
      return Formula::exists(v, random_formula(rng, sig, sort, depth - 1, scope));
    }
    case 6:
      return sort == Sort::Problem
                 ? Formula::bang(random_formula(rng, sig, Sort::Proposition, depth - 1, scope))
                 : Formula::quest(random_formula(rng, sig, Sort::Problem, depth - 1, scope));
    case 7:
      return Formula::iff(random_formula(rng, sig, sort, depth - 1, scope),
                          random_formula(rng, sig, sort, depth - 1, scope));
    default:
      return random_formula(rng, sig, sort, depth - 1, scope);
  }
}

}  // namespace

TEST_CASE("round trip on generated formulas") {
  Signature sig = sig_pq();
  std::mt19937 rng(20240817);
  int count = 0;
  for (int i = 0; i < 250; ++i) {
    Sort s = i % 2 ? Sort::Problem : Sort::Proposition;
    Formula f = random_formula(rng, sig, s, 4, {});
    std::string text = print(f);
    CAPTURE(text);
    Formula g = parse(text, sig);
    CHECK(f == g);
    ++count;
  }
  CHECK(count == 250);
}

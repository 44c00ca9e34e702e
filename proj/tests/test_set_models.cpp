#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhc/set_models.hpp"

using namespace qhc;

namespace {

SpacePtr shared(FiniteSpace sp) { return std::make_shared<const FiniteSpace>(std::move(sp)); }

PointSet named(const FiniteSpace& sp, std::initializer_list<const char*> names) {
  PointSet s = 0;
  for (const char* n : names) s |= 1u << sp.point_index(n);
  return s;
}

Signature sig_ap() {
  return Signature({{"a", Sort::Problem, 0},
                    {"b", Sort::Problem, 0},
                    {"p", Sort::Proposition, 0},
                    {"q", Sort::Proposition, 0}});
}

ETModel et_i3(PointSet a, PointSet p) {
  ETModel m;
  m.space = shared(spaces::i3());
  m.domain = {"d"};
  m.signature = sig_ap();
  m.prob_atoms["a"][{}] = a;
  m.prob_atoms["b"][{}] = 0;
  m.prop_atoms["p"][{}] = p;
  m.prop_atoms["q"][{}] = 0;
  return m;
}

}  // namespace

TEST_CASE("euler-tarski clauses on the fork") {
  Signature sig = sig_ap();
  ETModel m = et_i3(0, 0);
  const FiniteSpace& X = *m.space;
  m.prop_atoms["p"][{}] = named(X, {"l"});
  m.validate();

  CHECK(eval_et(m, parse("!p", sig)) == 0);
  CHECK(eval_et(m, parse("?!p -> p", sig)) == X.all());
  CHECK(valid(m, parse("?!p -> p", sig)));

  // Stability fails: !~p vs ~!p.
  CHECK(eval_et(m, parse("!~p", sig)) == named(X, {"r", "m"}));
  CHECK(eval_et(m, parse("~!p", sig)) == X.all());
  CHECK_FALSE(valid(m, parse("!~p <-> ~!p", sig)));
}

TEST_CASE("nabla is the identity on problems in every euler-tarski model") {
  Signature sig = sig_ap();
  SpacePtr i3 = shared(spaces::i3());
  for (PointSet a : i3->opens()) {
    ETModel m = et_i3(a, 0);
    CHECK(valid(m, parse("a <-> nabla a", sig)));
  }
}

TEST_CASE("euler-tarski validity") {
  Signature sig = sig_ap();
  ETModel m = et_i3(0, named(spaces::i3(), {"l"}));
  CHECK_FALSE(valid(m, parse("p", sig)));
  CHECK(valid(m, parse("tt", sig)));
  Signature unary({{"pp", Sort::Proposition, 1}});
  CHECK_THROWS_AS(valid(m, parse("pp(x)", unary)), EvalError);  // open formula
}

TEST_CASE("model validation rejects bad valuations") {
  Signature sig = sig_ap();
  ETModel m = et_i3(named(spaces::i3(), {"l"}), 0);  // {l} is not open
  CHECK_THROWS_AS(m.validate(), EvalError);

  TKModel tk;
  static_cast<SetModel&>(tk) = et_i3(0, named(spaces::i3(), {"l", "m"}));
  // {l,m} is open but not regular open on the fork.
  CHECK_THROWS_AS(tk.validate(), EvalError);
}

TEST_CASE("tarski-kolmogorov clauses") {
  Signature sig = sig_ap();

  SUBCASE("quest is the double negation; the top rule fails") {
    TKModel m;
    m.space = shared(spaces::i3());
    m.domain = {"d"};
    m.signature = sig;
    m.prob_atoms["a"][{}] = named(*m.space, {"l", "m"});
    m.prob_atoms["b"][{}] = 0;
    m.prop_atoms["p"][{}] = 0;
    m.prop_atoms["q"][{}] = 0;
    m.validate();
    CHECK(eval_tk(m, parse("?a", sig)) == m.space->all());
    CHECK(eval_tk(m, parse("a", sig)) == named(*m.space, {"l", "m"}));
    CHECK(valid(m, parse("?a", sig)));
    CHECK_FALSE(valid(m, parse("a", sig)));
  }

  SUBCASE("classical or is the regularized union") {
    TKModel m;
    m.space = shared(spaces::v3());
    m.domain = {"d"};
    m.signature = sig;
    m.prob_atoms["a"][{}] = 0;
    m.prob_atoms["b"][{}] = 0;
    m.prop_atoms["p"][{}] = named(*m.space, {"t1"});
    m.prop_atoms["q"][{}] = named(*m.space, {"t2"});
    m.validate();
    CHECK(eval_tk(m, parse("p \\/ q", sig)) == m.space->all());
  }

  SUBCASE("box is the identity on propositions in every tk model") {
    SpacePtr v3 = shared(spaces::v3());
    for (PointSet p : v3->regular_opens()) {
      TKModel m;
      m.space = v3;
      m.domain = {"d"};
      m.signature = sig;
      m.prob_atoms["a"][{}] = 0;
      m.prob_atoms["b"][{}] = 0;
      m.prop_atoms["p"][{}] = p;
      m.prop_atoms["q"][{}] = 0;
      CHECK(valid(m, parse("box p <-> p", sig)));
    }
  }
}

TEST_CASE("type preservation") {
  Signature sig = sig_ap();
  SpacePtr i3 = shared(spaces::i3());
  std::vector<std::string> probs = {"a",  "a /\\ b", "a \\/ b", "a -> b",
                                    "~a", "!p",      "nabla a", "!(p \\/ q)"};
  std::vector<std::string> props = {"p",     "p \\/ q", "p -> q", "~p",
                                    "box p", "?a",      "?(a -> b)"};
  for (PointSet a : i3->opens())
    for (PointSet p = 0; p <= i3->all(); ++p) {
      ETModel m = et_i3(a, p);
      for (const auto& text : probs)
        CHECK(i3->is_open(eval_et(m, parse(text, sig))));
    }
  for (PointSet a : i3->opens())
    for (PointSet p : i3->regular_opens()) {
      TKModel m;
      static_cast<SetModel&>(m) = et_i3(a, p);
      for (const auto& text : probs)
        CHECK(i3->is_open(eval_tk(m, parse(text, sig))));
      for (const auto& text : props)
        CHECK(i3->is_regular_open(eval_tk(m, parse(text, sig))));
    }
}

TEST_CASE("expressibility of the intuitionistic connectives in et models") {
  Signature sig({{"a", Sort::Problem, 0},
                 {"b", Sort::Problem, 0},
                 {"aa", Sort::Problem, 1},
                 {"p", Sort::Proposition, 0},
                 {"q", Sort::Proposition, 0}});
  SpacePtr i3 = shared(spaces::i3());
  for (PointSet a : i3->opens())
    for (PointSet b : i3->opens()) {
      ETModel m;
      m.space = i3;
      m.domain = {"d0", "d1"};
      m.signature = sig;
      m.prob_atoms["a"][{}] = a;
      m.prob_atoms["b"][{}] = b;
      m.prob_atoms["aa"][{0}] = a;
      m.prob_atoms["aa"][{1}] = b;
      m.prop_atoms["p"][{}] = 0;
      m.prop_atoms["q"][{}] = 0;
      CHECK(eval_et(m, parse("a -> b", sig)) == eval_et(m, parse("!(?a -> ?b)", sig)));
      CHECK(eval_et(m, parse("forall x. aa(x)", sig)) ==
            eval_et(m, parse("!forall x. ?aa(x)", sig)));
    }
}

TEST_CASE("expressibility of the classical connectives in tk models") {
  Signature sig({{"a", Sort::Problem, 0},
                 {"p", Sort::Proposition, 0},
                 {"q", Sort::Proposition, 0},
                 {"pp", Sort::Proposition, 1}});
  SpacePtr i3 = shared(spaces::i3());
  for (PointSet p : i3->regular_opens())
    for (PointSet q : i3->regular_opens()) {
      TKModel m;
      m.space = i3;
      m.domain = {"d0", "d1"};
      m.signature = sig;
      m.prob_atoms["a"][{}] = 0;
      m.prop_atoms["p"][{}] = p;
      m.prop_atoms["q"][{}] = q;
      m.prop_atoms["pp"][{0}] = p;
      m.prop_atoms["pp"][{1}] = q;
      CHECK(eval_tk(m, parse("p \\/ q", sig)) == eval_tk(m, parse("?(!p \\/ !q)", sig)));
      CHECK(eval_tk(m, parse("exists x. pp(x)", sig)) ==
            eval_tk(m, parse("?exists x. !pp(x)", sig)));
    }
}

TEST_CASE("clopen and stable characterizations in et models") {
  Signature sig = sig_ap();
  SpacePtr i3 = shared(spaces::i3());
  for (PointSet p = 0; p <= i3->all(); ++p) {
    ETModel m = et_i3(0, p);
    bool clopen = i3->is_open(p) && i3->is_open(i3->all() & ~p);
    CHECK(valid(m, parse("?(!p \\/ !~p)", sig)) == clopen);
    PointSet ip = i3->interior(p);
    bool box_stable = i3->interior(i3->closure(ip)) == ip;
    CHECK(valid(m, parse("~~!p -> !p", sig)) == box_stable);
  }
}

TEST_CASE("validity under every environment for open formulas") {
  Signature sig({{"aa", Sort::Problem, 1}});
  SpacePtr i3 = shared(spaces::i3());
  ETModel m;
  m.space = i3;
  m.domain = {"d0", "d1"};
  m.signature = sig;
  m.prob_atoms["aa"][{0}] = i3->all();
  m.prob_atoms["aa"][{1}] = 0;
  Formula f = parse("aa(x)", sig);
  CHECK_FALSE(valid_all_env(m, f));
  m.prob_atoms["aa"][{1}] = i3->all();
  CHECK(valid_all_env(m, f));
}

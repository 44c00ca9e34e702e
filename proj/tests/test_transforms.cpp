#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhc/transforms.hpp"

using namespace qhc;

namespace {

SpacePtr shared(FiniteSpace sp) { return std::make_shared<const FiniteSpace>(std::move(sp)); }

PointSet named(const FiniteSpace& sp, std::initializer_list<const char*> names) {
  PointSet s = 0;
  for (const char* n : names) s |= 1u << sp.point_index(n);
  return s;
}

Signature sig_geo() {
  return Signature({{"cong", Sort::Proposition, 4},
                    {"bet", Sort::Proposition, 3},
                    {"neq", Sort::Proposition, 2},
                    {"p", Sort::Proposition, 0},
                    {"q", Sort::Proposition, 0},
                    {"a", Sort::Problem, 0}});
}

}  // namespace

TEST_CASE("erasure drops every bang and quest") {
  Signature sig = sig_geo();
  Formula f = parse("!neq(q2,a2) -> exists x. !(bet(q2,a2,x) /\\ cong(a2,x,b2,c2))",
                    Signature({{"neq", Sort::Proposition, 2},
                               {"bet", Sort::Proposition, 3},
                               {"cong", Sort::Proposition, 4},
                               {"q2", Sort::Proposition, 0}}));
  // Build with point variables instead: use the geometry-style signature.
  Signature s2({{"neq", Sort::Proposition, 2},
                {"bet", Sort::Proposition, 3},
                {"cong", Sort::Proposition, 4}});
  Formula g = parse("!neq(q,a) -> exists x. !(bet(q,a,x) /\\ cong(a,x,b,c))", s2);
  CHECK(erase_to_qc(g) == parse("neq(q,a) -> exists x. bet(q,a,x) /\\ cong(a,x,b,c)", s2));

  Formula pure = parse("cong(a,b,b,a)", s2);
  CHECK(erase_to_qc(pure) == pure);

  CHECK(erase_to_qc(parse("?!p", sig)) == parse("p", sig));
  CHECK_THROWS_AS(erase_to_qc(parse("a", sig)), TranslationError);
  (void)f;
}

TEST_CASE("double negation retraction") {
  Signature sig = sig_geo();
  Signature qsig({{"p", Sort::Problem, 0}, {"q", Sort::Problem, 0},
                  {"a", Sort::Problem, 0}});

  // Atoms are renamed across sorts: the image of proposition p is problem p.
  CHECK(retract_to_qh(parse("!p /\\ !q", sig)) == parse("~~p /\\ ~~q", qsig));
  CHECK(retract_to_qh(parse("?a", sig)) == parse("~~a", sig));
  CHECK(retract_to_qh(parse("p \\/ q", sig)) == parse("~~(~~p \\/ ~~q)", qsig));
  CHECK(retract_to_qh(parse("a", sig)) == parse("a", sig));
}

TEST_CASE("box translation of the simple-problem fragment") {
  Signature sig = sig_geo();

  ModalFormula expected = ModalFormula::box(ModalFormula::imp(
      ModalFormula::box(ModalFormula::atom("p", {})),
      ModalFormula::exists("y", ModalFormula::box(ModalFormula::atom("q", {})))));
  CHECK(box_translate(parse("!p -> exists y. !q", sig)) == expected);

  CHECK(box_translate(parse("p", sig)) == ModalFormula::atom("p", {}));
  CHECK(box_translate(parse("box p", sig)) == ModalFormula::box(ModalFormula::atom("p", {})));
  CHECK_THROWS_AS(box_translate(parse("a", sig)), TranslationError);
}

TEST_CASE("s4 evaluation") {
  FiniteSpace i3 = spaces::i3();
  ModalValuation val;
  val["p"][{}] = named(i3, {"l"});
  std::vector<std::string> dom = {"d"};

  CHECK(s4_eval(ModalFormula::box(ModalFormula::atom("p", {})), i3, dom, val) == 0);
  CHECK(s4_eval(ModalFormula::box(ModalFormula::tt()), i3, dom, val) == i3.all());
  CHECK(s4_eval(ModalFormula::dia(ModalFormula::atom("p", {})), i3, dom, val) ==
        i3.closure(named(i3, {"l"})));
}

TEST_CASE("et evaluation coheres with s4 along the box translation") {
  Signature sig({{"p", Sort::Proposition, 0}, {"q", Sort::Proposition, 0}});
  SpacePtr i3 = shared(spaces::i3());
  std::vector<std::string> texts = {
      "!p -> exists y. !q", "!(p -> q)", "?!p -> p", "!p \\/ !q", "~!p",
      "!(p \\/ q) -> !p \\/ !q", "forall x. !p", "?(!p /\\ !q)"};
  for (PointSet p = 0; p <= i3->all(); ++p)
    for (PointSet q = 0; q <= i3->all(); ++q) {
      ETModel m;
      m.space = i3;
      m.domain = {"d0", "d1"};
      m.signature = sig;
      m.prop_atoms["p"][{}] = p;
      m.prop_atoms["q"][{}] = q;
      ModalValuation val;
      val["p"][{}] = p;
      val["q"][{}] = q;
      for (const auto& text : texts) {
        Formula f = parse(text, sig);
        CAPTURE(text);
        CHECK(eval_et(m, f) == s4_eval(box_translate(f), *i3, m.domain, val));
      }
    }
}

TEST_CASE("tk evaluation coheres with the heyting evaluation of the retraction") {
  Signature sig({{"p", Sort::Proposition, 0}, {"q", Sort::Proposition, 0}});
  Signature qsig({{"p", Sort::Problem, 0}, {"q", Sort::Problem, 0}});
  SpacePtr i3 = shared(spaces::i3());
  std::vector<std::string> texts = {"p \\/ q", "p -> q",  "~p",      "p /\\ q",
                                    "!p",      "?!p",     "box p",   "!(p \\/ q)",
                                    "!p \\/ !q", "~!p",   "?(!p -> !q)"};
  for (PointSet p : i3->regular_opens())
    for (PointSet q : i3->regular_opens()) {
      TKModel m;
      m.space = i3;
      m.domain = {"d"};
      m.signature = sig;
      m.prop_atoms["p"][{}] = p;
      m.prop_atoms["q"][{}] = q;

      // The induced model interprets the renamed problem atoms by the (open)
      // regular values of the TK atoms.
      ETModel h;
      h.space = i3;
      h.domain = {"d"};
      h.signature = qsig;
      h.prob_atoms["p"][{}] = p;
      h.prob_atoms["q"][{}] = q;

      for (const auto& text : texts) {
        Formula f = parse(text, sig);
        CAPTURE(text);
        Formula r = retract_to_qh(f);
        CHECK(eval_tk(m, f) == eval_heyting(h, r));
      }
    }
}

TEST_CASE("nabla model sends atomic problems to their supports") {
  SpacePtr i3 = shared(spaces::i3());
  Signature sig({{"a", Sort::Problem, 0}, {"p", Sort::Proposition, 0}});
  SheafModel m;
  m.space = i3;
  m.domain = {"d"};
  m.signature = sig;
  m.prob_atoms["a"][{}] = coproduct(characteristic(i3, named(*i3, {"l", "m"})),
                                    characteristic(i3, named(*i3, {"r", "m"})));
  m.prop_atoms["p"][{}] = named(*i3, {"l"});

  ETModel et = nabla_model(m);
  CHECK(et.prob_atoms["a"][{}] == i3->all());
  CHECK(et.prop_atoms["p"][{}] == named(*i3, {"l"}));

  m.prob_atoms["a"][{}] = empty_sheaf(i3);
  CHECK(nabla_model(m).prob_atoms["a"][{}] == 0);
}

TEST_CASE("diamond model regularizes proposition atoms") {
  SpacePtr i3 = shared(spaces::i3());
  Signature sig({{"a", Sort::Problem, 0}, {"p", Sort::Proposition, 0}});
  ETModel m;
  m.space = i3;
  m.domain = {"d"};
  m.signature = sig;
  m.prob_atoms["a"][{}] = 0;
  m.prop_atoms["p"][{}] = named(*i3, {"l"});

  TKModel tk = diamond_model(m);
  CHECK(tk.prop_atoms["p"][{}] == 0);  // IntClInt {l} is empty on the fork

  m.prop_atoms["p"][{}] = i3->all();
  CHECK(diamond_model(m).prop_atoms["p"][{}] == i3->all());

  for (PointSet r : i3->regular_opens()) {
    m.prop_atoms["p"][{}] = r;
    CHECK(diamond_model(m).prop_atoms["p"][{}] == r);
  }
}

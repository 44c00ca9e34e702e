#include "qhc/calculus.hpp"

#include <algorithm>
#include <stdexcept>

namespace qhc {

namespace {

Formula meta(const char* name, Sort s) { return Formula::atom(name, {}, s); }
Formula meta1(const char* name, Sort s, const Var& arg) {
  return Formula::atom(name, {arg}, s);
}

std::vector<Schema> build_schemata() {
  std::vector<Schema> out;

  auto add = [&](std::string name, std::vector<MetaVarDecl> mvs,
                 std::vector<Var> term_mvs, Formula pattern) {
    out.push_back(Schema{std::move(name), std::move(mvs), std::move(term_mvs),
                         std::move(pattern)});
  };

  // Base intuitionistic predicate logic, present at both sorts.
  for (Sort s : {Sort::Problem, Sort::Proposition}) {
    std::string suffix = s == Sort::Problem ? "@prob" : "@prop";
    Formula A = meta("A", s), B = meta("B", s), C = meta("C", s);
    MetaVarDecl a{"A", s, 0}, b{"B", s, 0}, c{"C", s, 0};
    MetaVarDecl a1{"A", s, 1};

    add("k" + suffix, {a, b}, {}, Formula::imp(A, Formula::imp(B, A)));
    add("s" + suffix, {a, b, c}, {},
        Formula::imp(Formula::imp(A, Formula::imp(B, C)),
                     Formula::imp(Formula::imp(A, B), Formula::imp(A, C))));
    add("and-intro" + suffix, {a, b}, {},
        Formula::imp(A, Formula::imp(B, Formula::conj(A, B))));
    add("and-elim-l" + suffix, {a, b}, {}, Formula::imp(Formula::conj(A, B), A));
    add("and-elim-r" + suffix, {a, b}, {}, Formula::imp(Formula::conj(A, B), B));
    add("or-intro-l" + suffix, {a, b}, {}, Formula::imp(A, Formula::disj(A, B)));
    add("or-intro-r" + suffix, {a, b}, {}, Formula::imp(B, Formula::disj(A, B)));
    add("or-elim" + suffix, {a, b, c}, {},
        Formula::imp(Formula::imp(A, C),
                     Formula::imp(Formula::imp(B, C),
                                  Formula::imp(Formula::disj(A, B), C))));
    add("ex-falso" + suffix, {a}, {}, Formula::imp(Formula::falsity(s), A));
    add("forall-elim" + suffix, {a1}, {"t"},
        Formula::imp(Formula::forall("v", meta1("A", s, "v")), meta1("A", s, "t")));
    add("exists-intro" + suffix, {a1}, {"t"},
        Formula::imp(meta1("A", s, "t"), Formula::exists("v", meta1("A", s, "v"))));
  }

  // Classical sort: intuitionistic base plus double negation elimination.
  {
    Formula A = meta("A", Sort::Proposition);
    add("dne@prop", {{"A", Sort::Proposition, 0}}, {},
        Formula::imp(Formula::neg(Formula::neg(A)), A));
  }

  // Connecting laws.
  Formula A = meta("A", Sort::Problem), B = meta("B", Sort::Problem);
  Formula P = meta("P", Sort::Proposition), Q = meta("Q", Sort::Proposition);
  MetaVarDecl a{"A", Sort::Problem, 0}, b{"B", Sort::Problem, 0};
  MetaVarDecl p{"P", Sort::Proposition, 0}, q{"Q", Sort::Proposition, 0};
  MetaVarDecl a1{"A", Sort::Problem, 1}, p1{"P", Sort::Proposition, 1};

  add("quest-imp", {a, b}, {},
      Formula::imp(Formula::quest(Formula::imp(A, B)),
                   Formula::imp(Formula::quest(A), Formula::quest(B))));
  add("bang-imp", {p, q}, {},
      Formula::imp(Formula::bang(Formula::imp(P, Q)),
                   Formula::imp(Formula::bang(P), Formula::bang(Q))));
  add("bang-bot", {}, {}, Formula::imp(Formula::bang(Formula::ff()), Formula::bot()));
  add("counit", {p}, {}, Formula::imp(Formula::quest(Formula::bang(P)), P));
  add("unit", {a}, {}, Formula::imp(A, Formula::bang(Formula::quest(A))));

  add("quest-or", {a, b}, {},
      Formula::iff(Formula::quest(Formula::disj(A, B)),
                   Formula::disj(Formula::quest(A), Formula::quest(B))));
  add("quest-exists", {a1}, {},
      Formula::iff(Formula::quest(Formula::exists("v", meta1("A", Sort::Problem, "v"))),
                   Formula::exists("v", Formula::quest(meta1("A", Sort::Problem, "v")))));
  add("bang-forall", {p1}, {},
      Formula::iff(Formula::bang(Formula::forall("v", meta1("P", Sort::Proposition, "v"))),
                   Formula::forall("v", Formula::bang(meta1("P", Sort::Proposition, "v")))));
  add("bang-and", {p, q}, {},
      Formula::iff(Formula::bang(Formula::conj(P, Q)),
                   Formula::conj(Formula::bang(P), Formula::bang(Q))));
  add("quest-forall", {a1}, {},
      Formula::imp(Formula::forall("v", Formula::quest(meta1("A", Sort::Problem, "v"))),
                   Formula::quest(Formula::forall("v", meta1("A", Sort::Problem, "v")))));
  add("bang-exists", {p1}, {},
      Formula::imp(Formula::exists("v", Formula::bang(meta1("P", Sort::Proposition, "v"))),
                   Formula::bang(Formula::exists("v", meta1("P", Sort::Proposition, "v")))));
  add("bang-or", {p, q}, {},
      Formula::imp(Formula::disj(Formula::bang(P), Formula::bang(Q)),
                   Formula::bang(Formula::disj(P, Q))));

  return out;
}

}  // namespace

const std::vector<Schema>& axiom_schemata() {
  static const std::vector<Schema> table = build_schemata();
  return table;
}

const Schema* find_schema(const std::string& name) {
  for (const auto& s : axiom_schemata())
    if (s.name == name) return &s;
  return nullptr;
}

int64_t ProofScript::append(Formula f, Justification by) {
  int64_t id = lines.empty() ? 1 : lines.back().id + 1;
  lines.push_back({id, std::move(f), std::move(by)});
  return id;
}

const Formula* Theory::find(const std::string& n) const {
  for (const auto& [name, f] : axioms)
    if (name == n) return &f;
  for (const auto& [name, f] : postulates)
    if (name == n) return &f;
  for (const auto& [name, f] : mixed)
    if (name == n) return &f;
  return nullptr;
}

void Theory::validate() const {
  for (const auto& [n, f] : axioms) {
    if (!is_closed(f)) throw std::runtime_error("axiom not closed: " + n);
    if (f.sort() != Sort::Proposition)
      throw std::runtime_error("axiom not a proposition: " + n);
  }
  for (const auto& [n, f] : postulates) {
    if (!is_closed(f)) throw std::runtime_error("postulate not closed: " + n);
    if (f.sort() != Sort::Problem)
      throw std::runtime_error("postulate not a problem: " + n);
  }
  for (const auto& [n, f] : mixed)
    if (!is_closed(f)) throw std::runtime_error("mixed axiom not closed: " + n);
}

// ---------------------------------------------------------------------------
// Proof checking

namespace {

struct Checker {
  const ProofScript& script;
  const Theory& theory;
  std::map<int64_t, size_t> index;

  const Formula* earlier(int64_t current_idx, int64_t id) const {
    auto it = index.find(id);
    if (it == index.end()) return nullptr;
    if (it->second >= static_cast<size_t>(current_idx)) return nullptr;
    return &script.lines[it->second].formula;
  }
};

bool check_generalization(const Formula& from, const Formula& to, const Var& x,
                          std::string& reason) {
  using K = Formula::Kind;
  // Plain: forall x. from
  if (to.kind() == K::Forall && to.bound_var() == x && alpha_equal(to.body(), from))
    return true;
  if (from.kind() == K::Imp && to.kind() == K::Imp) {
    // sigma -> forall x. alpha
    if (alpha_equal(to.lhs(), from.lhs()) && to.rhs().kind() == K::Forall &&
        to.rhs().bound_var() == x && alpha_equal(to.rhs().body(), from.rhs())) {
      if (free_vars(from.lhs()).count(x)) {
        reason = "freshness-violation";
        return false;
      }
      return true;
    }
    // (exists x. alpha) -> sigma
    if (alpha_equal(to.rhs(), from.rhs()) && to.lhs().kind() == K::Exists &&
        to.lhs().bound_var() == x && alpha_equal(to.lhs().body(), from.lhs())) {
      if (free_vars(from.rhs()).count(x)) {
        reason = "freshness-violation";
        return false;
      }
      return true;
    }
  }
  reason = "bad-rule";
  return false;
}

}  // namespace

Verdict check_proof(const ProofScript& script, const Theory& theory) {
  Checker ck{script, theory, {}};
  int64_t prev_id = 0;
  for (size_t i = 0; i < script.lines.size(); ++i) {
    const ProofLine& line = script.lines[i];
    if (line.id <= prev_id) return Verdict::reject(line.id, "forward-reference");
    prev_id = line.id;
    ck.index[line.id] = i;
  }

  for (size_t i = 0; i < script.lines.size(); ++i) {
    const ProofLine& line = script.lines[i];
    const Formula& f = line.formula;

    if (std::holds_alternative<ByScheme>(line.by)) {
      const auto& by = std::get<ByScheme>(line.by);
      const Schema* schema = find_schema(by.schema);
      if (!schema) return Verdict::reject(line.id, "unknown-schema");
      try {
        Formula inst = instantiate_schema(*schema, by.assignment, /*close=*/false);
        if (!alpha_equal(inst, f)) return Verdict::reject(line.id, "bad-instance");
      } catch (const SchemaError& e) {
        std::string msg = e.what();
        bool sorty = msg.find("sort") != std::string::npos;
        return Verdict::reject(line.id, sorty ? "sort-error" : "bad-instance");
      }
    } else if (std::holds_alternative<ByTheoryAxiom>(line.by)) {
      const auto& by = std::get<ByTheoryAxiom>(line.by);
      const Formula* ax = theory.find(by.name);
      if (!ax) return Verdict::reject(line.id, "unknown-axiom");
      if (!alpha_equal(*ax, f)) return Verdict::reject(line.id, "bad-instance");
    } else if (std::holds_alternative<ByHypothesis>(line.by)) {
      const auto& by = std::get<ByHypothesis>(line.by);
      if (by.index >= script.hypotheses.size())
        return Verdict::reject(line.id, "bad-hypothesis");
      if (!alpha_equal(script.hypotheses[by.index], f))
        return Verdict::reject(line.id, "bad-instance");
    } else if (std::holds_alternative<ByModusPonens>(line.by)) {
      const auto& by = std::get<ByModusPonens>(line.by);
      const Formula* prem = ck.earlier(static_cast<int64_t>(i), by.premise);
      const Formula* impl = ck.earlier(static_cast<int64_t>(i), by.implication);
      if (!prem || !impl) return Verdict::reject(line.id, "forward-reference");
      auto matches = [&](const Formula& a, const Formula& ab) {
        return ab.kind() == Formula::Kind::Imp && alpha_equal(ab.lhs(), a) &&
               alpha_equal(ab.rhs(), f);
      };
      if (!matches(*prem, *impl) && !matches(*impl, *prem))
        return Verdict::reject(line.id, "bad-rule");
    } else if (std::holds_alternative<ByGeneralization>(line.by)) {
      const auto& by = std::get<ByGeneralization>(line.by);
      const Formula* from = ck.earlier(static_cast<int64_t>(i), by.from);
      if (!from) return Verdict::reject(line.id, "forward-reference");
      std::string reason;
      if (!check_generalization(*from, f, by.var, reason))
        return Verdict::reject(line.id, reason);
    } else if (std::holds_alternative<ByNecessitation>(line.by)) {
      const auto& by = std::get<ByNecessitation>(line.by);
      const Formula* from = ck.earlier(static_cast<int64_t>(i), by.from);
      if (!from) return Verdict::reject(line.id, "forward-reference");
      if (by.bang) {
        if (from->sort() != Sort::Proposition) return Verdict::reject(line.id, "sort-error");
        if (f.kind() != Formula::Kind::Bang || !alpha_equal(f.body(), *from))
          return Verdict::reject(line.id, "bad-rule");
      } else {
        if (from->sort() != Sort::Problem) return Verdict::reject(line.id, "sort-error");
        if (f.kind() != Formula::Kind::Quest || !alpha_equal(f.body(), *from))
          return Verdict::reject(line.id, "bad-rule");
      }
    }
  }
  return Verdict::ok();
}

// ---------------------------------------------------------------------------
// ScriptBuilder

namespace {

std::string base_name(const char* stem, Sort s) {
  return std::string(stem) + (s == Sort::Problem ? "@prob" : "@prop");
}

MetaAssignment assign2(const Formula& a, const Formula& b) {
  MetaAssignment m;
  m.formulas["A"] = {{}, a};
  m.formulas["B"] = {{}, b};
  return m;
}

MetaAssignment assign3(const Formula& a, const Formula& b, const Formula& c) {
  MetaAssignment m = assign2(a, b);
  m.formulas["C"] = {{}, c};
  return m;
}

}  // namespace

int64_t ScriptBuilder::schema(const std::string& name, const MetaAssignment& assignment) {
  const Schema* s = find_schema(name);
  if (!s) throw std::runtime_error("no such schema: " + name);
  Formula inst = instantiate_schema(*s, assignment, /*close=*/false);
  return line(inst, ByScheme{name, assignment});
}

int64_t ScriptBuilder::axiom(const Theory& t, const std::string& name) {
  const Formula* f = t.find(name);
  if (!f) throw std::runtime_error("no such axiom: " + name);
  return line(*f, ByTheoryAxiom{name});
}

int64_t ScriptBuilder::hypothesis(Formula f) {
  script_.hypotheses.push_back(f);
  return line(std::move(f), ByHypothesis{script_.hypotheses.size() - 1});
}

int64_t ScriptBuilder::mp(int64_t premise, int64_t implication) {
  const Formula& impl = formula_of(implication);
  if (impl.kind() != Formula::Kind::Imp) throw std::runtime_error("mp on non-implication");
  return line(impl.rhs(), ByModusPonens{premise, implication});
}

const Formula& ScriptBuilder::formula_of(int64_t id) const {
  for (const auto& l : script_.lines)
    if (l.id == id) return l.formula;
  throw std::runtime_error("unknown line id");
}

int64_t ScriptBuilder::trans(int64_t ab, int64_t bc) {
  Formula fab = formula_of(ab), fbc = formula_of(bc);
  Formula a = fab.lhs(), b = fab.rhs(), c = fbc.rhs();
  Sort s = a.sort();
  int64_t l1 = schema(base_name("k", s), assign2(fbc, a));
  int64_t l2 = mp(bc, l1);  // a -> (b -> c)
  int64_t l3 = schema(base_name("s", s), assign3(a, b, c));
  int64_t l4 = mp(l2, l3);  // (a -> b) -> (a -> c)
  return mp(ab, l4);
}

int64_t ScriptBuilder::flip(int64_t xyz) {
  Formula f = formula_of(xyz);
  Formula x = f.lhs(), y = f.rhs().lhs(), z = f.rhs().rhs();
  Sort s = x.sort();
  int64_t l1 = schema(base_name("s", s), assign3(x, y, z));
  int64_t l2 = mp(xyz, l1);  // (x -> y) -> (x -> z)
  int64_t l3 = schema(base_name("k", s), assign2(y, x));  // y -> (x -> y)
  return trans(l3, l2);
}

int64_t ScriptBuilder::identity(const Formula& a) {
  Sort s = a.sort();
  Formula aa = Formula::imp(a, a);
  int64_t l1 = schema(base_name("s", s), assign3(a, aa, a));
  int64_t l2 = schema(base_name("k", s), assign2(a, aa));
  int64_t l3 = mp(l2, l1);
  int64_t l4 = schema(base_name("k", s), assign2(a, a));
  return mp(l4, l3);
}

int64_t ScriptBuilder::curry(int64_t pq_r) {
  Formula f = formula_of(pq_r);  // (p /\ q) -> r
  Formula p = f.lhs().lhs(), q = f.lhs().rhs(), r = f.rhs();
  Sort s = p.sort();
  int64_t l1 = schema(base_name("and-intro", s), assign2(p, q));  // p -> (q -> p/\q)
  int64_t l2 = schema(base_name("k", s), assign2(f, q));
  int64_t l3 = mp(pq_r, l2);  // q -> ((p/\q) -> r)
  int64_t l4 = schema(base_name("s", s), assign3(q, f.lhs(), r));
  int64_t l5 = mp(l3, l4);  // (q -> p/\q) -> (q -> r)
  return trans(l1, l5);
}

int64_t ScriptBuilder::contrapose(int64_t ab) {
  Formula f = formula_of(ab);
  Formula a = f.lhs(), b = f.rhs();
  Sort s = a.sort();
  Formula fs = Formula::falsity(s);
  Formula nb = Formula::neg(b);
  int64_t l1 = schema(base_name("k", s), assign2(nb, a));  // ~b -> (a -> ~b)
  int64_t l2 = schema(base_name("s", s), assign3(a, b, fs));
  // l2: (a -> (b -> ff)) -> ((a -> b) -> (a -> ff))
  int64_t l3 = trans(l1, l2);  // ~b -> ((a -> b) -> ~a)
  int64_t l4 = flip(l3);       // (a -> b) -> (~b -> ~a)
  return mp(ab, l4);
}

int64_t ScriptBuilder::double_negation_intro(const Formula& a) {
  int64_t l1 = identity(Formula::neg(a));  // ~a -> (a -> falsity)
  return flip(l1);                         // a -> ~~a
}

int64_t ScriptBuilder::quest_mono(int64_t ab) {
  Formula f = formula_of(ab);
  int64_t l1 = line(Formula::quest(f), ByNecessitation{ab, /*bang=*/false});
  MetaAssignment m = assign2(f.lhs(), f.rhs());
  int64_t l2 = schema("quest-imp", m);
  return mp(l1, l2);
}

int64_t ScriptBuilder::bang_mono(int64_t ab) {
  Formula f = formula_of(ab);
  int64_t l1 = line(Formula::bang(f), ByNecessitation{ab, /*bang=*/true});
  MetaAssignment m;
  m.formulas["P"] = {{}, f.lhs()};
  m.formulas["Q"] = {{}, f.rhs()};
  int64_t l2 = schema("bang-imp", m);
  return mp(l1, l2);
}

int64_t ScriptBuilder::iff_forward(const std::string& schema_name,
                                   const MetaAssignment& assignment) {
  int64_t l1 = schema(schema_name, assignment);
  Formula f = formula_of(l1);
  Sort s = f.sort();
  int64_t l2 = schema(base_name("and-elim-l", s), assign2(f.lhs(), f.rhs()));
  return mp(l1, l2);
}

int64_t ScriptBuilder::iff_backward(const std::string& schema_name,
                                    const MetaAssignment& assignment) {
  int64_t l1 = schema(schema_name, assignment);
  Formula f = formula_of(l1);
  Sort s = f.sort();
  int64_t l2 = schema(base_name("and-elim-r", s), assign2(f.lhs(), f.rhs()));
  return mp(l1, l2);
}

// ---------------------------------------------------------------------------
// Intuitionistic lift

namespace {

bool pure_proposition(const Formula& f) {
  using K = Formula::Kind;
  if (f.sort() != Sort::Proposition) return false;
  if (contains_kind(f, K::Bang) || contains_kind(f, K::Quest)) return false;
  return true;
}

// Builds a derivation of S -> !p where S splits top-level conjunctions of p
// into a conjunction of bangs; returns the line id.
int64_t split_bang(ScriptBuilder& sb, const Formula& p) {
  if (p.kind() != Formula::Kind::And) return sb.identity(Formula::bang(p));
  int64_t left = split_bang(sb, p.lhs());    // S1 -> !p1
  int64_t right = split_bang(sb, p.rhs());   // S2 -> !p2
  Formula s1 = sb.formula_of(left).lhs(), s2 = sb.formula_of(right).lhs();
  Formula s12 = Formula::conj(s1, s2);
  Sort srt = Sort::Problem;
  int64_t e1 = sb.schema(base_name("and-elim-l", srt), assign2(s1, s2));
  int64_t t1 = sb.trans(e1, left);   // S1/\S2 -> !p1
  int64_t e2 = sb.schema(base_name("and-elim-r", srt), assign2(s1, s2));
  int64_t t2 = sb.trans(e2, right);  // S1/\S2 -> !p2
  // Pair the two implications.
  Formula b1 = Formula::bang(p.lhs()), b2 = Formula::bang(p.rhs());
  int64_t ai = sb.schema(base_name("and-intro", srt), assign2(b1, b2));
  int64_t c1 = sb.trans(t1, ai);  // S1/\S2 -> (!p2 -> !p1/\!p2)
  int64_t sx = sb.schema(base_name("s", srt),
                         assign3(s12, b2, Formula::conj(b1, b2)));
  int64_t c2 = sb.mp(c1, sx);
  int64_t pair = sb.mp(t2, c2);  // S1/\S2 -> !p1/\!p2
  MetaAssignment ba;
  ba.formulas["P"] = {{}, p.lhs()};
  ba.formulas["Q"] = {{}, p.rhs()};
  int64_t back = sb.iff_backward("bang-and", ba);  // !p1/\!p2 -> !(p1/\p2)
  return sb.trans(pair, back);
}

}  // namespace

ProofScript derive_intuitionistic_lift(const Theory& theory, const std::string& axiom_name) {
  const Formula* ax = theory.find(axiom_name);
  if (!ax) throw SchemaError("no such axiom: " + axiom_name);

  // Peel the universal closure.
  std::vector<Var> binders;
  Formula core = *ax;
  while (core.kind() == Formula::Kind::Forall) {
    binders.push_back(core.bound_var());
    core = core.body();
  }
  if (!pure_proposition(core)) throw SchemaError("axiom is not a pure proposition");
  bool implication = core.kind() == Formula::Kind::Imp;

  ScriptBuilder sb(theory.name);
  int64_t current = sb.axiom(theory, axiom_name);

  // Instantiate each universal quantifier at its own variable.
  Formula cf = *ax;
  for (const Var& x : binders) {
    Formula body = cf.body();
    MetaAssignment ma;
    ma.formulas["A"] = {{x}, body};
    ma.terms["t"] = x;
    int64_t el = sb.schema("forall-elim@prop", ma);
    current = sb.mp(current, el);
    cf = body;
  }

  int64_t result;
  if (implication) {
    Formula p = core.lhs(), q = core.rhs();
    int64_t banged = sb.line(Formula::bang(core), ByNecessitation{current, true});
    MetaAssignment bi;
    bi.formulas["P"] = {{}, p};
    bi.formulas["Q"] = {{}, q};
    int64_t dist = sb.schema("bang-imp", bi);
    int64_t lift = sb.mp(banged, dist);  // !p -> !q
    if (p.kind() == Formula::Kind::And) {
      int64_t split = split_bang(sb, p);  // S -> !p
      result = sb.trans(split, lift);
    } else {
      result = lift;
    }
  } else {
    result = sb.line(Formula::bang(core), ByNecessitation{current, true});
  }

  for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
    Formula f = sb.formula_of(result);
    result = sb.line(Formula::forall(*it, f), ByGeneralization{result, *it});
  }
  return sb.take();
}

}  // namespace qhc

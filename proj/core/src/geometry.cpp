#include "qhc/geometry.hpp"

#include <json.hpp>

#include "qhc/geometry_data.hpp"

namespace qhc {

using nlohmann::json;

Signature geometry_signature() {
  return Signature({{"cong", Sort::Proposition, 4}, {"bet", Sort::Proposition, 3}});
}

const TheoryEntry* GeometryTheory::entry(const std::string& id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Notion expansion

namespace {

bool is_atom(const Formula& f) { return f.kind() == Formula::Kind::Atom; }

bool is_negation_of_atom(const Formula& f) {
  return f.kind() == Formula::Kind::Imp && f.rhs().kind() == Formula::Kind::FF &&
         is_atom(f.lhs());
}

const DefinedNotion* find_notion(const std::string& name,
                                 const std::vector<DefinedNotion>& notions) {
  for (const auto& n : notions)
    if (n.name == name) return &n;
  return nullptr;
}

Formula expand_once(const Formula& f, const std::vector<DefinedNotion>& notions,
                    bool& changed) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: {
      const DefinedNotion* n = find_notion(f.atom_name(), notions);
      if (!n) return f;
      if (n->params.size() != f.atom_args().size())
        throw GeometryError("notion " + n->name + " used with wrong arity");
      std::map<Var, Var> binding;
      for (size_t i = 0; i < n->params.size(); ++i)
        if (n->params[i] != f.atom_args()[i]) binding[n->params[i]] = f.atom_args()[i];
      changed = true;
      return substitute(n->definition, binding);
    }
    case K::TT:
    case K::FF:
    case K::Bot:
      return f;
    case K::And:
      return Formula::conj(expand_once(f.lhs(), notions, changed),
                           expand_once(f.rhs(), notions, changed));
    case K::Or:
      return Formula::disj(expand_once(f.lhs(), notions, changed),
                           expand_once(f.rhs(), notions, changed));
    case K::Imp:
      return Formula::imp(expand_once(f.lhs(), notions, changed),
                          expand_once(f.rhs(), notions, changed));
    case K::Forall:
      return Formula::forall(f.bound_var(), expand_once(f.body(), notions, changed));
    case K::Exists:
      return Formula::exists(f.bound_var(), expand_once(f.body(), notions, changed));
    case K::Bang:
      return Formula::bang(expand_once(f.body(), notions, changed));
    case K::Quest:
      return Formula::quest(expand_once(f.body(), notions, changed));
  }
  return f;
}

}  // namespace

Formula expand_notions(const Formula& f, const std::vector<DefinedNotion>& notions) {
  Formula out = f;
  for (int round = 0; round < 8; ++round) {
    bool changed = false;
    out = expand_once(out, notions, changed);
    if (!changed) return out;
  }
  throw GeometryError("notion expansion did not terminate");
}

// ---------------------------------------------------------------------------
// Loading

namespace {

Signature with_notion_atoms(const Signature& base,
                            const std::vector<DefinedNotion>& notions) {
  Signature sig = base;
  for (const auto& n : notions)
    sig.add({n.name, Sort::Proposition, static_cast<int>(n.params.size())});
  return sig;
}

}  // namespace

GeometryTheory load_theory_from_json(const std::string& json_text,
                                     bool with_triangle_extension) {
  json doc = json::parse(json_text);
  GeometryTheory t;
  t.theory.name = doc.at("name").get<std::string>();

  Signature base;
  for (const auto& a : doc.at("signature").at("atoms")) {
    std::string sort = a.at("sort").get<std::string>();
    base.add({a.at("name").get<std::string>(),
              sort == "prob" || sort == "problem" ? Sort::Problem : Sort::Proposition,
              a.at("arity").get<int>()});
  }
  t.theory.signature = base;

  for (const auto& n : doc.at("defined_notions")) {
    DefinedNotion dn;
    dn.name = n.at("name").get<std::string>();
    for (const auto& p : n.at("params")) dn.params.push_back(p.get<std::string>());
    // A notion may use previously declared notions.
    Signature sig = with_notion_atoms(base, t.notions);
    dn.definition = expand_notions(parse(n.at("formula").get<std::string>(), sig), t.notions);
    t.notions.push_back(std::move(dn));
  }

  Signature full = with_notion_atoms(base, t.notions);
  auto read_formula = [&](const std::string& text) {
    return universal_closure(expand_notions(parse(text, full), t.notions));
  };

  for (const auto& c : doc.at("characterizations"))
    t.characterizations.emplace_back(c.at("name").get<std::string>(),
                                     read_formula(c.at("formula").get<std::string>()));

  auto read_group = [&](const char* key, EntryKind kind) {
    for (const auto& [id, entry] : doc.at(key).items()) {
      TheoryEntry e;
      e.id = id;
      e.label = entry.at("label").get<std::string>();
      e.kind = kind;
      e.formula = read_formula(entry.at("formula").get<std::string>());
      t.entries.push_back(std::move(e));
    }
  };
  read_group("axioms", EntryKind::Axiom);
  read_group("postulates", EntryKind::Postulate);
  read_group("certifiability", EntryKind::Certifiability);

  if (with_triangle_extension) {
    const auto& ext = doc.at("extensions").at("triangle-copy");
    TheoryEntry e;
    e.id = "triangle-copy";
    e.label = ext.at("label").get<std::string>();
    e.kind = EntryKind::Extension;
    e.formula = read_formula(ext.at("formula").get<std::string>());
    t.entries.push_back(std::move(e));
    t.extension_enabled = true;
  }

  std::sort(t.entries.begin(), t.entries.end(), [](const auto& a, const auto& b) {
    auto num = [](const std::string& s) {
      return s.find_first_not_of("0123456789") == std::string::npos ? std::stoi(s) : 1000;
    };
    return num(a.id) < num(b.id);
  });

  // Validation: closure, sorts and the documented classification.
  for (const auto& e : t.entries) {
    if (!is_closed(e.formula))
      throw GeometryError("entry " + e.id + " is not closed");
    switch (e.kind) {
      case EntryKind::Axiom:
        if (classify_problem(e.formula) != ProblemClass::PureProposition)
          throw GeometryError("axiom " + e.id + " is not a pure proposition");
        t.theory.axioms.emplace_back(e.id, e.formula);
        break;
      case EntryKind::Postulate:
        if (classify_problem(e.formula) != ProblemClass::Euclidean)
          throw GeometryError("postulate " + e.id + " is not Euclidean");
        t.theory.postulates.emplace_back(e.id, e.formula);
        break;
      case EntryKind::Certifiability: {
        // Shape: closure of p -> ?!p with p atomic or a negated atom.
        Formula core = e.formula;
        while (core.kind() == Formula::Kind::Forall) core = core.body();
        bool ok = core.kind() == Formula::Kind::Imp &&
                  core.rhs() == Formula::box(core.lhs()) &&
                  (core.lhs().kind() == Formula::Kind::Atom ||
                   (is_negation_of_atom(core.lhs())));
        if (!ok)
          throw GeometryError("entry " + e.id + " does not match the certifiability shape");
        t.theory.mixed.emplace_back(e.id, e.formula);
        break;
      }
      case EntryKind::Extension:
        if (e.formula.sort() != Sort::Proposition ||
            e.formula.kind() != Formula::Kind::Quest)
          throw GeometryError("extension must assert solubility of a problem");
        t.theory.mixed.emplace_back(e.id, e.formula);
        break;
    }
  }
  t.theory.validate();
  return t;
}

GeometryTheory load_theory(bool with_triangle_extension) {
  return load_theory_from_json(detail::kGeometryTheoryJson, with_triangle_extension);
}

// ---------------------------------------------------------------------------
// Problem classes

namespace {

bool pure_prop(const Formula& f) {
  return f.sort() == Sort::Proposition && !contains_kind(f, Formula::Kind::Bang) &&
         !contains_kind(f, Formula::Kind::Quest);
}

// Conjunction of atomic and negated atomic propositions.
bool conj_of_literals(const Formula& f) {
  using K = Formula::Kind;
  if (is_atom(f) || is_negation_of_atom(f)) return true;
  if (f.kind() == K::And) return conj_of_literals(f.lhs()) && conj_of_literals(f.rhs());
  return false;
}

// Built from literals by /\, \/ and exists only.
bool weak_condition(const Formula& f) {
  using K = Formula::Kind;
  if (is_atom(f) || is_negation_of_atom(f)) return true;
  switch (f.kind()) {
    case K::And:
    case K::Or:
      return weak_condition(f.lhs()) && weak_condition(f.rhs());
    case K::Exists:
      return weak_condition(f.body());
    default:
      return false;
  }
}

bool simple_problem(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      return false;  // atomic problems are excluded
    case K::Bot:
      return true;
    case K::And:
    case K::Or:
    case K::Imp:
      return simple_problem(f.lhs()) && simple_problem(f.rhs());
    case K::Forall:
    case K::Exists:
      return simple_problem(f.body());
    case K::Bang:
      return pure_prop(f.body());
    default:
      return false;
  }
}

bool pure_simple_problem(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      return false;
    case K::Bot:
      return true;
    case K::And:
    case K::Or:
    case K::Imp:
      return pure_simple_problem(f.lhs()) && pure_simple_problem(f.rhs());
    case K::Forall:
    case K::Exists:
      return pure_simple_problem(f.body());
    case K::Bang:
      return is_atom(f.body());
    default:
      return false;
  }
}

// The premise of every implication and the subject of every negation is a
// banged condition of the given kind.
template <typename Cond>
bool guarded_premises(const Formula& f, Cond&& cond) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
    case K::Bot:
      return true;
    case K::And:
    case K::Or:
      return guarded_premises(f.lhs(), cond) && guarded_premises(f.rhs(), cond);
    case K::Imp:
      return f.lhs().kind() == K::Bang && cond(f.lhs().body()) &&
             guarded_premises(f.rhs(), cond);
    case K::Forall:
    case K::Exists:
      return guarded_premises(f.body(), cond);
    case K::Bang:
      return true;
    default:
      return false;
  }
}

bool euclidean_problem(const Formula& f) {
  using K = Formula::Kind;
  Formula core = f;
  while (core.kind() == K::Forall) core = core.body();
  Formula conclusion = core;
  if (core.kind() == K::Imp) {
    if (core.lhs().kind() != K::Bang || !conj_of_literals(core.lhs().body())) return false;
    conclusion = core.rhs();
  }
  while (conclusion.kind() == K::Exists) conclusion = conclusion.body();
  return conclusion.kind() == K::Bang && conj_of_literals(conclusion.body());
}

}  // namespace

const char* to_string(ProblemClass c) {
  switch (c) {
    case ProblemClass::PureProposition: return "pure-proposition";
    case ProblemClass::Euclidean: return "euclidean";
    case ProblemClass::PureSimple: return "pure-simple";
    case ProblemClass::WeaklyEuclidean: return "weakly-euclidean";
    case ProblemClass::Simple: return "simple";
    case ProblemClass::None: return "none";
  }
  return "?";
}

std::set<ProblemClass> problem_labels(const Formula& f) {
  std::set<ProblemClass> out;
  if (f.sort() == Sort::Proposition) {
    if (pure_prop(f)) out.insert(ProblemClass::PureProposition);
    return out;
  }
  if (!simple_problem(f)) return out;
  out.insert(ProblemClass::Simple);
  if (pure_simple_problem(f)) out.insert(ProblemClass::PureSimple);
  if (guarded_premises(f, weak_condition)) out.insert(ProblemClass::WeaklyEuclidean);
  if (euclidean_problem(f)) out.insert(ProblemClass::Euclidean);
  return out;
}

ProblemClass classify_problem(const Formula& f) {
  std::set<ProblemClass> labels = problem_labels(f);
  for (ProblemClass c : {ProblemClass::PureProposition, ProblemClass::Euclidean,
                         ProblemClass::PureSimple, ProblemClass::WeaklyEuclidean,
                         ProblemClass::Simple})
    if (labels.count(c)) return c;
  return ProblemClass::None;
}

// ---------------------------------------------------------------------------
// The solubility-pushing rewrite

namespace {

Formula push_rec(const Formula& f, bool discharge_premises, std::vector<Formula>& residue) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Bang:
      return f.body();  // conclusion side: the certificate simplifies away
    case K::Bot:
      return Formula::ff();
    case K::And:
      return Formula::conj(push_rec(f.lhs(), discharge_premises, residue),
                           push_rec(f.rhs(), discharge_premises, residue));
    case K::Or:
      return Formula::disj(push_rec(f.lhs(), discharge_premises, residue),
                           push_rec(f.rhs(), discharge_premises, residue));
    case K::Exists:
      return Formula::exists(f.bound_var(),
                             push_rec(f.body(), discharge_premises, residue));
    case K::Forall:
      return Formula::forall(f.bound_var(),
                             push_rec(f.body(), discharge_premises, residue));
    case K::Imp: {
      if (f.lhs().kind() != K::Bang)
        throw GeometryError("stuck: an implication premise is not a banged condition");
      Formula condition = f.lhs().body();
      if (std::find(residue.begin(), residue.end(), condition) == residue.end())
        residue.push_back(condition);
      Formula premise =
          discharge_premises ? condition : Formula::box(condition);
      if (f.rhs().kind() == K::Bot)  // a negation: the certificate stops here
        return Formula::neg(premise);
      return Formula::imp(premise, push_rec(f.rhs(), discharge_premises, residue));
    }
    default:
      throw GeometryError("not a simple problem");
  }
}

}  // namespace

PushResult push_wn(const Formula& simple) {
  if (classify_problem(simple) == ProblemClass::None ||
      simple.sort() != Sort::Problem)
    throw GeometryError("input is not a simple problem");
  PushResult r;
  r.proposition = push_rec(simple, /*discharge_premises=*/false, r.residue);
  return r;
}

Formula classical_shadow(const Formula& postulate, bool assume_certifiable) {
  ProblemClass c = classify_problem(postulate);
  if (c != ProblemClass::Euclidean && c != ProblemClass::WeaklyEuclidean)
    throw GeometryError("classical shadow needs a (weakly) Euclidean problem");
  std::vector<Formula> residue;
  Formula shadow = push_rec(postulate, assume_certifiable, residue);
  if (!assume_certifiable && !residue.empty()) {
    std::string msg = "premises require certifiability:";
    for (const Formula& p : residue) msg += " " + print(p) + ";";
    throw GeometryError(msg);
  }
  return shadow;
}

// ---------------------------------------------------------------------------
// Pure simple normal form

namespace {

Formula split_banged(const Formula& prop, bool stability) {
  using K = Formula::Kind;
  if (is_atom(prop)) return Formula::bang(prop);
  if (prop.kind() == K::And)
    return Formula::conj(split_banged(prop.lhs(), stability),
                         split_banged(prop.rhs(), stability));
  if (is_negation_of_atom(prop)) {
    if (!stability)
      throw GeometryError("rewriting a banged negated atom requires stability");
    return Formula::neg(Formula::bang(prop.lhs()));
  }
  throw GeometryError("condition is not a conjunction of literals");
}

Formula psnf_rec(const Formula& f, bool stability) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Bang:
      return split_banged(f.body(), stability);
    case K::Bot:
      return f;
    case K::And:
      return Formula::conj(psnf_rec(f.lhs(), stability), psnf_rec(f.rhs(), stability));
    case K::Or:
      return Formula::disj(psnf_rec(f.lhs(), stability), psnf_rec(f.rhs(), stability));
    case K::Imp:
      return Formula::imp(psnf_rec(f.lhs(), stability), psnf_rec(f.rhs(), stability));
    case K::Forall:
      return Formula::forall(f.bound_var(), psnf_rec(f.body(), stability));
    case K::Exists:
      return Formula::exists(f.bound_var(), psnf_rec(f.body(), stability));
    default:
      throw GeometryError("not a simple problem");
  }
}

}  // namespace

Formula pure_simple_normal_form(const Formula& euclidean, bool stability) {
  if (classify_problem(euclidean) != ProblemClass::Euclidean)
    throw GeometryError("pure simple normal form needs a Euclidean problem");
  return psnf_rec(euclidean, stability);
}

// ---------------------------------------------------------------------------
// Bundled derivations

namespace {

// Composes through banged conjunctions without splitting the given blocks:
// returns a line (!b1 /\ ... /\ !bk) -> !(b1 /\ ... /\ bk) mirroring the
// conjunction tree.
int64_t conj_bang_intro(ScriptBuilder& sb, const Formula& prop) {
  if (prop.kind() != Formula::Kind::And) return sb.identity(Formula::bang(prop));
  int64_t left = conj_bang_intro(sb, prop.lhs());
  int64_t right = conj_bang_intro(sb, prop.rhs());
  Formula s1 = sb.formula_of(left).lhs(), s2 = sb.formula_of(right).lhs();
  Formula b1 = Formula::bang(prop.lhs()), b2 = Formula::bang(prop.rhs());
  MetaAssignment two;
  two.formulas["A"] = {{}, s1};
  two.formulas["B"] = {{}, s2};
  int64_t e1 = sb.schema("and-elim-l@prob", two);
  int64_t t1 = sb.trans(e1, left);
  int64_t e2 = sb.schema("and-elim-r@prob", two);
  int64_t t2 = sb.trans(e2, right);
  MetaAssignment pair_b;
  pair_b.formulas["A"] = {{}, b1};
  pair_b.formulas["B"] = {{}, b2};
  int64_t ai = sb.schema("and-intro@prob", pair_b);
  int64_t c1 = sb.trans(t1, ai);
  MetaAssignment sx;
  sx.formulas["A"] = {{}, Formula::conj(s1, s2)};
  sx.formulas["B"] = {{}, b2};
  sx.formulas["C"] = {{}, Formula::conj(b1, b2)};
  int64_t l5 = sb.mp(c1, sb.schema("s@prob", sx));
  int64_t paired = sb.mp(t2, l5);
  MetaAssignment ba;
  ba.formulas["P"] = {{}, prop.lhs()};
  ba.formulas["Q"] = {{}, prop.rhs()};
  int64_t back = sb.iff_backward("bang-and", ba);
  return sb.trans(paired, back);
}

// Instantiates the closure of a theory entry, by default at its own variable
// names; `at` overrides the instantiating terms binder by binder.
int64_t open_instance(ScriptBuilder& sb, const Theory& t, const std::string& id,
                      const std::vector<Var>& at = {}) {
  int64_t cur = sb.axiom(t, id);
  size_t i = 0;
  while (true) {
    Formula f = sb.formula_of(cur);
    if (f.kind() != Formula::Kind::Forall) break;
    Var term = i < at.size() ? at[i] : f.bound_var();
    MetaAssignment ma;
    ma.formulas["A"] = {{f.bound_var()}, f.body()};
    ma.terms["t"] = term;
    std::string name = f.body().sort() == Sort::Problem ? "forall-elim@prob"
                                                        : "forall-elim@prop";
    int64_t el = sb.schema(name, ma);
    cur = sb.mp(cur, el);
    ++i;
  }
  return cur;
}

int64_t close_over(ScriptBuilder& sb, int64_t line, const std::vector<Var>& binders) {
  int64_t cur = line;
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
    Formula f = sb.formula_of(cur);
    cur = sb.line(Formula::forall(*it, f), ByGeneralization{cur, *it});
  }
  return cur;
}

std::vector<Var> binders_of(const Formula& f) {
  std::vector<Var> out;
  Formula cur = f;
  while (cur.kind() == Formula::Kind::Forall) {
    out.push_back(cur.bound_var());
    cur = cur.body();
  }
  return out;
}

// The closed theorem (X -> (Y -> Z)) -> (Y -> (X -> Z)).
int64_t swap_args_theorem(ScriptBuilder& sb, const Formula& x, const Formula& y,
                          const Formula& z) {
  Sort s = x.sort();
  std::string k = s == Sort::Problem ? "k@prob" : "k@prop";
  std::string ss = s == Sort::Problem ? "s@prob" : "s@prop";
  MetaAssignment m1;
  m1.formulas["A"] = {{}, x};
  m1.formulas["B"] = {{}, y};
  m1.formulas["C"] = {{}, z};
  int64_t l2 = sb.schema(ss, m1);  // (x->(y->z)) -> ((x->y)->(x->z))
  // ((x->y)->(x->z)) -> (y->(x->z)):
  Formula xy = Formula::imp(x, y), xz = Formula::imp(x, z);
  MetaAssignment m2;
  m2.formulas["A"] = {{}, Formula::imp(xy, xz)};
  m2.formulas["B"] = {{}, y};
  int64_t a = sb.schema(k, m2);  // ((x->y)->(x->z)) -> (y -> ((x->y)->(x->z)))
  MetaAssignment m3;
  m3.formulas["A"] = {{}, y};
  m3.formulas["B"] = {{}, xy};
  m3.formulas["C"] = {{}, xz};
  int64_t b = sb.schema(ss, m3);
  int64_t c = sb.trans(a, b);  // ((x->y)->(x->z)) -> ((y->(x->y)) -> (y->(x->z)))
  int64_t d = sb.flip(c);
  MetaAssignment m4;
  m4.formulas["A"] = {{}, y};
  m4.formulas["B"] = {{}, x};
  int64_t ky = sb.schema(k, m4);  // y -> (x -> y)
  int64_t cr = sb.mp(ky, d);      // ((x->y)->(x->z)) -> (y->(x->z))
  return sb.trans(l2, cr);
}

// From a line W -> (X -> (Y -> Z)) derive W -> (Y -> (X -> Z)).
int64_t flip_under(ScriptBuilder& sb, int64_t line) {
  Formula f = sb.formula_of(line);
  Formula x = f.rhs().lhs(), y = f.rhs().rhs().lhs(), z = f.rhs().rhs().rhs();
  int64_t thm = swap_args_theorem(sb, x, y, z);
  return sb.trans(line, thm);
}

// Swap the implication-chain premises at the given depth (depth 0 swaps the
// first two premises, like flip).
int64_t swap_at(ScriptBuilder& sb, int64_t line, int depth);

// From a closed line A -> B derive (V -> A) -> (V -> B).
int64_t lift_imp(ScriptBuilder& sb, int64_t closed_ab, const Formula& v) {
  Formula f = sb.formula_of(closed_ab);
  Sort s = v.sort();
  std::string k = s == Sort::Problem ? "k@prob" : "k@prop";
  std::string ss = s == Sort::Problem ? "s@prob" : "s@prop";
  MetaAssignment m1;
  m1.formulas["A"] = {{}, f};
  m1.formulas["B"] = {{}, v};
  int64_t l1 = sb.schema(k, m1);
  int64_t l2 = sb.mp(closed_ab, l1);  // v -> (a -> b)
  MetaAssignment m2;
  m2.formulas["A"] = {{}, v};
  m2.formulas["B"] = {{}, f.lhs()};
  m2.formulas["C"] = {{}, f.rhs()};
  int64_t l3 = sb.schema(ss, m2);
  return sb.mp(l2, l3);
}

int64_t swap_at(ScriptBuilder& sb, int64_t line, int depth) {
  if (depth == 0) return sb.flip(line);
  Formula f = sb.formula_of(line);
  std::vector<Formula> contexts;
  Formula tail = f;
  for (int i = 0; i < depth; ++i) {
    contexts.push_back(tail.lhs());
    tail = tail.rhs();
  }
  Formula x = tail.lhs(), y = tail.rhs().lhs(), z = tail.rhs().rhs();
  int64_t thm = swap_args_theorem(sb, x, y, z);
  for (auto it = contexts.rbegin(); it != contexts.rend(); ++it)
    thm = lift_imp(sb, thm, *it);
  return sb.mp(line, thm);
}

// The closed theorem (A -> B) -> (~B -> ~A).
int64_t contraposition_theorem(ScriptBuilder& sb, const Formula& a, const Formula& b) {
  Sort s = a.sort();
  Formula fs = Formula::falsity(s);
  std::string k = s == Sort::Problem ? "k@prob" : "k@prop";
  std::string ss = s == Sort::Problem ? "s@prob" : "s@prop";
  MetaAssignment m1;
  m1.formulas["A"] = {{}, Formula::neg(b)};
  m1.formulas["B"] = {{}, a};
  int64_t l1 = sb.schema(k, m1);  // ~b -> (a -> ~b)
  MetaAssignment m2;
  m2.formulas["A"] = {{}, a};
  m2.formulas["B"] = {{}, b};
  m2.formulas["C"] = {{}, fs};
  int64_t l2 = sb.schema(ss, m2);
  int64_t l3 = sb.trans(l1, l2);  // ~b -> ((a->b) -> ~a)
  return sb.flip(l3);
}

}  // namespace

std::vector<std::pair<std::string, ProofScript>> bundled_derivations(
    const GeometryTheory& t) {
  std::vector<std::pair<std::string, ProofScript>> out;

  for (const char* id : {"1", "2", "3", "4", "5", "9", "10", "13", "14", "15"})
    out.emplace_back(std::string("lift-") + id, derive_intuitionistic_lift(t.theory, id));

  // The double-negation weakening of the betweenness identity.
  {
    ScriptBuilder sb(t.theory.name);
    ProofScript lift = derive_intuitionistic_lift(t.theory, "4");
    for (const ProofLine& l : lift.lines) sb.line(l.formula, l.by);
    int64_t closed = lift.lines.back().id;
    Formula closed_f = sb.formula_of(closed);
    std::vector<Var> binders = binders_of(closed_f);
    int64_t cur = closed;
    Formula f = closed_f;
    while (f.kind() == Formula::Kind::Forall) {
      MetaAssignment ma;
      ma.formulas["A"] = {{f.bound_var()}, f.body()};
      ma.terms["t"] = f.bound_var();
      cur = sb.mp(cur, sb.schema("forall-elim@prob", ma));
      f = f.body();
    }
    int64_t dni = sb.double_negation_intro(f.rhs());
    int64_t weak = sb.trans(cur, dni);
    close_over(sb, weak, binders);
    out.emplace_back("betweenness-identity-weakened", sb.take());
  }

  // The implication shuffles of the upper-dimension chain.
  {
    ScriptBuilder sb(t.theory.name);
    int64_t core = open_instance(sb, t.theory, "5");
    Formula cf = sb.formula_of(core);
    Formula prem = cf.lhs(), concl = cf.rhs();
    int64_t banged = sb.line(Formula::bang(cf), ByNecessitation{core, true});
    MetaAssignment bi;
    bi.formulas["P"] = {{}, prem};
    bi.formulas["Q"] = {{}, concl};
    int64_t lifted = sb.mp(banged, sb.schema("bang-imp", bi));
    int64_t intro = conj_bang_intro(sb, prem);
    int64_t h2 = sb.trans(intro, lifted);

    // Curry the banged premise tree completely, move the first
    // non-collinearity premise innermost, then contrapose it against the
    // conclusion; these are the implication shuffles of the chain.
    int64_t cur = h2;
    while (sb.formula_of(cur).lhs().kind() == Formula::Kind::And) cur = sb.curry(cur);
    int chain = 0;
    for (Formula f = sb.formula_of(cur); f.kind() == Formula::Kind::Imp; f = f.rhs())
      ++chain;
    int64_t moved = cur;
    for (int depth = 0; depth + 2 <= chain; ++depth) moved = swap_at(sb, moved, depth);

    Formula fm = sb.formula_of(moved);
    std::vector<Formula> contexts;
    Formula tail = fm;
    while (tail.rhs().kind() == Formula::Kind::Imp) {
      contexts.push_back(tail.lhs());
      tail = tail.rhs();
    }
    int64_t cp = contraposition_theorem(sb, tail.lhs(), tail.rhs());
    int64_t step = cp;
    for (auto it = contexts.rbegin(); it != contexts.rend(); ++it)
      step = lift_imp(sb, step, *it);
    sb.mp(moved, step);
    out.emplace_back("upper-dimension-shuffle", sb.take());
  }

  // Certifiability discharges a pushed premise.
  {
    ScriptBuilder sb(t.theory.name);
    const TheoryEntry* p6 = t.entry("6");
    PushResult pushed = push_wn(p6->formula);
    Formula premise = pushed.residue.at(0);                  // ~cong(q,a,q,q)
    Formula target = pushed.proposition;
    // Strip the universal closure of the pushed proposition to expose the
    // implication whose premise still carries the certificate.
    Formula open_target = target;
    while (open_target.kind() == Formula::Kind::Forall) open_target = open_target.body();
    int64_t hyp = sb.hypothesis(Formula::imp(Formula::box(premise), open_target.rhs()));
    // The negated-equidistance certifiability axiom, instantiated so that its
    // atom is the expanded equality of the pushed premise.
    Formula atom = premise.lhs();  // cong(q,a,q,q)
    int64_t cert = open_instance(sb, t.theory, "18",
                                 {atom.atom_args()[0], atom.atom_args()[1],
                                  atom.atom_args()[2], atom.atom_args()[3]});
    int64_t removed = sb.trans(cert, hyp);
    close_over(sb, removed, binders_of(universal_closure(sb.formula_of(removed))));
    out.emplace_back("certifiability-removal", sb.take());
  }

  return out;
}

}  // namespace qhc

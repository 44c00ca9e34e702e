#include "qhc/principles.hpp"

#include <algorithm>
#include <future>

namespace qhc {

namespace {

Formula MA() { return Formula::atom("A", {}, Sort::Problem); }
Formula MB() { return Formula::atom("B", {}, Sort::Problem); }
Formula MP_() { return Formula::atom("P", {}, Sort::Proposition); }
Formula MQ() { return Formula::atom("Q", {}, Sort::Proposition); }
Formula MA1(const Var& v) { return Formula::atom("A", {v}, Sort::Problem); }
Formula MP1(const Var& v) { return Formula::atom("P", {v}, Sort::Proposition); }

MetaVarDecl dA{"A", Sort::Problem, 0};
MetaVarDecl dB{"B", Sort::Problem, 0};
MetaVarDecl dP{"P", Sort::Proposition, 0};
MetaVarDecl dQ{"Q", Sort::Proposition, 0};
MetaVarDecl dA1{"A", Sort::Problem, 1};
MetaVarDecl dP1{"P", Sort::Proposition, 1};

PrincipleForm law(std::string note, std::vector<MetaVarDecl> mvs, Formula statement) {
  return PrincipleForm{std::move(note), std::move(mvs), {}, std::move(statement)};
}

PrincipleForm rule(std::string note, std::vector<MetaVarDecl> mvs,
                   std::vector<Formula> premises, Formula conclusion) {
  return PrincipleForm{std::move(note), std::move(mvs), std::move(premises),
                       std::move(conclusion)};
}

std::vector<Principle> build_catalog() {
  std::vector<Principle> out;
  Formula A = MA(), B = MB(), P = MP_(), Q = MQ();

  out.push_back({"top-rule",
                 PrincipleKind::Rule,
                 rule("canonical", {dA}, {Formula::quest(A)}, A),
                 {rule("with the closure modality in the premise", {dA},
                       {Formula::nabla(A)}, A)},
                 ""});

  out.push_back({"bot-rule",
                 PrincipleKind::Rule,
                 rule("canonical", {dP}, {Formula::neg(Formula::bang(P))}, Formula::neg(P)),
                 {rule("with the possibility modality in the premise", {dP},
                       {Formula::dia(P)}, P)},
                 ""});

  out.push_back(
      {"quest",
       PrincipleKind::Law,
       law("canonical", {dA, dB},
           Formula::iff(Formula::quest(Formula::imp(A, B)),
                        Formula::box(Formula::imp(Formula::quest(A), Formula::quest(B))))),
       {law("banged on both sides", {dA, dB},
            Formula::iff(Formula::bang(Formula::quest(Formula::imp(A, B))),
                         Formula::bang(Formula::imp(Formula::quest(A), Formula::quest(B))))),
        law("solubility transfers along closures", {dA, dB},
            Formula::iff(Formula::quest(Formula::imp(A, B)),
                         Formula::quest(Formula::imp(Formula::nabla(A), Formula::nabla(B))))),
        law("the closure modality distributes over implication", {dA, dB},
            Formula::iff(Formula::nabla(Formula::imp(A, B)),
                         Formula::imp(Formula::nabla(A), Formula::nabla(B))))},
       ""});

  out.push_back(
      {"forall",
       PrincipleKind::Law,
       law("canonical", {dA1},
           Formula::iff(Formula::quest(Formula::forall("v", MA1("v"))),
                        Formula::box(Formula::forall("v", Formula::quest(MA1("v")))))),
       {law("banged on both sides", {dA1},
            Formula::iff(Formula::bang(Formula::quest(Formula::forall("v", MA1("v")))),
                         Formula::bang(Formula::forall("v", Formula::quest(MA1("v")))))),
        law("solubility transfers along closures", {dA1},
            Formula::iff(Formula::quest(Formula::forall("v", MA1("v"))),
                         Formula::quest(Formula::forall("v", Formula::nabla(MA1("v")))))),
        law("the closure modality distributes over the universal", {dA1},
            Formula::iff(Formula::nabla(Formula::forall("v", MA1("v"))),
                         Formula::forall("v", Formula::nabla(MA1("v")))))},
       ""});

  out.push_back(
      {"or",
       PrincipleKind::Law,
       law("canonical", {dP, dQ},
           Formula::iff(Formula::bang(Formula::disj(P, Q)),
                        Formula::nabla(Formula::disj(Formula::bang(P), Formula::bang(Q))))),
       {law("questioned on both sides", {dP, dQ},
            Formula::iff(Formula::quest(Formula::bang(Formula::disj(P, Q))),
                         Formula::quest(Formula::disj(Formula::bang(P), Formula::bang(Q))))),
        law("with box on the disjuncts", {dP, dQ},
            Formula::iff(Formula::bang(Formula::disj(P, Q)),
                         Formula::bang(Formula::disj(Formula::box(P), Formula::box(Q))))),
        law("box distributes over disjunction", {dP, dQ},
            Formula::iff(Formula::box(Formula::disj(P, Q)),
                         Formula::disj(Formula::box(P), Formula::box(Q))))},
       ""});

  out.push_back(
      {"exists",
       PrincipleKind::Law,
       law("canonical", {dP1},
           Formula::iff(Formula::bang(Formula::exists("v", MP1("v"))),
                        Formula::nabla(Formula::exists("v", Formula::bang(MP1("v")))))),
       {law("questioned on both sides", {dP1},
            Formula::iff(Formula::quest(Formula::bang(Formula::exists("v", MP1("v")))),
                         Formula::quest(Formula::exists("v", Formula::bang(MP1("v")))))),
        law("box distributes over the existential", {dP1},
            Formula::iff(Formula::box(Formula::exists("v", MP1("v"))),
                         Formula::exists("v", Formula::box(MP1("v")))))},
       ""});

  out.push_back(
      {"bang",
       PrincipleKind::Law,
       law("canonical", {dP, dQ},
           Formula::iff(Formula::bang(Formula::imp(P, Q)),
                        Formula::nabla(Formula::imp(Formula::bang(P), Formula::bang(Q))))),
       {law("questioned on both sides", {dP, dQ},
            Formula::iff(Formula::quest(Formula::bang(Formula::imp(P, Q))),
                         Formula::quest(Formula::imp(Formula::bang(P), Formula::bang(Q))))),
        law("proofs transfer along implications directly", {dP, dQ},
            Formula::iff(Formula::bang(Formula::imp(P, Q)),
                         Formula::imp(Formula::bang(P), Formula::bang(Q)))),
        law("box is the identity", {dP}, Formula::iff(Formula::box(P), P))},
       "counted as an equivalent of bot-rule in the tally"});

  out.push_back(
      {"quest-star",
       PrincipleKind::Law,
       law("canonical", {dA, dB},
           Formula::iff(Formula::imp(Formula::quest(A), Formula::quest(B)),
                        Formula::quest(Formula::imp(Formula::nabla(A), Formula::nabla(B))))),
       {law("specialized to banged propositions", {dP, dQ},
            Formula::iff(
                Formula::imp(Formula::box(P), Formula::box(Q)),
                Formula::quest(Formula::imp(Formula::bang(P), Formula::bang(Q))))),
        law("solubility implications are box-stable", {dA, dB},
            Formula::iff(Formula::imp(Formula::quest(A), Formula::quest(B)),
                         Formula::box(Formula::imp(Formula::quest(A), Formula::quest(B)))))},
       ""});

  out.push_back(
      {"forall-star",
       PrincipleKind::Law,
       law("canonical", {dA1},
           Formula::iff(Formula::forall("v", Formula::quest(MA1("v"))),
                        Formula::quest(Formula::forall("v", Formula::nabla(MA1("v")))))),
       {law("specialized to banged propositions", {dP1},
            Formula::iff(Formula::forall("v", Formula::box(MP1("v"))),
                         Formula::quest(Formula::forall("v", Formula::bang(MP1("v")))))),
        law("universal solubility is box-stable", {dA1},
            Formula::iff(Formula::forall("v", Formula::quest(MA1("v"))),
                         Formula::box(Formula::forall("v", Formula::quest(MA1("v")))))),
        law("box distributes over the universal", {dP1},
            Formula::iff(Formula::forall("v", Formula::box(MP1("v"))),
                         Formula::box(Formula::forall("v", MP1("v")))))},
       ""});

  out.push_back(
      {"or-star",
       PrincipleKind::Law,
       law("canonical", {dP, dQ},
           Formula::iff(Formula::disj(Formula::bang(P), Formula::bang(Q)),
                        Formula::bang(Formula::disj(Formula::box(P), Formula::box(Q))))),
       {law("specialized to solubility statements", {dA, dB},
            Formula::iff(
                Formula::disj(Formula::nabla(A), Formula::nabla(B)),
                Formula::bang(Formula::disj(Formula::quest(A), Formula::quest(B))))),
        law("banged disjunctions are closure-stable", {dP, dQ},
            Formula::iff(Formula::disj(Formula::bang(P), Formula::bang(Q)),
                         Formula::nabla(Formula::disj(Formula::bang(P), Formula::bang(Q))))),
        law("the closure modality distributes over disjunction", {dA, dB},
            Formula::iff(Formula::disj(Formula::nabla(A), Formula::nabla(B)),
                         Formula::nabla(Formula::disj(A, B))))},
       ""});

  out.push_back(
      {"exists-star",
       PrincipleKind::Law,
       law("canonical", {dP1},
           Formula::iff(Formula::exists("v", Formula::bang(MP1("v"))),
                        Formula::bang(Formula::exists("v", Formula::box(MP1("v")))))),
       {law("banged witnesses are closure-stable", {dP1},
            Formula::iff(Formula::exists("v", Formula::bang(MP1("v"))),
                         Formula::nabla(Formula::exists("v", Formula::bang(MP1("v")))))),
        law("the closure modality distributes over the existential", {dA1},
            Formula::iff(Formula::exists("v", Formula::nabla(MA1("v"))),
                         Formula::nabla(Formula::exists("v", MA1("v")))))},
       ""});

  out.push_back({"stability",
                 PrincipleKind::Law,
                 law("canonical", {dP},
                     Formula::iff(Formula::bang(Formula::neg(P)),
                                  Formula::neg(Formula::bang(P)))),
                 {},
                 ""});

  out.push_back(
      {"no-ignorabimus",
       PrincipleKind::Law,
       law("canonical", {dA},
           Formula::iff(Formula::quest(Formula::neg(A)), Formula::neg(Formula::quest(A)))),
       {law("the closure modality is double negation", {dA},
            Formula::iff(Formula::nabla(A), Formula::neg(Formula::neg(A))))},
       ""});

  out.push_back(
      {"edr",
       PrincipleKind::Rule,
       rule("reconstructed reading", {dA, dB}, {Formula::neg(Formula::conj(A, B))},
            Formula::iff(Formula::nabla(Formula::disj(A, B)),
                         Formula::disj(Formula::nabla(A), Formula::nabla(B)))),
       {},
       "the statement is reconstructed: from ~(A /\\ B) infer "
       "nabla(A \\/ B) <-> nabla A \\/ nabla B; fixed by disjointness of supports "
       "together with validity in every sheaf model and failure in a "
       "double-negation model"});

  out.push_back({"expr-1",
                 PrincipleKind::Law,
                 law("canonical", {dP, dQ},
                     Formula::iff(Formula::imp(P, Q),
                                  Formula::quest(Formula::imp(Formula::bang(P),
                                                              Formula::bang(Q))))),
                 {},
                 "equivalent to bang and to bot-rule"});
  out.push_back({"expr-2",
                 PrincipleKind::Law,
                 law("canonical", {dP, dQ},
                     Formula::iff(Formula::disj(P, Q),
                                  Formula::quest(Formula::disj(Formula::bang(P),
                                                               Formula::bang(Q))))),
                 {},
                 ""});
  out.push_back({"expr-3",
                 PrincipleKind::Law,
                 law("canonical", {dP1},
                     Formula::iff(Formula::exists("v", MP1("v")),
                                  Formula::quest(Formula::exists(
                                      "v", Formula::bang(MP1("v")))))),
                 {},
                 ""});
  out.push_back({"expr-4",
                 PrincipleKind::Law,
                 law("canonical", {dP1},
                     Formula::iff(Formula::forall("v", MP1("v")),
                                  Formula::quest(Formula::forall(
                                      "v", Formula::bang(MP1("v")))))),
                 {},
                 ""});

  out.push_back({"expr-1p",
                 PrincipleKind::Law,
                 law("canonical", {dA, dB},
                     Formula::iff(Formula::imp(A, B),
                                  Formula::bang(Formula::imp(Formula::quest(A),
                                                             Formula::quest(B))))),
                 {},
                 "equivalent to quest and top-rule taken together"});
  out.push_back({"expr-2p",
                 PrincipleKind::Law,
                 law("canonical", {dA, dB},
                     Formula::iff(Formula::disj(A, B),
                                  Formula::bang(Formula::disj(Formula::quest(A),
                                                              Formula::quest(B))))),
                 {},
                 ""});
  out.push_back({"expr-3p",
                 PrincipleKind::Law,
                 law("canonical", {dA1},
                     Formula::iff(Formula::exists("v", MA1("v")),
                                  Formula::bang(Formula::exists(
                                      "v", Formula::quest(MA1("v")))))),
                 {},
                 ""});
  out.push_back({"expr-4p",
                 PrincipleKind::Law,
                 law("canonical", {dA1},
                     Formula::iff(Formula::forall("v", MA1("v")),
                                  Formula::bang(Formula::forall(
                                      "v", Formula::quest(MA1("v")))))),
                 {},
                 ""});

  return out;
}

}  // namespace

const std::vector<Principle>& principle_catalog() {
  static const std::vector<Principle> catalog = build_catalog();
  return catalog;
}

const Principle* find_principle(const std::string& name) {
  for (const auto& p : principle_catalog())
    if (p.name == name) return &p;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Status table

namespace {

const char* kAlexandrovNote =
    "interiors of Alexandrov spaces commute with arbitrary intersections, so "
    "box distributes over every pointwise meet; no finite poset refutes it";
const char* kTKFiniteMeetNote =
    "over a finite domain, double negation distributes over the meet of "
    "regular opens, so the two sides always coincide";
const char* kSheafFiniteProductNote =
    "over a finite domain, the support of a finite product is the "
    "intersection of the supports, which is already open";

std::vector<StatusEntry> build_status() {
  struct Row {
    const char* name;
    Expectation et, tk, sheaf;
  };
  const Expectation H = Expectation::HoldsInAll, F = Expectation::FailsSomewhere;
  // Which principles hold where: the solubility-identity laws survive the
  // identity interpretation of ? (ET side), the proof-identity laws survive
  // the identity interpretation of ! (TK side), and only the exclusive
  // disjunction rule survives branching sheaves.
  std::vector<Row> rows = {
      {"top-rule", H, F, F},  {"bot-rule", F, H, F},   {"quest", H, H, F},
      {"forall", H, F, F},    {"or", F, H, F},         {"exists", F, H, F},
      {"bang", F, H, F},      {"quest-star", F, H, F}, {"forall-star", F, H, F},
      {"or-star", H, F, F},   {"exists-star", H, F, F},{"stability", F, H, F},
      {"no-ignorabimus", F, H, F},                     {"edr", H, F, H},
      {"expr-1", F, H, F},    {"expr-2", F, H, F},     {"expr-3", F, H, F},
      {"expr-4", F, H, F},    {"expr-1p", H, F, F},    {"expr-2p", H, F, F},
      {"expr-3p", H, F, F},   {"expr-4p", H, F, F},
  };
  std::vector<StatusEntry> out;
  auto refut = [&](const std::string& name, ModelClass c) -> std::pair<Refutability, std::string> {
    if (name == "forall-star" && (c == ModelClass::ET || c == ModelClass::Sheaf))
      return {Refutability::RequiresInfinite, kAlexandrovNote};
    if (name == "forall" && c == ModelClass::TK)
      return {Refutability::RequiresInfinite, kTKFiniteMeetNote};
    if (name == "forall" && c == ModelClass::Sheaf)
      return {Refutability::RequiresInfinite, kSheafFiniteProductNote};
    return {Refutability::FiniteWitness, ""};
  };
  for (const Row& r : rows) {
    for (auto [cls, expected] : std::initializer_list<std::pair<ModelClass, Expectation>>{
             {ModelClass::ET, r.et}, {ModelClass::TK, r.tk}, {ModelClass::Sheaf, r.sheaf}}) {
      StatusEntry e;
      e.principle = r.name;
      e.model_class = cls;
      e.expected = expected;
      if (expected == Expectation::FailsSomewhere) {
        auto [rf, note] = refut(r.name, cls);
        e.refutability = rf;
        e.note = note;
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace

const std::vector<StatusEntry>& status_table() {
  static const std::vector<StatusEntry> table = build_status();
  return table;
}

const StatusEntry* lookup_status(const std::string& principle, ModelClass c) {
  for (const auto& e : status_table())
    if (e.principle == principle && e.model_class == c) return &e;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Instance generation for principle forms

namespace {

struct FormInstance {
  std::vector<Formula> premises;
  Formula statement;
  std::string description;
  std::set<std::string> deps;  // atoms the instance mentions
  std::vector<std::pair<Sort, int>> pool_choice;
  MetaAssignment assignment;
};

std::vector<FormInstance> instances_of(const PrincipleForm& form, const InstanceGen& gen) {
  std::vector<FormInstance> out;
  std::vector<int> pick(form.metavars.size(), 0);
  for (;;) {
    MetaAssignment ma;
    for (size_t i = 0; i < form.metavars.size(); ++i) {
      const MetaVarDecl& mv = form.metavars[i];
      const Formula& body = gen.pool(mv.sort)[pick[i]];
      if (mv.arity == 0) {
        Var fresh = "x" + mv.name;
        ma.formulas[mv.name] = {{}, substitute(body, {{"x", fresh}})};
      } else {
        ma.formulas[mv.name] = {{"x"}, body};
      }
    }
    FormInstance inst;
    inst.assignment = ma;
    for (size_t i = 0; i < form.metavars.size(); ++i)
      inst.pool_choice.emplace_back(form.metavars[i].sort, pick[i]);
    Schema shell{"form", form.metavars, {}, {}};
    for (const Formula& prem : form.premises) {
      shell.pattern = prem;
      inst.premises.push_back(instantiate_schema(shell, ma, /*close=*/true));
    }
    shell.pattern = form.statement;
    inst.statement = instantiate_schema(shell, ma, /*close=*/true);
    inst.deps = atoms_of(inst.statement);
    for (const Formula& p : inst.premises) {
      auto more = atoms_of(p);
      inst.deps.insert(more.begin(), more.end());
    }
    std::string desc;
    for (const Formula& p : inst.premises) desc += print(p) + " ||- ";
    desc += print(inst.statement);
    inst.description = desc;
    out.push_back(std::move(inst));

    size_t i = 0;
    for (; i < form.metavars.size(); ++i) {
      if (++pick[i] < static_cast<int>(gen.pool(form.metavars[i].sort).size())) break;
      pick[i] = 0;
    }
    if (i == form.metavars.size()) break;
  }
  return out;
}

template <typename ValidFn>
CheckResult check_forms(const Principle& pr, const InstanceGen& gen, bool all_forms,
                        ValidFn&& is_valid) {
  std::vector<const PrincipleForm*> forms = {&pr.canonical};
  if (all_forms)
    for (const auto& f : pr.equivalent_forms) forms.push_back(&f);
  for (const PrincipleForm* form : forms) {
    for (const FormInstance& inst : instances_of(*form, gen)) {
      bool premises_ok = true;
      for (const Formula& p : inst.premises)
        if (!is_valid(p)) {
          premises_ok = false;
          break;
        }
      if (!premises_ok) continue;
      if (!is_valid(inst.statement)) {
        CheckResult r;
        r.holds = false;
        for (const Formula& p : inst.premises) r.premises.push_back(print(p));
        r.statement = print(inst.statement);
        return r;
      }
    }
  }
  return {};
}

}  // namespace

CheckResult check_principle(const ETModel& m, const Principle& pr, const InstanceGen& gen,
                            bool all_forms) {
  return check_forms(pr, gen, all_forms, [&](const Formula& f) { return valid(m, f); });
}

CheckResult check_principle(const TKModel& m, const Principle& pr, const InstanceGen& gen,
                            bool all_forms) {
  return check_forms(pr, gen, all_forms, [&](const Formula& f) { return valid(m, f); });
}

CheckResult check_principle(const SheafModel& m, const Principle& pr, const InstanceGen& gen,
                            bool all_forms) {
  return check_forms(pr, gen, all_forms,
                     [&](const Formula& f) { return valid_sheaf(m, f); });
}

// ---------------------------------------------------------------------------
// Countermodel search
//
// A model refutes a closed instance exactly when some environment refutes its
// matrix, and the values of that environment assemble into a model within the
// bounds (one domain slot per metavariable, since premises are universal
// closures and restrict to submodels). The search therefore scans, per
// instance, the combinations of underlying atom values, in lexicographic
// order, and re-checks the assembled candidate model. Deterministic.

namespace {

struct SpaceScan {
  bool found = false;
  SearchCensus census;
  int dsize = 0;
  // Per slot: which atom ("a"/"p"/"") and which value index.
  std::vector<std::pair<std::string, int>> slots;
  CheckResult counterinstance;
};

// Which atom a pool formula reads, if any.
std::string pool_atom(const Formula& f) {
  auto atoms = atoms_of(f);
  if (atoms.count("a")) return "a";
  if (atoms.count("p")) return "p";
  return "";
}

SpaceScan scan_space(const Principle& pr, ModelClass cls, const SpacePtr& space,
                     int max_domain, int max_stalk, const InstanceGen& gen) {
  SpaceScan result;
  const FiniteSpace& X = *space;

  std::vector<StalkSheaf> sheaves;
  if (cls == ModelClass::Sheaf) sheaves = enumerate_sheaves(space, max_stalk);
  std::vector<PointSet> subsets;
  for (PointSet ss = 0; ss <= X.all(); ++ss) subsets.push_back(ss);
  const std::vector<PointSet>& opens = X.opens();
  std::vector<PointSet> regs = X.regular_opens();

  size_t a_count = cls == ModelClass::Sheaf ? sheaves.size() : opens.size();
  size_t p_count = cls == ModelClass::TK ? regs.size() : subsets.size();
  auto count_for = [&](const std::string& atom) -> size_t {
    if (atom == "a") return a_count;
    if (atom == "p") return p_count;
    return 1;
  };

  Signature sig = corpus_signature();
  const PrincipleForm& form = pr.canonical;

  // Pool assignments, in the fixed enumeration order.
  std::vector<int> pick(form.metavars.size(), 0);
  for (;;) {
    // Slots: one domain element per 0-ary metavariable; unary metavariables
    // range over families covering the whole domain.
    int zero_ary = 0;
    bool has_unary = false;
    for (const auto& mv : form.metavars) {
      if (mv.arity == 0) ++zero_ary;
      else has_unary = true;
    }
    int dsize = has_unary ? max_domain : std::max(1, std::min(zero_ary, max_domain));

    std::vector<std::string> domain;
    for (int d = 0; d < dsize; ++d) domain.push_back("d" + std::to_string(d));

    // Build the instance formulas with each 0-ary metavariable owning one
    // closure variable; the check below quantifies over the whole domain
    // anyway, so sharing slots (when metavars exceed the domain bound) only
    // narrows the scanned candidates.
    MetaAssignment ma;
    std::vector<std::string> slot_atom(dsize, "");
    std::vector<const Formula*> slot_pool(dsize, nullptr);
    std::string unary_atom;
    const Formula* unary_pool = nullptr;
    int next_slot = 0;
    for (size_t i = 0; i < form.metavars.size(); ++i) {
      const MetaVarDecl& mv = form.metavars[i];
      const Formula& body = gen.pool(mv.sort)[pick[i]];
      if (mv.arity == 0) {
        int slot = std::min(next_slot, dsize - 1);
        ++next_slot;
        Var fresh = "x" + mv.name;
        ma.formulas[mv.name] = {{}, substitute(body, {{"x", fresh}})};
        std::string atom = pool_atom(body);
        if (!atom.empty() && slot_atom[slot].empty()) {
          slot_atom[slot] = atom;
          slot_pool[slot] = &body;
        } else if (!atom.empty() && slot_atom[slot] == atom) {
          // Two metavariables forced onto one slot read the same atom; the
          // diagonal combos below remain sound, merely narrower.
        }
        (void)slot_pool;
      } else {
        ma.formulas[mv.name] = {{"x"}, body};
        unary_atom = pool_atom(body);
        unary_pool = &body;
      }
    }
    (void)unary_pool;

    Schema shell{"form", form.metavars, {}, {}};
    std::vector<Formula> premises;
    for (const Formula& prem : form.premises) {
      shell.pattern = prem;
      premises.push_back(instantiate_schema(shell, ma, /*close=*/true));
    }
    shell.pattern = form.statement;
    Formula statement = instantiate_schema(shell, ma, /*close=*/true);

    // Value combos: per slot one value of its atom; a unary metavariable
    // additionally makes every slot range over its atom's values.
    std::vector<size_t> radix(dsize, 1);
    for (int d = 0; d < dsize; ++d) {
      if (has_unary) {
        slot_atom[d] = unary_atom;
        radix[d] = count_for(unary_atom);
      } else {
        radix[d] = count_for(slot_atom[d]);
      }
    }

    ETModel et;
    TKModel tk;
    SheafModel sh;
    for (auto* mm : std::initializer_list<SetModel*>{&et, &tk}) {
      mm->space = space;
      mm->domain = domain;
      mm->signature = sig;
    }
    sh.space = space;
    sh.domain = domain;
    sh.signature = sig;

    std::vector<int> combo(dsize, 0);
    for (;;) {
      ++result.census.models;
      ++result.census.checks;

      bool fails = false;
      auto run = [&](auto&& is_valid) {
        for (const Formula& prem : premises)
          if (!is_valid(prem)) return false;
        return !is_valid(statement);
      };
      auto slot_indices = [&](int d) {
        size_t a_idx = slot_atom[d] == "a" ? combo[d] : 0;
        size_t p_idx = slot_atom[d] == "p" ? combo[d] : 0;
        return std::make_pair(a_idx, p_idx);
      };
      if (cls == ModelClass::ET) {
        for (int d = 0; d < dsize; ++d) {
          auto [ai, pi] = slot_indices(d);
          et.prob_atoms["a"][{d}] = opens[ai];
          et.prop_atoms["p"][{d}] = subsets[pi];
        }
        fails = run([&](const Formula& f) { return valid(et, f); });
      } else if (cls == ModelClass::TK) {
        for (int d = 0; d < dsize; ++d) {
          auto [ai, pi] = slot_indices(d);
          tk.prob_atoms["a"][{d}] = opens[ai];
          tk.prop_atoms["p"][{d}] = regs[pi];
        }
        fails = run([&](const Formula& f) { return valid(tk, f); });
      } else {
        for (int d = 0; d < dsize; ++d) {
          auto [ai, pi] = slot_indices(d);
          sh.prob_atoms["a"][{d}] = sheaves[ai];
          sh.prop_atoms["p"][{d}] = subsets[pi];
        }
        fails = run([&](const Formula& f) { return valid_sheaf(sh, f); });
      }

      if (fails) {
        result.found = true;
        result.dsize = dsize;
        for (int d = 0; d < dsize; ++d) result.slots.emplace_back(slot_atom[d], combo[d]);
        result.counterinstance.holds = false;
        for (const Formula& prem : premises)
          result.counterinstance.premises.push_back(print(prem));
        result.counterinstance.statement = print(statement);
        return result;
      }

      int d = dsize - 1;
      for (; d >= 0; --d) {
        if (++combo[d] < static_cast<int>(radix[d])) break;
        combo[d] = 0;
      }
      if (d < 0) break;
    }

    size_t i = 0;
    for (; i < form.metavars.size(); ++i) {
      if (++pick[i] < static_cast<int>(gen.pool(form.metavars[i].sort).size())) break;
      pick[i] = 0;
    }
    if (i == form.metavars.size()) break;
  }
  return result;
}

}  // namespace

SearchOutcome find_countermodel(const Principle& pr, ModelClass cls,
                                const SearchBounds& bounds, const InstanceGen& gen) {
  SearchOutcome out;
  const StatusEntry* status = lookup_status(pr.name, cls);

  std::vector<FiniteSpace> raw_spaces = enumerate_spaces(bounds.max_points);
  std::vector<SpacePtr> spaces;
  for (FiniteSpace& s : raw_spaces)
    spaces.push_back(std::make_shared<const FiniteSpace>(std::move(s)));

  int jobs = std::max(1, bounds.jobs);
  std::vector<SpaceScan> scans(spaces.size());
  bool stop = false;
  for (size_t base = 0; base < spaces.size() && !stop; base += jobs) {
    size_t end = std::min(spaces.size(), base + jobs);
    std::vector<std::future<SpaceScan>> futs;
    for (size_t i = base; i < end; ++i)
      futs.push_back(std::async(std::launch::async, [&, i] {
        return scan_space(pr, cls, spaces[i], bounds.max_domain, bounds.max_stalk, gen);
      }));
    for (size_t i = base; i < end; ++i) {
      scans[i] = futs[i - base].get();
      out.census.models += scans[i].census.models;
      out.census.checks += scans[i].census.checks;
      ++out.census.spaces;
      if (scans[i].found) stop = true;
    }
  }

  for (size_t i = 0; i < spaces.size(); ++i) {
    if (!scans[i].found) continue;
    const SpacePtr& space = spaces[i];
    const SpaceScan& scan = scans[i];
    std::vector<std::string> domain;
    for (int d = 0; d < scan.dsize; ++d) domain.push_back("d" + std::to_string(d));
    Signature sig = corpus_signature();
    std::vector<PointSet> subsets;
    for (PointSet ss = 0; ss <= space->all(); ++ss) subsets.push_back(ss);

    out.found = true;
    out.counterinstance = scan.counterinstance;
    auto fill = [&](auto& m, auto a_value, auto p_value) {
      m.space = space;
      m.domain = domain;
      m.signature = sig;
      for (int d = 0; d < scan.dsize; ++d) {
        int a_idx = scan.slots[d].first == "a" ? scan.slots[d].second : 0;
        int p_idx = scan.slots[d].first == "p" ? scan.slots[d].second : 0;
        m.prob_atoms["a"][{d}] = a_value(a_idx);
        m.prop_atoms["p"][{d}] = p_value(p_idx);
      }
    };
    if (cls == ModelClass::Sheaf) {
      std::vector<StalkSheaf> sheaves = enumerate_sheaves(space, bounds.max_stalk);
      SheafModel m;
      fill(m, [&](int i2) { return sheaves[i2]; }, [&](int i2) { return subsets[i2]; });
      out.sheaf = std::move(m);
    } else if (cls == ModelClass::ET) {
      ETModel m;
      fill(m, [&](int i2) { return space->opens()[i2]; },
           [&](int i2) { return subsets[i2]; });
      out.et = std::move(m);
    } else {
      TKModel m;
      std::vector<PointSet> regs = space->regular_opens();
      fill(m, [&](int i2) { return space->opens()[i2]; }, [&](int i2) { return regs[i2]; });
      out.tk = std::move(m);
    }
    return out;
  }

  if (status && status->refutability == Refutability::RequiresInfinite)
    out.exhaustion_note = status->note;
  return out;
}

// ---------------------------------------------------------------------------
// Implication matrix

namespace {

std::vector<AuxScheme> build_aux() {
  std::vector<AuxScheme> out;
  Formula A = MA(), P = MP_();
  out.push_back({"semi-decidability", {dP},
                 Formula::quest(Formula::disj(Formula::bang(P),
                                              Formula::bang(Formula::neg(P))))});
  out.push_back({"decidability", {dA}, Formula::disj(A, Formula::neg(A))});
  out.push_back({"nn-shift", {dA1},
                 Formula::imp(Formula::forall("v", Formula::neg(Formula::neg(MA1("v")))),
                              Formula::neg(Formula::neg(Formula::forall("v", MA1("v")))))});
  out.push_back({"strong-markov", {dA1},
                 Formula::imp(Formula::neg(Formula::neg(Formula::exists("v", MA1("v")))),
                              Formula::exists("v", Formula::neg(Formula::neg(MA1("v")))))});
  out.push_back({"weak-em", {dA},
                 Formula::disj(Formula::neg(A), Formula::neg(Formula::neg(A)))});
  // Coupled statements: both star and plain principles at once.
  Formula B = MB(), Q = MQ();
  out.push_back({"coupled-quest", {dA, dB},
                 Formula::iff(Formula::quest(Formula::imp(A, B)),
                              Formula::imp(Formula::quest(A), Formula::quest(B)))});
  out.push_back({"coupled-forall", {dA1},
                 Formula::iff(Formula::quest(Formula::forall("v", MA1("v"))),
                              Formula::forall("v", Formula::quest(MA1("v"))))});
  out.push_back({"coupled-or", {dP, dQ},
                 Formula::iff(Formula::bang(Formula::disj(P, Q)),
                              Formula::disj(Formula::bang(P), Formula::bang(Q)))});
  out.push_back({"coupled-exists", {dP1},
                 Formula::iff(Formula::bang(Formula::exists("v", MP1("v"))),
                              Formula::exists("v", Formula::bang(MP1("v"))))});
  return out;
}

Formula body_of(const MetaAssignment& ma, const std::string& name) {
  return ma.formulas.at(name).body;
}

Formula box_identity_at(const Formula& f) {
  return universal_closure(Formula::iff(Formula::box(f), f));
}

Formula nabla_identity_at(const Formula& f) {
  return universal_closure(Formula::iff(Formula::nabla(f), f));
}

// The possibility-form of the bot-rule at q := (dia ~f -> ~f); its premise is
// a law, so validating the rule instance pins ~f closed, i.e. f box-stable.
SupportInstance dia_rule_at(const Formula& f) {
  Formula q = Formula::imp(Formula::dia(Formula::neg(f)), Formula::neg(f));
  return {{universal_closure(Formula::dia(q))}, universal_closure(q)};
}

std::vector<Implication> build_implications() {
  // Where a proof substitutes compounds of the conclusion's metavariables
  // into a premise principle, the corresponding support instances keep the
  // generated premise set closed under those substitutions.
  auto box_id_support = [](std::vector<const char*> parts, bool with_imp) {
    return [parts, with_imp](const MetaAssignment& ma) {
      std::vector<SupportInstance> out;
      std::vector<Formula> at;
      for (const char* p : parts) at.push_back(body_of(ma, p));
      if (with_imp && at.size() == 2) at.push_back(Formula::imp(at[0], at[1]));
      for (const Formula& f : at) out.push_back({{}, box_identity_at(f)});
      return out;
    };
  };
  auto dia_rule_support = [](const MetaAssignment& ma) {
    std::vector<SupportInstance> out;
    Formula p = body_of(ma, "P"), q = body_of(ma, "Q");
    for (const Formula& f : {p, q, Formula::imp(p, q)}) out.push_back(dia_rule_at(f));
    return out;
  };
  auto nabla_id_support = [](Formula::Kind compound) {
    return [compound](const MetaAssignment& ma) {
      std::vector<SupportInstance> out;
      if (ma.formulas.count("B")) {
        Formula a = body_of(ma, "A"), b = body_of(ma, "B");
        Formula comp = compound == Formula::Kind::Imp ? Formula::imp(a, b)
                                                      : Formula::disj(a, b);
        for (const Formula& f : {a, b, comp}) out.push_back({{}, nabla_identity_at(f)});
      } else {
        Formula a = body_of(ma, "A");  // unary family A(x)
        Formula comp = compound == Formula::Kind::Exists
                           ? Formula::exists("v", substitute(a, {{"x", "v"}}))
                           : Formula::forall("v", substitute(a, {{"x", "v"}}));
        out.push_back({{}, nabla_identity_at(a)});
        out.push_back({{}, nabla_identity_at(comp)});
      }
      return out;
    };
  };
  auto lem_top_rule_support = [](const MetaAssignment& ma) {
    Formula a = body_of(ma, "A");
    Formula lem = Formula::disj(a, Formula::neg(a));
    std::vector<SupportInstance> out;
    out.push_back({{universal_closure(Formula::quest(lem))}, universal_closure(lem)});
    return out;
  };
  auto weak_em_support = [](const MetaAssignment& ma) {
    Formula a = body_of(ma, "A");
    Formula na = Formula::neg(a), nna = Formula::neg(Formula::neg(a));
    std::vector<SupportInstance> out;
    out.push_back({{universal_closure(Formula::neg(Formula::conj(na, nna)))},
                   universal_closure(Formula::iff(
                       Formula::nabla(Formula::disj(na, nna)),
                       Formula::disj(Formula::nabla(na), Formula::nabla(nna))))});
    return out;
  };
  auto or_lem_support = [](const MetaAssignment& ma) {
    Formula p = body_of(ma, "P");
    Formula np = Formula::neg(p);
    std::vector<SupportInstance> out;
    out.push_back({{}, universal_closure(Formula::iff(
                           Formula::quest(Formula::bang(Formula::disj(p, np))),
                           Formula::quest(Formula::disj(Formula::bang(p),
                                                        Formula::bang(np)))))});
    return out;
  };

  std::vector<Implication> out = {
      {{"bang"}, "stability", "proof-identity collapses negated proofs"},
      {{"or"}, "stability", "via semi-decidability of every proposition"},
      {{"or"}, "semi-decidability", "from excluded middle under the or-law",
       or_lem_support},
      {{"quest-star"}, "no-ignorabimus", "insolubility statements stabilize"},
      {{"or-star"}, "edr", "disjoint closures split disjunctions"},
      {{"quest-star"}, "quest", "the starred law subsumes the plain one"},
      {{"quest-star"}, "coupled-quest", "equivalent statement of the starred law"},
      {{"coupled-quest"}, "quest-star", "equivalent statement of the starred law"},
      {{"no-ignorabimus"}, "quest", "double negation distributes over implication"},
      {{"bang"}, "bot-rule", "two statements of one principle"},
      {{"bot-rule"}, "bang", "two statements of one principle", dia_rule_support},
      {{"bang"}, "expr-1", "box-identity makes implications expressible",
       box_id_support({"P", "Q"}, true)},
      {{"expr-1"}, "bang", "box-identity makes implications expressible"},
      {{"bang"}, "expr-2", "box-identity plus the or-distribution law",
       box_id_support({"P", "Q"}, false)},
      {{"bang"}, "expr-3", "box-identity plus the exists-distribution law"},
      {{"bang"}, "expr-4", "box-identity plus the forall-distribution law"},
      {{"expr-1"}, "quest-star", "stabilize both sides"},
      {{"expr-2"}, "or", "stabilize both sides"},
      {{"expr-3"}, "exists", "stabilize both sides"},
      {{"expr-4"}, "forall-star", "stabilize both sides"},
      {{"quest", "top-rule"}, "expr-1p", "closure-identity expresses implication",
       nabla_id_support(Formula::Kind::Imp)},
      {{"expr-1p"}, "quest", "closure-identity expresses implication"},
      {{"expr-1p"}, "top-rule", "closure-identity expresses implication"},
      {{"quest", "top-rule"}, "expr-2p", "closure-identity plus distribution",
       nabla_id_support(Formula::Kind::Or)},
      {{"quest", "top-rule"}, "expr-3p", "closure-identity plus distribution",
       nabla_id_support(Formula::Kind::Exists)},
      {{"quest", "top-rule"}, "expr-4p", "closure-identity plus distribution",
       nabla_id_support(Formula::Kind::Forall)},
      {{"expr-2p"}, "or-star", "stabilize both sides"},
      {{"expr-3p"}, "exists-star", "stabilize both sides"},
      {{"expr-4p"}, "forall", "stabilize both sides"},
      {{"no-ignorabimus", "top-rule"}, "decidability", "double negation elimination",
       lem_top_rule_support},
      {{"no-ignorabimus", "decidability"}, "top-rule", "double negation elimination"},
      {{"no-ignorabimus", "forall"}, "nn-shift", "the universal law under double negation"},
      {{"no-ignorabimus", "nn-shift"}, "forall", "the universal law under double negation"},
      {{"no-ignorabimus", "exists-star"}, "strong-markov",
       "the existential law under double negation"},
      {{"no-ignorabimus", "strong-markov"}, "exists-star",
       "the existential law under double negation"},
      {{"no-ignorabimus", "edr"}, "weak-em", "exclusive disjunction of a negation pair",
       weak_em_support},
      {{"forall", "forall-star"}, "coupled-forall", "the two halves combine"},
      {{"coupled-forall"}, "forall", "one half of the combined law"},
      {{"coupled-forall"}, "forall-star", "the other half of the combined law"},
      {{"or", "or-star"}, "coupled-or", "the two halves combine"},
      {{"exists", "exists-star"}, "coupled-exists", "the two halves combine"},
  };
  return out;
}

}  // namespace

const std::vector<AuxScheme>& aux_schemes() {
  static const std::vector<AuxScheme> aux = build_aux();
  return aux;
}

const std::vector<Implication>& implication_table() {
  static const std::vector<Implication> table = build_implications();
  return table;
}

namespace {

const AuxScheme* find_aux(const std::string& name) {
  for (const auto& a : aux_schemes())
    if (a.name == name) return &a;
  return nullptr;
}

// Validity of a named statement (principle or aux scheme) on one model.
template <typename ValidFn>
bool validates(const std::string& name, const InstanceGen& gen, bool all_forms,
               ValidFn&& is_valid) {
  if (const Principle* pr = find_principle(name)) {
    return check_forms(*pr, gen, all_forms, is_valid).holds;
  }
  const AuxScheme* aux = find_aux(name);
  if (!aux) throw std::runtime_error("unknown statement: " + name);
  PrincipleForm form{"aux", aux->metavars, {}, aux->statement};
  for (const FormInstance& inst : instances_of(form, gen))
    if (!is_valid(inst.statement)) return false;
  return true;
}

}  // namespace

MatrixReport implication_matrix_check(const CorpusBounds& bounds, const InstanceGen& gen) {
  MatrixReport report;
  for (const Implication& imp : implication_table()) report.entries.push_back({imp});

  std::set<std::string> names;
  for (const Implication& imp : implication_table()) {
    for (const auto& prem : imp.premises) names.insert(prem);
    names.insert(imp.conclusion);
  }
  // The premise pools extend the conclusion pools (which stay a prefix, so
  // value indices agree) with the stabilization substitutions the proofs
  // apply: banged and negated variants of the pool entries.
  InstanceGen premise_gen = gen;
  {
    Signature sig = corpus_signature();
    for (const char* text : {"!~p(x)", "!box p(x)", "!ff", "!tt"})
      premise_gen.problem_pool.push_back(parse(text, sig));
    for (const char* text : {"~?a(x)", "~~p(x)", "~box p(x)"})
      premise_gen.prop_pool.push_back(parse(text, sig));
  }
  // Premises are validated with every equivalent form over the extended
  // pools, conclusions with the canonical scheme over the given pools.
  std::map<std::string, std::vector<FormInstance>> premise_instances, conclusion_instances;
  for (const std::string& name : names) {
    if (const Principle* pr = find_principle(name)) {
      premise_instances[name] = instances_of(pr->canonical, premise_gen);
      for (const auto& form : pr->equivalent_forms) {
        auto more = instances_of(form, premise_gen);
        premise_instances[name].insert(premise_instances[name].end(), more.begin(),
                                       more.end());
      }
      conclusion_instances[name] = instances_of(pr->canonical, gen);
    } else if (const AuxScheme* aux = find_aux(name)) {
      PrincipleForm form{"aux", aux->metavars, {}, aux->statement};
      premise_instances[name] = instances_of(form, premise_gen);
      conclusion_instances[name] = instances_of(form, gen);
    } else {
      throw std::runtime_error("unknown statement: " + name);
    }
  }
  // Support instances, prebuilt per (implication, conclusion instance).
  std::vector<std::vector<std::vector<SupportInstance>>> supports(report.entries.size());
  for (size_t e = 0; e < report.entries.size(); ++e) {
    const Implication& imp = report.entries[e].implication;
    const auto& concl = conclusion_instances.at(imp.conclusion);
    supports[e].resize(concl.size());
    if (imp.support)
      for (size_t i = 0; i < concl.size(); ++i)
        supports[e][i] = imp.support(concl[i].assignment);
  }

  uint64_t fnv = 0xcbf29ce484222325ull;
  auto mixh = [](uint64_t h, uint64_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  };

  for (FiniteSpace raw : enumerate_spaces(bounds.max_points)) {
    SpacePtr space = std::make_shared<const FiniteSpace>(std::move(raw));
    for (ModelClass cls : {ModelClass::ET, ModelClass::TK, ModelClass::Sheaf}) {
      std::unordered_map<uint64_t, bool> memo;
      std::map<std::string, size_t> refuter_hint;
      for (int dsize = 1; dsize <= bounds.max_domain; ++dsize) {
        ModelVisitor visitor;
        auto handle = [&](auto&& is_valid, auto&& family_id, const std::string& desc) {
          std::vector<uint64_t> prob_ids, prop_ids;
          for (const Formula& f : premise_gen.problem_pool)
            for (int d = 0; d < dsize; ++d) prob_ids.push_back(family_id(f, d));
          for (const Formula& f : premise_gen.prop_pool)
            for (int d = 0; d < dsize; ++d) prop_ids.push_back(family_id(f, d));

          auto value_key = [&](const FormInstance& inst, uint64_t salt) {
            uint64_t key = mixh(fnv, salt);
            key = mixh(key, reinterpret_cast<uintptr_t>(&inst));
            for (const auto& [sort, idx] : inst.pool_choice)
              for (int d = 0; d < dsize; ++d)
                key = mixh(key,
                           (sort == Sort::Problem ? prob_ids : prop_ids)[idx * dsize + d]);
            return key;
          };
          auto check_pair = [&](const std::vector<Formula>& premises,
                                const Formula& statement) {
            for (const Formula& prem : premises)
              if (!is_valid(prem)) return true;  // rule instance holds vacuously
            return is_valid(statement);
          };
          auto instance_valid = [&](const FormInstance& inst, uint64_t salt) {
            uint64_t key = value_key(inst, salt);
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
            bool ok = check_pair(inst.premises, inst.statement);
            memo[key] = ok;
            return ok;
          };
          std::map<std::string, bool> name_cache;
          auto name_holds = [&](const std::string& name) {
            auto it = name_cache.find(name);
            if (it != name_cache.end()) return it->second;
            const auto& list = premise_instances.at(name);
            size_t hint = refuter_hint.count(name) ? refuter_hint[name] : 0;
            bool v = true;
            if (hint < list.size() && !instance_valid(list[hint], 1)) {
              v = false;
            } else {
              for (size_t i = 0; i < list.size(); ++i)
                if (!instance_valid(list[i], 1)) {
                  v = false;
                  refuter_hint[name] = i;
                  break;
                }
            }
            name_cache[name] = v;
            return v;
          };
          for (size_t e = 0; e < report.entries.size(); ++e) {
            MatrixEntry& entry = report.entries[e];
            if (entry.violated) continue;
            ++entry.models_checked;
            bool premises_ok = true;
            for (const std::string& prem : entry.implication.premises)
              if (!name_holds(prem)) {
                premises_ok = false;
                break;
              }
            if (!premises_ok) continue;
            const auto& concl = conclusion_instances.at(entry.implication.conclusion);
            for (size_t i = 0; i < concl.size(); ++i) {
              bool supported = true;
              for (const SupportInstance& sup : supports[e][i])
                if (!check_pair(sup.premises, sup.statement)) {
                  supported = false;
                  break;
                }
              if (!supported) continue;
              if (!instance_valid(concl[i], 2)) {
                entry.violated = true;
                entry.detail = desc + " validates the premises but refutes " +
                               print(concl[i].statement);
                break;
              }
            }
          }
          return true;
        };
        visitor.et = [&](const ETModel& m) {
          return handle([&](const Formula& f) { return valid(m, f); },
                        [&](const Formula& f, int d) {
                          return static_cast<uint64_t>(eval_et(m, f, {{"x", d}}));
                        },
                        "et model");
        };
        visitor.tk = [&](const TKModel& m) {
          return handle([&](const Formula& f) { return valid(m, f); },
                        [&](const Formula& f, int d) {
                          return static_cast<uint64_t>(eval_tk(m, f, {{"x", d}}));
                        },
                        "tk model");
        };
        visitor.sheaf = [&](const SheafModel& m) {
          return handle([&](const Formula& f) { return valid_sheaf(m, f); },
                        [&](const Formula& f, int d) {
                          SheafValue v = eval_sheaf(m, f, {{"x", d}});
                          return v.sort == Sort::Problem ? (0x100000000ull | v.sheaf)
                                                         : static_cast<uint64_t>(v.set);
                        },
                        "sheaf model");
        };
        for_each_model(cls, space, dsize, bounds.max_stalk, /*dedupe=*/true, visitor);
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Expected-versus-computed status

StatusReport principles_status(const CorpusBounds& corpus_bounds,
                               const SearchBounds& search_bounds) {
  StatusReport report;
  InstanceGen gen = InstanceGen::standard();

  for (const StatusEntry& entry : status_table()) {
    StatusComputation row;
    row.entry = entry;
    const Principle* pr = find_principle(entry.principle);
    if (!pr) throw std::runtime_error("catalog is missing " + entry.principle);

    if (entry.expected == Expectation::HoldsInAll) {
      bool counterexample = false;
      std::string where;
      for (FiniteSpace raw : enumerate_spaces(corpus_bounds.max_points)) {
        if (counterexample) break;
        SpacePtr space = std::make_shared<const FiniteSpace>(std::move(raw));
        for (int dsize = 1; dsize <= corpus_bounds.max_domain && !counterexample; ++dsize) {
          ModelVisitor visitor;
          visitor.et = [&](const ETModel& m) {
            CheckResult r = check_principle(m, *pr, gen, /*all_forms=*/true);
            if (!r.holds) { counterexample = true; where = r.statement; }
            return !counterexample;
          };
          visitor.tk = [&](const TKModel& m) {
            CheckResult r = check_principle(m, *pr, gen, /*all_forms=*/true);
            if (!r.holds) { counterexample = true; where = r.statement; }
            return !counterexample;
          };
          visitor.sheaf = [&](const SheafModel& m) {
            CheckResult r = check_principle(m, *pr, gen, /*all_forms=*/true);
            if (!r.holds) { counterexample = true; where = r.statement; }
            return !counterexample;
          };
          for_each_model(entry.model_class, space, dsize, corpus_bounds.max_stalk,
                         /*dedupe=*/true, visitor);
        }
      }
      row.matches = !counterexample;
      row.computed = counterexample ? "counterinstance found: " + where
                                    : "zero counterinstances on the corpus";
    } else {
      SearchOutcome outcome = find_countermodel(*pr, entry.model_class, search_bounds, gen);
      if (entry.refutability == Refutability::FiniteWitness) {
        row.matches = outcome.found;
        row.computed = outcome.found ? "countermodel found" : "search exhausted unexpectedly";
      } else {
        row.matches = !outcome.found;
        row.computed = outcome.found
                           ? "unexpected finite countermodel"
                           : "search exhausted; " + entry.note;
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace qhc

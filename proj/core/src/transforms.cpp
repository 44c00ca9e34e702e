#include "qhc/transforms.hpp"

namespace qhc {

ModalFormula ModalFormula::make(Node n) {
  ModalFormula f{std::make_shared<const Node>(std::move(n))};
  return f;
}

ModalFormula ModalFormula::atom(std::string name, std::vector<Var> args) {
  return make({Kind::Atom, std::move(name), std::move(args), nullptr, nullptr});
}
ModalFormula ModalFormula::tt() { return make({Kind::TT, {}, {}, nullptr, nullptr}); }
ModalFormula ModalFormula::ff() { return make({Kind::FF, {}, {}, nullptr, nullptr}); }
ModalFormula ModalFormula::conj(ModalFormula l, ModalFormula r) {
  return make({Kind::And, {}, {}, std::move(l.node_), std::move(r.node_)});
}
ModalFormula ModalFormula::disj(ModalFormula l, ModalFormula r) {
  return make({Kind::Or, {}, {}, std::move(l.node_), std::move(r.node_)});
}
ModalFormula ModalFormula::imp(ModalFormula l, ModalFormula r) {
  return make({Kind::Imp, {}, {}, std::move(l.node_), std::move(r.node_)});
}
ModalFormula ModalFormula::forall(Var v, ModalFormula body) {
  return make({Kind::Forall, std::move(v), {}, nullptr, std::move(body.node_)});
}
ModalFormula ModalFormula::exists(Var v, ModalFormula body) {
  return make({Kind::Exists, std::move(v), {}, nullptr, std::move(body.node_)});
}
ModalFormula ModalFormula::box(ModalFormula body) {
  return make({Kind::Box, {}, {}, nullptr, std::move(body.node_)});
}

bool ModalFormula::operator==(const ModalFormula& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  if (node_->kind != other.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Atom:
      return node_->name == other.node_->name && node_->args == other.node_->args;
    case Kind::TT:
    case Kind::FF:
      return true;
    case Kind::And:
    case Kind::Or:
    case Kind::Imp:
      return lhs() == other.lhs() && rhs() == other.rhs();
    case Kind::Forall:
    case Kind::Exists:
      return node_->name == other.node_->name && rhs() == other.rhs();
    case Kind::Box:
      return rhs() == other.rhs();
  }
  return false;
}

std::string print(const ModalFormula& f) {
  using K = ModalFormula::Kind;
  auto paren = [](const std::string& s) { return "(" + s + ")"; };
  switch (f.kind()) {
    case K::Atom: {
      std::string out = f.atom_name();
      if (!f.atom_args().empty()) {
        out += '(';
        for (size_t i = 0; i < f.atom_args().size(); ++i) {
          if (i) out += ',';
          out += f.atom_args()[i];
        }
        out += ')';
      }
      return out;
    }
    case K::TT: return "tt";
    case K::FF: return "ff";
    case K::And: return paren(print(f.lhs()) + " /\\ " + print(f.rhs()));
    case K::Or: return paren(print(f.lhs()) + " \\/ " + print(f.rhs()));
    case K::Imp:
      if (f.rhs().kind() == K::FF) return "~" + print(f.lhs());
      return paren(print(f.lhs()) + " -> " + print(f.rhs()));
    case K::Forall: return paren("forall " + f.bound_var() + ". " + print(f.body()));
    case K::Exists: return paren("exists " + f.bound_var() + ". " + print(f.body()));
    case K::Box: return "box " + print(f.body());
  }
  return "";
}

// ---------------------------------------------------------------------------
// Erasure onto classical logic

Formula erase_to_qc(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      if (f.sort() == Sort::Problem)
        throw TranslationError("erasure is undefined on atomic problems");
      return f;
    case K::TT: return Formula::tt();
    case K::FF: return Formula::ff();
    case K::Bot: return Formula::ff();
    case K::And: return Formula::conj(erase_to_qc(f.lhs()), erase_to_qc(f.rhs()));
    case K::Or: return Formula::disj(erase_to_qc(f.lhs()), erase_to_qc(f.rhs()));
    case K::Imp: return Formula::imp(erase_to_qc(f.lhs()), erase_to_qc(f.rhs()));
    case K::Forall: return Formula::forall(f.bound_var(), erase_to_qc(f.body()));
    case K::Exists: return Formula::exists(f.bound_var(), erase_to_qc(f.body()));
    case K::Bang:
    case K::Quest:
      return erase_to_qc(f.body());
  }
  throw TranslationError("unreachable");
}

// ---------------------------------------------------------------------------
// Double-negation retraction onto the problem sort

namespace {

Formula nn(Formula f) { return Formula::neg(Formula::neg(std::move(f))); }

Formula retract_prop(const Formula& f);

Formula retract_problem(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: return f;  // problem atoms pass through
    case K::Bot: return Formula::bot();
    case K::And: return Formula::conj(retract_problem(f.lhs()), retract_problem(f.rhs()));
    case K::Or: return Formula::disj(retract_problem(f.lhs()), retract_problem(f.rhs()));
    case K::Imp: return Formula::imp(retract_problem(f.lhs()), retract_problem(f.rhs()));
    case K::Forall: return Formula::forall(f.bound_var(), retract_problem(f.body()));
    case K::Exists: return Formula::exists(f.bound_var(), retract_problem(f.body()));
    case K::Bang: return retract_prop(f.body());  // ! erased
    default:
      throw TranslationError("unreachable problem case");
  }
}

Formula retract_prop(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      // Atomic propositions become ~~-prefixed problem atoms of the same name.
      return nn(Formula::atom(f.atom_name(), f.atom_args(), Sort::Problem));
    case K::TT: return Formula::neg(Formula::bot());
    case K::FF: return Formula::bot();
    case K::And:
      return nn(Formula::conj(retract_prop(f.lhs()), retract_prop(f.rhs())));
    case K::Or:
      return nn(Formula::disj(retract_prop(f.lhs()), retract_prop(f.rhs())));
    case K::Imp:
      return nn(Formula::imp(retract_prop(f.lhs()), retract_prop(f.rhs())));
    case K::Forall:
      return nn(Formula::forall(f.bound_var(), retract_prop(f.body())));
    case K::Exists:
      return nn(Formula::exists(f.bound_var(), retract_prop(f.body())));
    case K::Quest:
      return nn(retract_problem(f.body()));  // ? becomes ~~
    default:
      throw TranslationError("unreachable proposition case");
  }
}

}  // namespace

Formula retract_to_qh(const Formula& f) {
  return f.sort() == Sort::Problem ? retract_problem(f) : retract_prop(f);
}

// ---------------------------------------------------------------------------
// Box translation of the simple-problem fragment

namespace {

ModalFormula box_prop(const Formula& f);

ModalFormula box_problem(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      throw TranslationError("box translation is undefined on atomic problems");
    case K::Bot: return ModalFormula::ff();
    case K::And: return ModalFormula::conj(box_problem(f.lhs()), box_problem(f.rhs()));
    case K::Or: return ModalFormula::disj(box_problem(f.lhs()), box_problem(f.rhs()));
    case K::Imp:
      return ModalFormula::box(ModalFormula::imp(box_problem(f.lhs()), box_problem(f.rhs())));
    case K::Forall:
      return ModalFormula::box(ModalFormula::forall(f.bound_var(), box_problem(f.body())));
    case K::Exists:
      return ModalFormula::exists(f.bound_var(), box_problem(f.body()));
    case K::Bang: return ModalFormula::box(box_prop(f.body()));
    default:
      throw TranslationError("unreachable problem case");
  }
}

ModalFormula box_prop(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: return ModalFormula::atom(f.atom_name(), f.atom_args());
    case K::TT: return ModalFormula::tt();
    case K::FF: return ModalFormula::ff();
    case K::And: return ModalFormula::conj(box_prop(f.lhs()), box_prop(f.rhs()));
    case K::Or: return ModalFormula::disj(box_prop(f.lhs()), box_prop(f.rhs()));
    case K::Imp: return ModalFormula::imp(box_prop(f.lhs()), box_prop(f.rhs()));
    case K::Forall: return ModalFormula::forall(f.bound_var(), box_prop(f.body()));
    case K::Exists: return ModalFormula::exists(f.bound_var(), box_prop(f.body()));
    case K::Quest: return box_problem(f.body());  // ? erased
    default:
      throw TranslationError("unreachable proposition case");
  }
}

}  // namespace

ModalFormula box_translate(const Formula& f) {
  return f.sort() == Sort::Problem ? box_problem(f) : box_prop(f);
}

PointSet s4_eval(const ModalFormula& g, const FiniteSpace& X,
                 const std::vector<std::string>& domain, const ModalValuation& valuation,
                 const Env& env) {
  using K = ModalFormula::Kind;
  switch (g.kind()) {
    case K::Atom: {
      auto it = valuation.find(g.atom_name());
      if (it == valuation.end()) throw EvalError("atom has no valuation: " + g.atom_name());
      std::vector<int> tuple;
      for (const auto& v : g.atom_args()) {
        auto jt = env.find(v);
        if (jt == env.end()) throw EvalError("unbound variable: " + v);
        tuple.push_back(jt->second);
      }
      auto kt = it->second.find(tuple);
      if (kt == it->second.end()) throw EvalError("no value for the given tuple");
      return kt->second;
    }
    case K::TT: return X.all();
    case K::FF: return 0;
    case K::And:
      return s4_eval(g.lhs(), X, domain, valuation, env) &
             s4_eval(g.rhs(), X, domain, valuation, env);
    case K::Or:
      return s4_eval(g.lhs(), X, domain, valuation, env) |
             s4_eval(g.rhs(), X, domain, valuation, env);
    case K::Imp:
      return (X.all() & ~s4_eval(g.lhs(), X, domain, valuation, env)) |
             s4_eval(g.rhs(), X, domain, valuation, env);
    case K::Forall: {
      PointSet out = X.all();
      for (int d = 0; d < static_cast<int>(domain.size()); ++d) {
        Env e = env;
        e[g.bound_var()] = d;
        out &= s4_eval(g.body(), X, domain, valuation, e);
      }
      return out;
    }
    case K::Exists: {
      PointSet out = 0;
      for (int d = 0; d < static_cast<int>(domain.size()); ++d) {
        Env e = env;
        e[g.bound_var()] = d;
        out |= s4_eval(g.body(), X, domain, valuation, e);
      }
      return out;
    }
    case K::Box:
      return X.interior(s4_eval(g.body(), X, domain, valuation, env));
  }
  throw EvalError("unreachable");
}

// ---------------------------------------------------------------------------
// Model transports

ETModel nabla_model(const SheafModel& m) {
  ETModel out;
  out.space = m.space;
  out.domain = m.domain;
  out.signature = m.signature;
  for (const auto& [name, table] : m.prob_atoms)
    for (const auto& [tuple, sheaf] : table) out.prob_atoms[name][tuple] = sheaf.support();
  out.prop_atoms = m.prop_atoms;
  out.validate();
  return out;
}

TKModel diamond_model(const ETModel& m) {
  TKModel out;
  out.space = m.space;
  out.domain = m.domain;
  out.signature = m.signature;
  out.prob_atoms = m.prob_atoms;
  const FiniteSpace& X = *m.space;
  for (const auto& [name, table] : m.prop_atoms)
    for (const auto& [tuple, value] : table)
      out.prop_atoms[name][tuple] = X.interior(X.closure(X.interior(value)));
  out.validate();
  return out;
}

}  // namespace qhc

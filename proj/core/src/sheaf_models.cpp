#include "qhc/sheaf_models.hpp"

namespace qhc {

void SheafModel::validate() const {
  for (const auto& [name, table] : prob_atoms)
    for (const auto& [tuple, sheaf] : table) {
      try {
        sheaf.validate();
      } catch (const SheafError& e) {
        throw SheafError("problem atom " + name + ": " + e.what());
      }
    }
  for (const auto& [name, table] : prop_atoms)
    for (const auto& [tuple, value] : table)
      if (value & ~space->all())
        throw SheafError("proposition atom " + name + " mentions unknown points");
}

SheafAlgebra& SheafModel::algebra() const {
  if (!algebra_) algebra_ = std::make_shared<SheafAlgebra>(space);
  return *algebra_;
}

namespace {

SheafAlgebra::Id eval_problem_id(const SheafModel& m, const Formula& f, Env& env);
PointSet eval_prop_set(const SheafModel& m, const Formula& f, Env& env);

std::vector<int> tuple_of(const Formula& f, const Env& env) {
  std::vector<int> tuple;
  tuple.reserve(f.atom_args().size());
  for (const auto& v : f.atom_args()) {
    auto it = env.find(v);
    if (it == env.end()) throw EvalError("unbound variable: " + v);
    tuple.push_back(it->second);
  }
  return tuple;
}

// Support of a problem value, computed structurally so that hom sheaves are
// never materialized just for their support.
PointSet eval_problem_support(const SheafModel& m, const Formula& f, Env& env) {
  using K = Formula::Kind;
  const FiniteSpace& X = *m.space;
  switch (f.kind()) {
    case K::Bot:
      return 0;
    case K::And:
      return eval_problem_support(m, f.lhs(), env) & eval_problem_support(m, f.rhs(), env);
    case K::Or:
      return eval_problem_support(m, f.lhs(), env) | eval_problem_support(m, f.rhs(), env);
    case K::Imp: {
      SheafAlgebra::Id a = eval_problem_id(m, f.lhs(), env);
      SheafAlgebra::Id b = eval_problem_id(m, f.rhs(), env);
      return m.algebra().hom_support(a, b);
    }
    case K::Forall:
    case K::Exists: {
      auto saved = env.find(f.bound_var()) != env.end()
                       ? std::optional<int>(env[f.bound_var()])
                       : std::nullopt;
      PointSet acc = f.kind() == K::Forall ? X.all() : 0;
      for (int d = 0; d < static_cast<int>(m.domain.size()); ++d) {
        env[f.bound_var()] = d;
        PointSet v = eval_problem_support(m, f.body(), env);
        acc = f.kind() == K::Forall ? (acc & v) : (acc | v);
      }
      if (saved) env[f.bound_var()] = *saved; else env.erase(f.bound_var());
      return acc;
    }
    case K::Bang:
      return X.interior(eval_prop_set(m, f.body(), env));
    default:
      return m.algebra().support(eval_problem_id(m, f, env));
  }
}

SheafAlgebra::Id eval_problem_id(const SheafModel& m, const Formula& f, Env& env) {
  using K = Formula::Kind;
  SheafAlgebra& alg = m.algebra();
  switch (f.kind()) {
    case K::Atom: {
      auto it = m.prob_atoms.find(f.atom_name());
      if (it == m.prob_atoms.end()) throw EvalError("atom has no valuation: " + f.atom_name());
      auto jt = it->second.find(tuple_of(f, env));
      if (jt == it->second.end())
        throw EvalError("atom " + f.atom_name() + " has no value for the given tuple");
      return alg.intern(jt->second);
    }
    case K::Bot:
      return alg.empty();
    case K::And:
      return alg.product(eval_problem_id(m, f.lhs(), env), eval_problem_id(m, f.rhs(), env));
    case K::Or:
      return alg.coproduct(eval_problem_id(m, f.lhs(), env), eval_problem_id(m, f.rhs(), env));
    case K::Imp:
      return alg.hom(eval_problem_id(m, f.lhs(), env), eval_problem_id(m, f.rhs(), env));
    case K::Forall:
    case K::Exists: {
      auto saved = env.find(f.bound_var()) != env.end()
                       ? std::optional<int>(env[f.bound_var()])
                       : std::nullopt;
      std::optional<SheafAlgebra::Id> acc;
      for (int d = 0; d < static_cast<int>(m.domain.size()); ++d) {
        env[f.bound_var()] = d;
        SheafAlgebra::Id v = eval_problem_id(m, f.body(), env);
        if (!acc) acc = v;
        else acc = f.kind() == K::Forall ? alg.product(*acc, v) : alg.coproduct(*acc, v);
      }
      if (saved) env[f.bound_var()] = *saved; else env.erase(f.bound_var());
      if (!acc) throw EvalError("empty domain");
      return *acc;
    }
    case K::Bang: {
      PointSet p = eval_prop_set(m, f.body(), env);
      return alg.characteristic(m.space->interior(p));
    }
    default:
      throw EvalError("not a problem-sorted formula");
  }
}

PointSet eval_prop_set(const SheafModel& m, const Formula& f, Env& env) {
  using K = Formula::Kind;
  const FiniteSpace& X = *m.space;
  switch (f.kind()) {
    case K::Atom: {
      auto it = m.prop_atoms.find(f.atom_name());
      if (it == m.prop_atoms.end()) throw EvalError("atom has no valuation: " + f.atom_name());
      auto jt = it->second.find(tuple_of(f, env));
      if (jt == it->second.end())
        throw EvalError("atom " + f.atom_name() + " has no value for the given tuple");
      return jt->second;
    }
    case K::TT:
      return X.all();
    case K::FF:
      return 0;
    case K::And:
      return eval_prop_set(m, f.lhs(), env) & eval_prop_set(m, f.rhs(), env);
    case K::Or:
      return eval_prop_set(m, f.lhs(), env) | eval_prop_set(m, f.rhs(), env);
    case K::Imp:
      return (X.all() & ~eval_prop_set(m, f.lhs(), env)) | eval_prop_set(m, f.rhs(), env);
    case K::Forall:
    case K::Exists: {
      auto saved = env.find(f.bound_var()) != env.end()
                       ? std::optional<int>(env[f.bound_var()])
                       : std::nullopt;
      PointSet acc = f.kind() == K::Forall ? X.all() : 0;
      for (int d = 0; d < static_cast<int>(m.domain.size()); ++d) {
        env[f.bound_var()] = d;
        PointSet v = eval_prop_set(m, f.body(), env);
        acc = f.kind() == K::Forall ? (acc & v) : (acc | v);
      }
      if (saved) env[f.bound_var()] = *saved; else env.erase(f.bound_var());
      return acc;
    }
    case K::Quest:
      return eval_problem_support(m, f.body(), env);
    default:
      throw EvalError("not a proposition-sorted formula");
  }
}

// Validity of a problem by currying: a problem implication is valid iff a
// morphism from the (product of the) premises into the conclusion exists, so
// the hom at the root is never materialized.
bool morphism_into(const SheafModel& m, std::vector<SheafAlgebra::Id>& sources,
                   const Formula& f, Env& env) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Imp: {
      sources.push_back(eval_problem_id(m, f.lhs(), env));
      bool ok = morphism_into(m, sources, f.rhs(), env);
      sources.pop_back();
      return ok;
    }
    case K::And:
      return morphism_into(m, sources, f.lhs(), env) &&
             morphism_into(m, sources, f.rhs(), env);
    case K::Forall: {
      auto saved = env.find(f.bound_var()) != env.end()
                       ? std::optional<int>(env[f.bound_var()])
                       : std::nullopt;
      bool ok = true;
      for (int d = 0; d < static_cast<int>(m.domain.size()) && ok; ++d) {
        env[f.bound_var()] = d;
        ok = morphism_into(m, sources, f.body(), env);
      }
      if (saved) env[f.bound_var()] = *saved; else env.erase(f.bound_var());
      return ok;
    }
    default: {
      SheafAlgebra::Id target = eval_problem_id(m, f, env);
      return m.algebra().morphism_exists(sources, target);
    }
  }
}

}  // namespace

SheafValue eval_sheaf(const SheafModel& m, const Formula& f, const Env& env) {
  Env e = env;
  SheafValue out;
  out.sort = f.sort();
  if (f.sort() == Sort::Problem)
    out.sheaf = eval_problem_id(m, f, e);
  else
    out.set = eval_prop_set(m, f, e);
  return out;
}

StalkSheaf eval_sheaf_problem(const SheafModel& m, const Formula& f, const Env& env) {
  Env e = env;
  return m.algebra().value(eval_problem_id(m, f, e));
}

bool valid_sheaf(const SheafModel& m, const Formula& f) {
  if (!is_closed(f)) throw EvalError("validity needs a closed formula");
  Env env;
  if (f.sort() == Sort::Proposition) return eval_prop_set(m, f, env) == m.space->all();
  std::vector<SheafAlgebra::Id> sources;
  return morphism_into(m, sources, f, env);
}

bool valid_sheaf_all_env(const SheafModel& m, const Formula& f) {
  std::set<Var> fv = free_vars(f);
  std::vector<Var> vars(fv.begin(), fv.end());
  int n = static_cast<int>(m.domain.size());
  std::vector<int> pick(vars.size(), 0);
  for (;;) {
    Env env;
    for (size_t i = 0; i < vars.size(); ++i) env[vars[i]] = pick[i];
    bool ok;
    if (f.sort() == Sort::Proposition) {
      Env e = env;
      ok = eval_prop_set(m, f, e) == m.space->all();
    } else {
      Env e = env;
      std::vector<SheafAlgebra::Id> sources;
      ok = morphism_into(m, sources, f, e);
    }
    if (!ok) return false;
    size_t i = 0;
    for (; i < pick.size(); ++i) {
      if (++pick[i] < n) break;
      pick[i] = 0;
    }
    if (i == pick.size()) return true;
  }
}

// ---------------------------------------------------------------------------
// Presheaf models (restricted fragment)

namespace {

OpenPresheaf eval_presheaf_problem(const PresheafModel& m, const Formula& f, Env& env);
PointSet eval_presheaf_prop(const PresheafModel& m, const Formula& f, Env& env);

OpenPresheaf eval_presheaf_problem(const PresheafModel& m, const Formula& f, Env& env) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: {
      auto it = m.prob_atoms.find(f.atom_name());
      if (it == m.prob_atoms.end()) throw EvalError("atom has no valuation: " + f.atom_name());
      auto jt = it->second.find(tuple_of(f, env));
      if (jt == it->second.end()) throw EvalError("no value for the given tuple");
      return jt->second;
    }
    case K::Bot:
      return presheaf_characteristic(m.space, 0);
    case K::And:
      return presheaf_product(eval_presheaf_problem(m, f.lhs(), env),
                              eval_presheaf_problem(m, f.rhs(), env));
    case K::Imp:
      return presheaf_hom(eval_presheaf_problem(m, f.lhs(), env),
                          eval_presheaf_problem(m, f.rhs(), env));
    case K::Forall: {
      auto saved = env.find(f.bound_var()) != env.end()
                       ? std::optional<int>(env[f.bound_var()])
                       : std::nullopt;
      std::optional<OpenPresheaf> acc;
      for (int d = 0; d < static_cast<int>(m.domain.size()); ++d) {
        env[f.bound_var()] = d;
        OpenPresheaf v = eval_presheaf_problem(m, f.body(), env);
        acc = acc ? presheaf_product(*acc, v) : v;
      }
      if (saved) env[f.bound_var()] = *saved; else env.erase(f.bound_var());
      if (!acc) throw EvalError("empty domain");
      return *acc;
    }
    case K::Or:
    case K::Exists:
      throw FragmentError(
          "presheaf evaluation covers the fragment without problem-sorted \\/ and exists");
    case K::Bang: {
      PointSet p = eval_presheaf_prop(m, f.body(), env);
      return presheaf_characteristic(m.space, m.space->interior(p));
    }
    default:
      throw EvalError("not a problem-sorted formula");
  }
}

PointSet eval_presheaf_prop(const PresheafModel& m, const Formula& f, Env& env) {
  using K = Formula::Kind;
  const FiniteSpace& X = *m.space;
  switch (f.kind()) {
    case K::Atom: {
      auto it = m.prop_atoms.find(f.atom_name());
      if (it == m.prop_atoms.end()) throw EvalError("atom has no valuation: " + f.atom_name());
      auto jt = it->second.find(tuple_of(f, env));
      if (jt == it->second.end()) throw EvalError("no value for the given tuple");
      return jt->second;
    }
    case K::TT: return X.all();
    case K::FF: return 0;
    case K::And:
      return eval_presheaf_prop(m, f.lhs(), env) & eval_presheaf_prop(m, f.rhs(), env);
    case K::Or:
      return eval_presheaf_prop(m, f.lhs(), env) | eval_presheaf_prop(m, f.rhs(), env);
    case K::Imp:
      return (X.all() & ~eval_presheaf_prop(m, f.lhs(), env)) |
             eval_presheaf_prop(m, f.rhs(), env);
    case K::Forall:
    case K::Exists: {
      auto saved = env.find(f.bound_var()) != env.end()
                       ? std::optional<int>(env[f.bound_var()])
                       : std::nullopt;
      PointSet acc = f.kind() == K::Forall ? X.all() : 0;
      for (int d = 0; d < static_cast<int>(m.domain.size()); ++d) {
        env[f.bound_var()] = d;
        PointSet v = eval_presheaf_prop(m, f.body(), env);
        acc = f.kind() == K::Forall ? (acc & v) : (acc | v);
      }
      if (saved) env[f.bound_var()] = *saved; else env.erase(f.bound_var());
      return acc;
    }
    case K::Quest:
      return presheaf_support(eval_presheaf_problem(m, f.body(), env));
    default:
      throw EvalError("not a proposition-sorted formula");
  }
}

}  // namespace

PresheafValue eval_presheaf(const PresheafModel& m, const Formula& f, const Env& env) {
  Env e = env;
  PresheafValue out;
  out.sort = f.sort();
  if (f.sort() == Sort::Problem)
    out.presheaf = eval_presheaf_problem(m, f, e);
  else
    out.set = eval_presheaf_prop(m, f, e);
  return out;
}

bool valid_presheaf(const PresheafModel& m, const Formula& f) {
  if (!is_closed(f)) throw EvalError("validity needs a closed formula");
  Env env;
  if (f.sort() == Sort::Proposition)
    return eval_presheaf_prop(m, f, env) == m.space->all();
  OpenPresheaf p = eval_presheaf_problem(m, f, env);
  return p.size_at(m.space->all()) > 0;
}

}  // namespace qhc

#include "qhc/set_models.hpp"

namespace qhc {

PointSet SetModel::atom_value(bool problem, const std::string& name,
                              const std::vector<int>& tuple) const {
  const auto& table = problem ? prob_atoms : prop_atoms;
  auto it = table.find(name);
  if (it == table.end())
    throw EvalError("atom has no valuation: " + name);
  auto jt = it->second.find(tuple);
  if (jt == it->second.end())
    throw EvalError("atom " + name + " has no value for the given tuple");
  return jt->second;
}

void ETModel::validate() const {
  for (const auto& [name, table] : prob_atoms)
    for (const auto& [tuple, value] : table)
      if (!space->is_open(value))
        throw EvalError("problem atom " + name + " has a non-open value " +
                        space->set_to_string(value));
}

void TKModel::validate() const {
  ETModel base;
  static_cast<SetModel&>(base) = *this;
  base.validate();
  for (const auto& [name, table] : prop_atoms)
    for (const auto& [tuple, value] : table)
      if (!space->is_regular_open(value))
        throw EvalError("proposition atom " + name + " has a non-regular value " +
                        space->set_to_string(value));
}

namespace {

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

enum class ClassicalStyle { Euler, DoubleNegation };

PointSet eval_problem(const SetModel& m, const Formula& f, Env& env, ClassicalStyle cs);
PointSet eval_prop(const SetModel& m, const Formula& f, Env& env, ClassicalStyle cs);

// Heyting clauses over opens.
PointSet eval_problem(const SetModel& m, const Formula& f, Env& env, ClassicalStyle cs) {
  using K = Formula::Kind;
  const FiniteSpace& X = *m.space;
  switch (f.kind()) {
    case K::Atom:
      return m.atom_value(true, f.atom_name(), tuple_of(f, env));
    case K::Bot:
      return 0;
    case K::And:
      return eval_problem(m, f.lhs(), env, cs) & eval_problem(m, f.rhs(), env, cs);
    case K::Or:
      return eval_problem(m, f.lhs(), env, cs) | eval_problem(m, f.rhs(), env, cs);
    case K::Imp: {
      PointSet a = eval_problem(m, f.lhs(), env, cs);
      PointSet b = eval_problem(m, f.rhs(), env, cs);
      return X.interior((X.all() & ~a) | b);
    }
    case K::Exists: {
      PointSet out = 0;
      auto saved = env.find(f.bound_var()) != env.end()
                       ? std::optional<int>(env[f.bound_var()])
                       : std::nullopt;
      for (int d = 0; d < static_cast<int>(m.domain.size()); ++d) {
        env[f.bound_var()] = d;
        out |= eval_problem(m, f.body(), env, cs);
      }
      if (saved) env[f.bound_var()] = *saved; else env.erase(f.bound_var());
      return out;
    }
    case K::Forall: {
      PointSet out = X.all();
      auto saved = env.find(f.bound_var()) != env.end()
                       ? std::optional<int>(env[f.bound_var()])
                       : std::nullopt;
      for (int d = 0; d < static_cast<int>(m.domain.size()); ++d) {
        env[f.bound_var()] = d;
        out &= eval_problem(m, f.body(), env, cs);
      }
      if (saved) env[f.bound_var()] = *saved; else env.erase(f.bound_var());
      return X.interior(out);
    }
    case K::Bang: {
      PointSet p = eval_prop(m, f.body(), env, cs);
      // In TK models ! is the identity; atomic values are already regular
      // open, and every TK proposition value is open.
      return cs == ClassicalStyle::Euler ? X.interior(p) : p;
    }
    default:
      throw EvalError("not a problem-sorted formula");
  }
}

PointSet eval_prop(const SetModel& m, const Formula& f, Env& env, ClassicalStyle cs) {
  using K = Formula::Kind;
  const FiniteSpace& X = *m.space;
  bool euler = cs == ClassicalStyle::Euler;
  switch (f.kind()) {
    case K::Atom:
      return m.atom_value(false, f.atom_name(), tuple_of(f, env));
    case K::TT:
      return X.all();
    case K::FF:
      return 0;
    case K::And:
      return eval_prop(m, f.lhs(), env, cs) & eval_prop(m, f.rhs(), env, cs);
    case K::Or: {
      PointSet u = eval_prop(m, f.lhs(), env, cs) | eval_prop(m, f.rhs(), env, cs);
      return euler ? u : X.interior(X.closure(u));
    }
    case K::Imp: {
      PointSet a = eval_prop(m, f.lhs(), env, cs);
      PointSet b = eval_prop(m, f.rhs(), env, cs);
      PointSet u = (X.all() & ~a) | b;
      return euler ? u : X.interior(u);
    }
    case K::Exists: {
      PointSet out = 0;
      auto saved = env.find(f.bound_var()) != env.end()
                       ? std::optional<int>(env[f.bound_var()])
                       : std::nullopt;
      for (int d = 0; d < static_cast<int>(m.domain.size()); ++d) {
        env[f.bound_var()] = d;
        out |= eval_prop(m, f.body(), env, cs);
      }
      if (saved) env[f.bound_var()] = *saved; else env.erase(f.bound_var());
      return euler ? out : X.interior(X.closure(out));
    }
    case K::Forall: {
      PointSet out = X.all();
      auto saved = env.find(f.bound_var()) != env.end()
                       ? std::optional<int>(env[f.bound_var()])
                       : std::nullopt;
      for (int d = 0; d < static_cast<int>(m.domain.size()); ++d) {
        env[f.bound_var()] = d;
        out &= eval_prop(m, f.body(), env, cs);
      }
      if (saved) env[f.bound_var()] = *saved; else env.erase(f.bound_var());
      return euler ? out : X.interior(out);
    }
    case K::Quest: {
      PointSet a = eval_problem(m, f.body(), env, cs);
      return euler ? a : X.interior(X.closure(a));
    }
    default:
      throw EvalError("not a proposition-sorted formula");
  }
}

}  // namespace

PointSet eval_et(const ETModel& m, const Formula& f, const Env& env) {
  Env e = env;
  return f.sort() == Sort::Problem ? eval_problem(m, f, e, ClassicalStyle::Euler)
                                   : eval_prop(m, f, e, ClassicalStyle::Euler);
}

PointSet eval_tk(const TKModel& m, const Formula& f, const Env& env) {
  Env e = env;
  return f.sort() == Sort::Problem
             ? eval_problem(m, f, e, ClassicalStyle::DoubleNegation)
             : eval_prop(m, f, e, ClassicalStyle::DoubleNegation);
}

PointSet eval_heyting(const SetModel& m, const Formula& f, const Env& env) {
  if (f.sort() != Sort::Problem) throw EvalError("eval_heyting needs a problem");
  Env e = env;
  return eval_problem(m, f, e, ClassicalStyle::Euler);
}

bool valid(const ETModel& m, const Formula& f) {
  if (!is_closed(f)) throw EvalError("validity needs a closed formula");
  return eval_et(m, f) == m.space->all();
}

bool valid(const TKModel& m, const Formula& f) {
  if (!is_closed(f)) throw EvalError("validity needs a closed formula");
  return eval_tk(m, f) == m.space->all();
}

namespace {

template <typename M, typename EvalFn>
bool valid_all_env_impl(const M& m, const Formula& f, EvalFn eval) {
  std::set<Var> fv = free_vars(f);
  std::vector<Var> vars(fv.begin(), fv.end());
  int n = static_cast<int>(m.domain.size());
  std::vector<int> pick(vars.size(), 0);
  for (;;) {
    Env env;
    for (size_t i = 0; i < vars.size(); ++i) env[vars[i]] = pick[i];
    if (eval(m, f, env) != m.space->all()) return false;
    size_t i = 0;
    for (; i < pick.size(); ++i) {
      if (++pick[i] < n) break;
      pick[i] = 0;
    }
    if (i == pick.size()) return true;
  }
}

}  // namespace

bool valid_all_env(const ETModel& m, const Formula& f) {
  return valid_all_env_impl(m, f, [](const ETModel& mm, const Formula& ff, const Env& e) {
    return eval_et(mm, ff, e);
  });
}

bool valid_all_env(const TKModel& m, const Formula& f) {
  return valid_all_env_impl(m, f, [](const TKModel& mm, const Formula& ff, const Env& e) {
    return eval_tk(mm, ff, e);
  });
}

}  // namespace qhc

#ifndef QHC_SET_MODELS_HPP
#define QHC_SET_MODELS_HPP

#include <map>
#include <string>
#include <vector>

#include "qhc/syntax.hpp"
#include "qhc/topology.hpp"

namespace qhc {

// Environment mapping variables to domain indices.
using Env = std::map<Var, int>;

// Valuation of one atom: point set per tuple of domain indices.
using AtomTable = std::map<std::vector<int>, PointSet>;

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared carrier of the Euler-Tarski and Tarski-Kolmogorov models: problems
// live in opens, propositions in arbitrary (ET) or regular open (TK) subsets.
struct SetModel {
  SpacePtr space;
  std::vector<std::string> domain;
  Signature signature;
  std::map<std::string, AtomTable> prob_atoms;
  std::map<std::string, AtomTable> prop_atoms;

  PointSet atom_value(bool problem, const std::string& name,
                      const std::vector<int>& tuple) const;
};

struct ETModel : SetModel {
  // Throws when a problem-atom value is not open.
  void validate() const;
};

struct TKModel : SetModel {
  // Additionally requires every proposition-atom value to be regular open.
  void validate() const;
};

PointSet eval_et(const ETModel& m, const Formula& f, const Env& env = {});
PointSet eval_tk(const TKModel& m, const Formula& f, const Env& env = {});

// Intuitionistic (Heyting) evaluation of a problem-sorted formula; shared by
// the ET/TK problem side and by the double-negation retraction check.
PointSet eval_heyting(const SetModel& m, const Formula& f, const Env& env = {});

bool valid(const ETModel& m, const Formula& f);
bool valid(const TKModel& m, const Formula& f);

// Open formulas: valid under every environment.
bool valid_all_env(const ETModel& m, const Formula& f);
bool valid_all_env(const TKModel& m, const Formula& f);

}  // namespace qhc

#endif

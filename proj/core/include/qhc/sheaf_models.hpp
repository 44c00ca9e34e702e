#ifndef QHC_SHEAF_MODELS_HPP
#define QHC_SHEAF_MODELS_HPP

#include <memory>

#include "qhc/set_models.hpp"
#include "qhc/sheaf.hpp"

namespace qhc {

// Problems valued in sheaves over the space, propositions in arbitrary
// subsets (Euler style). ? is the support, ! the characteristic sheaf of the
// interior.
struct SheafModel {
  SpacePtr space;
  std::vector<std::string> domain;
  Signature signature;
  std::map<std::string, std::map<std::vector<int>, StalkSheaf>> prob_atoms;
  std::map<std::string, AtomTable> prop_atoms;

  void validate() const;  // functoriality of every atom sheaf

  SheafAlgebra& algebra() const;

 private:
  mutable std::shared_ptr<SheafAlgebra> algebra_;
};

struct SheafValue {
  Sort sort = Sort::Proposition;
  SheafAlgebra::Id sheaf = 0;  // meaningful for problems
  PointSet set = 0;            // meaningful for propositions
};

SheafValue eval_sheaf(const SheafModel& m, const Formula& f, const Env& env = {});
// Convenience: materialized problem value.
StalkSheaf eval_sheaf_problem(const SheafModel& m, const Formula& f, const Env& env = {});

// Validity: global section (problems) / whole space (propositions). Decides
// problem implications as morphism existence, so hom sheaves never have to be
// materialized at the root of a formula.
bool valid_sheaf(const SheafModel& m, const Formula& f);
bool valid_sheaf_all_env(const SheafModel& m, const Formula& f);

// ---------------------------------------------------------------------------
// Presheaf models, on the fragment without problem-sorted \/ and exists; the
// coproduct is where presheaf and sheaf semantics genuinely diverge.

struct PresheafModel {
  SpacePtr space;
  std::vector<std::string> domain;
  Signature signature;
  std::map<std::string, std::map<std::vector<int>, OpenPresheaf>> prob_atoms;
  std::map<std::string, AtomTable> prop_atoms;
};

struct PresheafValue {
  Sort sort = Sort::Proposition;
  OpenPresheaf presheaf;  // problems
  PointSet set = 0;       // propositions
};

struct FragmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PresheafValue eval_presheaf(const PresheafModel& m, const Formula& f, const Env& env = {});
bool valid_presheaf(const PresheafModel& m, const Formula& f);

}  // namespace qhc

#endif

#ifndef QHC_CORPUS_HPP
#define QHC_CORPUS_HPP

#include <functional>

#include "qhc/calculus.hpp"
#include "qhc/sheaf_models.hpp"

namespace qhc {

enum class ModelClass { ET, TK, Sheaf };
const char* to_string(ModelClass c);
ModelClass model_class_from_string(const std::string& s);

// The standard corpus signature: one unary problem atom and one unary
// proposition atom. With a two-element domain a unary atom is exactly an
// independent pair of values, which is what the quantifier principles need.
Signature corpus_signature();

struct CorpusBounds {
  int max_points = 3;
  int max_domain = 2;
  int max_stalk = 2;
};

// All sheaves on the space with stalks bounded by max_stalk, deduplicated up
// to isomorphism, in a fixed canonical order (by stalk sizes, then maps).
std::vector<StalkSheaf> enumerate_sheaves(const SpacePtr& space, int max_stalk);

// Instance pools: formulas over corpus_signature() with the single free
// variable x, used to instantiate metavariables (closed under the
// substitutions the catalog's implication proofs use: ?a, !p, negations,
// box/nabla and the truth constants of both sorts).
struct InstanceGen {
  std::vector<Formula> problem_pool;
  std::vector<Formula> prop_pool;
  static InstanceGen standard();
  const std::vector<Formula>& pool(Sort s) const {
    return s == Sort::Problem ? problem_pool : prop_pool;
  }
};

// Rule schemes of the calculus, for semantic soundness checking.
struct RuleScheme {
  std::string name;
  std::vector<MetaVarDecl> metavars;
  std::vector<Formula> premises;  // patterns over the metavariables
  Formula conclusion;
};
const std::vector<RuleScheme>& inference_rules();

// A closed axiom instance or an open rule instance with its description.
struct SweepCensus {
  uint64_t spaces = 0;
  uint64_t models = 0;
  uint64_t checks = 0;       // distinct (schema, value-assignment) checks
  uint64_t skipped = 0;      // value-level cache hits
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Validates every axiom-schema instance and every rule instance of the
// calculus over the exhaustive corpus of the given class. Deterministic.
SweepCensus soundness_sweep(ModelClass cls, const CorpusBounds& bounds = {},
                            const InstanceGen& gen = InstanceGen::standard());

// Same sweep, but on the transported models: sheaf corpus through the
// support transport (ET output) and ET corpus through the regularization
// transport (TK output).
SweepCensus transported_sweep_nabla(const CorpusBounds& bounds = {},
                                    const InstanceGen& gen = InstanceGen::standard());
SweepCensus transported_sweep_diamond(const CorpusBounds& bounds = {},
                                      const InstanceGen& gen = InstanceGen::standard());

// Enumeration driver shared by the sweep, the principle status scan and the
// countermodel search. Calls fn for every corpus model of the class on the
// space; model structs are reused across calls. Returns models visited.
// When dedupe is set, sheaf valuations run over isomorphism-class
// representatives and mirror-symmetric domain relabelings are skipped.
struct ModelVisitor {
  std::function<bool(const ETModel&)> et;        // return false to stop
  std::function<bool(const TKModel&)> tk;
  std::function<bool(const SheafModel&)> sheaf;
};
uint64_t for_each_model(ModelClass cls, const SpacePtr& space, int domain_size,
                        int max_stalk, bool dedupe, const ModelVisitor& visitor);

}  // namespace qhc

#endif

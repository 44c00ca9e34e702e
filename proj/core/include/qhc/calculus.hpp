#ifndef QHC_CALCULUS_HPP
#define QHC_CALCULUS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qhc/syntax.hpp"

namespace qhc {

// The axiom-schema table. Base intuitionistic predicate logic is present at
// both sorts (suffix @prob / @prop), the proposition sort adds double
// negation elimination, and the connecting laws bridge the two sorts.
// Redundant named laws (quest-or, quest-exists, bang-forall, bang-and,
// quest-forall, bang-exists, bang-or) are primitive schemata.
const std::vector<Schema>& axiom_schemata();
const Schema* find_schema(const std::string& name);

// Inference rules: modus ponens, the quantifier rules, and the two
// necessitation rules p/!p and alpha/?alpha.
struct ByScheme {
  std::string schema;
  MetaAssignment assignment;
};
struct ByTheoryAxiom {
  std::string name;
};
struct ByHypothesis {
  size_t index = 0;
};
struct ByModusPonens {
  int64_t premise = 0;      // line holding A
  int64_t implication = 0;  // line holding A -> B
};
// Accepted patterns for `gen` from line L with variable x:
//   L = alpha            conclusion  forall x. alpha
//   L = sigma -> alpha   conclusion  sigma -> forall x. alpha   (x not free in sigma)
//   L = alpha -> sigma   conclusion  (exists x. alpha) -> sigma (x not free in sigma)
struct ByGeneralization {
  int64_t from = 0;
  Var var;
};
struct ByNecessitation {
  int64_t from = 0;
  bool bang = true;  // false: quest
};

using Justification = std::variant<ByScheme, ByTheoryAxiom, ByHypothesis, ByModusPonens,
                                   ByGeneralization, ByNecessitation>;

struct ProofLine {
  int64_t id = 0;
  Formula formula;
  Justification by;
};

struct ProofScript {
  std::string theory;
  std::vector<Formula> hypotheses;
  std::vector<ProofLine> lines;

  int64_t append(Formula f, Justification by);
  const Formula& conclusion() const { return lines.back().formula; }
};

// A named collection of closed axioms (classical), postulates (problems) and
// mixed axioms such as certifiability entries.
struct Theory {
  std::string name;
  Signature signature;
  std::vector<std::pair<std::string, Formula>> axioms;
  std::vector<std::pair<std::string, Formula>> postulates;
  std::vector<std::pair<std::string, Formula>> mixed;

  const Formula* find(const std::string& name) const;
  void validate() const;  // closed and sort-correct
};

struct Verdict {
  bool accepted = true;
  int64_t line_id = 0;
  std::string reason;  // bad-instance | bad-rule | freshness-violation |
                       // sort-error | forward-reference | unknown-schema |
                       // unknown-axiom | bad-hypothesis

  static Verdict ok() { return {true, 0, ""}; }
  static Verdict reject(int64_t line, std::string why) { return {false, line, std::move(why)}; }
};

Verdict check_proof(const ProofScript& script, const Theory& theory);

// Helper for emitting machine-generated scripts: tracks line ids and provides
// the closed combinator macros used by the geometry derivations.
class ScriptBuilder {
public:
  explicit ScriptBuilder(std::string theory_name) { script_.theory = std::move(theory_name); }

  int64_t line(Formula f, Justification by) { return script_.append(std::move(f), std::move(by)); }
  int64_t schema(const std::string& name, const MetaAssignment& assignment);
  int64_t axiom(const Theory& t, const std::string& name);
  // Registers f as a hypothesis and adds the line citing it.
  int64_t hypothesis(Formula f);
  int64_t mp(int64_t premise, int64_t implication);

  // From lines A->B and B->C derive A->C.
  int64_t trans(int64_t ab, int64_t bc);
  // From line X->(Y->Z) derive Y->(X->Z).
  int64_t flip(int64_t xyz);
  // Derive A->A.
  int64_t identity(const Formula& a);
  // From line (P/\Q)->R derive P->(Q->R).
  int64_t curry(int64_t pq_r);
  // From line A->B derive ~B->~A.
  int64_t contrapose(int64_t ab);
  // Derive A->~~A.
  int64_t double_negation_intro(const Formula& a);
  // From a line proving alpha -> beta derive ?alpha -> ?beta (or with bang).
  int64_t quest_mono(int64_t ab);
  int64_t bang_mono(int64_t ab);
  // Extract one direction of a biconditional schema instance.
  int64_t iff_forward(const std::string& schema_name, const MetaAssignment& assignment);
  int64_t iff_backward(const std::string& schema_name, const MetaAssignment& assignment);

  const Formula& formula_of(int64_t id) const;
  ProofScript take() { return std::move(script_); }
  const ProofScript& script() const { return script_; }

private:
  ProofScript script_;
};

// From a theory axiom of shape (closure of) p -> q builds an accepted script
// ending in the closure of !p' -> !q, where a conjunctive premise p is split
// into a conjunction of bangs. Axioms without an implication lift to the
// closure of !p. Throws SchemaError on shape mismatch.
ProofScript derive_intuitionistic_lift(const Theory& theory, const std::string& axiom_name);

}  // namespace qhc

#endif

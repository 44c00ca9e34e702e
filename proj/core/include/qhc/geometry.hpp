#ifndef QHC_GEOMETRY_HPP
#define QHC_GEOMETRY_HPP

#include "qhc/calculus.hpp"
#include "qhc/transforms.hpp"

namespace qhc {

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An abbreviation expanding to the primitive relations.
struct DefinedNotion {
  std::string name;
  std::vector<Var> params;
  Formula definition;
};

enum class EntryKind { Axiom, Postulate, Certifiability, Extension };

struct TheoryEntry {
  std::string id;     // "1" .. "19", "triangle-copy"
  std::string label;
  EntryKind kind = EntryKind::Axiom;
  Formula formula;    // closed, notions expanded
};

// The planar-geometry theory: equidistance and betweenness as the primitive
// propositions, ten classical axioms, five postulates on the problem side and
// four certifiability axioms; an optional solubility axiom for triangle
// copying ships disabled.
struct GeometryTheory {
  Theory theory;  // named entries, for the proof checker
  std::vector<DefinedNotion> notions;
  std::vector<TheoryEntry> entries;
  std::vector<std::pair<std::string, Formula>> characterizations;
  bool extension_enabled = false;

  const TheoryEntry* entry(const std::string& id) const;
};

Signature geometry_signature();
GeometryTheory load_theory(bool with_triangle_extension = false);
// Parses and validates an external theory asset with the same layout.
GeometryTheory load_theory_from_json(const std::string& json_text,
                                     bool with_triangle_extension = false);

// Macro-expansion of defined notions (repeated until none remain).
Formula expand_notions(const Formula& f, const std::vector<DefinedNotion>& notions);

// ---------------------------------------------------------------------------
// Problem classes

enum class ProblemClass {
  PureProposition,
  Euclidean,
  PureSimple,
  WeaklyEuclidean,
  Simple,
  None,
};
const char* to_string(ProblemClass c);

// Most specific applicable label, in the order euclidean > pure-simple >
// weakly-euclidean > simple.
ProblemClass classify_problem(const Formula& f);
std::set<ProblemClass> problem_labels(const Formula& f);

// ---------------------------------------------------------------------------
// Rewriting

struct PushResult {
  Formula proposition;
  std::vector<Formula> residue;  // premise conditions still requiring certifiability
};

// Pushes the solubility operator of a simple problem inward; conclusion-side
// certificates simplify away, premise-side ones are reported as residue.
PushResult push_wn(const Formula& simple_problem);

// The classical analogue of a (weakly) Euclidean problem. With
// assume_certifiable the premise residue is discharged; otherwise a nonempty
// residue is an error.
Formula classical_shadow(const Formula& postulate, bool assume_certifiable);

// Splits banged conjunctions and, when stability is granted, rewrites banged
// negated atoms so that ! ends up on atoms only.
Formula pure_simple_normal_form(const Formula& euclidean_problem, bool stability);

// Accepted derivations bundled with the theory: the intuitionistic lifts of
// the ten classical axioms, the double-negation weakening of the betweenness
// identity, the implication shuffles of the upper-dimension chain, and a
// certifiability-based premise removal.
std::vector<std::pair<std::string, ProofScript>> bundled_derivations(
    const GeometryTheory& t);

}  // namespace qhc

#endif

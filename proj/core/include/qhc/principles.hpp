#ifndef QHC_PRINCIPLES_HPP
#define QHC_PRINCIPLES_HPP

#include <optional>

#include "qhc/corpus.hpp"

namespace qhc {

enum class PrincipleKind { Law, Rule };
enum class Expectation { HoldsInAll, FailsSomewhere };
enum class Refutability { FiniteWitness, RequiresInfinite };

// One statement of a principle: premise patterns (rules only) plus the law /
// conclusion pattern, over shared metavariables.
struct PrincipleForm {
  std::string note;  // how this form relates to the canonical one
  std::vector<MetaVarDecl> metavars;
  std::vector<Formula> premises;
  Formula statement;
};

struct Principle {
  std::string name;
  PrincipleKind kind = PrincipleKind::Law;
  PrincipleForm canonical;
  std::vector<PrincipleForm> equivalent_forms;
  std::string notes;  // reconstruction flags and the like
};

struct StatusEntry {
  std::string principle;
  ModelClass model_class = ModelClass::ET;
  Expectation expected = Expectation::HoldsInAll;
  Refutability refutability = Refutability::FiniteWitness;  // for fails-somewhere
  std::string note;  // justification / finiteness argument
};

const std::vector<Principle>& principle_catalog();
const Principle* find_principle(const std::string& name);
const std::vector<StatusEntry>& status_table();
const StatusEntry* lookup_status(const std::string& principle, ModelClass c);

// ---------------------------------------------------------------------------
// Checking and search

struct CheckResult {
  bool holds = true;
  std::vector<std::string> premises;  // texts of the counterinstance, if any
  std::string statement;
};

CheckResult check_principle(const ETModel& m, const Principle& pr,
                            const InstanceGen& gen = InstanceGen::standard(),
                            bool all_forms = false);
CheckResult check_principle(const TKModel& m, const Principle& pr,
                            const InstanceGen& gen = InstanceGen::standard(),
                            bool all_forms = false);
CheckResult check_principle(const SheafModel& m, const Principle& pr,
                            const InstanceGen& gen = InstanceGen::standard(),
                            bool all_forms = false);

struct SearchBounds {
  int max_points = 4;
  int max_domain = 2;
  int max_stalk = 2;
  int jobs = 1;
};

struct SearchCensus {
  uint64_t spaces = 0;
  uint64_t models = 0;
  uint64_t checks = 0;
};

struct SearchOutcome {
  bool found = false;
  std::optional<ETModel> et;
  std::optional<TKModel> tk;
  std::optional<SheafModel> sheaf;
  CheckResult counterinstance;
  SearchCensus census;
  std::string exhaustion_note;  // the finiteness argument, when applicable
};

// Deterministically first countermodel in the canonical enumeration order
// (spaces by canonical key; sheaf valuations over isomorphism-class
// representatives; tuples lexicographic), or exhaustion with the census.
SearchOutcome find_countermodel(const Principle& pr, ModelClass cls,
                                const SearchBounds& bounds = {},
                                const InstanceGen& gen = InstanceGen::standard());

// ---------------------------------------------------------------------------
// Implication matrix

// Auxiliary schemes used by the matrix (adopted definitions).
struct AuxScheme {
  std::string name;
  std::vector<MetaVarDecl> metavars;
  Formula statement;
};
const std::vector<AuxScheme>& aux_schemes();

// A support instance: extra statements (with optional rule premises) that the
// proof of an implication obtains from its premises by substitution, built
// from the conclusion instance's own metavariable assignment. The premise
// principles count as validated on a model only together with these.
struct SupportInstance {
  std::vector<Formula> premises;
  Formula statement;
};

struct Implication {
  std::vector<std::string> premises;  // principle names
  std::string conclusion;             // principle or aux-scheme name
  std::string note;
  std::function<std::vector<SupportInstance>(const MetaAssignment&)> support;
};
const std::vector<Implication>& implication_table();

struct MatrixEntry {
  Implication implication;
  uint64_t models_checked = 0;
  bool violated = false;
  std::string detail;
};
struct MatrixReport {
  std::vector<MatrixEntry> entries;
  bool ok() const {
    for (const auto& e : entries)
      if (e.violated) return false;
    return true;
  }
};
MatrixReport implication_matrix_check(const CorpusBounds& bounds = {},
                                      const InstanceGen& gen = InstanceGen::standard());

// ---------------------------------------------------------------------------
// Expected-versus-computed status

struct StatusComputation {
  StatusEntry entry;
  bool matches = false;
  std::string computed;  // human-readable outcome
};
struct StatusReport {
  std::vector<StatusComputation> rows;
  bool ok() const {
    for (const auto& r : rows)
      if (!r.matches) return false;
    return true;
  }
};
StatusReport principles_status(const CorpusBounds& corpus_bounds = {},
                               const SearchBounds& search_bounds = {});

}  // namespace qhc

#endif

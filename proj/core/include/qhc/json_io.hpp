#ifndef QHC_JSON_IO_HPP
#define QHC_JSON_IO_HPP

#include <string>
#include <variant>

#include "qhc/principles.hpp"

namespace qhc {

struct IOError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Signature file: {"atoms":[{"name":"p","sort":"prop","arity":0}, ...]}
Signature signature_from_json(const std::string& text);
std::string signature_to_json(const Signature& sig);

// Space: {"points":["l","m","r"],"le":[["l","m"],["r","m"]]}; the relation is
// closed reflexively and transitively on load.
FiniteSpace space_from_json_text(const std::string& text);
std::string space_to_json(const FiniteSpace& space);

// Sheaf: {"stalks":{"l":["s0"],...},"maps":{"l<=m":{"s0":"t0"},...}}; the
// loader validates functoriality and reports the first failing composite.
std::string sheaf_to_json(const StalkSheaf& sheaf);

// Models carry their space, domain, class tag, and per-atom tables keyed by
// comma-joined domain tuples.
using AnyModel = std::variant<ETModel, TKModel, SheafModel>;
AnyModel model_from_json_text(const std::string& text);
AnyModel load_model_file(const std::string& path);
std::string model_to_json(const ETModel& m);
std::string model_to_json(const TKModel& m);
std::string model_to_json(const SheafModel& m);

// Theories: {"name":..., "signature":..., "axioms":{...}, "postulates":{...},
// "mixed":{...}} with formulas as strings.
Theory theory_from_json_text(const std::string& text);
Theory load_theory_file(const std::string& path);

// Proof scripts in JSON-lines form; a line holding {"hypotheses":[...]}
// declares the hypotheses, every other line is {"id":n,"formula":...,"by":...}.
ProofScript script_from_json_lines(const std::string& text, const Signature& sig);
ProofScript load_script_file(const std::string& path, const Signature& sig);
std::string script_to_json_lines(const ProofScript& script);

std::string search_outcome_to_json(const SearchOutcome& outcome);
std::string read_file(const std::string& path);

}  // namespace qhc

#endif

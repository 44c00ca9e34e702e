#ifndef QHC_TRANSFORMS_HPP
#define QHC_TRANSFORMS_HPP

#include "qhc/set_models.hpp"
#include "qhc/sheaf_models.hpp"

namespace qhc {

// Single-sorted modal formulas: classical connectives plus Box; Dia
// abbreviates ~box~ and is expanded on construction.
class ModalFormula {
public:
  enum class Kind : uint8_t { Atom, TT, FF, And, Or, Imp, Forall, Exists, Box };

  Kind kind() const { return node_->kind; }
  const std::string& atom_name() const { return node_->name; }
  const std::vector<Var>& atom_args() const { return node_->args; }
  const Var& bound_var() const { return node_->name; }
  ModalFormula lhs() const { return ModalFormula(node_->lhs); }
  ModalFormula rhs() const { return ModalFormula(node_->rhs); }
  ModalFormula body() const { return ModalFormula(node_->rhs); }

  static ModalFormula atom(std::string name, std::vector<Var> args);
  static ModalFormula tt();
  static ModalFormula ff();
  static ModalFormula conj(ModalFormula l, ModalFormula r);
  static ModalFormula disj(ModalFormula l, ModalFormula r);
  static ModalFormula imp(ModalFormula l, ModalFormula r);
  static ModalFormula neg(ModalFormula x) { return imp(std::move(x), ff()); }
  static ModalFormula forall(Var v, ModalFormula body);
  static ModalFormula exists(Var v, ModalFormula body);
  static ModalFormula box(ModalFormula body);
  static ModalFormula dia(ModalFormula p) { return neg(box(neg(std::move(p)))); }

  bool operator==(const ModalFormula& other) const;
  bool operator!=(const ModalFormula& other) const { return !(*this == other); }

private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Var> args;
    std::shared_ptr<const Node> lhs, rhs;
  };
  using NodePtr = std::shared_ptr<const Node>;
  explicit ModalFormula(NodePtr n) : node_(std::move(n)) {}
  NodePtr node_;
  static ModalFormula make(Node n);
};

std::string print(const ModalFormula& f);

struct TranslationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Erases every ! and ?; intuitionistic connectives become classical. The
// input must contain no atomic problems; pure propositions are fixed points.
Formula erase_to_qc(const Formula& f);

// The double-negation retraction onto the problem sort: ! erased, ? becomes
// ~~, and every proposition-sorted subformula (atoms included) is prefixed by
// ~~ as its connectives transfer. Proposition atoms become problem atoms of
// the same name; problem atoms pass through unchanged.
Formula retract_to_qh(const Formula& f);

// Godel-McKinsey-Tarski style translation of the simple-problem fragment
// (no atomic problems): ! becomes box, ? is erased, and the problem-sorted
// ->, forall and ~ acquire a box prefix.
ModalFormula box_translate(const Formula& f);

// Topological S4 semantics: boolean clauses plus box = interior.
using ModalValuation = std::map<std::string, AtomTable>;
PointSet s4_eval(const ModalFormula& g, const FiniteSpace& space,
                 const std::vector<std::string>& domain, const ModalValuation& valuation,
                 const Env& env = {});

// Model-level transports: atomic problems become their supports (open sets);
// propositions pass through.
ETModel nabla_model(const SheafModel& m);
// Atomic propositions become the smallest regular open containing their
// interior; problems pass through.
TKModel diamond_model(const ETModel& m);

}  // namespace qhc

#endif

#ifndef QHC_SYNTAX_HPP
#define QHC_SYNTAX_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qhc {

// The two sorts of QHC. Problems carry intuitionistic logic, propositions
// classical logic; ! sends propositions to problems, ? the other way.
enum class Sort : uint8_t { Problem, Proposition };

const char* to_string(Sort s);

// Terms are variables only; no function symbols.
using Var = std::string;

struct AtomDecl {
  std::string name;
  Sort sort = Sort::Proposition;
  int arity = 0;
};

class Signature {
public:
  Signature() = default;
  explicit Signature(std::vector<AtomDecl> atoms);

  void add(const AtomDecl& decl);
  const AtomDecl* find(const std::string& name) const;
  const std::vector<AtomDecl>& atoms() const { return atoms_; }

private:
  std::vector<AtomDecl> atoms_;
  std::map<std::string, size_t> index_;
};

struct SortError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Immutable formula values. Connectives are shared between the two sorts;
// each node caches the unique sort of the subformula it heads.
// `ff` is the classical falsehood 0, `bot` the intuitionistic one.
class Formula {
public:
  enum class Kind : uint8_t {
    Atom,
    TT,   // proposition truth
    FF,   // proposition falsity
    Bot,  // problem falsity
    And,
    Or,
    Imp,
    Forall,
    Exists,
    Bang,   // proposition -> problem
    Quest,  // problem -> proposition
  };

  Formula() = default;

  Kind kind() const { return node_->kind; }
  Sort sort() const { return node_->sort; }
  bool is_null() const { return node_ == nullptr; }

  // Atom accessors.
  const std::string& atom_name() const { return node_->name; }
  const std::vector<Var>& atom_args() const { return node_->args; }

  // Binder accessors.
  const Var& bound_var() const { return node_->name; }

  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }
  Formula body() const { return Formula(node_->rhs); }

  static Formula atom(std::string name, std::vector<Var> args, Sort sort);
  static Formula tt();
  static Formula ff();
  static Formula bot();
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula imp(Formula l, Formula r);
  static Formula forall(Var v, Formula body);
  static Formula exists(Var v, Formula body);
  static Formula bang(Formula body);
  static Formula quest(Formula body);

  // Sugar, expanded on construction.
  static Formula neg(Formula x);               // x -> falsity of x's sort
  static Formula iff(Formula l, Formula r);    // (l->r) /\ (r->l)
  static Formula box(Formula p);               // ?!p
  static Formula nabla(Formula a);             // !?a
  static Formula dia(Formula p);               // ~?!~p
  static Formula falsity(Sort s) { return s == Sort::Problem ? bot() : ff(); }

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

private:
  struct Node {
    Kind kind;
    Sort sort;
    std::string name;       // atom name or bound variable
    std::vector<Var> args;  // atom arguments
    std::shared_ptr<const Node> lhs, rhs;  // rhs doubles as quantifier body
  };
  using NodePtr = std::shared_ptr<const Node>;
  explicit Formula(NodePtr n) : node_(std::move(n)) {}
  NodePtr node_;
  static Formula make(Node n);
};

Sort sort_of(const Formula& f);

std::set<Var> free_vars(const Formula& f);
bool is_closed(const Formula& f);

// Capture-avoiding simultaneous substitution of variables for variables.
Formula substitute(const Formula& f, const std::map<Var, Var>& binding);

bool alpha_equal(const Formula& f, const Formula& g);

// Universal closure over all free variables, in lexicographic order.
Formula universal_closure(const Formula& f);

// All atom names occurring in f.
std::set<std::string> atoms_of(const Formula& f);
bool contains_kind(const Formula& f, Formula::Kind k);

struct PrintOptions {
  bool modal_sugar = false;  // print box/nabla/dia instead of ?!, !?, ...
};

std::string print(const Formula& f, const PrintOptions& opts = {});

struct ParseError : std::runtime_error {
  enum class Category { Syntax, UnknownAtom, Arity, SortClash };
  ParseError(size_t position, Category cat, const std::string& message);
  size_t position;
  Category category;
};

Formula parse(const std::string& text, const Signature& sig);

// ---------------------------------------------------------------------------
// Schemata: formulas over metavariables, instantiated by formula families.

struct MetaVarDecl {
  std::string name;
  Sort sort = Sort::Problem;
  int arity = 0;  // parametric metavariables take term arguments
};

struct Schema {
  std::string name;
  std::vector<MetaVarDecl> metavars;
  std::vector<Var> term_metavars;  // variables standing for arbitrary terms
  Formula pattern;                 // metavariables appear as atoms

  const MetaVarDecl* find_metavar(const std::string& n) const;
};

// Assignment for one metavariable: parameter list plus body.
struct FormulaFamily {
  std::vector<Var> params;
  Formula body;
};

struct MetaAssignment {
  std::map<std::string, FormulaFamily> formulas;
  std::map<Var, Var> terms;
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Replaces metavariable atoms by the assigned families (parameters bound to
// the occurrence's arguments), renaming pattern binders to avoid capture.
// With close=true the result is the universal closure.
Formula instantiate_schema(const Schema& schema, const MetaAssignment& assignment,
                           bool close = true);

Var fresh_var(const Var& base, const std::set<Var>& avoid);

}  // namespace qhc

#endif

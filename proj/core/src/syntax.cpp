#include "qhc/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qhc {

const char* to_string(Sort s) {
  return s == Sort::Problem ? "problem" : "proposition";
}

Signature::Signature(std::vector<AtomDecl> atoms) {
  for (auto& a : atoms) add(a);
}

void Signature::add(const AtomDecl& decl) {
  if (index_.count(decl.name))
    throw std::runtime_error("duplicate atom in signature: " + decl.name);
  if (decl.arity < 0) throw std::runtime_error("negative arity: " + decl.name);
  index_[decl.name] = atoms_.size();
  atoms_.push_back(decl);
}

const AtomDecl* Signature::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &atoms_[it->second];
}

// ---------------------------------------------------------------------------
// Formula construction

Formula Formula::make(Node n) {
  Formula f;
  f.node_ = std::make_shared<const Node>(std::move(n));
  return f;
}

Formula Formula::atom(std::string name, std::vector<Var> args, Sort sort) {
  return make({Kind::Atom, sort, std::move(name), std::move(args), nullptr, nullptr});
}

Formula Formula::tt() {
  return make({Kind::TT, Sort::Proposition, {}, {}, nullptr, nullptr});
}
Formula Formula::ff() {
  return make({Kind::FF, Sort::Proposition, {}, {}, nullptr, nullptr});
}
Formula Formula::bot() {
  return make({Kind::Bot, Sort::Problem, {}, {}, nullptr, nullptr});
}

static void require_same_sort(const Formula& l, const Formula& r, const char* op) {
  if (l.sort() != r.sort())
    throw SortError(std::string(op) + " requires operands of the same sort");
}

Formula Formula::conj(Formula l, Formula r) {
  require_same_sort(l, r, "/\\");
  Sort s = l.sort();
  return make({Kind::And, s, {}, {}, std::move(l.node_), std::move(r.node_)});
}

Formula Formula::disj(Formula l, Formula r) {
  require_same_sort(l, r, "\\/");
  Sort s = l.sort();
  return make({Kind::Or, s, {}, {}, std::move(l.node_), std::move(r.node_)});
}

Formula Formula::imp(Formula l, Formula r) {
  require_same_sort(l, r, "->");
  Sort s = l.sort();
  return make({Kind::Imp, s, {}, {}, std::move(l.node_), std::move(r.node_)});
}

Formula Formula::forall(Var v, Formula body) {
  Sort s = body.sort();
  return make({Kind::Forall, s, std::move(v), {}, nullptr, std::move(body.node_)});
}

Formula Formula::exists(Var v, Formula body) {
  Sort s = body.sort();
  return make({Kind::Exists, s, std::move(v), {}, nullptr, std::move(body.node_)});
}

Formula Formula::bang(Formula body) {
  if (body.sort() != Sort::Proposition)
    throw SortError("! applies to propositions only");
  return make({Kind::Bang, Sort::Problem, {}, {}, nullptr, std::move(body.node_)});
}

Formula Formula::quest(Formula body) {
  if (body.sort() != Sort::Problem)
    throw SortError("? applies to problems only");
  return make({Kind::Quest, Sort::Proposition, {}, {}, nullptr, std::move(body.node_)});
}

Formula Formula::neg(Formula x) {
  Sort s = x.sort();
  return imp(std::move(x), falsity(s));
}

Formula Formula::iff(Formula l, Formula r) {
  return conj(imp(l, r), imp(r, l));
}

Formula Formula::box(Formula p) { return quest(bang(std::move(p))); }
Formula Formula::nabla(Formula a) { return bang(quest(std::move(a))); }
Formula Formula::dia(Formula p) { return neg(box(neg(std::move(p)))); }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  if (node_->kind != other.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Atom:
      return node_->sort == other.node_->sort && node_->name == other.node_->name &&
             node_->args == other.node_->args;
    case Kind::TT:
    case Kind::FF:
    case Kind::Bot:
      return true;
    case Kind::And:
    case Kind::Or:
    case Kind::Imp:
      return lhs() == other.lhs() && rhs() == other.rhs();
    case Kind::Forall:
    case Kind::Exists:
      return node_->name == other.node_->name && rhs() == other.rhs();
    case Kind::Bang:
    case Kind::Quest:
      return rhs() == other.rhs();
  }
  return false;
}

Sort sort_of(const Formula& f) { return f.sort(); }

static void free_vars_into(const Formula& f, std::set<Var>& bound, std::set<Var>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      for (const auto& v : f.atom_args())
        if (!bound.count(v)) out.insert(v);
      return;
    case Formula::Kind::TT:
    case Formula::Kind::FF:
    case Formula::Kind::Bot:
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      free_vars_into(f.lhs(), bound, out);
      free_vars_into(f.rhs(), bound, out);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bool was_bound = bound.count(f.bound_var()) > 0;
      bound.insert(f.bound_var());
      free_vars_into(f.body(), bound, out);
      if (!was_bound) bound.erase(f.bound_var());
      return;
    }
    case Formula::Kind::Bang:
    case Formula::Kind::Quest:
      free_vars_into(f.body(), bound, out);
      return;
  }
}

std::set<Var> free_vars(const Formula& f) {
  std::set<Var> bound, out;
  free_vars_into(f, bound, out);
  return out;
}

bool is_closed(const Formula& f) { return free_vars(f).empty(); }

Var fresh_var(const Var& base, const std::set<Var>& avoid) {
  Var v = base;
  while (avoid.count(v)) v += "'";
  return v;
}

static Formula substitute_impl(const Formula& f, const std::map<Var, Var>& binding) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: {
      std::vector<Var> args = f.atom_args();
      bool changed = false;
      for (auto& a : args) {
        auto it = binding.find(a);
        if (it != binding.end()) {
          a = it->second;
          changed = true;
        }
      }
      return changed ? Formula::atom(f.atom_name(), std::move(args), f.sort()) : f;
    }
    case K::TT:
    case K::FF:
    case K::Bot:
      return f;
    case K::And:
      return Formula::conj(substitute_impl(f.lhs(), binding), substitute_impl(f.rhs(), binding));
    case K::Or:
      return Formula::disj(substitute_impl(f.lhs(), binding), substitute_impl(f.rhs(), binding));
    case K::Imp:
      return Formula::imp(substitute_impl(f.lhs(), binding), substitute_impl(f.rhs(), binding));
    case K::Forall:
    case K::Exists: {
      std::map<Var, Var> inner = binding;
      inner.erase(f.bound_var());
      if (inner.empty()) return f;
      // Rename the binder when some substituted value would be captured.
      std::set<Var> incoming;
      for (const auto& [from, to] : inner) incoming.insert(to);
      Var v = f.bound_var();
      Formula body = f.body();
      if (incoming.count(v)) {
        std::set<Var> avoid = free_vars(body);
        avoid.insert(incoming.begin(), incoming.end());
        for (const auto& [from, to] : inner) avoid.insert(from);
        Var v2 = fresh_var(v, avoid);
        body = substitute_impl(body, {{v, v2}});
        v = v2;
      }
      Formula new_body = substitute_impl(body, inner);
      return f.kind() == K::Forall ? Formula::forall(v, new_body) : Formula::exists(v, new_body);
    }
    case K::Bang:
      return Formula::bang(substitute_impl(f.body(), binding));
    case K::Quest:
      return Formula::quest(substitute_impl(f.body(), binding));
  }
  return f;
}

Formula substitute(const Formula& f, const std::map<Var, Var>& binding) {
  if (binding.empty()) return f;
  return substitute_impl(f, binding);
}

static bool alpha_equal_impl(const Formula& f, const Formula& g,
                             std::map<Var, Var>& fg, std::map<Var, Var>& gf) {
  using K = Formula::Kind;
  if (f.kind() != g.kind()) return false;
  switch (f.kind()) {
    case K::Atom: {
      if (f.atom_name() != g.atom_name() || f.sort() != g.sort()) return false;
      if (f.atom_args().size() != g.atom_args().size()) return false;
      for (size_t i = 0; i < f.atom_args().size(); ++i) {
        const Var& a = f.atom_args()[i];
        const Var& b = g.atom_args()[i];
        auto it = fg.find(a);
        auto jt = gf.find(b);
        if (it == fg.end() && jt == gf.end()) {
          if (a != b) return false;
        } else if (it == fg.end() || jt == gf.end() || it->second != b || jt->second != a) {
          return false;
        }
      }
      return true;
    }
    case K::TT:
    case K::FF:
    case K::Bot:
      return true;
    case K::And:
    case K::Or:
    case K::Imp:
      return alpha_equal_impl(f.lhs(), g.lhs(), fg, gf) &&
             alpha_equal_impl(f.rhs(), g.rhs(), fg, gf);
    case K::Forall:
    case K::Exists: {
      auto saved_f = fg.find(f.bound_var()) != fg.end()
                         ? std::optional<Var>(fg[f.bound_var()])
                         : std::nullopt;
      auto saved_g = gf.find(g.bound_var()) != gf.end()
                         ? std::optional<Var>(gf[g.bound_var()])
                         : std::nullopt;
      fg[f.bound_var()] = g.bound_var();
      gf[g.bound_var()] = f.bound_var();
      bool ok = alpha_equal_impl(f.body(), g.body(), fg, gf);
      if (saved_f) fg[f.bound_var()] = *saved_f; else fg.erase(f.bound_var());
      if (saved_g) gf[g.bound_var()] = *saved_g; else gf.erase(g.bound_var());
      return ok;
    }
    case K::Bang:
    case K::Quest:
      return alpha_equal_impl(f.body(), g.body(), fg, gf);
  }
  return false;
}

bool alpha_equal(const Formula& f, const Formula& g) {
  std::map<Var, Var> fg, gf;
  return alpha_equal_impl(f, g, fg, gf);
}

Formula universal_closure(const Formula& f) {
  std::set<Var> fv = free_vars(f);
  Formula out = f;
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) out = Formula::forall(*it, out);
  return out;
}

static void atoms_into(const Formula& f, std::set<std::string>& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: out.insert(f.atom_name()); return;
    case K::TT: case K::FF: case K::Bot: return;
    case K::And: case K::Or: case K::Imp:
      atoms_into(f.lhs(), out);
      atoms_into(f.rhs(), out);
      return;
    default:
      atoms_into(f.body(), out);
      return;
  }
}

std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  atoms_into(f, out);
  return out;
}

bool contains_kind(const Formula& f, Formula::Kind k) {
  using K = Formula::Kind;
  if (f.kind() == k) return true;
  switch (f.kind()) {
    case K::Atom: case K::TT: case K::FF: case K::Bot: return false;
    case K::And: case K::Or: case K::Imp:
      return contains_kind(f.lhs(), k) || contains_kind(f.rhs(), k);
    default:
      return contains_kind(f.body(), k);
  }
}

// ---------------------------------------------------------------------------
// Printing
//
// Precedence: <-> (1) < -> (2, right) < \/ (3) < /\ (4) < prefix (5).
// A quantifier body extends maximally to the right, so a quantified formula
// needs parentheses whenever it is not in tail position.

namespace {

bool is_falsity_of(const Formula& f, Sort s) {
  return s == Sort::Problem ? f.kind() == Formula::Kind::Bot
                            : f.kind() == Formula::Kind::FF;
}

bool is_negation(const Formula& f) {
  return f.kind() == Formula::Kind::Imp && is_falsity_of(f.rhs(), f.sort());
}

bool is_iff(const Formula& f) {
  using K = Formula::Kind;
  if (f.kind() != K::And) return false;
  const Formula& l = f.lhs();
  const Formula& r = f.rhs();
  return l.kind() == K::Imp && r.kind() == K::Imp && l.lhs() == r.rhs() &&
         l.rhs() == r.lhs() && !is_negation(f.lhs()) && !is_negation(f.rhs());
}

void print_node(const Formula& f, int parent_prec, bool tail, const PrintOptions& opts,
                std::string& out);

void print_prefix(const char* op, const Formula& inner, int parent_prec, bool tail,
                  const PrintOptions& opts, std::string& out) {
  bool paren = parent_prec > 5;
  if (paren) out += '(';
  out += op;
  print_node(inner, 5, paren ? true : tail, opts, out);
  if (paren) out += ')';
}

void print_binary(const Formula& l, const char* op, const Formula& r, int prec,
                  bool right_assoc, int parent_prec, bool tail, const PrintOptions& opts,
                  std::string& out) {
  bool paren = parent_prec > prec;
  if (paren) out += '(';
  bool inner_tail = paren ? true : tail;
  print_node(l, right_assoc ? prec + 1 : prec, false, opts, out);
  out += ' ';
  out += op;
  out += ' ';
  print_node(r, right_assoc ? prec : prec + 1, inner_tail, opts, out);
  if (paren) out += ')';
}

void print_node(const Formula& f, int parent_prec, bool tail, const PrintOptions& opts,
                std::string& out) {
  using K = Formula::Kind;

  if (opts.modal_sugar) {
    // dia p = ~?!~p; box p = ?!p; nabla a = !?a
    if (is_negation(f) && f.lhs().kind() == K::Quest &&
        f.lhs().body().kind() == K::Bang && is_negation(f.lhs().body().body())) {
      print_prefix("dia ", f.lhs().body().body().lhs(), parent_prec, tail, opts, out);
      return;
    }
    if (f.kind() == K::Quest && f.body().kind() == K::Bang) {
      print_prefix("box ", f.body().body(), parent_prec, tail, opts, out);
      return;
    }
    if (f.kind() == K::Bang && f.body().kind() == K::Quest) {
      print_prefix("nabla ", f.body().body(), parent_prec, tail, opts, out);
      return;
    }
  }
  if (is_negation(f)) {
    print_prefix("~", f.lhs(), parent_prec, tail, opts, out);
    return;
  }
  if (is_iff(f)) {
    print_binary(f.lhs().lhs(), "<->", f.lhs().rhs(), 1, false, parent_prec, tail, opts, out);
    return;
  }

  switch (f.kind()) {
    case K::Atom: {
      out += f.atom_name();
      if (!f.atom_args().empty()) {
        out += '(';
        for (size_t i = 0; i < f.atom_args().size(); ++i) {
          if (i) out += ',';
          out += f.atom_args()[i];
        }
        out += ')';
      }
      return;
    }
    case K::TT: out += "tt"; return;
    case K::FF: out += "ff"; return;
    case K::Bot: out += "bot"; return;
    case K::And:
      print_binary(f.lhs(), "/\\", f.rhs(), 4, false, parent_prec, tail, opts, out);
      return;
    case K::Or:
      print_binary(f.lhs(), "\\/", f.rhs(), 3, false, parent_prec, tail, opts, out);
      return;
    case K::Imp:
      print_binary(f.lhs(), "->", f.rhs(), 2, true, parent_prec, tail, opts, out);
      return;
    case K::Forall:
    case K::Exists: {
      // A quantifier body extends to the end of the expression, so the
      // quantifier needs no parentheses exactly when in tail position.
      bool paren = !tail;
      if (paren) out += '(';
      out += f.kind() == K::Forall ? "forall " : "exists ";
      out += f.bound_var();
      out += ". ";
      print_node(f.body(), 0, true, opts, out);
      if (paren) out += ')';
      return;
    }
    case K::Bang:
      print_prefix("!", f.body(), parent_prec, tail, opts, out);
      return;
    case K::Quest:
      print_prefix("?", f.body(), parent_prec, tail, opts, out);
      return;
  }
}

}  // namespace

std::string print(const Formula& f, const PrintOptions& opts) {
  std::string out;
  print_node(f, 0, true, opts, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

ParseError::ParseError(size_t pos, Category cat, const std::string& message)
    : std::runtime_error("parse error at " + std::to_string(pos) + ": " + message),
      position(pos),
      category(cat) {}

namespace {

struct Token {
  enum class Type {
    Ident, And, Or, Imp, Iff, Not, Bang, Quest, Box, Nabla, Dia,
    Forall, Exists, Dot, Comma, LParen, RParen, TT, FF, Bot, End
  };
  Type type;
  std::string text;
  size_t pos;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }
  Token next() {
    Token t = current_;
    advance();
    return t;
  }

private:
  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    if (i_ < text_.size() && text_[i_] == '#') { i_ = text_.size(); }
    size_t pos = i_;
    if (i_ >= text_.size()) {
      current_ = {Token::Type::End, "", pos};
      return;
    }
    // Unicode aliases accepted on input, never emitted.
    static const std::vector<std::pair<std::string, Token::Type>> unicode = {
        {"∧", Token::Type::And},    // ∧
        {"∨", Token::Type::Or},     // ∨
        {"→", Token::Type::Imp},    // →
        {"¬", Token::Type::Not},    // ¬
        {"∀", Token::Type::Forall}, // ∀
        {"∃", Token::Type::Exists}, // ∃
    };
    for (const auto& [seq, type] : unicode) {
      if (text_.compare(i_, seq.size(), seq) == 0) {
        i_ += seq.size();
        current_ = {type, seq, pos};
        return;
      }
    }
    char c = text_[i_];
    auto two = text_.substr(i_, 2);
    auto three = text_.substr(i_, 3);
    if (three == "<->") { i_ += 3; current_ = {Token::Type::Iff, three, pos}; return; }
    if (two == "/\\") { i_ += 2; current_ = {Token::Type::And, two, pos}; return; }
    if (two == "\\/") { i_ += 2; current_ = {Token::Type::Or, two, pos}; return; }
    if (two == "->") { i_ += 2; current_ = {Token::Type::Imp, two, pos}; return; }
    switch (c) {
      case '~': ++i_; current_ = {Token::Type::Not, "~", pos}; return;
      case '!': ++i_; current_ = {Token::Type::Bang, "!", pos}; return;
      case '?': ++i_; current_ = {Token::Type::Quest, "?", pos}; return;
      case '.': ++i_; current_ = {Token::Type::Dot, ".", pos}; return;
      case ',': ++i_; current_ = {Token::Type::Comma, ",", pos}; return;
      case '(': ++i_; current_ = {Token::Type::LParen, "(", pos}; return;
      case ')': ++i_; current_ = {Token::Type::RParen, ")", pos}; return;
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i_;
      while (j < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_' ||
              text_[j] == '\'')) {
        ++j;
      }
      std::string word = text_.substr(i_, j - i_);
      i_ = j;
      if (word == "tt") current_ = {Token::Type::TT, word, pos};
      else if (word == "ff") current_ = {Token::Type::FF, word, pos};
      else if (word == "bot") current_ = {Token::Type::Bot, word, pos};
      else if (word == "box") current_ = {Token::Type::Box, word, pos};
      else if (word == "nabla") current_ = {Token::Type::Nabla, word, pos};
      else if (word == "dia") current_ = {Token::Type::Dia, word, pos};
      else if (word == "forall") current_ = {Token::Type::Forall, word, pos};
      else if (word == "exists") current_ = {Token::Type::Exists, word, pos};
      else current_ = {Token::Type::Ident, word, pos};
      return;
    }
    throw ParseError(pos, ParseError::Category::Syntax,
                     std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  size_t i_ = 0;
  Token current_;
};

class Parser {
public:
  Parser(const std::string& text, const Signature& sig) : lex_(text), sig_(sig) {}

  Formula parse_formula() {
    Formula f = parse_iff();
    if (lex_.peek().type != Token::Type::End)
      throw ParseError(lex_.peek().pos, ParseError::Category::Syntax,
                       "unexpected trailing input '" + lex_.peek().text + "'");
    return f;
  }

private:
  [[noreturn]] void sort_clash(size_t pos, const std::string& message) {
    throw ParseError(pos, ParseError::Category::SortClash, message);
  }

  Formula parse_iff() {
    size_t pos = lex_.peek().pos;
    Formula l = parse_imp();
    while (lex_.peek().type == Token::Type::Iff) {
      lex_.next();
      Formula r = parse_imp();
      if (l.sort() != r.sort()) sort_clash(pos, "<-> requires operands of the same sort");
      l = Formula::iff(l, r);
    }
    return l;
  }

  Formula parse_imp() {
    size_t pos = lex_.peek().pos;
    Formula l = parse_or();
    if (lex_.peek().type == Token::Type::Imp) {
      lex_.next();
      Formula r = parse_imp();
      if (l.sort() != r.sort()) sort_clash(pos, "-> requires operands of the same sort");
      return Formula::imp(l, r);
    }
    return l;
  }

  Formula parse_or() {
    size_t pos = lex_.peek().pos;
    Formula l = parse_and();
    while (lex_.peek().type == Token::Type::Or) {
      lex_.next();
      Formula r = parse_and();
      if (l.sort() != r.sort()) sort_clash(pos, "\\/ requires operands of the same sort");
      l = Formula::disj(l, r);
    }
    return l;
  }

  Formula parse_and() {
    size_t pos = lex_.peek().pos;
    Formula l = parse_unary();
    while (lex_.peek().type == Token::Type::And) {
      lex_.next();
      Formula r = parse_unary();
      if (l.sort() != r.sort()) sort_clash(pos, "/\\ requires operands of the same sort");
      l = Formula::conj(l, r);
    }
    return l;
  }

  Formula parse_unary() {
    Token t = lex_.peek();
    switch (t.type) {
      case Token::Type::Not: {
        lex_.next();
        return Formula::neg(parse_unary());
      }
      case Token::Type::Bang: {
        lex_.next();
        Formula b = parse_unary();
        if (b.sort() != Sort::Proposition)
          sort_clash(t.pos, "! applies to propositions only");
        return Formula::bang(b);
      }
      case Token::Type::Quest: {
        lex_.next();
        Formula b = parse_unary();
        if (b.sort() != Sort::Problem)
          sort_clash(t.pos, "? applies to problems only");
        return Formula::quest(b);
      }
      case Token::Type::Box: {
        lex_.next();
        Formula b = parse_unary();
        if (b.sort() != Sort::Proposition) sort_clash(t.pos, "box applies to propositions");
        return Formula::box(b);
      }
      case Token::Type::Nabla: {
        lex_.next();
        Formula b = parse_unary();
        if (b.sort() != Sort::Problem) sort_clash(t.pos, "nabla applies to problems");
        return Formula::nabla(b);
      }
      case Token::Type::Dia: {
        lex_.next();
        Formula b = parse_unary();
        if (b.sort() != Sort::Proposition) sort_clash(t.pos, "dia applies to propositions");
        return Formula::dia(b);
      }
      case Token::Type::Forall:
      case Token::Type::Exists: {
        lex_.next();
        std::vector<Var> vars;
        for (;;) {
          Token v = lex_.next();
          if (v.type != Token::Type::Ident)
            throw ParseError(v.pos, ParseError::Category::Syntax, "expected variable name");
          vars.push_back(v.text);
          Token sep = lex_.next();
          if (sep.type == Token::Type::Dot) break;
          if (sep.type != Token::Type::Comma)
            throw ParseError(sep.pos, ParseError::Category::Syntax,
                             "expected ',' or '.' in quantifier");
        }
        Formula body = parse_iff();
        for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
          body = t.type == Token::Type::Forall ? Formula::forall(*it, body)
                                               : Formula::exists(*it, body);
        }
        return body;
      }
      case Token::Type::LParen: {
        lex_.next();
        Formula f = parse_iff();
        Token close = lex_.next();
        if (close.type != Token::Type::RParen)
          throw ParseError(close.pos, ParseError::Category::Syntax, "expected ')'");
        return f;
      }
      case Token::Type::TT: lex_.next(); return Formula::tt();
      case Token::Type::FF: lex_.next(); return Formula::ff();
      case Token::Type::Bot: lex_.next(); return Formula::bot();
      case Token::Type::Ident: {
        lex_.next();
        const AtomDecl* decl = sig_.find(t.text);
        if (!decl)
          throw ParseError(t.pos, ParseError::Category::UnknownAtom,
                           "unknown atom '" + t.text + "'");
        std::vector<Var> args;
        if (lex_.peek().type == Token::Type::LParen) {
          lex_.next();
          for (;;) {
            Token a = lex_.next();
            if (a.type != Token::Type::Ident)
              throw ParseError(a.pos, ParseError::Category::Syntax, "expected variable");
            args.push_back(a.text);
            Token sep = lex_.next();
            if (sep.type == Token::Type::RParen) break;
            if (sep.type != Token::Type::Comma)
              throw ParseError(sep.pos, ParseError::Category::Syntax, "expected ',' or ')'");
          }
        }
        if (static_cast<int>(args.size()) != decl->arity)
          throw ParseError(t.pos, ParseError::Category::Arity,
                           "atom '" + t.text + "' expects " + std::to_string(decl->arity) +
                               " argument(s), got " + std::to_string(args.size()));
        return Formula::atom(decl->name, std::move(args), decl->sort);
      }
      default:
        throw ParseError(t.pos, ParseError::Category::Syntax,
                         "unexpected token '" + t.text + "'");
    }
  }

  Lexer lex_;
  const Signature& sig_;
};

}  // namespace

Formula parse(const std::string& text, const Signature& sig) {
  try {
    Parser p(text, sig);
    return p.parse_formula();
  } catch (const SortError& e) {
    throw ParseError(0, ParseError::Category::SortClash, e.what());
  }
}

// ---------------------------------------------------------------------------
// Schema instantiation

const MetaVarDecl* Schema::find_metavar(const std::string& n) const {
  for (const auto& m : metavars)
    if (m.name == n) return &m;
  return nullptr;
}

namespace {

struct Instantiator {
  const Schema& schema;
  const MetaAssignment& assignment;
  std::set<Var> avoid;  // free vars of all assigned bodies (minus params)

  Formula run(const Formula& pattern, std::map<Var, Var>& binder_renames) {
    using K = Formula::Kind;
    switch (pattern.kind()) {
      case K::Atom: {
        const MetaVarDecl* mv = schema.find_metavar(pattern.atom_name());
        if (!mv)
          throw SchemaError("pattern atom is not a declared metavariable: " +
                            pattern.atom_name());
        auto it = assignment.formulas.find(mv->name);
        if (it == assignment.formulas.end())
          throw SchemaError("missing metavariable assignment: " + mv->name);
        const FormulaFamily& fam = it->second;
        if (fam.params.size() != pattern.atom_args().size())
          throw SchemaError("arity mismatch instantiating " + mv->name);
        if (fam.body.sort() != mv->sort)
          throw SchemaError("sort mismatch instantiating " + mv->name + ": expected " +
                            to_string(mv->sort) + ", got " + to_string(fam.body.sort()));
        std::map<Var, Var> sub;
        for (size_t i = 0; i < fam.params.size(); ++i) {
          Var arg = pattern.atom_args()[i];
          auto rn = binder_renames.find(arg);
          if (rn != binder_renames.end()) arg = rn->second;
          auto tm = assignment.terms.find(arg);
          if (tm != assignment.terms.end()) arg = tm->second;
          if (fam.params[i] != arg) sub[fam.params[i]] = arg;
        }
        return substitute(fam.body, sub);
      }
      case K::TT:
      case K::FF:
      case K::Bot:
        return pattern;
      case K::And:
        return Formula::conj(run(pattern.lhs(), binder_renames),
                             run(pattern.rhs(), binder_renames));
      case K::Or:
        return Formula::disj(run(pattern.lhs(), binder_renames),
                             run(pattern.rhs(), binder_renames));
      case K::Imp:
        return Formula::imp(run(pattern.lhs(), binder_renames),
                            run(pattern.rhs(), binder_renames));
      case K::Forall:
      case K::Exists: {
        Var v = pattern.bound_var();
        Var v2 = v;
        if (avoid.count(v)) v2 = fresh_var(v, avoid);
        auto saved = binder_renames.count(v) ? std::optional<Var>(binder_renames[v])
                                             : std::nullopt;
        if (v2 != v) binder_renames[v] = v2;
        Formula body = run(pattern.body(), binder_renames);
        if (saved) binder_renames[v] = *saved; else binder_renames.erase(v);
        return pattern.kind() == K::Forall ? Formula::forall(v2, body)
                                           : Formula::exists(v2, body);
      }
      case K::Bang:
        return Formula::bang(run(pattern.body(), binder_renames));
      case K::Quest:
        return Formula::quest(run(pattern.body(), binder_renames));
    }
    throw SchemaError("unreachable");
  }
};

}  // namespace

Formula instantiate_schema(const Schema& schema, const MetaAssignment& assignment,
                           bool close) {
  for (const auto& m : schema.metavars)
    if (!assignment.formulas.count(m.name))
      throw SchemaError("missing metavariable assignment: " + m.name);
  for (const auto& t : schema.term_metavars)
    if (!assignment.terms.count(t))
      throw SchemaError("missing term metavariable assignment: " + t);

  Instantiator inst{schema, assignment, {}};
  for (const auto& [name, fam] : assignment.formulas) {
    std::set<Var> fv = free_vars(fam.body);
    for (const auto& p : fam.params) fv.erase(p);
    inst.avoid.insert(fv.begin(), fv.end());
  }
  for (const auto& [name, v] : assignment.terms) inst.avoid.insert(v);

  std::map<Var, Var> renames;
  Formula out = inst.run(schema.pattern, renames);
  return close ? universal_closure(out) : out;
}

}  // namespace qhc

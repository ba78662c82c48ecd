#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

// Core syntax: modal formulas, sequents, and iterated-modality schemas.
//
// A single immutable node type covers three layers of the language:
//   * positive formulas:  Var, Top, Bot, Or, And, Dia, Box
//   * full formulas:      positive + Not, Implies
//   * schematic formulas: positive + Iter (an iterated modality box^{n+c}
//     whose exponent mentions the single global parameter n)
// Layer membership is a predicate (is_positive / is_schematic), not a
// separate type; parsers and checkers enforce it at their boundaries.

namespace posgl {

enum class Conn : std::uint8_t { Var, Top, Bot, Or, And, Dia, Box, Not, Implies, Iter };
enum class Mod : std::uint8_t { Box, Dia };

// Thrown when a configured resource bound is hit (search nodes, valuation
// count, powerset width). Always distinct from a negative answer.
struct ResourceCapExceeded : std::runtime_error {
  explicit ResourceCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

class Formula {
 public:
  struct Node {
    Conn kind;
    std::string var;                    // Var
    Mod mod = Mod::Box;                 // Iter
    std::uint32_t offset = 0;           // Iter: exponent is n + offset
    std::shared_ptr<const Node> a, b;   // children
  };

  Formula() = default;  // empty handle; only assignable

  static Formula var(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Conn::Var;
    n->var = std::move(name);
    return Formula(std::move(n));
  }
  static Formula top() { return nullary(Conn::Top); }
  static Formula bot() { return nullary(Conn::Bot); }
  static Formula disj(Formula l, Formula r) { return binary(Conn::Or, std::move(l), std::move(r)); }
  static Formula conj(Formula l, Formula r) { return binary(Conn::And, std::move(l), std::move(r)); }
  static Formula dia(Formula f) { return unary(Conn::Dia, std::move(f)); }
  static Formula box(Formula f) { return unary(Conn::Box, std::move(f)); }
  static Formula negation(Formula f) { return unary(Conn::Not, std::move(f)); }
  static Formula implies(Formula l, Formula r) { return binary(Conn::Implies, std::move(l), std::move(r)); }
  static Formula iter(Mod m, std::uint32_t offset, Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = Conn::Iter;
    n->mod = m;
    n->offset = offset;
    n->a = f.n_;
    return Formula(std::move(n));
  }
  static Formula modal(Mod m, Formula f) { return m == Mod::Box ? box(std::move(f)) : dia(std::move(f)); }

  bool empty() const { return n_ == nullptr; }
  Conn kind() const { return n_->kind; }
  const std::string& var_name() const { return n_->var; }
  Mod modality() const { return n_->mod; }
  std::uint32_t iter_offset() const { return n_->offset; }
  Formula left() const { return Formula(n_->a); }
  Formula right() const { return Formula(n_->b); }
  Formula child() const { return Formula(n_->a); }

  bool is_positive() const { return scan(*n_, false); }
  bool is_schematic() const { return scan(*n_, true); }
  bool is_ground() const { return no_iter(*n_); }

  friend int compare(const Formula& x, const Formula& y) { return cmp(*x.n_, *y.n_); }
  friend bool operator==(const Formula& x, const Formula& y) {
    return x.n_ == y.n_ || cmp(*x.n_, *y.n_) == 0;
  }
  friend bool operator!=(const Formula& x, const Formula& y) { return !(x == y); }
  friend bool operator<(const Formula& x, const Formula& y) { return cmp(*x.n_, *y.n_) < 0; }

 private:
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static Formula nullary(Conn k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return Formula(std::move(n));
  }
  static Formula unary(Conn k, Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = f.n_;
    return Formula(std::move(n));
  }
  static Formula binary(Conn k, Formula l, Formula r) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = l.n_;
    n->b = r.n_;
    return Formula(std::move(n));
  }
  static bool scan(const Node& n, bool iter_ok) {
    if (n.kind == Conn::Not || n.kind == Conn::Implies) return false;
    if (n.kind == Conn::Iter && !iter_ok) return false;
    if (n.a && !scan(*n.a, iter_ok)) return false;
    if (n.b && !scan(*n.b, iter_ok)) return false;
    return true;
  }
  static bool no_iter(const Node& n) {
    if (n.kind == Conn::Iter) return false;
    if (n.a && !no_iter(*n.a)) return false;
    if (n.b && !no_iter(*n.b)) return false;
    return true;
  }
  static int cmp(const Node& x, const Node& y) {
    if (x.kind != y.kind) return x.kind < y.kind ? -1 : 1;
    switch (x.kind) {
      case Conn::Var:
        return x.var.compare(y.var);
      case Conn::Top:
      case Conn::Bot:
        return 0;
      case Conn::Iter:
        if (x.mod != y.mod) return x.mod < y.mod ? -1 : 1;
        if (x.offset != y.offset) return x.offset < y.offset ? -1 : 1;
        return cmp(*x.a, *y.a);
      case Conn::Dia:
      case Conn::Box:
      case Conn::Not:
        return cmp(*x.a, *y.a);
      case Conn::Or:
      case Conn::And:
      case Conn::Implies: {
        int c = cmp(*x.a, *y.a);
        return c != 0 ? c : cmp(*x.b, *y.b);
      }
    }
    return 0;
  }

  std::shared_ptr<const Node> n_;
};

// An ordered pair of formulas, written "lhs |- rhs". Sides are positive
// (or schematic, inside the kernel); validated where it matters.
struct Sequent {
  Formula lhs, rhs;
  friend bool operator==(const Sequent& a, const Sequent& b) {
    return a.lhs == b.lhs && a.rhs == b.rhs;
  }
  friend bool operator!=(const Sequent& a, const Sequent& b) { return !(a == b); }
};

struct QuasiSequent {
  std::vector<Sequent> hypotheses;
  Sequent conclusion;
};

// --- printing ------------------------------------------------------------

namespace detail {

inline int precedence(Conn k) {
  switch (k) {
    case Conn::Implies: return 1;
    case Conn::Or: return 2;
    case Conn::And: return 3;
    case Conn::Not:
    case Conn::Box:
    case Conn::Dia:
    case Conn::Iter: return 4;
    default: return 5;
  }
}

inline void print_rec(const Formula& f, int min_prec, std::string& out) {
  int p = precedence(f.kind());
  bool parens = p < min_prec;
  if (parens) out += '(';
  switch (f.kind()) {
    case Conn::Var: out += f.var_name(); break;
    case Conn::Top: out += "top"; break;
    case Conn::Bot: out += "bot"; break;
    case Conn::Or:
      print_rec(f.left(), 2, out);
      out += " \\/ ";
      print_rec(f.right(), 3, out);
      break;
    case Conn::And:
      print_rec(f.left(), 3, out);
      out += " /\\ ";
      print_rec(f.right(), 4, out);
      break;
    case Conn::Implies:
      print_rec(f.left(), 2, out);
      out += " -> ";
      print_rec(f.right(), 1, out);
      break;
    case Conn::Not:
      out += '~';
      print_rec(f.child(), 4, out);
      break;
    case Conn::Box:
    case Conn::Dia:
      out += f.kind() == Conn::Box ? "box " : "dia ";
      print_rec(f.child(), 4, out);
      break;
    case Conn::Iter:
      out += f.modality() == Mod::Box ? "box" : "dia";
      out += "^{n";
      if (f.iter_offset() > 0) out += "+" + std::to_string(f.iter_offset());
      out += "} ";
      print_rec(f.child(), 4, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print_rec(f, 0, out);
  return out;
}

inline std::string to_string(const Sequent& s) {
  return to_string(s.lhs) + " |- " + to_string(s.rhs);
}

// --- iterated modalities and schema instantiation ------------------------

// k nested applications of the modality; iterate(m, 0, f) = f.
inline Formula iterate(Mod m, unsigned k, Formula f) {
  for (unsigned i = 0; i < k; ++i) f = Formula::modal(m, f);
  return f;
}

// Normal form for schematic formulas: no modality directly above an Iter
// node of the same modality, and no nested Iter of the same modality.
// Nested same-modality Iter nodes would need exponent 2n+c, which the
// single-parameter exponent language cannot express.
inline Formula normalize(const Formula& f) {
  switch (f.kind()) {
    case Conn::Var:
    case Conn::Top:
    case Conn::Bot:
      return f;
    case Conn::Or:
      return Formula::disj(normalize(f.left()), normalize(f.right()));
    case Conn::And:
      return Formula::conj(normalize(f.left()), normalize(f.right()));
    case Conn::Implies:
      return Formula::implies(normalize(f.left()), normalize(f.right()));
    case Conn::Not:
      return Formula::negation(normalize(f.child()));
    case Conn::Box:
    case Conn::Dia: {
      Formula c = normalize(f.child());
      Mod m = f.kind() == Conn::Box ? Mod::Box : Mod::Dia;
      if (c.kind() == Conn::Iter && c.modality() == m)
        return Formula::iter(m, c.iter_offset() + 1, c.child());
      return Formula::modal(m, c);
    }
    case Conn::Iter: {
      Formula c = normalize(f.child());
      if (c.kind() == Conn::Iter && c.modality() == f.modality())
        throw std::invalid_argument(
            "schematic exponent 2n+c is not representable (nested iterated modalities)");
      return Formula::iter(f.modality(), f.iter_offset(), c);
    }
  }
  return f;
}

inline Sequent normalize(const Sequent& s) { return {normalize(s.lhs), normalize(s.rhs)}; }

// Substitutes k for the parameter n and expands every iterated modality.
// The result is iter-free.
inline Formula instantiate(const Formula& f, unsigned k) {
  switch (f.kind()) {
    case Conn::Var:
    case Conn::Top:
    case Conn::Bot:
      return f;
    case Conn::Or:
      return Formula::disj(instantiate(f.left(), k), instantiate(f.right(), k));
    case Conn::And:
      return Formula::conj(instantiate(f.left(), k), instantiate(f.right(), k));
    case Conn::Implies:
      return Formula::implies(instantiate(f.left(), k), instantiate(f.right(), k));
    case Conn::Not:
      return Formula::negation(instantiate(f.child(), k));
    case Conn::Box:
      return Formula::box(instantiate(f.child(), k));
    case Conn::Dia:
      return Formula::dia(instantiate(f.child(), k));
    case Conn::Iter:
      return iterate(f.modality(), k + f.iter_offset(), instantiate(f.child(), k));
  }
  return f;
}

inline Sequent instantiate(const Sequent& s, unsigned k) {
  return {instantiate(s.lhs, k), instantiate(s.rhs, k)};
}

// --- misc tree utilities --------------------------------------------------

inline void collect_vars(const Formula& f, std::vector<std::string>& out) {
  if (f.kind() == Conn::Var) {
    out.push_back(f.var_name());
    return;
  }
  if (!f.child().empty()) collect_vars(f.child(), out);
  if (f.kind() == Conn::Or || f.kind() == Conn::And || f.kind() == Conn::Implies)
    collect_vars(f.right(), out);
}

inline std::vector<std::string> variables_of(const Formula& f) {
  std::vector<std::string> v;
  collect_vars(f, v);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline std::size_t node_count(const Formula& f) {
  std::size_t n = 1;
  if (!f.child().empty()) n += node_count(f.child());
  if (f.kind() == Conn::Or || f.kind() == Conn::And || f.kind() == Conn::Implies)
    n += node_count(f.right());
  return n;
}

// Preorder subterm access, used by the mutation harness in the tests.
inline Formula subterm_at(const Formula& f, std::size_t idx) {
  if (idx == 0) return f;
  --idx;
  if (!f.child().empty()) {
    std::size_t ln = node_count(f.child());
    if (idx < ln) return subterm_at(f.child(), idx);
    idx -= ln;
  }
  if (f.kind() == Conn::Or || f.kind() == Conn::And || f.kind() == Conn::Implies)
    return subterm_at(f.right(), idx);
  throw std::out_of_range("subterm index");
}

inline Formula replace_at(const Formula& f, std::size_t idx, const Formula& g) {
  if (idx == 0) return g;
  --idx;
  std::size_t ln = f.child().empty() ? 0 : node_count(f.child());
  bool bin = f.kind() == Conn::Or || f.kind() == Conn::And || f.kind() == Conn::Implies;
  Formula l = f.child();
  Formula r = bin ? f.right() : Formula();
  if (idx < ln) {
    l = replace_at(l, idx, g);
  } else if (bin && idx - ln < node_count(r)) {
    r = replace_at(r, idx - ln, g);
  } else {
    throw std::out_of_range("subterm index");
  }
  switch (f.kind()) {
    case Conn::Or: return Formula::disj(l, r);
    case Conn::And: return Formula::conj(l, r);
    case Conn::Implies: return Formula::implies(l, r);
    case Conn::Not: return Formula::negation(l);
    case Conn::Box: return Formula::box(l);
    case Conn::Dia: return Formula::dia(l);
    case Conn::Iter: return Formula::iter(f.modality(), f.iter_offset(), l);
    default: throw std::out_of_range("subterm index");
  }
}

}  // namespace posgl

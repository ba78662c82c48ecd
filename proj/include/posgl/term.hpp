#pragma once

#include <memory>
#include <string>
#include <vector>

#include "posgl/formula.hpp"

// Terms of modal distributive lattices: variables, constants c0/c1, unary
// box/dia, binary join/meet. Sequents of positive formulas translate to
// identities between such terms (rho below), which is how the algebra
// module decides sequent validity by equational means.

namespace posgl {

enum class TermKind : std::uint8_t { Var, C0, C1, Box, Dia, Join, Meet };

class Term {
 public:
  struct Node {
    TermKind kind;
    std::string var;
    std::shared_ptr<const Node> a, b;
  };

  Term() = default;

  static Term var(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::Var;
    n->var = std::move(name);
    return Term(std::move(n));
  }
  static Term c0() { return nullary(TermKind::C0); }
  static Term c1() { return nullary(TermKind::C1); }
  static Term box(Term t) { return unary(TermKind::Box, std::move(t)); }
  static Term dia(Term t) { return unary(TermKind::Dia, std::move(t)); }
  static Term join(Term l, Term r) { return binary(TermKind::Join, std::move(l), std::move(r)); }
  static Term meet(Term l, Term r) { return binary(TermKind::Meet, std::move(l), std::move(r)); }

  bool empty() const { return n_ == nullptr; }
  TermKind kind() const { return n_->kind; }
  const std::string& var_name() const { return n_->var; }
  Term left() const { return Term(n_->a); }
  Term right() const { return Term(n_->b); }
  Term child() const { return Term(n_->a); }

  friend bool operator==(const Term& x, const Term& y) {
    return x.n_ == y.n_ || cmp(*x.n_, *y.n_) == 0;
  }
  friend bool operator!=(const Term& x, const Term& y) { return !(x == y); }

 private:
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static Term nullary(TermKind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return Term(std::move(n));
  }
  static Term unary(TermKind k, Term t) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = t.n_;
    return Term(std::move(n));
  }
  static Term binary(TermKind k, Term l, Term r) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = l.n_;
    n->b = r.n_;
    return Term(std::move(n));
  }
  static int cmp(const Node& x, const Node& y) {
    if (x.kind != y.kind) return x.kind < y.kind ? -1 : 1;
    if (x.kind == TermKind::Var) return x.var.compare(y.var);
    if (x.a) {
      int c = cmp(*x.a, *y.a);
      if (c != 0) return c;
    }
    if (x.b) return cmp(*x.b, *y.b);
    return 0;
  }

  std::shared_ptr<const Node> n_;
};

struct Identity {
  Term lhs, rhs;
};

// An identity is the hypothesis-free case.
struct QuasiIdentity {
  std::vector<Identity> hypotheses;
  Identity conclusion;
};

inline std::string to_string(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var: return t.var_name();
    case TermKind::C0: return "c0";
    case TermKind::C1: return "c1";
    case TermKind::Box: return "box(" + to_string(t.child()) + ")";
    case TermKind::Dia: return "dia(" + to_string(t.child()) + ")";
    case TermKind::Join: return "join(" + to_string(t.left()) + ", " + to_string(t.right()) + ")";
    case TermKind::Meet: return "meet(" + to_string(t.left()) + ", " + to_string(t.right()) + ")";
  }
  return {};
}

inline std::string to_string(const Identity& id) {
  return to_string(id.lhs) + " = " + to_string(id.rhs);
}

inline void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.kind() == TermKind::Var) {
    out.push_back(t.var_name());
    return;
  }
  if (!t.child().empty()) collect_vars(t.child(), out);
  if (t.kind() == TermKind::Join || t.kind() == TermKind::Meet) collect_vars(t.right(), out);
}

// Structural translation of a positive formula into a lattice term.
// Propositional variables map one-to-one onto term variables of the same
// name, so the translation is injective.
inline Term rho_translate(const Formula& f) {
  switch (f.kind()) {
    case Conn::Var: return Term::var(f.var_name());
    case Conn::Top: return Term::c1();
    case Conn::Bot: return Term::c0();
    case Conn::Or: return Term::join(rho_translate(f.left()), rho_translate(f.right()));
    case Conn::And: return Term::meet(rho_translate(f.left()), rho_translate(f.right()));
    case Conn::Box: return Term::box(rho_translate(f.child()));
    case Conn::Dia: return Term::dia(rho_translate(f.child()));
    default:
      throw std::invalid_argument("rho translation is defined on positive formulas only");
  }
}

// phi |- psi  becomes  join(rho(phi), rho(psi)) = rho(psi).
inline Identity sequent_to_identity(const Sequent& s) {
  Term l = rho_translate(s.lhs);
  Term r = rho_translate(s.rhs);
  return {Term::join(l, r), r};
}

inline Formula to_implication(const Sequent& s) {
  if (!s.lhs.is_positive() || !s.rhs.is_positive())
    throw std::invalid_argument("sequent sides must be positive formulas");
  return Formula::implies(s.lhs, s.rhs);
}

}  // namespace posgl

#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "posgl/formula.hpp"

// Derivation checker for the positive GL sequent system: the finitary
// axioms and rules (reflexivity through axiom 4), plus the two infinitary
// closure rules
//
//   gld_box:  psi /\ box^{n} bot |- phi   (all n)   =>   psi |- phi
//   gld_dia:  phi |- psi \/ dia^{n} top   (all n)   =>   phi |- psi
//
// An omega node carries explicit base derivations for n = 0..b together
// with an inductive step template: a schematic derivation of the n+1
// premise from a hypothesis leaf standing for the n premise. Checking the
// bases and the template certifies every instance by instantiation, so a
// Valid report covers the full infinitary rule. Bounded mode is an audit
// fallback that only inspects explicit bases and never reports Valid.
//
// Matching is purely syntactic against the fixed parse trees of the rule
// schemas. Iterated modalities are opaque: a schema may bind dia^{n+1} top
// to a metavariable whole, but no rule may peel a modality out of it.

namespace posgl {
namespace kernel {

enum class RuleId : std::uint8_t {
  Reflexivity,
  Transitivity,
  DisjIntroL,
  DisjIntroR,
  DisjElim,
  ConjElimL,
  ConjElimR,
  ConjIntro,
  Distribution,
  BeckerDia,
  BeckerBox,
  LinearityDia,
  LinearityBox,
  InteractDia,
  InteractBox,
  Bottom,
  Top,
  Possibilization,
  Necessitation,
  Axiom4Dia,
  Axiom4Box,
  GldBox,
  GldDia,
  Hyp,
};

inline const char* rule_name(RuleId r) {
  switch (r) {
    case RuleId::Reflexivity: return "reflexivity";
    case RuleId::Transitivity: return "transitivity";
    case RuleId::DisjIntroL: return "disj_intro_l";
    case RuleId::DisjIntroR: return "disj_intro_r";
    case RuleId::DisjElim: return "disj_elim";
    case RuleId::ConjElimL: return "conj_elim_l";
    case RuleId::ConjElimR: return "conj_elim_r";
    case RuleId::ConjIntro: return "conj_intro";
    case RuleId::Distribution: return "distribution";
    case RuleId::BeckerDia: return "becker_dia";
    case RuleId::BeckerBox: return "becker_box";
    case RuleId::LinearityDia: return "linearity_dia";
    case RuleId::LinearityBox: return "linearity_box";
    case RuleId::InteractDia: return "interact_dia";
    case RuleId::InteractBox: return "interact_box";
    case RuleId::Bottom: return "bottom";
    case RuleId::Top: return "top";
    case RuleId::Possibilization: return "possibilization";
    case RuleId::Necessitation: return "necessitation";
    case RuleId::Axiom4Dia: return "axiom4_dia";
    case RuleId::Axiom4Box: return "axiom4_box";
    case RuleId::GldBox: return "gld_box";
    case RuleId::GldDia: return "gld_dia";
    case RuleId::Hyp: return "hyp";
  }
  return "?";
}

inline std::optional<RuleId> rule_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(RuleId::Hyp); ++i) {
    RuleId r = static_cast<RuleId>(i);
    if (s == rule_name(r)) return r;
  }
  return std::nullopt;
}

// --- derivations ----------------------------------------------------------

class Derivation;

struct OmegaStep {
  Sequent hypothesis;  // the premise at symbolic n
  std::shared_ptr<const Derivation> body;
  Sequent conclusion;  // the premise at n+1
};

class Derivation {
 public:
  Derivation() = default;

  static Derivation axiom(RuleId r, Sequent concl) {
    Derivation d;
    d.rule_ = r;
    d.conclusion_ = std::move(concl);
    return d;
  }
  static Derivation node(RuleId r, Sequent concl, std::vector<Derivation> premises) {
    Derivation d;
    d.rule_ = r;
    d.conclusion_ = std::move(concl);
    d.premises_ = std::move(premises);
    return d;
  }
  static Derivation omega(RuleId r, Sequent concl, std::vector<Derivation> bases,
                          std::optional<OmegaStep> step) {
    Derivation d;
    d.rule_ = r;
    d.conclusion_ = std::move(concl);
    d.bases_ = std::move(bases);
    d.step_ = std::move(step);
    return d;
  }
  static Derivation hyp(Sequent s) {
    Derivation d;
    d.rule_ = RuleId::Hyp;
    d.conclusion_ = std::move(s);
    return d;
  }

  RuleId rule() const { return rule_; }
  const Sequent& conclusion() const { return conclusion_; }
  const std::vector<Derivation>& premises() const { return premises_; }
  const std::vector<Derivation>& bases() const { return bases_; }
  const std::optional<OmegaStep>& step() const { return step_; }
  bool is_omega() const { return rule_ == RuleId::GldBox || rule_ == RuleId::GldDia; }

 private:
  RuleId rule_ = RuleId::Reflexivity;
  Sequent conclusion_;
  std::vector<Derivation> premises_;
  std::vector<Derivation> bases_;
  std::optional<OmegaStep> step_;
};

inline OmegaStep make_step(Sequent hypothesis, Derivation body, Sequent conclusion) {
  return OmegaStep{std::move(hypothesis),
                   std::make_shared<const Derivation>(std::move(body)),
                   std::move(conclusion)};
}

// --- rule schemas and matching ---------------------------------------------

namespace pat {

struct Pat;
using PatPtr = std::shared_ptr<const Pat>;

struct Pat {
  enum class K { Meta, Top, Bot, Or, And, Box, Dia } k;
  int meta = 0;
  PatPtr a, b;
};

inline PatPtr mk(Pat::K k, PatPtr a = nullptr, PatPtr b = nullptr) {
  auto p = std::make_shared<Pat>();
  p->k = k;
  p->a = std::move(a);
  p->b = std::move(b);
  return p;
}
inline PatPtr meta(int i) {
  auto p = std::make_shared<Pat>();
  p->k = Pat::K::Meta;
  p->meta = i;
  return p;
}
inline PatPtr ptop() { return mk(Pat::K::Top); }
inline PatPtr pbot() { return mk(Pat::K::Bot); }
inline PatPtr por(PatPtr a, PatPtr b) { return mk(Pat::K::Or, std::move(a), std::move(b)); }
inline PatPtr pand(PatPtr a, PatPtr b) { return mk(Pat::K::And, std::move(a), std::move(b)); }
inline PatPtr pbox(PatPtr a) { return mk(Pat::K::Box, std::move(a)); }
inline PatPtr pdia(PatPtr a) { return mk(Pat::K::Dia, std::move(a)); }

struct SeqPat {
  PatPtr lhs, rhs;
};

struct RuleSchema {
  std::vector<SeqPat> premises;
  SeqPat conclusion;
};

inline const std::map<RuleId, RuleSchema>& schemas() {
  static const std::map<RuleId, RuleSchema> table = [] {
    std::map<RuleId, RuleSchema> t;
    PatPtr A = meta(0), B = meta(1), C = meta(2);
    t[RuleId::Reflexivity] = {{}, {A, A}};
    t[RuleId::Transitivity] = {{{A, B}, {B, C}}, {A, C}};
    t[RuleId::DisjIntroL] = {{}, {A, por(A, B)}};
    t[RuleId::DisjIntroR] = {{}, {B, por(A, B)}};
    t[RuleId::DisjElim] = {{{A, C}, {B, C}}, {por(A, B), C}};
    t[RuleId::ConjElimL] = {{}, {pand(A, B), A}};
    t[RuleId::ConjElimR] = {{}, {pand(A, B), B}};
    t[RuleId::ConjIntro] = {{{C, A}, {C, B}}, {C, pand(A, B)}};
    t[RuleId::Distribution] = {{}, {pand(A, por(B, C)), por(pand(A, B), pand(A, C))}};
    t[RuleId::BeckerDia] = {{{A, B}}, {pdia(A), pdia(B)}};
    t[RuleId::BeckerBox] = {{{A, B}}, {pbox(A), pbox(B)}};
    t[RuleId::LinearityDia] = {{}, {pdia(por(A, B)), por(pdia(A), pdia(B))}};
    t[RuleId::LinearityBox] = {{}, {pand(pbox(A), pbox(B)), pbox(pand(A, B))}};
    t[RuleId::InteractDia] = {{}, {pand(pdia(A), pbox(B)), pdia(pand(A, B))}};
    t[RuleId::InteractBox] = {{}, {pbox(por(A, B)), por(pbox(A), pdia(B))}};
    t[RuleId::Bottom] = {{}, {pbot(), A}};
    t[RuleId::Top] = {{}, {A, ptop()}};
    t[RuleId::Possibilization] = {{}, {pdia(pbot()), pbot()}};
    t[RuleId::Necessitation] = {{}, {ptop(), pbox(ptop())}};
    t[RuleId::Axiom4Dia] = {{}, {pdia(pdia(A)), pdia(A)}};
    t[RuleId::Axiom4Box] = {{}, {pbox(A), pbox(pbox(A))}};
    return t;
  }();
  return table;
}

}  // namespace pat

// Assignment of formulas to the metavariables phi, psi, chi of a schema.
struct Unifier {
  std::array<std::optional<Formula>, 3> binding;
  bool ok = false;
  std::string error;  // first differing position when !ok
};

namespace detail {

inline bool fully_bound(const pat::Pat& p, const Unifier& u) {
  if (p.k == pat::Pat::K::Meta) return u.binding[p.meta].has_value();
  if (p.a && !fully_bound(*p.a, u)) return false;
  if (p.b && !fully_bound(*p.b, u)) return false;
  return true;
}

inline Formula instantiate_pat(const pat::Pat& p, const Unifier& u) {
  switch (p.k) {
    case pat::Pat::K::Meta: return *u.binding[p.meta];
    case pat::Pat::K::Top: return Formula::top();
    case pat::Pat::K::Bot: return Formula::bot();
    case pat::Pat::K::Or: return Formula::disj(instantiate_pat(*p.a, u), instantiate_pat(*p.b, u));
    case pat::Pat::K::And: return Formula::conj(instantiate_pat(*p.a, u), instantiate_pat(*p.b, u));
    case pat::Pat::K::Box: return Formula::box(instantiate_pat(*p.a, u));
    case pat::Pat::K::Dia: return Formula::dia(instantiate_pat(*p.a, u));
  }
  return Formula::top();
}

// `f` is normalized. Returns false and sets u.error on mismatch.
inline bool match_pat(const pat::Pat& p, const Formula& f, Unifier& u, const std::string& at) {
  using K = pat::Pat::K;
  if (p.k == K::Meta) {
    auto& slot = u.binding[p.meta];
    if (!slot) {
      slot = f;
      return true;
    }
    if (*slot == f) return true;
    u.error = at + ": metavariable bound to a different formula";
    return false;
  }
  // A subtree whose metavariables are all bound is compared by instantiating
  // it and normalizing, which lets e.g. dia(psi) match dia^{n+1} top when
  // psi = dia^{n} top.
  if (f.kind() == Conn::Iter) {
    if ((p.k == K::Box && f.modality() == Mod::Box) ||
        (p.k == K::Dia && f.modality() == Mod::Dia)) {
      if (fully_bound(p, u)) {
        if (normalize(instantiate_pat(p, u)) == f) return true;
        u.error = at + ": schema instance differs from iterated modality";
        return false;
      }
      u.error = at + ": rule match would inspect inside an iterated modality";
      return false;
    }
    u.error = at + ": expected connective, found iterated modality";
    return false;
  }
  switch (p.k) {
    case K::Top:
      if (f.kind() == Conn::Top) return true;
      break;
    case K::Bot:
      if (f.kind() == Conn::Bot) return true;
      break;
    case K::Or:
      if (f.kind() == Conn::Or)
        return match_pat(*p.a, f.left(), u, at + ".left") &&
               match_pat(*p.b, f.right(), u, at + ".right");
      break;
    case K::And:
      if (f.kind() == Conn::And)
        return match_pat(*p.a, f.left(), u, at + ".left") &&
               match_pat(*p.b, f.right(), u, at + ".right");
      break;
    case K::Box:
      if (f.kind() == Conn::Box) return match_pat(*p.a, f.child(), u, at + ".arg");
      break;
    case K::Dia:
      if (f.kind() == Conn::Dia) return match_pat(*p.a, f.child(), u, at + ".arg");
      break;
    default:
      break;
  }
  u.error = at + ": schema expects a different connective";
  return false;
}

}  // namespace detail

// Premise schema of an omega rule, as a schematic sequent in the parameter n.
// offset = 0 gives the premise at n, offset = 1 the premise at n+1.
inline Sequent omega_premise_schema(RuleId rule, const Sequent& conclusion,
                                    std::uint32_t offset = 0) {
  if (rule == RuleId::GldBox)
    return {Formula::conj(conclusion.lhs, Formula::iter(Mod::Box, offset, Formula::bot())),
            conclusion.rhs};
  if (rule == RuleId::GldDia)
    return {conclusion.lhs,
            Formula::disj(conclusion.rhs, Formula::iter(Mod::Dia, offset, Formula::top()))};
  throw std::invalid_argument("omega_premise_schema: not an omega rule");
}

// Matches a rule application against its schema. For the omega rules the
// premises, when given, must be the instances for n = 0..len-1.
inline Unifier match_rule(RuleId rule, const Sequent& conclusion,
                          const std::vector<Sequent>& premises) {
  Unifier u;
  if (rule == RuleId::Hyp) {
    u.error = "hyp is not a rule schema";
    return u;
  }
  Sequent concl = normalize(conclusion);
  if (rule == RuleId::GldBox || rule == RuleId::GldDia) {
    u.binding[0] = concl.lhs;
    u.binding[1] = concl.rhs;
    Sequent schema = omega_premise_schema(rule, concl);
    for (std::size_t k = 0; k < premises.size(); ++k) {
      if (normalize(premises[k]) != instantiate(schema, static_cast<unsigned>(k))) {
        u.error = "premise[" + std::to_string(k) + "]: expected instance '" +
                  to_string(instantiate(schema, static_cast<unsigned>(k))) + "'";
        return u;
      }
    }
    u.ok = true;
    return u;
  }
  const auto& schema = pat::schemas().at(rule);
  if (premises.size() != schema.premises.size()) {
    u.error = "arity mismatch: rule expects " + std::to_string(schema.premises.size()) +
              " premises, got " + std::to_string(premises.size());
    return u;
  }
  if (!detail::match_pat(*schema.conclusion.lhs, concl.lhs, u, "conclusion.lhs")) return u;
  if (!detail::match_pat(*schema.conclusion.rhs, concl.rhs, u, "conclusion.rhs")) return u;
  for (std::size_t i = 0; i < premises.size(); ++i) {
    Sequent prem = normalize(premises[i]);
    std::string at = "premise[" + std::to_string(i) + "]";
    if (!detail::match_pat(*schema.premises[i].lhs, prem.lhs, u, at + ".lhs")) return u;
    if (!detail::match_pat(*schema.premises[i].rhs, prem.rhs, u, at + ".rhs")) return u;
  }
  u.ok = true;
  return u;
}

// --- checking ---------------------------------------------------------------

struct CheckMode {
  bool bounded = false;
  unsigned n = 0;
};
inline CheckMode schematic_mode() { return {false, 0}; }
inline CheckMode bounded_mode(unsigned n) { return {true, n}; }

struct CheckReport {
  enum class Status { Valid, Bounded, Rejected } status = Status::Valid;
  unsigned bound = 0;        // Bounded
  std::string path;          // Rejected: first failing node
  std::string reason;        // Rejected
  bool ok() const { return status != Status::Rejected; }
};

namespace detail {

struct Reject {
  std::string path, reason;
};

struct CheckCtx {
  CheckMode mode;
  const Sequent* hypothesis = nullptr;  // set inside a step body
  bool used_bounded = false;
};

inline void check_rec(const Derivation& d, CheckCtx& ctx, const std::string& path);

inline void check_omega(const Derivation& d, CheckCtx& ctx, const std::string& path) {
  if (ctx.hypothesis)
    throw Reject{path, "omega node inside an inductive step is not representable"};
  Sequent concl = normalize(d.conclusion());
  Sequent schema = omega_premise_schema(d.rule(), concl);
  if (d.bases().empty()) throw Reject{path, "omega node needs at least one base premise"};
  for (std::size_t k = 0; k < d.bases().size(); ++k) {
    std::string bpath = path + "/base[" + std::to_string(k) + "]";
    Sequent expected = instantiate(schema, static_cast<unsigned>(k));
    if (normalize(d.bases()[k].conclusion()) != expected)
      throw Reject{bpath, "base must conclude '" + to_string(expected) + "'"};
    check_rec(d.bases()[k], ctx, bpath);
  }
  if (!ctx.mode.bounded) {
    if (!d.step())
      throw Reject{path, "omega node lacks an inductive step (schematic mode)"};
    const OmegaStep& st = *d.step();
    std::string spath = path + "/step";
    if (normalize(st.hypothesis) != schema)
      throw Reject{spath, "hypothesis mismatch: expected '" + to_string(schema) + "'"};
    Sequent expect1 = omega_premise_schema(d.rule(), concl, 1);
    if (normalize(st.conclusion) != expect1)
      throw Reject{spath, "conclusion-exponent mismatch: step must conclude '" +
                              to_string(expect1) + "'"};
    if (normalize(st.body->conclusion()) != expect1)
      throw Reject{spath + "/body", "body conclusion differs from step conclusion"};
    CheckCtx inner = ctx;
    inner.hypothesis = &st.hypothesis;
    check_rec(*st.body, inner, spath + "/body");
    ctx.used_bounded = ctx.used_bounded || inner.used_bounded;
  } else {
    if (d.bases().size() < static_cast<std::size_t>(ctx.mode.n) + 1)
      throw Reject{path, "bounded mode needs explicit premises for n = 0.." +
                             std::to_string(ctx.mode.n) + ", found " +
                             std::to_string(d.bases().size())};
    ctx.used_bounded = true;
  }
}

inline void check_rec(const Derivation& d, CheckCtx& ctx, const std::string& path) {
  if (d.rule() == RuleId::Hyp) {
    if (!ctx.hypothesis)
      throw Reject{path, "hypothesis leaf outside an inductive step"};
    if (normalize(d.conclusion()) != normalize(*ctx.hypothesis))
      throw Reject{path, "hypothesis leaf differs from the step hypothesis"};
    return;
  }
  if (d.is_omega()) {
    check_omega(d, ctx, path);
    return;
  }
  std::vector<Sequent> prem;
  prem.reserve(d.premises().size());
  for (const auto& p : d.premises()) prem.push_back(p.conclusion());
  Unifier u = match_rule(d.rule(), d.conclusion(), prem);
  if (!u.ok) throw Reject{path, std::string(rule_name(d.rule())) + ": " + u.error};
  for (std::size_t i = 0; i < d.premises().size(); ++i)
    check_rec(d.premises()[i], ctx, path + "/premise[" + std::to_string(i) + "]");
}

}  // namespace detail

inline CheckReport check(const Derivation& d, CheckMode mode = schematic_mode()) {
  detail::CheckCtx ctx;
  ctx.mode = mode;
  CheckReport r;
  try {
    detail::check_rec(d, ctx, "root");
  } catch (const detail::Reject& rej) {
    r.status = CheckReport::Status::Rejected;
    r.path = rej.path;
    r.reason = rej.reason;
    return r;
  }
  if (ctx.used_bounded) {
    r.status = CheckReport::Status::Bounded;
    r.bound = mode.n;
  }
  return r;
}

// Standalone check of an inductive step template; infers the premise schema
// from the shape of the hypothesis.
inline CheckReport check_step(const OmegaStep& st, RuleId rule) {
  CheckReport r;
  auto rejected = [&](const std::string& path, const std::string& reason) {
    r.status = CheckReport::Status::Rejected;
    r.path = path;
    r.reason = reason;
    return r;
  };
  if (rule != RuleId::GldBox && rule != RuleId::GldDia)
    return rejected("step", "check_step expects an omega rule");
  Sequent hyp = normalize(st.hypothesis);
  Sequent concl;  // of the omega node this step would serve
  if (rule == RuleId::GldBox) {
    if (hyp.lhs.kind() != Conn::And || hyp.lhs.right().kind() != Conn::Iter ||
        hyp.lhs.right().modality() != Mod::Box || hyp.lhs.right().iter_offset() != 0 ||
        hyp.lhs.right().child().kind() != Conn::Bot)
      return rejected("step", "hypothesis mismatch: expected 'psi /\\ box^{n} bot |- phi'");
    concl = {hyp.lhs.left(), hyp.rhs};
  } else {
    if (hyp.rhs.kind() != Conn::Or || hyp.rhs.right().kind() != Conn::Iter ||
        hyp.rhs.right().modality() != Mod::Dia || hyp.rhs.right().iter_offset() != 0 ||
        hyp.rhs.right().child().kind() != Conn::Top)
      return rejected("step", "hypothesis mismatch: expected 'phi |- psi \\/ dia^{n} top'");
    concl = {hyp.lhs, hyp.rhs.left()};
  }
  try {
    Sequent expect1 = omega_premise_schema(rule, concl, 1);
    if (normalize(st.conclusion) != expect1)
      return rejected("step", "conclusion-exponent mismatch: step must conclude '" +
                                  to_string(expect1) + "'");
    if (normalize(st.body->conclusion()) != expect1)
      return rejected("step/body", "body conclusion differs from step conclusion");
    detail::CheckCtx inner;
    inner.mode = schematic_mode();
    inner.hypothesis = &st.hypothesis;
    detail::check_rec(*st.body, inner, "step/body");
  } catch (const detail::Reject& rej) {
    return rejected(rej.path, rej.reason);
  }
  return r;
}

// --- unrolling ---------------------------------------------------------------

namespace detail {

inline Derivation substitute_hyp(const Derivation& d, unsigned k, const Derivation& hyp_repl) {
  if (d.rule() == RuleId::Hyp) return hyp_repl;
  if (d.is_omega())
    throw std::invalid_argument("cannot unroll an omega node nested in a step body");
  Sequent concl = instantiate(normalize(d.conclusion()), k);
  std::vector<Derivation> prem;
  prem.reserve(d.premises().size());
  for (const auto& p : d.premises()) prem.push_back(substitute_hyp(p, k, hyp_repl));
  if (prem.empty()) return Derivation::axiom(d.rule(), concl);
  return Derivation::node(d.rule(), concl, std::move(prem));
}

}  // namespace detail

// Ground derivation of the k-th premise of an omega node, built from the
// bases and the step template.
inline Derivation unroll_premise(const Derivation& omega, unsigned k) {
  if (!omega.is_omega()) throw std::invalid_argument("unroll_premise: not an omega node");
  if (k < omega.bases().size()) return omega.bases()[k];
  if (!omega.step()) throw std::invalid_argument("unroll_premise: omega node has no step");
  unsigned b = static_cast<unsigned>(omega.bases().size()) - 1;
  Derivation cur = omega.bases()[b];
  for (unsigned i = b; i < k; ++i)
    cur = detail::substitute_hyp(*omega.step()->body, i, cur);
  return cur;
}

// Replaces every inductive step by explicit bases for n = 0..bound; the
// result carries no step templates and checks in bounded mode.
inline Derivation to_bounded(const Derivation& d, unsigned bound) {
  if (d.rule() == RuleId::Hyp) return d;
  if (d.is_omega()) {
    std::vector<Derivation> bases;
    for (unsigned k = 0; k <= bound; ++k)
      bases.push_back(to_bounded(unroll_premise(d, k), bound));
    return Derivation::omega(d.rule(), d.conclusion(), std::move(bases), std::nullopt);
  }
  if (d.premises().empty()) return d;
  std::vector<Derivation> prem;
  prem.reserve(d.premises().size());
  for (const auto& p : d.premises()) prem.push_back(to_bounded(p, bound));
  return Derivation::node(d.rule(), d.conclusion(), std::move(prem));
}

}  // namespace kernel
}  // namespace posgl

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "posgl/formula.hpp"
#include "posgl/term.hpp"

// Finite modal distributive lattices and finite Boolean modal algebras as
// explicit operation tables, together with:
//   * class checkers (modal DL, GLD-lattice, GL-algebra, GLD-algebra),
//   * valuation semantics for positive formulas and lattice terms,
//   * satisfaction of sequents, identities, quasi-identities, quasi-sequents,
//   * exhaustive enumeration of small instances.
//
// The infinitary GLD conditions are decided by chain stabilization: the
// chains box^n 0 (increasing) and dia^n 1 (decreasing) stabilize within
// |A| steps in a finite lattice, and taking x = 1 resp. x = 0 shows the
// conditions are equivalent to box^N 0 = 1 and dia^N 1 = 0 for some N.

namespace posgl {
namespace algebra {

inline constexpr std::uint64_t kValuationCap = 1000000;

struct LatticeCore {
  int size = 0;
  int bot = 0, top = 0;
  std::vector<std::uint16_t> join, meet;  // size*size, row-major

  int j(int x, int y) const { return join[static_cast<std::size_t>(x) * size + y]; }
  int m(int x, int y) const { return meet[static_cast<std::size_t>(x) * size + y]; }
  bool leq(int x, int y) const { return j(x, y) == y; }
};

struct FiniteModalDL {
  LatticeCore lat;
  std::vector<std::uint16_t> box, dia;
};

// Boolean modal algebra; box is primitive, dia is the stored -box- table.
struct FiniteModalAlgebra {
  LatticeCore lat;
  std::vector<std::uint16_t> neg;
  std::vector<std::uint16_t> box, dia;

  int imp(int x, int y) const { return lat.j(neg[x], y); }  // x -> y  =  -x join y
};

struct ClassReport {
  bool pass = true;
  std::vector<std::string> violations;
  std::optional<int> stabilization;  // least N with box^N 0 = 1 (and dia^N 1 = 0)

  void fail(std::string v) {
    pass = false;
    violations.push_back(std::move(v));
  }
};

// --- structural validation ---------------------------------------------------

inline ClassReport validate_lattice(const LatticeCore& a) {
  ClassReport r;
  const int k = a.size;
  if (k <= 0) {
    r.fail("empty carrier");
    return r;
  }
  if (a.join.size() != static_cast<std::size_t>(k) * k ||
      a.meet.size() != static_cast<std::size_t>(k) * k) {
    r.fail("operation table size mismatch");
    return r;
  }
  for (auto v : a.join)
    if (v >= k) {
      r.fail("join table entry out of range");
      return r;
    }
  for (auto v : a.meet)
    if (v >= k) {
      r.fail("meet table entry out of range");
      return r;
    }
  auto name = [](int x) { return std::to_string(x); };
  for (int x = 0; x < k; ++x) {
    if (a.j(x, x) != x) r.fail("join not idempotent at " + name(x));
    if (a.m(x, x) != x) r.fail("meet not idempotent at " + name(x));
    if (a.j(a.bot, x) != x) r.fail("bot not least at " + name(x));
    if (a.m(a.top, x) != x) r.fail("top not greatest at " + name(x));
  }
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      if (a.j(x, y) != a.j(y, x)) r.fail("join not commutative at " + name(x) + "," + name(y));
      if (a.m(x, y) != a.m(y, x)) r.fail("meet not commutative at " + name(x) + "," + name(y));
      if (a.j(x, a.m(x, y)) != x) r.fail("absorption fails at " + name(x) + "," + name(y));
      if (a.m(x, a.j(x, y)) != x) r.fail("absorption fails at " + name(x) + "," + name(y));
    }
  for (int x = 0; x < k && r.pass; ++x)
    for (int y = 0; y < k && r.pass; ++y)
      for (int z = 0; z < k; ++z) {
        if (a.j(a.j(x, y), z) != a.j(x, a.j(y, z))) {
          r.fail("join not associative");
          break;
        }
        if (a.m(a.m(x, y), z) != a.m(x, a.m(y, z))) {
          r.fail("meet not associative");
          break;
        }
        if (a.m(x, a.j(y, z)) != a.j(a.m(x, y), a.m(x, z))) {
          r.fail("not distributive at " + name(x) + "," + name(y) + "," + name(z));
          break;
        }
      }
  return r;
}

inline ClassReport validate_boolean(const FiniteModalAlgebra& a) {
  ClassReport r = validate_lattice(a.lat);
  if (!r.pass) return r;
  const int k = a.lat.size;
  if (a.neg.size() != static_cast<std::size_t>(k)) {
    r.fail("neg table size mismatch");
    return r;
  }
  for (int x = 0; x < k; ++x) {
    if (a.neg[x] >= k) {
      r.fail("neg table entry out of range");
      return r;
    }
    if (a.lat.m(x, a.neg[x]) != a.lat.bot)
      r.fail("x meet -x != 0 at " + std::to_string(x));
    if (a.lat.j(x, a.neg[x]) != a.lat.top)
      r.fail("x join -x != 1 at " + std::to_string(x));
  }
  if (a.box.size() != static_cast<std::size_t>(k)) r.fail("box table size mismatch");
  for (auto v : a.box)
    if (v >= k) r.fail("box table entry out of range");
  if (r.pass)
    for (int x = 0; x < k; ++x)
      if (a.dia[x] != a.neg[a.box[a.neg[x]]])
        r.fail("dia table is not -box- at " + std::to_string(x));
  return r;
}

// --- chain stabilization -----------------------------------------------------

inline std::optional<int> box_chain_reaches_top(const LatticeCore& lat,
                                                const std::vector<std::uint16_t>& box) {
  int x = lat.bot;
  for (int n = 0; n <= lat.size; ++n) {
    if (x == lat.top) return n;
    x = box[x];
  }
  return std::nullopt;
}

inline std::optional<int> dia_chain_reaches_bot(const LatticeCore& lat,
                                                const std::vector<std::uint16_t>& dia) {
  int x = lat.top;
  for (int n = 0; n <= lat.size; ++n) {
    if (x == lat.bot) return n;
    x = dia[x];
  }
  return std::nullopt;
}

// --- class checkers ----------------------------------------------------------

inline ClassReport check_modal_dl(const FiniteModalDL& a) {
  ClassReport r;
  const int k = a.lat.size;
  auto name = [](int x) { return std::to_string(x); };
  if (a.box.size() != static_cast<std::size_t>(k) || a.dia.size() != static_cast<std::size_t>(k)) {
    r.fail("modal table size mismatch");
    return r;
  }
  if (a.box[a.lat.top] != a.lat.top) r.fail("box 1 != 1");
  if (a.dia[a.lat.bot] != a.lat.bot) r.fail("dia 0 != 0");
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      if (!a.lat.leq(a.box[a.lat.j(x, y)], a.lat.j(a.box[x], a.dia[y])))
        r.fail("box(x|y) <= box x | dia y fails at x=" + name(x) + ", y=" + name(y));
      if (!a.lat.leq(a.lat.m(a.box[x], a.dia[y]), a.dia[a.lat.m(x, y)]))
        r.fail("box x & dia y <= dia(x&y) fails at x=" + name(x) + ", y=" + name(y));
    }
  return r;
}

inline ClassReport check_gld_lattice(const FiniteModalDL& a) {
  ClassReport r;
  const int k = a.lat.size;
  auto name = [](int x) { return std::to_string(x); };
  if (a.box[a.lat.top] != a.lat.top) r.fail("box 1 != 1");
  if (a.dia[a.lat.bot] != a.lat.bot) r.fail("dia 0 != 0");
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      if (a.dia[a.lat.j(x, y)] != a.lat.j(a.dia[x], a.dia[y]))
        r.fail("dia(x|y) = dia x | dia y fails at x=" + name(x) + ", y=" + name(y));
      if (a.box[a.lat.m(x, y)] != a.lat.m(a.box[x], a.box[y]))
        r.fail("box(x&y) = box x & box y fails at x=" + name(x) + ", y=" + name(y));
    }
  for (int x = 0; x < k; ++x) {
    if (!a.lat.leq(a.dia[a.dia[x]], a.dia[x]))
      r.fail("dia dia x <= dia x fails at x=" + name(x));
    if (!a.lat.leq(a.box[x], a.box[a.box[x]]))
      r.fail("box x <= box box x fails at x=" + name(x));
  }
  auto nb = box_chain_reaches_top(a.lat, a.box);
  auto nd = dia_chain_reaches_bot(a.lat, a.dia);
  if (!nb) r.fail("box^n 0 never reaches 1");
  if (!nd) r.fail("dia^n 1 never reaches 0");
  if (nb && nd) r.stabilization = std::max(*nb, *nd);
  return r;
}

inline ClassReport check_gl_algebra(const FiniteModalAlgebra& a) {
  ClassReport r;
  const int k = a.lat.size;
  auto name = [](int x) { return std::to_string(x); };
  if (a.box[a.lat.top] != a.lat.top) r.fail("box 1 != 1");
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      if (a.box[a.lat.m(x, y)] != a.lat.m(a.box[x], a.box[y]))
        r.fail("box(x&y) = box x & box y fails at x=" + name(x) + ", y=" + name(y));
  for (int x = 0; x < k; ++x) {
    int loeb = a.box[a.imp(a.box[x], x)];
    if (!a.lat.leq(loeb, a.box[x]))
      r.fail("box(box x -> x) <= box x fails at x=" + name(x));
  }
  return r;
}

inline ClassReport check_gld_algebra(const FiniteModalAlgebra& a) {
  ClassReport r;
  const int k = a.lat.size;
  auto name = [](int x) { return std::to_string(x); };
  if (a.box[a.lat.top] != a.lat.top) r.fail("box 1 != 1");
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      if (a.box[a.lat.m(x, y)] != a.lat.m(a.box[x], a.box[y]))
        r.fail("box(x&y) = box x & box y fails at x=" + name(x) + ", y=" + name(y));
  for (int x = 0; x < k; ++x)
    if (!a.lat.leq(a.box[x], a.box[a.box[x]]))
      r.fail("box x <= box box x fails at x=" + name(x));
  auto nb = box_chain_reaches_top(a.lat, a.box);
  if (!nb)
    r.fail("box^n 0 never reaches 1");
  else
    r.stabilization = *nb;
  return r;
}

// Drops the complement; dia is recomputed as -box-.
inline FiniteModalDL reduct(const FiniteModalAlgebra& a) {
  FiniteModalDL d;
  d.lat = a.lat;
  d.box = a.box;
  d.dia.resize(a.lat.size);
  for (int x = 0; x < a.lat.size; ++x) d.dia[x] = a.neg[a.box[a.neg[x]]];
  return d;
}

// --- valuation semantics -------------------------------------------------------

using Valuation = std::map<std::string, int>;

inline int lookup(const std::vector<std::string>& vars, const std::vector<int>& vals,
                  const std::string& name) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return vals[i];
  throw std::invalid_argument("unbound variable '" + name + "'");
}

inline int eval_positive_at(const FiniteModalDL& a, const std::vector<std::string>& vars,
                            const std::vector<int>& vals, const Formula& f) {
  switch (f.kind()) {
    case Conn::Var: return lookup(vars, vals, f.var_name());
    case Conn::Top: return a.lat.top;
    case Conn::Bot: return a.lat.bot;
    case Conn::Or:
      return a.lat.j(eval_positive_at(a, vars, vals, f.left()),
                     eval_positive_at(a, vars, vals, f.right()));
    case Conn::And:
      return a.lat.m(eval_positive_at(a, vars, vals, f.left()),
                     eval_positive_at(a, vars, vals, f.right()));
    case Conn::Box: return a.box[eval_positive_at(a, vars, vals, f.child())];
    case Conn::Dia: return a.dia[eval_positive_at(a, vars, vals, f.child())];
    default:
      throw std::invalid_argument("eval_positive: not a positive formula");
  }
}

inline int eval_term_at(const FiniteModalDL& a, const std::vector<std::string>& vars,
                        const std::vector<int>& vals, const Term& t) {
  switch (t.kind()) {
    case TermKind::Var: return lookup(vars, vals, t.var_name());
    case TermKind::C0: return a.lat.bot;
    case TermKind::C1: return a.lat.top;
    case TermKind::Box: return a.box[eval_term_at(a, vars, vals, t.child())];
    case TermKind::Dia: return a.dia[eval_term_at(a, vars, vals, t.child())];
    case TermKind::Join:
      return a.lat.j(eval_term_at(a, vars, vals, t.left()),
                     eval_term_at(a, vars, vals, t.right()));
    case TermKind::Meet:
      return a.lat.m(eval_term_at(a, vars, vals, t.left()),
                     eval_term_at(a, vars, vals, t.right()));
  }
  throw std::invalid_argument("eval_term: bad term");
}

inline int eval_positive(const FiniteModalDL& a, const Valuation& v, const Formula& f) {
  std::vector<std::string> vars;
  std::vector<int> vals;
  for (auto& [k, x] : v) {
    vars.push_back(k);
    vals.push_back(x);
  }
  return eval_positive_at(a, vars, vals, f);
}

inline int eval_term(const FiniteModalDL& a, const Valuation& v, const Term& t) {
  std::vector<std::string> vars;
  std::vector<int> vals;
  for (auto& [k, x] : v) {
    vars.push_back(k);
    vals.push_back(x);
  }
  return eval_term_at(a, vars, vals, t);
}

// Runs fn for every assignment of carrier elements to vars; fn returns
// false to stop early (a witness was found). Returns true if fn never
// stopped the sweep.
template <typename Fn>
inline bool for_each_valuation(const FiniteModalDL& a, const std::vector<std::string>& vars,
                               Fn&& fn) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    count *= static_cast<std::uint64_t>(a.lat.size);
    if (count > kValuationCap)
      throw ResourceCapExceeded("valuation sweep would exceed " +
                                std::to_string(kValuationCap) + " assignments");
  }
  std::vector<int> vals(vars.size(), 0);
  for (std::uint64_t c = 0; c < count; ++c) {
    std::uint64_t t = c;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      vals[i] = static_cast<int>(t % a.lat.size);
      t /= a.lat.size;
    }
    if (!fn(static_cast<const std::vector<int>&>(vals))) return false;
  }
  return true;
}

inline std::vector<std::string> sequent_vars(const Sequent& s) {
  std::vector<std::string> v;
  collect_vars(s.lhs, v);
  collect_vars(s.rhs, v);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline std::optional<Valuation> refute_sequent(const FiniteModalDL& a, const Sequent& s) {
  std::vector<std::string> vars = sequent_vars(s);
  std::optional<Valuation> witness;
  for_each_valuation(a, vars, [&](const std::vector<int>& vals) {
    int l = eval_positive_at(a, vars, vals, s.lhs);
    int r = eval_positive_at(a, vars, vals, s.rhs);
    if (!a.lat.leq(l, r)) {
      Valuation v;
      for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = vals[i];
      witness = std::move(v);
      return false;
    }
    return true;
  });
  return witness;
}

inline bool models_sequent(const FiniteModalDL& a, const Sequent& s) {
  return !refute_sequent(a, s).has_value();
}

inline bool models_formula(const FiniteModalDL& a, const Formula& f) {
  std::vector<std::string> vars = variables_of(f);
  return for_each_valuation(a, vars, [&](const std::vector<int>& vals) {
    return eval_positive_at(a, vars, vals, f) == a.lat.top;
  });
}

inline std::vector<std::string> identity_vars(const Identity& id) {
  std::vector<std::string> v;
  collect_vars(id.lhs, v);
  collect_vars(id.rhs, v);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline bool models_identity(const FiniteModalDL& a, const Identity& id) {
  std::vector<std::string> vars = identity_vars(id);
  return for_each_valuation(a, vars, [&](const std::vector<int>& vals) {
    return eval_term_at(a, vars, vals, id.lhs) == eval_term_at(a, vars, vals, id.rhs);
  });
}

inline std::vector<std::string> quasi_identity_vars(const QuasiIdentity& q) {
  std::vector<std::string> v;
  for (const auto& h : q.hypotheses) {
    collect_vars(h.lhs, v);
    collect_vars(h.rhs, v);
  }
  collect_vars(q.conclusion.lhs, v);
  collect_vars(q.conclusion.rhs, v);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// First assignment satisfying every hypothesis but not the conclusion.
inline std::optional<Valuation> refute_quasi_identity(const FiniteModalDL& a,
                                                      const QuasiIdentity& q) {
  std::vector<std::string> vars = quasi_identity_vars(q);
  std::optional<Valuation> witness;
  for_each_valuation(a, vars, [&](const std::vector<int>& vals) {
    for (const auto& h : q.hypotheses)
      if (eval_term_at(a, vars, vals, h.lhs) != eval_term_at(a, vars, vals, h.rhs)) return true;
    if (eval_term_at(a, vars, vals, q.conclusion.lhs) !=
        eval_term_at(a, vars, vals, q.conclusion.rhs)) {
      Valuation v;
      for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = vals[i];
      witness = std::move(v);
      return false;
    }
    return true;
  });
  return witness;
}

inline bool models_quasi_identity(const FiniteModalDL& a, const QuasiIdentity& q) {
  return !refute_quasi_identity(a, q).has_value();
}

inline std::optional<Valuation> refute_quasi_sequent(const FiniteModalDL& a,
                                                     const QuasiSequent& q) {
  std::vector<std::string> v;
  for (const auto& h : q.hypotheses) {
    collect_vars(h.lhs, v);
    collect_vars(h.rhs, v);
  }
  collect_vars(q.conclusion.lhs, v);
  collect_vars(q.conclusion.rhs, v);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::optional<Valuation> witness;
  for_each_valuation(a, v, [&](const std::vector<int>& vals) {
    for (const auto& h : q.hypotheses)
      if (!a.lat.leq(eval_positive_at(a, v, vals, h.lhs), eval_positive_at(a, v, vals, h.rhs)))
        return true;
    if (!a.lat.leq(eval_positive_at(a, v, vals, q.conclusion.lhs),
                   eval_positive_at(a, v, vals, q.conclusion.rhs))) {
      Valuation w;
      for (std::size_t i = 0; i < v.size(); ++i) w[v[i]] = vals[i];
      witness = std::move(w);
      return false;
    }
    return true;
  });
  return witness;
}

inline bool models_quasi_sequent(const FiniteModalDL& a, const QuasiSequent& q) {
  return !refute_quasi_sequent(a, q).has_value();
}

// --- enumeration ----------------------------------------------------------------

namespace detail {

// Canonical form: lexicographically least linearization of the leq matrix
// over all carrier permutations. Size is capped so the factorial stays tame.
inline std::string canonical_leq_signature(const LatticeCore& a) {
  const int k = a.size;
  if (k > 8) throw std::invalid_argument("canonical signature capped at size 8");
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::string sig(static_cast<std::size_t>(k) * k, '0');
    for (int x = 0; x < k; ++x)
      for (int y = 0; y < k; ++y)
        if (a.leq(perm[x], perm[y])) sig[static_cast<std::size_t>(x) * k + y] = '1';
    if (best.empty() || sig < best) best = sig;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline LatticeCore downset_lattice(int p, const std::vector<std::uint32_t>& below) {
  // below[x]: strict predecessors of x (as bitmask), for a strict order on p points
  std::vector<std::uint32_t> downsets;
  for (std::uint32_t s = 0; s < (1u << p); ++s) {
    bool closed = true;
    for (int x = 0; x < p && closed; ++x)
      if ((s >> x) & 1)
        if ((below[x] & ~s) != 0) closed = false;
    if (closed) downsets.push_back(s);
  }
  std::sort(downsets.begin(), downsets.end(), [](std::uint32_t a, std::uint32_t b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  std::map<std::uint32_t, int> index;
  for (std::size_t i = 0; i < downsets.size(); ++i) index[downsets[i]] = static_cast<int>(i);
  LatticeCore lat;
  lat.size = static_cast<int>(downsets.size());
  lat.bot = 0;
  lat.top = lat.size - 1;
  lat.join.resize(static_cast<std::size_t>(lat.size) * lat.size);
  lat.meet.resize(static_cast<std::size_t>(lat.size) * lat.size);
  for (int x = 0; x < lat.size; ++x)
    for (int y = 0; y < lat.size; ++y) {
      lat.join[static_cast<std::size_t>(x) * lat.size + y] = index.at(downsets[x] | downsets[y]);
      lat.meet[static_cast<std::size_t>(x) * lat.size + y] = index.at(downsets[x] & downsets[y]);
    }
  return lat;
}

}  // namespace detail

// All bounded distributive lattices with at most max_size elements, one per
// isomorphism class, generated as downset lattices of strict orders on at
// most max_size - 1 points. Deterministic order: by size, then by canonical
// signature.
inline std::vector<LatticeCore> enumerate_distributive_lattices(int max_size) {
  if (max_size < 1 || max_size > 6)
    throw std::invalid_argument("enumerate_distributive_lattices: max_size must be 1..6");
  std::vector<std::pair<std::pair<int, std::string>, LatticeCore>> found;
  std::vector<std::string> seen;
  int max_points = max_size - 1;
  for (int p = 0; p <= max_points; ++p) {
    int bits = p * (p - 1);
    for (std::uint64_t mask = 0; mask < (1ull << bits); ++mask) {
      // decode strict relation; below[x] = set of y with y < x
      std::vector<std::uint32_t> less(p, 0);  // less[x]: set of y with x < y
      int bit = 0;
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
          if (i == j) continue;
          if ((mask >> bit) & 1) less[i] |= 1u << j;
          ++bit;
        }
      bool ok = true;
      for (int i = 0; i < p && ok; ++i)
        for (int j = 0; j < p && ok; ++j)
          if ((less[i] >> j) & 1) {
            if ((less[j] >> i) & 1) ok = false;                    // antisymmetry
            else if ((less[j] & ~less[i]) != 0) ok = false;        // transitivity
          }
      if (!ok) continue;
      std::vector<std::uint32_t> below(p, 0);
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
          if ((less[i] >> j) & 1) below[j] |= 1u << i;
      LatticeCore lat = detail::downset_lattice(p, below);
      if (lat.size > max_size) continue;
      std::string sig = detail::canonical_leq_signature(lat);
      std::string key = std::to_string(lat.size) + ":" + sig;
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      found.push_back({{lat.size, sig}, std::move(lat)});
    }
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<LatticeCore> out;
  out.reserve(found.size());
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

enum class DLClass { ModalDL, GldLattice };

namespace detail {

inline bool interactions_hold(const FiniteModalDL& a) {
  const int k = a.lat.size;
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      if (!a.lat.leq(a.box[a.lat.j(x, y)], a.lat.j(a.box[x], a.dia[y]))) return false;
      if (!a.lat.leq(a.lat.m(a.box[x], a.dia[y]), a.dia[a.lat.m(x, y)])) return false;
    }
  return true;
}

inline void all_unary_tables(const LatticeCore& lat, int fixed_arg, int fixed_val,
                             std::vector<std::vector<std::uint16_t>>& out) {
  const int k = lat.size;
  std::vector<std::uint16_t> t(k, 0);
  t[fixed_arg] = static_cast<std::uint16_t>(fixed_val);
  // odometer over the non-fixed positions, ascending
  std::vector<int> free_pos;
  for (int i = 0; i < k; ++i)
    if (i != fixed_arg) free_pos.push_back(i);
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < free_pos.size(); ++i) count *= k;
  for (std::uint64_t c = 0; c < count; ++c) {
    std::uint64_t v = c;
    for (std::size_t i = 0; i < free_pos.size(); ++i) {
      t[free_pos[i]] = static_cast<std::uint16_t>(v % k);
      v /= k;
    }
    out.push_back(t);
  }
}

inline bool box_is_gld(const LatticeCore& lat, const std::vector<std::uint16_t>& b) {
  const int k = lat.size;
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      if (b[lat.m(x, y)] != lat.m(b[x], b[y])) return false;
  for (int x = 0; x < k; ++x)
    if (!lat.leq(b[x], b[b[x]])) return false;
  return box_chain_reaches_top(lat, b).has_value();
}

inline bool dia_is_gld(const LatticeCore& lat, const std::vector<std::uint16_t>& d) {
  const int k = lat.size;
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      if (d[lat.j(x, y)] != lat.j(d[x], d[y])) return false;
  for (int x = 0; x < k; ++x)
    if (!lat.leq(d[d[x]], d[x])) return false;
  return dia_chain_reaches_bot(lat, d).has_value();
}

}  // namespace detail

// All modal structures of the requested class on every distributive lattice
// with at most max_size elements, in deterministic order (lattice order,
// then box table, then dia table, lexicographic).
inline std::vector<FiniteModalDL> enumerate_modal_dls(int max_size, DLClass klass) {
  std::vector<FiniteModalDL> out;
  for (const LatticeCore& lat : enumerate_distributive_lattices(max_size)) {
    std::vector<std::vector<std::uint16_t>> boxes, dias;
    detail::all_unary_tables(lat, lat.top, lat.top, boxes);
    detail::all_unary_tables(lat, lat.bot, lat.bot, dias);
    if (klass == DLClass::GldLattice) {
      std::vector<std::vector<std::uint16_t>> fb, fd;
      for (auto& b : boxes)
        if (detail::box_is_gld(lat, b)) fb.push_back(b);
      for (auto& d : dias)
        if (detail::dia_is_gld(lat, d)) fd.push_back(d);
      boxes.swap(fb);
      dias.swap(fd);
    }
    for (const auto& b : boxes)
      for (const auto& d : dias) {
        FiniteModalDL a{lat, b, d};
        if (!detail::interactions_hold(a)) continue;
        if (klass == DLClass::GldLattice && !check_gld_lattice(a).pass) continue;
        out.push_back(std::move(a));
      }
  }
  return out;
}

inline std::vector<FiniteModalDL> enumerate_gld_lattices(int max_size) {
  return enumerate_modal_dls(max_size, DLClass::GldLattice);
}

// --- Boolean enumeration ---------------------------------------------------------

// Powerset algebra over m atoms with box induced by a successor relation;
// element index == subset bitmask.
inline FiniteModalAlgebra complex_algebra(int atoms, const std::vector<std::uint32_t>& succ) {
  const int k = 1 << atoms;
  const std::uint32_t full = static_cast<std::uint32_t>(k - 1);
  FiniteModalAlgebra a;
  a.lat.size = k;
  a.lat.bot = 0;
  a.lat.top = k - 1;
  a.lat.join.resize(static_cast<std::size_t>(k) * k);
  a.lat.meet.resize(static_cast<std::size_t>(k) * k);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      a.lat.join[static_cast<std::size_t>(x) * k + y] = static_cast<std::uint16_t>(x | y);
      a.lat.meet[static_cast<std::size_t>(x) * k + y] = static_cast<std::uint16_t>(x & y);
    }
  a.neg.resize(k);
  a.box.resize(k);
  a.dia.resize(k);
  for (int x = 0; x < k; ++x) {
    a.neg[x] = static_cast<std::uint16_t>(~static_cast<std::uint32_t>(x) & full);
    std::uint32_t bx = 0;
    for (int w = 0; w < atoms; ++w)
      if ((succ[w] & ~static_cast<std::uint32_t>(x)) == 0) bx |= 1u << w;
    a.box[x] = static_cast<std::uint16_t>(bx);
  }
  for (int x = 0; x < k; ++x) a.dia[x] = a.neg[a.box[a.neg[x]]];
  return a;
}

namespace detail {

// Least relation bitmask over all atom permutations.
inline std::uint64_t canonical_relation(int m, std::uint64_t rel) {
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = ~0ull;
  do {
    std::uint64_t r = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if ((rel >> (i * m + j)) & 1) r |= 1ull << (perm[i] * m + perm[j]);
    best = std::min(best, r);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

template <typename Check>
inline std::vector<FiniteModalAlgebra> enumerate_boolean(int max_size, Check&& keeps) {
  if (max_size < 2 || max_size > 16)
    throw std::invalid_argument("Boolean enumeration supports sizes 2..16");
  std::vector<FiniteModalAlgebra> out;
  for (int m = 1; (1 << m) <= max_size; ++m) {
    int bits = m * m;
    for (std::uint64_t rel = 0; rel < (1ull << bits); ++rel) {
      bool irrefl = true, trans = true;
      std::vector<std::uint32_t> succ(m, 0);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          if ((rel >> (i * m + j)) & 1) {
            if (i == j) irrefl = false;
            succ[i] |= 1u << j;
          }
      if (!irrefl) continue;
      for (int i = 0; i < m && trans; ++i)
        for (int j = 0; j < m && trans; ++j)
          if ((succ[i] >> j) & 1)
            if ((succ[j] & ~succ[i]) != 0) trans = false;
      if (!trans) continue;
      if (canonical_relation(m, rel) != rel) continue;
      FiniteModalAlgebra a = complex_algebra(m, succ);
      if (keeps(a)) out.push_back(std::move(a));
    }
  }
  return out;
}

}  // namespace detail

// Every finite modal algebra with box 1 = 1 and multiplicative box is the
// complex algebra of a relation on its atoms, and the Loeb inequality holds
// exactly when that relation is transitive and irreflexive; so enumerating
// those relations (one per isomorphism class) enumerates the class. The
// brute-force cross-check over raw box tables lives in the test suite.
inline std::vector<FiniteModalAlgebra> enumerate_gl_algebras(int max_size) {
  return detail::enumerate_boolean(max_size,
                                   [](const FiniteModalAlgebra& a) { return check_gl_algebra(a).pass; });
}

inline std::vector<FiniteModalAlgebra> enumerate_gld_algebras(int max_size) {
  return detail::enumerate_boolean(max_size, [](const FiniteModalAlgebra& a) {
    return check_gld_algebra(a).pass;
  });
}

}  // namespace algebra
}  // namespace posgl

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "posgl/formula.hpp"
#include "posgl/term.hpp"

// Decision procedure for GL over the full modal language, plus a brute
// force Kripke countermodel finder over finite transitive irreflexive
// frames (which are exactly the finite frames validating GL).
//
// Validity is decided by backward sequent search. Diamonds are rewritten
// to ~box~ first; the propositional rules are invertible and applied to
// saturation; then the GL modal rule is tried with backtracking: to prove
//   Sigma, box Gamma => box A, Delta
// it suffices to prove Gamma, box Gamma, box A => A for some boxed member
// of the succedent. Since the rule is only applied when box A is not
// already on the left, the antecedent box set grows strictly along every
// branch and stays inside the subformula closure, so search terminates.

namespace posgl {
namespace oracle {

struct KripkeModel {
  int num_worlds = 0;
  std::vector<std::pair<int, int>> relation;           // transitive, irreflexive
  std::map<std::string, std::uint32_t> valuation;      // var -> bitmask of worlds
};

struct Countermodel {
  KripkeModel model;
  int world = 0;  // a world refuting the formula
};

enum class Decision { Valid, Invalid };

struct DecideResult {
  Decision decision = Decision::Invalid;
  std::uint64_t nodes = 0;  // sequents expanded
  std::string trace;        // deterministic proof outline, nonempty iff Valid
  bool valid() const { return decision == Decision::Valid; }
};

inline constexpr std::uint64_t kDefaultNodeCap = 1000000;

// --- Kripke evaluation ------------------------------------------------------

namespace detail {

inline std::uint32_t succ_mask(const KripkeModel& m, int w) {
  std::uint32_t s = 0;
  for (auto& [a, b] : m.relation)
    if (a == w) s |= 1u << b;
  return s;
}

}  // namespace detail

inline bool kripke_eval(const KripkeModel& m, int w, const Formula& f) {
  if (w < 0 || w >= m.num_worlds) throw std::invalid_argument("world out of range");
  switch (f.kind()) {
    case Conn::Var: {
      auto it = m.valuation.find(f.var_name());
      std::uint32_t mask = it == m.valuation.end() ? 0 : it->second;
      return (mask >> w) & 1u;
    }
    case Conn::Top: return true;
    case Conn::Bot: return false;
    case Conn::Or: return kripke_eval(m, w, f.left()) || kripke_eval(m, w, f.right());
    case Conn::And: return kripke_eval(m, w, f.left()) && kripke_eval(m, w, f.right());
    case Conn::Implies: return !kripke_eval(m, w, f.left()) || kripke_eval(m, w, f.right());
    case Conn::Not: return !kripke_eval(m, w, f.child());
    case Conn::Box: {
      for (auto& [a, b] : m.relation)
        if (a == w && !kripke_eval(m, b, f.child())) return false;
      return true;
    }
    case Conn::Dia: {
      for (auto& [a, b] : m.relation)
        if (a == w && kripke_eval(m, b, f.child())) return true;
      return false;
    }
    case Conn::Iter:
      throw std::invalid_argument("kripke_eval: schematic formula");
  }
  return false;
}

// --- sequent search ----------------------------------------------------------

namespace detail {

// dia A  ~~>  ~ box ~ A
inline Formula boxify(const Formula& f) {
  switch (f.kind()) {
    case Conn::Var:
    case Conn::Top:
    case Conn::Bot:
      return f;
    case Conn::Or: return Formula::disj(boxify(f.left()), boxify(f.right()));
    case Conn::And: return Formula::conj(boxify(f.left()), boxify(f.right()));
    case Conn::Implies: return Formula::implies(boxify(f.left()), boxify(f.right()));
    case Conn::Not: return Formula::negation(boxify(f.child()));
    case Conn::Box: return Formula::box(boxify(f.child()));
    case Conn::Dia: return Formula::negation(Formula::box(Formula::negation(boxify(f.child()))));
    case Conn::Iter: throw std::invalid_argument("decide_gl: schematic formula");
  }
  return f;
}

struct GSeq {
  std::vector<Formula> ant, suc;  // sorted, deduplicated
};

inline void canon(std::vector<Formula>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

inline int cmp_side(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    int c = compare(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

struct GSeqLess {
  bool operator()(const GSeq& x, const GSeq& y) const {
    int c = cmp_side(x.ant, y.ant);
    if (c != 0) return c < 0;
    return cmp_side(x.suc, y.suc) < 0;
  }
};

inline bool contains(const std::vector<Formula>& v, const Formula& f) {
  return std::binary_search(v.begin(), v.end(), f,
                            [](const Formula& a, const Formula& b) { return a < b; });
}

inline std::vector<Formula> without(const std::vector<Formula>& v, std::size_t idx) {
  std::vector<Formula> r;
  r.reserve(v.size() - 1);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (i != idx) r.push_back(v[i]);
  return r;
}

inline std::vector<Formula> with(std::vector<Formula> v, const Formula& f) {
  v.push_back(f);
  canon(v);
  return v;
}

struct Search {
  std::uint64_t cap;
  std::uint64_t nodes = 0;
  std::map<GSeq, std::pair<bool, std::string>, GSeqLess> memo;

  std::pair<bool, std::string> prove(const GSeq& s) {
    if (++nodes > cap)
      throw ResourceCapExceeded("decide_gl: search node cap of " + std::to_string(cap) +
                                " exceeded");
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    auto result = expand(s);
    memo.emplace(s, result);
    return result;
  }

  std::pair<bool, std::string> expand(const GSeq& s) {
    std::string here = "[" + show(s) + "]";
    // closure
    for (const auto& f : s.ant) {
      if (f.kind() == Conn::Bot) return {true, here + " bot-left"};
      if (contains(s.suc, f)) return {true, here + " axiom"};
    }
    for (const auto& f : s.suc)
      if (f.kind() == Conn::Top) return {true, here + " top-right"};
    // invertible propositional rules, first reducible formula in order
    for (std::size_t i = 0; i < s.ant.size(); ++i) {
      const Formula& f = s.ant[i];
      switch (f.kind()) {
        case Conn::Top: {
          GSeq t{without(s.ant, i), s.suc};
          return prove(t);
        }
        case Conn::Not: {
          GSeq t{without(s.ant, i), with(s.suc, f.child())};
          auto [ok, tr] = prove(t);
          return {ok, ok ? here + " not-left\n" + tr : ""};
        }
        case Conn::And: {
          GSeq t{with(with(without(s.ant, i), f.left()), f.right()), s.suc};
          auto [ok, tr] = prove(t);
          return {ok, ok ? here + " and-left\n" + tr : ""};
        }
        case Conn::Or: {
          GSeq l{with(without(s.ant, i), f.left()), s.suc};
          GSeq r{with(without(s.ant, i), f.right()), s.suc};
          auto [ok1, t1] = prove(l);
          if (!ok1) return {false, ""};
          auto [ok2, t2] = prove(r);
          return {ok2, ok2 ? here + " or-left\n" + t1 + "\n" + t2 : ""};
        }
        case Conn::Implies: {
          GSeq l{without(s.ant, i), with(s.suc, f.left())};
          GSeq r{with(without(s.ant, i), f.right()), s.suc};
          auto [ok1, t1] = prove(l);
          if (!ok1) return {false, ""};
          auto [ok2, t2] = prove(r);
          return {ok2, ok2 ? here + " imp-left\n" + t1 + "\n" + t2 : ""};
        }
        default: break;
      }
    }
    for (std::size_t i = 0; i < s.suc.size(); ++i) {
      const Formula& f = s.suc[i];
      switch (f.kind()) {
        case Conn::Bot: {
          GSeq t{s.ant, without(s.suc, i)};
          return prove(t);
        }
        case Conn::Not: {
          GSeq t{with(s.ant, f.child()), without(s.suc, i)};
          auto [ok, tr] = prove(t);
          return {ok, ok ? here + " not-right\n" + tr : ""};
        }
        case Conn::Or: {
          GSeq t{s.ant, with(with(without(s.suc, i), f.left()), f.right())};
          auto [ok, tr] = prove(t);
          return {ok, ok ? here + " or-right\n" + tr : ""};
        }
        case Conn::Implies: {
          GSeq t{with(s.ant, f.left()), with(without(s.suc, i), f.right())};
          auto [ok, tr] = prove(t);
          return {ok, ok ? here + " imp-right\n" + tr : ""};
        }
        case Conn::And: {
          GSeq l{s.ant, with(without(s.suc, i), f.left())};
          GSeq r{s.ant, with(without(s.suc, i), f.right())};
          auto [ok1, t1] = prove(l);
          if (!ok1) return {false, ""};
          auto [ok2, t2] = prove(r);
          return {ok2, ok2 ? here + " and-right\n" + t1 + "\n" + t2 : ""};
        }
        default: break;
      }
    }
    // saturated: GL modal rule, leftmost boxed succedent first, backtracking
    for (const auto& f : s.suc) {
      if (f.kind() != Conn::Box) continue;
      if (contains(s.ant, f)) continue;  // would have closed above anyway
      GSeq t;
      for (const auto& g : s.ant)
        if (g.kind() == Conn::Box) {
          t.ant.push_back(g);
          t.ant.push_back(g.child());
        }
      t.ant.push_back(f);
      canon(t.ant);
      t.suc.push_back(f.child());
      auto [ok, tr] = prove(t);
      if (ok) return {true, here + " glr on " + to_string(f) + "\n" + tr};
    }
    return {false, ""};
  }

  static std::string show(const GSeq& s) {
    std::string out;
    for (std::size_t i = 0; i < s.ant.size(); ++i)
      out += (i ? ", " : "") + to_string(s.ant[i]);
    out += " => ";
    for (std::size_t i = 0; i < s.suc.size(); ++i)
      out += (i ? ", " : "") + to_string(s.suc[i]);
    return out;
  }
};

}  // namespace detail

inline DecideResult decide_gl(const Formula& f, std::uint64_t node_cap = kDefaultNodeCap) {
  detail::Search search{node_cap};
  detail::GSeq root;
  root.suc.push_back(detail::boxify(f));
  auto [ok, trace] = search.prove(root);
  DecideResult r;
  r.decision = ok ? Decision::Valid : Decision::Invalid;
  r.nodes = search.nodes;
  r.trace = ok ? trace : "";
  return r;
}

inline DecideResult decide_positive_sequent(const Sequent& s,
                                            std::uint64_t node_cap = kDefaultNodeCap) {
  return decide_gl(to_implication(s), node_cap);
}

// --- countermodel search -------------------------------------------------------

struct Frame {
  int num_worlds;
  std::vector<std::uint32_t> succ;  // successor bitmask per world
};

// All transitive irreflexive relations on m worlds, in ascending order of
// the off-diagonal relation bitmask (row-major, diagonal skipped).
inline const std::vector<Frame>& enumerate_frames(int m) {
  static std::map<int, std::vector<Frame>> cache;
  if (m < 1 || m > 5) throw std::invalid_argument("enumerate_frames: 1..5 worlds");
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<Frame> frames;
  int bits = m * (m - 1);
  for (std::uint64_t mask = 0; mask < (1ull << bits); ++mask) {
    Frame fr;
    fr.num_worlds = m;
    fr.succ.assign(m, 0);
    int bit = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (i == j) continue;
        if ((mask >> bit) & 1) fr.succ[i] |= 1u << j;
        ++bit;
      }
    bool transitive = true;
    for (int i = 0; i < m && transitive; ++i)
      for (int j = 0; j < m && transitive; ++j)
        if ((fr.succ[i] >> j) & 1)
          if ((fr.succ[j] & ~fr.succ[i]) != 0) transitive = false;
    if (transitive) frames.push_back(std::move(fr));
  }
  return cache.emplace(m, std::move(frames)).first->second;
}

// Truth set of f as a bitmask over the frame's worlds.
inline std::uint32_t eval_mask(const Frame& fr, const std::vector<std::string>& vars,
                               const std::vector<std::uint32_t>& val, const Formula& f) {
  std::uint32_t full = (1u << fr.num_worlds) - 1;
  switch (f.kind()) {
    case Conn::Var: {
      for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == f.var_name()) return val[i];
      return 0;
    }
    case Conn::Top: return full;
    case Conn::Bot: return 0;
    case Conn::Or: return eval_mask(fr, vars, val, f.left()) | eval_mask(fr, vars, val, f.right());
    case Conn::And: return eval_mask(fr, vars, val, f.left()) & eval_mask(fr, vars, val, f.right());
    case Conn::Implies:
      return (~eval_mask(fr, vars, val, f.left()) | eval_mask(fr, vars, val, f.right())) & full;
    case Conn::Not: return ~eval_mask(fr, vars, val, f.child()) & full;
    case Conn::Box: {
      std::uint32_t x = eval_mask(fr, vars, val, f.child());
      std::uint32_t r = 0;
      for (int w = 0; w < fr.num_worlds; ++w)
        if ((fr.succ[w] & ~x) == 0) r |= 1u << w;
      return r;
    }
    case Conn::Dia: {
      std::uint32_t x = eval_mask(fr, vars, val, f.child());
      std::uint32_t r = 0;
      for (int w = 0; w < fr.num_worlds; ++w)
        if ((fr.succ[w] & x) != 0) r |= 1u << w;
      return r;
    }
    case Conn::Iter:
      throw std::invalid_argument("eval_mask: schematic formula");
  }
  return 0;
}

// Exhaustive search for a world refuting f, over all transitive irreflexive
// frames with at most max_worlds worlds and all valuations of f's variables.
// Returning nothing is not a validity certificate; only decide_gl is.
inline std::optional<Countermodel> find_countermodel(const Formula& f, int max_worlds = 5) {
  if (max_worlds < 1 || max_worlds > 5)
    throw std::invalid_argument("find_countermodel: max_worlds must be in 1..5");
  std::vector<std::string> vars = variables_of(f);
  if (max_worlds * vars.size() > 24)
    throw ResourceCapExceeded("find_countermodel: too many variables for exhaustive search");
  for (int m = 1; m <= max_worlds; ++m) {
    std::uint32_t full = (1u << m) - 1;
    for (const Frame& fr : enumerate_frames(m)) {
      std::uint64_t vcount = 1ull << (m * vars.size());
      std::vector<std::uint32_t> val(vars.size(), 0);
      for (std::uint64_t vc = 0; vc < vcount; ++vc) {
        for (std::size_t t = 0; t < vars.size(); ++t)
          val[t] = static_cast<std::uint32_t>((vc >> (t * m)) & full);
        std::uint32_t truth = eval_mask(fr, vars, val, f);
        if (truth != full) {
          Countermodel cm;
          cm.model.num_worlds = m;
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
              if ((fr.succ[i] >> j) & 1) cm.model.relation.emplace_back(i, j);
          for (std::size_t t = 0; t < vars.size(); ++t)
            cm.model.valuation[vars[t]] = val[t];
          while ((truth >> cm.world) & 1) ++cm.world;
          return cm;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace oracle
}  // namespace posgl

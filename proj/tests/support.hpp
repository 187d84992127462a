#pragma once
// Test helpers. The enumeration here deliberately shares no code with the
// library: clause semantics are re-derived from the literal lists, so it can
// serve as an independent reference for the solver and for the oracle module.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mpe/benchgen.hpp"
#include "mpe/formula.hpp"
#include "mpe/planner.hpp"
#include "mpe/wcnf.hpp"

namespace mpe::test {

// x2 xor -x4; x1 or x6; x1; x3 xor x5; -x3 or -x5
inline constexpr const char* kExampleFormula =
    "p cnf 6 5\n"
    "x 2 -4 0\n"
    "1 6 0\n"
    "1 0\n"
    "x 3 5 0\n"
    "-3 -5 0\n";

// n6 = {n1} / {x2,x4}, n7 = {n2} / {x6}, n8 = {n6,n7,n3} / {x1},
// n9 = {n4,n5} / {x3,x5}, root n10 = {n8,n9} / {}
inline constexpr const char* kExampleTree =
    "p jt 6 5 10\n"
    "6 1 e 2 4\n"
    "7 2 e 6\n"
    "8 6 7 3 e 1\n"
    "9 4 5 e 3 5\n"
    "10 8 9 e\n";

inline Instance example_instance() { return parse_formula(kExampleFormula); }

inline ProjectJoinTree example_tree(const Formula& f) {
  std::istringstream in(kExampleTree);
  return read_jt(in, f);
}

inline bool bit_of(std::uint64_t mask, std::uint32_t var) { return ((mask >> (var - 1)) & 1U) != 0; }

inline bool satisfies(const Clause& c, std::uint64_t mask) {
  int true_literals = 0;
  for (const Literal& l : c.literals) true_literals += bit_of(mask, l.var.index) == l.positive ? 1 : 0;
  return c.kind == ClauseKind::Xor ? (true_literals % 2) == 1 : true_literals > 0;
}

/// [[phi]](mask) * W(mask), multiplied out left to right.
inline double direct_value(const Instance& inst, std::uint64_t mask) {
  for (const Clause& c : inst.formula.clauses) {
    if (!satisfies(c, mask)) return 0.0;
  }
  double w = 1.0;
  for (std::uint32_t i = 1; i <= inst.formula.var_count; ++i) {
    const auto& p = inst.weights.at(Var{i});
    w *= bit_of(mask, i) ? p.pos : p.neg;
  }
  return w;
}

struct Enumerated {
  double maximum = 0.0;
  double wmc = 0.0;
  std::vector<std::uint64_t> argmax;  // exact ties only
};

inline Enumerated enumerate(const Instance& inst) {
  Enumerated e;
  const std::uint64_t rows = std::uint64_t{1} << inst.formula.var_count;
  std::vector<double> values(rows);
  for (std::uint64_t mask = 0; mask < rows; ++mask) {
    values[mask] = direct_value(inst, mask);
    e.wmc += values[mask];
    e.maximum = std::max(e.maximum, values[mask]);
  }
  for (std::uint64_t mask = 0; mask < rows; ++mask) {
    if (values[mask] == e.maximum) e.argmax.push_back(mask);
  }
  return e;
}

inline bool rel_close(double a, double b, double tol) {
  if (a == b) return true;
  return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

/// Random instance with both clause kinds and some zero weights.
inline Instance random_instance(std::mt19937_64& rng, std::uint32_t max_n) {
  const auto n = static_cast<std::uint32_t>(1 + rng() % max_n);
  const auto m = static_cast<std::uint32_t>(rng() % (2 * n + 1));
  const auto max_len = static_cast<std::uint32_t>(1 + rng() % std::min<std::uint32_t>(n, 4));
  Instance inst = gen_random(n, m, max_len, 0.5, rng());
  for (std::uint32_t i = 1; i <= n; ++i) {
    if (rng() % 10 == 0) inst.weights.set(Literal{Var{i}, rng() % 2 == 0}, 0.0);
  }
  return inst;
}

inline EliminationOrder random_order(std::mt19937_64& rng, std::uint32_t n) {
  EliminationOrder order;
  for (std::uint32_t i = 1; i <= n; ++i) order.push_back(Var{i});
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

/// True if some values of the auxiliary variables (those above
/// original_vars) satisfy every hard clause together with `mask` on the
/// originals. Backtracks over auxiliaries in index order, checking each clause
/// as soon as all its variables are fixed.
inline bool hard_extendable(const WcnfInstance& w, std::uint64_t mask) {
  const std::uint32_t n = w.var_count;
  std::vector<int> value(n + 1, -1);
  for (std::uint32_t i = 1; i <= w.original_vars; ++i) value[i] = bit_of(mask, i) ? 1 : 0;
  std::vector<std::vector<const WcnfClause*>> ready(n + 1);  // by largest variable
  for (const WcnfClause& c : w.clauses) {
    if (!c.hard) continue;
    std::uint32_t top = 0;
    for (std::int64_t l : c.literals) top = std::max(top, static_cast<std::uint32_t>(std::llabs(l)));
    ready[top].push_back(&c);
  }
  auto ok_upto = [&](std::uint32_t v) {
    for (const WcnfClause* c : ready[v]) {
      bool sat = false;
      for (std::int64_t l : c->literals) sat = sat || (value[std::llabs(l)] == (l > 0 ? 1 : 0));
      if (!sat) return false;
    }
    return true;
  };
  for (std::uint32_t v = 1; v <= w.original_vars; ++v) {
    if (!ok_upto(v)) return false;
  }
  std::function<bool(std::uint32_t)> search = [&](std::uint32_t v) {
    if (v > n) return true;
    for (int b : {0, 1}) {
      value[v] = b;
      if (ok_upto(v) && search(v + 1)) return true;
    }
    value[v] = -1;
    return false;
  };
  return search(w.original_vars + 1);
}

struct WcnfOptimum {
  bool feasible = false;
  std::uint64_t best_score = 0;
  std::vector<std::uint64_t> argmax;  // original-variable masks
};

inline WcnfOptimum wcnf_optimum(const WcnfInstance& w) {
  WcnfOptimum o;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << w.original_vars); ++mask) {
    if (!hard_extendable(w, mask)) continue;
    std::uint64_t score = 0;
    for (const WcnfClause& c : w.clauses) {
      if (c.hard) continue;
      const std::int64_t l = c.literals.at(0);
      if (bit_of(mask, static_cast<std::uint32_t>(std::llabs(l))) == (l > 0)) score += c.weight;
    }
    if (!o.feasible || score > o.best_score) {
      o.feasible = true;
      o.best_score = score;
      o.argmax.clear();
    }
    if (score == o.best_score) o.argmax.push_back(mask);
  }
  return o;
}

enum class Mutation { DropPi, DuplicatePi, ReparentLeaf };

/// Applies one mutation class to a planned tree; false when the tree offers no
/// place to apply it (e.g. nothing projected below the root).
inline bool mutate(ProjectJoinTree& tree, const Formula& formula, Mutation kind, std::mt19937_64& rng) {
  std::vector<NodeIndex> with_pi;
  for (NodeIndex v = 0; v < tree.nodes.size(); ++v) {
    if (!tree.nodes[v].is_leaf() && !tree.nodes[v].pi.empty()) with_pi.push_back(v);
  }
  switch (kind) {
    case Mutation::DropPi: {
      if (with_pi.empty()) return false;
      auto& pi = tree.nodes[with_pi[rng() % with_pi.size()]].pi;
      pi.erase(pi.begin() + static_cast<std::ptrdiff_t>(rng() % pi.size()));
      return true;
    }
    case Mutation::DuplicatePi: {
      if (with_pi.empty()) return false;
      const NodeIndex from = with_pi[rng() % with_pi.size()];
      const Var x = tree.nodes[from].pi[rng() % tree.nodes[from].pi.size()];
      NodeIndex to = tree.root;
      for (NodeIndex v = 0; v < tree.nodes.size(); ++v) {
        if (!tree.nodes[v].is_leaf() && v != from && rng() % 2 == 0) to = v;
      }
      if (to == from) return false;
      auto& pi = tree.nodes[to].pi;
      pi.insert(std::lower_bound(pi.begin(), pi.end(), x), x);
      return true;
    }
    case Mutation::ReparentLeaf: {
      // A leaf mentioning some x projected strictly below the root moves up to the root.
      std::vector<NodeIndex> parent(tree.nodes.size(), tree.root);
      for (NodeIndex v = 0; v < tree.nodes.size(); ++v) {
        for (NodeIndex c : tree.nodes[v].children) parent[c] = v;
      }
      for (NodeIndex v : with_pi) {
        if (v == tree.root) continue;
        for (NodeIndex leaf = 0; leaf < tree.clause_count; ++leaf) {
          const auto lv = formula.clauses[tree.nodes[leaf].clause].vars();
          bool mentions = false;
          for (Var x : tree.nodes[v].pi) mentions = mentions || std::find(lv.begin(), lv.end(), x) != lv.end();
          if (!mentions || parent[leaf] == tree.root) continue;
          auto& siblings = tree.nodes[parent[leaf]].children;
          siblings.erase(std::find(siblings.begin(), siblings.end(), leaf));
          tree.nodes[tree.root].children.push_back(leaf);
          return true;
        }
      }
      return false;
    }
  }
  return false;
}

inline Clause disj(std::initializer_list<int> lits) {
  Clause c{ClauseKind::Disjunction, {}};
  for (int l : lits) c.literals.push_back(Literal{Var{static_cast<std::uint32_t>(std::abs(l))}, l > 0});
  return c;
}

inline Clause xor_of(std::initializer_list<int> lits) {
  Clause c = disj(lits);
  c.kind = ClauseKind::Xor;
  return c;
}

}  // namespace mpe::test

#pragma once

// Algebraic decision diagrams: reduced, ordered, with real-valued terminals.
//
// A Manager owns every node. Function is a cheap (manager, root) handle; two
// handles from the same manager denote the same pseudo-Boolean function iff
// their roots are equal. Nodes are never freed while the manager lives.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "mpe/formula.hpp"

namespace mpe::dd {

using NodeId = std::uint32_t;

/// How terminal values are combined by join().
///  Linear: values are weights, join multiplies, clauses map to {0, 1}.
///  Log10:  values are log10 weights, join adds, clauses map to {-inf, 0}.
/// exists_project is max in both; additive operations are linear-only.
enum class Algebra { Linear, Log10 };

enum class Comparison { GreaterEqual, Greater };

class Manager;

class Function {
 public:
  Function() = default;

  [[nodiscard]] Manager& manager() const { return *mgr_; }
  [[nodiscard]] NodeId root() const { return root_; }
  [[nodiscard]] bool valid() const { return mgr_ != nullptr; }

  [[nodiscard]] bool is_constant() const;
  /// Terminal value; throws std::logic_error unless is_constant().
  [[nodiscard]] double value() const;

  /// Variables on some root-to-terminal path, ascending by index.
  [[nodiscard]] std::vector<Var> support() const;
  /// Reachable node count, terminals included.
  [[nodiscard]] std::size_t size() const;

  /// Follows one path; throws std::out_of_range if it meets an unbound variable.
  [[nodiscard]] double evaluate(const Assignment& tau) const;

  friend bool operator==(const Function& a, const Function& b) { return a.mgr_ == b.mgr_ && a.root_ == b.root_; }

 private:
  friend class Manager;
  Function(Manager* mgr, NodeId root) : mgr_(mgr), root_(root) {}

  Manager* mgr_ = nullptr;
  NodeId root_ = 0;
};

/// dsgn_x f: `condition` is 1 exactly where f(tau, x=1) >= f(tau, x=0).
struct DerivativeSign {
  Var var;
  Function condition;

  /// The value chosen for `var` under tau; tau must bind the condition's support.
  [[nodiscard]] bool choose(const Assignment& tau) const { return condition.evaluate(tau) != 0.0; }
};

class ManagerMismatch : public std::invalid_argument {
 public:
  ManagerMismatch() : std::invalid_argument("functions belong to different diagram managers") {}
};

class Manager {
 public:
  /// Variables 1..var_count ordered by ascending index.
  explicit Manager(std::uint32_t var_count, Algebra algebra = Algebra::Linear);
  /// `order` lists every variable 1..var_count exactly once, top level first.
  Manager(std::span<const Var> order, Algebra algebra = Algebra::Linear);

  Manager(const Manager&) = delete;
  Manager& operator=(const Manager&) = delete;

  [[nodiscard]] Algebra algebra() const { return algebra_; }
  [[nodiscard]] std::uint32_t var_count() const { return static_cast<std::uint32_t>(var_at_level_.size()); }
  [[nodiscard]] std::uint32_t level_of(Var x) const;
  [[nodiscard]] Var var_at(std::uint32_t level) const { return var_at_level_.at(level); }

  /// Raw terminal: stored as given, independent of the algebra.
  Function constant(double c);
  /// Multiplicative identity / annihilator of the algebra (1/0 or 0/-inf).
  Function one();
  Function zero();

  /// Indicator of x (terminals 0/1 in raw values).
  Function variable(Var x);
  /// W_x with weights given in linear scale; Log10 stores log10 of each.
  Function literal_weight(Var x, double w_neg, double w_pos);
  /// [[c]] with the algebra's one/zero as terminals.
  Function from_clause(const Clause& c);

  Function join(const Function& f, const Function& g);
  Function additive_join(const Function& f, const Function& g);
  Function max(const Function& f, const Function& g);
  /// 0/1 diagram of f >= g (or f > g) pointwise.
  Function compare(const Function& f, const Function& g, Comparison cmp = Comparison::GreaterEqual);

  Function restrict(const Function& f, Var x, bool b);
  Function exists_project(const Function& f, Var x);
  Function exists_project(const Function& f, std::span<const Var> xs);
  Function add_project(const Function& f, Var x);
  Function add_project(const Function& f, std::span<const Var> xs);

  /// Ties choose x -> 1.
  DerivativeSign derivative_sign(const Function& f, Var x);

  /// Graphviz text; solid edge = variable set to 1, dashed = 0.
  void write_dot(std::ostream& out, const Function& f) const;

  [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
  [[nodiscard]] std::size_t cache_entries() const { return cache_.size(); }
  void clear_cache() { cache_.clear(); }

  /// Structural check: reduction rule, ordering, uniqueness. Returns false on any violation.
  [[nodiscard]] bool check_structure() const;

 private:
  friend class Function;

  static constexpr std::uint32_t kTerminalLevel = 0xFFFFFFFFU;

  struct Node {
    std::uint32_t level;
    NodeId low;   // terminal: index into values_
    NodeId high;
  };

  enum class Op : std::uint8_t { Mul, Plus, Max, Ge, Gt, Restrict0, Restrict1, Exists, Sum };

  struct NodeKey {
    std::uint32_t level;
    NodeId low;
    NodeId high;
    friend bool operator==(const NodeKey&, const NodeKey&) = default;
    template <class H>
    friend H AbslHashValue(H h, const NodeKey& k) {
      return H::combine(std::move(h), k.level, k.low, k.high);
    }
  };

  struct CacheKey {
    Op op;
    NodeId a;
    NodeId b;
    friend bool operator==(const CacheKey&, const CacheKey&) = default;
    template <class H>
    friend H AbslHashValue(H h, const CacheKey& k) {
      return H::combine(std::move(h), static_cast<std::uint8_t>(k.op), k.a, k.b);
    }
  };

  void check_same(const Function& f, const Function& g) const;
  Function wrap(NodeId id) { return Function(this, id); }

  [[nodiscard]] bool is_terminal(NodeId id) const { return nodes_[id].level == kTerminalLevel; }
  [[nodiscard]] double terminal_value(NodeId id) const { return values_[nodes_[id].low]; }

  NodeId terminal(double value);
  NodeId make_node(std::uint32_t level, NodeId low, NodeId high);

  NodeId apply(Op op, NodeId f, NodeId g);
  NodeId restrict_rec(NodeId f, std::uint32_t level, bool b);
  NodeId project_rec(Op op, NodeId f, std::uint32_t level);
  double combine(Op op, double a, double b) const;

  Algebra algebra_;
  std::vector<Var> var_at_level_;
  std::vector<std::uint32_t> level_of_var_;  // index x - 1

  std::vector<Node> nodes_;
  std::vector<double> values_;
  absl::flat_hash_map<NodeKey, NodeId> unique_;
  absl::flat_hash_map<std::uint64_t, NodeId> terminals_;  // keyed by bit pattern
  absl::flat_hash_map<CacheKey, NodeId> cache_;
};

}  // namespace mpe::dd

#include "mpe/diagram.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <absl/container/flat_hash_set.h>

namespace mpe::dd {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Function

bool Function::is_constant() const { return mgr_->is_terminal(root_); }

double Function::value() const {
  if (!is_constant()) throw std::logic_error("value() on a non-constant diagram");
  return mgr_->terminal_value(root_);
}

std::vector<Var> Function::support() const {
  std::vector<std::uint32_t> levels;
  absl::flat_hash_set<NodeId> seen;
  std::vector<NodeId> stack{root_};
  std::vector<bool> level_seen(mgr_->var_count(), false);
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (mgr_->is_terminal(id) || !seen.insert(id).second) continue;
    const auto& n = mgr_->nodes_[id];
    if (!level_seen[n.level]) {
      level_seen[n.level] = true;
      levels.push_back(n.level);
    }
    stack.push_back(n.low);
    stack.push_back(n.high);
  }
  std::vector<Var> out;
  out.reserve(levels.size());
  for (std::uint32_t l : levels) out.push_back(mgr_->var_at(l));
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Function::size() const {
  absl::flat_hash_set<NodeId> seen;
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) continue;
    if (!mgr_->is_terminal(id)) {
      stack.push_back(mgr_->nodes_[id].low);
      stack.push_back(mgr_->nodes_[id].high);
    }
  }
  return seen.size();
}

double Function::evaluate(const Assignment& tau) const {
  NodeId id = root_;
  while (!mgr_->is_terminal(id)) {
    const auto& n = mgr_->nodes_[id];
    id = tau.at(mgr_->var_at(n.level)) ? n.high : n.low;
  }
  return mgr_->terminal_value(id);
}

// ---------------------------------------------------------------------------
// Manager

Manager::Manager(std::uint32_t var_count, Algebra algebra) : algebra_(algebra) {
  var_at_level_.reserve(var_count);
  level_of_var_.reserve(var_count);
  for (std::uint32_t i = 0; i < var_count; ++i) {
    var_at_level_.push_back(Var{i + 1});
    level_of_var_.push_back(i);
  }
}

Manager::Manager(std::span<const Var> order, Algebra algebra) : algebra_(algebra) {
  const auto n = static_cast<std::uint32_t>(order.size());
  level_of_var_.assign(n, kTerminalLevel);
  for (std::uint32_t level = 0; level < n; ++level) {
    Var x = order[level];
    if (x.index == 0 || x.index > n || level_of_var_[x.index - 1] != kTerminalLevel) {
      throw std::invalid_argument("variable order is not a permutation of 1.." + std::to_string(n));
    }
    level_of_var_[x.index - 1] = level;
  }
  var_at_level_.assign(order.begin(), order.end());
}

std::uint32_t Manager::level_of(Var x) const {
  if (x.index == 0 || x.index > level_of_var_.size()) {
    throw std::out_of_range("variable " + std::to_string(x.index) + " not managed");
  }
  return level_of_var_[x.index - 1];
}

NodeId Manager::terminal(double value) {
  if (std::isnan(value)) throw std::domain_error("NaN terminal value");
  if (value == 0.0) value = 0.0;  // fold -0.0
  auto key = std::bit_cast<std::uint64_t>(value);
  if (auto it = terminals_.find(key); it != terminals_.end()) return it->second;
  auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back({kTerminalLevel, static_cast<NodeId>(values_.size()), 0});
  values_.push_back(value);
  terminals_.emplace(key, id);
  return id;
}

NodeId Manager::make_node(std::uint32_t level, NodeId low, NodeId high) {
  if (low == high) return low;
  auto [it, inserted] = unique_.try_emplace(NodeKey{level, low, high}, static_cast<NodeId>(nodes_.size()));
  if (inserted) {
    if (nodes_.size() >= std::numeric_limits<NodeId>::max()) throw std::length_error("diagram node space exhausted");
    nodes_.push_back({level, low, high});
  }
  return it->second;
}

void Manager::check_same(const Function& f, const Function& g) const {
  if (f.mgr_ != this || g.mgr_ != this) throw ManagerMismatch();
}

Function Manager::constant(double c) { return wrap(terminal(c)); }
Function Manager::one() { return constant(algebra_ == Algebra::Linear ? 1.0 : 0.0); }
Function Manager::zero() { return constant(algebra_ == Algebra::Linear ? 0.0 : kNegInf); }

Function Manager::variable(Var x) { return wrap(make_node(level_of(x), terminal(0.0), terminal(1.0))); }

Function Manager::literal_weight(Var x, double w_neg, double w_pos) {
  if (!(w_neg >= 0.0) || !(w_pos >= 0.0)) throw std::invalid_argument("literal weights must be nonnegative");
  if (algebra_ == Algebra::Log10) {
    w_neg = std::log10(w_neg);
    w_pos = std::log10(w_pos);
  }
  return wrap(make_node(level_of(x), terminal(w_neg), terminal(w_pos)));
}

Function Manager::from_clause(const Clause& c) {
  std::vector<Literal> lits = c.literals;
  std::sort(lits.begin(), lits.end(),
            [&](const Literal& a, const Literal& b) { return level_of(a.var) > level_of(b.var); });
  const NodeId t = one().root();
  const NodeId f = zero().root();
  if (c.kind == ClauseKind::Disjunction) {
    NodeId r = f;
    for (const Literal& l : lits) {
      std::uint32_t level = level_of(l.var);
      r = l.positive ? make_node(level, r, t) : make_node(level, t, r);
    }
    return wrap(r);
  }
  // odd: deeper literals satisfied an odd number of times.
  NodeId odd = f;
  NodeId even = t;
  for (const Literal& l : lits) {
    std::uint32_t level = level_of(l.var);
    NodeId new_odd = l.positive ? make_node(level, odd, even) : make_node(level, even, odd);
    NodeId new_even = l.positive ? make_node(level, even, odd) : make_node(level, odd, even);
    odd = new_odd;
    even = new_even;
  }
  return wrap(odd);
}

double Manager::combine(Op op, double a, double b) const {
  switch (op) {
    case Op::Mul:
      return (a == 0.0 || b == 0.0) ? 0.0 : a * b;
    case Op::Plus:
      return a + b;
    case Op::Max:
      return std::max(a, b);
    case Op::Ge:
      return a >= b ? 1.0 : 0.0;
    case Op::Gt:
      return a > b ? 1.0 : 0.0;
    default:
      throw std::logic_error("not a binary operation");
  }
}

NodeId Manager::apply(Op op, NodeId f, NodeId g) {
  const bool tf = is_terminal(f);
  const bool tg = is_terminal(g);
  if (tf && tg) return terminal(combine(op, terminal_value(f), terminal_value(g)));

  switch (op) {
    case Op::Mul:
      if ((tf && terminal_value(f) == 0.0) || (tg && terminal_value(g) == 0.0)) return terminal(0.0);
      if (tf && terminal_value(f) == 1.0) return g;
      if (tg && terminal_value(g) == 1.0) return f;
      if (f > g) std::swap(f, g);
      break;
    case Op::Plus:
      if ((tf && terminal_value(f) == kNegInf) || (tg && terminal_value(g) == kNegInf)) return terminal(kNegInf);
      if (tf && terminal_value(f) == 0.0) return g;
      if (tg && terminal_value(g) == 0.0) return f;
      if (f > g) std::swap(f, g);
      break;
    case Op::Max:
      if (f == g) return f;
      if (tf && terminal_value(f) == kNegInf) return g;
      if (tg && terminal_value(g) == kNegInf) return f;
      if (f > g) std::swap(f, g);
      break;
    case Op::Ge:
      if (f == g) return terminal(1.0);
      break;
    case Op::Gt:
      if (f == g) return terminal(0.0);
      break;
    default:
      throw std::logic_error("not a binary operation");
  }

  const CacheKey key{op, f, g};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  const std::uint32_t lf = nodes_[f].level;
  const std::uint32_t lg = nodes_[g].level;
  const std::uint32_t top = std::min(lf, lg);
  const NodeId f0 = lf == top ? nodes_[f].low : f;
  const NodeId f1 = lf == top ? nodes_[f].high : f;
  const NodeId g0 = lg == top ? nodes_[g].low : g;
  const NodeId g1 = lg == top ? nodes_[g].high : g;
  const NodeId low = apply(op, f0, g0);
  const NodeId high = apply(op, f1, g1);
  const NodeId r = make_node(top, low, high);
  cache_.emplace(key, r);
  return r;
}

NodeId Manager::restrict_rec(NodeId f, std::uint32_t level, bool b) {
  const std::uint32_t lf = nodes_[f].level;
  if (lf > level) return f;  // terminals have the largest level
  if (lf == level) return b ? nodes_[f].high : nodes_[f].low;
  const CacheKey key{b ? Op::Restrict1 : Op::Restrict0, f, level};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const NodeId r = make_node(lf, restrict_rec(nodes_[f].low, level, b), restrict_rec(nodes_[f].high, level, b));
  cache_.emplace(key, r);
  return r;
}

NodeId Manager::project_rec(Op op, NodeId f, std::uint32_t level) {
  const std::uint32_t lf = nodes_[f].level;
  const Op combine_op = op == Op::Exists ? Op::Max : Op::Plus;
  if (lf > level) return op == Op::Exists ? f : apply(Op::Plus, f, f);
  if (lf == level) return apply(combine_op, nodes_[f].low, nodes_[f].high);
  const CacheKey key{op, f, level};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const NodeId r = make_node(lf, project_rec(op, nodes_[f].low, level), project_rec(op, nodes_[f].high, level));
  cache_.emplace(key, r);
  return r;
}

Function Manager::join(const Function& f, const Function& g) {
  check_same(f, g);
  return wrap(apply(algebra_ == Algebra::Linear ? Op::Mul : Op::Plus, f.root_, g.root_));
}

Function Manager::additive_join(const Function& f, const Function& g) {
  check_same(f, g);
  if (algebra_ != Algebra::Linear) throw std::logic_error("additive operations need the linear algebra");
  return wrap(apply(Op::Plus, f.root_, g.root_));
}

Function Manager::max(const Function& f, const Function& g) {
  check_same(f, g);
  return wrap(apply(Op::Max, f.root_, g.root_));
}

Function Manager::compare(const Function& f, const Function& g, Comparison cmp) {
  check_same(f, g);
  return wrap(apply(cmp == Comparison::GreaterEqual ? Op::Ge : Op::Gt, f.root_, g.root_));
}

Function Manager::restrict(const Function& f, Var x, bool b) {
  check_same(f, f);
  return wrap(restrict_rec(f.root_, level_of(x), b));
}

Function Manager::exists_project(const Function& f, Var x) {
  check_same(f, f);
  return wrap(project_rec(Op::Exists, f.root_, level_of(x)));
}

Function Manager::exists_project(const Function& f, std::span<const Var> xs) {
  Function r = f;
  for (Var x : xs) r = exists_project(r, x);
  return r;
}

Function Manager::add_project(const Function& f, Var x) {
  check_same(f, f);
  if (algebra_ != Algebra::Linear) throw std::logic_error("additive operations need the linear algebra");
  return wrap(project_rec(Op::Sum, f.root_, level_of(x)));
}

Function Manager::add_project(const Function& f, std::span<const Var> xs) {
  Function r = f;
  for (Var x : xs) r = add_project(r, x);
  return r;
}

DerivativeSign Manager::derivative_sign(const Function& f, Var x) {
  Function hi = restrict(f, x, true);
  Function lo = restrict(f, x, false);
  return {x, compare(hi, lo, Comparison::GreaterEqual)};
}

void Manager::write_dot(std::ostream& out, const Function& f) const {
  if (f.mgr_ != this) throw ManagerMismatch();
  out << "digraph add {\n";
  absl::flat_hash_set<NodeId> seen;
  std::vector<NodeId> stack{f.root_};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) continue;
    if (is_terminal(id)) {
      out << "  n" << id << " [shape=box,label=\"" << format_real(terminal_value(id)) << "\"];\n";
      continue;
    }
    const Node& n = nodes_[id];
    out << "  n" << id << " [shape=ellipse,label=\"x" << var_at(n.level).index << "\"];\n";
    out << "  n" << id << " -> n" << n.high << ";\n";
    out << "  n" << id << " -> n" << n.low << " [style=dashed];\n";
    stack.push_back(n.low);
    stack.push_back(n.high);
  }
  out << "}\n";
}

bool Manager::check_structure() const {
  std::size_t internal = 0;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    if (n.level == kTerminalLevel) continue;
    ++internal;
    if (n.low == n.high) return false;
    if (nodes_[n.low].level <= n.level || nodes_[n.high].level <= n.level) return false;
    auto it = unique_.find(NodeKey{n.level, n.low, n.high});
    if (it == unique_.end() || it->second != id) return false;
  }
  return internal == unique_.size() && terminals_.size() == values_.size();
}

}  // namespace mpe::dd

#include "mpe/executor.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace mpe {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

dd::Algebra algebra_for(ValueMode mode) { return mode == ValueMode::Linear ? dd::Algebra::Linear : dd::Algebra::Log10; }

class Valuator {
 public:
  Valuator(dd::Manager& mgr, const Formula& formula, const ProjectJoinTree& tree, const WeightFunction& weights,
           const SolveOptions& options, bool additive, SignStack* signs, ValuationObserver* observer, SolveStats* stats)
      : mgr_(mgr),
        formula_(formula),
        tree_(tree),
        weights_(weights),
        options_(options),
        additive_(additive),
        signs_(signs),
        observer_(observer),
        stats_(stats) {}

  dd::Function run(NodeIndex v) {
    if (v >= tree_.nodes.size()) throw std::out_of_range("tree node out of range");
    if (observer_) observer_->on_enter(v);
    const PjtNode& node = tree_.nodes[v];
    if (node.is_leaf()) {
      dd::Function f = mgr_.from_clause(formula_.clauses.at(node.clause));
      track(f);
      if (observer_) observer_->on_exit(v, f);
      return f;
    }

    dd::Function f = mgr_.one();
    if (observer_) observer_->on_identity(f);
    for (NodeIndex child : node.children) {
      dd::Function h = run(child);
      dd::Function before = f;
      f = mgr_.join(f, h);
      if (observer_) observer_->on_child_joined(v, h, before, f);
    }
    track(f);
    if (observer_) observer_->on_joined(v, f);

    for (Var x : node.pi) {
      const auto& w = weights_.at(x);
      dd::Function wx = mgr_.literal_weight(x, w.neg, w.pos);
      dd::Function g = options_.fault == Fault::SkipWeightJoin ? f : mgr_.join(f, wx);
      track(g);
      dd::Function projected = additive_ ? mgr_.add_project(g, x) : mgr_.exists_project(g, x);
      if (!additive_) {
        dd::DerivativeSign sign = make_sign(g, projected, x);
        signs_->push(sign);
        if (observer_) observer_->on_push(v, x, f, sign);
      }
      dd::Function before = f;
      f = projected;
      if (observer_) observer_->on_project(v, x, before, wx, f);
    }
    if (observer_) observer_->on_exit(v, f);
    return f;
  }

 private:
  dd::DerivativeSign make_sign(const dd::Function& g, const dd::Function& projected, Var x) {
    switch (options_.fault) {
      case Fault::SignAfterProject:
        return mgr_.derivative_sign(projected, x);
      case Fault::StrictTieBreak:
        return {x, mgr_.compare(mgr_.restrict(g, x, true), mgr_.restrict(g, x, false), dd::Comparison::Greater)};
      default:
        return mgr_.derivative_sign(g, x);
    }
  }

  void track(const dd::Function& f) {
    if (stats_) stats_->peak_diagram_nodes = std::max(stats_->peak_diagram_nodes, f.size());
  }

  dd::Manager& mgr_;
  const Formula& formula_;
  const ProjectJoinTree& tree_;
  const WeightFunction& weights_;
  const SolveOptions& options_;
  bool additive_;
  SignStack* signs_;
  ValuationObserver* observer_;
  SolveStats* stats_;
};

void check_weights_cover(const Formula& formula, const WeightFunction& weights) {
  if (weights.var_count() != formula.var_count) {
    throw std::invalid_argument("weight function covers " + std::to_string(weights.var_count()) +
                                " variables, formula declares " + std::to_string(formula.var_count));
  }
}

}  // namespace

void SignStack::push(dd::DerivativeSign sign) {
  const std::uint32_t i = sign.var.index;
  if (i >= pushed_.size()) pushed_.resize(i + 1, false);
  if (pushed_[i]) throw InvariantViolation("variable " + std::to_string(i) + " pushed twice onto the sign stack");
  pushed_[i] = true;
  entries_.push_back(std::move(sign));
}

dd::DerivativeSign SignStack::pop() {
  if (entries_.empty()) throw InvariantViolation("pop from an empty sign stack");
  dd::DerivativeSign top = std::move(entries_.back());
  entries_.pop_back();
  return top;
}

bool SolveResult::has_positive_model() const {
  return mode == ValueMode::Linear ? maximum > 0.0 : maximum > -std::numeric_limits<double>::infinity();
}

dd::Function valuate(dd::Manager& mgr, const Formula& formula, const ProjectJoinTree& tree, const WeightFunction& weights,
                     NodeIndex node, SignStack& signs, const SolveOptions& options, ValuationObserver* observer,
                     SolveStats* stats) {
  return Valuator(mgr, formula, tree, weights, options, false, &signs, observer, stats).run(node);
}

namespace {

void reconstruct(SignStack& signs, Assignment& tau, ValuationObserver* observer) {
  while (!signs.empty()) {
    dd::DerivativeSign d = signs.pop();
    if (tau.contains(d.var)) throw InvariantViolation("popped sign for already assigned x" + std::to_string(d.var.index));
    for (Var y : d.condition.support()) {
      if (!tau.contains(y)) {
        throw InvariantViolation("sign for x" + std::to_string(d.var.index) + " depends on unassigned x" +
                                 std::to_string(y.index));
      }
    }
    tau.set(d.var, d.choose(tau));
    if (observer) observer->on_pop(d, tau);
  }
}

}  // namespace

SolveResult solve(const Formula& formula, const WeightFunction& weights, const ProjectJoinTree& tree,
                  const SolveOptions& options, ValuationObserver* observer) {
  check_weights_cover(formula, weights);
  SolveResult result;
  result.mode = options.mode;
  result.stats.width = width(tree);

  dd::Manager mgr(formula.var_count, algebra_for(options.mode));
  SignStack signs;
  auto start = Clock::now();
  if (observer) observer->on_start(mgr);
  dd::Function root = valuate(mgr, formula, tree, weights, tree.root, signs, options, observer, &result.stats);
  result.stats.execute_seconds = seconds_since(start);
  if (!root.is_constant()) throw InvariantViolation("root valuation is not constant");
  result.maximum = root.value();
  if (signs.size() != formula.var_count) {
    throw InvariantViolation("sign stack holds " + std::to_string(signs.size()) + " entries for " +
                             std::to_string(formula.var_count) + " variables");
  }

  start = Clock::now();
  result.maximizer = Assignment(formula.var_count);
  reconstruct(signs, result.maximizer, observer);
  result.stats.reconstruct_seconds = seconds_since(start);
  result.stats.manager_nodes = mgr.node_count();
  return result;
}

SolveResult solve_monolithic(const Formula& formula, const WeightFunction& weights, const SolveOptions& options) {
  check_weights_cover(formula, weights);
  const std::uint32_t n = formula.var_count;
  if (n > kMonolithicVarLimit) {
    throw LimitExceeded("monolithic limit exceeded: " + std::to_string(n) + " variables > " +
                        std::to_string(kMonolithicVarLimit));
  }
  SolveResult result;
  result.mode = options.mode;
  dd::Manager mgr(n, algebra_for(options.mode));
  auto start = Clock::now();

  dd::Function f = mgr.one();
  for (const Clause& c : formula.clauses) f = mgr.join(f, mgr.from_clause(c));
  for (std::uint32_t i = 1; i <= n; ++i) {
    const auto& w = weights.at(Var{i});
    f = mgr.join(f, mgr.literal_weight(Var{i}, w.neg, w.pos));
  }
  result.stats.width = static_cast<std::uint32_t>(f.support().size());

  // levels[i] = f_i over x_1..x_i
  std::vector<dd::Function> levels(n + 1);
  levels[n] = f;
  for (std::uint32_t i = n; i >= 1; --i) {
    result.stats.peak_diagram_nodes = std::max(result.stats.peak_diagram_nodes, levels[i].size());
    levels[i - 1] = mgr.exists_project(levels[i], Var{i});
  }
  if (!levels[0].is_constant()) throw InvariantViolation("fully projected function is not constant");
  result.maximum = levels[0].value();
  result.stats.execute_seconds = seconds_since(start);

  start = Clock::now();
  result.maximizer = Assignment(n);
  for (std::uint32_t i = 1; i <= n; ++i) {
    dd::DerivativeSign d = mgr.derivative_sign(levels[i], Var{i});
    result.maximizer.set(Var{i}, d.choose(result.maximizer));
  }
  result.stats.reconstruct_seconds = seconds_since(start);
  result.stats.manager_nodes = mgr.node_count();
  return result;
}

double count(const Formula& formula, const WeightFunction& weights, const ProjectJoinTree& tree) {
  check_weights_cover(formula, weights);
  dd::Manager mgr(formula.var_count, dd::Algebra::Linear);
  SolveOptions options;
  dd::Function root = Valuator(mgr, formula, tree, weights, options, true, nullptr, nullptr, nullptr).run(tree.root);
  if (!root.is_constant()) throw InvariantViolation("root valuation is not constant");
  return root.value();
}

}  // namespace mpe

// Exhaustive checking of the annotated valuation: the active multiset A and
// eliminated set E must satisfy [[A]] = exists_E([[phi]] * W) at every
// checkpoint, and every partial assignment built while popping signs must
// maximize exists_E([[phi]] * W) for the E still eliminated.

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpe/executor.hpp"

namespace mpe {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool close(double a, double b) {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  return std::fabs(a - b) <= 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

class Verifier final : public ValuationObserver {
 public:
  Verifier(const Formula& formula, const WeightFunction& weights, ValueMode mode)
      : formula_(formula), weights_(weights), mode_(mode), n_(formula.var_count), eliminated_(n_ + 1, false) {
    const std::uint64_t rows = std::uint64_t{1} << n_;
    table_.resize(rows);
    for (std::uint64_t mask = 0; mask < rows; ++mask) {
      Assignment tau = Assignment::from_mask(n_, mask);
      const bool sat = evaluate_formula(formula_, tau);
      if (mode_ == ValueMode::Linear) {
        table_[mask] = sat ? evaluate_weight(weights_, tau) : 0.0;
      } else {
        double s = 0.0;
        for (std::uint32_t i = 1; i <= n_; ++i) s += log_weight(Var{i}, tau.at(Var{i}));
        table_[mask] = sat ? s : kNegInf;
      }
    }
  }

  [[nodiscard]] bool passed() const { return failure_.empty(); }
  [[nodiscard]] const std::string& failure() const { return failure_; }
  [[nodiscard]] std::size_t checks() const { return checks_; }

  void on_start(dd::Manager& mgr) override {
    for (const Clause& c : formula_.clauses) active_.push_back(mgr.from_clause(c));
    for (std::uint32_t i = 1; i <= n_; ++i) {
      const auto& w = weights_.at(Var{i});
      active_.push_back(mgr.literal_weight(Var{i}, w.neg, w.pos));
    }
  }

  void on_enter(NodeIndex v) override { check_active("pre-condition", v); }

  void on_identity(const dd::Function& f) override { active_.push_back(f); }

  void on_child_joined(NodeIndex v, const dd::Function& child, const dd::Function& before,
                       const dd::Function& after) override {
    remove_active(child, "join", v);
    remove_active(before, "join", v);
    active_.push_back(after);
  }

  void on_joined(NodeIndex v, const dd::Function&) override { check_active("join-condition", v); }

  void on_push(NodeIndex v, Var x, const dd::Function& f, const dd::DerivativeSign& sign) override {
    if (!failure_.empty()) return;
    ++checks_;
    const std::uint64_t xbit = bit(x);
    const std::uint64_t free_mask = live_mask() & ~xbit;

    // Sign matches the derivative-sign definition on f * W_x.
    for (std::uint64_t mask = 0; mask < table_.size(); ++mask) {
      if ((mask & ~free_mask) != 0) continue;
      Assignment tau0 = Assignment::from_mask(n_, mask);
      Assignment tau1 = Assignment::from_mask(n_, mask | xbit);
      const double hi = weigh(f.evaluate(tau1), log_or_linear(x, true));
      const double lo = weigh(f.evaluate(tau0), log_or_linear(x, false));
      if (sign.choose(tau0) != (hi >= lo)) {
        fail("sign-definition", v, x, "derivative sign disagrees with f*W_x at " + describe(mask));
        return;
      }
    }

    // If tau maximizes exists_{E+x}, then tau + sign(tau) maximizes exists_E.
    ++checks_;
    std::vector<double> wider = project(free_mask);
    std::vector<double> narrower = project(free_mask | xbit);
    const double best = max_over(wider, free_mask);
    for (std::uint64_t mask = 0; mask < table_.size(); ++mask) {
      if ((mask & ~free_mask) != 0 || !close(wider[mask], best)) continue;
      const bool b = sign.choose(Assignment::from_mask(n_, mask));
      const std::uint64_t extended = b ? (mask | xbit) : mask;
      if (!close(narrower[extended], best)) {
        fail("push-maximizer", v, x, "extension of maximizer " + describe(mask) + " is not a maximizer");
        return;
      }
    }
  }

  void on_project(NodeIndex v, Var x, const dd::Function& before, const dd::Function& weight,
                  const dd::Function& after) override {
    eliminated_[x.index] = true;
    remove_active(before, "project", v);
    remove_active(weight, "project", v);
    active_.push_back(after);
    check_active("project-condition", v);
  }

  void on_exit(NodeIndex v, const dd::Function&) override { check_active("post-condition", v); }

  void on_pop(const dd::DerivativeSign& sign, const Assignment& tau) override {
    eliminated_[sign.var.index] = false;
    if (!failure_.empty()) return;
    ++checks_;
    const std::uint64_t free_mask = live_mask();
    std::vector<double> projected = project(free_mask);
    const double best = max_over(projected, free_mask);
    std::uint64_t mask = 0;
    for (std::uint32_t i = 1; i <= n_; ++i) {
      if (!eliminated_[i] && tau.at(Var{i})) mask |= bit(Var{i});
    }
    if (!close(projected[mask], best)) {
      fail("pop-maximizer", std::nullopt, sign.var, "partial assignment " + describe(mask) + " is not a maximizer");
    }
  }

 private:
  [[nodiscard]] std::uint64_t bit(Var x) const { return std::uint64_t{1} << (x.index - 1); }

  [[nodiscard]] std::uint64_t live_mask() const {
    std::uint64_t m = 0;
    for (std::uint32_t i = 1; i <= n_; ++i) {
      if (!eliminated_[i]) m |= bit(Var{i});
    }
    return m;
  }

  [[nodiscard]] double log_weight(Var x, bool b) const {
    const auto& p = weights_.at(x);
    return std::log10(b ? p.pos : p.neg);
  }

  [[nodiscard]] double log_or_linear(Var x, bool b) const {
    if (mode_ == ValueMode::Log10) return log_weight(x, b);
    const auto& p = weights_.at(x);
    return b ? p.pos : p.neg;
  }

  [[nodiscard]] double weigh(double a, double b) const {
    if (mode_ == ValueMode::Log10) return a + b;
    return (a == 0.0 || b == 0.0) ? 0.0 : a * b;
  }

  /// Table of exists over all variables outside `keep`, indexed by full masks
  /// (only entries with no bits outside `keep` are meaningful).
  [[nodiscard]] std::vector<double> project(std::uint64_t keep) const {
    std::vector<double> t = table_;
    for (std::uint32_t i = 0; i < n_; ++i) {
      const std::uint64_t b = std::uint64_t{1} << i;
      if ((keep & b) != 0) continue;
      for (std::uint64_t mask = 0; mask < t.size(); ++mask) {
        if ((mask & b) == 0) t[mask] = std::max(t[mask], t[mask | b]);
      }
    }
    return t;
  }

  [[nodiscard]] double max_over(const std::vector<double>& t, std::uint64_t keep) const {
    double best = kNegInf;
    for (std::uint64_t mask = 0; mask < t.size(); ++mask) {
      if ((mask & ~keep) == 0) best = std::max(best, t[mask]);
    }
    return best;
  }

  void check_active(const char* name, NodeIndex v) {
    if (!failure_.empty()) return;
    ++checks_;
    const std::uint64_t keep = live_mask();
    std::vector<double> expected = project(keep);
    for (std::uint64_t mask = 0; mask < table_.size(); ++mask) {
      if ((mask & ~keep) != 0) continue;
      Assignment tau = Assignment::from_mask(n_, mask);
      double product = mode_ == ValueMode::Linear ? 1.0 : 0.0;
      for (const dd::Function& a : active_) product = weigh(product, a.evaluate(tau));
      if (!close(product, expected[mask])) {
        fail(name, v, std::nullopt,
             "[[A]] = " + format_real(product) + " but exists_E = " + format_real(expected[mask]) + " at " +
                 describe(mask));
        return;
      }
    }
  }

  void remove_active(const dd::Function& f, const char* where, NodeIndex v) {
    auto it = std::find(active_.begin(), active_.end(), f);
    if (it == active_.end()) {
      fail(where, v, std::nullopt, "function missing from the active multiset");
      return;
    }
    active_.erase(it);
  }

  void fail(const std::string& name, std::optional<NodeIndex> v, std::optional<Var> x, const std::string& detail) {
    if (!failure_.empty()) return;
    failure_ = name;
    if (v) failure_ += " at node " + std::to_string(*v + 1);
    if (x) failure_ += " for x" + std::to_string(x->index);
    failure_ += ": " + detail;
  }

  [[nodiscard]] std::string describe(std::uint64_t mask) const {
    std::string s = "{";
    for (std::uint32_t i = 1; i <= n_; ++i) {
      if (eliminated_[i]) continue;
      if (s.size() > 1) s += ' ';
      s += ((mask >> (i - 1)) & 1U) ? "" : "-";
      s += std::to_string(i);
    }
    return s + "}";
  }

  const Formula& formula_;
  const WeightFunction& weights_;
  ValueMode mode_;
  std::uint32_t n_;
  std::vector<double> table_;
  std::vector<bool> eliminated_;
  std::vector<dd::Function> active_;
  std::string failure_;
  std::size_t checks_ = 0;
};

}  // namespace

VerifyReport verify_checkpoints(const Formula& formula, const WeightFunction& weights, const ProjectJoinTree& tree,
                                const SolveOptions& options, std::uint32_t limit) {
  if (formula.var_count > limit) {
    throw LimitExceeded("verification needs at most " + std::to_string(limit) + " variables, instance has " +
                        std::to_string(formula.var_count));
  }
  Verifier verifier(formula, weights, options.mode);
  VerifyReport report;
  report.result = solve(formula, weights, tree, options, &verifier);
  report.passed = verifier.passed();
  report.failure = verifier.failure();
  report.checks = verifier.checks();
  return report;
}

}  // namespace mpe

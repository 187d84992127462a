#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpe/diagram.hpp"
#include "mpe/formula.hpp"
#include "mpe/planner.hpp"

namespace mpe {

enum class ValueMode { Linear, Log10 };

/// Seeded defects for mutation testing of the checkpoints; never set in production.
enum class Fault {
  None,
  SkipWeightJoin,    // project without joining W_x
  SignAfterProject,  // record the sign of the already-projected function
  StrictTieBreak,    // ties choose x -> 0
};

struct SolveOptions {
  ValueMode mode = ValueMode::Linear;
  Fault fault = Fault::None;
};

/// Thrown when an internal invariant fails (CLI exit code 1).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Thrown when an enumeration or monolithic size guard is exceeded (CLI exit code 3).
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// LIFO of derivative signs; every variable is pushed at most once.
class SignStack {
 public:
  void push(dd::DerivativeSign sign);
  dd::DerivativeSign pop();
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] const std::vector<dd::DerivativeSign>& entries() const { return entries_; }

 private:
  std::vector<dd::DerivativeSign> entries_;
  std::vector<bool> pushed_;  // by variable index
};

struct SolveStats {
  std::uint32_t width = 0;
  std::size_t peak_diagram_nodes = 0;  // largest intermediate function
  std::size_t manager_nodes = 0;       // nodes allocated by the manager
  double execute_seconds = 0.0;
  double reconstruct_seconds = 0.0;
};

struct SolveResult {
  ValueMode mode = ValueMode::Linear;
  /// The maximum of [[phi]] * W; log10 of it in Log10 mode.
  double maximum = 0.0;
  Assignment maximizer;
  SolveStats stats;

  /// False when no assignment has nonzero weight (maximum 0, or -inf in log mode).
  [[nodiscard]] bool has_positive_model() const;
};

/// Receives the annotated events of the valuation, in the order of the
/// checked algorithm. Default implementations do nothing.
class ValuationObserver {
 public:
  virtual ~ValuationObserver() = default;
  virtual void on_start(dd::Manager&) {}
  virtual void on_enter(NodeIndex) {}
  virtual void on_identity(const dd::Function&) {}
  virtual void on_child_joined(NodeIndex, const dd::Function& child, const dd::Function& before, const dd::Function& after) {}
  virtual void on_joined(NodeIndex, const dd::Function&) {}
  /// `f` is the node's function before W_x is joined.
  virtual void on_push(NodeIndex, Var, const dd::Function& f, const dd::DerivativeSign&) {}
  virtual void on_project(NodeIndex, Var, const dd::Function& before, const dd::Function& weight, const dd::Function& after) {}
  virtual void on_exit(NodeIndex, const dd::Function&) {}
  virtual void on_pop(const dd::DerivativeSign&, const Assignment&) {}
};

/// W-valuation of `node`; pushes one derivative sign per projected variable.
dd::Function valuate(dd::Manager& mgr, const Formula& formula, const ProjectJoinTree& tree, const WeightFunction& weights,
                     NodeIndex node, SignStack& signs, const SolveOptions& options = {},
                     ValuationObserver* observer = nullptr, SolveStats* stats = nullptr);

/// Maximum and a maximizer of [[phi]] * W by valuating `tree`.
SolveResult solve(const Formula& formula, const WeightFunction& weights, const ProjectJoinTree& tree,
                  const SolveOptions& options = {}, ValuationObserver* observer = nullptr);

inline constexpr std::uint32_t kMonolithicVarLimit = 24;

/// Joins everything into one diagram, then eliminates x_n..x_1. Throws
/// LimitExceeded above kMonolithicVarLimit variables.
SolveResult solve_monolithic(const Formula& formula, const WeightFunction& weights, const SolveOptions& options = {});

/// Weighted model count by additive projection; linear values only.
double count(const Formula& formula, const WeightFunction& weights, const ProjectJoinTree& tree);

inline constexpr std::uint32_t kVerifyVarLimit = 16;

struct VerifyReport {
  bool passed = true;
  std::string failure;  // first failing checkpoint
  std::size_t checks = 0;
  SolveResult result;
};

/// Runs solve() while checking every annotated assertion of the valuation and
/// reconstruction by exhaustive enumeration. Throws LimitExceeded above `limit`.
VerifyReport verify_checkpoints(const Formula& formula, const WeightFunction& weights, const ProjectJoinTree& tree,
                                const SolveOptions& options = {}, std::uint32_t limit = kVerifyVarLimit);

}  // namespace mpe

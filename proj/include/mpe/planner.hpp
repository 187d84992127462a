#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mpe/formula.hpp"

namespace mpe {

/// A permutation of 1..var_count.
using EliminationOrder = std::vector<Var>;

enum class Heuristic { MinDegree, MinFill, Lexicographic };

/// Greedy order on the primal graph (variables adjacent iff they share a
/// clause). Ties go to the smallest index.
EliminationOrder heuristic_order(const Formula& formula, Heuristic heuristic);

using NodeIndex = std::uint32_t;

struct PjtNode {
  enum class Kind { Leaf, Internal };

  Kind kind = Kind::Internal;
  std::uint32_t clause = 0;        // leaves: index into Formula::clauses
  std::vector<Var> pi;             // internal: projected variables, ascending
  std::vector<NodeIndex> children; // internal: construction order
  std::vector<Var> vars;           // cached vars(v), ascending

  [[nodiscard]] bool is_leaf() const { return kind == Kind::Leaf; }
};

/// Project-join tree. Nodes 0..clause_count-1 are the leaves, node i holding
/// clause i; internal nodes follow.
struct ProjectJoinTree {
  std::uint32_t var_count = 0;
  std::uint32_t clause_count = 0;
  std::vector<PjtNode> nodes;
  NodeIndex root = 0;

  /// Recomputes every node's `vars` bottom-up from the formula.
  void refresh_vars(const Formula& formula);
};

/// Bucket elimination along `order`: one internal node per variable that
/// occurs in some clause, then a root joining what is left. Variables that
/// occur in no clause are projected at the root. Throws
/// std::invalid_argument if order is not a permutation of 1..var_count.
ProjectJoinTree plan(const Formula& formula, const EliminationOrder& order);

struct Violation {
  enum class Kind { Structure, Bijection, Partition, Descendant };
  Kind kind;
  std::optional<NodeIndex> node;
  std::optional<Var> var;
  std::optional<std::uint32_t> clause;
  std::string message;
};

/// Checks tree shape, the leaf/clause bijection, that the pi sets partition
/// 1..var_count, and that every clause mentioning a projected variable sits
/// below the projecting node. Returns the first violation found.
std::optional<Violation> validate(const ProjectJoinTree& tree, const Formula& formula);

/// max over leaves of |vars(v)| and over internal nodes of |vars(v) u pi(v)|.
std::uint32_t width(const ProjectJoinTree& tree);

/// `.jt` text: `p jt <vars> <clauses> <nodes>` then one line per internal node
/// `<id> <child ids...> e <vars...>`, ids 1-based, leaves 1..clause_count.
void write_jt(std::ostream& out, const ProjectJoinTree& tree);
/// Throws ParseError.
ProjectJoinTree read_jt(std::istream& in, const Formula& formula);

}  // namespace mpe

#include "mpe/planner.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace mpe {

namespace {

std::vector<Var> sorted_union_minus(const std::vector<const std::vector<Var>*>& sets, const std::vector<Var>& minus) {
  std::vector<Var> out;
  for (const auto* s : sets) out.insert(out.end(), s->begin(), s->end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase_if(out, [&](Var x) { return std::binary_search(minus.begin(), minus.end(), x); });
  return out;
}

bool is_permutation_of_vars(const EliminationOrder& order, std::uint32_t var_count) {
  if (order.size() != var_count) return false;
  std::vector<bool> seen(var_count + 1, false);
  for (Var x : order) {
    if (x.index == 0 || x.index > var_count || seen[x.index]) return false;
    seen[x.index] = true;
  }
  return true;
}

/// Primal graph with an adjacency bit matrix for O(1) edge tests.
class EliminationGraph {
 public:
  explicit EliminationGraph(const Formula& f)
      : n_(f.var_count), adj_(n_ + 1), matrix_(n_ + 1, std::vector<bool>(n_ + 1, false)), alive_(n_ + 1, true) {
    alive_[0] = false;
    for (const Clause& c : f.clauses) {
      for (std::size_t i = 0; i < c.literals.size(); ++i) {
        for (std::size_t j = i + 1; j < c.literals.size(); ++j) add_edge(c.literals[i].var.index, c.literals[j].var.index);
      }
    }
  }

  [[nodiscard]] std::size_t degree(std::uint32_t v) const { return adj_[v].size(); }

  [[nodiscard]] std::size_t fill(std::uint32_t v) const {
    std::size_t missing = 0;
    for (auto a = adj_[v].begin(); a != adj_[v].end(); ++a) {
      for (auto b = std::next(a); b != adj_[v].end(); ++b) {
        if (!matrix_[*a][*b]) ++missing;
      }
    }
    return missing;
  }

  void eliminate(std::uint32_t v) {
    std::vector<std::uint32_t> nbrs(adj_[v].begin(), adj_[v].end());
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) add_edge(nbrs[i], nbrs[j]);
    }
    for (std::uint32_t u : nbrs) {
      adj_[u].erase(v);
      matrix_[u][v] = matrix_[v][u] = false;
    }
    adj_[v].clear();
    alive_[v] = false;
  }

  [[nodiscard]] bool alive(std::uint32_t v) const { return alive_[v]; }

 private:
  void add_edge(std::uint32_t a, std::uint32_t b) {
    if (a == b || matrix_[a][b]) return;
    matrix_[a][b] = matrix_[b][a] = true;
    adj_[a].insert(b);
    adj_[b].insert(a);
  }

  std::uint32_t n_;
  std::vector<std::set<std::uint32_t>> adj_;
  std::vector<std::vector<bool>> matrix_;
  std::vector<bool> alive_;
};

}  // namespace

EliminationOrder heuristic_order(const Formula& formula, Heuristic heuristic) {
  const std::uint32_t n = formula.var_count;
  EliminationOrder order;
  order.reserve(n);
  if (heuristic == Heuristic::Lexicographic) {
    for (std::uint32_t i = 1; i <= n; ++i) order.push_back(Var{i});
    return order;
  }
  EliminationGraph g(formula);
  for (std::uint32_t step = 0; step < n; ++step) {
    std::uint32_t best = 0;
    std::size_t best_score = std::numeric_limits<std::size_t>::max();
    for (std::uint32_t v = 1; v <= n; ++v) {
      if (!g.alive(v)) continue;
      std::size_t score = heuristic == Heuristic::MinDegree ? g.degree(v) : g.fill(v);
      if (score < best_score) {
        best_score = score;
        best = v;
      }
    }
    g.eliminate(best);
    order.push_back(Var{best});
  }
  return order;
}

void ProjectJoinTree::refresh_vars(const Formula& formula) {
  // Post-order from the root; unreachable nodes keep whatever they had.
  std::vector<std::pair<NodeIndex, bool>> stack{{root, false}};
  std::vector<bool> done(nodes.size(), false);
  while (!stack.empty()) {
    auto [v, expanded] = stack.back();
    stack.pop_back();
    if (v >= nodes.size() || done[v]) continue;
    PjtNode& node = nodes[v];
    if (node.is_leaf()) {
      node.vars = formula.clauses.at(node.clause).vars();
      done[v] = true;
      continue;
    }
    if (!expanded) {
      stack.push_back({v, true});
      for (NodeIndex c : node.children) stack.push_back({c, false});
      continue;
    }
    std::vector<const std::vector<Var>*> parts;
    for (NodeIndex c : node.children) {
      if (c < nodes.size()) parts.push_back(&nodes[c].vars);
    }
    node.vars = sorted_union_minus(parts, node.pi);
    done[v] = true;
  }
}

ProjectJoinTree plan(const Formula& formula, const EliminationOrder& order) {
  if (!is_permutation_of_vars(order, formula.var_count)) {
    throw std::invalid_argument("elimination order is not a permutation of 1.." + std::to_string(formula.var_count));
  }
  ProjectJoinTree tree;
  tree.var_count = formula.var_count;
  tree.clause_count = static_cast<std::uint32_t>(formula.clauses.size());

  std::vector<NodeIndex> active;
  for (std::uint32_t i = 0; i < tree.clause_count; ++i) {
    PjtNode leaf;
    leaf.kind = PjtNode::Kind::Leaf;
    leaf.clause = i;
    leaf.vars = formula.clauses[i].vars();
    tree.nodes.push_back(std::move(leaf));
    active.push_back(i);
  }

  std::vector<Var> unused;
  for (Var x : order) {
    std::vector<NodeIndex> bucket;
    std::vector<NodeIndex> rest;
    for (NodeIndex v : active) {
      const auto& vs = tree.nodes[v].vars;
      (std::binary_search(vs.begin(), vs.end(), x) ? bucket : rest).push_back(v);
    }
    if (bucket.empty()) {
      unused.push_back(x);
      continue;
    }
    PjtNode node;
    node.pi = {x};
    node.children = bucket;
    std::vector<const std::vector<Var>*> parts;
    for (NodeIndex c : bucket) parts.push_back(&tree.nodes[c].vars);
    node.vars = sorted_union_minus(parts, node.pi);
    rest.push_back(static_cast<NodeIndex>(tree.nodes.size()));
    tree.nodes.push_back(std::move(node));
    active = std::move(rest);
  }

  std::sort(unused.begin(), unused.end());
  if (active.size() == 1 && !tree.nodes[active.front()].is_leaf()) {
    tree.root = active.front();
    auto& pi = tree.nodes[tree.root].pi;
    pi.insert(pi.end(), unused.begin(), unused.end());
    std::sort(pi.begin(), pi.end());
  } else {
    PjtNode root;
    root.pi = unused;
    root.children = active;
    tree.root = static_cast<NodeIndex>(tree.nodes.size());
    tree.nodes.push_back(std::move(root));
  }
  tree.refresh_vars(formula);
  return tree;
}

std::optional<Violation> validate(const ProjectJoinTree& tree, const Formula& formula) {
  using K = Violation::Kind;
  const auto node_count = static_cast<NodeIndex>(tree.nodes.size());
  const auto clause_count = static_cast<std::uint32_t>(formula.clauses.size());
  auto fail = [](K kind, std::string msg) { return Violation{kind, std::nullopt, std::nullopt, std::nullopt, std::move(msg)}; };

  if (tree.root >= node_count) return fail(K::Structure, "root index out of range");
  if (tree.nodes[tree.root].is_leaf()) return fail(K::Structure, "root is a leaf");

  std::vector<std::uint32_t> parents(node_count, 0);
  for (NodeIndex v = 0; v < node_count; ++v) {
    const PjtNode& node = tree.nodes[v];
    if (node.is_leaf() && !node.children.empty()) {
      Violation r = fail(K::Structure, "leaf has children");
      r.node = v;
      return r;
    }
    if (!node.is_leaf() && node.children.empty() && v != tree.root) {
      Violation r = fail(K::Structure, "non-root internal node without children");
      r.node = v;
      return r;
    }
    for (NodeIndex c : node.children) {
      if (c >= node_count) {
        Violation r = fail(K::Structure, "child index out of range");
        r.node = v;
        return r;
      }
      ++parents[c];
    }
  }
  for (NodeIndex v = 0; v < node_count; ++v) {
    const std::uint32_t expected = v == tree.root ? 0 : 1;
    if (parents[v] != expected) {
      Violation r = fail(K::Structure, "node has " + std::to_string(parents[v]) + " parents");
      r.node = v;
      return r;
    }
  }

  // Euler tour; with one parent per node, full reachability means a tree.
  std::vector<std::uint32_t> tin(node_count, 0), tout(node_count, 0);
  std::uint32_t clock = 0;
  std::vector<std::pair<NodeIndex, std::size_t>> stack{{tree.root, 0}};
  tin[tree.root] = clock++;
  std::uint32_t visited = 1;
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < tree.nodes[v].children.size()) {
      NodeIndex c = tree.nodes[v].children[next++];
      tin[c] = clock++;
      ++visited;
      stack.push_back({c, 0});
    } else {
      tout[v] = clock;
      stack.pop_back();
    }
  }
  if (visited != node_count) return fail(K::Structure, "some nodes are unreachable from the root");

  std::vector<std::optional<NodeIndex>> leaf_of(clause_count);
  std::uint32_t leaves = 0;
  for (NodeIndex v = 0; v < node_count; ++v) {
    const PjtNode& node = tree.nodes[v];
    if (!node.is_leaf()) continue;
    ++leaves;
    if (node.clause >= clause_count || leaf_of[node.clause]) {
      Violation r = fail(K::Bijection, "leaf clause index missing or repeated");
      r.node = v;
      r.clause = node.clause;
      return r;
    }
    leaf_of[node.clause] = v;
  }
  for (std::uint32_t c = 0; c < clause_count; ++c) {
    if (!leaf_of[c]) {
      Violation r = fail(K::Bijection, "clause " + std::to_string(c + 1) + " has no leaf");
      r.clause = c;
      return r;
    }
  }
  if (leaves != clause_count) return fail(K::Bijection, "leaf count differs from clause count");

  std::vector<std::optional<NodeIndex>> projector(formula.var_count + 1);
  for (NodeIndex v = 0; v < node_count; ++v) {
    const PjtNode& node = tree.nodes[v];
    if (node.is_leaf()) continue;
    for (Var x : node.pi) {
      if (x.index == 0 || x.index > formula.var_count || projector[x.index]) {
        Violation r = fail(K::Partition, "variable " + std::to_string(x.index) + " out of range or projected twice");
        r.node = v;
        r.var = x;
        return r;
      }
      projector[x.index] = v;
    }
  }
  for (std::uint32_t i = 1; i <= formula.var_count; ++i) {
    if (!projector[i]) {
      Violation r = fail(K::Partition, "variable " + std::to_string(i) + " is never projected");
      r.var = Var{i};
      return r;
    }
  }

  for (std::uint32_t c = 0; c < clause_count; ++c) {
    const NodeIndex leaf = *leaf_of[c];
    for (const Literal& l : formula.clauses[c].literals) {
      const NodeIndex v = *projector[l.var.index];
      if (!(tin[v] <= tin[leaf] && tin[leaf] < tout[v])) {
        Violation r = fail(K::Descendant, "clause " + std::to_string(c + 1) + " mentions x" +
                                              std::to_string(l.var.index) + " but is not below its projecting node");
        r.node = v;
        r.var = l.var;
        r.clause = c;
        return r;
      }
    }
  }
  return std::nullopt;
}

std::uint32_t width(const ProjectJoinTree& tree) {
  std::size_t w = 0;
  for (const PjtNode& node : tree.nodes) {
    std::size_t here = node.vars.size();
    if (!node.is_leaf()) {
      for (Var x : node.pi) {
        if (!std::binary_search(node.vars.begin(), node.vars.end(), x)) ++here;
      }
    }
    w = std::max(w, here);
  }
  return static_cast<std::uint32_t>(w);
}

void write_jt(std::ostream& out, const ProjectJoinTree& tree) {
  out << "p jt " << tree.var_count << ' ' << tree.clause_count << ' ' << tree.nodes.size() << '\n';
  auto emit = [&](NodeIndex v) {
    const PjtNode& node = tree.nodes[v];
    out << v + 1;
    for (NodeIndex c : node.children) out << ' ' << c + 1;
    out << " e";
    for (Var x : node.pi) out << ' ' << x.index;
    out << '\n';
  };
  for (NodeIndex v = 0; v < tree.nodes.size(); ++v) {
    if (!tree.nodes[v].is_leaf() && v != tree.root) emit(v);
  }
  emit(tree.root);
}

ProjectJoinTree read_jt(std::istream& in, const Formula& formula) {
  ProjectJoinTree tree;
  bool have_header = false;
  std::size_t line_no = 0;
  std::string line;
  std::vector<bool> defined;
  NodeIndex last = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head == "c") continue;
    if (head == "p") {
      std::string kind;
      std::uint64_t vars = 0, clauses = 0, nodes = 0;
      if (have_header || !(ls >> kind >> vars >> clauses >> nodes) || kind != "jt") {
        throw ParseError(line_no, "malformed header, expected 'p jt <vars> <clauses> <nodes>'");
      }
      if (vars != formula.var_count || clauses != formula.clauses.size() || nodes < clauses) {
        throw ParseError(line_no, "tree header does not match the formula");
      }
      tree.var_count = static_cast<std::uint32_t>(vars);
      tree.clause_count = static_cast<std::uint32_t>(clauses);
      tree.nodes.resize(nodes);
      defined.assign(nodes, false);
      for (std::uint32_t i = 0; i < clauses; ++i) {
        tree.nodes[i].kind = PjtNode::Kind::Leaf;
        tree.nodes[i].clause = i;
        defined[i] = true;
      }
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "node line before header");
    std::uint64_t id = 0;
    try {
      id = std::stoull(head);
    } catch (const std::exception&) {
      throw ParseError(line_no, "non-numeric node id '" + head + "'");
    }
    if (id <= tree.clause_count || id > tree.nodes.size() || defined[id - 1]) {
      throw ParseError(line_no, "invalid or repeated internal node id " + head);
    }
    PjtNode& node = tree.nodes[id - 1];
    node.kind = PjtNode::Kind::Internal;
    std::string tok;
    bool in_pi = false;
    while (ls >> tok) {
      if (tok == "e") {
        in_pi = true;
        continue;
      }
      std::uint64_t value = 0;
      try {
        value = std::stoull(tok);
      } catch (const std::exception&) {
        throw ParseError(line_no, "non-numeric token '" + tok + "'");
      }
      if (in_pi) {
        if (value == 0 || value > tree.var_count) throw ParseError(line_no, "variable out of range");
        node.pi.push_back(Var{static_cast<std::uint32_t>(value)});
      } else {
        if (value == 0 || value > tree.nodes.size()) throw ParseError(line_no, "child id out of range");
        node.children.push_back(static_cast<NodeIndex>(value - 1));
      }
    }
    if (!in_pi) throw ParseError(line_no, "missing 'e' separator");
    std::sort(node.pi.begin(), node.pi.end());
    defined[id - 1] = true;
    last = static_cast<NodeIndex>(id - 1);
  }
  if (!have_header) throw ParseError(line_no, "missing header");
  if (std::find(defined.begin(), defined.end(), false) != defined.end()) {
    throw ParseError(line_no, "some internal nodes are never defined");
  }
  tree.root = last;
  tree.refresh_vars(formula);
  return tree;
}

}  // namespace mpe

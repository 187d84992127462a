#include "mpe/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mpe/benchgen.hpp"
#include "mpe/executor.hpp"
#include "mpe/formula.hpp"
#include "mpe/oracle.hpp"
#include "mpe/planner.hpp"
#include "mpe/wcnf.hpp"

namespace mpe::cli {

namespace {

enum class Format { Human, Machine };

struct RunConfig {
  std::string input;
  Heuristic heuristic = Heuristic::MinFill;
  ValueMode mode = ValueMode::Linear;
  bool verify = false;
  std::uint64_t seed = 1;
  Format format = Format::Human;
  std::string out_path;
  bool require_sat = false;
  double wcnf_scale = 10000.0;
  std::string dot_path;

  // gen
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::uint32_t m = 0;
  std::uint32_t max_len = 3;
  double xor_prob = 0.5;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void print_assignment(std::ostream& out, const Assignment& tau) {
  out << 'v';
  for (std::uint32_t i = 1; i <= tau.var_count(); ++i) out << ' ' << (tau.at(Var{i}) ? "" : "-") << i;
  out << " 0\n";
}

/// Remembers the largest intermediate diagram and renders it before the manager dies.
class DotCapture final : public ValuationObserver {
 public:
  DotCapture(NodeIndex root, std::ostream& out) : root_(root), out_(out) {}

  void on_start(dd::Manager& mgr) override { mgr_ = &mgr; }
  void on_joined(NodeIndex, const dd::Function& f) override { consider(f); }
  void on_project(NodeIndex, Var, const dd::Function&, const dd::Function&, const dd::Function& after) override {
    consider(after);
  }
  void on_exit(NodeIndex v, const dd::Function& f) override {
    consider(f);
    if (v == root_ && mgr_ != nullptr) mgr_->write_dot(out_, best_);
  }

 private:
  void consider(const dd::Function& f) {
    const std::size_t s = f.size();
    if (!best_.valid() || s > best_size_) {
      best_ = f;
      best_size_ = s;
    }
  }

  NodeIndex root_;
  std::ostream& out_;
  dd::Manager* mgr_ = nullptr;
  dd::Function best_;
  std::size_t best_size_ = 0;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  return f;
}

ProjectJoinTree plan_for(const Formula& formula, Heuristic h) { return plan(formula, heuristic_order(formula, h)); }

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = read_formula_file(cfg.input);
  const ProjectJoinTree tree = plan_for(inst.formula, cfg.heuristic);
  SolveOptions options;
  options.mode = cfg.mode;

  SolveResult result;
  std::string verify_line;
  if (cfg.verify) {
    VerifyReport report = verify_checkpoints(inst.formula, inst.weights, tree, options);
    if (!report.passed) throw InvariantViolation("checkpoint failed: " + report.failure);
    verify_line = "c verify passed " + std::to_string(report.checks) + " checkpoints\n";
    result = std::move(report.result);
  } else if (!cfg.dot_path.empty()) {
    std::ofstream dot = open_output(cfg.dot_path);
    DotCapture capture(tree.root, dot);
    result = solve(inst.formula, inst.weights, tree, options, &capture);
  } else {
    result = solve(inst.formula, inst.weights, tree, options);
  }

  if (cfg.format == Format::Human) {
    out << "c width " << result.stats.width << '\n';
    out << "c peak diagram nodes " << result.stats.peak_diagram_nodes << '\n';
    out << "c manager nodes " << result.stats.manager_nodes << '\n';
    out << "c execute seconds " << result.stats.execute_seconds << '\n';
    out << "c reconstruct seconds " << result.stats.reconstruct_seconds << '\n';
    out << verify_line;
    if (!result.has_positive_model()) out << "c no model attains nonzero weight\n";
  }
  out << "s MAXIMUM " << format_real(result.maximum) << '\n';
  print_assignment(out, result.maximizer);
  return kOk;
}

int cmd_plan(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = read_formula_file(cfg.input);
  const ProjectJoinTree tree = plan_for(inst.formula, cfg.heuristic);
  if (auto violation = validate(tree, inst.formula)) throw InvariantViolation("planner produced an invalid tree: " + violation->message);
  if (cfg.out_path.empty()) {
    write_jt(out, tree);
  } else {
    std::ofstream f = open_output(cfg.out_path);
    write_jt(f, tree);
  }
  out << "c width " << width(tree) << '\n';
  return kOk;
}

bool has_positive_model(const Instance& inst) {
  SolveOptions options;
  options.mode = ValueMode::Log10;
  return solve(inst.formula, inst.weights, plan_for(inst.formula, Heuristic::MinFill), options).has_positive_model();
}

int cmd_gen(const RunConfig& cfg, bool chain, std::ostream& out, std::ostream& err) {
  constexpr int kMaxRerolls = 1000;
  std::uint64_t seed = cfg.seed;
  Instance inst;
  for (int attempt = 0;; ++attempt) {
    inst = chain ? gen_chain({cfg.n, cfg.k, seed}) : gen_random(cfg.n, cfg.m, cfg.max_len, cfg.xor_prob, seed);
    if (!cfg.require_sat || has_positive_model(inst)) break;
    if (attempt + 1 >= kMaxRerolls) throw LimitExceeded("no satisfiable instance within " + std::to_string(kMaxRerolls) + " seeds");
    ++seed;
  }
  if (seed != cfg.seed) err << "c re-rolled to seed " << seed << '\n';

  std::string path = cfg.out_path;
  if (!path.empty() && chain && std::filesystem::is_directory(path)) {
    path = (std::filesystem::path(path) / chain_filename({cfg.n, cfg.k, seed})).string();
  }
  if (path.empty()) {
    print_formula(out, inst);
  } else {
    std::ofstream f = open_output(path);
    print_formula(f, inst);
    out << "c wrote " << path << '\n';
  }
  return kOk;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = read_formula_file(cfg.input);
  const OracleResult r = brute_solve(inst.formula, inst.weights);
  if (cfg.format == Format::Human) {
    out << "c maximizers " << r.maximizers.size() << '\n';
    if (r.maximum == 0.0) out << "c no model attains nonzero weight\n";
  }
  out << "c WMC " << format_real(r.wmc) << '\n';
  double maximum = r.maximum;
  if (cfg.mode == ValueMode::Log10) maximum = std::log10(maximum);
  out << "s MAXIMUM " << format_real(maximum) << '\n';
  print_assignment(out, Assignment::from_mask(r.var_count, r.maximizers.front()));
  return kOk;
}

int cmd_export_wcnf(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = read_formula_file(cfg.input);
  const WcnfInstance wcnf = export_wcnf(inst, cfg.wcnf_scale);
  if (wcnf.zero_weight_units > 0 && !has_positive_model(inst)) {
    throw UsageError("refusing export: no model attains nonzero weight");
  }
  if (cfg.out_path.empty()) {
    write_wcnf(out, wcnf);
  } else {
    std::ofstream f = open_output(cfg.out_path);
    write_wcnf(f, wcnf);
    out << "c wrote " << cfg.out_path << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Exact Boolean MPE on XOR-CNF by project-join-tree dynamic programming", "xmpe"};
  app.require_subcommand(1);

  const std::map<std::string, Heuristic> heuristics{
      {"min-degree", Heuristic::MinDegree}, {"min-fill", Heuristic::MinFill}, {"lex", Heuristic::Lexicographic}};
  const std::map<std::string, ValueMode> modes{{"linear", ValueMode::Linear}, {"log10", ValueMode::Log10}};
  const std::map<std::string, Format> formats{{"human", Format::Human}, {"machine", Format::Machine}};

  auto add_heuristic = [&](CLI::App* sub) {
    sub->add_option("--plan-heuristic", cfg.heuristic, "elimination-order heuristic")
        ->transform(CLI::CheckedTransformer(heuristics, CLI::ignore_case));
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "human or machine")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  };

  auto* solve_cmd = app.add_subcommand("solve", "maximum and maximizer of an instance");
  solve_cmd->add_option("input", cfg.input, "instance file")->required();
  add_heuristic(solve_cmd);
  solve_cmd->add_option("--mode", cfg.mode, "linear or log10 values")->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  solve_cmd->add_flag("--verify", cfg.verify, "check every valuation checkpoint by enumeration");
  solve_cmd->add_option("--dot", cfg.dot_path, "write the largest intermediate diagram as Graphviz");
  add_format(solve_cmd);

  auto* plan_cmd = app.add_subcommand("plan", "build a project-join tree (.jt)");
  plan_cmd->add_option("input", cfg.input, "instance file")->required();
  add_heuristic(plan_cmd);
  plan_cmd->add_option("--out", cfg.out_path, "write the tree here instead of stdout");

  auto* gen_cmd = app.add_subcommand("gen", "generate instances");
  gen_cmd->require_subcommand(1);
  auto* chain_cmd = gen_cmd->add_subcommand("chain", "random chain formula");
  chain_cmd->add_option("--n", cfg.n, "variables")->required();
  chain_cmd->add_option("--k", cfg.k, "clause length")->required();
  auto* random_cmd = gen_cmd->add_subcommand("random", "random XOR-CNF");
  random_cmd->add_option("--n", cfg.n, "variables")->required();
  random_cmd->add_option("--m", cfg.m, "clauses")->required();
  random_cmd->add_option("--max-len", cfg.max_len, "maximum clause length");
  random_cmd->add_option("--xor-prob", cfg.xor_prob, "probability of an XOR clause");
  for (auto* sub : {chain_cmd, random_cmd}) {
    sub->add_option("--seed", cfg.seed, "generator seed");
    sub->add_option("--out", cfg.out_path, "output file (or directory, for chains)");
    sub->add_flag("--require-sat", cfg.require_sat, "re-roll seeds until some model has nonzero weight");
  }

  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive reference answer (at most 20 variables)");
  oracle_cmd->add_option("input", cfg.input, "instance file")->required();
  oracle_cmd->add_option("--mode", cfg.mode, "linear or log10 values")->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  add_format(oracle_cmd);

  auto* wcnf_cmd = app.add_subcommand("export-wcnf", "weighted partial MaxSAT encoding");
  wcnf_cmd->add_option("input", cfg.input, "instance file")->required();
  wcnf_cmd->add_option("--wcnf-scale", cfg.wcnf_scale, "soft weight = round(scale * ln w)");
  wcnf_cmd->add_option("--out", cfg.out_path, "output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(cfg, out);
    if (plan_cmd->parsed()) return cmd_plan(cfg, out);
    if (chain_cmd->parsed()) return cmd_gen(cfg, true, out, err);
    if (random_cmd->parsed()) return cmd_gen(cfg, false, out, err);
    if (oracle_cmd->parsed()) return cmd_oracle(cfg, out);
    if (wcnf_cmd->parsed()) return cmd_export_wcnf(cfg, out);
  } catch (const ParseError& e) {
    err << "error: " << cfg.input << ": " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const LimitExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kResource;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace mpe::cli

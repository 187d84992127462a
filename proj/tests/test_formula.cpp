#include <doctest.h>

#include <random>
#include <sstream>

#include "mpe/diagram.hpp"
#include "mpe/formula.hpp"
#include "support.hpp"

using namespace mpe;
using mpe::test::disj;
using mpe::test::xor_of;

namespace {

Assignment assign(std::uint32_t n, std::initializer_list<std::pair<std::uint32_t, bool>> values) {
  Assignment tau(n);
  for (auto [i, b] : values) tau.set(Var{i}, b);
  return tau;
}

int parse_error_line(std::string_view text) {
  try {
    (void)parse_formula(text);
  } catch (const ParseError& e) {
    return static_cast<int>(e.line());
  }
  return -1;
}

}  // namespace

TEST_CASE("minimal file parses with unit weights") {
  Instance inst = parse_formula("p cnf 2 1\n1 -2 0\n");
  CHECK(inst.formula.var_count == 2);
  REQUIRE(inst.formula.clauses.size() == 1);
  CHECK(inst.formula.clauses[0] == disj({1, -2}));
  for (std::uint32_t i = 1; i <= 2; ++i) CHECK(inst.weights.at(Var{i}) == WeightFunction::Pair{1.0, 1.0});
}

TEST_CASE("five-clause example formula") {
  Instance inst = test::example_instance();
  CHECK(inst.formula.var_count == 6);
  REQUIRE(inst.formula.clauses.size() == 5);
  int xors = 0;
  for (const Clause& c : inst.formula.clauses) xors += c.kind == ClauseKind::Xor ? 1 : 0;
  CHECK(xors == 2);
  CHECK(inst.formula.clauses[0] == xor_of({2, -4}));
  CHECK(inst.formula.clauses[4] == disj({-3, -5}));
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(parse_error_line("p cnf 1 1\n1 0\nw 1 -0.5 1\n") == 3);
  try {
    (void)parse_formula("p cnf 1 1\n1 0\nw 1 -0.5 1\n");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("negative weight") != std::string::npos);
  }
  CHECK(parse_error_line("p cnf 2 1\n1 3 0\n") == 2);
  CHECK(parse_error_line("p cnf 2 1\n1 -1 0\n") == 2);
  CHECK(parse_error_line("p cnf 2 1\n1 a 0\n") == 2);
  CHECK(parse_error_line("c comment\np dnf 2 1\n1 0\n") == 2);
  CHECK(parse_error_line("1 0\n") == 1);
  CHECK(parse_error_line("p cnf 2 1\n1 2\n") == 2);
  CHECK(parse_error_line("p cnf 2 1\n0\n") == 2);
  CHECK(parse_error_line("p cnf 2 1\nw 1 x\n1 0\n") == 2);
  CHECK(parse_error_line("p cnf 2 2\n1 0\n") > 0);
  CHECK(parse_error_line("p cnf 2 1\np cnf 2 1\n1 0\n") == 2);
}

TEST_CASE("weight lines: polarity, last occurrence wins, anywhere after header") {
  Instance inst = parse_formula("p cnf 2 1\nw 1 5\nw -1 7\n1 2 0\nw 1 9\nw -2 0 0\n");
  CHECK(inst.weights.at(Var{1}) == WeightFunction::Pair{7.0, 9.0});
  CHECK(inst.weights.at(Var{2}) == WeightFunction::Pair{0.0, 1.0});
}

TEST_CASE("xor clause prefixes") {
  CHECK(parse_formula("p cnf 2 1\nx 1 -2 0\n").formula.clauses[0] == xor_of({1, -2}));
  CHECK(parse_formula("p cnf 2 1\nx1 -2 0\n").formula.clauses[0] == xor_of({1, -2}));
}

TEST_CASE("empty formula is legal") {
  Instance inst = parse_formula("p cnf 0 0\n");
  CHECK(inst.formula.var_count == 0);
  CHECK(inst.formula.clauses.empty());
}

TEST_CASE("evaluate_clause") {
  CHECK(evaluate_clause(xor_of({2, -4}), assign(4, {{2, true}, {4, true}})));
  CHECK_FALSE(evaluate_clause(disj({1, 6}), assign(6, {{1, false}, {6, false}})));
  CHECK_FALSE(evaluate_clause(xor_of({3, 5}), assign(5, {{3, true}, {5, true}})));
  CHECK_THROWS_AS((void)evaluate_clause(disj({1, 2}), assign(2, {{1, false}})), std::out_of_range);
}

TEST_CASE("evaluate_weight") {
  WeightFunction ones(3);
  CHECK(evaluate_weight(ones, Assignment::from_mask(3, 5)) == 1.0);

  WeightFunction w(2);
  w.set(Var{1}, 10, 100);
  w.set(Var{2}, 100, 10);
  CHECK(evaluate_weight(w, assign(2, {{1, true}, {2, true}})) == 100.0 * 10.0);

  WeightFunction z(1);
  z.set(Var{1}, 0, 5);
  CHECK(evaluate_weight(z, assign(1, {{1, false}})) == 0.0);

  CHECK_THROWS_AS(w.set(Var{1}, -1, 1), std::invalid_argument);
}

TEST_CASE("evaluate_weight is multiplicative over disjoint variable sets") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Instance inst = test::random_instance(rng, 10);
    const std::uint32_t n = inst.formula.var_count;
    const std::uint64_t mask = rng() & ((std::uint64_t{1} << n) - 1);
    const std::uint32_t split = static_cast<std::uint32_t>(rng() % (n + 1));
    WeightFunction lo(n);
    WeightFunction hi(n);
    for (std::uint32_t i = 1; i <= n; ++i) {
      const auto& p = inst.weights.at(Var{i});
      (i <= split ? lo : hi).set(Var{i}, p.neg, p.pos);
    }
    const Assignment tau = Assignment::from_mask(n, mask);
    CHECK(evaluate_weight(inst.weights, tau) == doctest::Approx(evaluate_weight(lo, tau) * evaluate_weight(hi, tau)));
  }
}

TEST_CASE("print then parse is the identity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Instance inst = test::random_instance(rng, 12);
    CHECK(parse_formula(print_formula(inst)) == inst);
  }
  Instance ex = test::example_instance();
  ex.weights.set(Var{3}, 0.125, 1e-300);
  CHECK(parse_formula(print_formula(ex)) == ex);
}

TEST_CASE("printer emits clauses in input order and sorted weights") {
  Instance inst = parse_formula("p cnf 2 2\nx 2 -1 0\n1 0\nw 2 3\nw -1 0.5\nw -2 4\n");
  CHECK(print_formula(inst) == "p cnf 2 2\nx 2 -1 0\n1 0\nw -1 0.5\nw -2 4\nw 2 3\n");
}

TEST_CASE("evaluate_clause agrees with the diagram of the clause") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::uint32_t>(1 + rng() % 8);
    Instance inst = gen_random(n, 1, n, 0.5, rng());
    const Clause& c = inst.formula.clauses.at(0);
    dd::Manager mgr(n);
    dd::Function f = mgr.from_clause(c);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const Assignment tau = Assignment::from_mask(n, mask);
      CHECK(f.evaluate(tau) == (evaluate_clause(c, tau) ? 1.0 : 0.0));
      CHECK(evaluate_clause(c, tau) == test::satisfies(c, mask));
    }
  }
}

TEST_CASE("assignment bookkeeping") {
  Assignment tau(3);
  CHECK(tau.bound_count() == 0);
  tau.set(Var{2}, true);
  CHECK(tau.contains(Var{2}));
  CHECK_FALSE(tau.contains(Var{1}));
  CHECK_THROWS_AS((void)tau.at(Var{1}), std::out_of_range);
  tau.erase(Var{2});
  CHECK_FALSE(tau.is_total());
  CHECK(Assignment::from_mask(3, 6).mask() == 6);
}

TEST_CASE("format_real") {
  CHECK(format_real(100.0) == "100");
  CHECK(format_real(0.0) == "0");
  CHECK(format_real(-0.0) == "0");
  CHECK(format_real(0.125) == "0.125");
  CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("missing file") { CHECK_THROWS_AS(read_formula_file("/nonexistent/file.xcnf"), IoError); }

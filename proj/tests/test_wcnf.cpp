#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mpe/wcnf.hpp"
#include "support.hpp"

using namespace mpe;
using mpe::test::disj;
using mpe::test::xor_of;

namespace {

Instance make(std::uint32_t n, std::vector<Clause> clauses) {
  Instance inst;
  inst.formula = Formula{n, std::move(clauses)};
  inst.weights = WeightFunction(n);
  return inst;
}

std::vector<std::uint64_t> soft_weights(const WcnfInstance& w) {
  std::vector<std::uint64_t> out;
  for (const WcnfClause& c : w.clauses) {
    if (!c.hard) out.push_back(c.weight);
  }
  return out;
}

}  // namespace

TEST_CASE("unit clause with weights 10 and 100") {
  Instance inst = make(1, {disj({1})});
  inst.weights.set(Var{1}, 10, 100);
  WcnfInstance w = export_wcnf(inst);
  CHECK(w.original_hard == 1);
  CHECK(w.soft == 2);
  CHECK(w.soft_offset == 0);
  CHECK(w.var_count == 1);
  REQUIRE(w.clauses.size() == 3);
  CHECK(w.clauses[0].hard);
  CHECK(w.clauses[0].literals == std::vector<std::int64_t>{1});
  // positive literal first
  CHECK(w.clauses[1].literals == std::vector<std::int64_t>{1});
  CHECK(w.clauses[1].weight == static_cast<std::uint64_t>(std::llround(10000 * std::log(100.0))));
  CHECK(w.clauses[2].literals == std::vector<std::int64_t>{-1});
  CHECK(w.clauses[2].weight == static_cast<std::uint64_t>(std::llround(10000 * std::log(10.0))));
  CHECK(w.top == w.clauses[1].weight + w.clauses[2].weight + 1);

  std::ostringstream out;
  write_wcnf(out, w);
  CHECK(out.str().find("p wcnf 1 3 " + std::to_string(w.top) + "\n") != std::string::npos);
  CHECK(out.str().find(std::to_string(w.top) + " 1 0\n") != std::string::npos);
}

TEST_CASE("equal weights give equal soft weights and every model is optimal") {
  Instance inst = make(3, {disj({1, 2}), xor_of({2, 3})});
  for (std::uint32_t i = 1; i <= 3; ++i) inst.weights.set(Var{i}, 4, 4);
  WcnfInstance w = export_wcnf(inst);
  auto ws = soft_weights(w);
  CHECK(std::adjacent_find(ws.begin(), ws.end(), std::not_equal_to<>()) == ws.end());
  test::WcnfOptimum o = test::wcnf_optimum(w);
  const auto truth = test::enumerate(inst);
  CHECK(o.argmax == truth.argmax);
}

TEST_CASE("weights below one are shifted to stay positive") {
  Instance inst = make(2, {disj({1, 2})});
  inst.weights.set(Var{1}, 0.5, 0.25);
  WcnfInstance w = export_wcnf(inst);
  CHECK(w.soft_offset > 0);
  for (std::uint64_t s : soft_weights(w)) CHECK(s >= 1);
  test::WcnfOptimum o = test::wcnf_optimum(w);
  REQUIRE(o.argmax.size() == 1);
  CHECK(o.argmax[0] == 0b10);
}

TEST_CASE("zero weights become hard exclusions") {
  Instance inst = make(2, {disj({1, 2})});
  inst.weights.set(Var{2}, 0, 3);
  WcnfInstance w = export_wcnf(inst);
  CHECK(w.zero_weight_units == 1);
  CHECK(w.soft == 3);
  CHECK(test::hard_extendable(w, 0b10));
  CHECK_FALSE(test::hard_extendable(w, 0b01));
}

TEST_CASE("xor encodings have exactly the xor's models") {
  for (std::uint32_t k = 1; k <= 6; ++k) {
    Clause c{ClauseKind::Xor, {}};
    for (std::uint32_t i = 1; i <= k; ++i) c.literals.push_back(Literal{Var{i}, i % 2 == 1});
    Instance inst = make(k, {c});
    WcnfInstance w = export_wcnf(inst);
    CHECK(w.var_count == k + (k >= 3 ? k - 3 : 0));
    std::size_t hard = 0;
    for (const WcnfClause& h : w.clauses) hard += h.hard ? 1 : 0;
    CHECK(hard == (k == 1 ? 1 : k == 2 ? 2 : 4 * (k - 2)));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      CHECK(test::hard_extendable(w, mask) == test::satisfies(c, mask));
    }
  }
}

TEST_CASE("optimum of the export is the solver's maximizer") {
  std::mt19937_64 rng(73);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Instance inst = test::random_instance(rng, 8);
    for (std::uint32_t i = 1; i <= inst.formula.var_count; ++i) {
      inst.weights.set(Var{i}, 0.5 + static_cast<double>(rng() % 100000) / 1000.0,
                       0.5 + static_cast<double>(rng() % 100000) / 1000.0);
    }
    const auto truth = test::enumerate(inst);
    if (truth.maximum == 0.0 || truth.argmax.size() != 1) continue;
    WcnfInstance w = export_wcnf(inst);
    CHECK(w.original_hard == inst.formula.clauses.size());
    CHECK(w.soft == 2 * inst.formula.var_count);
    test::WcnfOptimum o = test::wcnf_optimum(w);
    REQUIRE(o.feasible);
    if (o.argmax.size() == 1) {
      CHECK(o.argmax[0] == truth.argmax[0]);
      ++compared;
    }
  }
  CHECK(compared > 10);
}

#include "mpe/benchgen.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mpe {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("below(0)");
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  std::uint64_t r = engine_();
  while (r < threshold) r = engine_();
  return r % n;
}

Instance gen_chain(const ChainSpec& spec) {
  if (spec.k < 1 || spec.k > spec.n) throw std::invalid_argument("chain needs 1 <= k <= n");
  Rng rng(spec.seed);
  Instance inst;
  inst.formula.var_count = spec.n;
  inst.weights = WeightFunction(spec.n);
  for (std::uint32_t i = 1; i + spec.k - 1 <= spec.n; ++i) {
    Clause c;
    c.kind = rng.coin() ? ClauseKind::Xor : ClauseKind::Disjunction;
    for (std::uint32_t j = 0; j < spec.k; ++j) c.literals.push_back({Var{i + j}, rng.coin()});
    inst.formula.clauses.push_back(std::move(c));
  }
  for (std::uint32_t x = 1; x <= spec.n; ++x) {
    if (rng.coin()) {
      inst.weights.set(Var{x}, 10.0, 100.0);
    } else {
      inst.weights.set(Var{x}, 100.0, 10.0);
    }
  }
  return inst;
}

Instance gen_random(std::uint32_t n, std::uint32_t m, std::uint32_t max_len, double xor_prob, std::uint64_t seed) {
  if (m > 0 && (max_len < 1 || max_len > n)) throw std::invalid_argument("random instance needs 1 <= max_len <= n");
  if (!(xor_prob >= 0.0 && xor_prob <= 1.0)) throw std::invalid_argument("xor_prob must lie in [0, 1]");
  Rng rng(seed);
  Instance inst;
  inst.formula.var_count = n;
  inst.weights = WeightFunction(n);
  std::vector<std::uint32_t> pool(n);
  for (std::uint32_t c = 0; c < m; ++c) {
    Clause clause;
    const auto len = static_cast<std::uint32_t>(1 + rng.below(max_len));
    clause.kind = rng.unit() < xor_prob ? ClauseKind::Xor : ClauseKind::Disjunction;
    std::iota(pool.begin(), pool.end(), 1U);
    for (std::uint32_t j = 0; j < len; ++j) {
      const auto pick = j + static_cast<std::uint32_t>(rng.below(n - j));
      std::swap(pool[j], pool[pick]);
      clause.literals.push_back({Var{pool[j]}, rng.coin()});
    }
    inst.formula.clauses.push_back(std::move(clause));
  }
  for (std::uint32_t x = 1; x <= n; ++x) {
    const double neg = std::round(rng.unit() * 1000.0) / 1000.0;
    const double pos = std::round(rng.unit() * 1000.0) / 1000.0;
    inst.weights.set(Var{x}, neg, pos);
  }
  return inst;
}

std::string chain_filename(const ChainSpec& spec) {
  return "chain_n" + std::to_string(spec.n) + "_k" + std::to_string(spec.k) + "_s" + std::to_string(spec.seed) + ".xcnf";
}

}  // namespace mpe

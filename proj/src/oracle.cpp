#include "mpe/oracle.hpp"

#include <algorithm>

#include "mpe/executor.hpp"

namespace mpe {

bool OracleResult::is_maximizer(const Assignment& tau) const {
  if (tau.var_count() != var_count || !tau.is_total()) return false;
  return std::binary_search(maximizers.begin(), maximizers.end(), tau.mask());
}

OracleResult brute_solve(const Formula& formula, const WeightFunction& weights, std::uint32_t limit) {
  const std::uint32_t n = formula.var_count;
  if (n > limit) {
    throw LimitExceeded("oracle limit exceeded: " + std::to_string(n) + " variables > " + std::to_string(limit));
  }
  OracleResult r;
  r.var_count = n;
  const std::uint64_t rows = std::uint64_t{1} << n;
  std::vector<double> values(rows);
  for (std::uint64_t mask = 0; mask < rows; ++mask) {
    Assignment tau = Assignment::from_mask(n, mask);
    values[mask] = evaluate_formula(formula, tau) ? evaluate_weight(weights, tau) : 0.0;
    r.wmc += values[mask];
    r.maximum = std::max(r.maximum, values[mask]);
  }
  // Products taken in another order may round differently; ties are relative to 1e-12.
  const double floor = r.maximum - kTieTolerance * r.maximum;
  for (std::uint64_t mask = 0; mask < rows; ++mask) {
    if (values[mask] >= floor) r.maximizers.push_back(mask);
  }
  return r;
}

}  // namespace mpe

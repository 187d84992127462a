#pragma once

#include <cstdint>
#include <vector>

#include "mpe/formula.hpp"

namespace mpe {

inline constexpr std::uint32_t kOracleVarLimit = 20;
inline constexpr double kTieTolerance = 1e-12;

/// Exhaustive reference answers. Assignments are bitmasks, bit i-1 for x_i.
struct OracleResult {
  std::uint32_t var_count = 0;
  double maximum = 0.0;
  std::vector<std::uint64_t> maximizers;  // ascending
  double wmc = 0.0;

  [[nodiscard]] bool is_maximizer(const Assignment& tau) const;
};

/// Enumerates all 2^n assignments. Throws LimitExceeded above `limit`.
OracleResult brute_solve(const Formula& formula, const WeightFunction& weights, std::uint32_t limit = kOracleVarLimit);

}  // namespace mpe

#pragma once

// Random instance generators. All randomness comes from std::mt19937_64
// seeded with the given seed; integers in [0, n) are drawn by rejecting raw
// outputs below 2^64 mod n and taking the remainder, coins are the top bit of
// one output, and unit reals are (output >> 11) * 2^-53. Output is therefore
// identical across platforms and standard libraries.

#include <cstdint>
#include <random>
#include <string>

#include "mpe/formula.hpp"

namespace mpe {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  bool coin() { return (engine_() >> 63) != 0; }
  std::uint64_t below(std::uint64_t n);
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct ChainSpec {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::uint64_t seed = 0;
};

/// n-k+1 clauses, clause i over x_i..x_{i+k-1}; each clause XOR or
/// disjunction by coin, each polarity by coin, each W_x = (10, 100) or
/// (100, 10) by coin. Throws std::invalid_argument unless 1 <= k <= n.
Instance gen_chain(const ChainSpec& spec);

/// m clauses of length uniform in [1, max_len] over distinct uniform
/// variables, XOR with probability xor_prob; weights uniform in [0, 1]
/// rounded to 3 decimals.
Instance gen_random(std::uint32_t n, std::uint32_t m, std::uint32_t max_len, double xor_prob, std::uint64_t seed);

/// chain_n<n>_k<k>_s<seed>.xcnf
std::string chain_filename(const ChainSpec& spec);

}  // namespace mpe

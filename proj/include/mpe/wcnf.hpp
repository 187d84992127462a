#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mpe/formula.hpp"

namespace mpe {

struct WcnfClause {
  bool hard = true;
  std::uint64_t weight = 0;  // soft clauses only; hard clauses are written with `top`
  std::vector<std::int64_t> literals;
};

/// Weighted partial MaxSAT encoding of Boolean MPE. Every clause of the
/// formula is hard (XOR clauses Tseitin-encoded over fresh variables after
/// the originals); every literal l with weight w > 0 is a soft unit with
/// weight round(scale * ln w) + soft_offset; a zero-weight literal l becomes
/// the hard unit -l instead.
struct WcnfInstance {
  std::uint32_t var_count = 0;  // originals plus auxiliaries
  std::uint64_t top = 1;
  std::vector<WcnfClause> clauses;

  std::uint32_t original_vars = 0;
  std::uint64_t original_hard = 0;  // formula clauses, before Tseitin expansion
  std::uint64_t soft = 0;
  std::uint64_t zero_weight_units = 0;
  /// Added to every soft weight so all are >= 1; 0 when none would be below 1.
  std::int64_t soft_offset = 0;
};

WcnfInstance export_wcnf(const Instance& instance, double scale = 10000.0);

/// Old-style `p wcnf <vars> <clauses> <top>` text.
void write_wcnf(std::ostream& out, const WcnfInstance& wcnf);

}  // namespace mpe

#include "mpe/wcnf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace mpe {

namespace {

void add_hard(WcnfInstance& out, std::vector<std::int64_t> lits) { out.clauses.push_back({true, 0, std::move(lits)}); }

/// a xor b xor c = 1: forbid the four even-parity assignments.
void add_odd_parity3(WcnfInstance& out, std::int64_t a, std::int64_t b, std::int64_t c) {
  for (int bits = 0; bits < 8; ++bits) {
    const bool va = (bits & 1) != 0;
    const bool vb = (bits & 2) != 0;
    const bool vc = (bits & 4) != 0;
    if ((va ^ vb ^ vc) != 0) continue;
    add_hard(out, {va ? -a : a, vb ? -b : b, vc ? -c : c});
  }
}

/// Chain of 3-ary parity constraints: t1 = l1^l2, t_i = t_{i-1}^l_{i+1},
/// and finally t_{k-3} ^ l_{k-1} ^ l_k = 1.
void encode_xor(WcnfInstance& out, const Clause& c) {
  std::vector<std::int64_t> l;
  for (const Literal& lit : c.literals) l.push_back(lit.dimacs());
  const std::size_t k = l.size();
  if (k == 1) {
    add_hard(out, {l[0]});
    return;
  }
  if (k == 2) {
    add_hard(out, {l[0], l[1]});
    add_hard(out, {-l[0], -l[1]});
    return;
  }
  std::int64_t acc = l[0];
  for (std::size_t i = 1; i + 2 < k; ++i) {
    const auto t = static_cast<std::int64_t>(++out.var_count);
    add_odd_parity3(out, acc, l[i], -t);  // t = acc ^ l[i]
    acc = t;
  }
  add_odd_parity3(out, acc, l[k - 2], l[k - 1]);
}

}  // namespace

WcnfInstance export_wcnf(const Instance& instance, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("wcnf scale must be positive");
  const Formula& f = instance.formula;
  WcnfInstance out;
  out.var_count = f.var_count;
  out.original_vars = f.var_count;
  out.original_hard = f.clauses.size();

  for (const Clause& c : f.clauses) {
    if (c.kind == ClauseKind::Disjunction) {
      std::vector<std::int64_t> lits;
      for (const Literal& l : c.literals) lits.push_back(l.dimacs());
      add_hard(out, std::move(lits));
    } else {
      encode_xor(out, c);
    }
  }

  struct Soft {
    std::int64_t lit;
    std::int64_t raw;
  };
  std::vector<Soft> softs;
  for (std::uint32_t i = 1; i <= f.var_count; ++i) {
    for (bool positive : {true, false}) {
      const Literal l{Var{i}, positive};
      const double w = instance.weights.at(l);
      if (w == 0.0) {
        add_hard(out, {-l.dimacs()});
        ++out.zero_weight_units;
      } else {
        softs.push_back({l.dimacs(), std::llround(scale * std::log(w))});
      }
    }
  }
  std::int64_t lowest = std::numeric_limits<std::int64_t>::max();
  for (const Soft& s : softs) lowest = std::min(lowest, s.raw);
  out.soft_offset = (!softs.empty() && lowest < 1) ? 1 - lowest : 0;
  std::uint64_t total = 0;
  for (const Soft& s : softs) {
    const auto w = static_cast<std::uint64_t>(s.raw + out.soft_offset);
    out.clauses.push_back({false, w, {s.lit}});
    total += w;
  }
  out.soft = softs.size();
  out.top = total + 1;
  return out;
}

void write_wcnf(std::ostream& out, const WcnfInstance& wcnf) {
  out << "c original vars " << wcnf.original_vars << " hard " << wcnf.original_hard << " soft " << wcnf.soft << '\n';
  out << "c soft offset " << wcnf.soft_offset << '\n';
  out << "p wcnf " << wcnf.var_count << ' ' << wcnf.clauses.size() << ' ' << wcnf.top << '\n';
  for (const WcnfClause& c : wcnf.clauses) {
    out << (c.hard ? wcnf.top : c.weight);
    for (std::int64_t l : c.literals) out << ' ' << l;
    out << " 0\n";
  }
}

}  // namespace mpe

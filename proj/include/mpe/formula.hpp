#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mpe {

/// 1-based variable index.
struct Var {
  std::uint32_t index = 0;

  friend constexpr bool operator==(Var, Var) = default;
  friend constexpr auto operator<=>(Var, Var) = default;
};

struct Literal {
  Var var;
  bool positive = true;

  /// DIMACS encoding: +index or -index.
  [[nodiscard]] constexpr std::int64_t dimacs() const {
    return positive ? std::int64_t{var.index} : -std::int64_t{var.index};
  }
  [[nodiscard]] constexpr Literal operator~() const { return {var, !positive}; }

  friend constexpr bool operator==(Literal, Literal) = default;
};

enum class ClauseKind { Disjunction, Xor };

struct Clause {
  ClauseKind kind = ClauseKind::Disjunction;
  std::vector<Literal> literals;

  [[nodiscard]] std::vector<Var> vars() const;

  friend bool operator==(const Clause&, const Clause&) = default;
};

/// XOR-CNF formula over variables 1..var_count. An empty clause list is the
/// constant-true function over the declared variables.
struct Formula {
  std::uint32_t var_count = 0;
  std::vector<Clause> clauses;

  friend bool operator==(const Formula&, const Formula&) = default;
};

/// Literal-weight function W = prod_x W_x, with W_x = (w_neg, w_pos).
/// Unlisted variables weigh (1, 1).
class WeightFunction {
 public:
  struct Pair {
    double neg = 1.0;
    double pos = 1.0;
    friend bool operator==(const Pair&, const Pair&) = default;
  };

  WeightFunction() = default;
  explicit WeightFunction(std::uint32_t var_count) : pairs_(var_count) {}

  [[nodiscard]] std::uint32_t var_count() const { return static_cast<std::uint32_t>(pairs_.size()); }

  /// Throws std::invalid_argument on negative or non-finite weights.
  void set(Var x, double w_neg, double w_pos);
  void set(Literal l, double w);

  [[nodiscard]] const Pair& at(Var x) const;
  [[nodiscard]] double at(Literal l) const {
    const Pair& p = at(l.var);
    return l.positive ? p.pos : p.neg;
  }

  friend bool operator==(const WeightFunction&, const WeightFunction&) = default;

 private:
  std::vector<Pair> pairs_;  // index x - 1
};

/// Partial truth assignment over 1..var_count.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::uint32_t var_count) : values_(var_count, kUnbound) {}

  /// Total assignment from a bitmask (bit i-1 holds variable i).
  static Assignment from_mask(std::uint32_t var_count, std::uint64_t mask);

  [[nodiscard]] std::uint32_t var_count() const { return static_cast<std::uint32_t>(values_.size()); }
  [[nodiscard]] bool contains(Var x) const;
  /// Throws std::out_of_range when x is unbound.
  [[nodiscard]] bool at(Var x) const;
  void set(Var x, bool value);
  void erase(Var x);

  [[nodiscard]] std::uint32_t bound_count() const;
  [[nodiscard]] bool is_total() const { return bound_count() == var_count(); }
  /// Bitmask of bound-true variables; requires var_count <= 64.
  [[nodiscard]] std::uint64_t mask() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  static constexpr std::int8_t kUnbound = -1;
  std::vector<std::int8_t> values_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Instance {
  Formula formula;
  WeightFunction weights;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Reads the DIMACS-style XOR-CNF format with `x` clause prefix and
/// `w <lit> <weight>` weight lines. Throws ParseError.
Instance parse_formula(std::istream& in);
Instance parse_formula(std::string_view text);
/// Throws IoError when the file cannot be opened.
Instance read_formula_file(const std::string& path);

/// Clauses in input order, then weight lines for every literal whose weight
/// is not 1, sorted by variable then polarity (negative first).
void print_formula(std::ostream& out, const Instance& instance);
std::string print_formula(const Instance& instance);

/// Throws std::out_of_range if some variable of c is unbound.
bool evaluate_clause(const Clause& c, const Assignment& tau);
bool evaluate_formula(const Formula& f, const Assignment& tau);

/// prod_x W_x(tau(x)) over the variables of W; tau must bind them all.
double evaluate_weight(const WeightFunction& w, const Assignment& tau);

/// Shortest round-trip decimal form of a double ("100", "0.125", "-inf").
std::string format_real(double value);

}  // namespace mpe

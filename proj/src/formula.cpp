#include "mpe/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace mpe {

std::vector<Var> Clause::vars() const {
  std::vector<Var> out;
  out.reserve(literals.size());
  for (const Literal& l : literals) out.push_back(l.var);
  std::sort(out.begin(), out.end());
  return out;
}

void WeightFunction::set(Var x, double w_neg, double w_pos) {
  if (x.index == 0 || x.index > pairs_.size()) {
    throw std::out_of_range("weight for variable " + std::to_string(x.index) + " out of range");
  }
  if (!(w_neg >= 0.0) || !(w_pos >= 0.0) || !std::isfinite(w_neg) || !std::isfinite(w_pos)) {
    throw std::invalid_argument("weights must be finite and nonnegative");
  }
  pairs_[x.index - 1] = {w_neg, w_pos};
}

void WeightFunction::set(Literal l, double w) {
  Pair p = at(l.var);
  (l.positive ? p.pos : p.neg) = w;
  set(l.var, p.neg, p.pos);
}

const WeightFunction::Pair& WeightFunction::at(Var x) const {
  if (x.index == 0 || x.index > pairs_.size()) {
    throw std::out_of_range("weight for variable " + std::to_string(x.index) + " out of range");
  }
  return pairs_[x.index - 1];
}

Assignment Assignment::from_mask(std::uint32_t var_count, std::uint64_t mask) {
  Assignment tau(var_count);
  for (std::uint32_t i = 0; i < var_count; ++i) tau.values_[i] = static_cast<std::int8_t>((mask >> i) & 1U);
  return tau;
}

bool Assignment::contains(Var x) const {
  return x.index >= 1 && x.index <= values_.size() && values_[x.index - 1] != kUnbound;
}

bool Assignment::at(Var x) const {
  if (!contains(x)) throw std::out_of_range("variable " + std::to_string(x.index) + " is unbound");
  return values_[x.index - 1] != 0;
}

void Assignment::set(Var x, bool value) {
  if (x.index == 0 || x.index > values_.size()) {
    throw std::out_of_range("variable " + std::to_string(x.index) + " out of range");
  }
  values_[x.index - 1] = value ? 1 : 0;
}

void Assignment::erase(Var x) {
  if (x.index >= 1 && x.index <= values_.size()) values_[x.index - 1] = kUnbound;
}

std::uint32_t Assignment::bound_count() const {
  return static_cast<std::uint32_t>(
      std::count_if(values_.begin(), values_.end(), [](std::int8_t v) { return v != kUnbound; }));
}

std::uint64_t Assignment::mask() const {
  if (values_.size() > 64) throw std::length_error("assignment mask needs at most 64 variables");
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == 1) m |= std::uint64_t{1} << i;
  }
  return m;
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
std::optional<T> parse_number(std::string_view token) {
  T value{};
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

class Parser {
 public:
  Instance run(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto tokens = split_tokens(line);
      if (tokens.empty() || tokens[0] == "c") continue;
      if (tokens[0] == "p") {
        header(tokens);
      } else if (tokens[0] == "w") {
        weight(tokens);
      } else {
        clause(tokens);
      }
    }
    if (!have_header_) throw ParseError(line_no_, "missing header 'p cnf <vars> <clauses>'");
    if (inst_.formula.clauses.size() != declared_clauses_) {
      throw ParseError(line_no_, "header declares " + std::to_string(declared_clauses_) + " clauses, found " +
                                     std::to_string(inst_.formula.clauses.size()));
    }
    return std::move(inst_);
  }

 private:
  void header(const std::vector<std::string_view>& t) {
    if (have_header_) throw ParseError(line_no_, "duplicate header");
    if (t.size() != 4 || t[1] != "cnf") throw ParseError(line_no_, "malformed header, expected 'p cnf <vars> <clauses>'");
    auto n = parse_number<std::uint32_t>(t[2]);
    auto m = parse_number<std::uint64_t>(t[3]);
    if (!n || !m) throw ParseError(line_no_, "malformed header, non-numeric count");
    inst_.formula.var_count = *n;
    inst_.weights = WeightFunction(*n);
    declared_clauses_ = *m;
    have_header_ = true;
  }

  Literal literal(std::string_view token) const {
    auto v = parse_number<std::int64_t>(token);
    if (!v) throw ParseError(line_no_, "non-numeric token '" + std::string(token) + "'");
    if (*v == 0) throw ParseError(line_no_, "literal 0 where a literal was expected");
    std::int64_t index = *v < 0 ? -*v : *v;
    if (index > inst_.formula.var_count) {
      throw ParseError(line_no_, "literal " + std::string(token) + " out of range (var_count " +
                                     std::to_string(inst_.formula.var_count) + ")");
    }
    return {Var{static_cast<std::uint32_t>(index)}, *v > 0};
  }

  void weight(const std::vector<std::string_view>& t) {
    if (!have_header_) throw ParseError(line_no_, "weight line before header");
    if (t.size() < 3) throw ParseError(line_no_, "malformed weight line, expected 'w <lit> <weight>'");
    Literal l = literal(t[1]);
    auto w = parse_number<double>(t[2]);
    if (!w || !std::isfinite(*w)) throw ParseError(line_no_, "non-numeric weight '" + std::string(t[2]) + "'");
    if (*w < 0.0) throw ParseError(line_no_, "negative weight " + std::string(t[2]));
    if (t.size() > 4 || (t.size() == 4 && t[3] != "0")) {
      throw ParseError(line_no_, "malformed weight line, expected 'w <lit> <weight>'");
    }
    inst_.weights.set(l, *w);
  }

  void clause(std::vector<std::string_view> t) {
    if (!have_header_) throw ParseError(line_no_, "clause before header");
    Clause c;
    if (t[0] == "x") {
      c.kind = ClauseKind::Xor;
      t.erase(t.begin());
    } else if (t[0].size() > 1 && t[0][0] == 'x') {
      c.kind = ClauseKind::Xor;
      t[0].remove_prefix(1);
    }
    if (t.empty() || t.back() != "0") throw ParseError(line_no_, "clause not terminated by 0");
    t.pop_back();
    if (t.empty()) throw ParseError(line_no_, "empty clause");
    std::vector<bool> seen(inst_.formula.var_count + 1, false);
    for (std::string_view token : t) {
      Literal l = literal(token);
      if (seen[l.var.index]) {
        throw ParseError(line_no_, "variable " + std::to_string(l.var.index) + " occurs twice in a clause");
      }
      seen[l.var.index] = true;
      c.literals.push_back(l);
    }
    if (inst_.formula.clauses.size() >= declared_clauses_) {
      throw ParseError(line_no_, "more clauses than declared in header");
    }
    inst_.formula.clauses.push_back(std::move(c));
  }

  Instance inst_;
  std::size_t line_no_ = 0;
  std::uint64_t declared_clauses_ = 0;
  bool have_header_ = false;
};

}  // namespace

Instance parse_formula(std::istream& in) { return Parser{}.run(in); }

Instance parse_formula(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_formula(in);
}

Instance read_formula_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  return parse_formula(in);
}

std::string format_real(double value) {
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
  if (value == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void print_formula(std::ostream& out, const Instance& instance) {
  const Formula& f = instance.formula;
  out << "p cnf " << f.var_count << ' ' << f.clauses.size() << '\n';
  for (const Clause& c : f.clauses) {
    if (c.kind == ClauseKind::Xor) out << "x ";
    for (const Literal& l : c.literals) out << l.dimacs() << ' ';
    out << "0\n";
  }
  for (std::uint32_t i = 1; i <= instance.weights.var_count(); ++i) {
    const auto& p = instance.weights.at(Var{i});
    if (p.neg != 1.0) out << "w -" << i << ' ' << format_real(p.neg) << '\n';
    if (p.pos != 1.0) out << "w " << i << ' ' << format_real(p.pos) << '\n';
  }
}

std::string print_formula(const Instance& instance) {
  std::ostringstream out;
  print_formula(out, instance);
  return out.str();
}

bool evaluate_clause(const Clause& c, const Assignment& tau) {
  if (c.kind == ClauseKind::Disjunction) {
    bool any = false;
    for (const Literal& l : c.literals) any = (tau.at(l.var) == l.positive) || any;
    return any;
  }
  bool parity = false;
  for (const Literal& l : c.literals) parity ^= (tau.at(l.var) == l.positive);
  return parity;
}

bool evaluate_formula(const Formula& f, const Assignment& tau) {
  return std::all_of(f.clauses.begin(), f.clauses.end(), [&](const Clause& c) { return evaluate_clause(c, tau); });
}

double evaluate_weight(const WeightFunction& w, const Assignment& tau) {
  double product = 1.0;
  for (std::uint32_t i = 1; i <= w.var_count(); ++i) {
    const auto& p = w.at(Var{i});
    product *= tau.at(Var{i}) ? p.pos : p.neg;
  }
  return product;
}

}  // namespace mpe

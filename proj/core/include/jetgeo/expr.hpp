#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "jetgeo/grid.hpp"

namespace jetgeo {

/// Malformed expression text. `offset()` is the byte offset of the problem.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(std::string name, std::size_t offset)
      : ParseError("unknown identifier '" + name + "'", offset), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Evaluation left the real domain (division by zero, log or sqrt of an
/// out-of-range argument).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable scalar expression over coordinates x1..xn.
///
/// Nodes are shared between expressions, so copying is cheap and derivative
/// trees reuse the subtrees of their source. Construction folds constants and
/// drops trivial identities (x+0, 1*x, x^1, ...); there is no other
/// simplification.
class Expr {
 public:
  enum class Op { kConst, kVar, kNeg, kAdd, kSub, kMul, kDiv, kPow, kSin, kCos, kTan, kExp, kLog, kSqrt };

  Expr(double value = 0.0);  // NOLINT(google-explicit-constructor)

  /// Coordinate x_{index+1}; index is 0-based.
  static Expr variable(int index);
  static Expr unary(Op fn, const Expr& arg);

  Op op() const;
  double constant() const;  ///< value of a kConst node
  int variable_index() const;
  const Expr& lhs() const;  ///< argument of unary nodes, left operand of binary
  const Expr& rhs() const;

  bool is_constant() const { return op() == Op::kConst; }
  bool is_constant(double v) const { return is_constant() && constant() == v; }

  /// Stable identity of the underlying node (used for memoisation).
  const void* id() const { return node_.get(); }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, const Expr& exponent);

  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Op op, Expr a, Expr b);

  std::shared_ptr<const Node> node_;
};

Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr tan(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);

using ExprVector = Grid<Expr, 1>;
using ExprMatrix = Grid<Expr, 2>;
using ExprTensor3 = Grid<Expr, 3>;
using ExprTensor4 = Grid<Expr, 4>;

/// Default coordinate names x1..xn.
std::vector<std::string> default_coordinate_names(int n);

/// Parses `text` with coordinates x1..xn.
///
/// Grammar (standard precedence, `^` right-associative and binding tighter
/// than unary minus):
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := number | name | name '(' sum ')' | '(' sum ')'
/// with functions sin, cos, tan, exp, log, sqrt.
Expr parse_expr(std::string_view text, int n);
Expr parse_expr(std::string_view text, std::span<const std::string> coordinate_names);

/// Prints with minimal parentheses; parse(to_string(e)) reproduces e.
std::string to_string(const Expr& e, std::span<const std::string> coordinate_names);
std::string to_string(const Expr& e);

double eval(const Expr& e, std::span<const double> point);

/// Symbolic partial derivative with respect to coordinate `var` (0-based).
Expr diff(const Expr& e, int var);

/// Replaces every coordinate x_i by values[i], sharing repeated subtrees.
Expr substitute(const Expr& e, std::span<const Expr> values);

/// Differentiation with a persistent memo keyed on node identity. Derivatives
/// of shared subtrees stay shared, which keeps second derivatives of metric
/// components from blowing up.
class Differentiator {
 public:
  Expr operator()(const Expr& e, int var);

 private:
  struct Key {
    const void* node;
    int var;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<const void*>{}(k.node) ^ (static_cast<std::size_t>(k.var) * 0x9e3779b97f4a7c15ULL);
    }
  };
  // Keeps the source nodes alive so addresses in the memo are never reused.
  std::unordered_map<Key, std::pair<Expr, Expr>, KeyHash> memo_;
};

/// A batch of expressions flattened into a straight-line program with
/// shared subexpressions evaluated once per point.
class Program {
 public:
  Program() = default;
  explicit Program(std::span<const Expr> outputs);

  std::size_t output_count() const { return outputs_.size(); }
  std::size_t instruction_count() const { return code_.size(); }

  /// Evaluates all outputs at `point`; throws DomainError on a domain violation.
  void run(std::span<const double> point, std::span<double> out) const;
  std::vector<double> run(std::span<const double> point) const;

 private:
  struct Instr {
    Expr::Op op;
    int a = -1;
    int b = -1;
    double value = 0.0;  // constant or variable index
  };
  std::vector<Instr> code_;
  std::vector<int> outputs_;
};

}  // namespace jetgeo

#include "jetgeo/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>

namespace jetgeo {

struct Expr::Node {
  Node(Op o, double v, int i, Expr x, Expr y) : op(o), value(v), var(i), a(std::move(x)), b(std::move(y)) {}
  Op op;
  double value;
  int var;
  Expr a;
  Expr b;
};

namespace {

bool is_function(Expr::Op op) {
  switch (op) {
    case Expr::Op::kSin:
    case Expr::Op::kCos:
    case Expr::Op::kTan:
    case Expr::Op::kExp:
    case Expr::Op::kLog:
    case Expr::Op::kSqrt:
      return true;
    default:
      return false;
  }
}

const char* function_name(Expr::Op op) {
  switch (op) {
    case Expr::Op::kSin: return "sin";
    case Expr::Op::kCos: return "cos";
    case Expr::Op::kTan: return "tan";
    case Expr::Op::kExp: return "exp";
    case Expr::Op::kLog: return "log";
    case Expr::Op::kSqrt: return "sqrt";
    default: return "?";
  }
}

double apply_unary(Expr::Op op, double x) {
  switch (op) {
    case Expr::Op::kNeg: return -x;
    case Expr::Op::kSin: return std::sin(x);
    case Expr::Op::kCos: return std::cos(x);
    case Expr::Op::kTan: return std::tan(x);
    case Expr::Op::kExp: return std::exp(x);
    case Expr::Op::kLog:
      if (!(x > 0.0)) throw DomainError("log of nonpositive argument");
      return std::log(x);
    case Expr::Op::kSqrt:
      if (x < 0.0) throw DomainError("sqrt of negative argument");
      return std::sqrt(x);
    default: throw std::logic_error("apply_unary: not a unary op");
  }
}

double apply_binary(Expr::Op op, double x, double y) {
  switch (op) {
    case Expr::Op::kAdd: return x + y;
    case Expr::Op::kSub: return x - y;
    case Expr::Op::kMul: return x * y;
    case Expr::Op::kDiv:
      if (y == 0.0) throw DomainError("division by zero");
      return x / y;
    case Expr::Op::kPow:
      if (x == 0.0 && y < 0.0) throw DomainError("zero raised to a negative power");
      if (x < 0.0 && y != std::floor(y)) throw DomainError("negative base with non-integer exponent");
      return std::pow(x, y);
    default: throw std::logic_error("apply_binary: not a binary op");
  }
}

double checked(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite value");
  return v;
}

// Constant folding is attempted only when it cannot hide a domain error.
bool try_fold_unary(Expr::Op op, double x, double& out) {
  try {
    out = apply_unary(op, x);
    return std::isfinite(out);
  } catch (const DomainError&) {
    return false;
  }
}

bool try_fold_binary(Expr::Op op, double x, double y, double& out) {
  try {
    out = apply_binary(op, x, y);
    return std::isfinite(out);
  } catch (const DomainError&) {
    return false;
  }
}

}  // namespace

// Leaf nodes hold null children; a defaulted Expr child would recurse.
Expr::Expr(double value)
    : node_(std::make_shared<const Node>(Op::kConst, value, -1, Expr(std::shared_ptr<const Node>()),
                                         Expr(std::shared_ptr<const Node>()))) {}

Expr Expr::variable(int index) {
  if (index < 0) throw std::invalid_argument("variable index must be nonnegative");
  return Expr(std::make_shared<const Node>(Op::kVar, 0.0, index, Expr(std::shared_ptr<const Node>()),
                                           Expr(std::shared_ptr<const Node>())));
}

Expr::Op Expr::op() const { return node_->op; }
double Expr::constant() const { return node_->value; }
int Expr::variable_index() const { return node_->var; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }

Expr Expr::make(Op op, Expr a, Expr b) {
  return Expr(std::make_shared<const Node>(op, 0.0, -1, std::move(a), std::move(b)));
}

Expr Expr::unary(Op fn, const Expr& arg) {
  if (fn != Op::kNeg && !is_function(fn)) throw std::invalid_argument("Expr::unary: not a unary op");
  double v = 0.0;
  if (arg.is_constant() && try_fold_unary(fn, arg.constant(), v)) return Expr(v);
  if (fn == Op::kNeg && arg.op() == Op::kNeg) return arg.lhs();
  return make(fn, arg, Expr(std::shared_ptr<const Node>()));
}

Expr operator+(const Expr& a, const Expr& b) {
  double v = 0.0;
  if (a.is_constant() && b.is_constant() && try_fold_binary(Expr::Op::kAdd, a.constant(), b.constant(), v))
    return Expr(v);
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::make(Expr::Op::kAdd, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  double v = 0.0;
  if (a.is_constant() && b.is_constant() && try_fold_binary(Expr::Op::kSub, a.constant(), b.constant(), v))
    return Expr(v);
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return Expr::make(Expr::Op::kSub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  double v = 0.0;
  if (a.is_constant() && b.is_constant() && try_fold_binary(Expr::Op::kMul, a.constant(), b.constant(), v))
    return Expr(v);
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  return Expr::make(Expr::Op::kMul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  double v = 0.0;
  if (a.is_constant() && b.is_constant() && try_fold_binary(Expr::Op::kDiv, a.constant(), b.constant(), v))
    return Expr(v);
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr(0.0);
  if (b.is_constant(1.0)) return a;
  return Expr::make(Expr::Op::kDiv, a, b);
}

Expr operator-(const Expr& a) { return Expr::unary(Expr::Op::kNeg, a); }

Expr pow(const Expr& base, const Expr& exponent) {
  double v = 0.0;
  if (base.is_constant() && exponent.is_constant() &&
      try_fold_binary(Expr::Op::kPow, base.constant(), exponent.constant(), v))
    return Expr(v);
  if (exponent.is_constant(0.0)) return Expr(1.0);
  if (exponent.is_constant(1.0)) return base;
  return Expr::make(Expr::Op::kPow, base, exponent);
}

Expr sin(const Expr& e) { return Expr::unary(Expr::Op::kSin, e); }
Expr cos(const Expr& e) { return Expr::unary(Expr::Op::kCos, e); }
Expr tan(const Expr& e) { return Expr::unary(Expr::Op::kTan, e); }
Expr exp(const Expr& e) { return Expr::unary(Expr::Op::kExp, e); }
Expr log(const Expr& e) { return Expr::unary(Expr::Op::kLog, e); }
Expr sqrt(const Expr& e) { return Expr::unary(Expr::Op::kSqrt, e); }

std::vector<std::string> default_coordinate_names(int n) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> names) : text_(text), names_(names) {}

  Expr parse() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    Expr e = sum();
    skip_ws();
    if (pos_ < text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "' at end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (accept('+')) e = e + product();
      else if (accept('-')) e = e - product();
      else return e;
    }
  }

  Expr product() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) e = e * unary();
      else if (accept('/')) e = e / unary();
      else return e;
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return pow(base, unary());
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ParseError("malformed number", start);
    return Expr(value);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      static const std::pair<const char*, Expr::Op> kFunctions[] = {
          {"sin", Expr::Op::kSin}, {"cos", Expr::Op::kCos}, {"tan", Expr::Op::kTan},
          {"exp", Expr::Op::kExp}, {"log", Expr::Op::kLog}, {"sqrt", Expr::Op::kSqrt}};
      for (const auto& [fname, op] : kFunctions) {
        if (name == fname) {
          ++pos_;
          Expr arg = sum();
          expect(')');
          return Expr::unary(op, arg);
        }
      }
      throw UnknownIdentifierError(name, start);
    }
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return Expr::variable(static_cast<int>(i));
    throw UnknownIdentifierError(name, start);
  }

  std::string_view text_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, std::span<const std::string> coordinate_names) {
  return Parser(text, coordinate_names).parse();
}

Expr parse_expr(std::string_view text, int n) {
  const auto names = default_coordinate_names(n);
  return parse_expr(text, names);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

constexpr int kPrecSum = 1;
constexpr int kPrecProduct = 2;
constexpr int kPrecUnary = 3;
constexpr int kPrecPower = 4;
constexpr int kPrecAtom = 5;

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

int precedence(const Expr& e) {
  switch (e.op()) {
    case Expr::Op::kConst: return e.constant() < 0.0 || std::signbit(e.constant()) ? kPrecUnary : kPrecAtom;
    case Expr::Op::kVar: return kPrecAtom;
    case Expr::Op::kAdd:
    case Expr::Op::kSub: return kPrecSum;
    case Expr::Op::kMul:
    case Expr::Op::kDiv: return kPrecProduct;
    case Expr::Op::kNeg: return kPrecUnary;
    case Expr::Op::kPow: return kPrecPower;
    default: return kPrecAtom;
  }
}

void print(const Expr& e, std::span<const std::string> names, int min_prec, std::string& out);

void print_child(const Expr& e, std::span<const std::string> names, int min_prec, std::string& out) {
  if (precedence(e) < min_prec) {
    out += '(';
    print(e, names, 0, out);
    out += ')';
  } else {
    print(e, names, min_prec, out);
  }
}

void print(const Expr& e, std::span<const std::string> names, int /*min_prec*/, std::string& out) {
  switch (e.op()) {
    case Expr::Op::kConst:
      out += format_number(e.constant());
      return;
    case Expr::Op::kVar: {
      const auto i = static_cast<std::size_t>(e.variable_index());
      out += i < names.size() ? names[i] : "x" + std::to_string(i + 1);
      return;
    }
    case Expr::Op::kNeg:
      out += '-';
      print_child(e.lhs(), names, kPrecUnary, out);
      return;
    case Expr::Op::kAdd:
    case Expr::Op::kSub:
      print_child(e.lhs(), names, kPrecSum, out);
      out += e.op() == Expr::Op::kAdd ? " + " : " - ";
      print_child(e.rhs(), names, kPrecProduct, out);
      return;
    case Expr::Op::kMul:
    case Expr::Op::kDiv:
      print_child(e.lhs(), names, kPrecProduct, out);
      out += e.op() == Expr::Op::kMul ? "*" : "/";
      print_child(e.rhs(), names, kPrecUnary, out);
      return;
    case Expr::Op::kPow:
      print_child(e.lhs(), names, kPrecAtom, out);
      out += '^';
      print_child(e.rhs(), names, kPrecUnary, out);
      return;
    default:
      out += function_name(e.op());
      out += '(';
      print(e.lhs(), names, 0, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e, std::span<const std::string> coordinate_names) {
  std::string out;
  print(e, coordinate_names, 0, out);
  return out;
}

std::string to_string(const Expr& e) { return to_string(e, std::span<const std::string>{}); }

// ---------------------------------------------------------------------------
// Evaluation and differentiation

double eval(const Expr& e, std::span<const double> point) {
  switch (e.op()) {
    case Expr::Op::kConst: return e.constant();
    case Expr::Op::kVar: {
      const auto i = static_cast<std::size_t>(e.variable_index());
      if (i >= point.size()) throw std::out_of_range("eval: point has too few coordinates");
      return point[i];
    }
    case Expr::Op::kAdd:
    case Expr::Op::kSub:
    case Expr::Op::kMul:
    case Expr::Op::kDiv:
    case Expr::Op::kPow:
      return checked(apply_binary(e.op(), eval(e.lhs(), point), eval(e.rhs(), point)));
    default:
      return checked(apply_unary(e.op(), eval(e.lhs(), point)));
  }
}

Expr Differentiator::operator()(const Expr& e, int var) {
  switch (e.op()) {
    case Expr::Op::kConst: return Expr(0.0);
    case Expr::Op::kVar: return Expr(e.variable_index() == var ? 1.0 : 0.0);
    default: break;
  }
  const Key key{e.id(), var};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second.second;

  auto& d = *this;
  const Expr& a = e.lhs();
  Expr result;
  switch (e.op()) {
    case Expr::Op::kNeg: result = -d(a, var); break;
    case Expr::Op::kAdd: result = d(a, var) + d(e.rhs(), var); break;
    case Expr::Op::kSub: result = d(a, var) - d(e.rhs(), var); break;
    case Expr::Op::kMul: result = d(a, var) * e.rhs() + a * d(e.rhs(), var); break;
    case Expr::Op::kDiv: {
      const Expr& b = e.rhs();
      result = d(a, var) / b - a * d(b, var) / (b * b);
      break;
    }
    case Expr::Op::kPow: {
      const Expr& b = e.rhs();
      const Expr da = d(a, var);
      const Expr db = d(b, var);
      if (db.is_constant(0.0)) {
        result = b * pow(a, b - Expr(1.0)) * da;
      } else if (da.is_constant(0.0)) {
        result = e * log(a) * db;
      } else {
        result = e * (db * log(a) + b * da / a);
      }
      break;
    }
    case Expr::Op::kSin: result = cos(a) * d(a, var); break;
    case Expr::Op::kCos: result = -(sin(a) * d(a, var)); break;
    case Expr::Op::kTan: {
      const Expr c = cos(a);
      result = d(a, var) / (c * c);
      break;
    }
    case Expr::Op::kExp: result = e * d(a, var); break;
    case Expr::Op::kLog: result = d(a, var) / a; break;
    case Expr::Op::kSqrt: result = d(a, var) / (Expr(2.0) * e); break;
    default: throw std::logic_error("diff: unhandled op");
  }
  memo_.emplace(key, std::make_pair(e, result));
  return result;
}

Expr diff(const Expr& e, int var) {
  if (var < 0) throw std::invalid_argument("diff: variable index must be nonnegative");
  Differentiator d;
  return d(e, var);
}

namespace {

Expr rebuild(const Expr& e, const Expr& a, const Expr& b) {
  switch (e.op()) {
    case Expr::Op::kAdd: return a + b;
    case Expr::Op::kSub: return a - b;
    case Expr::Op::kMul: return a * b;
    case Expr::Op::kDiv: return a / b;
    case Expr::Op::kPow: return pow(a, b);
    default: return Expr::unary(e.op(), a);
  }
}

}  // namespace

Expr substitute(const Expr& e, std::span<const Expr> values) {
  std::unordered_map<const void*, Expr> memo;
  std::function<Expr(const Expr&)> go = [&](const Expr& x) -> Expr {
    switch (x.op()) {
      case Expr::Op::kConst: return x;
      case Expr::Op::kVar: {
        const auto i = static_cast<std::size_t>(x.variable_index());
        if (i >= values.size()) throw std::out_of_range("substitute: too few replacement values");
        return values[i];
      }
      default: break;
    }
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    const bool binary = x.op() == Expr::Op::kAdd || x.op() == Expr::Op::kSub || x.op() == Expr::Op::kMul ||
                        x.op() == Expr::Op::kDiv || x.op() == Expr::Op::kPow;
    Expr r = rebuild(x, go(x.lhs()), binary ? go(x.rhs()) : Expr());
    memo.emplace(x.id(), r);
    return r;
  };
  return go(e);
}

// ---------------------------------------------------------------------------
// Program

Program::Program(std::span<const Expr> outputs) {
  std::unordered_map<const void*, int> slot;
  std::unordered_map<double, int> constants;
  std::function<int(const Expr&)> emit = [&](const Expr& e) -> int {
    if (auto it = slot.find(e.id()); it != slot.end()) return it->second;
    Instr ins;
    ins.op = e.op();
    switch (e.op()) {
      case Expr::Op::kConst: {
        if (auto it = constants.find(e.constant()); it != constants.end()) return it->second;
        ins.value = e.constant();
        break;
      }
      case Expr::Op::kVar: ins.value = e.variable_index(); break;
      case Expr::Op::kAdd:
      case Expr::Op::kSub:
      case Expr::Op::kMul:
      case Expr::Op::kDiv:
      case Expr::Op::kPow:
        ins.a = emit(e.lhs());
        ins.b = emit(e.rhs());
        break;
      default: ins.a = emit(e.lhs()); break;
    }
    const int index = static_cast<int>(code_.size());
    code_.push_back(ins);
    slot.emplace(e.id(), index);
    if (e.op() == Expr::Op::kConst) constants.emplace(e.constant(), index);
    return index;
  };
  outputs_.reserve(outputs.size());
  for (const auto& e : outputs) outputs_.push_back(emit(e));
}

void Program::run(std::span<const double> point, std::span<double> out) const {
  if (out.size() != outputs_.size()) throw std::invalid_argument("Program::run: output size mismatch");
  thread_local std::vector<double> reg;
  reg.resize(code_.size());
  for (std::size_t k = 0; k < code_.size(); ++k) {
    const Instr& ins = code_[k];
    double v = 0.0;
    switch (ins.op) {
      case Expr::Op::kConst: v = ins.value; break;
      case Expr::Op::kVar: {
        const auto i = static_cast<std::size_t>(ins.value);
        if (i >= point.size()) throw std::out_of_range("Program::run: point has too few coordinates");
        v = point[i];
        break;
      }
      case Expr::Op::kAdd: v = reg[ins.a] + reg[ins.b]; break;
      case Expr::Op::kSub: v = reg[ins.a] - reg[ins.b]; break;
      case Expr::Op::kMul: v = reg[ins.a] * reg[ins.b]; break;
      case Expr::Op::kDiv:
      case Expr::Op::kPow: v = checked(apply_binary(ins.op, reg[ins.a], reg[ins.b])); break;
      default: v = checked(apply_unary(ins.op, reg[ins.a])); break;
    }
    reg[k] = v;
  }
  for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = reg[outputs_[k]];
  for (double v : out)
    if (!std::isfinite(v)) throw DomainError("non-finite value");
}

std::vector<double> Program::run(std::span<const double> point) const {
  std::vector<double> out(outputs_.size());
  run(point, out);
  return out;
}

}  // namespace jetgeo

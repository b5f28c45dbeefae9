#include "charflow/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace charflow {

namespace {

enum class TokKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  TokKind kind;
  std::size_t offset;
  double number = 0.0;
  std::string ident;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return {TokKind::End, start};

    const char c = src_[pos_];
    switch (c) {
      case '+': ++pos_; return {TokKind::Plus, start};
      case '-': ++pos_; return {TokKind::Minus, start};
      case '*': ++pos_; return {TokKind::Star, start};
      case '/': ++pos_; return {TokKind::Slash, start};
      case '^': ++pos_; return {TokKind::Caret, start};
      case '(': ++pos_; return {TokKind::LParen, start};
      case ')': ++pos_; return {TokKind::RParen, start};
      default: break;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src_.data() + pos_;
      char* end = nullptr;
      const double value = std::strtod(begin, &end);
      if (end == begin) throw ParseError(start, "malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      Token t{TokKind::Number, start};
      t.number = value;
      return t;
    }

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      Token t{TokKind::Ident, start};
      t.ident = std::string(src_.substr(pos_, end - pos_));
      pos_ = end;
      return t;
    }

    throw ParseError(start, std::string("unexpected character '") + c + "'");
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

bool variable_from_name(std::string_view name, Var& out) {
  if (name == "u") { out = Var::U; return true; }
  if (name == "x") { out = Var::X; return true; }
  if (name == "t") { out = Var::T; return true; }
  if (name == "x0") { out = Var::X0; return true; }
  return false;
}

const char* variable_name(Var v) {
  switch (v) {
    case Var::U: return "u";
    case Var::X: return "x";
    case Var::T: return "t";
    case Var::X0: return "x0";
  }
  return "?";
}

/// Recursive-descent parser producing the postfix program directly.
///
/// Precedence, loosest to tightest:  + -  |  * /  |  unary -  |  ^ (right).
class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src), src_(src) { advance(); }

  Expr run() {
    parse_sum();
    if (cur_.kind != TokKind::End) throw ParseError(cur_.offset, "trailing input");
    Expr e;
    e.program_ = std::move(program_);
    e.var_mask_ = var_mask_;
    e.stack_need_ = max_depth_;
    return e;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  void emit(Expr::Instr instr, int stack_delta) {
    program_.push_back(instr);
    depth_ += stack_delta;
    if (depth_ > max_depth_) max_depth_ = depth_;
  }

  void parse_sum() {
    parse_product();
    while (cur_.kind == TokKind::Plus || cur_.kind == TokKind::Minus) {
      const bool add = cur_.kind == TokKind::Plus;
      advance();
      parse_product();
      emit({add ? Expr::Op::Add : Expr::Op::Sub}, -1);
    }
  }

  void parse_product() {
    parse_unary();
    while (cur_.kind == TokKind::Star || cur_.kind == TokKind::Slash) {
      const bool mul = cur_.kind == TokKind::Star;
      advance();
      parse_unary();
      emit({mul ? Expr::Op::Mul : Expr::Op::Div}, -1);
    }
  }

  void parse_unary() {
    if (cur_.kind == TokKind::Minus) {
      advance();
      parse_unary();
      emit({Expr::Op::Neg}, 0);
      return;
    }
    parse_power();
  }

  void parse_power() {
    parse_atom();
    if (cur_.kind == TokKind::Caret) {
      advance();
      parse_unary();  // right-associative; exponent may carry a unary minus
      emit({Expr::Op::Pow}, -1);
    }
  }

  void parse_atom() {
    switch (cur_.kind) {
      case TokKind::Number: {
        Expr::Instr instr{Expr::Op::PushConst};
        instr.value = cur_.number;
        emit(instr, +1);
        advance();
        return;
      }
      case TokKind::LParen: {
        advance();
        parse_sum();
        expect(TokKind::RParen, "expected ')'");
        return;
      }
      case TokKind::Ident: {
        const Token name = cur_;
        advance();
        if (cur_.kind == TokKind::LParen) {
          const Expr::Op op = function_op(name);
          advance();
          parse_sum();
          expect(TokKind::RParen, "expected ')' after function argument");
          emit({op}, 0);
          return;
        }
        Var v;
        if (!variable_from_name(name.ident, v))
          throw ParseError(name.offset, "unknown identifier '" + name.ident + "'");
        Expr::Instr instr{Expr::Op::PushVar};
        instr.var = v;
        emit(instr, +1);
        var_mask_ |= static_cast<std::uint8_t>(1u << static_cast<int>(v));
        return;
      }
      case TokKind::End:
        throw ParseError(cur_.offset, "unexpected end of input");
      default:
        throw ParseError(cur_.offset, "expected a value");
    }
  }

  Expr::Op function_op(const Token& name) {
    static const std::array<std::pair<const char*, Expr::Op>, 9> table = {{
        {"sin", Expr::Op::Sin}, {"cos", Expr::Op::Cos}, {"tan", Expr::Op::Tan},
        {"exp", Expr::Op::Exp}, {"ln", Expr::Op::Ln}, {"sqrt", Expr::Op::Sqrt},
        {"abs", Expr::Op::Abs}, {"arctan", Expr::Op::Arctan}, {"arccos", Expr::Op::Arccos},
    }};
    for (const auto& [fname, op] : table)
      if (name.ident == fname) return op;
    throw ParseError(name.offset, "unknown function '" + name.ident + "'");
  }

  void expect(TokKind kind, const char* message) {
    if (cur_.kind != kind) throw ParseError(cur_.offset, message);
    advance();
  }

  Lexer lexer_;
  std::string_view src_;
  Token cur_{TokKind::End, 0};
  std::vector<Expr::Instr> program_;
  std::uint8_t var_mask_ = 0;
  int depth_ = 0;
  int max_depth_ = 0;
};

Expr Expr::parse(std::string_view source) { return Parser(source).run(); }

namespace {

[[noreturn]] void domain_fail(const char* what) { throw DomainError(what); }

double checked_pow(double base, double exponent) {
  if (base < 0.0) {
    // Negative base is only defined for integer exponents.
    if (exponent != std::floor(exponent)) domain_fail("fractional power of a negative base");
  } else if (base == 0.0 && exponent < 0.0) {
    domain_fail("zero raised to a negative power");
  }
  return std::pow(base, exponent);
}

}  // namespace

double Expr::eval(const EvalVars& vars) const {
  if (program_.empty()) throw DomainError("evaluating an empty expression");
  double stack[64];
  int top = -1;
  for (const Instr& instr : program_) {
    switch (instr.op) {
      case Op::PushConst: stack[++top] = instr.value; break;
      case Op::PushVar: stack[++top] = vars.get(instr.var); break;
      case Op::Add: --top; stack[top] += stack[top + 1]; break;
      case Op::Sub: --top; stack[top] -= stack[top + 1]; break;
      case Op::Mul: --top; stack[top] *= stack[top + 1]; break;
      case Op::Div:
        --top;
        if (stack[top + 1] == 0.0) domain_fail("division by zero");
        stack[top] /= stack[top + 1];
        break;
      case Op::Pow: --top; stack[top] = checked_pow(stack[top], stack[top + 1]); break;
      case Op::Neg: stack[top] = -stack[top]; break;
      case Op::Sin: stack[top] = std::sin(stack[top]); break;
      case Op::Cos: stack[top] = std::cos(stack[top]); break;
      case Op::Tan: stack[top] = std::tan(stack[top]); break;
      case Op::Exp: stack[top] = std::exp(stack[top]); break;
      case Op::Ln:
        if (stack[top] <= 0.0) domain_fail("log of a non-positive value");
        stack[top] = std::log(stack[top]);
        break;
      case Op::Sqrt:
        if (stack[top] < 0.0) domain_fail("square root of a negative value");
        stack[top] = std::sqrt(stack[top]);
        break;
      case Op::Abs: stack[top] = std::fabs(stack[top]); break;
      case Op::Arctan: stack[top] = std::atan(stack[top]); break;
      case Op::Arccos:
        if (stack[top] < -1.0 || stack[top] > 1.0) domain_fail("arccos argument outside [-1, 1]");
        stack[top] = std::acos(stack[top]);
        break;
    }
  }
  const double result = stack[0];
  if (std::isnan(result)) domain_fail("evaluation produced NaN");
  return result;
}

double Expr::eval(const std::map<std::string, double>& bindings) const {
  EvalVars vars;
  for (int i = 0; i < kNumVars; ++i) {
    const Var v = static_cast<Var>(i);
    if (!uses(v)) continue;
    const auto it = bindings.find(variable_name(v));
    if (it == bindings.end())
      throw DomainError(std::string("unbound variable '") + variable_name(v) + "'");
    switch (v) {
      case Var::U: vars.u = it->second; break;
      case Var::X: vars.x = it->second; break;
      case Var::T: vars.t = it->second; break;
      case Var::X0: vars.x0 = it->second; break;
    }
  }
  return eval(vars);
}

namespace {

// Operator strength used by the printer: sums < products < unary minus <
// powers < atoms.
constexpr int kPrecSum = 1, kPrecProduct = 2, kPrecUnary = 3, kPrecPower = 4, kPrecAtom = 5;

struct Printed {
  std::string text;
  int prec;
};

std::string wrap(const Printed& p, int min_prec) {
  if (p.prec >= min_prec) return p.text;
  return "(" + p.text + ")";
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string Expr::to_string() const {
  const auto function_name = [](Op op) -> const char* {
    switch (op) {
      case Op::Sin: return "sin";
      case Op::Cos: return "cos";
      case Op::Tan: return "tan";
      case Op::Exp: return "exp";
      case Op::Ln: return "ln";
      case Op::Sqrt: return "sqrt";
      case Op::Abs: return "abs";
      case Op::Arctan: return "arctan";
      case Op::Arccos: return "arccos";
      default: return "?";
    }
  };
  std::vector<Printed> stack;
  for (const Instr& instr : program_) {
    switch (instr.op) {
      case Op::PushConst:
        stack.push_back({format_number(instr.value), kPrecAtom});
        break;
      case Op::PushVar:
        stack.push_back({variable_name(instr.var), kPrecAtom});
        break;
      case Op::Add:
      case Op::Sub: {
        Printed rhs = std::move(stack.back());
        stack.pop_back();
        Printed lhs = std::move(stack.back());
        stack.pop_back();
        const bool add = instr.op == Op::Add;
        stack.push_back({wrap(lhs, kPrecSum) + (add ? " + " : " - ") +
                             wrap(rhs, kPrecSum + (add ? 0 : 1)),
                         kPrecSum});
        break;
      }
      case Op::Mul:
      case Op::Div: {
        Printed rhs = std::move(stack.back());
        stack.pop_back();
        Printed lhs = std::move(stack.back());
        stack.pop_back();
        const bool mul = instr.op == Op::Mul;
        stack.push_back({wrap(lhs, kPrecProduct) + (mul ? "*" : "/") +
                             wrap(rhs, kPrecProduct + (mul ? 0 : 1)),
                         kPrecProduct});
        break;
      }
      case Op::Pow: {
        Printed rhs = std::move(stack.back());
        stack.pop_back();
        Printed lhs = std::move(stack.back());
        stack.pop_back();
        // Left operand must be an atom ('^' is right-associative); the
        // exponent may carry a unary minus without parentheses.
        stack.push_back({wrap(lhs, kPrecAtom) + "^" + wrap(rhs, kPrecUnary), kPrecPower});
        break;
      }
      case Op::Neg: {
        Printed operand = std::move(stack.back());
        stack.pop_back();
        stack.push_back({"-" + wrap(operand, kPrecUnary), kPrecUnary});
        break;
      }
      default: {
        Printed arg = std::move(stack.back());
        stack.pop_back();
        stack.push_back({std::string(function_name(instr.op)) + "(" + arg.text + ")", kPrecAtom});
        break;
      }
    }
  }
  return stack.empty() ? std::string() : stack.back().text;
}

bool Expr::is_constant(double value) const {
  return program_.size() == 1 && program_[0].op == Op::PushConst && program_[0].value == value;
}

}  // namespace charflow

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace charflow {

/// Error hierarchy shared by the whole library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression source. Carries the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error("parse error at byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation left the mathematical domain (log of a non-positive value,
/// division by zero, fractional power of a negative base, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Variable slots known to the expression language.
enum class Var : std::uint8_t { U = 0, X = 1, T = 2, X0 = 3 };

inline constexpr int kNumVars = 4;

/// Bindings for the fast evaluation path. All four slots are always present;
/// expressions only read the slots they reference.
struct EvalVars {
  double u = 0.0;
  double x = 0.0;
  double t = 0.0;
  double x0 = 0.0;

  double get(Var v) const {
    switch (v) {
      case Var::U: return u;
      case Var::X: return x;
      case Var::T: return t;
      case Var::X0: return x0;
    }
    return 0.0;
  }
};

/// Immutable scalar arithmetic expression over {u, x, t, x0}.
///
/// Parsed once, evaluated many times. The tree is compiled to a flat postfix
/// program at parse time, so eval() is allocation-free and cheap enough for
/// inner solver loops. Instances are freely copyable and safe to evaluate
/// concurrently.
class Expr {
 public:
  Expr() = default;

  /// Parses `source`. Throws ParseError with a byte offset on bad input.
  static Expr parse(std::string_view source);

  /// Fast evaluation. Throws DomainError when the value is undefined.
  double eval(const EvalVars& vars) const;

  /// Map-based evaluation; verifies every referenced variable is bound.
  double eval(const std::map<std::string, double>& bindings) const;

  /// Convenience for expressions in a single variable u.
  double eval_u(double u) const { return eval(EvalVars{u, 0.0, 0.0, 0.0}); }

  /// Renders a form that parses back to an evaluation-equivalent expression.
  std::string to_string() const;

  /// True when the expression references variable `v`.
  bool uses(Var v) const { return (var_mask_ & (1u << static_cast<int>(v))) != 0; }

  bool empty() const { return program_.empty(); }

  /// True when the expression is the literal constant `value`.
  bool is_constant(double value) const;

 private:
  friend class Parser;

  enum class Op : std::uint8_t {
    PushConst,
    PushVar,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Abs,
    Arctan,
    Arccos,
  };

  struct Instr {
    Op op;
    Var var = Var::U;   // PushVar payload
    double value = 0.0; // PushConst payload
  };

  std::vector<Instr> program_; // postfix order
  std::uint8_t var_mask_ = 0;
  int stack_need_ = 0;
};

/// Parses `name` into a variable slot; returns false for unknown names.
bool variable_from_name(std::string_view name, Var& out);

const char* variable_name(Var v);

}  // namespace charflow

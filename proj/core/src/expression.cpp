#include "swgame/expression.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace swgame {

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " at position " + std::to_string(position)),
      position_(position) {}

namespace detail {

enum class Op {
  constant,
  var_t,
  var_x,
  add,
  sub,
  mul,
  div,
  pow,
  neg,
  exp,
  log,
  sqrt,
  sin,
  cos,
  tanh,
  abs,
  min,
  max,
};

struct Instr {
  Op op;
  double value = 0.0;
};

// Postfix program; evaluation runs a small value stack.
struct Program {
  std::vector<Instr> code;
  std::size_t max_depth = 0;
  bool uses_t = false;
  bool uses_x = false;
};

namespace {

int arity(Op op) {
  switch (op) {
    case Op::constant:
    case Op::var_t:
    case Op::var_x:
      return 0;
    case Op::neg:
    case Op::exp:
    case Op::log:
    case Op::sqrt:
    case Op::sin:
    case Op::cos:
    case Op::tanh:
    case Op::abs:
      return 1;
    default:
      return 2;
  }
}

const char* function_name(Op op) {
  switch (op) {
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::sqrt: return "sqrt";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::tanh: return "tanh";
    case Op::abs: return "abs";
    case Op::min: return "min";
    case Op::max: return "max";
    case Op::pow: return "pow";
    default: return "";
  }
}

void finalize(Program& p) {
  std::size_t depth = 0;
  p.max_depth = 0;
  p.uses_t = p.uses_x = false;
  for (const auto& ins : p.code) {
    const int a = arity(ins.op);
    depth = depth - static_cast<std::size_t>(a) + 1;
    p.max_depth = std::max(p.max_depth, depth);
    p.uses_t |= ins.op == Op::var_t;
    p.uses_x |= ins.op == Op::var_x;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Program run() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    expression();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    finalize(program_);
    return std::move(program_);
  }

 private:
  void emit(Op op, double value = 0.0) { program_.code.push_back({op, value}); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  void expression() {
    term();
    for (;;) {
      if (accept('+')) {
        term();
        emit(Op::add);
      } else if (accept('-')) {
        term();
        emit(Op::sub);
      } else {
        return;
      }
    }
  }

  void term() {
    unary();
    for (;;) {
      if (accept('*')) {
        unary();
        emit(Op::mul);
      } else if (accept('/')) {
        unary();
        emit(Op::div);
      } else {
        return;
      }
    }
  }

  void unary() {
    if (accept('-')) {
      unary();
      emit(Op::neg);
    } else if (accept('+')) {
      unary();
    } else {
      power();
    }
  }

  void power() {
    primary();
    if (accept('^')) {
      unary();
      emit(Op::pow);
    }
  }

  void primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      expression();
      expect(')');
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      identifier();
      return;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  void number() {
    const std::size_t start = pos_;
    double value = 0.0;
    const auto* first = text_.data() + pos_;
    const auto* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
    if (ec != std::errc() || !std::isfinite(value)) throw ParseError("malformed number", start);
    pos_ += static_cast<std::size_t>(ptr - first);
    emit(Op::constant, value);
  }

  void identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "t") return emit(Op::var_t);
    if (name == "x") return emit(Op::var_x);
    if (name == "pi") return emit(Op::constant, std::numbers::pi);

    static constexpr std::array<std::pair<std::string_view, Op>, 10> functions{{
        {"exp", Op::exp},
        {"log", Op::log},
        {"sqrt", Op::sqrt},
        {"sin", Op::sin},
        {"cos", Op::cos},
        {"tanh", Op::tanh},
        {"abs", Op::abs},
        {"min", Op::min},
        {"max", Op::max},
        {"pow", Op::pow},
    }};
    for (const auto& [fname, op] : functions) {
      if (name != fname) continue;
      expect('(');
      expression();
      if (arity(op) == 2) {
        expect(',');
        expression();
      }
      expect(')');
      emit(op);
      return;
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Program program_;
};

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

double checked(double v) {
  if (!std::isfinite(v)) throw EvaluationError("non-finite value in expression evaluation");
  return v;
}

template <typename Stack>
double run(const Program& p, double t, double x, Stack& stack) {
  std::size_t top = 0;
  for (const auto& ins : p.code) {
    switch (ins.op) {
      case Op::constant: stack[top++] = ins.value; break;
      case Op::var_t: stack[top++] = t; break;
      case Op::var_x: stack[top++] = x; break;
      case Op::neg: stack[top - 1] = -stack[top - 1]; break;
      case Op::exp: stack[top - 1] = checked(std::exp(stack[top - 1])); break;
      case Op::log: stack[top - 1] = checked(std::log(stack[top - 1])); break;
      case Op::sqrt: stack[top - 1] = checked(std::sqrt(stack[top - 1])); break;
      case Op::sin: stack[top - 1] = std::sin(stack[top - 1]); break;
      case Op::cos: stack[top - 1] = std::cos(stack[top - 1]); break;
      case Op::tanh: stack[top - 1] = std::tanh(stack[top - 1]); break;
      case Op::abs: stack[top - 1] = std::fabs(stack[top - 1]); break;
      default: {
        const double b = stack[--top];
        double& a = stack[top - 1];
        switch (ins.op) {
          case Op::add: a = checked(a + b); break;
          case Op::sub: a = checked(a - b); break;
          case Op::mul: a = checked(a * b); break;
          case Op::div:
            if (b == 0.0) throw EvaluationError("division by zero in expression evaluation");
            a = checked(a / b);
            break;
          case Op::pow: a = checked(std::pow(a, b)); break;
          case Op::min: a = std::min(a, b); break;
          case Op::max: a = std::max(a, b); break;
          default: break;
        }
      }
    }
  }
  return stack[0];
}

}  // namespace
}  // namespace detail

ScalarField::ScalarField() : ScalarField(constant(0.0)) {}

ScalarField::ScalarField(std::shared_ptr<const detail::Program> program)
    : program_(std::move(program)) {}

ScalarField ScalarField::parse(std::string_view text) {
  return ScalarField(std::make_shared<const detail::Program>(detail::Parser(text).run()));
}

ScalarField ScalarField::constant(double value) {
  if (!std::isfinite(value)) throw EvaluationError("non-finite constant");
  detail::Program p;
  p.code.push_back({detail::Op::constant, value});
  detail::finalize(p);
  return ScalarField(std::make_shared<const detail::Program>(std::move(p)));
}

double ScalarField::operator()(double t, double x) const {
  const auto& p = *program_;
  if (p.max_depth <= 32) {
    std::array<double, 32> stack;
    return detail::checked(detail::run(p, t, x, stack));
  }
  std::vector<double> stack(p.max_depth);
  return detail::checked(detail::run(p, t, x, stack));
}

std::string ScalarField::to_string() const {
  using detail::Op;
  std::vector<std::string> stack;
  for (const auto& ins : program_->code) {
    switch (detail::arity(ins.op)) {
      case 0:
        if (ins.op == Op::var_t) {
          stack.emplace_back("t");
        } else if (ins.op == Op::var_x) {
          stack.emplace_back("x");
        } else {
          const std::string digits = detail::format_number(ins.value);
          stack.push_back(std::signbit(ins.value) ? "(" + digits + ")" : digits);
        }
        break;
      case 1: {
        auto& a = stack.back();
        a = ins.op == Op::neg ? "(-" + a + ")" : std::string(detail::function_name(ins.op)) + "(" + a + ")";
        break;
      }
      default: {
        std::string b = std::move(stack.back());
        stack.pop_back();
        auto& a = stack.back();
        switch (ins.op) {
          case Op::add: a = "(" + a + " + " + b + ")"; break;
          case Op::sub: a = "(" + a + " - " + b + ")"; break;
          case Op::mul: a = "(" + a + " * " + b + ")"; break;
          case Op::div: a = "(" + a + " / " + b + ")"; break;
          case Op::pow: a = "(" + a + " ^ " + b + ")"; break;
          default: a = std::string(detail::function_name(ins.op)) + "(" + a + ", " + b + ")"; break;
        }
      }
    }
  }
  return stack.back();
}

bool ScalarField::depends_on_t() const noexcept { return program_->uses_t; }
bool ScalarField::depends_on_x() const noexcept { return program_->uses_x; }

std::optional<double> ScalarField::constant_value() const {
  if (!is_constant()) return std::nullopt;
  return (*this)(0.0, 0.0);
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  detail::Program p;
  p.code = a.program_->code;
  p.code.insert(p.code.end(), b.program_->code.begin(), b.program_->code.end());
  p.code.push_back({detail::Op::add});
  detail::finalize(p);
  return ScalarField(std::make_shared<const detail::Program>(std::move(p)));
}

ScalarField operator*(double scale, const ScalarField& f) {
  if (!std::isfinite(scale)) throw EvaluationError("non-finite scale factor");
  detail::Program p;
  p.code.push_back({detail::Op::constant, scale});
  p.code.insert(p.code.end(), f.program_->code.begin(), f.program_->code.end());
  p.code.push_back({detail::Op::mul});
  detail::finalize(p);
  return ScalarField(std::make_shared<const detail::Program>(std::move(p)));
}

}  // namespace swgame

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace swgame {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
struct Program;
}

// A deterministic scalar function of (t, x), parsed from an arithmetic
// expression. Supported: numeric literals, the variables t and x, the
// constant pi, + - * / ^ (right-associative, binds tighter than unary minus),
// and the functions exp, log, sqrt, sin, cos, tanh, abs, min, max, pow.
//
// Evaluation throws EvaluationError on division by zero or any non-finite
// intermediate value.
class ScalarField {
 public:
  ScalarField();  // the constant 0

  static ScalarField parse(std::string_view text);
  static ScalarField constant(double value);

  double operator()(double t, double x) const;

  // Canonical, fully parenthesized form. parse(to_string()) evaluates
  // bit-identically and prints the same string.
  std::string to_string() const;

  bool depends_on_t() const noexcept;
  bool depends_on_x() const noexcept;
  bool is_constant() const noexcept { return !depends_on_t() && !depends_on_x(); }
  std::optional<double> constant_value() const;

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(double scale, const ScalarField& f);

 private:
  explicit ScalarField(std::shared_ptr<const detail::Program> program);
  std::shared_ptr<const detail::Program> program_;
};

}  // namespace swgame

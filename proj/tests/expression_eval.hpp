#pragma once

// Test-only independent interpreter for rendered closed-form expressions.
// Recursive descent over the grammar emitted by render_expression:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | number | 's_<k>' | func '(' args ')' | '(' expr ')'
// Kept deliberately separate from the engine's execution path.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace expr_eval {

class Parser {
 public:
  Parser(std::string_view text, std::span<const double> observation)
      : text_(text), observation_(observation) {}

  double parse() {
    const double value = expression();
    skip_spaces();
    if (pos_ != text_.size()) {
      throw std::runtime_error("trailing characters in expression: " +
                               std::string(text_.substr(pos_)));
    }
    return value;
  }

 private:
  double expression() {
    double value = term();
    for (;;) {
      skip_spaces();
      if (consume('+')) {
        value = value + term();
      } else if (consume('-')) {
        value = value - term();
      } else {
        return value;
      }
    }
  }

  double term() {
    double value = factor();
    for (;;) {
      skip_spaces();
      if (consume('*')) {
        value = value * factor();
      } else if (consume('/')) {
        value = value / factor();
      } else {
        return value;
      }
    }
  }

  double factor() {
    skip_spaces();
    if (consume('-')) {
      return -factor();
    }
    if (consume('(')) {
      const double value = expression();
      expect(')');
      return value;
    }
    if (peek() == 's' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '_') {
      pos_ += 2;
      const std::size_t index = integer();
      if (index >= observation_.size()) {
        throw std::runtime_error("observation index out of range");
      }
      return observation_[index];
    }
    if (std::isalpha(static_cast<unsigned char>(peek()))) {
      const std::string name = identifier();
      if (name == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
      }
      if (name == "inf") {
        return std::numeric_limits<double>::infinity();
      }
      expect('(');
      const double first = expression();
      if (name == "max" || name == "mod") {
        expect(',');
        const double second = expression();
        expect(')');
        return name == "max" ? std::fmax(first, second) : std::fmod(first, second);
      }
      expect(')');
      if (name == "sin") {
        return std::sin(first);
      }
      if (name == "cos") {
        return std::cos(first);
      }
      if (name == "tan") {
        return std::tan(first);
      }
      if (name == "exp") {
        return std::exp(first);
      }
      if (name == "log") {
        return first > 0.0 ? std::log(first)
                           : std::numeric_limits<double>::quiet_NaN();
      }
      throw std::runtime_error("unknown function: " + name);
    }
    return number();
  }

  double number() {
    const char* start = text_.data() + pos_;
    char* end = nullptr;
    const double value = std::strtod(start, &end);
    if (end == start) {
      throw std::runtime_error("expected a number at: " +
                               std::string(text_.substr(pos_)));
    }
    pos_ += static_cast<std::size_t>(end - start);
    return value;
  }

  std::size_t integer() {
    std::size_t value = 0;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      throw std::runtime_error("expected an integer");
    }
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + static_cast<std::size_t>(peek() - '0');
      ++pos_;
    }
    return value;
  }

  std::string identifier() {
    std::string name;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(peek()))) {
      name += text_[pos_++];
    }
    return name;
  }

  void skip_spaces() {
    while (pos_ < text_.size() && text_[pos_] == ' ') {
      ++pos_;
    }
  }

  bool consume(char c) {
    skip_spaces();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) {
      throw std::runtime_error(std::string("expected '") + c + "' in expression");
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  std::string_view text_;
  std::span<const double> observation_;
  std::size_t pos_ = 0;
};

inline double evaluate(const std::string& text, std::span<const double> observation) {
  return Parser(text, observation).parse();
}

}  // namespace expr_eval

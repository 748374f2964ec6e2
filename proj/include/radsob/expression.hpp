#pragma once

// Minimal arithmetic grammar for user warp functions of one variable r:
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := ('+' | '-') unary | power
//   power := atom ('^' unary)?
//   atom  := number | r | pi | name '(' expr [',' expr] ')' | '(' expr ')'
// with sinh cosh tanh exp log sqrt sin cos and pow(a, b).

#include <memory>
#include <string>
#include <string_view>

namespace radsob {

/// Value with first and second derivative in r.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

class Expression {
 public:
  /// Throws Error(parse) with the offending position.
  static Expression parse(std::string_view text);

  [[nodiscard]] Jet eval(double r) const;
  [[nodiscard]] const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace radsob

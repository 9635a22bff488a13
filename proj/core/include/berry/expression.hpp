#pragma once

#include <memory>
#include <string>
#include <vector>

#include "berry/family.hpp"

namespace berry {

// A real-valued scalar expression in named parameters. Grammar:
//
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := unary ('^' factor)?
//   unary   := '-' unary | primary
//   primary := number | 'pi' | param | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | tan | exp | log | sqrt | abs
//
// Parse errors throw ConfigError with a character position.
class Expression {
 public:
  struct Node;  // implementation detail, defined in expression.cpp

  static Expression parse(const std::string& text,
                          const std::vector<std::string>& parameters);

  double evaluate(const ParameterPoint& point) const;
  const std::string& text() const { return text_; }

  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;
  Expression(const Expression&);
  Expression& operator=(const Expression&);
  ~Expression();

 private:
  explicit Expression(std::string text, std::shared_ptr<const Node> root);

  std::string text_;
  std::shared_ptr<const Node> root_;
};

// Loads a Hamiltonian family from the plain-text matrix-expression format:
//
//   # comment
//   params x z          one line naming the manifold coordinates
//   dim 2               matrix dimension d
//   term <expression>   a scalar coefficient expression, followed by
//   <d^2 complex entries>   its constant Hermitian matrix, row-major,
//                           each entry as "re im"
//
// H(p) = sum over terms of expression(p) * matrix. Every term matrix must be
// Hermitian within 1e-12. Derivatives are finite-difference.
HamiltonianFamily load_family_file(const std::string& path);
HamiltonianFamily parse_family_text(const std::string& text,
                                    const std::string& name = "family-file");

}  // namespace berry

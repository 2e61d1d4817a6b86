#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamder/witt.hpp"

namespace hamder {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Grammar (absolute 1-based variable indices):
//   expr := term (('+' | '-') term)*
//   term := ['-'] [int '*'] atom
//   atom := mono [ 'd' int ] | int [ 'd' int ] | 'DH(' expr ')' | '[' expr ',' expr ']' | '(' expr ')'
//   mono := 'x^(' a1 ',' ... ',' a2m ')' [ 'x{' i ',' ... '}' ] | 'x{' i ',' ... '}'
struct ExprNode {
    enum class Kind { Sum, Scale, Poly, FieldTerm, DH, Bracket };
    Kind kind = Kind::Poly;
    std::size_t offset = 0;
    Scalar coeff = 1;                          // Scale
    Monomial mono;                             // Poly, FieldTerm
    int direction = 0;                         // FieldTerm, 0-based
    std::vector<std::shared_ptr<ExprNode>> children;
};
using ExprAst = std::shared_ptr<ExprNode>;

ExprAst parse_expr(const std::string& src, const Params& params);

// Value of an expression: a polynomial or a vector field.
struct Element {
    bool is_field = false;
    SuperPoly poly;
    VectorField field;
};

// Throws ParseError (with the node offset) on type errors such as
// bracketing polynomials.
Element evaluate_expr(const Algebra& alg, const ExprAst& ast);
Element parse_element(const Algebra& alg, const std::string& src);

std::string print_monomial(const Algebra& alg, MonoId mono);
std::string print_poly(const Algebra& alg, const SuperPoly& f);
std::string print_field(const Algebra& alg, const VectorField& v);
std::string print_element(const Algebra& alg, const Element& e);

}  // namespace hamder

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "liectrl/errors.hpp"

namespace liectrl {

// Abstract syntax tree for the little arithmetic language used in system
// files: literals, variables u1..um / x1..xn, unary minus, + - * / ^ (right
// associative), exp/log/sin/cos/sqrt, parentheses. Constants pi and e are
// folded into literals at parse time.
struct Expr {
    enum class Kind { Literal, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

    Kind kind = Kind::Literal;
    double literal = 0.0;
    char var_kind = 0;   // 'u' or 'x'
    int var_index = 0;   // 1-based
    std::string func;    // Call only
    std::vector<Expr> children;
    std::size_t offset = 0;  // byte offset of the node in the source
};

// Precedence: ^  >  unary -  >  * /  >  + -, with ^ right-associative.
// Throws ParseError (carrying the byte offset) on malformed input.
Expr parse(const std::string& source);

// Prints with explicit parentheses so that parse(print(e)) reproduces e.
std::string print(const Expr& e);

// Structural equality, ignoring source offsets.
bool expr_equal(const Expr& a, const Expr& b);

struct EvalEnv {
    Eigen::VectorXd u;
    Eigen::VectorXd x;
};

// IEEE double evaluation. Throws EvalError (naming the node) on division by
// zero, log of a non-positive value, sqrt of a negative value, a missing
// variable, or any non-finite intermediate.
double evaluate(const Expr& e, const EvalEnv& env);

// A fixed-roster vector-valued map: one expression per output coordinate,
// all reading the same variable family ('u' or 'x') of size input_dim.
struct CompiledMap {
    char var_kind = 'u';
    int input_dim = 0;
    std::vector<Expr> coords;

    int output_dim() const { return static_cast<int>(coords.size()); }
    Eigen::VectorXd operator()(const Eigen::VectorXd& in) const;
};

// Parses and validates one source per output coordinate; rejects variables
// of the wrong family or with indices beyond input_dim.
CompiledMap compile_map(const std::vector<std::string>& coord_sources, char var_kind,
                        int input_dim);

}  // namespace liectrl

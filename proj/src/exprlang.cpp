#include "liectrl/exprlang.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace liectrl {

namespace {

const char* const kFunctions[] = {"exp", "log", "sin", "cos", "sqrt"};

bool is_function(const std::string& name) {
    for (const char* f : kFunctions)
        if (name == f) return true;
    return false;
}

class Parser {
public:
    explicit Parser(const std::string& src) : src_(src) {}

    Expr run() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
        Expr e = parse_expr();
        skip_ws();
        if (pos_ < src_.size()) throw ParseError("trailing tokens", pos_);
        return e;
    }

private:
    const std::string& src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            const std::size_t at = pos_;
            if (consume('+'))
                lhs = binary(Expr::Kind::Add, std::move(lhs), parse_term(), at);
            else if (consume('-'))
                lhs = binary(Expr::Kind::Sub, std::move(lhs), parse_term(), at);
            else
                return lhs;
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        for (;;) {
            const std::size_t at = pos_;
            if (consume('*'))
                lhs = binary(Expr::Kind::Mul, std::move(lhs), parse_unary(), at);
            else if (consume('/'))
                lhs = binary(Expr::Kind::Div, std::move(lhs), parse_unary(), at);
            else
                return lhs;
        }
    }

    Expr parse_unary() {
        const std::size_t at = pos_;
        if (consume('-')) {
            Expr e;
            e.kind = Expr::Kind::Neg;
            e.offset = at;
            e.children.push_back(parse_unary());
            return e;
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        const std::size_t at = pos_;
        if (consume('^'))
            return binary(Expr::Kind::Pow, std::move(base), parse_unary(), at);
        return base;
    }

    Expr parse_atom() {
        const char c = peek();
        const std::size_t at = pos_;
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            if (!consume(')')) throw ParseError("unbalanced parenthesis", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        throw ParseError("expected a value", at);
    }

    Expr parse_number() {
        const std::size_t at = pos_;
        double value = 0.0;
        const char* begin = src_.data() + pos_;
        const char* end = src_.data() + src_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc()) throw ParseError("malformed number", at);
        pos_ += static_cast<std::size_t>(ptr - begin);
        Expr e;
        e.kind = Expr::Kind::Literal;
        e.literal = value;
        e.offset = at;
        return e;
    }

    Expr parse_ident() {
        const std::size_t at = pos_;
        std::string name;
        while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_])))
            name += src_[pos_++];

        Expr e;
        e.offset = at;
        if (name == "pi" || name == "e") {
            e.kind = Expr::Kind::Literal;
            e.literal = name == "pi" ? M_PI : M_E;
            return e;
        }
        if (is_function(name)) {
            if (!consume('(')) throw ParseError(name + " expects an argument list", pos_);
            e.kind = Expr::Kind::Call;
            e.func = name;
            e.children.push_back(parse_expr());
            if (!consume(')')) throw ParseError("unbalanced parenthesis", pos_);
            return e;
        }
        if ((name[0] == 'u' || name[0] == 'x') && name.size() > 1) {
            int index = 0;
            auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
            if (ec == std::errc() && ptr == name.data() + name.size() && index >= 1) {
                e.kind = Expr::Kind::Variable;
                e.var_kind = name[0];
                e.var_index = index;
                return e;
            }
        }
        throw ParseError("unknown identifier '" + name + "'", at);
    }

    static Expr binary(Expr::Kind kind, Expr lhs, Expr rhs, std::size_t at) {
        Expr e;
        e.kind = kind;
        e.offset = at;
        e.children.push_back(std::move(lhs));
        e.children.push_back(std::move(rhs));
        return e;
    }
};

std::string format_literal(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string node_name(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Literal: return format_literal(e.literal);
        case Expr::Kind::Variable: return e.var_kind + std::to_string(e.var_index);
        case Expr::Kind::Neg: return "unary -";
        case Expr::Kind::Add: return "+";
        case Expr::Kind::Sub: return "-";
        case Expr::Kind::Mul: return "*";
        case Expr::Kind::Div: return "/";
        case Expr::Kind::Pow: return "^";
        case Expr::Kind::Call: return e.func;
    }
    return "?";
}

[[noreturn]] void eval_fail(const Expr& e, const std::string& what) {
    throw EvalError(what + " in '" + node_name(e) + "' at offset " + std::to_string(e.offset));
}

double finite_or_fail(const Expr& e, double v) {
    if (!std::isfinite(v)) eval_fail(e, "non-finite result");
    return v;
}

}  // namespace

Expr parse(const std::string& source) { return Parser(source).run(); }

std::string print(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Literal: return format_literal(e.literal);
        case Expr::Kind::Variable: return e.var_kind + std::to_string(e.var_index);
        case Expr::Kind::Neg: return "(-" + print(e.children[0]) + ")";
        case Expr::Kind::Add: return "(" + print(e.children[0]) + " + " + print(e.children[1]) + ")";
        case Expr::Kind::Sub: return "(" + print(e.children[0]) + " - " + print(e.children[1]) + ")";
        case Expr::Kind::Mul: return "(" + print(e.children[0]) + " * " + print(e.children[1]) + ")";
        case Expr::Kind::Div: return "(" + print(e.children[0]) + " / " + print(e.children[1]) + ")";
        case Expr::Kind::Pow: return "(" + print(e.children[0]) + " ^ " + print(e.children[1]) + ")";
        case Expr::Kind::Call: return e.func + "(" + print(e.children[0]) + ")";
    }
    return "?";
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
    switch (a.kind) {
        case Expr::Kind::Literal:
            if (a.literal != b.literal) return false;
            break;
        case Expr::Kind::Variable:
            if (a.var_kind != b.var_kind || a.var_index != b.var_index) return false;
            break;
        case Expr::Kind::Call:
            if (a.func != b.func) return false;
            break;
        default:
            break;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!expr_equal(a.children[i], b.children[i])) return false;
    return true;
}

double evaluate(const Expr& e, const EvalEnv& env) {
    switch (e.kind) {
        case Expr::Kind::Literal:
            return e.literal;
        case Expr::Kind::Variable: {
            const Eigen::VectorXd& v = e.var_kind == 'u' ? env.u : env.x;
            if (e.var_index > v.size()) eval_fail(e, "missing variable");
            return v(e.var_index - 1);
        }
        case Expr::Kind::Neg:
            return -evaluate(e.children[0], env);
        case Expr::Kind::Add:
            return finite_or_fail(e, evaluate(e.children[0], env) + evaluate(e.children[1], env));
        case Expr::Kind::Sub:
            return finite_or_fail(e, evaluate(e.children[0], env) - evaluate(e.children[1], env));
        case Expr::Kind::Mul:
            return finite_or_fail(e, evaluate(e.children[0], env) * evaluate(e.children[1], env));
        case Expr::Kind::Div: {
            const double num = evaluate(e.children[0], env);
            const double den = evaluate(e.children[1], env);
            if (den == 0.0) eval_fail(e, "division by zero");
            return finite_or_fail(e, num / den);
        }
        case Expr::Kind::Pow:
            return finite_or_fail(
                e, std::pow(evaluate(e.children[0], env), evaluate(e.children[1], env)));
        case Expr::Kind::Call: {
            const double arg = evaluate(e.children[0], env);
            if (e.func == "exp") return finite_or_fail(e, std::exp(arg));
            if (e.func == "log") {
                if (arg <= 0.0) eval_fail(e, "log of a non-positive value");
                return finite_or_fail(e, std::log(arg));
            }
            if (e.func == "sin") return std::sin(arg);
            if (e.func == "cos") return std::cos(arg);
            if (arg < 0.0) eval_fail(e, "sqrt of a negative value");
            return std::sqrt(arg);
        }
    }
    eval_fail(e, "unreachable node kind");
}

Eigen::VectorXd CompiledMap::operator()(const Eigen::VectorXd& in) const {
    EvalEnv env;
    (var_kind == 'u' ? env.u : env.x) = in;
    Eigen::VectorXd out(output_dim());
    for (int i = 0; i < output_dim(); ++i) out(i) = evaluate(coords[i], env);
    return out;
}

namespace {

void check_roster(const Expr& e, char var_kind, int input_dim) {
    if (e.kind == Expr::Kind::Variable) {
        if (e.var_kind != var_kind)
            throw ParseError(std::string("variable family '") + e.var_kind +
                                 "' not allowed here (expected '" + var_kind + "')",
                             e.offset);
        if (e.var_index > input_dim)
            throw ParseError("variable index out of range (have " + std::to_string(input_dim) +
                                 ")",
                             e.offset);
    }
    for (const Expr& c : e.children) check_roster(c, var_kind, input_dim);
}

}  // namespace

CompiledMap compile_map(const std::vector<std::string>& coord_sources, char var_kind,
                        int input_dim) {
    CompiledMap map;
    map.var_kind = var_kind;
    map.input_dim = input_dim;
    for (const std::string& src : coord_sources) {
        Expr e = parse(src);
        check_roster(e, var_kind, input_dim);
        map.coords.push_back(std::move(e));
    }
    return map;
}

}  // namespace liectrl

#pragma once

// Forcing-function expressions: tokenizer, recursive-descent parser and
// evaluator for text such as "5*cos(t^2)*exp(-t)".
//
// Grammar (lowest to highest precedence):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 't' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | tan | exp | log | sqrt | abs

#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fro::expr {

enum class TokenKind { number, identifier, op, lparen, rparen, comma };

struct Token {
    TokenKind kind;
    std::string lexeme;
    std::size_t position;  // byte offset into the source

    bool operator==(const Token&) const = default;
};

/// Base class for all positioned expression errors.
class ExprError : public std::runtime_error {
public:
    ExprError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at offset " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class LexError : public ExprError {
    using ExprError::ExprError;
};

class SyntaxError : public ExprError {
    using ExprError::ExprError;
};

/// Raised by evaluate(); carries the printed sub-expression that failed.
class DomainError : public std::domain_error {
public:
    DomainError(const std::string& what, std::string subexpr)
        : std::domain_error(what + " in '" + subexpr + "'"), subexpr_(std::move(subexpr)) {}
    const std::string& subexpression() const noexcept { return subexpr_; }

private:
    std::string subexpr_;
};

enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { sin, cos, tan, exp, log, sqrt, abs };

inline std::optional<Function> function_from_name(std::string_view name) {
    if (name == "sin") return Function::sin;
    if (name == "cos") return Function::cos;
    if (name == "tan") return Function::tan;
    if (name == "exp") return Function::exp;
    if (name == "log") return Function::log;
    if (name == "sqrt") return Function::sqrt;
    if (name == "abs") return Function::abs;
    return std::nullopt;
}

inline const char* function_name(Function f) {
    switch (f) {
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::tan: return "tan";
    case Function::exp: return "exp";
    case Function::log: return "log";
    case Function::sqrt: return "sqrt";
    case Function::abs: return "abs";
    }
    return "?";
}

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    enum class Kind { constant, variable, negate, binary, call };

    Kind kind = Kind::constant;
    double value = 0.0;  // constant
    BinaryOp op = BinaryOp::add;
    Function fn = Function::sin;
    NodePtr lhs;  // negate/call child, binary left
    NodePtr rhs;  // binary right

    static NodePtr constant(double v) {
        auto n = std::make_shared<Node>();
        n->value = v;
        return n;
    }
    static NodePtr variable() {
        auto n = std::make_shared<Node>();
        n->kind = Kind::variable;
        return n;
    }
    static NodePtr negate(NodePtr child) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::negate;
        n->lhs = std::move(child);
        return n;
    }
    static NodePtr binary(BinaryOp op, NodePtr l, NodePtr r) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::binary;
        n->op = op;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }
    static NodePtr call(Function f, NodePtr arg) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::call;
        n->fn = f;
        n->lhs = std::move(arg);
        return n;
    }
};

namespace detail {

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline char op_char(BinaryOp op) {
    switch (op) {
    case BinaryOp::add: return '+';
    case BinaryOp::sub: return '-';
    case BinaryOp::mul: return '*';
    case BinaryOp::div: return '/';
    case BinaryOp::pow: return '^';
    }
    return '?';
}

inline void print(const Node& n, std::string& out) {
    switch (n.kind) {
    case Node::Kind::constant:
        if (std::signbit(n.value)) {
            out += "(-" + format_number(-n.value) + ")";
        } else {
            out += format_number(n.value);
        }
        return;
    case Node::Kind::variable:
        out += 't';
        return;
    case Node::Kind::negate:
        out += "(-";
        print(*n.lhs, out);
        out += ')';
        return;
    case Node::Kind::binary:
        out += '(';
        print(*n.lhs, out);
        out += op_char(n.op);
        print(*n.rhs, out);
        out += ')';
        return;
    case Node::Kind::call:
        out += function_name(n.fn);
        out += '(';
        print(*n.lhs, out);
        out += ')';
        return;
    }
}

}  // namespace detail

/// Fully parenthesised text form of a tree; re-parses to an equivalent tree.
inline std::string to_string(const Node& n) {
    std::string out;
    detail::print(n, out);
    return out;
}

/// Immutable parsed forcing function f(t).
class Expression {
public:
    Expression() : root_(Node::constant(0.0)), source_("0") {}
    Expression(NodePtr root, std::string source) : root_(std::move(root)), source_(std::move(source)) {}

    const Node& root() const { return *root_; }
    NodePtr root_ptr() const { return root_; }
    const std::string& source() const { return source_; }
    std::string to_string() const { return expr::to_string(*root_); }

    /// True when the tree has no dependence on t.
    bool is_constant() const { return !depends_on_t(*root_); }

private:
    static bool depends_on_t(const Node& n) {
        switch (n.kind) {
        case Node::Kind::constant: return false;
        case Node::Kind::variable: return true;
        case Node::Kind::negate:
        case Node::Kind::call: return depends_on_t(*n.lhs);
        case Node::Kind::binary: return depends_on_t(*n.lhs) || depends_on_t(*n.rhs);
        }
        return true;
    }

    NodePtr root_;
    std::string source_;
};

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> tokens;
    const auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    const auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };

    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
            while (i < src.size() && is_digit(src[i])) ++i;
            if (i < src.size() && src[i] == '.') {
                ++i;
                while (i < src.size() && is_digit(src[i])) ++i;
            }
            // Exponent only when a digit follows, so "2e" stays number + identifier.
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < src.size() && is_digit(src[j])) {
                    i = j;
                    while (i < src.size() && is_digit(src[i])) ++i;
                }
            }
            tokens.push_back({TokenKind::number, std::string(src.substr(start, i - start)), start});
        } else if (is_alpha(c)) {
            while (i < src.size() && is_alpha(src[i])) ++i;
            tokens.push_back({TokenKind::identifier, std::string(src.substr(start, i - start)), start});
        } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            tokens.push_back({TokenKind::op, std::string(1, c), i++});
        } else if (c == '(') {
            tokens.push_back({TokenKind::lparen, "(", i++});
        } else if (c == ')') {
            tokens.push_back({TokenKind::rparen, ")", i++});
        } else if (c == ',') {
            tokens.push_back({TokenKind::comma, ",", i++});
        } else {
            const auto uc = static_cast<unsigned char>(c);
            std::string shown = std::isprint(uc) ? std::string("'") + c + "'" : "byte 0x" + [uc] {
                char b[3];
                std::snprintf(b, sizeof b, "%02x", uc);
                return std::string(b);
            }();
            throw LexError("unexpected character " + shown, i);
        }
    }
    return tokens;
}

namespace detail {

class Parser {
public:
    Parser(const std::vector<Token>& tokens, std::size_t end_pos) : toks_(tokens), end_pos_(end_pos) {}

    NodePtr parse_all() {
        if (toks_.empty()) throw SyntaxError("empty expression", 0);
        NodePtr n = parse_expr();
        if (!at_end()) {
            const Token& t = peek();
            if (t.kind == TokenKind::rparen) throw SyntaxError("unbalanced parenthesis ')'", t.position);
            if (t.kind == TokenKind::comma) throw SyntaxError("unexpected ','", t.position);
            throw SyntaxError("unexpected '" + t.lexeme + "' (implicit multiplication is not allowed)", t.position);
        }
        return n;
    }

private:
    bool at_end() const { return pos_ >= toks_.size(); }
    const Token& peek() const { return toks_[pos_]; }
    std::size_t here() const { return at_end() ? end_pos_ : peek().position; }
    bool peek_op(char c) const {
        return !at_end() && peek().kind == TokenKind::op && peek().lexeme[0] == c;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (peek_op('+') || peek_op('-')) {
            const BinaryOp op = peek().lexeme[0] == '+' ? BinaryOp::add : BinaryOp::sub;
            ++pos_;
            lhs = Node::binary(op, lhs, parse_term());
        }
        return lhs;
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (peek_op('*') || peek_op('/')) {
            const BinaryOp op = peek().lexeme[0] == '*' ? BinaryOp::mul : BinaryOp::div;
            ++pos_;
            lhs = Node::binary(op, lhs, parse_unary());
        }
        return lhs;
    }

    NodePtr parse_unary() {
        if (peek_op('-')) {
            ++pos_;
            return Node::negate(parse_unary());
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (peek_op('^')) {
            ++pos_;
            return Node::binary(BinaryOp::pow, base, parse_unary());
        }
        return base;
    }

    NodePtr parse_primary() {
        if (at_end()) {
            if (!toks_.empty() && toks_.back().kind == TokenKind::lparen) {
                throw SyntaxError("unbalanced parenthesis: '(' is never closed", toks_.back().position);
            }
            throw SyntaxError("unexpected end of expression (dangling operator?)", end_pos_);
        }
        const Token& tok = peek();
        switch (tok.kind) {
        case TokenKind::number: {
            ++pos_;
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok.lexeme, &used);
            } catch (const std::out_of_range&) {
                throw SyntaxError("number out of range '" + tok.lexeme + "'", tok.position);
            }
            return Node::constant(v);
        }
        case TokenKind::identifier: {
            ++pos_;
            if (!at_end() && peek().kind == TokenKind::lparen) return parse_call(tok);
            if (tok.lexeme == "t") return Node::variable();
            if (tok.lexeme == "pi") return Node::constant(std::numbers::pi);
            if (tok.lexeme == "e") return Node::constant(std::numbers::e);
            if (function_from_name(tok.lexeme)) {
                throw SyntaxError("function '" + tok.lexeme + "' requires an argument list", tok.position);
            }
            throw SyntaxError("unknown identifier '" + tok.lexeme + "' (the only variable is t)", tok.position);
        }
        case TokenKind::lparen: {
            const std::size_t open = tok.position;
            ++pos_;
            NodePtr inner = parse_expr();
            expect_close(open);
            return inner;
        }
        case TokenKind::rparen:
            throw SyntaxError("unexpected ')'", tok.position);
        case TokenKind::comma:
            throw SyntaxError("unexpected ','", tok.position);
        case TokenKind::op:
            throw SyntaxError("dangling operator '" + tok.lexeme + "'", tok.position);
        }
        throw SyntaxError("unexpected token", tok.position);
    }

    NodePtr parse_call(const Token& name) {
        const auto fn = function_from_name(name.lexeme);
        if (!fn) throw SyntaxError("unknown function '" + name.lexeme + "'", name.position);
        const std::size_t open = peek().position;
        ++pos_;  // '('
        if (!at_end() && peek().kind == TokenKind::rparen) {
            throw SyntaxError("function '" + name.lexeme + "' takes exactly 1 argument, got 0", name.position);
        }
        NodePtr arg = parse_expr();
        if (!at_end() && peek().kind == TokenKind::comma) {
            throw SyntaxError("function '" + name.lexeme + "' takes exactly 1 argument", peek().position);
        }
        expect_close(open);
        return Node::call(*fn, arg);
    }

    void expect_close(std::size_t open) {
        if (at_end()) throw SyntaxError("unbalanced parenthesis: '(' is never closed", open);
        if (peek().kind != TokenKind::rparen) {
            throw SyntaxError("expected ')' but found '" + peek().lexeme + "'", peek().position);
        }
        ++pos_;
    }

    const std::vector<Token>& toks_;
    std::size_t end_pos_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// `source_length` is used to position end-of-input errors.
inline Expression parse(const std::vector<Token>& tokens, std::size_t source_length = 0, std::string source = {}) {
    if (source_length == 0 && !tokens.empty()) {
        source_length = tokens.back().position + tokens.back().lexeme.size();
    }
    detail::Parser p(tokens, source_length);
    return Expression(p.parse_all(), std::move(source));
}

inline Expression parse(std::string_view source) {
    return parse(tokenize(source), source.size(), std::string(source));
}

inline double evaluate(const Node& n, double t) {
    switch (n.kind) {
    case Node::Kind::constant: return n.value;
    case Node::Kind::variable: return t;
    case Node::Kind::negate: return -evaluate(*n.lhs, t);
    case Node::Kind::binary: {
        const double a = evaluate(*n.lhs, t);
        const double b = evaluate(*n.rhs, t);
        switch (n.op) {
        case BinaryOp::add: return a + b;
        case BinaryOp::sub: return a - b;
        case BinaryOp::mul: return a * b;
        case BinaryOp::div:
            if (b == 0.0) throw DomainError("division by zero", to_string(n));
            return a / b;
        case BinaryOp::pow:
            if (a < 0.0 && b != std::trunc(b)) {
                throw DomainError("negative base raised to a non-integer power", to_string(n));
            }
            if (a == 0.0 && b < 0.0) throw DomainError("zero raised to a negative power", to_string(n));
            return std::pow(a, b);
        }
        break;
    }
    case Node::Kind::call: {
        const double x = evaluate(*n.lhs, t);
        switch (n.fn) {
        case Function::sin: return std::sin(x);
        case Function::cos: return std::cos(x);
        case Function::tan: return std::tan(x);
        case Function::exp: return std::exp(x);
        case Function::log:
            if (!(x > 0.0)) throw DomainError("logarithm of a non-positive value", to_string(n));
            return std::log(x);
        case Function::sqrt:
            if (x < 0.0) throw DomainError("square root of a negative value", to_string(n));
            return std::sqrt(x);
        case Function::abs: return std::fabs(x);
        }
        break;
    }
    }
    throw std::logic_error("corrupt expression node");
}

inline double evaluate(const Expression& e, double t) { return evaluate(e.root(), t); }

}  // namespace fro::expr

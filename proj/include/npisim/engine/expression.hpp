#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace npisim::engine {

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset)
    {
    }
    std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

class EvalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class NodeKind { constant, reference, unary_minus, binary, call };

/// What a reference resolves to. Parsing leaves every reference `unresolved`;
/// the model compiler fills in the category and slot.
enum class RefKind { unresolved, stock, auxiliary, schedule };

enum class BinaryOp : char { add = '+', sub = '-', mul = '*', div = '/' };

enum class Function { min, max, clamp };

inline std::string_view function_name(Function f)
{
    switch (f) {
    case Function::min: return "min";
    case Function::max: return "max";
    case Function::clamp: return "clamp";
    }
    return "?";
}

struct Expr {
    NodeKind kind = NodeKind::constant;
    double value = 0.0;
    std::string name;
    RefKind ref_kind = RefKind::unresolved;
    std::size_t slot = 0;
    BinaryOp op = BinaryOp::add;
    Function func = Function::min;
    std::vector<Expr> children;

    static Expr constant(double v)
    {
        Expr e;
        e.kind = NodeKind::constant;
        e.value = v;
        return e;
    }
    static Expr reference(std::string n)
    {
        Expr e;
        e.kind = NodeKind::reference;
        e.name = std::move(n);
        return e;
    }
    static Expr negate(Expr operand)
    {
        Expr e;
        e.kind = NodeKind::unary_minus;
        e.children.push_back(std::move(operand));
        return e;
    }
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs)
    {
        Expr e;
        e.kind = NodeKind::binary;
        e.op = op;
        e.children.push_back(std::move(lhs));
        e.children.push_back(std::move(rhs));
        return e;
    }
    static Expr call(Function f, std::vector<Expr> args)
    {
        Expr e;
        e.kind = NodeKind::call;
        e.func = f;
        e.children = std::move(args);
        return e;
    }
};

/// Visits every reference node.
template <class Fn>
void for_each_reference(const Expr& e, Fn&& fn)
{
    if (e.kind == NodeKind::reference) {
        fn(e);
    }
    for (const auto& c : e.children) {
        for_each_reference(c, fn);
    }
}

template <class Fn>
void for_each_reference(Expr& e, Fn&& fn)
{
    if (e.kind == NodeKind::reference) {
        fn(e);
    }
    for (auto& c : e.children) {
        for_each_reference(c, fn);
    }
}

inline std::set<std::string> referenced_names(const Expr& e)
{
    std::set<std::string> out;
    for_each_reference(e, [&](const Expr& r) { out.insert(r.name); });
    return out;
}

namespace detail {

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse()
    {
        skip_ws();
        if (pos_ >= text_.size()) {
            throw ParseError("empty expression", pos_);
        }
        Expr e = parse_sum();
        skip_ws();
        if (pos_ < text_.size()) {
            throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        }
        return e;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_sum()
    {
        Expr lhs = parse_product();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(BinaryOp::add, std::move(lhs), parse_product());
            }
            else if (accept('-')) {
                lhs = Expr::binary(BinaryOp::sub, std::move(lhs), parse_product());
            }
            else {
                return lhs;
            }
        }
    }

    Expr parse_product()
    {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(BinaryOp::mul, std::move(lhs), parse_unary());
            }
            else if (accept('/')) {
                lhs = Expr::binary(BinaryOp::div, std::move(lhs), parse_unary());
            }
            else {
                return lhs;
            }
        }
    }

    Expr parse_unary()
    {
        if (accept('-')) {
            return Expr::negate(parse_unary());
        }
        if (accept('+')) {
            return parse_unary();
        }
        return parse_primary();
    }

    Expr parse_primary()
    {
        skip_ws();
        if (pos_ >= text_.size()) {
            throw ParseError("unexpected end of expression", pos_);
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = parse_sum();
            if (!accept(')')) {
                throw ParseError("expected ')'", pos_);
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return parse_identifier();
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    Expr parse_number()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) {
                ++p;
            }
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                pos_ = p;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    ++pos_;
                }
            }
        }
        const std::string literal(text_.substr(start, pos_ - start));
        char* end = nullptr;
        const double v = std::strtod(literal.c_str(), &end);
        if (end != literal.c_str() + literal.size()) {
            throw ParseError("malformed number '" + literal + "'", start);
        }
        return Expr::constant(v);
    }

    Expr parse_identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        std::string ident(text_.substr(start, pos_ - start));
        if (!accept('(')) {
            return Expr::reference(std::move(ident));
        }
        Function f;
        std::size_t arity;
        if (ident == "min") {
            f = Function::min;
            arity = 2;
        }
        else if (ident == "max") {
            f = Function::max;
            arity = 2;
        }
        else if (ident == "clamp") {
            f = Function::clamp;
            arity = 3;
        }
        else {
            throw ParseError("unknown function '" + ident + "'", start);
        }
        std::vector<Expr> args;
        args.push_back(parse_sum());
        while (accept(',')) {
            args.push_back(parse_sum());
        }
        if (!accept(')')) {
            throw ParseError("expected ')' or ','", pos_);
        }
        if (args.size() != arity) {
            throw ParseError(ident + " expects " + std::to_string(arity) + " arguments, got " +
                                 std::to_string(args.size()),
                             start);
        }
        return Expr::call(f, std::move(args));
    }
};

} // namespace detail

/// Parses the closed arithmetic grammar: numbers, identifiers, unary minus,
/// `+ - * /` with the usual precedence, parentheses, and min/max/clamp.
inline Expr parse_expression(std::string_view text)
{
    return detail::Parser(text).parse();
}

/// Evaluates `e`, resolving references through `lookup(const Expr&) -> double`.
template <class Lookup>
double evaluate(const Expr& e, Lookup&& lookup)
{
    switch (e.kind) {
    case NodeKind::constant:
        return e.value;
    case NodeKind::reference:
        return lookup(e);
    case NodeKind::unary_minus:
        return -evaluate(e.children[0], lookup);
    case NodeKind::binary: {
        const double a = evaluate(e.children[0], lookup);
        const double b = evaluate(e.children[1], lookup);
        switch (e.op) {
        case BinaryOp::add: return a + b;
        case BinaryOp::sub: return a - b;
        case BinaryOp::mul: return a * b;
        case BinaryOp::div:
            if (b == 0.0) {
                throw EvalError("division by zero");
            }
            return a / b;
        }
        break;
    }
    case NodeKind::call: {
        const double a = evaluate(e.children[0], lookup);
        const double b = evaluate(e.children[1], lookup);
        switch (e.func) {
        case Function::min: return std::min(a, b);
        case Function::max: return std::max(a, b);
        case Function::clamp: return std::min(std::max(a, b), evaluate(e.children[2], lookup));
        }
        break;
    }
    }
    throw EvalError("corrupt expression node");
}

inline double eval_expression(const Expr& e, const std::map<std::string, double, std::less<>>& env)
{
    return evaluate(e, [&](const Expr& ref) {
        const auto it = env.find(ref.name);
        if (it == env.end()) {
            throw EvalError("unbound reference '" + ref.name + "'");
        }
        return it->second;
    });
}

/// Fully parenthesised rendering, used in diagnostics and tests.
inline std::string to_string(const Expr& e)
{
    switch (e.kind) {
    case NodeKind::constant: {
        char buf[32];
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, e.value);
        return std::string(buf, p);
    }
    case NodeKind::reference:
        return e.name;
    case NodeKind::unary_minus:
        return "(-" + to_string(e.children[0]) + ")";
    case NodeKind::binary:
        return "(" + to_string(e.children[0]) + " " + static_cast<char>(e.op) + " " +
               to_string(e.children[1]) + ")";
    case NodeKind::call: {
        std::string s(function_name(e.func));
        s += "(";
        for (std::size_t i = 0; i < e.children.size(); ++i) {
            s += (i ? ", " : "") + to_string(e.children[i]);
        }
        return s + ")";
    }
    }
    return "?";
}

} // namespace npisim::engine

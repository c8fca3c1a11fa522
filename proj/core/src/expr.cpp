#include "alvc/expr.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <optional>

namespace alvc {

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr binary(Expr::Kind k, NodePtr a, NodePtr b) {
    Node n;
    n.kind = k;
    n.a = std::move(a);
    n.b = std::move(b);
    return make(std::move(n));
}

struct Token {
    enum class Type { Number, Ident, Sym, End } type;
    std::size_t offset;
    std::string text; // for Ident / Sym
    double value = 0; // for Number
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        tok_.offset = pos_;
        if (pos_ >= src_.size()) {
            tok_.type = Token::Type::End;
            tok_.text = "end of input";
            return;
        }
        const char ch = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch)) ||
            (ch == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(ch))) {
            std::size_t end = pos_;
            while (end < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
                ++end;
            tok_.type = Token::Type::Ident;
            tok_.text = src_.substr(pos_, end - pos_);
            pos_ = end;
            return;
        }
        static const std::string symbols = "+-*/^()";
        if (symbols.find(ch) != std::string::npos) {
            tok_.type = Token::Type::Sym;
            tok_.text = std::string(1, ch);
            ++pos_;
            return;
        }
        throw ParseError(pos_, "a number, identifier, operator or parenthesis",
                         std::string("unexpected character '") + ch + "'");
    }

    void lex_number() {
        std::size_t end = pos_;
        while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end])))
                ++end;
        }
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t expo = end + 1;
            if (expo < src_.size() && (src_[expo] == '+' || src_[expo] == '-')) ++expo;
            if (expo < src_.size() && std::isdigit(static_cast<unsigned char>(src_[expo]))) {
                ++expo;
                while (expo < src_.size() &&
                       std::isdigit(static_cast<unsigned char>(src_[expo])))
                    ++expo;
                end = expo;
            }
        }
        const std::string text = src_.substr(pos_, end - pos_);
        tok_.type = Token::Type::Number;
        tok_.value = std::strtod(text.c_str(), nullptr);
        tok_.text = text;
        pos_ = end;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    Token tok_;
};

std::optional<Expr::Fn> function_by_name(const std::string& name) {
    if (name == "sin") return Expr::Fn::Sin;
    if (name == "cos") return Expr::Fn::Cos;
    if (name == "exp") return Expr::Fn::Exp;
    if (name == "log") return Expr::Fn::Log;
    if (name == "sqrt") return Expr::Fn::Sqrt;
    if (name == "tanh") return Expr::Fn::Tanh;
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    NodePtr parse_all() {
        NodePtr e = parse_expr();
        const Token& t = lex_.peek();
        if (t.type != Token::Type::End)
            throw ParseError(t.offset, "an operator or end of input",
                             "trailing input '" + t.text + "'");
        return e;
    }

private:
    bool at_sym(const char* s) const {
        return lex_.peek().type == Token::Type::Sym && lex_.peek().text == s;
    }

    void expect_sym(const char* s, const char* expected) {
        if (!at_sym(s))
            throw ParseError(lex_.peek().offset, expected,
                             "found '" + lex_.peek().text + "'");
        lex_.take();
    }

    NodePtr parse_expr() {
        NodePtr e = parse_term();
        while (at_sym("+") || at_sym("-")) {
            const bool plus = at_sym("+");
            lex_.take();
            e = binary(plus ? Expr::Kind::Add : Expr::Kind::Sub, e, parse_term());
        }
        return e;
    }

    NodePtr parse_term() {
        NodePtr e = parse_unary();
        while (at_sym("*") || at_sym("/")) {
            const bool mul = at_sym("*");
            lex_.take();
            e = binary(mul ? Expr::Kind::Mul : Expr::Kind::Div, e, parse_unary());
        }
        return e;
    }

    NodePtr parse_unary() {
        if (at_sym("-")) {
            lex_.take();
            Node n;
            n.kind = Expr::Kind::Neg;
            n.a = parse_unary();
            return make(std::move(n));
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (at_sym("^")) {
            lex_.take();
            // right associative; the exponent may carry its own unary minus
            return binary(Expr::Kind::Pow, base, parse_unary());
        }
        return base;
    }

    NodePtr parse_primary() {
        const Token& t = lex_.peek();
        switch (t.type) {
        case Token::Type::Number: {
            Token num = lex_.take();
            Node n;
            n.kind = Expr::Kind::Number;
            n.number = num.value;
            return make(std::move(n));
        }
        case Token::Type::Ident: {
            Token id = lex_.take();
            if (at_sym("(")) {
                auto fn = function_by_name(id.text);
                if (!fn)
                    throw ParseError(id.offset, "one of sin, cos, exp, log, sqrt, tanh",
                                     "unknown function '" + id.text + "'");
                lex_.take(); // '('
                Node n;
                n.kind = Expr::Kind::Call;
                n.fn = *fn;
                n.a = parse_expr();
                expect_sym(")", "')' closing the function argument");
                return make(std::move(n));
            }
            if (id.text == "pi") {
                Node n;
                n.kind = Expr::Kind::Pi;
                return make(std::move(n));
            }
            Node n;
            n.kind = Expr::Kind::Var;
            n.name = id.text;
            return make(std::move(n));
        }
        case Token::Type::Sym:
            if (t.text == "(") {
                lex_.take();
                NodePtr e = parse_expr();
                expect_sym(")", "')' closing the group");
                return e;
            }
            throw ParseError(t.offset, "a number, identifier, '-' or '('",
                             "found '" + t.text + "'");
        case Token::Type::End:
            throw ParseError(t.offset, "a number, identifier, '-' or '('",
                             "unexpected end of input");
        }
        throw ParseError(t.offset, "a token", "lexer failure");
    }

    Lexer lex_;
};

int precedence(Expr::Kind k) {
    switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
    }
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int parent_prec, bool needs_paren_at_equal,
                 std::string& out) {
    const int p = precedence(child.kind);
    const bool paren = p < parent_prec || (p == parent_prec && needs_paren_at_equal);
    if (paren) out += '(';
    print_node(child, out);
    if (paren) out += ')';
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
    case Expr::Kind::Number:
        out += format_number(n.number);
        return;
    case Expr::Kind::Pi:
        out += "pi";
        return;
    case Expr::Kind::Var:
        out += n.name;
        return;
    case Expr::Kind::Neg:
        out += '-';
        print_child(*n.a, precedence(n.kind), false, out);
        return;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
    case Expr::Kind::Div: {
        const char* op = n.kind == Expr::Kind::Add   ? " + "
                         : n.kind == Expr::Kind::Sub ? " - "
                         : n.kind == Expr::Kind::Mul ? "*"
                                                     : "/";
        // Left-associative: an equal-precedence right child must keep its
        // parentheses or reparsing would regroup it.
        print_child(*n.a, precedence(n.kind), false, out);
        out += op;
        print_child(*n.b, precedence(n.kind), true, out);
        return;
    }
    case Expr::Kind::Pow:
        // Right-associative: mirror image of the binary case above.  A unary
        // minus base also needs parentheses ('-a^2' parses as -(a^2)).
        print_child(*n.a, precedence(n.kind), true, out);
        out += '^';
        print_child(*n.b, precedence(n.kind), false, out);
        return;
    case Expr::Kind::Call: {
        const char* name = nullptr;
        switch (n.fn) {
        case Expr::Fn::Sin: name = "sin"; break;
        case Expr::Fn::Cos: name = "cos"; break;
        case Expr::Fn::Exp: name = "exp"; break;
        case Expr::Fn::Log: name = "log"; break;
        case Expr::Fn::Sqrt: name = "sqrt"; break;
        case Expr::Fn::Tanh: name = "tanh"; break;
        }
        out += name;
        out += '(';
        print_node(*n.a, out);
        out += ')';
        return;
    }
    }
}

void collect_vars(const Node& n, std::set<std::string>& out) {
    if (n.kind == Expr::Kind::Var) out.insert(n.name);
    if (n.a) collect_vars(*n.a, out);
    if (n.b) collect_vars(*n.b, out);
}

NodePtr rename_node(const NodePtr& n, const std::map<std::string, std::string>& mapping) {
    if (!n) return nullptr;
    if (n->kind == Expr::Kind::Var) {
        auto it = mapping.find(n->name);
        if (it == mapping.end()) return n;
        Node copy = *n;
        copy.name = it->second;
        return make(std::move(copy));
    }
    NodePtr a = rename_node(n->a, mapping);
    NodePtr b = rename_node(n->b, mapping);
    if (a == n->a && b == n->b) return n;
    Node copy = *n;
    copy.a = std::move(a);
    copy.b = std::move(b);
    return make(std::move(copy));
}

} // namespace

Expr parse(const std::string& source) {
    Parser p(source);
    return Expr(p.parse_all());
}

std::string print(const Expr& e) {
    std::string out;
    print_node(e.root(), out);
    return out;
}

std::set<std::string> free_vars(const Expr& e) {
    std::set<std::string> out;
    collect_vars(e.root(), out);
    return out;
}

Expr rename_vars(const Expr& e, const std::map<std::string, std::string>& mapping) {
    return Expr(rename_node(e.ptr(), mapping));
}

} // namespace alvc

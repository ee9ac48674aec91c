#include "geoduel/expr.hpp"

#include <charconv>
#include <cstdio>
#include <map>

namespace geoduel {

namespace {

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Kind kind;
    double number = 0.0;
    std::string_view text;
    int pos = 0; // 1-based column
};

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (i_ < src_.size() && (src_[i_] == ' ' || src_[i_] == '\t' || src_[i_] == '\n' || src_[i_] == '\r'))
            ++i_;
        current_.pos = static_cast<int>(i_) + 1;
        if (i_ >= src_.size()) {
            current_.kind = Token::Kind::End;
            current_.text = "end of input";
            return;
        }
        const char c = src_[i_];
        switch (c) {
            case '+': single(Token::Kind::Plus); return;
            case '-': single(Token::Kind::Minus); return;
            case '*': single(Token::Kind::Star); return;
            case '/': single(Token::Kind::Slash); return;
            case '^': single(Token::Kind::Caret); return;
            case '(': single(Token::Kind::LParen); return;
            case ')': single(Token::Kind::RParen); return;
            default: break;
        }
        if ((c >= '0' && c <= '9') || c == '.') {
            size_t j = i_;
            while (j < src_.size() && ((src_[j] >= '0' && src_[j] <= '9') || src_[j] == '.')) ++j;
            if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
                size_t k = j + 1;
                if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
                if (k < src_.size() && src_[k] >= '0' && src_[k] <= '9') {
                    while (k < src_.size() && src_[k] >= '0' && src_[k] <= '9') ++k;
                    j = k;
                }
            }
            double value = 0.0;
            const auto rc = std::from_chars(src_.data() + i_, src_.data() + j, value);
            if (rc.ec != std::errc{} || rc.ptr != src_.data() + j)
                fail(ErrorKind::SyntaxError,
                     "malformed number '" + std::string(src_.substr(i_, j - i_)) + "' at column " +
                         std::to_string(i_ + 1));
            current_.kind = Token::Kind::Number;
            current_.number = value;
            current_.text = src_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
            size_t j = i_;
            while (j < src_.size() &&
                   ((src_[j] >= 'a' && src_[j] <= 'z') || (src_[j] >= 'A' && src_[j] <= 'Z') ||
                    (src_[j] >= '0' && src_[j] <= '9') || src_[j] == '_'))
                ++j;
            current_.kind = Token::Kind::Ident;
            current_.text = src_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        fail(ErrorKind::SyntaxError,
             "unexpected character '" + std::string(1, c) + "' at column " + std::to_string(i_ + 1));
    }

    void single(Token::Kind k) {
        current_.kind = k;
        current_.text = src_.substr(i_, 1);
        ++i_;
    }

    std::string_view src_;
    size_t i_ = 0;
    Token current_;
};

class Parser {
  public:
    Parser(std::string_view text, std::span<const std::string> coords,
           std::span<const std::string> params)
        : lex_(text) {
        expr_.coord_names.assign(coords.begin(), coords.end());
        expr_.param_names.assign(params.begin(), params.end());
        expr_.dim = static_cast<int>(coords.size());
    }

    Expr run() {
        expr_.root = parse_sum();
        if (lex_.peek().kind != Token::Kind::End) unexpected(lex_.peek());
        return std::move(expr_);
    }

  private:
    int parse_sum() {
        int left = parse_product();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Kind::Plus) {
                const int pos = lex_.take().pos;
                left = add_node(Expr::Op::Add, left, parse_product(), pos);
            } else if (t.kind == Token::Kind::Minus) {
                const int pos = lex_.take().pos;
                left = add_node(Expr::Op::Sub, left, parse_product(), pos);
            } else {
                return left;
            }
        }
    }

    int parse_product() {
        int left = parse_unary();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Kind::Star) {
                const int pos = lex_.take().pos;
                left = add_node(Expr::Op::Mul, left, parse_unary(), pos);
            } else if (t.kind == Token::Kind::Slash) {
                const int pos = lex_.take().pos;
                left = add_node(Expr::Op::Div, left, parse_unary(), pos);
            } else {
                return left;
            }
        }
    }

    int parse_unary() {
        if (lex_.peek().kind == Token::Kind::Minus) {
            const int pos = lex_.take().pos;
            const int child = parse_unary();
            return add_node(Expr::Op::Neg, child, -1, pos);
        }
        return parse_power();
    }

    int parse_power() {
        const int base = parse_atom();
        if (lex_.peek().kind != Token::Kind::Caret) return base;
        const int pos = lex_.take().pos;
        // Right associative; the exponent may itself start with a unary
        // minus (x^-2).
        const int expn = parse_unary();
        return add_node(Expr::Op::Pow, base, expn, pos);
    }

    int parse_atom() {
        Token t = lex_.take();
        switch (t.kind) {
            case Token::Kind::Number: {
                Expr::Node n;
                n.op = Expr::Op::Literal;
                n.literal = t.number;
                n.pos = t.pos;
                return push(n);
            }
            case Token::Kind::LParen: {
                const int inner = parse_sum();
                expect_rparen();
                return inner;
            }
            case Token::Kind::Ident: return parse_ident(t);
            default: unexpected(t);
        }
    }

    int parse_ident(const Token& t) {
        static const std::map<std::string_view, Expr::Fn> kFunctions = {
            {"exp", Expr::Fn::Exp},  {"log", Expr::Fn::Log},   {"sin", Expr::Fn::Sin},
            {"cos", Expr::Fn::Cos},  {"sqrt", Expr::Fn::Sqrt}, {"tanh", Expr::Fn::Tanh},
        };
        if (auto it = kFunctions.find(t.text); it != kFunctions.end()) {
            if (lex_.peek().kind != Token::Kind::LParen)
                fail(ErrorKind::SyntaxError, "expected '(' after function '" + std::string(t.text) +
                                                 "' at column " + std::to_string(lex_.peek().pos));
            lex_.take();
            const int arg = parse_sum();
            expect_rparen();
            Expr::Node n;
            n.op = Expr::Op::Fn;
            n.fn = it->second;
            n.a = arg;
            n.pos = t.pos;
            return push(n);
        }
        for (size_t i = 0; i < expr_.coord_names.size(); ++i) {
            if (expr_.coord_names[i] == t.text) {
                Expr::Node n;
                n.op = Expr::Op::Var;
                n.index = static_cast<int>(i);
                n.pos = t.pos;
                return push(n);
            }
        }
        for (size_t i = 0; i < expr_.param_names.size(); ++i) {
            if (expr_.param_names[i] == t.text) {
                Expr::Node n;
                n.op = Expr::Op::Param;
                n.index = static_cast<int>(i);
                n.pos = t.pos;
                return push(n);
            }
        }
        fail(ErrorKind::UnknownIdentifier,
             "'" + std::string(t.text) + "' at column " + std::to_string(t.pos) +
                 " is neither a coordinate, a parameter nor a function");
    }

    void expect_rparen() {
        Token t = lex_.take();
        if (t.kind != Token::Kind::RParen) unexpected(t);
    }

    [[noreturn]] void unexpected(const Token& t) {
        fail(ErrorKind::SyntaxError, "unexpected token '" + std::string(t.text) + "' at column " +
                                         std::to_string(t.pos));
    }

    int add_node(Expr::Op op, int a, int b, int pos) {
        Expr::Node n;
        n.op = op;
        n.a = a;
        n.b = b;
        n.pos = pos;
        return push(n);
    }

    int push(const Expr::Node& n) {
        expr_.nodes.push_back(n);
        return static_cast<int>(expr_.nodes.size()) - 1;
    }

    Lexer lex_;
    Expr expr_;
};

void print_node(const Expr& e, int id, std::string& out, int parent_prec) {
    static const char* kFnNames[] = {"exp", "log", "sin", "cos", "sqrt", "tanh"};
    const Expr::Node& n = e.nodes[static_cast<size_t>(id)];
    auto binary = [&](const char* sym, int prec, bool right_tighter) {
        const bool parens = prec < parent_prec;
        if (parens) out += '(';
        print_node(e, n.a, out, prec);
        out += sym;
        print_node(e, n.b, out, prec + (right_tighter ? 1 : 0));
        if (parens) out += ')';
    };
    switch (n.op) {
        case Expr::Op::Literal: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", n.literal);
            out += buf;
            break;
        }
        case Expr::Op::Var: out += e.coord_names[static_cast<size_t>(n.index)]; break;
        case Expr::Op::Param: out += e.param_names[static_cast<size_t>(n.index)]; break;
        case Expr::Op::Add: binary(" + ", 1, false); break;
        case Expr::Op::Sub: binary(" - ", 1, true); break;
        case Expr::Op::Mul: binary("*", 2, false); break;
        case Expr::Op::Div: binary("/", 2, true); break;
        case Expr::Op::Neg:
            out += '-';
            print_node(e, n.a, out, 3);
            break;
        case Expr::Op::Pow: {
            const bool parens = 4 < parent_prec;
            if (parens) out += '(';
            print_node(e, n.a, out, 5);
            out += '^';
            print_node(e, n.b, out, 4);
            if (parens) out += ')';
            break;
        }
        case Expr::Op::Fn:
            out += kFnNames[static_cast<size_t>(n.fn)];
            out += '(';
            print_node(e, n.a, out, 0);
            out += ')';
            break;
    }
}

} // namespace

Expr parse_expr(std::string_view text, std::span<const std::string> coords,
                std::span<const std::string> params) {
    if (coords.empty()) fail(ErrorKind::InvalidArgument, "coordinate list must be nonempty");
    return Parser(text, coords, params).run();
}

std::string to_string(const Expr& e) { return to_string(e, e.root); }

std::string to_string(const Expr& e, int node) {
    std::string out;
    if (node >= 0) print_node(e, node, out, 0);
    return out;
}

namespace detail {

void throw_domain(const Expr& e, int node, const char* what) {
    fail(ErrorKind::DomainError, std::string(what) + " in subexpression '" + to_string(e, node) +
                                     "' (column " +
                                     std::to_string(e.nodes[static_cast<size_t>(node)].pos) + ")");
}

} // namespace detail

Jet2 eval_jet2(const Expr& e, std::span<const double> point, std::span<const double> params) {
    if (static_cast<int>(point.size()) != e.dim)
        fail(ErrorKind::InvalidArgument, "point dimension does not match expression chart");
    const std::vector<Jet2> vars = jet_variables(point);
    Jet2 out = eval_expr<double>(e, vars, params);
    // constant expressions come back dimension 0; widen so callers can index
    if (out.dim < e.dim) out = out + Jet2::constant(e.dim, 0.0);
    return out;
}

VectorFieldJets eval_vector_field(const VectorFieldSpec& spec, std::span<const double> point,
                                  std::span<const double> params) {
    const int n = static_cast<int>(point.size());
    if (spec.dim() != n)
        fail(ErrorKind::InvalidArgument, "vector field component count does not match chart");
    VectorFieldJets out;
    out.n = n;
    out.v.assign(static_cast<size_t>(n), 0.0);
    out.dv.assign(static_cast<size_t>(n) * n, 0.0);
    out.ddv.assign(static_cast<size_t>(n) * n * n, 0.0);
    for (int m = 0; m < n; ++m) {
        const Jet2 jet = eval_jet2(spec.components[static_cast<size_t>(m)], point, params);
        out.v[static_cast<size_t>(m)] = jet.value;
        for (int a = 0; a < n; ++a) {
            out.dv[static_cast<size_t>(a) * n + m] = jet.g(a);
            for (int b = 0; b < n; ++b)
                out.ddv[(static_cast<size_t>(a) * n + b) * n + m] = jet.h(a, b);
        }
    }
    return out;
}

} // namespace geoduel

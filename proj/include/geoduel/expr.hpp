#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geoduel/taylor.hpp"

namespace geoduel {

// Scalar-field expression over chart coordinates and named parameters.
// Coordinates are addressed by index after parsing; names survive only for
// diagnostics and printing. Trees are immutable once parsed, so evaluation
// is pure and freely concurrent.
struct Expr {
    enum class Op : uint8_t { Literal, Var, Param, Add, Sub, Mul, Div, Neg, Pow, Fn };
    enum class Fn : uint8_t { Exp, Log, Sin, Cos, Sqrt, Tanh };

    struct Node {
        Op op;
        Fn fn = Fn::Exp;
        double literal = 0.0;
        int index = -1; // coordinate or parameter id
        int a = -1;     // children
        int b = -1;
        int pos = 0;    // 1-based column in the source text
    };

    std::vector<Node> nodes;
    int root = -1;
    int dim = 0;
    std::vector<std::string> coord_names;
    std::vector<std::string> param_names;

    bool valid() const { return root >= 0; }
};

// Parses an infix expression. Precedence: ^ (right assoc) > unary minus >
// * / > + -. Function application is `name(arg)`. Numbers are decimal
// doubles. Throws SyntaxError (with a 1-based column) or UnknownIdentifier.
Expr parse_expr(std::string_view text, std::span<const std::string> coords,
                std::span<const std::string> params = {});

std::string to_string(const Expr& e);
std::string to_string(const Expr& e, int node); // subexpression printer

namespace detail {

[[noreturn]] void throw_domain(const Expr& e, int node, const char* what);

} // namespace detail

// Evaluates an expression over any jet scalar. Variable slot i receives
// vars[i]; parameters bind positionally against expr.param_names. Domain
// checks (log, sqrt, division, real powers) inspect the leading value and
// report the offending subexpression.
template <typename S>
Taylor2<S> eval_expr(const Expr& e, std::span<const Taylor2<S>> vars, std::span<const S> params) {
    if (!e.valid()) fail(ErrorKind::InvalidArgument, "empty expression");
    if (static_cast<int>(vars.size()) < e.dim)
        fail(ErrorKind::InvalidArgument, "point has fewer slots than the expression's chart");
    if (params.size() < e.param_names.size())
        fail(ErrorKind::InvalidArgument, "unbound parameter in expression");

    std::vector<Taylor2<S>> memo(e.nodes.size());
    // Nodes are created children-first, so a forward pass is a topological
    // order.
    for (size_t id = 0; id < e.nodes.size(); ++id) {
        const Expr::Node& nd = e.nodes[id];
        const int ia = nd.a;
        const int ib = nd.b;
        switch (nd.op) {
            case Expr::Op::Literal: memo[id] = Taylor2<S>(nd.literal); break;
            case Expr::Op::Var: memo[id] = vars[static_cast<size_t>(nd.index)]; break;
            case Expr::Op::Param: memo[id] = Taylor2<S>(params[static_cast<size_t>(nd.index)]); break;
            case Expr::Op::Add: memo[id] = memo[ia] + memo[ib]; break;
            case Expr::Op::Sub: memo[id] = memo[ia] - memo[ib]; break;
            case Expr::Op::Mul: memo[id] = memo[ia] * memo[ib]; break;
            case Expr::Op::Div:
                if (lead_value(memo[ib]) == 0.0) detail::throw_domain(e, ib, "division by zero");
                memo[id] = memo[ia] / memo[ib];
                break;
            case Expr::Op::Neg: memo[id] = -memo[ia]; break;
            case Expr::Op::Pow: {
                const Taylor2<S>& expn = memo[ib];
                bool constant = true;
                for (int i = 0; i < expn.dim && constant; ++i)
                    if (lead_value(expn.g(i)) != 0.0 || lead_value(expn.h(i, i)) != 0.0) constant = false;
                if (!constant)
                    detail::throw_domain(e, ib, "exponent must not depend on coordinates");
                const double p = lead_value(expn);
                if (std::floor(p) == p && std::abs(p) <= 64.0) {
                    const long long k = static_cast<long long>(p);
                    if (k < 0 && lead_value(memo[ia]) == 0.0)
                        detail::throw_domain(e, ia, "zero base with negative exponent");
                    memo[id] = pow_int(memo[ia], k);
                } else {
                    if (lead_value(memo[ia]) <= 0.0)
                        detail::throw_domain(e, ia, "non-integer power of a non-positive base");
                    memo[id] = pow_real(memo[ia], p);
                }
                break;
            }
            case Expr::Op::Fn:
                switch (nd.fn) {
                    case Expr::Fn::Exp: memo[id] = exp(memo[ia]); break;
                    case Expr::Fn::Log:
                        if (lead_value(memo[ia]) <= 0.0)
                            detail::throw_domain(e, ia, "log of a non-positive value");
                        memo[id] = log(memo[ia]);
                        break;
                    case Expr::Fn::Sin: memo[id] = sin(memo[ia]); break;
                    case Expr::Fn::Cos: memo[id] = cos(memo[ia]); break;
                    case Expr::Fn::Sqrt:
                        if (lead_value(memo[ia]) < 0.0)
                            detail::throw_domain(e, ia, "sqrt of a negative value");
                        memo[id] = sqrt(memo[ia]);
                        break;
                    case Expr::Fn::Tanh: memo[id] = tanh(memo[ia]); break;
                }
                break;
        }
    }
    return memo[static_cast<size_t>(e.root)];
}

// Value, gradient and hessian of the field at a chart point, exact to
// machine rounding.
Jet2 eval_jet2(const Expr& e, std::span<const double> point, std::span<const double> params = {});

// Contravariant components of a vector field, one expression per slot.
struct VectorFieldSpec {
    std::vector<Expr> components;

    int dim() const { return static_cast<int>(components.size()); }
};

// Vector field evaluated at a point together with first and second
// derivatives: v[m], dv[a][m] = d_a v^m, ddv[a][b][m].
struct VectorFieldJets {
    int n = 0;
    std::vector<double> v;
    std::vector<double> dv;
    std::vector<double> ddv;

    double dval(int a, int m) const { return dv[static_cast<size_t>(a) * n + m]; }
    double ddval(int a, int b, int m) const {
        return ddv[(static_cast<size_t>(a) * n + b) * n + m];
    }
};

VectorFieldJets eval_vector_field(const VectorFieldSpec& spec, std::span<const double> point,
                                  std::span<const double> params = {});

} // namespace geoduel

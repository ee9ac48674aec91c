#pragma once

#include <cmath>
#include <concepts>
#include <span>
#include <vector>

#include "geoduel/errors.hpp"

namespace geoduel {

// Scalar fallbacks so the templates below close over plain doubles.
inline double lead_value(double x) { return x; }
inline double pow_real(double x, double p) { return std::pow(x, p); }

template <typename S> struct Taylor2;
template <typename S> double lead_value(const Taylor2<S>& x);

// Truncated second-order Taylor value: carries f, grad f and hess f with
// respect to `dim` directions. Constants are dimension 0 and broadcast, so
// mixed-dimension arithmetic never needs explicit widening. The hessian is
// written through mirrored assignments, keeping it symmetric bit for bit.
//
// The scalar type S is any ring supporting the same function set, which
// makes Taylor2<Taylor2<double>> a fourth-order object; the information
// geometry code uses that nesting to push derivatives through quadrature.
template <typename S>
struct Taylor2 {
    int dim = 0;
    S value{};
    std::vector<S> grad;
    std::vector<S> hess; // dim*dim, row major

    Taylor2() = default;
    Taylor2(double v) : value(v) {} // NOLINT: implicit by design (literals)
    explicit Taylor2(const S& v)
        requires(!std::same_as<S, double>)
        : value(v) {}

    static Taylor2 constant(int n, const S& v) {
        Taylor2 t;
        t.dim = n;
        t.value = v;
        t.grad.assign(static_cast<size_t>(n), S{});
        t.hess.assign(static_cast<size_t>(n) * n, S{});
        return t;
    }

    static Taylor2 variable(int n, int index, const S& v) {
        Taylor2 t = constant(n, v);
        t.grad[static_cast<size_t>(index)] = S(1.0);
        return t;
    }

    const S& g(int i) const {
        static const S zero{};
        return grad.empty() ? zero : grad[static_cast<size_t>(i)];
    }
    const S& h(int i, int j) const {
        static const S zero{};
        return hess.empty() ? zero : hess[static_cast<size_t>(i) * dim + j];
    }
    S& gref(int i) { return grad[static_cast<size_t>(i)]; }
    S& href(int i, int j) { return hess[static_cast<size_t>(i) * dim + j]; }
};

using Jet2 = Taylor2<double>;

template <typename S>
double lead_value(const Taylor2<S>& x) {
    return lead_value(x.value);
}

namespace detail {

// Widen a constant-or-full jet pair to a common dimension.
template <typename S>
int common_dim(const Taylor2<S>& a, const Taylor2<S>& b) {
    return a.dim > b.dim ? a.dim : b.dim;
}

} // namespace detail

template <typename S>
Taylor2<S> operator-(const Taylor2<S>& x) {
    Taylor2<S> r = x;
    r.value = -r.value;
    for (auto& v : r.grad) v = -v;
    for (auto& v : r.hess) v = -v;
    return r;
}

template <typename S>
Taylor2<S> operator+(const Taylor2<S>& a, const Taylor2<S>& b) {
    const int n = detail::common_dim(a, b);
    Taylor2<S> r = Taylor2<S>::constant(n, a.value + b.value);
    for (int i = 0; i < n; ++i) r.gref(i) = a.g(i) + b.g(i);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            r.href(i, j) = a.h(i, j) + b.h(i, j);
            r.href(j, i) = r.h(i, j);
        }
    return r;
}

template <typename S>
Taylor2<S> operator-(const Taylor2<S>& a, const Taylor2<S>& b) {
    const int n = detail::common_dim(a, b);
    Taylor2<S> r = Taylor2<S>::constant(n, a.value - b.value);
    for (int i = 0; i < n; ++i) r.gref(i) = a.g(i) - b.g(i);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            r.href(i, j) = a.h(i, j) - b.h(i, j);
            r.href(j, i) = r.h(i, j);
        }
    return r;
}

template <typename S>
Taylor2<S> operator*(const Taylor2<S>& a, const Taylor2<S>& b) {
    const int n = detail::common_dim(a, b);
    Taylor2<S> r = Taylor2<S>::constant(n, a.value * b.value);
    for (int i = 0; i < n; ++i) r.gref(i) = a.value * b.g(i) + b.value * a.g(i);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            r.href(i, j) = a.value * b.h(i, j) + b.value * a.h(i, j) + a.g(i) * b.g(j) + a.g(j) * b.g(i);
            r.href(j, i) = r.h(i, j);
        }
    return r;
}

// q = a/b from a = q*b: gq = (ga - q0*gb)/b0, and the hessian follows from
// one more product-rule pass.
template <typename S>
Taylor2<S> operator/(const Taylor2<S>& a, const Taylor2<S>& b) {
    const int n = detail::common_dim(a, b);
    Taylor2<S> r = Taylor2<S>::constant(n, a.value / b.value);
    for (int i = 0; i < n; ++i) r.gref(i) = (a.g(i) - r.value * b.g(i)) / b.value;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            r.href(i, j) =
                (a.h(i, j) - r.value * b.h(i, j) - r.g(i) * b.g(j) - r.g(j) * b.g(i)) / b.value;
            r.href(j, i) = r.h(i, j);
        }
    return r;
}

template <typename S> Taylor2<S> operator+(const Taylor2<S>& a, double c) { return a + Taylor2<S>(c); }
template <typename S> Taylor2<S> operator+(double c, const Taylor2<S>& a) { return Taylor2<S>(c) + a; }
template <typename S> Taylor2<S> operator-(const Taylor2<S>& a, double c) { return a - Taylor2<S>(c); }
template <typename S> Taylor2<S> operator-(double c, const Taylor2<S>& a) { return Taylor2<S>(c) - a; }
template <typename S> Taylor2<S> operator*(const Taylor2<S>& a, double c) { return a * Taylor2<S>(c); }
template <typename S> Taylor2<S> operator*(double c, const Taylor2<S>& a) { return Taylor2<S>(c) * a; }
template <typename S> Taylor2<S> operator/(const Taylor2<S>& a, double c) { return a / Taylor2<S>(c); }
template <typename S> Taylor2<S> operator/(double c, const Taylor2<S>& a) { return Taylor2<S>(c) / a; }

namespace detail {

// Chain rule for f(u) given f, f' and f'' at u.value.
template <typename S>
Taylor2<S> compose(const Taylor2<S>& u, const S& f0, const S& f1, const S& f2) {
    const int n = u.dim;
    Taylor2<S> r = Taylor2<S>::constant(n, f0);
    for (int i = 0; i < n; ++i) r.gref(i) = f1 * u.g(i);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            r.href(i, j) = f1 * u.h(i, j) + f2 * u.g(i) * u.g(j);
            r.href(j, i) = r.h(i, j);
        }
    return r;
}

} // namespace detail

using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;
using std::tanh;

template <typename S>
Taylor2<S> exp(const Taylor2<S>& u) {
    const S e = exp(u.value);
    return detail::compose(u, e, e, e);
}

//! \pre lead_value(u) > 0
template <typename S>
Taylor2<S> log(const Taylor2<S>& u) {
    const S inv = S(1.0) / u.value;
    return detail::compose(u, log(u.value), inv, -(inv * inv));
}

template <typename S>
Taylor2<S> sin(const Taylor2<S>& u) {
    const S s = sin(u.value);
    const S c = cos(u.value);
    return detail::compose(u, s, c, -s);
}

template <typename S>
Taylor2<S> cos(const Taylor2<S>& u) {
    const S s = sin(u.value);
    const S c = cos(u.value);
    return detail::compose(u, c, -s, -c);
}

//! \pre lead_value(u) >= 0; derivatives blow up at exactly 0
template <typename S>
Taylor2<S> sqrt(const Taylor2<S>& u) {
    const S r = sqrt(u.value);
    const S d1 = S(0.5) / r;
    const S d2 = S(-0.25) / (r * u.value);
    return detail::compose(u, r, d1, d2);
}

template <typename S>
Taylor2<S> tanh(const Taylor2<S>& u) {
    const S t = tanh(u.value);
    const S sech2 = S(1.0) - t * t;
    return detail::compose(u, t, sech2, S(-2.0) * t * sech2);
}

//! Integer power by repeated squaring; exact at zero and negative bases.
template <typename S>
Taylor2<S> pow_int(const Taylor2<S>& u, long long k) {
    if (k < 0) return Taylor2<S>(1.0) / pow_int(u, -k);
    Taylor2<S> acc = Taylor2<S>::constant(u.dim, S(1.0));
    Taylor2<S> base = u;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

//! \pre lead_value(u) > 0 (real exponent branch)
template <typename S>
Taylor2<S> pow_real(const Taylor2<S>& u, double p) {
    const S f0 = pow_real(u.value, p);
    const S f1 = S(p) * pow_real(u.value, p - 1.0);
    const S f2 = S(p * (p - 1.0)) * pow_real(u.value, p - 2.0);
    return detail::compose(u, f0, f1, f2);
}

// Convenience seeds for evaluating fields on a chart.
inline std::vector<Jet2> jet_variables(std::span<const double> point) {
    std::vector<Jet2> vars;
    vars.reserve(point.size());
    const int n = static_cast<int>(point.size());
    for (int i = 0; i < n; ++i) vars.push_back(Jet2::variable(n, i, point[i]));
    return vars;
}

} // namespace geoduel

#include "geoduel/quadrature.hpp"

#include <cmath>

namespace geoduel {

namespace {

// Orthonormal-Hermite value and derivative at x, both premultiplied by
// exp(-x^2/2). These "Hermite functions" stay O(1) across the whole node
// range, which keeps Newton's iteration and the weights well scaled.
struct HermiteEval {
    double fn;      // phi_N(x)
    double fn_deriv; // phi_N'(x) at a root equals p_N'(x) e^{-x^2/2}
    double fnm1;    // phi_{N-1}(x)
};

HermiteEval hermite_function(int order, double x) {
    const double pi_quarter = 0.7511255444649425; // pi^{-1/4}
    double p0 = pi_quarter * std::exp(-0.5 * x * x);
    double p1 = std::sqrt(2.0) * x * p0;
    if (order == 0) return {p0, -x * p0, 0.0};
    for (int k = 1; k < order; ++k) {
        const double p2 = x * std::sqrt(2.0 / (k + 1.0)) * p1 - std::sqrt(k / (k + 1.0)) * p0;
        p0 = p1;
        p1 = p2;
    }
    // phi_N' = sqrt(2N) phi_{N-1} - x phi_N
    const double deriv = std::sqrt(2.0 * order) * p0 - x * p1;
    return {p1, deriv, p0};
}

} // namespace

GaussHermiteRule make_gauss_hermite(int order) {
    if (order < 1 || order > 256)
        fail(ErrorKind::InvalidArgument, "Gauss-Hermite order must be in [1, 256]");
    GaussHermiteRule rule;
    rule.node.assign(static_cast<size_t>(order), 0.0);
    rule.total_weight.assign(static_cast<size_t>(order), 0.0);

    const int half = (order + 1) / 2;
    double z = 0.0, z1 = 0.0, z2 = 0.0;
    for (int i = 0; i < half; ++i) {
        // Standard initial guesses, largest root first.
        if (i == 0) {
            z = std::sqrt(2.0 * order + 1.0) - 1.85575 * std::pow(2.0 * order + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(order), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * z1;
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * z2;
        } else {
            z = 2.0 * z - z2;
        }
        for (int it = 0; it < 100; ++it) {
            const HermiteEval h = hermite_function(order, z);
            const double step = h.fn / h.fn_deriv;
            z -= step;
            if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
        }
        z2 = z1;
        z1 = z;
        const HermiteEval h = hermite_function(order, z);
        // integral f dt ~ sum w e^{t^2} f(t) with w e^{t^2} = 2/phi_N'(t)^2,
        // and phi_N'(root) = sqrt(2N) phi_{N-1}(root).
        const double w = 1.0 / (order * h.fnm1 * h.fnm1);
        rule.node[static_cast<size_t>(i)] = z;
        rule.total_weight[static_cast<size_t>(i)] = w;
        rule.node[static_cast<size_t>(order - 1 - i)] = -z;
        rule.total_weight[static_cast<size_t>(order - 1 - i)] = w;
    }
    return rule;
}

CompositeRule make_composite_simpson(double a, double b, int panels) {
    if (!(b > a)) fail(ErrorKind::InvalidArgument, "composite rule needs b > a");
    if (panels < 1 || panels > 1 << 20)
        fail(ErrorKind::InvalidArgument, "panel count out of range");
    CompositeRule rule;
    const int nodes = 2 * panels + 1;
    const double h = (b - a) / (nodes - 1);
    rule.node.reserve(static_cast<size_t>(nodes));
    rule.weight.reserve(static_cast<size_t>(nodes));
    for (int i = 0; i < nodes; ++i) {
        rule.node.push_back(a + h * i);
        double w;
        if (i == 0 || i == nodes - 1)
            w = 1.0;
        else if (i % 2 == 1)
            w = 4.0;
        else
            w = 2.0;
        rule.weight.push_back(w * h / 3.0);
    }
    return rule;
}

} // namespace geoduel

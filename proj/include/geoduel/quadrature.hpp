#pragma once

#include <vector>

#include "geoduel/errors.hpp"

namespace geoduel {

// Gauss-Hermite rule in "total weight" form: integral f(t) dt over the real
// line is approximated by sum_q total_weight[q] * f(node[q]) for integrands
// decaying at least like exp(-t^2) * polynomial. The exp(t^2) compensation
// is folded into the weights via the bounded Hermite functions, so no
// under/overflow occurs for orders used here.
struct GaussHermiteRule {
    std::vector<double> node;
    std::vector<double> total_weight;
};

GaussHermiteRule make_gauss_hermite(int order);

// Composite Simpson weights on [a, b] with `panels` panels (2*panels + 1
// nodes).
struct CompositeRule {
    std::vector<double> node;
    std::vector<double> weight;
};

CompositeRule make_composite_simpson(double a, double b, int panels);

} // namespace geoduel

#include "geoduel/metric.hpp"

#include <cmath>

namespace geoduel {

MetricField MetricField::from_grid(std::vector<std::vector<Expr>> grid) {
    const int n = static_cast<int>(grid.size());
    MetricField f;
    f.n = n;
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(grid[static_cast<size_t>(i)].size()) != n)
            fail(ErrorKind::InvalidArgument, "metric grid must be square");
        for (int j = i; j < n; ++j) f.entries.push_back(std::move(grid[static_cast<size_t>(i)][static_cast<size_t>(j)]));
    }
    return f;
}

MetricField MetricField::identity(int n, std::span<const std::string> coords) {
    MetricField f;
    f.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) f.entries.push_back(parse_expr(i == j ? "1" : "0", coords));
    return f;
}

const Expr& MetricField::entry(int i, int j) const {
    if (i > j) std::swap(i, j);
    // row i of the stored upper triangle starts after n + (n-1) + ... rows
    int offset = 0;
    for (int r = 0; r < i; ++r) offset += n - r;
    return entries[static_cast<size_t>(offset + (j - i))];
}

MetricJets MetricField::evaluate(std::span<const double> point,
                                 std::span<const double> params) const {
    MetricJets mj;
    mj.n = n;
    mj.g = MatrixNN(n);
    mj.dg.assign(static_cast<size_t>(n) * n * n, 0.0);
    mj.ddg.assign(static_cast<size_t>(n) * n * n * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const Jet2 jet = eval_jet2(entry(i, j), point, params);
            mj.g(i, j) = jet.value;
            mj.g(j, i) = jet.value;
            for (int a = 0; a < n; ++a) {
                mj.dgr(a, i, j) = jet.g(a);
                mj.dgr(a, j, i) = jet.g(a);
                for (int b = 0; b < n; ++b) {
                    mj.ddgr(a, b, i, j) = jet.h(a, b);
                    mj.ddgr(a, b, j, i) = jet.h(a, b);
                }
            }
        }
    }
    const double det = determinant(mj.g);
    if (std::abs(det) <= 1e-10)
        fail(ErrorKind::SingularMetric, "|det g| = " + std::to_string(std::abs(det)) + " <= 1e-10");
    mj.g_inv = inverse(mj.g);
    if (max_abs_residual_of_inverse(mj.g, mj.g_inv) > 1e-12)
        fail(ErrorKind::SingularMetric, "metric inverse residual above 1e-12");
    return mj;
}

} // namespace geoduel

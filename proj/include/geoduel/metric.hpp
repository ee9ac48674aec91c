#pragma once

#include <span>
#include <vector>

#include "geoduel/expr.hpp"
#include "geoduel/linalg.hpp"

namespace geoduel {

// g, its inverse and its first and second coordinate derivatives at a chart
// point. Derivative slots come first: dg[a][i][j] = d_a g_ij,
// ddg[a][b][i][j] = d_a d_b g_ij. Both are mirrored so the symmetries hold
// bit-exactly.
struct MetricJets {
    int n = 0;
    MatrixNN g;
    MatrixNN g_inv;
    std::vector<double> dg;
    std::vector<double> ddg;

    double dgv(int a, int i, int j) const {
        return dg[(static_cast<size_t>(a) * n + i) * n + j];
    }
    double& dgr(int a, int i, int j) { return dg[(static_cast<size_t>(a) * n + i) * n + j]; }
    double ddgv(int a, int b, int i, int j) const {
        return ddg[((static_cast<size_t>(a) * n + b) * n + i) * n + j];
    }
    double& ddgr(int a, int b, int i, int j) {
        return ddg[((static_cast<size_t>(a) * n + b) * n + i) * n + j];
    }

    // d_a g^{ij} = -g^{ik} (d_a g_kl) g^{lj}
    double dginv(int a, int i, int j) const {
        double s = 0.0;
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) s -= g_inv(i, k) * dgv(a, k, l) * g_inv(l, j);
        return s;
    }
};

// Symmetric metric field: only entries with i <= j are stored, the rest are
// mirrored, so g is symmetric by construction at every point.
struct MetricField {
    int n = 0;
    std::vector<Expr> entries; // upper triangle, row by row

    static MetricField from_grid(std::vector<std::vector<Expr>> grid);
    static MetricField identity(int n, std::span<const std::string> coords);

    const Expr& entry(int i, int j) const;

    // Evaluates jets and the inverse; rejects |det g| <= 1e-10 and inverse
    // residual above 1e-12.
    MetricJets evaluate(std::span<const double> point, std::span<const double> params = {}) const;
};

} // namespace geoduel

#pragma once

#include <span>
#include <vector>

#include "geoduel/errors.hpp"

namespace geoduel {

// Dense square matrix for chart-sized problems (dim <= 6). Row major.
struct MatrixNN {
    int n = 0;
    std::vector<double> a;

    MatrixNN() = default;
    explicit MatrixNN(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    static MatrixNN identity(int dim) {
        MatrixNN m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }
};

// LU-based determinant with partial pivoting.
double determinant(const MatrixNN& m);

// Gauss-Jordan inverse with partial pivoting. Throws SingularMetric when a
// pivot degenerates.
MatrixNN inverse(const MatrixNN& m);

// Cholesky test for symmetric positive definiteness.
bool is_spd(const MatrixNN& m);

double max_abs_residual_of_inverse(const MatrixNN& m, const MatrixNN& inv);

} // namespace geoduel

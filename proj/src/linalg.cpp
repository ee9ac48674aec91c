#include "geoduel/linalg.hpp"

#include <cmath>

namespace geoduel {

double determinant(const MatrixNN& m) {
    const int n = m.n;
    MatrixNN lu = m;
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
        if (lu(pivot, col) == 0.0) return 0.0;
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(lu(pivot, c), lu(col, c));
            det = -det;
        }
        det *= lu(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = lu(r, col) / lu(col, col);
            for (int c = col; c < n; ++c) lu(r, c) -= f * lu(col, c);
        }
    }
    return det;
}

MatrixNN inverse(const MatrixNN& m) {
    const int n = m.n;
    MatrixNN work = m;
    MatrixNN inv = MatrixNN::identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
        if (work(pivot, col) == 0.0) fail(ErrorKind::SingularMetric, "matrix is singular");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(work(pivot, c), work(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        }
        const double d = work(col, col);
        for (int c = 0; c < n; ++c) {
            work(col, c) /= d;
            inv(col, c) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = work(r, col);
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                work(r, c) -= f * work(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

bool is_spd(const MatrixNN& m) {
    const int n = m.n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(m(i, j) - m(j, i)) > 1e-12 * (1.0 + std::abs(m(i, j)))) return false;
    MatrixNN chol(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= chol(i, k) * chol(j, k);
            if (i == j) {
                if (s <= 0.0) return false;
                chol(i, i) = std::sqrt(s);
            } else {
                chol(i, j) = s / chol(j, j);
            }
        }
    }
    return true;
}

double max_abs_residual_of_inverse(const MatrixNN& m, const MatrixNN& inv) {
    const int n = m.n;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = (i == j) ? -1.0 : 0.0;
            for (int k = 0; k < n; ++k) s += m(i, k) * inv(k, j);
            worst = std::max(worst, std::abs(s));
        }
    }
    return worst;
}

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::BadPermutation: return "BadPermutation";
        case ErrorKind::MixedVariance: return "MixedVariance";
        case ErrorKind::VarianceMismatch: return "VarianceMismatch";
        case ErrorKind::SingularMetric: return "SingularMetric";
        case ErrorKind::NotTorsionFree: return "NotTorsionFree";
        case ErrorKind::AsymmetricC: return "AsymmetricC";
        case ErrorKind::DegenerateT: return "DegenerateT";
        case ErrorKind::NotMetric: return "NotMetric";
        case ErrorKind::NotLastPairAntisymmetric: return "NotLastPairAntisymmetric";
        case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
        case ErrorKind::WrongSymmetryClass: return "WrongSymmetryClass";
        case ErrorKind::NormalizationError: return "NormalizationError";
        case ErrorKind::QuadratureUnderflow: return "QuadratureUnderflow";
        case ErrorKind::NonpositiveSigma: return "NonpositiveSigma";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Error";
}

} // namespace geoduel

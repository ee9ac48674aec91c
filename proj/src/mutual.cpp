#include "geoduel/mutual.hpp"

#include <cmath>

namespace geoduel::mutual {

DenseTensor mutual_nonmetricity(const MetricJets& mj, const ConnectionJets& cj1,
                                const ConnectionJets& cj2) {
    const DenseTensor q1 = geometry::nonmetricity(mj, cj1);
    const DenseTensor q2 = geometry::nonmetricity(mj, cj2);
    return scale(add(q1, q2), 0.5);
}

DenseTensor mutual_torsion(const ConnectionJets& cj1, const ConnectionJets& cj2) {
    const int n = cj1.n;
    DenseTensor M = DenseTensor::zeros(n, {Slot::Upper, Slot::Lower, Slot::Lower});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) M.at({i, j, k}) = cj1.g(i, j, k) - cj2.g(i, k, j);
    return M;
}

DenseTensor mutual_curvature(const ConnectionJets& cj1, const ConnectionJets& cj2) {
    const int n = cj1.n;
    DenseTensor R = DenseTensor::zeros(n, {Slot::Upper, Slot::Lower, Slot::Lower, Slot::Lower});
    // Grouped so that swapping the connections permutes the operands of
    // single additions only: the swap symmetry then holds bit for bit.
    auto dterm = [&](const ConnectionJets& c, int m, int k, int i, int j) {
        return c.dg(i, m, k, j) - c.dg(j, m, k, i);
    };
    auto qterm = [&](const ConnectionJets& ca, const ConnectionJets& cb, int m, int k, int i, int j) {
        double q = 0.0;
        for (int l = 0; l < n; ++l)
            q += ca.g(l, k, j) * cb.g(m, l, i) - ca.g(l, k, i) * cb.g(m, l, j);
        return q;
    };
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double d = dterm(cj1, m, k, i, j) + dterm(cj2, m, k, i, j);
                    const double q = qterm(cj2, cj1, m, k, i, j) + qterm(cj1, cj2, m, k, i, j);
                    R.at({m, k, i, j}) = 0.5 * (d + q);
                }
    return R;
}

DenseTensor mutual_curvature_regrouped(const ConnectionJets& cj1, const ConnectionJets& cj2) {
    const int n = cj1.n;
    const DenseTensor R1 = geometry::curvature(cj1);
    const DenseTensor R2 = geometry::curvature(cj2);
    const DenseTensor K = geometry::difference_tensor(cj1, cj2);
    DenseTensor R = DenseTensor::zeros(n, {Slot::Upper, Slot::Lower, Slot::Lower, Slot::Lower});
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double kk = 0.0; // K^l_k[i K^m_|l|j]
                    for (int l = 0; l < n; ++l)
                        kk += K.at({l, k, i}) * K.at({m, l, j}) - K.at({l, k, j}) * K.at({m, l, i});
                    R.at({m, k, i, j}) =
                        0.5 * (R1.at({m, k, i, j}) + R2.at({m, k, i, j})) + 0.5 * kk;
                }
    return R;
}

DenseTensor curvature_dual_residual(const ConnectionJets& cj1, const ConnectionJets& cj2) {
    return mutual_curvature(cj1, cj2);
}

namespace {

// Vector field value plus first derivatives; the working currency of the
// nested covariant derivatives below.
struct Vec1 {
    int n = 0;
    std::vector<double> v;  // [m]
    std::vector<double> dv; // [a][m]

    double d(int a, int m) const { return dv[static_cast<size_t>(a) * n + m]; }
};

Vec1 from_field(const VectorFieldJets& f) {
    Vec1 out;
    out.n = f.n;
    out.v = f.v;
    out.dv = f.dv;
    return out;
}

// (f Z) with enough derivatives to serve as the Z-argument again.
VectorFieldJets scale_field(const Jet2& f, const VectorFieldJets& z) {
    const int n = z.n;
    VectorFieldJets out;
    out.n = n;
    out.v.assign(static_cast<size_t>(n), 0.0);
    out.dv.assign(static_cast<size_t>(n) * n, 0.0);
    out.ddv.assign(static_cast<size_t>(n) * n * n, 0.0);
    for (int m = 0; m < n; ++m) {
        out.v[static_cast<size_t>(m)] = f.value * z.v[static_cast<size_t>(m)];
        for (int a = 0; a < n; ++a) {
            out.dv[static_cast<size_t>(a) * n + m] =
                f.g(a) * z.v[static_cast<size_t>(m)] + f.value * z.dval(a, m);
            for (int b = 0; b < n; ++b)
                out.ddv[(static_cast<size_t>(a) * n + b) * n + m] =
                    f.h(a, b) * z.v[static_cast<size_t>(m)] + f.g(a) * z.dval(b, m) +
                    f.g(b) * z.dval(a, m) + f.value * z.ddval(a, b, m);
        }
    }
    return out;
}

// U = nabla_Y Z with one derivative order retained:
//   U^m      = Y^j (d_j Z^m + G^m_lj Z^l)
//   d_i U^m  = d_i Y^j (d_j Z^m + G^m_lj Z^l)
//            + Y^j (d_i d_j Z^m + d_i G^m_lj Z^l + G^m_lj d_i Z^l)
Vec1 cov_derivative(const ConnectionJets& conn, const Vec1& Y, const VectorFieldJets& Z) {
    const int n = conn.n;
    Vec1 U;
    U.n = n;
    U.v.assign(static_cast<size_t>(n), 0.0);
    U.dv.assign(static_cast<size_t>(n) * n, 0.0);
    for (int m = 0; m < n; ++m) {
        double val = 0.0;
        for (int j = 0; j < n; ++j) {
            double bracket = Z.dval(j, m);
            for (int l = 0; l < n; ++l) bracket += conn.g(m, l, j) * Z.v[static_cast<size_t>(l)];
            val += Y.v[static_cast<size_t>(j)] * bracket;
        }
        U.v[static_cast<size_t>(m)] = val;
        for (int i = 0; i < n; ++i) {
            double dval = 0.0;
            for (int j = 0; j < n; ++j) {
                double bracket = Z.dval(j, m);
                double dbracket = Z.ddval(i, j, m);
                for (int l = 0; l < n; ++l) {
                    bracket += conn.g(m, l, j) * Z.v[static_cast<size_t>(l)];
                    dbracket += conn.dg(i, m, l, j) * Z.v[static_cast<size_t>(l)] +
                                conn.g(m, l, j) * Z.dval(i, l);
                }
                dval += Y.d(i, j) * bracket + Y.v[static_cast<size_t>(j)] * dbracket;
            }
            U.dv[static_cast<size_t>(i) * n + m] = dval;
        }
    }
    return U;
}

// Value of nabla_X U when only the value is needed.
std::vector<double> cov_value(const ConnectionJets& conn, const Vec1& X, const Vec1& U) {
    const int n = conn.n;
    std::vector<double> out(static_cast<size_t>(n), 0.0);
    for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double bracket = U.d(i, m);
            for (int l = 0; l < n; ++l) bracket += conn.g(m, l, i) * U.v[static_cast<size_t>(l)];
            s += X.v[static_cast<size_t>(i)] * bracket;
        }
        out[static_cast<size_t>(m)] = s;
    }
    return out;
}

Vec1 lie_bracket(const Vec1& X, const Vec1& Y) {
    const int n = X.n;
    Vec1 out;
    out.n = n;
    out.v.assign(static_cast<size_t>(n), 0.0);
    out.dv.assign(static_cast<size_t>(n) * n, 0.0); // value-level use only
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            s += X.v[static_cast<size_t>(i)] * Y.d(i, j) - Y.v[static_cast<size_t>(i)] * X.d(i, j);
        out.v[static_cast<size_t>(j)] = s;
    }
    return out;
}

std::vector<double> axpy(double a, std::span<const double> x, std::span<const double> y) {
    std::vector<double> out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + y[i];
    return out;
}

// The three mutual-curvature definitions evaluated semantically on fields.
std::vector<double> definition_value(MutualCurvatureDef def, const ConnectionJets& cj1,
                                     const ConnectionJets& cj2, const Vec1& X, const Vec1& Y,
                                     const VectorFieldJets& Z) {
    const int n = cj1.n;
    const Vec1 zv = {Z.n, Z.v, Z.dv};
    const Vec1 bracket = lie_bracket(X, Y);

    auto nested = [&](const ConnectionJets& outer, const ConnectionJets& inner, const Vec1& A,
                      const Vec1& B) { return cov_value(outer, A, cov_derivative(inner, B, Z)); };

    std::vector<double> out(static_cast<size_t>(n), 0.0);
    switch (def) {
        case MutualCurvatureDef::Paper: {
            const auto t1 = nested(cj1, cj2, X, Y);
            const auto t2 = nested(cj1, cj2, Y, X);
            const auto t3 = nested(cj2, cj1, X, Y);
            const auto t4 = nested(cj2, cj1, Y, X);
            const auto b1 = cov_value(cj1, bracket, zv);
            const auto b2 = cov_value(cj2, bracket, zv);
            for (int m = 0; m < n; ++m) {
                const size_t s = static_cast<size_t>(m);
                out[s] = 0.5 * (t1[s] - t2[s] + t3[s] - t4[s] - b1[s] - b2[s]);
            }
            return out;
        }
        case MutualCurvatureDef::Puechmorel: {
            const auto t1 = nested(cj1, cj2, X, Y);
            const auto t2 = nested(cj1, cj2, Y, X);
            const auto b1 = cov_value(cj1, bracket, zv);
            for (int m = 0; m < n; ++m) {
                const size_t s = static_cast<size_t>(m);
                out[s] = t1[s] - t2[s] - b1[s];
            }
            return out;
        }
        case MutualCurvatureDef::Calin: {
            // alpha = cj1, beta = cj2: nabla^a_X nabla^b_Y Z - nabla^b_Y nabla^a_X Z
            // - nabla^a_[X,Y] Z
            const auto t1 = cov_value(cj1, X, cov_derivative(cj2, Y, Z));
            const auto t2 = cov_value(cj2, Y, cov_derivative(cj1, X, Z));
            const auto b1 = cov_value(cj1, bracket, zv);
            for (int m = 0; m < n; ++m) {
                const size_t s = static_cast<size_t>(m);
                out[s] = t1[s] - t2[s] - b1[s];
            }
            return out;
        }
    }
    fail(ErrorKind::InvalidArgument, "unreachable mutual curvature definition");
}

} // namespace

std::vector<double> mutual_curvature_on_fields(MutualCurvatureDef def, const VectorFieldJets& X,
                                               const VectorFieldJets& Y, const VectorFieldJets& Z,
                                               const ConnectionJets& cj1,
                                               const ConnectionJets& cj2) {
    return definition_value(def, cj1, cj2, from_field(X), from_field(Y), Z);
}

FLinearityReport flinearity_defect(MutualCurvatureDef def, const VectorFieldJets& X,
                                   const VectorFieldJets& Y, const VectorFieldJets& Z,
                                   const Jet2& f, const ConnectionJets& cj1,
                                   const ConnectionJets& cj2) {
    const int n = cj1.n;
    const Vec1 xv = from_field(X);
    const Vec1 yv = from_field(Y);
    const Vec1 zv = from_field(Z);

    const std::vector<double> base = definition_value(def, cj1, cj2, xv, yv, Z);
    std::vector<double> scaled_eval;
    if (def == MutualCurvatureDef::Calin) {
        const VectorFieldJets fY = scale_field(f, Y);
        scaled_eval = definition_value(def, cj1, cj2, xv, from_field(fY), Z);
    } else {
        const VectorFieldJets fZ = scale_field(f, Z);
        scaled_eval = definition_value(def, cj1, cj2, xv, yv, fZ);
    }

    FLinearityReport rep;
    rep.defect = axpy(-f.value, base, scaled_eval);

    // Directional derivatives of f along the fields.
    double Xf = 0.0, Yf = 0.0;
    for (int i = 0; i < n; ++i) {
        Xf += xv.v[static_cast<size_t>(i)] * f.g(i);
        Yf += yv.v[static_cast<size_t>(i)] * f.g(i);
    }
    const auto d1x = cov_value(cj1, xv, zv);
    const auto d2x = cov_value(cj2, xv, zv);
    const auto d1y = cov_value(cj1, yv, zv);
    const auto d2y = cov_value(cj2, yv, zv);

    rep.predicted.assign(static_cast<size_t>(n), 0.0);
    for (int m = 0; m < n; ++m) {
        const size_t s = static_cast<size_t>(m);
        switch (def) {
            case MutualCurvatureDef::Paper: rep.predicted[s] = 0.0; break;
            case MutualCurvatureDef::Puechmorel:
                rep.predicted[s] = Yf * (d1x[s] - d2x[s]) + Xf * (d2y[s] - d1y[s]);
                break;
            case MutualCurvatureDef::Calin: rep.predicted[s] = Xf * (d2y[s] - d1y[s]); break;
        }
        rep.defect_norm = std::max(rep.defect_norm, std::abs(rep.defect[s]));
        rep.defect_minus_predicted =
            std::max(rep.defect_minus_predicted, std::abs(rep.defect[s] - rep.predicted[s]));
    }
    return rep;
}

double mixed_commutator_residual(const ConnectionJets& cj1, const ConnectionJets& cj2,
                                 const Jet2& f) {
    const int n = cj1.n;
    const DenseTensor M = mutual_torsion(cj1, cj2);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double first = f.h(i, j);
            double second = f.h(j, i);
            double mterm = 0.0;
            for (int l = 0; l < n; ++l) {
                first -= cj1.g(l, j, i) * f.g(l);
                second -= cj2.g(l, i, j) * f.g(l);
                mterm += M.at({l, j, i}) * f.g(l);
            }
            worst = std::max(worst, std::abs(first - second + mterm));
        }
    return worst;
}

} // namespace geoduel::mutual

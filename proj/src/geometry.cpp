#include "geoduel/geometry.hpp"

#include <cmath>

namespace geoduel::geometry {

DenseTensor torsion_T(const ConnectionJets& cj) {
    const int n = cj.n;
    DenseTensor T = DenseTensor::zeros(n, {Slot::Upper, Slot::Lower, Slot::Lower});
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) T.at({m, i, j}) = cj.g(m, j, i) - cj.g(m, i, j);
    return T;
}

DenseTensor torsion_S(const ConnectionJets& cj) {
    const int n = cj.n;
    DenseTensor S = DenseTensor::zeros(n, {Slot::Lower, Slot::Lower, Slot::Upper});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                S.at({i, j, k}) = 0.5 * (cj.g(k, i, j) - cj.g(k, j, i));
    return S;
}

Torsion torsion(const ConnectionJets& cj) { return {torsion_T(cj), torsion_S(cj)}; }

DenseTensor nonmetricity(const MetricJets& mj, const ConnectionJets& cj) {
    const int n = cj.n;
    DenseTensor Q = DenseTensor::zeros(n, {Slot::Lower, Slot::Lower, Slot::Lower});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                double s = mj.dgv(i, j, k);
                for (int l = 0; l < n; ++l)
                    s -= cj.g(l, j, i) * mj.g(l, k) + cj.g(l, k, i) * mj.g(j, l);
                Q.at({i, j, k}) = s;
                Q.at({i, k, j}) = s; // symmetric pair, mirrored bit-exactly
            }
    return Q;
}

DenseTensor distortion(const MetricJets& mj, const DenseTensor& Q, const DenseTensor& S) {
    const int n = mj.n;
    DenseTensor N = DenseTensor::zeros(n, {Slot::Upper, Slot::Lower, Slot::Lower});
    // S arrives as S_ij^k; lowering the upper slot keeps the antisymmetric
    // pair in front, so S_low.at({a, b, c}) below is the fully lowered
    // S_abc of the formula.
    const DenseTensor S_low = lower_slot(S, 2, mj.g);
    auto s3 = [&](int a, int b, int c) { return S_low.at({a, b, c}); };
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) {
                    const double q_part = Q.at({l, i, j}) - Q.at({j, l, i}) - Q.at({i, j, l});
                    const double s_part = s3(l, i, j) + s3(l, j, i) - s3(i, j, l);
                    s += mj.g_inv(m, l) * (0.5 * q_part - s_part);
                }
                N.at({m, i, j}) = s;
            }
    return N;
}

NonmetricityJets nonmetricity_jets(const MetricJets& mj, const ConnectionJets& cj) {
    const int n = cj.n;
    NonmetricityJets out;
    out.Q = nonmetricity(mj, cj);
    out.dQ.assign(static_cast<size_t>(n) * n * n * n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double s = mj.ddgv(a, i, j, k);
                    for (int l = 0; l < n; ++l) {
                        s -= cj.dg(a, l, j, i) * mj.g(l, k) + cj.g(l, j, i) * mj.dgv(a, l, k);
                        s -= cj.dg(a, l, k, i) * mj.g(j, l) + cj.g(l, k, i) * mj.dgv(a, j, l);
                    }
                    out.dQ[((static_cast<size_t>(a) * n + i) * n + j) * n + k] = s;
                }
    return out;
}

DenseTensor curvature(const ConnectionJets& cj) {
    const int n = cj.n;
    DenseTensor R = DenseTensor::zeros(n, {Slot::Upper, Slot::Lower, Slot::Lower, Slot::Lower});
    // The derivative and quadratic parts are accumulated separately so the
    // mutual-curvature formula reduces to this one bit for bit when its two
    // connections coincide.
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const double d = cj.dg(j, m, i, k) - cj.dg(k, m, i, j);
                    double q = 0.0;
                    for (int l = 0; l < n; ++l)
                        q += cj.g(m, l, j) * cj.g(l, i, k) - cj.g(m, l, k) * cj.g(l, i, j);
                    R.at({m, i, j, k}) = d + q;
                }
    return R;
}

double ricci_scalar(const DenseTensor& R, const MetricJets& mj) {
    const int n = mj.n;
    double ric = 0.0;
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ric += R.at({m, i, m, j}) * mj.g_inv(i, j);
    return ric;
}

DenseTensor lower_curvature(const MetricJets& mj, const DenseTensor& R) {
    return lower_slot(R, 0, mj.g);
}

DistortionJets distortion_jets(const ConnectionJets& cj, const ConnectionJets& cj0) {
    const int n = cj.n;
    DistortionJets out;
    out.N = DenseTensor::zeros(n, {Slot::Upper, Slot::Lower, Slot::Lower});
    out.dN.assign(static_cast<size_t>(n) * n * n * n, 0.0);
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                out.N.at({m, i, j}) = cj.g(m, i, j) - cj0.g(m, i, j);
                for (int a = 0; a < n; ++a)
                    out.dN[((static_cast<size_t>(a) * n + m) * n + i) * n + j] =
                        cj.dg(a, m, i, j) - cj0.dg(a, m, i, j);
            }
    return out;
}

DenseTensor post_riemannian_curvature(const ConnectionJets& cj0, const DenseTensor& N,
                                      std::span<const double> dN) {
    const int n = cj0.n;
    auto dNv = [&](int a, int m, int i, int j) {
        return dN[((static_cast<size_t>(a) * n + m) * n + i) * n + j];
    };
    // nabla0_a N^m_ij with the direction in the last Gamma slot.
    auto covN = [&](int a, int m, int i, int j) {
        double s = dNv(a, m, i, j);
        for (int l = 0; l < n; ++l) {
            s += cj0.g(m, l, a) * N.at({l, i, j});
            s -= cj0.g(l, i, a) * N.at({m, l, j});
            s -= cj0.g(l, j, a) * N.at({m, i, l});
        }
        return s;
    };
    DenseTensor R = curvature(cj0);
    for (int m = 0; m < n; ++m)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = covN(k, m, j, l) - covN(l, m, j, k);
                    for (int p = 0; p < n; ++p)
                        s += N.at({m, p, k}) * N.at({p, j, l}) - N.at({m, p, l}) * N.at({p, j, k});
                    R.at({m, j, k, l}) += s;
                }
    return R;
}

DenseTensor difference_tensor(const ConnectionJets& cj1, const ConnectionJets& cj2) {
    const int n = cj1.n;
    DenseTensor K = DenseTensor::zeros(n, {Slot::Upper, Slot::Lower, Slot::Lower});
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) K.at({l, i, j}) = cj1.g(l, i, j) - cj2.g(l, i, j);
    return K;
}

ConnectionJets convex_combination(const ConnectionJets& cj1, const ConnectionJets& cj2, double t) {
    const int n = cj1.n;
    ConnectionJets cj = ConnectionJets::zeros(n);
    for (size_t f = 0; f < cj.gamma.size(); ++f)
        cj.gamma[f] = t * cj1.gamma[f] + (1.0 - t) * cj2.gamma[f];
    for (size_t f = 0; f < cj.dgamma.size(); ++f)
        cj.dgamma[f] = t * cj1.dgamma[f] + (1.0 - t) * cj2.dgamma[f];
    return cj;
}

CombinationResiduals combination_curvature_residual(const MetricJets& mj, const ConnectionJets& cj1,
                                                    const ConnectionJets& cj2, double t) {
    const int n = cj1.n;
    const ConnectionJets mix = convex_combination(cj1, cj2, t);
    const DenseTensor R = curvature(mix);
    const DenseTensor R1 = curvature(cj1);
    const DenseTensor R2 = curvature(cj2);
    const DenseTensor K = difference_tensor(cj1, cj2);

    CombinationResiduals out;
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double kk = 0.0; // 2 K^m_l[j K^l_|i|k]
                    for (int l = 0; l < n; ++l)
                        kk += K.at({m, l, j}) * K.at({l, i, k}) - K.at({m, l, k}) * K.at({l, i, j});
                    const double r = R.at({m, i, j, k}) - t * R1.at({m, i, j, k}) -
                                     (1.0 - t) * R2.at({m, i, j, k}) + t * (1.0 - t) * kk;
                    out.riemann = std::max(out.riemann, std::abs(r));
                }

    // Quadratic invariants of K entering the Ricci-scalar identity.
    double trace_sq = 0.0; // K^i_ji K^j_kl g^kl
    double cross = 0.0;    // K^{ijk} K_jki
    for (int j = 0; j < n; ++j) {
        double tr = 0.0;
        for (int i = 0; i < n; ++i) tr += K.at({i, j, i});
        double div = 0.0;
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) div += K.at({j, k, l}) * mj.g_inv(k, l);
        trace_sq += tr * div;
    }
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int k = 0; k < n; ++k) {
                    // K^{ijk} K_jki = g^{ja} g^{kb} K^i_ab g_jc K^c_ki summed;
                    // after cancelling g g^{-1} it reduces to
                    // K^i_ab K^a_ki g^{kb}.
                    cross += K.at({i, a, b}) * K.at({a, k, i}) * mj.g_inv(k, b);
                }
    const double ric = ricci_scalar(R, mj);
    const double ric1 = ricci_scalar(R1, mj);
    const double ric2 = ricci_scalar(R2, mj);
    out.ricci = std::abs(ric - t * ric1 - (1.0 - t) * ric2 + t * (1.0 - t) * (trace_sq - cross));
    return out;
}

double cov3_lower(const ConnectionJets& cj, const DenseTensor& T, std::span<const double> dT,
                  int a, int i, int j, int k) {
    const int n = cj.n;
    double s = dT[((static_cast<size_t>(a) * n + i) * n + j) * n + k];
    for (int l = 0; l < n; ++l) {
        s -= cj.g(l, i, a) * T.at({l, j, k});
        s -= cj.g(l, j, a) * T.at({i, l, k});
        s -= cj.g(l, k, a) * T.at({i, j, l});
    }
    return s;
}

} // namespace geoduel::geometry

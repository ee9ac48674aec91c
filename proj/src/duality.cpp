#include "geoduel/duality.hpp"

#include <cmath>

namespace geoduel::duality {

using geometry::curvature;
using geometry::nonmetricity;
using geometry::ricci_scalar;

namespace {

double first_pair_asymmetry(const LoweredConnectionJets& lo) {
    double worst = 0.0;
    const int n = lo.n;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                worst = std::max(worst, std::abs(lo.v(j, k, i) - lo.v(k, j, i)));
    return worst;
}

double defining_residual_nonmetric(const MetricJets& mj, const ConnectionJets& cj,
                                   const ConnectionJets& dual) {
    const LoweredConnectionJets lp = lower_connection(mj, cj);
    const LoweredConnectionJets ld = lower_connection(mj, dual);
    double worst = 0.0;
    const int n = mj.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                worst = std::max(std::abs(mj.dgv(i, j, k) - lp.v(k, j, i) - ld.v(j, k, i)), worst);
    return worst;
}

} // namespace

DualPair nonmetric_dual(const MetricJets& mj, const ConnectionJets& cj) {
    const int n = mj.n;
    const LoweredConnectionJets lp = lower_connection(mj, cj);

    LoweredConnectionJets ld;
    ld.n = n;
    ld.low.assign(lp.low.size(), 0.0);
    ld.dlow.assign(lp.dlow.size(), 0.0);
    // Gamma*_jki = d_i g_jk - Gamma_kji, read slotwise.
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) {
                ld.vr(j, k, i) = mj.dgv(i, j, k) - lp.v(k, j, i);
                for (int a = 0; a < n; ++a)
                    ld.dr(a, j, k, i) = mj.ddgv(a, i, j, k) - lp.d(a, k, j, i);
            }

    DualPair pair;
    pair.kind = DualKind::Nonmetric;
    pair.primal = cj;
    pair.dual = raise_connection(mj, ld);
    pair.defining_residual = defining_residual_nonmetric(mj, cj, pair.dual);
    pair.first_pair_symmetry_warning = first_pair_asymmetry(lp) > 1e-10;
    return pair;
}

CubicTensor cubic_tensor(const MetricJets& mj, const DualPair& pair) {
    if (pair.kind != DualKind::Nonmetric)
        fail(ErrorKind::InvalidArgument, "cubic_tensor needs a nonmetric dual pair");
    const double s_primal = max_abs(geometry::torsion_S(pair.primal));
    const double s_dual = max_abs(geometry::torsion_S(pair.dual));
    if (std::max(s_primal, s_dual) > 1e-10)
        fail(ErrorKind::NotTorsionFree,
             "pair is not torsion-free, max |S| = " + std::to_string(std::max(s_primal, s_dual)));

    CubicTensor cubic;
    cubic.C = nonmetricity(mj, pair.primal);
    const DenseTensor q_dual = nonmetricity(mj, pair.dual);
    if (max_abs_diff(q_dual, scale(cubic.C, -1.0)) > 1e-10)
        fail(ErrorKind::InvalidArgument, "dual non-metricity is not -C; pair is not dually coupled");
    const std::vector<int> all{0, 1, 2};
    const double sym = max_abs_diff(cubic.C, symmetrize(cubic.C, all));
    if (sym > 1e-10)
        fail(ErrorKind::AsymmetricC, "cubic tensor symmetry residual " + std::to_string(sym));
    return cubic;
}

ConnectionJets alpha_connection(const MetricJets& mj, const ConnectionJets& cj0,
                                const DenseTensor& C, std::span<const double> dC, double alpha) {
    const int n = mj.n;
    auto dCv = [&](int a, int k, int i, int j) {
        return dC[((static_cast<size_t>(a) * n + k) * n + i) * n + j];
    };
    ConnectionJets cj = cj0;
    const double half_alpha = 0.5 * alpha;
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += mj.g_inv(m, k) * C.at({k, i, j});
                cj.gr(m, i, j) -= half_alpha * s;
                for (int a = 0; a < n; ++a) {
                    double ds = 0.0;
                    for (int k = 0; k < n; ++k)
                        ds += mj.dginv(a, m, k) * C.at({k, i, j}) + mj.g_inv(m, k) * dCv(a, k, i, j);
                    cj.dgr(a, m, i, j) -= half_alpha * ds;
                }
            }
    return cj;
}

DualPair generalized_dual(const MetricJets& mj, const ConnectionJets& cj, double t) {
    if (t == 0.0)
        fail(ErrorKind::InvalidArgument, "t = 0 removes the primal from the defining relation");
    if (t == 1.0) fail(ErrorKind::DegenerateT, "t = 1 leaves the dual entirely unconstrained");
    const int n = mj.n;
    const LoweredConnectionJets lp = lower_connection(mj, cj);

    LoweredConnectionJets ld;
    ld.n = n;
    ld.low.assign(lp.low.size(), 0.0);
    ld.dlow.assign(lp.dlow.size(), 0.0);
    const double inv2t1 = 1.0 / (2.0 * (1.0 - t));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) {
                // symmetric part from the defining relation, antisymmetric
                // part carried over from the primal
                const double sym = (mj.dgv(i, j, k) - t * (lp.v(k, j, i) + lp.v(j, k, i))) * inv2t1;
                const double antisym = 0.5 * (lp.v(j, k, i) - lp.v(k, j, i));
                ld.vr(j, k, i) = sym + antisym;
                for (int a = 0; a < n; ++a) {
                    const double dsym =
                        (mj.ddgv(a, i, j, k) - t * (lp.d(a, k, j, i) + lp.d(a, j, k, i))) * inv2t1;
                    const double dantisym = 0.5 * (lp.d(a, j, k, i) - lp.d(a, k, j, i));
                    ld.dr(a, j, k, i) = dsym + dantisym;
                }
            }

    DualPair pair;
    pair.kind = DualKind::Generalized;
    pair.t = t;
    pair.primal = cj;
    pair.dual = raise_connection(mj, ld);
    pair.first_pair_symmetry_warning = first_pair_asymmetry(lp) > 1e-10;

    const LoweredConnectionJets lraised = lower_connection(mj, pair.dual);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double lhs = mj.dgv(i, j, k);
                const double rhs = t * (lp.v(k, j, i) + lp.v(j, k, i)) +
                                   (1.0 - t) * (lraised.v(k, j, i) + lraised.v(j, k, i));
                worst = std::max(worst, std::abs(lhs - rhs));
            }
    pair.defining_residual = worst;
    return pair;
}

DualPair torsion_dual(const ConnectionJets& cj) {
    const int n = cj.n;
    DualPair pair;
    pair.kind = DualKind::Torsion;
    pair.primal = cj;
    pair.dual = ConnectionJets::zeros(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                pair.dual.gr(k, i, j) = cj.g(k, j, i);
                for (int a = 0; a < n; ++a) pair.dual.dgr(a, k, i, j) = cj.dg(a, k, j, i);
            }
    double worst = 0.0; // mutual torsion, identically zero by construction
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                worst = std::max(worst, std::abs(cj.g(m, i, j) - pair.dual.g(m, j, i)));
    pair.defining_residual = worst;
    return pair;
}

TorsionDualReport torsion_dual_properties(const MetricJets& mj, const DualPair& pair) {
    if (pair.kind != DualKind::Torsion)
        fail(ErrorKind::InvalidArgument, "torsion_dual_properties needs a torsion dual pair");
    const int n = pair.primal.n;
    TorsionDualReport rep;

    const DenseTensor T = geometry::torsion_T(pair.primal);
    const DenseTensor Ts = geometry::torsion_T(pair.dual);
    rep.t_plus_tstar = max_abs(add(T, Ts));

    const DenseTensor S = geometry::torsion_S(pair.primal);
    const DenseTensor Ss = geometry::torsion_S(pair.dual);
    rep.s_plus_sstar = max_abs(add(S, Ss));

    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                rep.mutual_torsion = std::max(
                    rep.mutual_torsion, std::abs(pair.primal.g(m, i, j) - pair.dual.g(m, j, i)));

    const LoweredDistortion Np = lowered_distortion(mj, pair.primal);
    const LoweredDistortion Nd = lowered_distortion(mj, pair.dual);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                rep.distortion_swap = std::max(
                    rep.distortion_swap, std::abs(Nd.N.at({i, k, j}) - Np.N.at({i, j, k})));

    rep.q_primal = max_abs(nonmetricity(mj, pair.primal));
    rep.q_dual = max_abs(nonmetricity(mj, pair.dual));
    rep.mean_applicable = rep.q_primal < 1e-9 && rep.q_dual < 1e-9;
    if (rep.mean_applicable) {
        const ConnectionJets mean = geometry::convex_combination(pair.primal, pair.dual, 0.5);
        const ConnectionJets lc = christoffel_lc(mj);
        double worst = 0.0;
        for (size_t f = 0; f < mean.gamma.size(); ++f)
            worst = std::max(worst, std::abs(mean.gamma[f] - lc.gamma[f]));
        rep.mean_minus_lc = worst;
    }
    return rep;
}

LoweredDistortion lowered_distortion(const MetricJets& mj, const ConnectionJets& cj) {
    const int n = mj.n;
    const ConnectionJets cj0 = christoffel_lc(mj);
    const LoweredConnectionJets lg = lower_connection(mj, cj);
    const LoweredConnectionJets lg0 = lower_connection(mj, cj0);
    LoweredDistortion out;
    out.N = DenseTensor::zeros(n, {Slot::Lower, Slot::Lower, Slot::Lower});
    out.dN.assign(static_cast<size_t>(n) * n * n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                out.N.at({i, j, k}) = lg.v(i, j, k) - lg0.v(i, j, k);
                for (int a = 0; a < n; ++a)
                    out.dN[((static_cast<size_t>(a) * n + i) * n + j) * n + k] =
                        lg.d(a, i, j, k) - lg0.d(a, i, j, k);
            }
    return out;
}

ThreeFormResult theorem1_decompose(const MetricJets& mj, const ConnectionJets& cj,
                                   double tolerance) {
    const int n = mj.n;
    if (n < 3)
        fail(ErrorKind::DimensionTooSmall, "a rank-3 alternating distortion needs n >= 3");
    const double q = max_abs(nonmetricity(mj, cj));
    if (q > tolerance)
        fail(ErrorKind::NotMetric, "max |Q| = " + std::to_string(q) + " above tolerance");

    const LoweredDistortion ld = lowered_distortion(mj, cj);
    double last_pair = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                last_pair = std::max(
                    last_pair, 0.5 * std::abs(ld.N.at({i, j, k}) + ld.N.at({i, k, j})));
    if (last_pair > tolerance)
        fail(ErrorKind::NotLastPairAntisymmetric,
             "max |N_i(jk)| = " + std::to_string(last_pair) + " above tolerance");

    ThreeFormResult result;
    result.form.A = ld.N;
    const std::vector<int> all{0, 1, 2};
    result.antisymmetry_residual = max_abs_diff(ld.N, antisymmetrize(ld.N, all));

    const ConnectionJets cj0 = christoffel_lc(mj);
    const LoweredConnectionJets lg = lower_connection(mj, cj);
    const LoweredConnectionJets lg0 = lower_connection(mj, cj0);
    const LoweredConnectionJets lgd = lower_connection(mj, torsion_dual(cj).dual);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double a = result.form.A.at({k, i, j});
                result.primal_residual =
                    std::max(result.primal_residual, std::abs(lg.v(k, i, j) - lg0.v(k, i, j) - a));
                result.dual_residual =
                    std::max(result.dual_residual, std::abs(lgd.v(k, i, j) - lg0.v(k, i, j) + a));
            }
    return result;
}

LemmaReport lemma_curvature_relation(const MetricJets& mj, const ConnectionJets& cj0,
                                     const DenseTensor& N_low, std::span<const double> dN_low,
                                     int p, double class_tolerance) {
    const int n = mj.n;
    const double sign_class = (p == 0) ? 1.0 : -1.0;
    double class_residual = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                class_residual = std::max(
                    class_residual,
                    std::abs(N_low.at({i, j, k}) - sign_class * N_low.at({j, i, k})));
    if (class_residual > class_tolerance)
        fail(ErrorKind::WrongSymmetryClass,
             "N does not satisfy N_ijk = (-1)^p N_jik for p = " + std::to_string(p) +
                 " (residual " + std::to_string(class_residual) + ")");

    // Gamma = Gamma0 + N and Gamma* = Gamma0 - N with the first slot raised.
    auto build = [&](double s) {
        ConnectionJets cj = cj0;
        auto dNv = [&](int a, int i, int j, int k) {
            return dN_low[((static_cast<size_t>(a) * n + i) * n + j) * n + k];
        };
        for (int m = 0; m < n; ++m)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double v = 0.0;
                    for (int k = 0; k < n; ++k) v += mj.g_inv(m, k) * N_low.at({k, i, j});
                    cj.gr(m, i, j) += s * v;
                    for (int a = 0; a < n; ++a) {
                        double dv = 0.0;
                        for (int k = 0; k < n; ++k)
                            dv += mj.dginv(a, m, k) * N_low.at({k, i, j}) +
                                  mj.g_inv(m, k) * dNv(a, k, i, j);
                        cj.dgr(a, m, i, j) += s * dv;
                    }
                }
        return cj;
    };
    const DenseTensor R = geometry::lower_curvature(mj, curvature(build(1.0)));
    const DenseTensor Rs = geometry::lower_curvature(mj, curvature(build(-1.0)));

    const double factor = 1.0 - (p == 0 ? 1.0 : -1.0); // 1 - (-1)^p
    LemmaReport rep;
    rep.p = p;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double rhs = factor * (geometry::cov3_lower(cj0, N_low, dN_low, k, i, j, l) -
                                                 geometry::cov3_lower(cj0, N_low, dN_low, l, i, j, k));
                    rep.rhs_magnitude = std::max(rep.rhs_magnitude, std::abs(rhs));
                    const double lhs = R.at({i, j, k, l});
                    const double star = Rs.at({j, i, k, l});
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b) {
                            const double s1 = a == 0 ? 1.0 : -1.0;
                            const double s2 = b == 0 ? 1.0 : -1.0;
                            rep.residual[static_cast<size_t>(a)][static_cast<size_t>(b)] =
                                std::max(rep.residual[static_cast<size_t>(a)][static_cast<size_t>(b)],
                                         std::abs(lhs + s1 * star - s2 * rhs));
                        }
                }
    return rep;
}

double theorem3_ricci_equality(const MetricJets& mj, const DualPair& pair,
                               double metric_tolerance) {
    if (pair.kind != DualKind::Torsion)
        fail(ErrorKind::InvalidArgument, "theorem3 needs a torsion dual pair");
    const double q = std::max(max_abs(nonmetricity(mj, pair.primal)),
                              max_abs(nonmetricity(mj, pair.dual)));
    if (q > metric_tolerance)
        fail(ErrorKind::NotMetric, "pair is not metric, max |Q| = " + std::to_string(q));
    const double ric = ricci_scalar(curvature(pair.primal), mj);
    const double ric_star = ricci_scalar(curvature(pair.dual), mj);
    return std::abs(ric - ric_star);
}

BothSensesReport both_senses_constraint(const MetricJets& mj, const ConnectionJets& cj) {
    const int n = mj.n;
    const DenseTensor N = lowered_distortion(mj, cj).N;
    const DenseTensor Ns = lowered_distortion(mj, torsion_dual(cj).dual).N;
    BothSensesReport rep;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double sym = 0.5 * (N.at({i, j, k}) + N.at({i, k, j}));
                const double sym_star = 0.5 * (Ns.at({i, j, k}) + Ns.at({i, k, j}));
                const double sym_k = 0.5 * (N.at({k, i, j}) + N.at({k, j, i}));
                rep.n_sym_last = std::max(rep.n_sym_last, std::abs(sym));
                rep.nstar_sym_last = std::max(rep.nstar_sym_last, std::abs(sym_star));
                rep.combined = std::max(rep.combined, std::abs(sym + sym_k));
            }
    return rep;
}

} // namespace geoduel::duality

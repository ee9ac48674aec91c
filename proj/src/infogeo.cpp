#include "geoduel/infogeo.hpp"

#include <cmath>

#include "geoduel/duality.hpp"

namespace geoduel::infogeo {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct NodeSet {
    std::vector<double> t;       // abstract nodes (Hermite) or sample points (composite)
    std::vector<double> weight;  // total weights
    bool standardized = false;   // Hermite path with x = center + sqrt(2) scale t
};

NodeSet build_nodes(const ParametricFamily& fam) {
    NodeSet ns;
    if (fam.quad.kind == QuadratureSpec::Kind::Hermite) {
        if (fam.domain.kind != Domain::Kind::RealLine)
            fail(ErrorKind::InvalidArgument, "Hermite quadrature expects an unbounded domain");
        const GaussHermiteRule rule = make_gauss_hermite(fam.quad.order);
        ns.t = rule.node;
        ns.weight = rule.total_weight;
        ns.standardized = true;
    } else {
        if (fam.domain.kind != Domain::Kind::Interval)
            fail(ErrorKind::InvalidArgument, "composite quadrature expects a bounded interval");
        const CompositeRule rule = make_composite_simpson(fam.domain.a, fam.domain.b, fam.quad.panels);
        ns.t = rule.node;
        ns.weight = rule.weight;
    }
    return ns;
}

void check_xi(const ParametricFamily& fam, std::span<const double> xi) {
    if (fam.m < 1) fail(ErrorKind::InvalidArgument, "family needs m >= 1 parameters");
    if (static_cast<int>(xi.size()) != fam.m)
        fail(ErrorKind::InvalidArgument, "xi size does not match the family's parameter count");
}

Jet2 eval_param_expr(const std::optional<Expr>& e, std::span<const double> xi,
                     std::span<const double> bound, double fallback) {
    if (!e.has_value()) return Jet2::constant(static_cast<int>(xi.size()), fallback);
    return eval_jet2(*e, xi, bound);
}

void check_mass(double norm) {
    if (!(norm > 1e-300))
        fail(ErrorKind::QuadratureUnderflow,
             "density mass vanished under the quadrature rule (norm = " + std::to_string(norm) + ")");
    if (std::abs(norm - 1.0) > 1e-8)
        fail(ErrorKind::NormalizationError,
             "density integrates to " + std::to_string(norm) + ", not 1 (within 1e-8)");
}

// Composition of a (m+1)-direction jet F(xi, x) with the node curve
// xi -> (xi, x(xi)); m-direction result.
Jet2 push_through_node(const Jet2& F, const Jet2& xjet, int m) {
    Jet2 out = Jet2::constant(m, F.value);
    for (int a = 0; a < m; ++a) out.gref(a) = F.g(a) + F.g(m) * xjet.g(a);
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            out.href(a, b) = F.h(a, b) + F.h(a, m) * xjet.g(b) + F.h(m, b) * xjet.g(a) +
                             F.h(m, m) * xjet.g(a) * xjet.g(b) + F.g(m) * xjet.h(a, b);
            out.href(b, a) = out.h(a, b);
        }
    return out;
}

} // namespace

ParametricFamily ParametricFamily::gaussian() {
    ParametricFamily fam;
    fam.m = 2;
    fam.param_names = {"mu", "sigma"};
    const std::vector<std::string> coords{"mu", "sigma", "x"};
    // log p = -((x - mu)/sigma)^2 / 2 - log sigma - log sqrt(2 pi)
    fam.log_density =
        parse_expr("-0.5*((x - mu)/sigma)^2 - log(sigma) - 0.91893853320467274", coords);
    fam.domain.kind = Domain::Kind::RealLine;
    fam.quad.kind = QuadratureSpec::Kind::Hermite;
    fam.quad.order = 64;
    const std::vector<std::string> params{"mu", "sigma"};
    fam.quad.center = parse_expr("mu", params);
    fam.quad.scale = parse_expr("sigma", params);
    return fam;
}

FamilyMoments family_moments(const ParametricFamily& fam, std::span<const double> xi) {
    check_xi(fam, xi);
    const int m = fam.m;
    const NodeSet ns = build_nodes(fam);
    const Jet2 center = eval_param_expr(fam.quad.center, xi, fam.bound_params, 0.0);
    const Jet2 scl = eval_param_expr(fam.quad.scale, xi, fam.bound_params, 1.0);
    if (ns.standardized && !(scl.value > 0.0))
        fail(ErrorKind::InvalidArgument, "quadrature scale must be positive");

    FamilyMoments out;
    out.score.assign(static_cast<size_t>(m), 0.0);
    out.g = MatrixNN(m);
    out.C = DenseTensor::zeros(m, {Slot::Lower, Slot::Lower, Slot::Lower});

    std::vector<Jet2> vars(static_cast<size_t>(m) + 1);
    for (int q = 0; q < static_cast<int>(ns.t.size()); ++q) {
        const double x = ns.standardized ? center.value + kSqrt2 * scl.value * ns.t[static_cast<size_t>(q)]
                                         : ns.t[static_cast<size_t>(q)];
        const double w = ns.standardized ? ns.weight[static_cast<size_t>(q)] * kSqrt2 * scl.value
                                         : ns.weight[static_cast<size_t>(q)];
        for (int i = 0; i < m; ++i) vars[static_cast<size_t>(i)] = Jet2::variable(m + 1, i, xi[static_cast<size_t>(i)]);
        vars[static_cast<size_t>(m)] = Jet2::variable(m + 1, m, x);
        const Jet2 l = eval_expr<double>(fam.log_density, vars, fam.bound_params);
        const double p = std::exp(l.value);
        const double wp = w * p;
        out.norm += wp;
        for (int i = 0; i < m; ++i) {
            out.score[static_cast<size_t>(i)] += wp * l.g(i);
            for (int j = 0; j < m; ++j) {
                out.g(i, j) += wp * l.g(i) * l.g(j);
                for (int k = 0; k < m; ++k)
                    out.C.at({i, j, k}) += wp * l.g(i) * l.g(j) * l.g(k);
            }
        }
    }
    check_mass(out.norm);
    return out;
}

MatrixNN fisher_metric(const ParametricFamily& fam, std::span<const double> xi) {
    return family_moments(fam, xi).g;
}

DenseTensor cubic_tensor_family(const ParametricFamily& fam, std::span<const double> xi) {
    return family_moments(fam, xi).C;
}

FisherData gaussian_closed_forms(double mu, double sigma) {
    (void)mu; // the Gaussian information geometry is translation invariant
    if (!(sigma > 0.0)) fail(ErrorKind::NonpositiveSigma, "sigma must be positive");
    FisherData data;
    data.g = MatrixNN(2);
    data.g(0, 0) = 1.0 / (sigma * sigma);
    data.g(1, 1) = 2.0 / (sigma * sigma);
    data.C = DenseTensor::zeros(2, {Slot::Lower, Slot::Lower, Slot::Lower});
    const double s3 = sigma * sigma * sigma;
    data.C.at({0, 0, 1}) = 2.0 / s3;
    data.C.at({0, 1, 0}) = 2.0 / s3;
    data.C.at({1, 0, 0}) = 2.0 / s3;
    data.C.at({1, 1, 1}) = 8.0 / s3;
    return data;
}

FamilyChartJets family_chart_jets(const ParametricFamily& fam, std::span<const double> xi) {
    check_xi(fam, xi);
    const int m = fam.m;
    const NodeSet ns = build_nodes(fam);
    const Jet2 center = eval_param_expr(fam.quad.center, xi, fam.bound_params, 0.0);
    const Jet2 scl = eval_param_expr(fam.quad.scale, xi, fam.bound_params, 1.0);
    if (ns.standardized && !(scl.value > 0.0))
        fail(ErrorKind::InvalidArgument, "quadrature scale must be positive");

    using Inner = Jet2;
    using Outer = Taylor2<Inner>;

    // Accumulators as m-direction jets in xi.
    Jet2 norm = Jet2::constant(m, 0.0);
    std::vector<Jet2> score(static_cast<size_t>(m), Jet2::constant(m, 0.0));
    std::vector<Jet2> gacc(static_cast<size_t>(m) * m, Jet2::constant(m, 0.0));
    std::vector<Jet2> cacc(static_cast<size_t>(m) * m * m, Jet2::constant(m, 0.0));
    auto gat = [&](int i, int j) -> Jet2& { return gacc[static_cast<size_t>(i) * m + j]; };
    auto cat = [&](int i, int j, int k) -> Jet2& {
        return cacc[(static_cast<size_t>(i) * m + j) * m + k];
    };

    std::vector<Inner> bound_inner;
    bound_inner.reserve(fam.bound_params.size());
    for (double v : fam.bound_params) bound_inner.push_back(Inner(v));

    std::vector<Outer> vars(static_cast<size_t>(m) + 1);
    for (int q = 0; q < static_cast<int>(ns.t.size()); ++q) {
        const double tq = ns.t[static_cast<size_t>(q)];
        // x(xi) and the measure factor as jets in xi
        Jet2 xjet, measure;
        if (ns.standardized) {
            xjet = center + (kSqrt2 * tq) * scl;
            measure = (kSqrt2 * ns.weight[static_cast<size_t>(q)]) * scl;
        } else {
            xjet = Jet2::constant(m, tq);
            measure = Jet2::constant(m, ns.weight[static_cast<size_t>(q)]);
        }

        // Nested evaluation against all m+1 directions (xi and x); the node
        // dependence on xi is composed in afterwards.
        for (int i = 0; i <= m; ++i) {
            const double v = i < m ? xi[static_cast<size_t>(i)] : xjet.value;
            vars[static_cast<size_t>(i)] = Outer::variable(m + 1, i, Inner::variable(m + 1, i, v));
        }
        const Outer l = eval_expr<Inner>(fam.log_density, vars, bound_inner);

        const Inner p = exp(l.value);
        const Jet2 pj = push_through_node(p, xjet, m) * measure;
        norm = norm + pj;
        for (int i = 0; i < m; ++i) {
            const Inner& si = l.g(i);
            score[static_cast<size_t>(i)] =
                score[static_cast<size_t>(i)] + push_through_node(p * si, xjet, m) * measure;
            for (int j = i; j < m; ++j) {
                const Inner pij = p * si * l.g(j);
                gat(i, j) = gat(i, j) + push_through_node(pij, xjet, m) * measure;
                for (int k = j; k < m; ++k)
                    cat(i, j, k) =
                        cat(i, j, k) + push_through_node(pij * l.g(k), xjet, m) * measure;
            }
        }
    }
    check_mass(norm.value);

    FamilyChartJets out;
    out.norm = norm.value;
    out.score.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) out.score[static_cast<size_t>(i)] = score[static_cast<size_t>(i)].value;

    out.mj.n = m;
    out.mj.g = MatrixNN(m);
    out.mj.dg.assign(static_cast<size_t>(m) * m * m, 0.0);
    out.mj.ddg.assign(static_cast<size_t>(m) * m * m * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            const Jet2& G = gat(i, j);
            out.mj.g(i, j) = G.value;
            out.mj.g(j, i) = G.value;
            for (int a = 0; a < m; ++a) {
                out.mj.dgr(a, i, j) = G.g(a);
                out.mj.dgr(a, j, i) = G.g(a);
                for (int b = 0; b < m; ++b) {
                    out.mj.ddgr(a, b, i, j) = G.h(a, b);
                    out.mj.ddgr(a, b, j, i) = G.h(a, b);
                }
            }
        }
    const double det = determinant(out.mj.g);
    if (std::abs(det) <= 1e-10)
        fail(ErrorKind::SingularMetric, "Fisher metric is numerically singular at this xi");
    out.mj.g_inv = inverse(out.mj.g);

    out.C = DenseTensor::zeros(m, {Slot::Lower, Slot::Lower, Slot::Lower});
    out.dC.assign(static_cast<size_t>(m) * m * m * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            for (int k = j; k < m; ++k) {
                const Jet2& Cj = cat(i, j, k);
                const int perms[6][3] = {{i, j, k}, {i, k, j}, {j, i, k},
                                         {j, k, i}, {k, i, j}, {k, j, i}};
                for (const auto& pidx : perms) {
                    out.C.at({pidx[0], pidx[1], pidx[2]}) = Cj.value;
                    for (int a = 0; a < m; ++a)
                        out.dC[((static_cast<size_t>(a) * m + pidx[0]) * m + pidx[1]) * m + pidx[2]] =
                            Cj.g(a);
                }
            }
    return out;
}

AlphaStructure family_alpha_structure(const ParametricFamily& fam, std::span<const double> xi,
                                      double alpha) {
    const FamilyChartJets chart = family_chart_jets(fam, xi);
    AlphaStructure out;
    out.mj = chart.mj;
    out.C = chart.C;
    out.lc = christoffel_lc(chart.mj);
    out.plus = duality::alpha_connection(chart.mj, out.lc, chart.C, chart.dC, alpha);
    out.minus = duality::alpha_connection(chart.mj, out.lc, chart.C, chart.dC, -alpha);

    const int m = fam.m;
    const LoweredConnectionJets lp = lower_connection(chart.mj, out.plus);
    const LoweredConnectionJets lm = lower_connection(chart.mj, out.minus);
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                worst = std::max(worst, std::abs(chart.mj.dgv(i, j, k) - lp.v(k, j, i) - lm.v(j, k, i)));
    out.dual_coupling_residual = worst;
    return out;
}

} // namespace geoduel::infogeo

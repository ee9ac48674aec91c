#include <doctest.h>

#include "geoduel/duality.hpp"
#include "testutil.hpp"

using namespace geoduel;
using namespace geoduel::testutil;
using namespace geoduel::duality;

namespace {

// Diagonal metric whose inverse is expressible, so cubic distortions can be
// written exactly as expressions.
MetricField diag_metric_2d() {
    const auto coords = coords_for(2);
    std::vector<std::vector<Expr>> grid(2, std::vector<Expr>(2));
    grid[0][0] = parse_expr("1 + 0.2*x0^2", coords);
    grid[0][1] = parse_expr("0", coords);
    grid[1][0] = parse_expr("0", coords);
    grid[1][1] = parse_expr("1 + 0.3*x1^2", coords);
    return MetricField::from_grid(std::move(grid));
}

// Gamma = Gamma0 - C/2 with C_000 = c0(x), C_111 = c1(x): a statistical
// (torsion-free, totally symmetric nonmetricity) structure.
ConnectionField cubic_connection_2d() {
    const auto coords = coords_for(2);
    std::vector<Expr> dist;
    const std::string zero = "0";
    const std::string n000 = "-0.5*(0.3 + 0.1*x1)/(1 + 0.2*x0^2)";
    const std::string n111 = "-0.5*(0.2 - 0.15*x0)/(1 + 0.3*x1^2)";
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                std::string text = zero;
                if (k == 0 && i == 0 && j == 0) text = n000;
                if (k == 1 && i == 1 && j == 1) text = n111;
                dist.push_back(parse_expr(text, coords));
            }
    return ConnectionField::lc_plus_distortion(2, std::move(dist));
}

} // namespace

TEST_CASE("nonmetric dual: Levi-Civita is self dual") {
    SplitMix64 rng(201);
    const MetricField g = random_metric(rng, 3);
    const std::vector<double> p = random_point(rng, 3);
    const MetricJets mj = g.evaluate(p);
    const ConnectionJets lc = christoffel_lc(mj);
    const DualPair pair = nonmetric_dual(mj, lc);
    double worst = 0.0;
    for (size_t f = 0; f < lc.gamma.size(); ++f)
        worst = std::max(worst, std::abs(pair.dual.gamma[f] - lc.gamma[f]));
    CHECK(worst < 1e-13);
    CHECK(pair.defining_residual < 1e-13);
}

TEST_CASE("nonmetric dual: Gamma0 -/+ C/2 are dually coupled and the cubic tensor returns") {
    const MetricField g = diag_metric_2d();
    const ConnectionField conn = cubic_connection_2d();
    SplitMix64 rng(202);
    for (int trial = 0; trial < 8; ++trial) {
        const std::vector<double> p = random_point(rng, 2);
        const MetricJets mj = g.evaluate(p);
        const ConnectionJets cj = conn.evaluate(mj, p);
        const ConnectionJets lc = christoffel_lc(mj);

        const DualPair pair = nonmetric_dual(mj, cj);
        CHECK(pair.defining_residual < 1e-12);

        // dual = Gamma0 + C/2 slotwise: dual - lc == lc - primal
        double worst = 0.0;
        for (size_t f = 0; f < cj.gamma.size(); ++f)
            worst = std::max(worst,
                             std::abs((pair.dual.gamma[f] - lc.gamma[f]) - (lc.gamma[f] - cj.gamma[f])));
        CHECK(worst < 1e-12);

        // involution
        const DualPair twice = nonmetric_dual(mj, pair.dual);
        worst = 0.0;
        for (size_t f = 0; f < cj.gamma.size(); ++f)
            worst = std::max(worst, std::abs(twice.dual.gamma[f] - cj.gamma[f]));
        CHECK(worst < 1e-12);

        // the cubic tensor is the expected one
        const CubicTensor cubic = cubic_tensor(mj, pair);
        CHECK(cubic.C.at({0, 0, 0}) == doctest::Approx(0.3 + 0.1 * p[1]).epsilon(1e-11));
        CHECK(cubic.C.at({1, 1, 1}) == doctest::Approx(0.2 - 0.15 * p[0]).epsilon(1e-11));
        CHECK(std::abs(cubic.C.at({0, 0, 1})) < 1e-12);
    }
}

TEST_CASE("cubic tensor: Levi-Civita pair has C = 0; torsionful pairs are rejected") {
    SplitMix64 rng(203);
    const MetricField g = random_metric(rng, 2);
    const std::vector<double> p = random_point(rng, 2);
    const MetricJets mj = g.evaluate(p);
    const ConnectionJets lc = christoffel_lc(mj);
    CHECK(max_abs(cubic_tensor(mj, nonmetric_dual(mj, lc)).C) < 1e-12);

    const ConnectionField torsionful =
        ConnectionField::lc_plus_distortion(2, random_distortion(rng, 2));
    const ConnectionJets cj = torsionful.evaluate(mj, p);
    try {
        cubic_tensor(mj, nonmetric_dual(mj, cj));
        FAIL("expected NotTorsionFree");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotTorsionFree);
        CHECK(std::string(e.what()).find("max |S|") != std::string::npos);
    }
}

TEST_CASE("alpha connections: endpoints, mixture and mean identities") {
    const MetricField g = diag_metric_2d();
    const ConnectionField conn = cubic_connection_2d();
    SplitMix64 rng(204);
    const std::vector<double> p = random_point(rng, 2);
    const MetricJets mj = g.evaluate(p);
    const ConnectionJets cj = conn.evaluate(mj, p);
    const ConnectionJets lc = christoffel_lc(mj);
    const DualPair pair = nonmetric_dual(mj, cj);
    const geometry::NonmetricityJets qj = geometry::nonmetricity_jets(mj, cj);

    // alpha = 0 is the Levi-Civita connection
    const ConnectionJets zero = alpha_connection(mj, lc, qj.Q, qj.dQ, 0.0);
    for (size_t f = 0; f < lc.gamma.size(); ++f) CHECK(zero.gamma[f] == lc.gamma[f]);

    // alpha = 1 recovers the primal (Gamma = Gamma0 - C/2), alpha = -1 the dual
    const ConnectionJets plus1 = alpha_connection(mj, lc, qj.Q, qj.dQ, 1.0);
    double worst = 0.0;
    for (size_t f = 0; f < cj.gamma.size(); ++f)
        worst = std::max(worst, std::abs(plus1.gamma[f] - cj.gamma[f]));
    CHECK(worst < 1e-12);

    for (double alpha : {0.7, 0.3, 2.5}) {
        const ConnectionJets ca = alpha_connection(mj, lc, qj.Q, qj.dQ, alpha);
        const ConnectionJets cm = alpha_connection(mj, lc, qj.Q, qj.dQ, -alpha);
        // mixture identity against the pair
        const LoweredConnectionJets la = lower_connection(mj, ca);
        const LoweredConnectionJets lp = lower_connection(mj, pair.primal);
        const LoweredConnectionJets ld = lower_connection(mj, pair.dual);
        worst = 0.0;
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    worst = std::max(worst, std::abs(la.v(k, i, j) -
                                                     0.5 * (1 + alpha) * lp.v(k, i, j) -
                                                     0.5 * (1 - alpha) * ld.v(k, i, j)));
        CHECK(worst < 1e-12);
        // mean identity
        worst = 0.0;
        for (size_t f = 0; f < ca.gamma.size(); ++f)
            worst = std::max(worst, std::abs(0.5 * (ca.gamma[f] + cm.gamma[f]) - lc.gamma[f]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("generalized dual: t = 1/2 is the classical dual, other t lose involution") {
    const MetricField g = diag_metric_2d();
    const ConnectionField conn = cubic_connection_2d();
    SplitMix64 rng(205);
    const std::vector<double> p = random_point(rng, 2);
    const MetricJets mj = g.evaluate(p);
    const ConnectionJets cj = conn.evaluate(mj, p);

    const DualPair host = generalized_dual(mj, cj, 0.5);
    const DualPair classical = nonmetric_dual(mj, cj);
    double worst = 0.0;
    for (size_t f = 0; f < cj.gamma.size(); ++f)
        worst = std::max(worst, std::abs(host.dual.gamma[f] - classical.dual.gamma[f]));
    CHECK(worst < 1e-12);

    for (double t : {0.25, 0.75, -0.5}) {
        const DualPair pair = generalized_dual(mj, cj, t);
        CHECK(pair.defining_residual < 1e-12);
        // the combination has vanishing non-metricity
        const ConnectionJets mix = geometry::convex_combination(pair.primal, pair.dual, t);
        CHECK(max_abs(geometry::nonmetricity(mj, mix)) < 1e-12);
        // double dual drifts away from the primal
        const DualPair twice = generalized_dual(mj, pair.dual, t);
        double gap = 0.0;
        for (size_t f = 0; f < cj.gamma.size(); ++f)
            gap = std::max(gap, std::abs(twice.dual.gamma[f] - cj.gamma[f]));
        if (t == 0.25) CHECK(gap > 1e-3);
    }

    CHECK_THROWS_AS(generalized_dual(mj, cj, 1.0), Error);
    CHECK_THROWS_AS(generalized_dual(mj, cj, 0.0), Error);
    try {
        generalized_dual(mj, cj, 1.0);
        FAIL("expected DegenerateT");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateT);
    }
}

TEST_CASE("torsion dual: swap definition, fixed points and bit-exact involution") {
    SplitMix64 rng(206);
    const ConnectionJets cj = random_connection_jets(rng, 3);
    const DualPair pair = torsion_dual(cj);
    CHECK(pair.defining_residual == 0.0);
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(pair.dual.g(k, i, j) == cj.g(k, j, i));

    const DualPair twice = torsion_dual(pair.dual);
    CHECK(twice.dual.gamma == cj.gamma);
    CHECK(twice.dual.dgamma == cj.dgamma);

    // torsion-free connections are fixed points
    ConnectionJets sym = ConnectionJets::zeros(2);
    sym.gr(0, 0, 1) = 0.4;
    sym.gr(0, 1, 0) = 0.4;
    const DualPair fixed = torsion_dual(sym);
    CHECK(fixed.dual.gamma == sym.gamma);

    // the single-entry example: Gamma^1_01 = c maps to Gamma*^1_10 = c
    ConnectionJets one = ConnectionJets::zeros(2);
    one.gr(1, 0, 1) = 0.9;
    const DualPair star = torsion_dual(one);
    CHECK(star.dual.g(1, 1, 0) == 0.9);
    CHECK(star.dual.g(1, 0, 1) == 0.0);
}

TEST_CASE("torsion dual properties: exact identities and the metric mean") {
    SplitMix64 rng(207);

    // arbitrary jets: (a), (b), mutual torsion and the distortion swap are
    // exactly zero
    const MetricField g = random_metric(rng, 3);
    const std::vector<double> p = random_point(rng, 3);
    const MetricJets mj = g.evaluate(p);
    const ConnectionField field = ConnectionField::lc_plus_distortion(3, random_distortion(rng, 3));
    const ConnectionJets cj = field.evaluate(mj, p);
    const TorsionDualReport rep = torsion_dual_properties(mj, torsion_dual(cj));
    CHECK(rep.t_plus_tstar == 0.0);
    CHECK(rep.s_plus_sstar == 0.0);
    CHECK(rep.mutual_torsion == 0.0);
    CHECK(rep.distortion_swap == 0.0);
    CHECK_FALSE(rep.mean_applicable); // generic distortion is not metric

    // metric three-form pair: the mean connection is the Levi-Civita one
    const ConnectionField af = random_three_form(rng, 3);
    const ConnectionJets cja = af.evaluate(mj, p);
    const TorsionDualReport repa = torsion_dual_properties(mj, torsion_dual(cja));
    CHECK(repa.mean_applicable);
    CHECK(repa.mean_minus_lc < 1e-11);
    CHECK(repa.q_primal < 1e-12);
    CHECK(repa.q_dual < 1e-12);
}

TEST_CASE("theorem 1: three-form distortions decompose and everything else is rejected") {
    SplitMix64 rng(208);

    // n = 3 generator form
    const auto coords3 = coords_for(3);
    const MetricField g3 = random_metric(rng, 3);
    const Expr f = parse_expr("0.3 + 0.2*x0 - 0.1*x1*x2", coords3);
    const ConnectionField af = ConnectionField::three_form_generator(f);
    const std::vector<double> p3 = random_point(rng, 3);
    const MetricJets mj3 = g3.evaluate(p3);
    const ThreeFormResult res = theorem1_decompose(mj3, af.evaluate(mj3, p3));
    CHECK(res.antisymmetry_residual < 1e-11);
    CHECK(res.primal_residual < 1e-11);
    CHECK(res.dual_residual < 1e-11);
    const double fval = 0.3 + 0.2 * p3[0] - 0.1 * p3[1] * p3[2];
    CHECK(res.form.A.at({0, 1, 2}) == doctest::Approx(fval).epsilon(1e-10));
    CHECK(res.form.A.at({1, 0, 2}) == doctest::Approx(-fval).epsilon(1e-10));

    // n = 4 component form
    const MetricField g4 = random_metric(rng, 4);
    const ConnectionField a4 = random_three_form(rng, 4);
    const std::vector<double> p4 = random_point(rng, 4);
    const MetricJets mj4 = g4.evaluate(p4);
    const ThreeFormResult res4 = theorem1_decompose(mj4, a4.evaluate(mj4, p4));
    CHECK(res4.antisymmetry_residual < 1e-12);
    CHECK(res4.primal_residual < 1e-11);
    CHECK(res4.dual_residual < 1e-11);

    // symmetric cubic distortion: wrong symmetry class
    const MetricField g2 = diag_metric_2d();
    const std::vector<double> p2 = random_point(rng, 2);
    const MetricJets mj2 = g2.evaluate(p2);
    const ConnectionJets cstat = cubic_connection_2d().evaluate(mj2, p2);
    CHECK_THROWS_AS(theorem1_decompose(mj2, cstat), Error);
    try {
        theorem1_decompose(mj2, cstat);
    } catch (const Error& e) {
        // n = 2 fails the dimension bound before anything else
        CHECK(e.kind() == ErrorKind::DimensionTooSmall);
    }

    // a symmetric-C distortion in 3d is metric? no: it has Q != 0 -> NotMetric
    const ConnectionField sym3 =
        ConnectionField::lc_plus_distortion(3, random_symmetric_distortion(rng, 3));
    const ConnectionJets cj3 = sym3.evaluate(mj3, p3);
    try {
        theorem1_decompose(mj3, cj3);
        FAIL("expected NotMetric");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotMetric);
    }

    // metric but with a last-pair symmetric part: contorsion-type distortion
    // T^m_ij from a random antisymmetric-in-first-pair lowered N that is NOT
    // antisymmetric in the last pair
    const MetricJets mjf = MetricField::identity(3, coords3).evaluate(p3);
    ConnectionJets cjt = christoffel_lc(mjf);
    // N_kij = a_k b_[i c_j] pattern lowered: antisymmetrize first pair only
    double a[3] = {0.3, -0.2, 0.5}, b[3] = {0.1, 0.4, -0.3};
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cjt.gr(k, i, j) += a[k] * b[i] - a[i] * b[k];
    try {
        theorem1_decompose(mjf, cjt);
        FAIL("expected NotLastPairAntisymmetric");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotLastPairAntisymmetric);
    }
}

TEST_CASE("lemma sign sweep: p = 0 ties in the rhs sign, p = 1 locks one variant") {
    SplitMix64 rng(209);

    // p = 0: totally symmetric C-type lowered distortion
    {
        const MetricField g = diag_metric_2d();
        const std::vector<double> p = random_point(rng, 2);
        const MetricJets mj = g.evaluate(p);
        const ConnectionJets cj = cubic_connection_2d().evaluate(mj, p);
        const LoweredDistortion ld = lowered_distortion(mj, cj);
        const LemmaReport rep =
            lemma_curvature_relation(mj, christoffel_lc(mj), ld.N, ld.dN, 0);
        CHECK(rep.res(+1, +1) < 1e-9);
        CHECK(rep.res(+1, -1) < 1e-9); // derivative term vanishes for p = 0
        CHECK(rep.res(-1, +1) > 1e-6);
        CHECK(rep.rhs_magnitude == 0.0);
    }

    // p = 1: three-form distortion locks (s1, s2) = (+, +) alone
    {
        const MetricField g = random_metric(rng, 3);
        const std::vector<double> p = random_point(rng, 3);
        const MetricJets mj = g.evaluate(p);
        const ConnectionJets cj = random_three_form(rng, 3).evaluate(mj, p);
        const LoweredDistortion ld = lowered_distortion(mj, cj);
        const LemmaReport rep =
            lemma_curvature_relation(mj, christoffel_lc(mj), ld.N, ld.dN, 1);
        CHECK(rep.res(+1, +1) < 1e-9);
        CHECK(rep.res(+1, -1) > 1e-6);
        CHECK(rep.res(-1, +1) > 1e-6);
        CHECK(rep.res(-1, -1) > 1e-6);
        CHECK(rep.rhs_magnitude > 1e-6);
    }

    // N = 0 on a flat background passes every variant
    {
        const MetricField g = MetricField::identity(2, coords_for(2));
        const std::vector<double> p = random_point(rng, 2);
        const MetricJets mj = g.evaluate(p);
        const DenseTensor zero = DenseTensor::zeros(2, {Slot::Lower, Slot::Lower, Slot::Lower});
        const std::vector<double> dzero(16, 0.0);
        const LemmaReport rep = lemma_curvature_relation(mj, christoffel_lc(mj), zero, dzero, 0);
        CHECK(rep.res(+1, +1) < 1e-12);
        CHECK(rep.res(-1, -1) < 1e-12);
        // on a curved background only the first-pair antisymmetry survives:
        // res(+1, .) stays zero, res(-1, .) picks up 2 R0
        const MetricField gc = random_metric(rng, 2);
        const MetricJets mjc = gc.evaluate(p);
        const LemmaReport repc =
            lemma_curvature_relation(mjc, christoffel_lc(mjc), zero, dzero, 0);
        CHECK(repc.res(+1, +1) < 1e-12);
    }

    // mixed N is rejected
    {
        const MetricField g = random_metric(rng, 2);
        const std::vector<double> p = random_point(rng, 2);
        const MetricJets mj = g.evaluate(p);
        DenseTensor mixed = DenseTensor::zeros(2, {Slot::Lower, Slot::Lower, Slot::Lower});
        mixed.at({0, 1, 0}) = 0.5;
        const std::vector<double> dzero(16, 0.0);
        try {
            lemma_curvature_relation(mj, christoffel_lc(mj), mixed, dzero, 0);
            FAIL("expected WrongSymmetryClass");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::WrongSymmetryClass);
        }
    }
}

TEST_CASE("theorem 3: torsion dual pairs share the Ricci scalar") {
    SplitMix64 rng(210);

    // flat metric with a constant three-form
    {
        const auto coords = coords_for(3);
        const MetricField g = MetricField::identity(3, coords);
        const ConnectionField af = ConnectionField::three_form_generator(parse_expr("0.4", coords));
        const std::vector<double> p = random_point(rng, 3);
        const MetricJets mj = g.evaluate(p);
        CHECK(theorem3_ricci_equality(mj, torsion_dual(af.evaluate(mj, p))) < 1e-10);
    }

    // random metric with polynomial three-forms
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 3 + static_cast<int>(rng.next() % 2);
        const MetricField g = random_metric(rng, n);
        const ConnectionField af = random_three_form(rng, n);
        const std::vector<double> p = random_point(rng, n);
        const MetricJets mj = g.evaluate(p);
        CHECK(theorem3_ricci_equality(mj, torsion_dual(af.evaluate(mj, p))) < 1e-9);
    }

    // A = 0: exactly equal
    {
        const MetricField g = random_metric(rng, 3);
        const std::vector<double> p = random_point(rng, 3);
        const MetricJets mj = g.evaluate(p);
        CHECK(theorem3_ricci_equality(mj, torsion_dual(christoffel_lc(mj))) == 0.0);
    }

    // a non-metric pair is rejected
    {
        const MetricField g = random_metric(rng, 3);
        const std::vector<double> p = random_point(rng, 3);
        const MetricJets mj = g.evaluate(p);
        const ConnectionField field =
            ConnectionField::lc_plus_distortion(3, random_distortion(rng, 3));
        try {
            theorem3_ricci_equality(mj, torsion_dual(field.evaluate(mj, p)));
            FAIL("expected NotMetric");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NotMetric);
        }
    }
}

TEST_CASE("both senses: three-forms solve the constraint, cubic distortions do not") {
    SplitMix64 rng(211);
    const MetricField g3 = random_metric(rng, 3);
    const std::vector<double> p3 = random_point(rng, 3);
    const MetricJets mj3 = g3.evaluate(p3);

    const ConnectionJets cj = random_three_form(rng, 3).evaluate(mj3, p3);
    const BothSensesReport rep = both_senses_constraint(mj3, cj);
    CHECK(rep.n_sym_last < 1e-12);
    CHECK(rep.nstar_sym_last < 1e-12);
    CHECK(rep.combined < 1e-12);

    const MetricField g2 = diag_metric_2d();
    const std::vector<double> p2 = random_point(rng, 2);
    const MetricJets mj2 = g2.evaluate(p2);
    const ConnectionJets cstat = cubic_connection_2d().evaluate(mj2, p2);
    const BothSensesReport rep2 = both_senses_constraint(mj2, cstat);
    // N = -C/2 is totally symmetric: the symmetric projection is all of it
    const DenseTensor C = geometry::nonmetricity(mj2, cstat);
    CHECK(rep2.n_sym_last == doctest::Approx(0.5 * max_abs(C)).epsilon(1e-9));
    CHECK(rep2.combined == doctest::Approx(max_abs(C)).epsilon(1e-9));

    const ConnectionField mixed = ConnectionField::lc_plus_distortion(3, random_distortion(rng, 3));
    const BothSensesReport rep3 = both_senses_constraint(mj3, mixed.evaluate(mj3, p3));
    CHECK(rep3.n_sym_last > 1e-3);
    CHECK(rep3.combined >= 0.0);
}

#include <doctest.h>

#include <cmath>

#include "geoduel/geometry.hpp"
#include "geoduel/infogeo.hpp"
#include "geoduel/rng.hpp"

using namespace geoduel;
using namespace geoduel::infogeo;

namespace {

constexpr double kSqrtPi = 1.7724538509055159;

ParametricFamily exponential_family() {
    ParametricFamily fam;
    fam.m = 1;
    fam.param_names = {"lam"};
    fam.log_density = parse_expr("log(lam) - lam*x", std::vector<std::string>{"lam", "x"});
    fam.domain.kind = Domain::Kind::Interval;
    fam.domain.a = 0.0;
    fam.domain.b = 20.0;
    fam.quad.kind = QuadratureSpec::Kind::Composite;
    fam.quad.panels = 4096;
    return fam;
}

} // namespace

TEST_CASE("gauss-hermite rule integrates gaussian moments") {
    for (int order : {32, 64, 128}) {
        const GaussHermiteRule rule = make_gauss_hermite(order);
        double m0 = 0.0, m2 = 0.0, m4 = 0.0, modd = 0.0;
        for (int q = 0; q < order; ++q) {
            const double t = rule.node[static_cast<size_t>(q)];
            const double w = rule.total_weight[static_cast<size_t>(q)] * std::exp(-t * t);
            m0 += w;
            m2 += w * t * t;
            m4 += w * t * t * t * t;
            modd += w * t * t * t;
        }
        CHECK(m0 == doctest::Approx(kSqrtPi).epsilon(1e-13));
        CHECK(m2 == doctest::Approx(0.5 * kSqrtPi).epsilon(1e-13));
        CHECK(m4 == doctest::Approx(0.75 * kSqrtPi).epsilon(1e-13));
        CHECK(std::abs(modd) < 1e-13);
    }
}

TEST_CASE("composite simpson integrates polynomials and exponentials") {
    const CompositeRule rule = make_composite_simpson(0.0, 1.0, 64);
    double cubic = 0.0, expo = 0.0;
    for (size_t q = 0; q < rule.node.size(); ++q) {
        cubic += rule.weight[q] * rule.node[q] * rule.node[q] * rule.node[q];
        expo += rule.weight[q] * std::exp(rule.node[q]);
    }
    CHECK(cubic == doctest::Approx(0.25).epsilon(1e-14)); // Simpson is exact on cubics
    CHECK(expo == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-9));
}

TEST_CASE("gaussian closed forms") {
    const FisherData one = gaussian_closed_forms(0.3, 1.0);
    CHECK(one.g(0, 0) == 1.0);
    CHECK(one.g(1, 1) == 2.0);
    CHECK(one.g(0, 1) == 0.0);
    CHECK(one.C.at({1, 1, 1}) == 8.0);
    CHECK(one.C.at({0, 0, 1}) == 2.0);
    CHECK(one.C.at({0, 1, 0}) == 2.0);
    CHECK(one.C.at({0, 0, 0}) == 0.0);
    CHECK(one.C.at({0, 1, 1}) == 0.0);

    const FisherData two = gaussian_closed_forms(-1.0, 2.0);
    CHECK(two.g(0, 0) == doctest::Approx(0.25));
    CHECK(two.g(1, 1) == doctest::Approx(0.5));
    CHECK(two.C.at({1, 1, 1}) == doctest::Approx(1.0));

    CHECK_THROWS_AS(gaussian_closed_forms(0.0, -1.0), Error);
    try {
        gaussian_closed_forms(0.0, 0.0);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonpositiveSigma);
    }
}

TEST_CASE("fisher metric of the gaussian family matches the closed form") {
    const ParametricFamily fam = ParametricFamily::gaussian();

    const MatrixNN g = fisher_metric(fam, std::vector<double>{0.0, 1.0});
    CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(g(1, 1) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(g(0, 1)) < 1e-9);

    const MatrixNN g2 = fisher_metric(fam, std::vector<double>{0.7, 2.0});
    CHECK(g2(0, 0) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(g2(1, 1) == doctest::Approx(0.5).epsilon(1e-10));

    const DenseTensor C = cubic_tensor_family(fam, std::vector<double>{0.0, 1.0});
    CHECK(C.at({0, 0, 1}) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(C.at({0, 1, 0}) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(C.at({1, 0, 0}) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(C.at({1, 1, 1}) == doctest::Approx(8.0).epsilon(1e-10));
    CHECK(std::abs(C.at({0, 0, 0})) < 1e-9);
    CHECK(std::abs(C.at({0, 1, 1})) < 1e-9);

    const DenseTensor C2 = cubic_tensor_family(fam, std::vector<double>{-0.5, 2.0});
    CHECK(C2.at({1, 1, 1}) == doctest::Approx(1.0).epsilon(1e-10));

    // total symmetry of the quadrature cubic tensor
    const std::vector<int> all{0, 1, 2};
    CHECK(max_abs_diff(C, symmetrize(C, all)) < 1e-10);
}

TEST_CASE("closed forms and quadrature agree across the parameter box") {
    const ParametricFamily fam = ParametricFamily::gaussian();
    SplitMix64 rng(501);
    for (int trial = 0; trial < 10; ++trial) {
        const double mu = rng.uniform(-2.0, 2.0);
        const double sigma = rng.uniform(0.5, 3.0);
        const std::vector<double> xi{mu, sigma};
        const FamilyMoments mom = family_moments(fam, xi);
        const FisherData closed = gaussian_closed_forms(mu, sigma);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(std::abs(mom.g(i, j) - closed.g(i, j)) < 1e-8);
        CHECK(max_abs_diff(mom.C, closed.C) < 1e-8);
        CHECK(std::abs(mom.norm - 1.0) < 1e-12);
        CHECK(std::abs(mom.score[0]) < 1e-9);
        CHECK(std::abs(mom.score[1]) < 1e-9);
    }
}

TEST_CASE("quadrature health: node doubling, normalization and underflow errors") {
    const ParametricFamily fam = ParametricFamily::gaussian();
    for (double sigma : {0.5, 1.0, 3.0}) {
        const std::vector<double> xi{0.3, sigma};
        const FamilyMoments a = family_moments(fam, xi);
        ParametricFamily denser = fam;
        denser.quad.order *= 2;
        const FamilyMoments b = family_moments(denser, xi);
        double diff = std::abs(a.norm - b.norm);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) diff = std::max(diff, std::abs(a.g(i, j) - b.g(i, j)));
        diff = std::max(diff, max_abs_diff(a.C, b.C));
        CHECK(diff < 1e-9);
    }

    // an unnormalized density is rejected
    ParametricFamily bad;
    bad.m = 1;
    bad.param_names = {"a"};
    bad.log_density = parse_expr("-(x - a)^2", std::vector<std::string>{"a", "x"});
    bad.domain.kind = Domain::Kind::RealLine;
    bad.quad.kind = QuadratureSpec::Kind::Hermite;
    try {
        family_moments(bad, std::vector<double>{0.0});
        FAIL("expected NormalizationError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NormalizationError);
    }

    // a density whose mass sits far outside the (unstandardized) rule
    ParametricFamily far;
    far.m = 1;
    far.param_names = {"mu"};
    far.log_density =
        parse_expr("-0.5*(x - mu)^2 - 0.91893853320467274", std::vector<std::string>{"mu", "x"});
    far.domain.kind = Domain::Kind::RealLine;
    far.quad.kind = QuadratureSpec::Kind::Hermite; // no center hint on purpose
    try {
        family_moments(far, std::vector<double>{300.0});
        FAIL("expected QuadratureUnderflow");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::QuadratureUnderflow);
    }
}

TEST_CASE("custom bounded family: the exponential distribution") {
    const ParametricFamily fam = exponential_family();
    for (double lam : {1.5, 2.0, 3.0}) {
        const std::vector<double> xi{lam};
        const FamilyMoments mom = family_moments(fam, xi);
        CHECK(std::abs(mom.norm - 1.0) < 1e-9);
        CHECK(std::abs(mom.score[0]) < 1e-9);
        CHECK(mom.g(0, 0) == doctest::Approx(1.0 / (lam * lam)).epsilon(1e-8));
        CHECK(is_spd(mom.g));
        // E[(1/lam - x)^3] = -2/lam^3 for the exponential distribution
        CHECK(mom.C.at({0, 0, 0}) == doctest::Approx(-2.0 / (lam * lam * lam)).epsilon(1e-7));
    }
}

TEST_CASE("family chart jets: quadrature derivatives match the closed forms") {
    const ParametricFamily fam = ParametricFamily::gaussian();
    const double mu = 0.4, sigma = 1.3;
    const FamilyChartJets chart = family_chart_jets(fam, std::vector<double>{mu, sigma});

    const double s2 = sigma * sigma, s3 = s2 * sigma, s4 = s3 * sigma, s5 = s4 * sigma;
    // g = diag(1, 2)/sigma^2 depends on sigma only
    CHECK(chart.mj.g(0, 0) == doctest::Approx(1.0 / s2).epsilon(1e-10));
    CHECK(chart.mj.dgv(1, 0, 0) == doctest::Approx(-2.0 / s3).epsilon(1e-9));
    CHECK(chart.mj.dgv(1, 1, 1) == doctest::Approx(-4.0 / s3).epsilon(1e-9));
    CHECK(std::abs(chart.mj.dgv(0, 0, 0)) < 1e-9);
    CHECK(chart.mj.ddgv(1, 1, 0, 0) == doctest::Approx(6.0 / s4).epsilon(1e-8));
    CHECK(chart.mj.ddgv(1, 1, 1, 1) == doctest::Approx(12.0 / s4).epsilon(1e-8));
    CHECK(std::abs(chart.mj.ddgv(0, 1, 0, 0)) < 1e-8);

    // C components scale like 1/sigma^3
    CHECK(chart.C.at({0, 0, 1}) == doctest::Approx(2.0 / s3).epsilon(1e-9));
    CHECK(chart.C.at({1, 1, 1}) == doctest::Approx(8.0 / s3).epsilon(1e-9));
    const double dC =
        chart.dC[((1ull * 2 + 1) * 2 + 1) * 2 + 1]; // d_sigma C_111
    CHECK(dC == doctest::Approx(-24.0 / s4).epsilon(1e-8));
    (void)s5;
}

TEST_CASE("alpha structure on the gaussian family") {
    const ParametricFamily fam = ParametricFamily::gaussian();
    const std::vector<double> xi{0.0, 1.0};

    const AlphaStructure a0 = family_alpha_structure(fam, xi, 0.0);
    double diff = 0.0;
    for (size_t f = 0; f < a0.lc.gamma.size(); ++f)
        diff = std::max(diff, std::abs(a0.plus.gamma[f] - a0.lc.gamma[f]));
    CHECK(diff < 1e-12);

    // the Levi-Civita connection of the Fisher metric is hyperbolic-type:
    // curvature is nonzero
    CHECK(max_abs(geometry::curvature(a0.lc)) > 1e-3);

    const AlphaStructure a1 = family_alpha_structure(fam, xi, 1.0);
    CHECK(a1.dual_coupling_residual < 1e-8);
    // the exponential-family connection is flat
    CHECK(max_abs(geometry::curvature(a1.plus)) < 1e-7);

    const AlphaStructure ah = family_alpha_structure(fam, std::vector<double>{0.6, 1.7}, 0.5);
    CHECK(ah.dual_coupling_residual < 1e-8);
}

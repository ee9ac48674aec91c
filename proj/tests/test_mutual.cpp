#include <doctest.h>

#include "geoduel/duality.hpp"
#include "geoduel/mutual.hpp"
#include "testutil.hpp"

using namespace geoduel;
using namespace geoduel::testutil;
using namespace geoduel::mutual;

TEST_CASE("mutual non-metricity: dual pairs and Levi-Civita pairs vanish") {
    SplitMix64 rng(301);
    const MetricField g = random_metric(rng, 3);
    const std::vector<double> p = random_point(rng, 3);
    const MetricJets mj = g.evaluate(p);
    const ConnectionJets lc = christoffel_lc(mj);
    CHECK(max_abs(mutual_nonmetricity(mj, lc, lc)) < 1e-12);

    const ConnectionField field = ConnectionField::lc_plus_distortion(3, random_distortion(rng, 3));
    const ConnectionJets cj = field.evaluate(mj, p);
    const duality::DualPair pair = duality::nonmetric_dual(mj, cj);
    CHECK(max_abs(mutual_nonmetricity(mj, pair.primal, pair.dual)) < 1e-12);

    // slotwise average of the two non-metricity tensors
    const ConnectionJets c2 = random_connection_jets(rng, 3);
    const DenseTensor W = mutual_nonmetricity(mj, cj, c2);
    const DenseTensor q1 = geometry::nonmetricity(mj, cj);
    const DenseTensor q2 = geometry::nonmetricity(mj, c2);
    CHECK(max_abs_diff(W, scale(add(q1, q2), 0.5)) == 0.0);
}

TEST_CASE("mutual torsion: dual pairs vanish exactly, torsion-free pairs need not") {
    SplitMix64 rng(302);
    const ConnectionJets cj = random_connection_jets(rng, 3);
    const duality::DualPair pair = duality::torsion_dual(cj);
    CHECK(max_abs(mutual_torsion(pair.primal, pair.dual)) == 0.0);

    // two distinct torsion-free connections have nonzero mutual torsion
    const MetricField g = random_metric(rng, 3);
    const std::vector<double> p = random_point(rng, 3);
    const MetricJets mj = g.evaluate(p);
    const ConnectionJets lc = christoffel_lc(mj);
    const ConnectionField sym =
        ConnectionField::lc_plus_distortion(3, random_symmetric_distortion(rng, 3));
    const ConnectionJets c2 = sym.evaluate(mj, p);
    CHECK(max_abs(geometry::torsion_T(c2)) < 1e-13);
    CHECK(max_abs(mutual_torsion(lc, c2)) > 1e-3);

    // coinciding connections: M = 0 when torsion free, M = -T otherwise
    CHECK(max_abs(mutual_torsion(lc, lc)) == 0.0);
    const DenseTensor M = mutual_torsion(cj, cj);
    const DenseTensor T = geometry::torsion_T(cj);
    CHECK(max_abs_diff(M, scale(T, -1.0)) == 0.0);
}

TEST_CASE("mutual torsion: footnote identities and the mixed commutator") {
    SplitMix64 rng(303);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.next() % 3);
        const ConnectionJets c1 = random_connection_jets(rng, n);
        const ConnectionJets c2 = random_connection_jets(rng, n);
        const DenseTensor M = mutual_torsion(c1, c2);
        const DenseTensor K = geometry::difference_tensor(c1, c2);
        const DenseTensor T1 = geometry::torsion_T(c1);
        const DenseTensor T2 = geometry::torsion_T(c2);
        for (int m = 0; m < n; ++m)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    CHECK(M.at({m, j, i}) ==
                          doctest::Approx(K.at({m, j, i}) + T2.at({m, i, j})).epsilon(1e-12));
                    CHECK(M.at({m, j, i}) ==
                          doctest::Approx(T1.at({m, i, j}) + K.at({m, i, j})).epsilon(1e-12));
                }
        const Jet2 f = random_scalar_jet(rng, n);
        CHECK(mixed_commutator_residual(c1, c2, f) < 1e-10);
    }
}

TEST_CASE("mutual curvature: reduction, swap symmetry, antisymmetry, regrouping") {
    SplitMix64 rng(304);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 2 + static_cast<int>(rng.next() % 3);
        const ConnectionJets c1 = random_connection_jets(rng, n);
        const ConnectionJets c2 = random_connection_jets(rng, n);

        // reduces to the Riemann tensor bit for bit
        CHECK(max_abs_diff(mutual_curvature(c1, c1), geometry::curvature(c1)) == 0.0);

        // swap symmetry bit for bit
        CHECK(max_abs_diff(mutual_curvature(c1, c2), mutual_curvature(c2, c1)) == 0.0);

        // antisymmetry in the derivative pair, exactly
        const DenseTensor R = mutual_curvature(c1, c2);
        for (int m = 0; m < n; ++m)
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        CHECK(R.at({m, k, i, j}) == -R.at({m, k, j, i}));

        // the regrouped half-sum-plus-K form
        CHECK(max_abs_diff(R, mutual_curvature_regrouped(c1, c2)) < 1e-9);

        // curvature-dual residual is the mutual curvature verbatim
        CHECK(max_abs_diff(curvature_dual_residual(c1, c2), R) == 0.0);
    }
}

TEST_CASE("mutual curvature: two flat connections with a nonzero mutual curvature") {
    // Cartesian zero connection and the polar-chart Levi-Civita connection:
    // individually flat, mutually curved.
    const auto coords = coords_for(2);
    std::vector<std::vector<Expr>> grid(2, std::vector<Expr>(2));
    grid[0][0] = parse_expr("1", coords);
    grid[0][1] = parse_expr("0", coords);
    grid[1][0] = parse_expr("0", coords);
    grid[1][1] = parse_expr("x0^2", coords);
    const MetricField polar = MetricField::from_grid(std::move(grid));
    const std::vector<double> p{1.3, 0.7};
    const ConnectionJets polar_lc = christoffel_lc(polar.evaluate(p));
    const ConnectionJets zero = ConnectionJets::zeros(2);

    CHECK(max_abs(geometry::curvature(polar_lc)) < 1e-13);
    CHECK(max_abs(geometry::curvature(zero)) == 0.0);
    CHECK(max_abs(mutual_curvature(polar_lc, zero)) > 1e-3);

    // a curved connection is not its own curvature dual: the residual is its
    // Riemann tensor
    std::vector<std::vector<Expr>> sgrid(2, std::vector<Expr>(2));
    sgrid[0][0] = parse_expr("1", coords);
    sgrid[0][1] = parse_expr("0", coords);
    sgrid[1][0] = parse_expr("0", coords);
    sgrid[1][1] = parse_expr("sin(x0)^2", coords);
    const MetricField sphere = MetricField::from_grid(std::move(sgrid));
    const MetricJets mjs = sphere.evaluate(std::vector<double>{1.5707963267948966, 0.0});
    const ConnectionJets sph_lc = christoffel_lc(mjs);
    const DenseTensor res = curvature_dual_residual(sph_lc, sph_lc);
    CHECK(res.at({0, 1, 0, 1}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("f-linearity: the symmetrized definition is a tensor, the others are not") {
    SplitMix64 rng(305);
    const int n = 2;
    const auto coords = coords_for(n);
    const MetricField g = random_metric(rng, n);
    const ConnectionField f1 = ConnectionField::lc_plus_distortion(n, random_distortion(rng, n));
    const ConnectionField f2 = ConnectionField::lc_plus_distortion(n, random_distortion(rng, n));

    VectorFieldSpec X, Y, Z;
    X.components = {parse_expr("1 + 0.2*x1", coords), parse_expr("x0", coords)};
    Y.components = {parse_expr("x1^2", coords), parse_expr("1 - 0.3*x0", coords)};
    Z.components = {parse_expr("x0*x1", coords), parse_expr("0.5 + x1", coords)};
    const Expr f = parse_expr("x0", coords);

    for (int trial = 0; trial < 6; ++trial) {
        const std::vector<double> p = random_point(rng, n);
        const MetricJets mj = g.evaluate(p);
        const ConnectionJets c1 = f1.evaluate(mj, p);
        const ConnectionJets c2 = f2.evaluate(mj, p);
        const VectorFieldJets Xj = eval_vector_field(X, p);
        const VectorFieldJets Yj = eval_vector_field(Y, p);
        const VectorFieldJets Zj = eval_vector_field(Z, p);
        const Jet2 fj = eval_jet2(f, p);

        const FLinearityReport paper =
            flinearity_defect(MutualCurvatureDef::Paper, Xj, Yj, Zj, fj, c1, c2);
        CHECK(paper.defect_norm < 1e-9);

        const FLinearityReport puech =
            flinearity_defect(MutualCurvatureDef::Puechmorel, Xj, Yj, Zj, fj, c1, c2);
        CHECK(puech.defect_minus_predicted < 1e-9);
        CHECK(puech.defect_norm > 1e-6);

        const FLinearityReport calin =
            flinearity_defect(MutualCurvatureDef::Calin, Xj, Yj, Zj, fj, c1, c2);
        CHECK(calin.defect_minus_predicted < 1e-9);
        CHECK(calin.defect_norm > 1e-6);

        // coinciding connections kill the Calin defect
        const FLinearityReport same =
            flinearity_defect(MutualCurvatureDef::Calin, Xj, Yj, Zj, fj, c1, c1);
        CHECK(same.defect_norm < 1e-10);
    }
}

TEST_CASE("f-linearity: the paper definition evaluated on fields matches the component formula") {
    // Contract the component mutual curvature with X, Y, Z and compare with
    // the semantic evaluation; an independent route through the machinery.
    SplitMix64 rng(306);
    const int n = 2;
    const auto coords = coords_for(n);
    const MetricField g = random_metric(rng, n);
    const ConnectionField f1 = ConnectionField::lc_plus_distortion(n, random_distortion(rng, n));
    const ConnectionField f2 = ConnectionField::lc_plus_distortion(n, random_distortion(rng, n));
    VectorFieldSpec X, Y, Z;
    X.components = {parse_expr("1 + x1", coords), parse_expr("x0^2", coords)};
    Y.components = {parse_expr("x0", coords), parse_expr("2 - x1", coords)};
    Z.components = {parse_expr("x1", coords), parse_expr("x0 + x1", coords)};
    const Expr one = parse_expr("1", coords);

    const std::vector<double> p = random_point(rng, n);
    const MetricJets mj = g.evaluate(p);
    const ConnectionJets c1 = f1.evaluate(mj, p);
    const ConnectionJets c2 = f2.evaluate(mj, p);
    const VectorFieldJets Xj = eval_vector_field(X, p);
    const VectorFieldJets Yj = eval_vector_field(Y, p);
    const VectorFieldJets Zj = eval_vector_field(Z, p);

    // R(X, Y)Z from components: R^m_kij Z^k X^i Y^j (X and Y sit in the
    // antisymmetric derivative pair)
    const DenseTensor R = mutual_curvature(c1, c2);
    std::vector<double> expected(static_cast<size_t>(n), 0.0);
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    expected[static_cast<size_t>(m)] +=
                        R.at({m, k, i, j}) * Zj.v[static_cast<size_t>(k)] * Xj.v[static_cast<size_t>(i)] *
                        Yj.v[static_cast<size_t>(j)];

    const std::vector<double> semantic =
        mutual_curvature_on_fields(MutualCurvatureDef::Paper, Xj, Yj, Zj, c1, c2);
    for (int m = 0; m < n; ++m)
        CHECK(semantic[static_cast<size_t>(m)] ==
              doctest::Approx(expected[static_cast<size_t>(m)]).epsilon(1e-10).scale(1.0));

    // f = 1 must leave the defect at zero identically
    const Jet2 fj = eval_jet2(one, p);
    const FLinearityReport rep =
        flinearity_defect(MutualCurvatureDef::Paper, Xj, Yj, Zj, fj, c1, c2);
    CHECK(rep.defect_norm < 1e-10);
}

#include <doctest.h>

#include "geoduel/duality.hpp"
#include "geoduel/transport.hpp"
#include "testutil.hpp"

using namespace geoduel;
using namespace geoduel::testutil;
using namespace geoduel::transport;

TEST_CASE("first-order transport: flat space and the single-entry formula") {
    const ConnectionJets flat = ConnectionJets::zeros(2);
    const std::vector<double> v{0.3, -0.7};
    const std::vector<double> dir{1.0, 2.0};
    CHECK(first_order_transport(flat, v, dir) == v);

    ConnectionJets cj = ConnectionJets::zeros(2);
    const double c = 0.4;
    cj.gr(1, 0, 1) = c; // Gamma^1_01
    const std::vector<double> e0{1.0, 0.0};
    const std::vector<double> e1{0.0, 1.0};
    const std::vector<double> out = first_order_transport(cj, e0, e1);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == -c);
}

TEST_CASE("first-order transport on the polar chart matches the closed Christoffels") {
    const auto coords = coords_for(2);
    std::vector<std::vector<Expr>> grid(2, std::vector<Expr>(2));
    grid[0][0] = parse_expr("1", coords);
    grid[0][1] = parse_expr("0", coords);
    grid[1][0] = parse_expr("0", coords);
    grid[1][1] = parse_expr("x0^2", coords);
    const MetricField polar = MetricField::from_grid(std::move(grid));
    const double r = 1.7;
    const ConnectionJets cj = christoffel_lc(polar.evaluate(std::vector<double>{r, 0.3}));

    const double dl = 0.01;
    const std::vector<double> radial{1.0, 0.0};
    const std::vector<double> angular_step{0.0, dl};
    // v'^i = v^i - Gamma^i_{jk} v^j dir^k: the radial vector tilts by
    // -Gamma^1_{01} dl in the angular slot.
    const std::vector<double> moved = first_order_transport(cj, radial, angular_step);
    CHECK(moved[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(moved[1] == doctest::Approx(-dl / r).epsilon(1e-12));

    const std::vector<double> angular{0.0, 1.0};
    const std::vector<double> radial_step{dl, 0.0};
    const std::vector<double> moved2 = first_order_transport(cj, angular, radial_step);
    CHECK(moved2[1] == doctest::Approx(1.0 - dl / r).epsilon(1e-12));
}

TEST_CASE("parallelogram gap: torsion-free single connection closes") {
    SplitMix64 rng(401);
    const MetricField g = random_metric(rng, 3);
    const ConnectionJets lc = christoffel_lc(g.evaluate(random_point(rng, 3)));
    const std::vector<double> u{0.5, -0.2, 0.8};
    const std::vector<double> ut{1.0, 0.4, -0.3};
    const std::vector<double> V = parallelogram_gap(lc, lc, u, ut, 0.05);
    for (double v : V) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("parallelogram gap: a connection with its torsion dual closes exactly") {
    SplitMix64 rng(402);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.next() % 3);
        const ConnectionJets cj = random_connection_jets(rng, n);
        const duality::DualPair pair = duality::torsion_dual(cj);
        const std::vector<double> u = random_point(rng, n, -2.0, 2.0);
        const std::vector<double> ut = random_point(rng, n, -2.0, 2.0);
        const std::vector<double> V =
            parallelogram_gap(pair.primal, pair.dual, u, ut, rng.uniform(0.001, 0.1));
        for (double v : V) CHECK(v == 0.0);
    }
}

TEST_CASE("parallelogram gap: two distinct torsion-free connections break the parallelogram") {
    SplitMix64 rng(403);
    const MetricField g = random_metric(rng, 3);
    const std::vector<double> p = random_point(rng, 3);
    const MetricJets mj = g.evaluate(p);
    const ConnectionJets lc = christoffel_lc(mj);
    const ConnectionField sym =
        ConnectionField::lc_plus_distortion(3, random_symmetric_distortion(rng, 3));
    const ConnectionJets other = sym.evaluate(mj, p);
    const std::vector<double> u{1.0, 0.0, 0.5};
    const std::vector<double> ut{0.0, 1.0, -0.5};
    const std::vector<double> V = parallelogram_gap(lc, other, u, ut, 1.0);
    double worst = 0.0;
    for (double v : V) worst = std::max(worst, std::abs(v));
    CHECK(worst > 1e-3);
}

TEST_CASE("parallelogram gap: bilinearity and the torsion contraction") {
    SplitMix64 rng(404);
    const ConnectionJets cj = random_connection_jets(rng, 3);
    const std::vector<double> u{0.4, -1.2, 0.9};
    const std::vector<double> ut{-0.3, 0.7, 1.1};

    // V(a u, ut) = a V(u, ut) exactly for powers of two
    std::vector<double> u2 = u;
    for (double& x : u2) x *= 2.0;
    const std::vector<double> V = parallelogram_gap(cj, cj, u, ut, 1.0);
    const std::vector<double> V2 = parallelogram_gap(cj, cj, u2, ut, 1.0);
    for (size_t i = 0; i < V.size(); ++i) CHECK(V2[i] == 2.0 * V[i]);

    // single-connection gap contracts the torsion tensor: V^i = T^i_kj ut^j u^k
    const DenseTensor T = geometry::torsion_T(cj);
    for (int i = 0; i < 3; ++i) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                s += T.at({i, k, j}) * ut[static_cast<size_t>(j)] * u[static_cast<size_t>(k)];
        CHECK(V[static_cast<size_t>(i)] == doctest::Approx(s).epsilon(1e-12));
    }
}

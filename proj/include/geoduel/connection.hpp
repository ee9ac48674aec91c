#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geoduel/metric.hpp"
#include "geoduel/tensor.hpp"

namespace geoduel {

// Connection coefficients and their first derivatives at a point.
//
// Index convention, fixed once for the whole workbench: gamma[k][i][j] holds
// Gamma^k_ij and the covariant derivative acts along the LAST lower slot,
//   nabla_i V^k = d_i V^k + Gamma^k_{ji} V^j,
// so transporting the basis vector e_j in the direction e_i reads off
// Gamma^k_{ji}. dgamma[a][k][i][j] = d_a Gamma^k_ij.
struct ConnectionJets {
    int n = 0;
    std::vector<double> gamma;
    std::vector<double> dgamma;

    static ConnectionJets zeros(int n);

    double g(int k, int i, int j) const { return gamma[(static_cast<size_t>(k) * n + i) * n + j]; }
    double& gr(int k, int i, int j) { return gamma[(static_cast<size_t>(k) * n + i) * n + j]; }
    double dg(int a, int k, int i, int j) const {
        return dgamma[((static_cast<size_t>(a) * n + k) * n + i) * n + j];
    }
    double& dgr(int a, int k, int i, int j) {
        return dgamma[((static_cast<size_t>(a) * n + k) * n + i) * n + j];
    }
};

// Levi-Civita coefficients with d(Gamma) assembled analytically from dg and
// ddg (never by numeric differencing; the theorem suites live at 1e-9).
ConnectionJets christoffel_lc(const MetricJets& mj);

// Declarative connection field. Three shapes:
//  - explicit Gamma^k_ij expressions,
//  - Levi-Civita plus a distortion field N^k_ij,
//  - Levi-Civita plus a fully lowered 3-form (n = 3 takes a single
//    generator f with A = f * eps; otherwise independent components with
//    strictly increasing indices are antisymmetrized).
struct ConnectionField {
    enum class Kind { Explicit, LcPlusDistortion, ThreeForm };

    struct ThreeFormComponent {
        int i = 0, j = 1, k = 2;
        Expr expr;
    };

    Kind kind = Kind::LcPlusDistortion;
    int n = 0;
    std::vector<Expr> gamma;      // Explicit: [k][i][j] flattened
    std::vector<Expr> distortion; // LcPlusDistortion: [k][i][j] flattened; may be empty (pure LC)
    std::optional<Expr> generator; // ThreeForm, n = 3
    std::vector<ThreeFormComponent> components; // ThreeForm, general n

    static ConnectionField levi_civita(int n);
    static ConnectionField explicit_gamma(int n, std::vector<Expr> gamma);
    static ConnectionField lc_plus_distortion(int n, std::vector<Expr> distortion);
    static ConnectionField three_form_generator(Expr f);
    static ConnectionField three_form_components(int n, std::vector<ThreeFormComponent> comps);

    // mj must come from the same point (and the scenario metric); Explicit
    // fields ignore it.
    ConnectionJets evaluate(const MetricJets& mj, std::span<const double> point,
                            std::span<const double> params = {}) const;

    // The lowered 3-form value and first derivatives at a point
    // (ThreeForm kind only): A[i][j][k], dA[a][i][j][k].
    void three_form_jets(std::span<const double> point, std::span<const double> params,
                         DenseTensor& A, std::vector<double>& dA) const;
};

// Lowered coefficients Gamma_kij = g_kl Gamma^l_ij together with their first
// derivatives; many dual-connection constructions work in this form.
struct LoweredConnectionJets {
    int n = 0;
    std::vector<double> low;  // [k][i][j]
    std::vector<double> dlow; // [a][k][i][j]

    double v(int k, int i, int j) const { return low[(static_cast<size_t>(k) * n + i) * n + j]; }
    double& vr(int k, int i, int j) { return low[(static_cast<size_t>(k) * n + i) * n + j]; }
    double d(int a, int k, int i, int j) const {
        return dlow[((static_cast<size_t>(a) * n + k) * n + i) * n + j];
    }
    double& dr(int a, int k, int i, int j) {
        return dlow[((static_cast<size_t>(a) * n + k) * n + i) * n + j];
    }
};

LoweredConnectionJets lower_connection(const MetricJets& mj, const ConnectionJets& cj);
ConnectionJets raise_connection(const MetricJets& mj, const LoweredConnectionJets& lo);

} // namespace geoduel

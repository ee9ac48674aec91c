#pragma once

#include <optional>
#include <string>

#include "geoduel/connection.hpp"
#include "geoduel/metric.hpp"
#include "geoduel/quadrature.hpp"
#include "geoduel/tensor.hpp"

namespace geoduel::infogeo {

// Quadrature selection for family expectations. Hermite rules may carry
// center/scale standardization expressions in the parameters (the builtin
// gaussian uses center = mu, scale = sigma); the substitution
// x = center + sqrt(2) scale t is differentiated through, so parameter
// derivatives of quadrature sums stay exact.
struct QuadratureSpec {
    enum class Kind { Hermite, Composite };
    Kind kind = Kind::Hermite;
    int order = 64;   // Hermite nodes
    int panels = 512; // composite panels
    std::optional<Expr> center;
    std::optional<Expr> scale;
};

struct Domain {
    enum class Kind { RealLine, Interval };
    Kind kind = Kind::RealLine;
    double a = 0.0;
    double b = 1.0;
};

// Parametric statistical family on an m-dimensional parameter chart. The
// log-density is an expression in the parameters followed by the sample
// variable (variable slot m), so the parameter manifold is the chart the
// rest of the workbench operates on.
struct ParametricFamily {
    int m = 0;
    std::vector<std::string> param_names;
    Expr log_density;
    Domain domain;
    QuadratureSpec quad;
    std::vector<double> bound_params; // values for expression-level parameters

    static ParametricFamily gaussian(); // the builtin "gaussian" registry entry
};

struct FisherData {
    MatrixNN g;
    DenseTensor C;
};

// Zeroth to third score moments at xi: norm = E[1], score_i = E[d_i l],
// g_ij = E[d_i l d_j l], C_ijk = E[d_i l d_j l d_k l]. Throws
// QuadratureUnderflow when the density mass vanishes numerically and
// NormalizationError when |norm - 1| > 1e-8.
struct FamilyMoments {
    double norm = 0.0;
    std::vector<double> score;
    MatrixNN g;
    DenseTensor C;
};
FamilyMoments family_moments(const ParametricFamily& fam, std::span<const double> xi);

MatrixNN fisher_metric(const ParametricFamily& fam, std::span<const double> xi);
DenseTensor cubic_tensor_family(const ParametricFamily& fam, std::span<const double> xi);

// Analytic Gaussian values: g = diag(1/sigma^2, 2/sigma^2) and the cubic
// components C_112-family = 2/sigma^3, C_222 = 8/sigma^3.
FisherData gaussian_closed_forms(double mu, double sigma);

// Fisher metric with first and second parameter derivatives plus the cubic
// tensor with first derivatives, all obtained by evaluating the quadrature
// sums in nested jet arithmetic (never by differencing).
struct FamilyChartJets {
    MetricJets mj;
    DenseTensor C;          // [k][i][j], fully lowered, totally symmetric
    std::vector<double> dC; // [a][k][i][j]
    double norm = 0.0;
    std::vector<double> score;
};
FamilyChartJets family_chart_jets(const ParametricFamily& fam, std::span<const double> xi);

// The dually coupled alpha structure on the parameter manifold.
struct AlphaStructure {
    MetricJets mj;
    DenseTensor C;
    ConnectionJets lc;    // alpha = 0
    ConnectionJets plus;  // Gamma(alpha)
    ConnectionJets minus; // Gamma(-alpha)
    double dual_coupling_residual = 0.0; // d_i g_jk - G(a)_kji - G(-a)_jki
};
AlphaStructure family_alpha_structure(const ParametricFamily& fam, std::span<const double> xi,
                                      double alpha);

} // namespace geoduel::infogeo

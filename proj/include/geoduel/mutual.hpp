#pragma once

#include "geoduel/expr.hpp"
#include "geoduel/geometry.hpp"

namespace geoduel::mutual {

// Two connections at a point, optionally with a metric.
struct ConnectionPairAt {
    ConnectionJets cj1;
    ConnectionJets cj2;
    const MetricJets* mj = nullptr;
};

// W_ijk = 1/2 (nabla1_i g_jk + nabla2_i g_jk); vanishes exactly when the
// pair is classically dually coupled.
DenseTensor mutual_nonmetricity(const MetricJets& mj, const ConnectionJets& cj1,
                                const ConnectionJets& cj2);

// M^i_jk = Gamma^(1)i_jk - Gamma^(2)i_kj; zero iff cj2 is the torsion dual
// of cj1.
DenseTensor mutual_torsion(const ConnectionJets& cj1, const ConnectionJets& cj2);

// Mutual curvature, stored like the single-connection curvature
// ([m][k][i][j], differentiated slot first, antisymmetric derivative pair
// last):
//   R^m_kij = d_[i G2^m_|k|j] + d_[i G1^m_|k|j]
//           + G2^l_k[j G1^m_|l|i] + G1^l_k[j G2^m_|l|i].
// Symmetric under connection swap bit for bit, reduces to the Riemann
// tensor when the connections coincide.
DenseTensor mutual_curvature(const ConnectionJets& cj1, const ConnectionJets& cj2);

// Same object through the regrouped identity
//   1/2 (R1 + R2)^m_kij + K^l_k[i K^m_|l|j],
// used to cross-check the coordinate formula.
DenseTensor mutual_curvature_regrouped(const ConnectionJets& cj1, const ConnectionJets& cj2);

// Residual of the curvature-dual defining equations: a pair is curvature
// dual precisely when this vanishes. The equations are differential in the
// unknown partner, so only the residual evaluation is offered.
DenseTensor curvature_dual_residual(const ConnectionJets& cj1, const ConnectionJets& cj2);

enum class MutualCurvatureDef { Paper, Puechmorel, Calin };

// Semantic F-linearity probe. Evaluates the chosen mutual-curvature
// definition on (X, Y, fZ) (or (X, fY, Z) for the Calin variant) through
// nested covariant derivatives of the actual vector fields, subtracts
// f * def(X, Y, Z), and compares the remainder with the predicted defect:
//   Puechmorel: (Yf)(nabla1_X - nabla2_X)Z + (Xf)(nabla2_Y - nabla1_Y)Z
//   Calin:      (Xf)(nabla2_Y - nabla1_Y)Z
//   Paper:      zero (the definition is a tensor).
struct FLinearityReport {
    std::vector<double> defect;          // def(..., f...) - f def(...)
    std::vector<double> predicted;       // the published defect expression
    double defect_norm = 0.0;            // max |defect|
    double defect_minus_predicted = 0.0; // max |defect - predicted|
};

FLinearityReport flinearity_defect(MutualCurvatureDef def, const VectorFieldJets& X,
                                   const VectorFieldJets& Y, const VectorFieldJets& Z,
                                   const Jet2& f, const ConnectionJets& cj1,
                                   const ConnectionJets& cj2);

// The chosen definition applied to actual vector fields at a point; the
// semantic counterpart of the component formulas above.
std::vector<double> mutual_curvature_on_fields(MutualCurvatureDef def, const VectorFieldJets& X,
                                               const VectorFieldJets& Y, const VectorFieldJets& Z,
                                               const ConnectionJets& cj1, const ConnectionJets& cj2);

// (nabla1_i nabla2_j - nabla2_j nabla1_i) f + M^l_ji d_l f, evaluated on a
// scalar jet; zero for every smooth f.
double mixed_commutator_residual(const ConnectionJets& cj1, const ConnectionJets& cj2,
                                 const Jet2& f);

} // namespace geoduel::mutual

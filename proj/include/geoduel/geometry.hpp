#pragma once

#include "geoduel/connection.hpp"
#include "geoduel/tensor.hpp"

namespace geoduel::geometry {

// Torsion T^m_ij = Gamma^m_ji - Gamma^m_ij, stored [m][i][j].
DenseTensor torsion_T(const ConnectionJets& cj);

// Redefined torsion coefficients S_ij^k = Gamma^k_[ij] = -T^k_ij / 2,
// stored [i][j][k] with the upper slot last.
DenseTensor torsion_S(const ConnectionJets& cj);

struct Torsion {
    DenseTensor T;
    DenseTensor S;
};
Torsion torsion(const ConnectionJets& cj);

// Q_ijk = nabla_i g_jk = d_i g_jk - Gamma^l_{ji} g_lk - Gamma^l_{ki} g_jl;
// symmetric in (j, k).
DenseTensor nonmetricity(const MetricJets& mj, const ConnectionJets& cj);

// Distortion from torsion and non-metricity,
//   N^m_ij = 1/2 g^{ml}(Q_lij - Q_jli - Q_ijl) - g^{ml}(S_lij + S_lji - S_ijl),
// inverting the post-Riemannian split Gamma = Gamma^(0) + N.
DenseTensor distortion(const MetricJets& mj, const DenseTensor& Q, const DenseTensor& S);

// Non-metricity together with its first coordinate derivatives
// dQ[a][i][j][k] = d_a Q_ijk; feeds the alpha-connection assembly where the
// cubic tensor doubles as a field.
struct NonmetricityJets {
    DenseTensor Q;
    std::vector<double> dQ;
};
NonmetricityJets nonmetricity_jets(const MetricJets& mj, const ConnectionJets& cj);

// R^m_ijk = d_j Gamma^m_ik - d_k Gamma^m_ij
//         + Gamma^m_lj Gamma^l_ik - Gamma^m_lk Gamma^l_ij, stored
// [m][i][j][k]; antisymmetric in the last two slots.
DenseTensor curvature(const ConnectionJets& cj);

// Ric = R^m_imj g^{ij}.
double ricci_scalar(const DenseTensor& R, const MetricJets& mj);

// Fully lowered curvature R_ijkl = g_im R^m_jkl.
DenseTensor lower_curvature(const MetricJets& mj, const DenseTensor& R);

// Distortion value and first derivatives read off two connection jets:
// N = Gamma - Gamma0, dN[a][m][i][j] likewise.
struct DistortionJets {
    DenseTensor N; // [m][i][j], upper/lower/lower
    std::vector<double> dN;
};
DistortionJets distortion_jets(const ConnectionJets& cj, const ConnectionJets& cj0);

// Curvature through the post-Riemannian expansion
//   R^m_jkl = R0^m_jkl + 2 nabla0_[k N^m_|j|l] + 2 N^m_n[k N^n_|j|l],
// with nabla0 acting on all three slots of N.
DenseTensor post_riemannian_curvature(const ConnectionJets& cj0, const DenseTensor& N,
                                      std::span<const double> dN);

// K^l_ij = Gamma^(1)l_ij - Gamma^(2)l_ij.
DenseTensor difference_tensor(const ConnectionJets& cj1, const ConnectionJets& cj2);

// Gamma = t Gamma^(1) + (1 - t) Gamma^(2) with dgamma combined likewise.
ConnectionJets convex_combination(const ConnectionJets& cj1, const ConnectionJets& cj2, double t);

// Residuals of the convex-combination curvature identities:
//   R(nabla) - t R(1) - (1-t) R(2) + 2 t (1-t) K^m_l[j K^l_|i|k]  and the
// twice-contracted Ricci-scalar version with the quadratic K invariants.
struct CombinationResiduals {
    double riemann = 0.0;
    double ricci = 0.0;
    double max() const { return riemann > ricci ? riemann : ricci; }
};
CombinationResiduals combination_curvature_residual(const MetricJets& mj, const ConnectionJets& cj1,
                                                    const ConnectionJets& cj2, double t);

// Covariant derivative of a fully lowered rank-3 tensor along slot a (the
// connection's direction slot): dT[a][i][j][k] must hold d_a T_ijk.
double cov3_lower(const ConnectionJets& cj, const DenseTensor& T, std::span<const double> dT,
                  int a, int i, int j, int k);

} // namespace geoduel::geometry

#pragma once

#include <array>
#include <optional>
#include <string>

#include "geoduel/geometry.hpp"

namespace geoduel::duality {

enum class DualKind { Nonmetric, Torsion, Generalized, CurvatureCandidate };

struct DualPair {
    ConnectionJets primal;
    ConnectionJets dual;
    DualKind kind = DualKind::Nonmetric;
    double defining_residual = 0.0; // kind-specific residual at construction
    double t = 0.5;                 // Generalized only
    bool first_pair_symmetry_warning = false;
};

// Totally symmetric cubic (skewness) tensor C_ijk = nabla_i g_jk of a
// torsion-free dually coupled pair.
struct CubicTensor {
    DenseTensor C;
};

// Totally antisymmetric rank-3 distortion of a metric torsion-dual pair.
struct ThreeForm {
    DenseTensor A;
};

// Classical dual through d_i g_jk = Gamma_kji + Gamma*_jki. The relation
// resolves the dual completely once read slotwise; when the primal lacks
// the first-pair symmetry Gamma_(jk)i the construction still goes through
// but the warning flag is set (the symmetric-in-jk reading alone would
// leave the antisymmetric part free).
DualPair nonmetric_dual(const MetricJets& mj, const ConnectionJets& cj);

// C = nabla g of the primal; checks both members are torsion-free
// (NotTorsionFree reports max |S|), verifies nabla* g = -C and total
// symmetry (AsymmetricC beyond 1e-10).
CubicTensor cubic_tensor(const MetricJets& mj, const DualPair& pair);

// Gamma(alpha)_kij = Gamma0_kij - alpha/2 C_kij, raised against g; dC holds
// d_a C_kij from field evaluation.
ConnectionJets alpha_connection(const MetricJets& mj, const ConnectionJets& cj0,
                                const DenseTensor& C, std::span<const double> dC, double alpha);

// One-parameter generalization d_i g_jk = 2t Gamma_(kj)i + 2(1-t) Gamma*_(kj)i.
// The antisymmetric first-pair part is carried over from the primal, which
// reduces to the classical dual at t = 1/2. Involution holds only there.
DualPair generalized_dual(const MetricJets& mj, const ConnectionJets& cj, double t);

// Torsion dual: Gamma*^k_ij = Gamma^k_ji, the unique partner with vanishing
// mutual torsion. Needs no metric; an involution bit for bit.
DualPair torsion_dual(const ConnectionJets& cj);

struct TorsionDualReport {
    double t_plus_tstar = 0.0;       // exact zero
    double s_plus_sstar = 0.0;       // exact zero, slotwise
    double distortion_swap = 0.0;    // N*_ikj - N_ijk, exact zero
    bool mean_applicable = false;    // both members metric?
    double mean_minus_lc = 0.0;      // valid when mean_applicable
    double q_primal = 0.0;
    double q_dual = 0.0;
    double mutual_torsion = 0.0;     // exact zero by construction
};
TorsionDualReport torsion_dual_properties(const MetricJets& mj, const DualPair& pair);

struct ThreeFormResult {
    ThreeForm form;
    double antisymmetry_residual = 0.0; // total antisymmetry of A
    double primal_residual = 0.0;       // Gamma   vs Gamma0 + A
    double dual_residual = 0.0;         // Gamma*  vs Gamma0 - A
};

// Metric connection with last-pair antisymmetric distortion decomposes as
// Gamma = Gamma0 + A with A a 3-form; the torsion dual is Gamma0 - A.
// Throws NotMetric / NotLastPairAntisymmetric / DimensionTooSmall.
ThreeFormResult theorem1_decompose(const MetricJets& mj, const ConnectionJets& cj,
                                   double tolerance = 1e-10);

// Sign sweep for the curvature relation of a sign-flipped distortion pair
// Gamma = Gamma0 + N, Gamma* = Gamma0 - N where N_ijk = (-1)^p N_jik:
//   R_ijkl + s1 R*_jikl = s2 * 2(1 - (-1)^p) nabla0_[k N_|ij|l].
// All four (s1, s2) variants are evaluated; hard-coding the sign is
// deliberately avoided and the locked variant travels with the report.
struct LemmaReport {
    int p = 0;
    // residual[a][b]: a = 0 -> s1 = +1, a = 1 -> s1 = -1; same for s2.
    std::array<std::array<double, 2>, 2> residual{};
    double rhs_magnitude = 0.0; // max |derivative term|, 0 iff s2 is undetermined

    double res(int s1, int s2) const {
        return residual[s1 > 0 ? 0 : 1][s2 > 0 ? 0 : 1];
    }
    // Variants passing at `tol`; for p = 0 the derivative term vanishes and
    // both s2 signs tie.
    std::vector<std::pair<int, int>> passing(double tol) const {
        std::vector<std::pair<int, int>> out;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                if (residual[a][b] < tol) out.push_back({a == 0 ? 1 : -1, b == 0 ? 1 : -1});
        return out;
    }
};

// N_low is the fully lowered distortion with derivatives dN[a][i][j][k].
// Checks the symmetry class (WrongSymmetryClass) before sweeping.
LemmaReport lemma_curvature_relation(const MetricJets& mj, const ConnectionJets& cj0,
                                     const DenseTensor& N_low, std::span<const double> dN_low,
                                     int p, double class_tolerance = 1e-10);

// |Ric(nabla) - Ric(nabla*)| for a metric torsion-dual pair (NotMetric
// otherwise).
double theorem3_ricci_equality(const MetricJets& mj, const DualPair& pair,
                               double metric_tolerance = 1e-9);

// Constraint for a partner that is dual in the non-metric and the torsion
// sense at once: N_i(jk) + N_k(ij) = 0, solved by N_i(jk) = 0.
struct BothSensesReport {
    double n_sym_last = 0.0;      // max |N_i(jk)|
    double nstar_sym_last = 0.0;  // max |N*_i(jk)| for the torsion dual
    double combined = 0.0;        // max |N_i(jk) + N_k(ij)|
};
BothSensesReport both_senses_constraint(const MetricJets& mj, const ConnectionJets& cj);

// Fully lowered distortion of cj relative to the metric's Levi-Civita
// connection, with derivatives: shared helper for the theorem suites.
struct LoweredDistortion {
    DenseTensor N;              // [i][j][k] all lower
    std::vector<double> dN;     // [a][i][j][k]
};
LoweredDistortion lowered_distortion(const MetricJets& mj, const ConnectionJets& cj);

} // namespace geoduel::duality

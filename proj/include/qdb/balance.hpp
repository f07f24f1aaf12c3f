// balance.hpp — KMS-symmetry, SQDB and SQDB-theta decision procedures

#pragma once

#include "qdb/gksl.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qdb {

// Covariance matrices of a special Kraus family:
//   b_kj = tr(rho^1/2 L_k* rho^1/2 L_j*)
//   c_kj = tr(rho L_k* L_j)
//   r_jk = tr(rho^1/2 L_j* rho^1/2 theta L_k* theta)   (with a time reversal)
struct CovTriple {
    CMat b;
    CMat c;
    std::optional<CMat> r;
    double b_symmetry_defect = 0.0;   // ||B - B^T||
    double c_hermiticity_defect = 0.0;
    double c_min_eigenvalue = 0.0;
    double r_self_adjoint_defect = 0.0;
};

CovTriple cov_matrices(const GkslGenerator& gen, const DensityMatrix& rho,
                       const TimeReversal* theta = nullptr, const Tolerances& tol = {});

// Verdict plus numeric witnesses. Every named residual is compared against
// eq_tol; the verdict is true iff all of them pass. The invariance residual
// of rho is attached for information: the structural conditions imply
// invariance, so a passing verdict cannot hide a non-invariant state.
struct CheckReport {
    bool verdict = false;
    std::optional<CMat> matching_unitary;
    std::optional<double> c_scalar;
    std::optional<CMat> k_witness;
    std::optional<CVec> u_theta_spectrum;
    std::map<std::string, double> residuals;
};

// Structural criteria evaluated on a special representation:
//  kms:        G rho^1/2 = rho^1/2 G* + ic rho^1/2 (c real) and
//              rho^1/2 L_k* = sum u_kl L_l rho^1/2, u unitary T-symmetric.
//  sqdb:       span{rho^1/2 L*} = span{L rho^1/2} and C^-1 B unitary
//              T-symmetric with CB = BC^T; on success extracts the witness
//              K = (G - G' - ic)/(2i) from the dual.
//  sqdb-theta: rho^1/2 theta G* theta = G rho^1/2, span{rho^1/2 theta L* theta}
//              = span{L rho^1/2}, and C^-1 R unitary self-adjoint with CR = RC.
CheckReport check_kms_symmetric(const GkslGenerator& gen, const DensityMatrix& rho,
                                const Tolerances& tol = {});
CheckReport check_sqdb(const GkslGenerator& gen, const DensityMatrix& rho,
                       const Tolerances& tol = {});
CheckReport check_sqdb_theta(const GkslGenerator& gen, const DensityMatrix& rho,
                             const TimeReversal& theta, const Tolerances& tol = {});

// theta rho theta = rho within eq_tol.
bool theta_rho_compatibility(const DensityMatrix& rho, const TimeReversal& theta,
                             const Tolerances& tol = {});

// Max defect over matrix-unit pairs of
//   tr(rho^1/2 x rho^1/2 y) = tr(rho^1/2 theta y* theta rho^1/2 theta x* theta),
// the pairing identity equivalent to [theta, rho] = 0.
double kms_pair_identity_defect(const DensityMatrix& rho, const TimeReversal& theta);

enum class BalanceCondition { Kms, SqdbTheta };

// Semigroup-level ground truth: evaluates the defining trace identity with
// the exponentiated semigroup over all matrix-unit pairs and every t in the
// grid; returns the max absolute defect.
double semigroup_oracle(const GkslGenerator& gen, const DensityMatrix& rho,
                        const TimeReversal* theta, BalanceCondition condition,
                        const std::vector<double>& t_grid = {0.1, 0.5, 1.0},
                        const Tolerances& tol = {});

// Index pair with coupled covariances but unequal variances; such pairs are
// forbidden under SQDB (B) resp. SQDB-theta (R).
struct VarianceViolation {
    Eigen::Index k = 0;
    Eigen::Index l = 0;
    double coupling = 0.0;
    double variance_gap = 0.0;
};

// Rotates to a representation with HS-orthogonal {L rho^1/2} first.
std::vector<VarianceViolation> equal_variance_property(const GkslGenerator& gen,
                                                       const DensityMatrix& rho,
                                                       const TimeReversal* theta = nullptr,
                                                       const Tolerances& tol = {});

} // namespace qdb

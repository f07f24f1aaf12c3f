// qubit.hpp — generator factories for the complete qubit classification

#pragma once

#include "qdb/gksl.hpp"

#include <string>
#include <vector>

namespace qdb {

CMat sigma0();
CMat sigma1();
CMat sigma2();
CMat sigma3();
CMat sigma_plus();  // (s1 + i s2)/2
CMat sigma_minus(); // (s1 - i s2)/2

// Eigenvectors of X -> rho^1/2 X^T rho^-1/2 for rho = diag(nu, 1-nu):
// sigma0, sigma1_nu, sigma3 have eigenvalue +1, sigma2_nu has -1.
CMat sigma1_nu(double nu);
CMat sigma2_nu(double nu);

enum class QubitCase { O, A, B, C, D, E };

// Parameters of the standard form
//   L_k = (1-2nu) r_k s0 + r_k s3 + zeta_k s1nu  (k = 1, 2)
//   L_3 = e^{i phase3} r3 s2nu
//   H   = v1 s1 + v2 s2 + v3 s3,
// with (v1, v2) derived from the parameters; v3 free. At nu = 1/2 the v1
// equation degenerates: v1 becomes free (v1_free) and the parameters must
// satisfy sum_k r_k Im zeta_k = 0.
struct QubitParams {
    double nu = 0.5;
    double r1 = 0.0;
    double r2 = 0.0;
    Complex zeta1{};
    Complex zeta2{};
    double r3 = 0.0;
    double phase3 = 0.0; // gauge phase on L_3
    double v3 = 0.0;
    double v1_free = 0.0; // used only when |nu - 1/2| <= eq_tol
    QubitCase case_tag = QubitCase::O;
    // Accept degenerate parameter sets (boundaries of the case inequalities);
    // zero operators are dropped and a note recorded. Used by the QDB-theta
    // embedding.
    bool relax_constraints = false;
};

struct QubitModel {
    GkslGenerator gen;
    DensityMatrix rho;
    TimeReversal theta;
    double v1 = 0.0;
    double v2 = 0.0;
    std::vector<std::string> notes;
};

QubitModel build_standard_form(const QubitParams& params, const Tolerances& tol = {});

// Detailed-balance form with Kraus set {eta L, lambda sigma+, mu sigma-},
// L = (1-2nu) s0 + s3, H = h0 s0 + h3 s3, under lambda^2 (1-nu) = nu mu^2.
QubitModel build_qdb_theta_form(double nu, double lambda, double mu, double eta,
                                double h0, double h3, const Tolerances& tol = {});

// Standard-form parameters reproducing the detailed-balance form above
// (degenerate slots flagged, not rejected).
QubitParams map_qdb_to_sqdb_params(double nu, double lambda, double mu, double eta,
                                   const Tolerances& tol = {});

} // namespace qdb

// duality.hpp — KMS-dual and theta-dual construction and verification

#pragma once

#include "qdb/gksl.hpp"

namespace qdb {

// Primal generator together with its KMS-dual in the c = 0 representative:
// L'_k = rho^1/2 L_k* rho^-1/2, G' = rho^1/2 G* rho^-1/2, H' = (G'* - G')/(2i).
struct DualPair {
    GkslGenerator primal;
    GkslGenerator dual;
    double c_shift = 0.0; // realized scalar in G' rho^1/2 = rho^1/2 G* + ic rho^1/2
};

// Requires a special representation and an invariant faithful state.
DualPair dual_generator(const GkslGenerator& gen, const DensityMatrix& rho,
                        const Tolerances& tol = {});

// max over matrix units x of ||rho^1/2 L'(x) rho^1/2 - L_*(rho^1/2 x rho^1/2)||_F
double verify_dual_relation(const DualPair& pair, const DensityMatrix& rho);

// H -> -theta H theta, L_k -> theta L_k theta.
GkslGenerator theta_dual(const GkslGenerator& gen, const TimeReversal& theta);

// Rebuilds G* column-by-column from the spectral data of rho,
//   G* u = sum_k rho_k L(|u><e_k|) e_k - tr(rho G) u,
// and returns the Frobenius distance to the generator's G*.
double verify_g_reconstruction(const GkslGenerator& gen, const DensityMatrix& rho,
                               const Tolerances& tol = {});

} // namespace qdb

// invariant.hpp — invariant-state search and verification

#pragma once

#include "qdb/gksl.hpp"

namespace qdb {

// ||G rho + rho G* + sum L rho L*||_F; rho counts as invariant at <= eq_tol.
double verify_invariance(const GkslGenerator& gen, const CMat& rho);

inline double verify_invariance(const GkslGenerator& gen, const DensityMatrix& rho) {
    return verify_invariance(gen, rho.rho());
}

// Faithful invariant state from the kernel of the Schrödinger superoperator.
// Degenerate kernels: start from the minimal-norm trace-one kernel element
// (this resolves the fully degenerate case to 1/n) and maximize the minimum
// eigenvalue by eigenvector ascent with step halving.
DensityMatrix find_invariant_state(const GkslGenerator& gen, const Tolerances& tol = {});

} // namespace qdb

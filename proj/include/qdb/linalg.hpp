// linalg.hpp — Hermitian eigensolves, matrix functions, vec/kron, subspace helpers

#pragma once

#include "qdb/types.hpp"

namespace qdb {

inline double fro_norm(const CMat& a) { return a.norm(); }

inline double residual(const CMat& a, const CMat& b) { return (a - b).norm(); }

// ||a - b||_F <= tol * (1 + max(||a||_F, ||b||_F))
inline bool approx_equal(const CMat& a, const CMat& b, double tol) {
    return residual(a, b) <= tol * (1.0 + std::max(a.norm(), b.norm()));
}

inline bool is_hermitian(const CMat& a, double tol) {
    return a.rows() == a.cols() &&
           residual(a, a.adjoint()) <= tol * (1.0 + a.norm());
}

// Spectral decomposition a = V diag(lambda) V*, eigenvalues sorted descending.
struct HermitianEig {
    RVec eigenvalues;
    CMat eigenvectors; // columns
};
HermitianEig hermitian_eig(const CMat& a, const Tolerances& tol = {});

enum class MatFunc { Sqrt, InvSqrt, Exp };

// f applied through the spectral decomposition of a Hermitian (psd for
// Sqrt/InvSqrt) matrix.
CMat matrix_function(const CMat& a, MatFunc f, const Tolerances& tol = {});

// Column-stacking: vec(x)[i + n*j] = x(i, j).
CVec vec(const CMat& x);
CMat unvec(const CVec& v);

CMat kron(const CMat& a, const CMat& b);

// Dense matrix exponential (Padé scaling-and-squaring), any square complex a.
CMat matrix_exp(const CMat& a);

// Orthonormal basis of the column span; directions with singular value
// <= rank_tol are dropped.
CMat orthonormal_basis(const CMat& columns, double rank_tol);

// ||P1 - P2||_F for the orthogonal projectors onto the two column spans.
double projector_gap(const CMat& fam1, const CMat& fam2, double rank_tol);

// Solve a x = b for Hermitian positive definite a.
CMat solve_hpd(const CMat& a, const CMat& b);

} // namespace qdb

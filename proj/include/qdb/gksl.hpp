// gksl.hpp — GKSL generators, faithful states, time reversal, superoperators

#pragma once

#include "qdb/types.hpp"

#include <vector>

namespace qdb {

// Faithful density matrix with cached square root, inverse square root and
// spectral data.
class DensityMatrix {
public:
    explicit DensityMatrix(const CMat& rho, const Tolerances& tol = {});

    Eigen::Index dim() const { return rho_.rows(); }
    const CMat& rho() const { return rho_; }
    const CMat& sqrt_rho() const { return sqrt_; }
    const CMat& inv_sqrt_rho() const { return inv_sqrt_; }
    const RVec& eigenvalues() const { return values_; } // descending
    const CMat& eigenvectors() const { return vectors_; }
    double min_eigenvalue() const { return values_(values_.size() - 1); }

private:
    CMat rho_, sqrt_, inv_sqrt_, vectors_;
    RVec values_;
};

// Generator in GKSL form: L(x) = i[H,x] - 1/2 sum(L*Lx - 2L*xL + xL*L).
// G = -1/2 sum L*L - iH is always derived from (H, kraus), never stored
// independently.
class GkslGenerator {
public:
    GkslGenerator(const CMat& h, std::vector<CMat> kraus, const Tolerances& tol = {});

    // Accepts G instead of H; H = (G* - G)/(2i). The Hermitian part of the
    // supplied G must match -1/2 sum L*L.
    static GkslGenerator from_g(const CMat& g, std::vector<CMat> kraus,
                                const Tolerances& tol = {});

    Eigen::Index dim() const { return h_.rows(); }
    const CMat& hamiltonian() const { return h_; }
    const std::vector<CMat>& kraus() const { return kraus_; }
    std::size_t kraus_count() const { return kraus_.size(); }
    const CMat& g() const { return g_; }

private:
    CMat h_;
    std::vector<CMat> kraus_;
    CMat g_;
};

// Antiunitary involution theta = (symmetric unitary) followed by entrywise
// conjugation: theta v = u conj(v), theta x theta = u conj(x) u*.
class TimeReversal {
public:
    explicit TimeReversal(const CMat& u, const Tolerances& tol = {});
    static TimeReversal conjugation(Eigen::Index n);

    Eigen::Index dim() const { return u_.rows(); }
    const CMat& u() const { return u_; }
    CVec apply(const CVec& v) const { return u_ * v.conjugate(); }
    CMat conjugate_op(const CMat& x) const { return u_ * x.conjugate() * u_.adjoint(); }

private:
    CMat u_;
};

enum class Picture { Heisenberg, Schrodinger };

// n^2 x n^2 matrix acting on column-stacked vec(x); records the picture
// (heisenberg: generator, schrodinger: predual).
struct Superoperator {
    CMat mat;
    Picture picture = Picture::Heisenberg;
};

// L(x) = i[H,x] - 1/2 sum(L*Lx - 2L*xL + xL*L)
CMat apply_generator(const GkslGenerator& gen, const CMat& x);

// L_*(sigma) = G sigma + sigma G* + sum L sigma L*
CMat apply_predual(const GkslGenerator& gen, const CMat& sigma);

Superoperator to_superoperator(const GkslGenerator& gen, Picture picture);

// unvec(exp(t mat) vec(x)) in the requested picture; t >= 0.
CMat evolve(const GkslGenerator& gen, const CMat& x, double t, Picture picture);

// Gram matrix of the KMS inner product <x,y> = tr(rho^1/2 x* rho^1/2 y) on
// the matrix-unit basis, ordered consistently with vec.
CMat kms_gram(const DensityMatrix& rho);

} // namespace qdb

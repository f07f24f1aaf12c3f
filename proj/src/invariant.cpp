#include "qdb/invariant.hpp"

#include "qdb/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <vector>

namespace qdb {

double verify_invariance(const GkslGenerator& gen, const CMat& rho) {
    if (rho.rows() != gen.dim() || rho.cols() != gen.dim()) {
        throw ShapeMismatch("verify_invariance: rho shape mismatch");
    }
    return apply_predual(gen, rho).norm();
}

namespace {

// Hermitian matrices as real vectors: an isometry for the HS inner product.
Eigen::VectorXd real_embedding(const CMat& x) {
    const Eigen::Index n = x.rows();
    Eigen::VectorXd v(n * n);
    Eigen::Index pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        v(pos++) = x(i, i).real();
    }
    const double s = std::sqrt(2.0);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            v(pos++) = s * x(i, j).real();
            v(pos++) = s * x(i, j).imag();
        }
    }
    return v;
}

CMat real_unembedding(const Eigen::VectorXd& v, Eigen::Index n) {
    CMat x(n, n);
    Eigen::Index pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        x(i, i) = v(pos++);
    }
    const double s = 1.0 / std::sqrt(2.0);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            const double re = v(pos++) * s;
            const double im = v(pos++) * s;
            x(i, j) = Complex(re, im);
            x(j, i) = Complex(re, -im);
        }
    }
    return x;
}

// Orthonormal Hermitian basis of the real span of a *-closed family.
std::vector<CMat> hermitian_kernel_basis(const std::vector<CMat>& raw, double rank_tol) {
    if (raw.empty()) {
        return {};
    }
    const Eigen::Index n = raw.front().rows();
    Eigen::MatrixXd cols(n * n, 2 * static_cast<Eigen::Index>(raw.size()));
    Eigen::Index c = 0;
    for (const CMat& a : raw) {
        cols.col(c++) = real_embedding(0.5 * (a + a.adjoint()));
        cols.col(c++) = real_embedding((a - a.adjoint()) / (2.0 * kImag));
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cols, Eigen::ComputeThinU);
    std::vector<CMat> basis;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) > rank_tol * std::max(1.0, svd.singularValues()(0))) {
            basis.push_back(real_unembedding(svd.matrixU().col(i), n));
        }
    }
    return basis;
}

double min_eigenvalue(const CMat& x, CVec* vec_out = nullptr) {
    Eigen::SelfAdjointEigenSolver<CMat> es(x);
    if (es.info() != Eigen::Success) {
        throw NumericalFailure("find_invariant_state: eigensolver did not converge");
    }
    if (vec_out) {
        *vec_out = es.eigenvectors().col(0);
    }
    return es.eigenvalues()(0);
}

} // namespace

DensityMatrix find_invariant_state(const GkslGenerator& gen, const Tolerances& tol) {
    tol.validate();
    const Eigen::Index n = gen.dim();
    const CMat mat = to_superoperator(gen, Picture::Schrodinger).mat;

    Eigen::BDCSVD<CMat> svd(mat, Eigen::ComputeFullV);
    std::vector<CMat> kernel;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) <= tol.rank_tol) {
            kernel.push_back(unvec(svd.matrixV().col(i)));
        }
    }
    if (kernel.empty()) {
        throw NoInvariantState("find_invariant_state: Schrödinger superoperator has trivial kernel");
    }

    const std::vector<CMat> basis = hermitian_kernel_basis(kernel, tol.rank_tol);

    // Minimal-norm trace-one element: project the identity onto the Hermitian
    // kernel and rescale. Empty trace content means no trace-one candidate.
    std::vector<double> traces;
    double trace_sq = 0.0;
    for (const CMat& b : basis) {
        const double t = b.trace().real();
        traces.push_back(t);
        trace_sq += t * t;
    }
    if (trace_sq <= tol.rank_tol) {
        throw NoInvariantState("find_invariant_state: kernel has no trace-one Hermitian element");
    }
    CMat x = CMat::Zero(n, n);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        x += (traces[i] / trace_sq) * basis[i];
    }

    // Traceless ascent directions within the kernel.
    std::vector<CMat> dirs_raw;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const CMat d = basis[i] - traces[i] * x;
        if (d.norm() > tol.rank_tol) {
            dirs_raw.push_back(d);
        }
    }
    const std::vector<CMat> dirs = hermitian_kernel_basis(dirs_raw, 1e-8);

    // Accept the first combination whose minimum eigenvalue clears faithful_tol.
    double lam = min_eigenvalue(x);
    if (!dirs.empty()) {
        double step = 0.5;
        for (int iter = 0; iter < 50 && lam <= tol.faithful_tol; ++iter) {
            CVec v;
            min_eigenvalue(x, &v);
            CMat grad = CMat::Zero(n, n);
            for (const CMat& d : dirs) {
                grad += (v.adjoint() * d * v)(0, 0).real() * d;
            }
            const double gnorm = grad.norm();
            if (gnorm <= tol.rank_tol) {
                break;
            }
            bool improved = false;
            for (int halving = 0; halving < 30; ++halving) {
                const CMat cand = x + (step / gnorm) * grad;
                const double cand_lam = min_eigenvalue(cand);
                if (cand_lam > lam + 1e-14) {
                    x = cand;
                    lam = cand_lam;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) {
                break;
            }
        }
    }

    x = 0.5 * (x + x.adjoint());
    x /= x.trace().real();
    lam = min_eigenvalue(x);

    if (lam <= tol.faithful_tol) {
        if (lam < -1e-8) {
            throw NoInvariantState("find_invariant_state: kernel has no psd trace-one element");
        }
        throw NotFaithful("find_invariant_state: invariant state is not faithful", x);
    }

    const double resid = verify_invariance(gen, x);
    if (resid > tol.eq_tol) {
        throw NumericalFailure("find_invariant_state: candidate fails the invariance residual");
    }
    return DensityMatrix(x, tol);
}

} // namespace qdb

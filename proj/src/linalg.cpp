#include "qdb/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace qdb {

HermitianEig hermitian_eig(const CMat& a, const Tolerances& tol) {
    if (a.rows() != a.cols()) {
        throw ShapeMismatch("hermitian_eig: matrix must be square");
    }
    if (!is_hermitian(a, tol.eq_tol)) {
        throw NotHermitian("hermitian_eig: input is not Hermitian within eq_tol");
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(a);
    if (es.info() != Eigen::Success) {
        throw NumericalFailure("hermitian_eig: eigensolver did not converge");
    }
    // Eigen sorts ascending; flip to descending.
    HermitianEig out;
    out.eigenvalues = es.eigenvalues().reverse();
    out.eigenvectors = es.eigenvectors().rowwise().reverse();
    return out;
}

CMat matrix_function(const CMat& a, MatFunc f, const Tolerances& tol) {
    const HermitianEig eig = hermitian_eig(a, tol);
    const Eigen::Index n = a.rows();
    RVec d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lam = eig.eigenvalues(i);
        switch (f) {
        case MatFunc::Sqrt:
            if (lam < -tol.rank_tol) {
                throw NotPositive("matrix_function: sqrt of a matrix with a negative eigenvalue");
            }
            d(i) = std::sqrt(std::max(lam, 0.0));
            break;
        case MatFunc::InvSqrt:
            if (lam < -tol.rank_tol) {
                throw NotPositive("matrix_function: inv_sqrt of a matrix with a negative eigenvalue");
            }
            if (lam <= tol.faithful_tol) {
                throw Singular("matrix_function: inv_sqrt eigenvalue at or below faithful_tol");
            }
            d(i) = 1.0 / std::sqrt(lam);
            break;
        case MatFunc::Exp:
            d(i) = std::exp(lam);
            break;
        }
    }
    return eig.eigenvectors * d.asDiagonal() * eig.eigenvectors.adjoint();
}

CVec vec(const CMat& x) {
    if (x.rows() != x.cols()) {
        throw ShapeMismatch("vec: matrix must be square");
    }
    return Eigen::Map<const CVec>(x.data(), x.size());
}

CMat unvec(const CVec& v) {
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (n * n != v.size()) {
        throw ShapeMismatch("unvec: length is not a perfect square");
    }
    return Eigen::Map<const CMat>(v.data(), n, n);
}

CMat kron(const CMat& a, const CMat& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

CMat matrix_exp(const CMat& a) {
    if (a.rows() != a.cols()) {
        throw ShapeMismatch("matrix_exp: matrix must be square");
    }
    return a.exp();
}

CMat orthonormal_basis(const CMat& columns, double rank_tol) {
    if (columns.cols() == 0) {
        return CMat(columns.rows(), 0);
    }
    Eigen::JacobiSVD<CMat> svd(columns, Eigen::ComputeThinU);
    Eigen::Index rank = 0;
    while (rank < svd.singularValues().size() && svd.singularValues()(rank) > rank_tol) {
        ++rank;
    }
    return svd.matrixU().leftCols(rank);
}

double projector_gap(const CMat& fam1, const CMat& fam2, double rank_tol) {
    if (fam1.rows() != fam2.rows()) {
        throw ShapeMismatch("projector_gap: ambient dimensions differ");
    }
    const CMat q1 = orthonormal_basis(fam1, rank_tol);
    const CMat q2 = orthonormal_basis(fam2, rank_tol);
    const CMat p1 = q1 * q1.adjoint();
    const CMat p2 = q2 * q2.adjoint();
    return (p1 - p2).norm();
}

CMat solve_hpd(const CMat& a, const CMat& b) {
    if (a.rows() != a.cols() || a.rows() != b.rows()) {
        throw ShapeMismatch("solve_hpd: incompatible shapes");
    }
    if (a.rows() == 0) {
        return CMat(0, b.cols());
    }
    Eigen::LLT<CMat> llt(a);
    if (llt.info() != Eigen::Success) {
        throw NumericalFailure("solve_hpd: matrix is not positive definite");
    }
    return llt.solve(b);
}

} // namespace qdb

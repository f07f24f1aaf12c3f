#include "qdb/gksl.hpp"

#include "qdb/linalg.hpp"

#include <cmath>

namespace qdb {

DensityMatrix::DensityMatrix(const CMat& rho, const Tolerances& tol) {
    tol.validate();
    if (rho.rows() != rho.cols() || rho.rows() < 1) {
        throw ShapeMismatch("DensityMatrix: rho must be square, n >= 1");
    }
    if (!is_hermitian(rho, tol.eq_tol)) {
        throw NotHermitian("DensityMatrix: rho is not Hermitian within eq_tol");
    }
    if (std::abs(rho.trace().real() - 1.0) > tol.eq_tol * (1.0 + rho.norm()) ||
        std::abs(rho.trace().imag()) > tol.eq_tol) {
        throw ConstraintViolated("DensityMatrix: trace(rho) must equal 1");
    }
    const HermitianEig eig = hermitian_eig(rho, tol);
    if (eig.eigenvalues(eig.eigenvalues.size() - 1) <= tol.faithful_tol) {
        throw NotFaithful("DensityMatrix: minimum eigenvalue at or below faithful_tol", rho);
    }
    rho_ = rho;
    values_ = eig.eigenvalues;
    vectors_ = eig.eigenvectors;
    sqrt_ = vectors_ * values_.cwiseSqrt().asDiagonal() * vectors_.adjoint();
    inv_sqrt_ = vectors_ * values_.cwiseSqrt().cwiseInverse().asDiagonal() * vectors_.adjoint();
}

namespace {

CMat derive_g(const CMat& h, const std::vector<CMat>& kraus) {
    CMat acc = CMat::Zero(h.rows(), h.cols());
    for (const CMat& l : kraus) {
        acc.noalias() += l.adjoint() * l;
    }
    return -0.5 * acc - kImag * h;
}

void check_kraus_shapes(Eigen::Index n, const std::vector<CMat>& kraus) {
    if (kraus.size() > static_cast<std::size_t>(n * n)) {
        throw ConstraintViolated("GkslGenerator: at most n^2 Kraus operators");
    }
    for (const CMat& l : kraus) {
        if (l.rows() != n || l.cols() != n) {
            throw ShapeMismatch("GkslGenerator: Kraus operator shape mismatch");
        }
    }
}

} // namespace

GkslGenerator::GkslGenerator(const CMat& h, std::vector<CMat> kraus, const Tolerances& tol) {
    tol.validate();
    if (h.rows() != h.cols() || h.rows() < 1) {
        throw ShapeMismatch("GkslGenerator: H must be square, n >= 1");
    }
    if (!is_hermitian(h, tol.eq_tol)) {
        throw NotHermitian("GkslGenerator: H is not Hermitian within eq_tol");
    }
    check_kraus_shapes(h.rows(), kraus);
    h_ = 0.5 * (h + h.adjoint()); // remove numerical skew
    kraus_ = std::move(kraus);
    g_ = derive_g(h_, kraus_);
}

GkslGenerator GkslGenerator::from_g(const CMat& g, std::vector<CMat> kraus, const Tolerances& tol) {
    if (g.rows() != g.cols() || g.rows() < 1) {
        throw ShapeMismatch("GkslGenerator: G must be square, n >= 1");
    }
    check_kraus_shapes(g.rows(), kraus);
    // The anti-Hermitian part carries H; the Hermitian part is redundant and
    // must agree with -1/2 sum L*L.
    CMat lsum = CMat::Zero(g.rows(), g.cols());
    for (const CMat& l : kraus) {
        lsum.noalias() += l.adjoint() * l;
    }
    if (!approx_equal(g + g.adjoint(), (-lsum).eval(), tol.eq_tol)) {
        throw ConstraintViolated("GkslGenerator: G + G* must equal -sum L*L");
    }
    const CMat h = (g.adjoint() - g) / (2.0 * kImag);
    return GkslGenerator(h, std::move(kraus), tol);
}

TimeReversal::TimeReversal(const CMat& u, const Tolerances& tol) {
    tol.validate();
    if (u.rows() != u.cols() || u.rows() < 1) {
        throw ShapeMismatch("TimeReversal: u must be square, n >= 1");
    }
    const CMat id = CMat::Identity(u.rows(), u.cols());
    if (!approx_equal((u.adjoint() * u).eval(), id, tol.eq_tol)) {
        throw ConstraintViolated("TimeReversal: u must be unitary");
    }
    if (!approx_equal(u, u.transpose().eval(), tol.eq_tol)) {
        throw ConstraintViolated("TimeReversal: u must equal its transpose");
    }
    u_ = u;
}

TimeReversal TimeReversal::conjugation(Eigen::Index n) {
    return TimeReversal(CMat::Identity(n, n));
}

CMat apply_generator(const GkslGenerator& gen, const CMat& x) {
    const Eigen::Index n = gen.dim();
    if (x.rows() != n || x.cols() != n) {
        throw ShapeMismatch("apply_generator: x shape mismatch");
    }
    const CMat& h = gen.hamiltonian();
    CMat out = kImag * (h * x - x * h);
    for (const CMat& l : gen.kraus()) {
        const CMat ldag = l.adjoint();
        const CMat ll = ldag * l;
        out.noalias() += ldag * x * l;
        out.noalias() -= 0.5 * (ll * x + x * ll);
    }
    return out;
}

CMat apply_predual(const GkslGenerator& gen, const CMat& sigma) {
    const Eigen::Index n = gen.dim();
    if (sigma.rows() != n || sigma.cols() != n) {
        throw ShapeMismatch("apply_predual: sigma shape mismatch");
    }
    const CMat& g = gen.g();
    CMat out = g * sigma + sigma * g.adjoint();
    for (const CMat& l : gen.kraus()) {
        out.noalias() += l * sigma * l.adjoint();
    }
    return out;
}

Superoperator to_superoperator(const GkslGenerator& gen, Picture picture) {
    const Eigen::Index n = gen.dim();
    const CMat id = CMat::Identity(n, n);
    CMat mat;
    if (picture == Picture::Heisenberg) {
        // L(x) = G*x + sum L*xL + xG, so vec-form uses vec(AXB) = (B^T ⊗ A) vec(X).
        mat = kron(id, gen.g().adjoint()) + kron(gen.g().transpose(), id);
        for (const CMat& l : gen.kraus()) {
            mat.noalias() += kron(l.transpose(), l.adjoint());
        }
    } else {
        mat = kron(id, gen.g()) + kron(gen.g().conjugate(), id);
        for (const CMat& l : gen.kraus()) {
            mat.noalias() += kron(l.conjugate(), l);
        }
    }
    return Superoperator{std::move(mat), picture};
}

CMat evolve(const GkslGenerator& gen, const CMat& x, double t, Picture picture) {
    if (t < 0.0) {
        throw ConstraintViolated("evolve: t must be nonnegative");
    }
    const Superoperator sop = to_superoperator(gen, picture);
    return unvec(matrix_exp((t * sop.mat).eval()) * vec(x));
}

CMat kms_gram(const DensityMatrix& rho) {
    // <E_a, E_b> = tr(rho^1/2 E_a* rho^1/2 E_b) collapses to a Kronecker
    // product in the vec ordering; the direct-trace oracle lives in the tests.
    return kron(rho.sqrt_rho().transpose(), rho.sqrt_rho());
}

} // namespace qdb

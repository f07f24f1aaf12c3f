#include "qdb/duality.hpp"

#include "qdb/invariant.hpp"
#include "qdb/linalg.hpp"
#include "qdb/special_form.hpp"

#include <cmath>
#include <vector>

namespace qdb {

DualPair dual_generator(const GkslGenerator& gen, const DensityMatrix& rho,
                        const Tolerances& tol) {
    if (gen.dim() != rho.dim()) {
        throw ShapeMismatch("dual_generator: dimensions differ");
    }
    if (!is_special(gen, rho, tol).is_special) {
        throw NotSpecial("dual_generator: generator is not special w.r.t. rho");
    }
    if (verify_invariance(gen, rho) > tol.eq_tol) {
        throw NotInvariant("dual_generator: rho is not invariant within eq_tol");
    }

    const CMat& sr = rho.sqrt_rho();
    const CMat& isr = rho.inv_sqrt_rho();

    std::vector<CMat> dual_kraus;
    dual_kraus.reserve(gen.kraus_count());
    for (const CMat& l : gen.kraus()) {
        dual_kraus.push_back(sr * l.adjoint() * isr);
    }
    const CMat g_raw = sr * gen.g().adjoint() * isr;
    const CMat h_dual = (g_raw.adjoint() - g_raw) / (2.0 * kImag);

    DualPair pair{gen, GkslGenerator(h_dual, std::move(dual_kraus), tol), 0.0};

    // Realized scalar of the dual relation: tr(rho G) - tr(rho G'*) = ic,
    // identically zero for this representative.
    const Complex s = (rho.rho() * gen.g()).trace() -
                      (rho.rho() * pair.dual.g().adjoint()).trace();
    pair.c_shift = s.imag();

    if (verify_invariance(pair.dual, rho) > tol.eq_tol) {
        throw NumericalFailure("dual_generator: rho is not invariant for the dual");
    }
    if (!is_special(pair.dual, rho, tol).is_special) {
        throw NumericalFailure("dual_generator: dual lost specialness");
    }
    return pair;
}

double verify_dual_relation(const DualPair& pair, const DensityMatrix& rho) {
    const Eigen::Index n = rho.dim();
    if (pair.primal.dim() != n || pair.dual.dim() != n) {
        throw ShapeMismatch("verify_dual_relation: dimensions differ");
    }
    const CMat& sr = rho.sqrt_rho();
    double worst = 0.0;
    CMat unit = CMat::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            unit(i, j) = 1.0;
            const CMat lhs = sr * apply_generator(pair.dual, unit) * sr;
            const CMat rhs = apply_predual(pair.primal, (sr * unit * sr).eval());
            worst = std::max(worst, residual(lhs, rhs));
            unit(i, j) = 0.0;
        }
    }
    return worst;
}

GkslGenerator theta_dual(const GkslGenerator& gen, const TimeReversal& theta) {
    if (gen.dim() != theta.dim()) {
        throw ShapeMismatch("theta_dual: dimensions differ");
    }
    std::vector<CMat> kraus;
    kraus.reserve(gen.kraus_count());
    for (const CMat& l : gen.kraus()) {
        kraus.push_back(theta.conjugate_op(l));
    }
    return GkslGenerator((-theta.conjugate_op(gen.hamiltonian())).eval(), std::move(kraus));
}

double verify_g_reconstruction(const GkslGenerator& gen, const DensityMatrix& rho,
                               const Tolerances& tol) {
    if (gen.dim() != rho.dim()) {
        throw ShapeMismatch("verify_g_reconstruction: dimensions differ");
    }
    if (!is_special(gen, rho, tol).is_special) {
        throw NotSpecial("verify_g_reconstruction: generator is not special w.r.t. rho");
    }
    const Eigen::Index n = gen.dim();
    const Complex mean_g = (rho.rho() * gen.g()).trace();

    CMat g_star(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        CVec col = CVec::Zero(n);
        const CVec u = CVec::Unit(n, i);
        for (Eigen::Index k = 0; k < n; ++k) {
            const CVec ek = rho.eigenvectors().col(k);
            const CMat unit = u * ek.adjoint();
            col += rho.eigenvalues()(k) * (apply_generator(gen, unit) * ek);
        }
        g_star.col(i) = col - mean_g * u;
    }
    return residual(g_star, gen.g().adjoint().eval());
}

} // namespace qdb

#include "qdb/special_form.hpp"

#include "qdb/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace qdb {

namespace {

void check_dims(const GkslGenerator& gen, const DensityMatrix& rho) {
    if (gen.dim() != rho.dim()) {
        throw ShapeMismatch("special_form: generator and state dimensions differ");
    }
}

} // namespace

SpecialFormReport is_special(const GkslGenerator& gen, const DensityMatrix& rho,
                             const Tolerances& tol) {
    check_dims(gen, rho);
    const Eigen::Index n = gen.dim();
    const auto m = static_cast<Eigen::Index>(gen.kraus_count());

    SpecialFormReport rep;
    rep.zero_mean_residuals.reserve(gen.kraus_count());

    CMat stacked(n * n, m + 1);
    stacked.col(0) = vec(CMat::Identity(n, n));
    for (Eigen::Index l = 0; l < m; ++l) {
        rep.zero_mean_residuals.push_back(std::abs((rho.rho() * gen.kraus()[l]).trace()));
        stacked.col(l + 1) = vec(gen.kraus()[l]);
    }

    Eigen::JacobiSVD<CMat> svd(stacked);
    rep.independence_min_singular = svd.singularValues().minCoeff();

    rep.is_special = rep.independence_min_singular > tol.rank_tol;
    for (double r : rep.zero_mean_residuals) {
        rep.is_special = rep.is_special && r <= tol.eq_tol;
    }
    return rep;
}

MakeSpecialResult make_special(const GkslGenerator& gen, const DensityMatrix& rho,
                               const Tolerances& tol) {
    check_dims(gen, rho);
    const Eigen::Index n = gen.dim();
    const CMat id = CMat::Identity(n, n);

    // (a) remove means; compensate H so the map is unchanged.
    std::vector<Complex> shifts;
    std::vector<CMat> shifted;
    shifts.reserve(gen.kraus_count());
    shifted.reserve(gen.kraus_count());
    CMat h = gen.hamiltonian();
    for (const CMat& l : gen.kraus()) {
        const Complex c = (rho.rho() * l).trace();
        shifts.push_back(c);
        shifted.push_back(l - c * id);
    }
    for (std::size_t l = 0; l < shifted.size(); ++l) {
        h -= (std::conj(shifts[l]) * shifted[l] - shifts[l] * shifted[l].adjoint()) / (2.0 * kImag);
    }

    // (b) spectral re-extraction of an independent family. Eigenvectors of P
    // stay in span{vec(L_l)}, so zero means survive.
    MakeSpecialResult out{GkslGenerator(h, {}, tol), shifts, gen.kraus_count(), 0, {}};
    std::vector<CMat> fresh;
    if (!shifted.empty()) {
        CMat p = CMat::Zero(n * n, n * n);
        for (const CMat& l : shifted) {
            const CVec v = vec(l);
            p.noalias() += v * v.adjoint();
        }
        Eigen::SelfAdjointEigenSolver<CMat> es(p);
        if (es.info() != Eigen::Success) {
            throw NumericalFailure("make_special: eigensolver did not converge");
        }
        for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
            const double lam = es.eigenvalues()(i);
            if (lam > tol.rank_tol && lam <= 10.0 * tol.rank_tol) {
                out.borderline_eigenvalues.push_back(lam);
            }
            if (lam > tol.rank_tol) {
                fresh.push_back(std::sqrt(lam) * unvec(es.eigenvectors().col(i)));
            }
        }
    }
    out.kraus_after = fresh.size();
    out.generator = GkslGenerator(h, std::move(fresh), tol);

    const CMat before = to_superoperator(gen, Picture::Heisenberg).mat;
    const CMat after = to_superoperator(out.generator, Picture::Heisenberg).mat;
    if (!approx_equal(before, after, 10.0 * tol.eq_tol)) {
        throw NumericalFailure("make_special: normalized generator does not reproduce the map");
    }
    if (!is_special(out.generator, rho, tol).is_special) {
        throw NumericalFailure("make_special: output failed the specialness check");
    }
    return out;
}

EquivalenceReport representation_equivalent(const GkslGenerator& gen1,
                                            const GkslGenerator& gen2,
                                            const Tolerances& tol) {
    if (gen1.dim() != gen2.dim()) {
        throw ShapeMismatch("representation_equivalent: dimensions differ");
    }
    const Eigen::Index n = gen1.dim();

    EquivalenceReport rep;
    const CMat s1 = to_superoperator(gen1, Picture::Heisenberg).mat;
    const CMat s2 = to_superoperator(gen2, Picture::Heisenberg).mat;
    rep.superop_distance = residual(s1, s2);
    rep.equivalent = approx_equal(s1, s2, 10.0 * tol.eq_tol);

    if (!rep.equivalent || gen1.kraus_count() != gen2.kraus_count()) {
        return rep;
    }

    // Recover the unitary mixing L'_l = sum_j u_lj L_j in the HS inner
    // product, and the real Hamiltonian shift.
    const auto m = static_cast<Eigen::Index>(gen1.kraus_count());
    if (m > 0) {
        CMat gram(m, m), mixed(m, m);
        for (Eigen::Index k = 0; k < m; ++k) {
            for (Eigen::Index j = 0; j < m; ++j) {
                gram(k, j) = (gen1.kraus()[k].adjoint() * gen1.kraus()[j]).trace();
                mixed(k, j) = (gen1.kraus()[k].adjoint() * gen2.kraus()[j]).trace();
            }
        }
        if (hermitian_eig(0.5 * (gram + gram.adjoint()), tol)
                .eigenvalues(m - 1) <= tol.rank_tol) {
            return rep; // dependent family; no witness
        }
        const CMat u = solve_hpd(0.5 * (gram + gram.adjoint()), mixed).transpose();
        rep.unitarity_defect = residual((u.adjoint() * u).eval(), CMat::Identity(m, m));
        double worst = 0.0;
        for (Eigen::Index l = 0; l < m; ++l) {
            CMat recon = CMat::Zero(n, n);
            for (Eigen::Index j = 0; j < m; ++j) {
                recon += u(l, j) * gen1.kraus()[j];
            }
            worst = std::max(worst, residual(gen2.kraus()[l], recon));
        }
        rep.mixing_residual = worst;
        rep.mixing_unitary = u;
    } else {
        rep.mixing_unitary = CMat(0, 0);
    }

    const double c = ((gen2.hamiltonian() - gen1.hamiltonian()).trace() / static_cast<double>(n)).real();
    rep.hamiltonian_shift = c;
    rep.shift_residual = residual(gen2.hamiltonian(),
                                  (gen1.hamiltonian() + c * CMat::Identity(n, n)).eval());
    return rep;
}

} // namespace qdb

#include "qdb/balance.hpp"

#include "qdb/duality.hpp"
#include "qdb/invariant.hpp"
#include "qdb/linalg.hpp"
#include "qdb/special_form.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace qdb {

namespace {

void require_special(const GkslGenerator& gen, const DensityMatrix& rho,
                     const Tolerances& tol, const char* who) {
    if (gen.dim() != rho.dim()) {
        throw ShapeMismatch(std::string(who) + ": dimensions differ");
    }
    if (!is_special(gen, rho, tol).is_special) {
        throw NotSpecial(std::string(who) + ": generator is not special w.r.t. rho");
    }
}

// Columns vec(L_l rho^1/2) and vec(rho^1/2 X_l) for span comparisons.
CMat stack_right(const std::vector<CMat>& ops, const CMat& sr) {
    CMat cols(sr.rows() * sr.rows(), static_cast<Eigen::Index>(ops.size()));
    for (std::size_t i = 0; i < ops.size(); ++i) {
        cols.col(static_cast<Eigen::Index>(i)) = vec((ops[i] * sr).eval());
    }
    return cols;
}

CMat stack_left(const std::vector<CMat>& ops, const CMat& sr) {
    CMat cols(sr.rows() * sr.rows(), static_cast<Eigen::Index>(ops.size()));
    for (std::size_t i = 0; i < ops.size(); ++i) {
        cols.col(static_cast<Eigen::Index>(i)) = vec((sr * ops[i]).eval());
    }
    return cols;
}

// Residual of rho^1/2 X_k = sum_l u_kl L_l rho^1/2 with the solved
// coefficients; targets holds the left-hand sides.
double reconstruction_residual(const std::vector<CMat>& targets,
                               const std::vector<CMat>& kraus, const CMat& sr,
                               const CMat& u) {
    double worst = 0.0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        CMat recon = CMat::Zero(sr.rows(), sr.cols());
        for (std::size_t l = 0; l < kraus.size(); ++l) {
            recon += u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) *
                     kraus[l] * sr;
        }
        worst = std::max(worst, residual((sr * targets[k]).eval(), recon));
    }
    return worst;
}

bool all_pass(const std::map<std::string, double>& residuals, double eq_tol) {
    for (const auto& [name, value] : residuals) {
        (void)name;
        if (!(value <= eq_tol)) {
            return false;
        }
    }
    return true;
}

} // namespace

CovTriple cov_matrices(const GkslGenerator& gen, const DensityMatrix& rho,
                       const TimeReversal* theta, const Tolerances& tol) {
    require_special(gen, rho, tol, "cov_matrices");
    const auto m = static_cast<Eigen::Index>(gen.kraus_count());
    const CMat& sr = rho.sqrt_rho();

    CovTriple cov;
    cov.b = CMat(m, m);
    cov.c = CMat(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const CMat kdag = gen.kraus()[k].adjoint();
        for (Eigen::Index j = 0; j < m; ++j) {
            cov.b(k, j) = (sr * kdag * sr * gen.kraus()[j].adjoint()).trace();
            cov.c(k, j) = (rho.rho() * kdag * gen.kraus()[j]).trace();
        }
    }
    if (theta) {
        if (theta->dim() != gen.dim()) {
            throw ShapeMismatch("cov_matrices: theta dimension differs");
        }
        CMat r(m, m);
        for (Eigen::Index j = 0; j < m; ++j) {
            const CMat jdag = gen.kraus()[j].adjoint();
            for (Eigen::Index k = 0; k < m; ++k) {
                r(j, k) = (sr * jdag * sr *
                           theta->conjugate_op(gen.kraus()[k].adjoint())).trace();
            }
        }
        cov.r = std::move(r);
        cov.r_self_adjoint_defect = residual(*cov.r, cov.r->adjoint().eval());
    }

    cov.b_symmetry_defect = residual(cov.b, cov.b.transpose().eval());
    cov.c_hermiticity_defect = residual(cov.c, cov.c.adjoint().eval());
    if (m > 0) {
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (cov.c + cov.c.adjoint()));
        cov.c_min_eigenvalue = es.eigenvalues().minCoeff();
    }
    return cov;
}

CheckReport check_kms_symmetric(const GkslGenerator& gen, const DensityMatrix& rho,
                                const Tolerances& tol) {
    require_special(gen, rho, tol, "check_kms_symmetric");
    const auto m = static_cast<Eigen::Index>(gen.kraus_count());
    const CMat& sr = rho.sqrt_rho();

    CheckReport rep;
    rep.residuals["invariance"] = verify_invariance(gen, rho);

    // Condition (1): G rho^1/2 - rho^1/2 G* = ic rho^1/2 with real c.
    const CMat d = gen.g() * sr - sr * gen.g().adjoint();
    const Complex c_raw = (sr * d).trace() / (kImag * rho.rho().trace());
    rep.c_scalar = c_raw.real();
    rep.residuals["g_condition"] = residual(d, (kImag * c_raw.real() * sr).eval());
    rep.residuals["c_imag"] = std::abs(c_raw.imag());

    // Condition (2): rho^1/2 L_k* = sum u_kl L_l rho^1/2, u unitary T-symmetric.
    if (m > 0) {
        std::vector<CMat> adjoints;
        adjoints.reserve(gen.kraus_count());
        for (const CMat& l : gen.kraus()) {
            adjoints.push_back(l.adjoint());
        }
        rep.residuals["span_gap"] =
            projector_gap(stack_right(gen.kraus(), sr), stack_left(adjoints, sr), tol.rank_tol);

        const CovTriple cov = cov_matrices(gen, rho, nullptr, tol);
        if (cov.c_min_eigenvalue <= tol.rank_tol) {
            throw NumericalFailure("check_kms_symmetric: covariance matrix C is not positive definite");
        }
        const CMat ut = solve_hpd(0.5 * (cov.c + cov.c.adjoint()), cov.b); // U^T = C^-1 B
        const CMat u = ut.transpose();
        rep.matching_unitary = u;
        rep.residuals["unitarity"] = residual((u.adjoint() * u).eval(), CMat::Identity(m, m));
        rep.residuals["t_symmetry"] = residual(u, u.transpose().eval());
        rep.residuals["reconstruction"] = reconstruction_residual(adjoints, gen.kraus(), sr, u);
    } else {
        rep.matching_unitary = CMat(0, 0);
    }

    std::map<std::string, double> gate = rep.residuals;
    gate.erase("invariance"); // implied by the structural conditions; reported only
    rep.verdict = all_pass(gate, tol.eq_tol);
    return rep;
}

CheckReport check_sqdb(const GkslGenerator& gen, const DensityMatrix& rho,
                       const Tolerances& tol) {
    require_special(gen, rho, tol, "check_sqdb");
    const auto m = static_cast<Eigen::Index>(gen.kraus_count());
    const CMat& sr = rho.sqrt_rho();

    CheckReport rep;
    const double invariance = verify_invariance(gen, rho);
    rep.residuals["invariance"] = invariance;

    if (m > 0) {
        std::vector<CMat> adjoints;
        for (const CMat& l : gen.kraus()) {
            adjoints.push_back(l.adjoint());
        }
        rep.residuals["span_gap"] =
            projector_gap(stack_right(gen.kraus(), sr), stack_left(adjoints, sr), tol.rank_tol);

        const CovTriple cov = cov_matrices(gen, rho, nullptr, tol);
        if (cov.c_min_eigenvalue <= tol.rank_tol) {
            throw NumericalFailure("check_sqdb: covariance matrix C is not positive definite");
        }
        const CMat x = solve_hpd(0.5 * (cov.c + cov.c.adjoint()), cov.b); // C^-1 B
        rep.matching_unitary = x;
        rep.residuals["unitarity"] = residual((x.adjoint() * x).eval(), CMat::Identity(m, m));
        rep.residuals["t_symmetry"] = residual(x, x.transpose().eval());
        rep.residuals["commutation"] = residual((cov.c * cov.b).eval(),
                                                (cov.b * cov.c.transpose()).eval());
        rep.residuals["reconstruction"] =
            reconstruction_residual(adjoints, gen.kraus(), sr, x.transpose().eval());
    } else {
        rep.matching_unitary = CMat(0, 0);
    }

    // The invariance residual is informational for SQDB: the structural
    // conditions involve only the L's.
    std::map<std::string, double> gate = rep.residuals;
    gate.erase("invariance");
    rep.verdict = all_pass(gate, tol.eq_tol);

    // Derivation witness G = G' + 2iK + ic with K Hermitian commuting with rho.
    if (rep.verdict && invariance <= tol.eq_tol) {
        const DualPair pair = dual_generator(gen, rho, tol);
        const Complex t = (rho.rho() * (gen.g() - pair.dual.g())).trace();
        const double c = t.imag();
        rep.c_scalar = c;
        const Eigen::Index n = gen.dim();
        const CMat k = (gen.g() - pair.dual.g() - kImag * c * CMat::Identity(n, n)) / (2.0 * kImag);
        rep.k_witness = k;
        rep.residuals["k_hermiticity"] = residual(k, k.adjoint().eval());
        rep.residuals["k_rho_commutator"] = (k * rho.rho() - rho.rho() * k).norm();
    }
    return rep;
}

CheckReport check_sqdb_theta(const GkslGenerator& gen, const DensityMatrix& rho,
                             const TimeReversal& theta, const Tolerances& tol) {
    require_special(gen, rho, tol, "check_sqdb_theta");
    if (theta.dim() != gen.dim()) {
        throw ShapeMismatch("check_sqdb_theta: theta dimension differs");
    }
    if (!theta_rho_compatibility(rho, theta, tol)) {
        throw ThetaRhoNoncommuting("check_sqdb_theta: theta rho theta != rho");
    }
    const auto m = static_cast<Eigen::Index>(gen.kraus_count());
    const CMat& sr = rho.sqrt_rho();

    CheckReport rep;
    rep.residuals["invariance"] = verify_invariance(gen, rho);

    // Condition (1): rho^1/2 theta G* theta = G rho^1/2.
    rep.residuals["g_condition"] =
        residual((sr * theta.conjugate_op(gen.g().adjoint())).eval(), (gen.g() * sr).eval());

    if (m > 0) {
        std::vector<CMat> reversed;
        reversed.reserve(gen.kraus_count());
        for (const CMat& l : gen.kraus()) {
            reversed.push_back(theta.conjugate_op(l.adjoint()));
        }
        rep.residuals["span_gap"] =
            projector_gap(stack_right(gen.kraus(), sr), stack_left(reversed, sr), tol.rank_tol);

        const CovTriple cov = cov_matrices(gen, rho, &theta, tol);
        if (cov.c_min_eigenvalue <= tol.rank_tol) {
            throw NumericalFailure("check_sqdb_theta: covariance matrix C is not positive definite");
        }
        const CMat x = solve_hpd(0.5 * (cov.c + cov.c.adjoint()), *cov.r); // C^-1 R
        rep.matching_unitary = x;
        rep.residuals["unitarity"] = residual((x.adjoint() * x).eval(), CMat::Identity(m, m));
        rep.residuals["self_adjointness"] = residual(x, x.adjoint().eval());
        rep.residuals["commutation"] = residual((cov.c * *cov.r).eval(), (*cov.r * cov.c).eval());
        rep.residuals["reconstruction"] =
            reconstruction_residual(reversed, gen.kraus(), sr, x.transpose().eval());

        Eigen::ComplexEigenSolver<CMat> es(x);
        if (es.info() != Eigen::Success) {
            throw NumericalFailure("check_sqdb_theta: eigensolver did not converge on the matching unitary");
        }
        rep.u_theta_spectrum = es.eigenvalues();
        double spectrum_defect = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            const Complex lam = es.eigenvalues()(i);
            spectrum_defect = std::max(spectrum_defect,
                                       std::min(std::abs(lam - 1.0), std::abs(lam + 1.0)));
        }
        rep.residuals["spectrum"] = spectrum_defect;
    } else {
        rep.matching_unitary = CMat(0, 0);
        rep.u_theta_spectrum = CVec(0);
    }

    std::map<std::string, double> gate = rep.residuals;
    gate.erase("invariance");
    gate.erase("spectrum"); // implied by self-adjoint unitarity; reported only
    rep.verdict = all_pass(gate, tol.eq_tol);
    return rep;
}

bool theta_rho_compatibility(const DensityMatrix& rho, const TimeReversal& theta,
                             const Tolerances& tol) {
    if (rho.dim() != theta.dim()) {
        throw ShapeMismatch("theta_rho_compatibility: dimensions differ");
    }
    return approx_equal(theta.conjugate_op(rho.rho()), rho.rho(), tol.eq_tol);
}

double kms_pair_identity_defect(const DensityMatrix& rho, const TimeReversal& theta) {
    const Eigen::Index n = rho.dim();
    const CMat& sr = rho.sqrt_rho();
    double worst = 0.0;
    CMat x = CMat::Zero(n, n), y = CMat::Zero(n, n);
    for (Eigen::Index a = 0; a < n * n; ++a) {
        x(a % n, a / n) = 1.0;
        const CMat tx = theta.conjugate_op(x.adjoint());
        for (Eigen::Index b = 0; b < n * n; ++b) {
            y(b % n, b / n) = 1.0;
            const Complex lhs = (sr * x * sr * y).trace();
            const Complex rhs = (sr * theta.conjugate_op(y.adjoint()) * sr * tx).trace();
            worst = std::max(worst, std::abs(lhs - rhs));
            y(b % n, b / n) = 0.0;
        }
        x(a % n, a / n) = 0.0;
    }
    return worst;
}

double semigroup_oracle(const GkslGenerator& gen, const DensityMatrix& rho,
                        const TimeReversal* theta, BalanceCondition condition,
                        const std::vector<double>& t_grid, const Tolerances& tol) {
    if (gen.dim() != rho.dim()) {
        throw ShapeMismatch("semigroup_oracle: dimensions differ");
    }
    if (condition == BalanceCondition::SqdbTheta) {
        if (!theta) {
            throw ConstraintViolated("semigroup_oracle: sqdb_theta requires a time reversal");
        }
        if (!theta_rho_compatibility(rho, *theta, tol)) {
            throw ThetaRhoNoncommuting("semigroup_oracle: theta rho theta != rho");
        }
    }
    const Eigen::Index n = gen.dim();
    const CMat& sr = rho.sqrt_rho();
    const CMat heis = to_superoperator(gen, Picture::Heisenberg).mat;

    // Matrix units and, for the theta condition, their reversals.
    std::vector<CMat> units(n * n, CMat::Zero(n, n));
    std::vector<CMat> reversed(theta ? n * n : 0);
    for (Eigen::Index a = 0; a < n * n; ++a) {
        units[a](a % n, a / n) = 1.0;
        if (theta) {
            reversed[a] = theta->conjugate_op(units[a].adjoint());
        }
    }

    double worst = 0.0;
    for (double t : t_grid) {
        if (t < 0.0) {
            throw ConstraintViolated("semigroup_oracle: t must be nonnegative");
        }
        const CMat et = matrix_exp((t * heis).eval());
        // T_t on a matrix unit is a column of the exponential.
        const auto apply_t = [&](const CMat& xm) { return unvec(et * vec(xm)); };
        for (Eigen::Index a = 0; a < n * n; ++a) {
            const CMat tx = apply_t(units[a]);
            for (Eigen::Index b = 0; b < n * n; ++b) {
                Complex lhs, rhs;
                if (condition == BalanceCondition::Kms) {
                    lhs = (sr * units[a] * sr * unvec(et.col(b))).trace();
                    rhs = (sr * tx * sr * units[b]).trace();
                } else {
                    lhs = (sr * units[a] * sr * unvec(et.col(b))).trace();
                    rhs = (sr * reversed[b] * sr * apply_t(reversed[a])).trace();
                }
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
    }
    return worst;
}

std::vector<VarianceViolation> equal_variance_property(const GkslGenerator& gen,
                                                       const DensityMatrix& rho,
                                                       const TimeReversal* theta,
                                                       const Tolerances& tol) {
    require_special(gen, rho, tol, "equal_variance_property");
    const auto m = static_cast<Eigen::Index>(gen.kraus_count());
    if (m < 2) {
        return {};
    }

    // Rotate the family so {L rho^1/2} becomes HS-orthogonal (C diagonal).
    const CovTriple cov = cov_matrices(gen, rho, theta, tol);
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (cov.c + cov.c.adjoint()));
    if (es.info() != Eigen::Success) {
        throw NumericalFailure("equal_variance_property: eigensolver did not converge");
    }
    const CMat v = es.eigenvectors();
    std::vector<CMat> rotated(m, CMat::Zero(gen.dim(), gen.dim()));
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index nidx = 0; nidx < m; ++nidx) {
            rotated[k] += v(nidx, k) * gen.kraus()[nidx];
        }
    }
    const GkslGenerator rotated_gen(gen.hamiltonian(), rotated, tol);
    const CovTriple rc = cov_matrices(rotated_gen, rho, theta, tol);
    const CMat& coupling = theta ? *rc.r : rc.b;

    std::vector<VarianceViolation> violations;
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index l = k + 1; l < m; ++l) {
            const double cpl = std::abs(coupling(k, l));
            if (cpl > tol.eq_tol) {
                const double gap = std::abs(rc.c(k, k).real() - rc.c(l, l).real());
                if (gap > tol.eq_tol) {
                    violations.push_back(VarianceViolation{k, l, cpl, gap});
                }
            }
        }
    }
    return violations;
}

} // namespace qdb

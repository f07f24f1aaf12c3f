#include "qdb/qubit.hpp"

#include "qdb/invariant.hpp"
#include "qdb/linalg.hpp"
#include "qdb/special_form.hpp"

#include <cmath>
#include <numbers>

namespace qdb {

CMat sigma0() { return CMat::Identity(2, 2); }

CMat sigma1() {
    CMat m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

CMat sigma2() {
    CMat m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

CMat sigma3() {
    CMat m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

CMat sigma_plus() { return 0.5 * (sigma1() + kImag * sigma2()); }

CMat sigma_minus() { return 0.5 * (sigma1() - kImag * sigma2()); }

CMat sigma1_nu(double nu) {
    CMat m(2, 2);
    m << 0.0, std::sqrt(2.0 * nu), std::sqrt(2.0 * (1.0 - nu)), 0.0;
    return m;
}

CMat sigma2_nu(double nu) {
    CMat m(2, 2);
    m << 0.0, Complex(0.0, -std::sqrt(2.0 * nu)), Complex(0.0, std::sqrt(2.0 * (1.0 - nu))), 0.0;
    return m;
}

namespace {

struct SlotSet {
    bool l1 = false;
    bool l2 = false;
    bool l3 = false;
};

SlotSet case_slots(QubitCase c) {
    switch (c) {
    case QubitCase::O: return {false, false, false};
    case QubitCase::A: return {true, false, false};
    case QubitCase::B: return {false, false, true};
    case QubitCase::C: return {true, true, false};
    case QubitCase::D: return {true, false, true};
    case QubitCase::E: return {true, true, true};
    }
    throw ConstraintViolated("build_standard_form: unknown case tag");
}

void check_case_constraints(const QubitParams& p, double tol) {
    const double r1z1 = std::abs(p.r1) * std::abs(p.zeta1);
    const double r2z2 = std::abs(p.r2) * std::abs(p.zeta2);
    switch (p.case_tag) {
    case QubitCase::O:
        break;
    case QubitCase::A:
        if (r1z1 <= tol) throw CaseConstraintViolated("case a requires r1*zeta1 != 0");
        break;
    case QubitCase::B:
        if (std::abs(p.r3) <= tol) throw CaseConstraintViolated("case b requires r3 != 0");
        break;
    case QubitCase::C:
        if (r1z1 * r2z2 <= tol) throw CaseConstraintViolated("case c requires r1*zeta1*r2*zeta2 != 0");
        if (std::abs(p.r1 * p.zeta2 - p.r2 * p.zeta1) <= tol) {
            throw CaseConstraintViolated("case c requires r1*zeta2 != r2*zeta1");
        }
        break;
    case QubitCase::D:
        if (std::abs(p.r3) <= tol) throw CaseConstraintViolated("case d requires r3 != 0");
        if (r1z1 <= tol) throw CaseConstraintViolated("case d requires r1*zeta1 != 0");
        break;
    case QubitCase::E:
        if (std::abs(p.r1 * p.zeta2 - p.r2 * p.zeta1) <= tol) {
            throw CaseConstraintViolated("case e requires r1*zeta2 != r2*zeta1");
        }
        if (r1z1 * r2z2 <= tol) throw CaseConstraintViolated("case e requires r1*zeta1*r2*zeta2 != 0");
        if (std::abs(p.r3) <= tol) throw CaseConstraintViolated("case e requires r3 != 0");
        break;
    }
}

CMat type1_operator(double nu, double r, Complex zeta) {
    return (1.0 - 2.0 * nu) * r * sigma0() + r * sigma3() + zeta * sigma1_nu(nu);
}

} // namespace

QubitModel build_standard_form(const QubitParams& params, const Tolerances& tol) {
    tol.validate();
    if (!(params.nu > 0.0 && params.nu < 1.0)) {
        throw ConstraintViolated("build_standard_form: nu must lie in (0, 1)");
    }
    const double nu = params.nu;
    SlotSet slots = case_slots(params.case_tag);
    std::vector<std::string> notes;

    if (!params.relax_constraints) {
        check_case_constraints(params, tol.eq_tol);
    } else {
        // Keep only slots with a nonzero operator; record the degeneracies.
        if (slots.l1 && std::abs(params.r1) + std::abs(params.zeta1) <= tol.eq_tol) {
            slots.l1 = false;
            notes.push_back("slot 1 dropped: r1 = zeta1 = 0");
        }
        if (slots.l2 && std::abs(params.r2) + std::abs(params.zeta2) <= tol.eq_tol) {
            slots.l2 = false;
            notes.push_back("slot 2 dropped: r2 = zeta2 = 0");
        }
        if (slots.l3 && std::abs(params.r3) <= tol.eq_tol) {
            slots.l3 = false;
            notes.push_back("slot 3 dropped: r3 = 0");
        }
        if (slots.l1 && std::abs(params.r1 * params.zeta1) <= tol.eq_tol) {
            notes.push_back("degenerate slot 1: r1*zeta1 = 0");
        }
        if (slots.l2 && std::abs(params.r2 * params.zeta2) <= tol.eq_tol) {
            notes.push_back("degenerate slot 2: r2*zeta2 = 0");
        }
    }

    const double sq_nu = std::sqrt(nu);
    const double sq_co = std::sqrt(1.0 - nu);
    const double sum_im = (slots.l1 ? params.r1 * params.zeta1.imag() : 0.0) +
                          (slots.l2 ? params.r2 * params.zeta2.imag() : 0.0);
    const double sum_re = (slots.l1 ? params.r1 * params.zeta1.real() : 0.0) +
                          (slots.l2 ? params.r2 * params.zeta2.real() : 0.0);

    double v1 = 0.0;
    double v2 = 0.0;
    if (std::abs(nu - 0.5) <= tol.eq_tol) {
        if (std::abs(sum_im) > tol.eq_tol) {
            throw CaseConstraintViolated(
                "nu = 1/2 requires sum_k r_k Im zeta_k = 0 (no valid v1 exists otherwise)");
        }
        v1 = params.v1_free;
    } else {
        const double scale = std::sqrt(2.0 * nu * (1.0 - nu));
        v1 = -scale * (sq_co + sq_nu) * (sq_co + sq_nu) * sum_im / (sq_co - sq_nu);
        v2 = -scale * (sq_co - sq_nu) * (sq_co - sq_nu) * sum_re / (sq_co + sq_nu);
    }

    std::vector<CMat> kraus;
    if (slots.l1) kraus.push_back(type1_operator(nu, params.r1, params.zeta1));
    if (slots.l2) kraus.push_back(type1_operator(nu, params.r2, params.zeta2));
    if (slots.l3) {
        kraus.push_back(std::exp(kImag * params.phase3) * params.r3 * sigma2_nu(nu));
    }

    const CMat h = v1 * sigma1() + v2 * sigma2() + params.v3 * sigma3();
    CMat rho_mat = CMat::Zero(2, 2);
    rho_mat(0, 0) = nu;
    rho_mat(1, 1) = 1.0 - nu;

    QubitModel model{GkslGenerator(h, std::move(kraus), tol), DensityMatrix(rho_mat, tol),
                     TimeReversal::conjugation(2), v1, v2, std::move(notes)};

    if (!is_special(model.gen, model.rho, tol).is_special) {
        throw CaseConstraintViolated("build_standard_form: parameters produce a dependent Kraus family");
    }
    if (verify_invariance(model.gen, model.rho) > tol.eq_tol) {
        throw NumericalFailure("build_standard_form: rho is not invariant for the built generator");
    }
    return model;
}

QubitModel build_qdb_theta_form(double nu, double lambda, double mu, double eta,
                                double h0, double h3, const Tolerances& tol) {
    tol.validate();
    if (!(nu > 0.0 && nu < 1.0)) {
        throw ConstraintViolated("build_qdb_theta_form: nu must lie in (0, 1)");
    }
    if (lambda < 0.0 || mu < 0.0 || eta < 0.0) {
        throw ConstraintViolated("build_qdb_theta_form: lambda, mu, eta must be nonnegative");
    }
    const double balance = lambda * lambda * (1.0 - nu) - nu * mu * mu;
    if (std::abs(balance) > tol.eq_tol * (1.0 + lambda * lambda + mu * mu)) {
        throw ConstraintViolated("build_qdb_theta_form: lambda^2 (1-nu) = nu mu^2 must hold");
    }

    std::vector<CMat> kraus;
    if (eta > tol.eq_tol) {
        kraus.push_back(eta * ((1.0 - 2.0 * nu) * sigma0() + sigma3()));
    }
    if (lambda > tol.eq_tol) {
        kraus.push_back(lambda * sigma_plus());
    }
    if (mu > tol.eq_tol) {
        kraus.push_back(mu * sigma_minus());
    }

    const CMat h = h0 * sigma0() + h3 * sigma3();
    CMat rho_mat = CMat::Zero(2, 2);
    rho_mat(0, 0) = nu;
    rho_mat(1, 1) = 1.0 - nu;

    QubitModel model{GkslGenerator(h, std::move(kraus), tol), DensityMatrix(rho_mat, tol),
                     TimeReversal::conjugation(2), 0.0, 0.0, {}};
    if (verify_invariance(model.gen, model.rho) > tol.eq_tol) {
        throw NumericalFailure("build_qdb_theta_form: rho is not invariant for the built generator");
    }
    if (!model.gen.kraus().empty() && !is_special(model.gen, model.rho, tol).is_special) {
        throw NumericalFailure("build_qdb_theta_form: built generator is not special");
    }
    return model;
}

QubitParams map_qdb_to_sqdb_params(double nu, double lambda, double mu, double eta,
                                   const Tolerances& tol) {
    tol.validate();
    if (!(nu > 0.0 && nu < 1.0)) {
        throw ConstraintViolated("map_qdb_to_sqdb_params: nu must lie in (0, 1)");
    }
    if (lambda < 0.0 || mu < 0.0 || eta < 0.0) {
        throw ConstraintViolated("map_qdb_to_sqdb_params: lambda, mu, eta must be nonnegative");
    }
    const double balance = lambda * lambda * (1.0 - nu) - nu * mu * mu;
    if (std::abs(balance) > tol.eq_tol * (1.0 + lambda * lambda + mu * mu)) {
        throw ConstraintViolated("map_qdb_to_sqdb_params: lambda^2 (1-nu) = nu mu^2 must hold");
    }

    QubitParams p;
    p.nu = nu;
    p.r1 = eta;
    p.zeta1 = 0.0;
    p.r2 = 0.0;
    p.zeta2 = lambda / (2.0 * std::sqrt(nu));
    p.r3 = mu / (2.0 * std::sqrt(1.0 - nu));
    p.phase3 = std::numbers::pi / 2.0; // the mapping's r3 is purely imaginary
    p.relax_constraints = true;

    const bool has_l1 = eta > tol.eq_tol;
    const bool has_l2 = lambda > tol.eq_tol; // the balance relation ties lambda and mu together
    const bool has_l3 = mu > tol.eq_tol;
    if (has_l1 && has_l2 && has_l3) {
        p.case_tag = QubitCase::E;
    } else if (has_l2 && has_l3) {
        p.case_tag = QubitCase::E; // slots 2,3 active; slot 1 drops in relaxed mode
    } else if (has_l1) {
        p.case_tag = QubitCase::A; // zeta1 = 0 boundary, flagged by the factory
    } else {
        p.case_tag = QubitCase::O;
    }
    return p;
}

} // namespace qdb

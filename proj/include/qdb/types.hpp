// types.hpp — complex dense matrix aliases, tolerances, error types

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace qdb {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr Complex kImag{0.0, 1.0};

// Absolute tolerances on Frobenius-norm residuals. Where a reference operand
// exists, comparisons scale by (1 + ||.||_F); relative-only tolerances
// misbehave near zero matrices at desk scale.
struct Tolerances {
    double eq_tol = 1e-9;        // residual acceptance
    double rank_tol = 1e-10;     // eigenvalue / singular value cutoff
    double faithful_tol = 1e-10; // minimum-eigenvalue threshold for faithful states

    void validate() const {
        if (!(eq_tol > 0.0) || !(rank_tol > 0.0) || !(faithful_tol > 0.0)) {
            throw std::invalid_argument("Tolerances: all fields must be > 0");
        }
    }
};

// ----------------------------- error types ---------------------------------

struct ShapeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotHermitian : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotPositive : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Singular : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Carries the offending state so callers can inspect the witness.
struct NotFaithful : std::runtime_error {
    CMat witness;
    explicit NotFaithful(const std::string& msg, CMat w = CMat())
        : std::runtime_error(msg), witness(std::move(w)) {}
};

struct NoInvariantState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotSpecial : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotInvariant : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ThetaRhoNoncommuting : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CaseConstraintViolated : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConstraintViolated : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace qdb

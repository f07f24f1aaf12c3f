// gram.hpp — Gram matrices of paired vector families and the B*A^-1B = C identity

#pragma once

#include "qdb/types.hpp"

#include <optional>
#include <vector>

namespace qdb {

struct GramTriple {
    CMat a; // a_jk = <xi_j, xi_k>
    CMat b; // b_jk = <xi_j, eta_k>
    CMat c; // c_jk = <eta_j, eta_k>
    // ||B* A^-1 B - C||_F, present when A is invertible. The identity holds
    // when both families independently span the same subspace; it is checked
    // and reported here, not assumed.
    std::optional<double> identity_residual;
    double span_gap = 0.0;
};

GramTriple gram_triple(const std::vector<CVec>& xi, const std::vector<CVec>& eta,
                       const Tolerances& tol = {});

} // namespace qdb

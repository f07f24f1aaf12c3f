// special_form.hpp — normalization to the special GKSL representation

#pragma once

#include "qdb/gksl.hpp"

#include <optional>
#include <vector>

namespace qdb {

struct SpecialFormReport {
    std::vector<double> zero_mean_residuals;  // |tr(rho L_l)| per Kraus operator
    double independence_min_singular = 0.0;   // of the stacked {vec(1), vec(L_l)}
    bool is_special = false;
};

// Conditions: zero means tr(rho L_l) = 0 and joint linear independence of
// {1, L_l}.
SpecialFormReport is_special(const GkslGenerator& gen, const DensityMatrix& rho,
                             const Tolerances& tol = {});

struct MakeSpecialResult {
    GkslGenerator generator;
    std::vector<Complex> gauge_shifts;          // removed means tr(rho L_l)
    std::size_t kraus_before = 0;
    std::size_t kraus_after = 0;
    std::vector<double> borderline_eigenvalues; // in (rank_tol, 10 rank_tol]
};

// Normalizes to a special representation of the same map:
//  (a) gauge-shift each L_l by -tr(rho L_l) with the compensating H shift,
//  (b) re-extract an independent Kraus family from the spectral decomposition
//      of P = sum vec(L_l) vec(L_l)*.
// The output is verified against the input superoperator; a mismatch throws
// NumericalFailure instead of returning a silently wrong generator.
MakeSpecialResult make_special(const GkslGenerator& gen, const DensityMatrix& rho,
                               const Tolerances& tol = {});

struct EquivalenceReport {
    bool equivalent = false;
    double superop_distance = 0.0;
    // Witness (c, u) with H' = H + c and L'_l = sum_j u_lj L_j; recovered when
    // both generators carry equally sized independent Kraus families.
    std::optional<CMat> mixing_unitary;
    std::optional<double> hamiltonian_shift;
    double mixing_residual = 0.0;
    double unitarity_defect = 0.0;
    double shift_residual = 0.0;
};

// True iff the Heisenberg superoperators agree within 10*eq_tol.
EquivalenceReport representation_equivalent(const GkslGenerator& gen1,
                                            const GkslGenerator& gen2,
                                            const Tolerances& tol = {});

} // namespace qdb

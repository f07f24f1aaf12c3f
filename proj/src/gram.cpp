#include "qdb/gram.hpp"

#include "qdb/linalg.hpp"

namespace qdb {

GramTriple gram_triple(const std::vector<CVec>& xi, const std::vector<CVec>& eta,
                       const Tolerances& tol) {
    if (xi.size() != eta.size()) {
        throw ShapeMismatch("gram_triple: families must have equal counts");
    }
    const auto m = static_cast<Eigen::Index>(xi.size());
    if (m == 0) {
        return GramTriple{CMat(0, 0), CMat(0, 0), CMat(0, 0), 0.0, 0.0};
    }
    const Eigen::Index dim = xi.front().size();
    for (const CVec& v : xi) {
        if (v.size() != dim) throw ShapeMismatch("gram_triple: xi ambient dimension mismatch");
    }
    for (const CVec& v : eta) {
        if (v.size() != dim) throw ShapeMismatch("gram_triple: eta ambient dimension mismatch");
    }

    GramTriple out;
    out.a = CMat(m, m);
    out.b = CMat(m, m);
    out.c = CMat(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index k = 0; k < m; ++k) {
            out.a(j, k) = xi[j].dot(xi[k]); // Eigen dot conjugates the left argument
            out.b(j, k) = xi[j].dot(eta[k]);
            out.c(j, k) = eta[j].dot(eta[k]);
        }
    }

    CMat xi_cols(dim, m), eta_cols(dim, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        xi_cols.col(j) = xi[j];
        eta_cols.col(j) = eta[j];
    }
    out.span_gap = projector_gap(xi_cols, eta_cols, tol.rank_tol);

    const HermitianEig eig = hermitian_eig(0.5 * (out.a + out.a.adjoint()), tol);
    if (eig.eigenvalues(m - 1) > tol.rank_tol) {
        const CMat pivot = solve_hpd(0.5 * (out.a + out.a.adjoint()), out.b);
        out.identity_residual = residual((out.b.adjoint() * pivot).eval(), out.c);
    }
    return out;
}

} // namespace qdb

// acceptance.cpp — end-to-end criteria for the toolkit, one pass/fail line each

#include "qdb/balance.hpp"
#include "qdb/duality.hpp"
#include "qdb/gram.hpp"
#include "qdb/invariant.hpp"
#include "qdb/linalg.hpp"
#include "qdb/qubit.hpp"
#include "qdb/special_form.hpp"

#include "test_support.hpp"

#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace qdb;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double superop_distance(const GkslGenerator& a, const GkslGenerator& b) {
    return residual(to_superoperator(a, Picture::Heisenberg).mat,
                    to_superoperator(b, Picture::Heisenberg).mat);
}

double gram_symmetry_defect(const GkslGenerator& gen, const DensityMatrix& rho) {
    const CMat gram = kms_gram(rho);
    const CMat s = to_superoperator(gen, Picture::Heisenberg).mat;
    return residual((gram * s).eval(), (s.adjoint() * gram).eval());
}

// Collected witnesses for criterion 8.
std::vector<CVec> g_theta_spectra;
std::vector<std::pair<double, double>> g_sqdb_unitaries; // (unitarity, t_symmetry)

void collect_theta_witness(const CheckReport& rep) {
    if (rep.verdict && rep.u_theta_spectrum && rep.u_theta_spectrum->size() > 0) {
        g_theta_spectra.push_back(*rep.u_theta_spectrum);
    }
}

void collect_sqdb_witness(const CheckReport& rep) {
    if (rep.verdict && rep.residuals.count("unitarity")) {
        g_sqdb_unitaries.emplace_back(rep.residuals.at("unitarity"),
                                      rep.residuals.at("t_symmetry"));
    }
}

QubitParams random_case_params(std::mt19937& rng, QubitCase tag) {
    std::uniform_real_distribution<double> nus(0.12, 0.42);
    std::uniform_real_distribution<double> mag(0.3, 1.3);
    std::uniform_real_distribution<double> im(0.2, 1.0);
    std::uniform_real_distribution<double> any(-1.0, 1.0);
    QubitParams p;
    p.nu = nus(rng);
    p.case_tag = tag;
    p.v3 = any(rng);
    // positive r and Im zeta keep v1 bounded away from zero for the
    // perturbation probe (no cancellation in sum r_k Im zeta_k)
    p.r1 = mag(rng);
    p.zeta1 = Complex(any(rng), im(rng));
    p.r2 = mag(rng);
    p.zeta2 = Complex(any(rng), im(rng));
    p.r3 = mag(rng);
    p.phase3 = any(rng);
    return p;
}

Outcome criterion1_dual_soundness() {
    std::mt19937 rng(1001);
    double worst_relation = 0.0, worst_double = 0.0;
    int done = 0;
    while (done < 100) {
        const Eigen::Index n = 2 + (done % 3);
        const std::size_t m = 1 + (done % 4);
        const auto drawn = qdbtest::random_special_generator(rng, n, m);
        if (!drawn) {
            return {false, "could not draw a faithful random instance"};
        }
        const auto& [gen, rho] = *drawn;
        const DualPair pair = dual_generator(gen, rho);
        worst_relation = std::max(worst_relation, verify_dual_relation(pair, rho));
        const DualPair twice = dual_generator(pair.dual, rho);
        worst_double = std::max(worst_double, superop_distance(twice.dual, gen));
        ++done;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "100 instances, max dual-relation residual %.2e (<= 1e-9), "
                  "max double-dual distance %.2e (<= 1e-8)",
                  worst_relation, worst_double);
    return {worst_relation <= 1e-9 && worst_double <= 1e-8, buf};
}

Outcome criterion2_structural_oracle_agreement() {
    std::mt19937 rng(1002);
    std::uniform_real_distribution<double> nus(0.15, 0.45);
    std::uniform_real_distribution<double> mag(0.4, 1.2);
    const std::vector<double> grid{0.1, 0.5, 1.0};

    struct Instance {
        GkslGenerator gen;
        DensityMatrix rho;
        TimeReversal theta;
    };
    std::vector<Instance> instances;

    // 25 positives from the two factory routes
    for (int i = 0; i < 25; ++i) {
        if (i % 2 == 0) {
            const QubitCase tag = static_cast<QubitCase>((i / 2) % 6);
            QubitParams p = random_case_params(rng, tag);
            const QubitModel model = build_standard_form(p);
            instances.push_back({model.gen, model.rho, model.theta});
        } else {
            const double nu = nus(rng);
            const double lam = mag(rng);
            const QubitModel model =
                build_qdb_theta_form(nu, lam, lam * std::sqrt((1.0 - nu) / nu),
                                     i % 4 == 1 ? 1.0 : 0.0, mag(rng), mag(rng));
            instances.push_back({model.gen, model.rho, model.theta});
        }
    }
    // 25 negatives: perturbed v1, unbalanced pairs, dissipative cycles
    for (int i = 0; i < 25; ++i) {
        if (i % 3 == 0) {
            QubitParams p = random_case_params(rng, i % 2 ? QubitCase::E : QubitCase::A);
            const QubitModel model = build_standard_form(p);
            const CMat h = model.gen.hamiltonian() + 0.1 * model.v1 * sigma1();
            instances.push_back({GkslGenerator(h, model.gen.kraus()), model.rho, model.theta});
        } else if (i % 3 == 1) {
            const double nu = nus(rng);
            const double lam = mag(rng);
            const double mu = 1.5 * lam * std::sqrt((1.0 - nu) / nu); // breaks the balance
            CMat rho_mat = CMat::Zero(2, 2);
            rho_mat(0, 0) = nu;
            rho_mat(1, 1) = 1.0 - nu;
            instances.push_back({GkslGenerator(CMat::Zero(2, 2),
                                               {lam * sigma_plus(), mu * sigma_minus()}),
                                 DensityMatrix(rho_mat), TimeReversal::conjugation(2)});
        } else {
            CMat l1 = CMat::Zero(3, 3), l2 = CMat::Zero(3, 3), l3 = CMat::Zero(3, 3);
            l1(0, 1) = mag(rng);
            l2(1, 2) = mag(rng);
            l3(2, 0) = mag(rng);
            const GkslGenerator cycle(CMat::Zero(3, 3), {l1, l2, l3});
            instances.push_back({cycle, find_invariant_state(cycle),
                                 TimeReversal::conjugation(3)});
        }
    }

    int theta_agree = 0, kms_agree = 0;
    const Tolerances tol;
    for (const Instance& inst : instances) {
        const CheckReport rep = check_sqdb_theta(inst.gen, inst.rho, inst.theta);
        const double oracle =
            semigroup_oracle(inst.gen, inst.rho, &inst.theta, BalanceCondition::SqdbTheta, grid);
        theta_agree += (rep.verdict == (oracle <= 1e-8));
        collect_theta_witness(rep);

        const CheckReport kms = check_kms_symmetric(inst.gen, inst.rho);
        kms_agree += (kms.verdict == (gram_symmetry_defect(inst.gen, inst.rho) <= tol.eq_tol));
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "sqdb-theta vs semigroup oracle %d/50, kms vs Gram oracle %d/50",
                  theta_agree, kms_agree);
    return {theta_agree == 50 && kms_agree == 50, buf};
}

Outcome criterion3_standard_form_regression() {
    std::mt19937 rng(1003);
    int positives = 0, probes = 0, probe_hits = 0;
    double min_defect = 1e300;
    for (int c = 0; c < 6; ++c) {
        const QubitCase tag = static_cast<QubitCase>(c);
        for (int i = 0; i < 20; ++i) {
            const QubitParams p = random_case_params(rng, tag);
            const QubitModel model = build_standard_form(p);
            const CheckReport rep = check_sqdb_theta(model.gen, model.rho, model.theta);
            positives += rep.verdict;
            collect_theta_witness(rep);

            const bool perturbable = (tag == QubitCase::A || tag == QubitCase::C ||
                                      tag == QubitCase::D || tag == QubitCase::E) &&
                                     std::abs(model.v1) > 0.02;
            if (perturbable) {
                ++probes;
                const CMat h = model.gen.hamiltonian() + 0.1 * model.v1 * sigma1();
                const GkslGenerator off(h, model.gen.kraus());
                const CheckReport bad = check_sqdb_theta(off, model.rho, model.theta);
                const double defect = bad.residuals.at("g_condition");
                min_defect = std::min(min_defect, defect);
                probe_hits += (!bad.verdict && defect > 1e-6);
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%d/120 case draws pass; %d/%d v1 probes fail via g-condition (min defect %.2e)",
                  positives, probe_hits, probes, min_defect);
    return {positives == 120 && probes > 0 && probe_hits == probes, buf};
}

Outcome criterion4_discrimination_fixture() {
    const GkslGenerator gen(sigma3(), {sigma1()});
    const DensityMatrix rho((0.5 * CMat::Identity(2, 2)).eval());
    const TimeReversal theta = TimeReversal::conjugation(2);

    const CheckReport kms = check_kms_symmetric(gen, rho);
    const CheckReport sqdb = check_sqdb(gen, rho);
    const CheckReport both = check_sqdb_theta(gen, rho, theta);
    collect_theta_witness(both);
    collect_sqdb_witness(sqdb);

    bool ok = !kms.verdict && sqdb.verdict && both.verdict;
    ok = ok && std::abs((*sqdb.matching_unitary)(0, 0) - Complex(1.0)) <= 1e-9;
    ok = ok && std::abs((*both.matching_unitary)(0, 0) - Complex(1.0)) <= 1e-9;
    // K proportional to sigma3
    ok = ok && sqdb.k_witness.has_value();
    if (ok) {
        const CMat& k = *sqdb.k_witness;
        const Complex scale = k(0, 0);
        ok = residual(k, (scale * sigma3()).eval()) <= 1e-9 && std::abs(scale) > 1e-3;
    }
    return {ok, "kms=false, sqdb=true, sqdb-theta=true, U = U_theta = (1), K prop. sigma3"};
}

Outcome criterion5_qdb_theta_embedding() {
    std::mt19937 rng(1005);
    std::uniform_real_distribution<double> nus(0.1, 0.9);
    std::uniform_real_distribution<double> mag(0.3, 1.5);
    std::uniform_real_distribution<double> any(-1.0, 1.0);
    double worst = 0.0;
    int pass = 0;
    for (int i = 0; i < 20; ++i) {
        const double nu = nus(rng);
        const double lam = mag(rng);
        const double mu = lam * std::sqrt((1.0 - nu) / nu);
        const double eta = (i % 2 == 0) ? 1.0 : 0.0;
        const double h0 = any(rng), h3 = any(rng);

        const QubitModel direct = build_qdb_theta_form(nu, lam, mu, eta, h0, h3);
        QubitParams p = map_qdb_to_sqdb_params(nu, lam, mu, eta);
        p.v3 = h3;
        const QubitModel mapped = build_standard_form(p);

        worst = std::max(worst, superop_distance(direct.gen, mapped.gen));
        const CheckReport a = check_sqdb_theta(direct.gen, direct.rho, direct.theta);
        const CheckReport b = check_sqdb_theta(mapped.gen, mapped.rho, mapped.theta);
        collect_theta_witness(a);
        collect_theta_witness(b);
        pass += (a.verdict && b.verdict &&
                 superop_distance(direct.gen, mapped.gen) <= 1e-8);
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d/20 draws match (max superoperator distance %.2e)",
                  pass, worst);
    return {pass == 20, buf};
}

Outcome criterion6_gram_identity() {
    std::mt19937 rng(1006);
    std::uniform_int_distribution<int> ms(1, 4);
    std::uniform_int_distribution<int> dims(4, 8);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int m = ms(rng);
        const int dim = std::max(dims(rng), m);
        std::vector<CVec> xi, eta;
        const CMat basis = qdbtest::random_matrix(rng, dim, m);
        const CMat mix = qdbtest::random_matrix(rng, m, m) + 2.0 * CMat::Identity(m, m);
        for (int k = 0; k < m; ++k) {
            xi.push_back(basis.col(k));
            eta.push_back(basis * mix.col(k));
        }
        const GramTriple g = gram_triple(xi, eta);
        if (!g.identity_residual) {
            return {false, "Gram matrix A unexpectedly singular"};
        }
        worst = std::max(worst, *g.identity_residual);
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "100 families, max ||B*A^-1B - C|| = %.2e (<= 1e-9)", worst);
    return {worst <= 1e-9, buf};
}

Outcome criterion7_gauge_invariance() {
    std::mt19937 rng(1007);
    std::uniform_real_distribution<double> nus(0.15, 0.45);
    std::uniform_real_distribution<double> mag(0.4, 1.4);
    std::uniform_real_distribution<double> any(-1.5, 1.5);
    int flips = 0, trues = 0;
    for (int i = 0; i < 50; ++i) {
        GkslGenerator gen(CMat::Zero(2, 2), {});
        DensityMatrix rho((0.5 * CMat::Identity(2, 2)).eval());
        if (i % 3 == 0) {
            // detailed-balance positives
            const double nu = nus(rng);
            const double lam = mag(rng);
            const QubitModel model = build_qdb_theta_form(
                nu, lam, lam * std::sqrt((1.0 - nu) / nu), 0.0, any(rng), any(rng));
            gen = model.gen;
            rho = model.rho;
        } else {
            const Eigen::Index n = 2 + (i % 2);
            const auto drawn = qdbtest::random_special_generator(rng, n, 1 + i % 3);
            if (!drawn) {
                return {false, "could not draw a faithful random instance"};
            }
            gen = drawn->first;
            rho = drawn->second;
        }

        const CheckReport base = check_sqdb(gen, rho);
        trues += base.verdict;
        collect_sqdb_witness(base);

        // unitary mixing of the Kraus family
        const auto m = static_cast<Eigen::Index>(gen.kraus_count());
        if (m > 0) {
            const CMat w = qdbtest::random_unitary(rng, m);
            std::vector<CMat> mixed(m, CMat::Zero(gen.dim(), gen.dim()));
            for (Eigen::Index k = 0; k < m; ++k) {
                for (Eigen::Index j = 0; j < m; ++j) {
                    mixed[k] += w(k, j) * gen.kraus()[j];
                }
            }
            flips += (check_sqdb(GkslGenerator(gen.hamiltonian(), mixed), rho).verdict !=
                      base.verdict);
        }

        // rho-commuting Hamiltonian replacement
        RVec diag(rho.dim());
        for (Eigen::Index k = 0; k < rho.dim(); ++k) {
            diag(k) = any(rng);
        }
        const CMat h2 = rho.eigenvectors() *
                        diag.cast<Complex>().asDiagonal() *
                        rho.eigenvectors().adjoint();
        flips += (check_sqdb(GkslGenerator(h2, gen.kraus()), rho).verdict != base.verdict);
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "0 flips required, %d observed (%d SQDB-true instances)",
                  flips, trues);
    return {flips == 0 && trues > 0, buf};
}

Outcome criterion8_spectral_witness() {
    double worst_spectrum = 0.0;
    for (const CVec& spectrum : g_theta_spectra) {
        for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
            const Complex lam = spectrum(i);
            worst_spectrum = std::max(worst_spectrum,
                                      std::min(std::abs(lam - 1.0), std::abs(lam + 1.0)));
        }
    }
    double worst_unitarity = 0.0;
    for (const auto& [unitarity, t_symmetry] : g_sqdb_unitaries) {
        worst_unitarity = std::max(worst_unitarity, std::max(unitarity, t_symmetry));
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "%zu theta spectra within %.2e of {-1,+1} (<= 1e-8); "
                  "%zu SQDB unitaries within %.2e of unitary T-symmetric (<= 1e-9)",
                  g_theta_spectra.size(), worst_spectrum, g_sqdb_unitaries.size(),
                  worst_unitarity);
    return {!g_theta_spectra.empty() && !g_sqdb_unitaries.empty() &&
                worst_spectrum <= 1e-8 && worst_unitarity <= 1e-9,
            buf};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"dual soundness", criterion1_dual_soundness},
        {"structural/oracle agreement", criterion2_structural_oracle_agreement},
        {"qubit standard-form regression", criterion3_standard_form_regression},
        {"discrimination fixture", criterion4_discrimination_fixture},
        {"detailed-balance embedding", criterion5_qdb_theta_embedding},
        {"Gram identity", criterion6_gram_identity},
        {"gauge/representation invariance", criterion7_gauge_invariance},
        {"spectral witness", criterion8_spectral_witness},
    };

    int failures = 0;
    int index = 1;
    for (const auto& [name, fn] : criteria) {
        Outcome out;
        try {
            out = fn();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] criterion %d: %s — %s\n", out.pass ? "PASS" : "FAIL", index,
                    name.c_str(), out.detail.c_str());
        failures += !out.pass;
        ++index;
    }
    return failures == 0 ? 0 : 1;
}

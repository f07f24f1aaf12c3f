#include "qdb/cli.hpp"

#include "qdb/balance.hpp"
#include "qdb/duality.hpp"
#include "qdb/invariant.hpp"
#include "qdb/linalg.hpp"
#include "qdb/problem_io.hpp"
#include "qdb/qubit.hpp"
#include "qdb/special_form.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

namespace qdb::cli {

using nlohmann::json;

namespace {

std::string join_args(const std::vector<std::string>& args) {
    std::string out = "qdb";
    for (const auto& a : args) {
        out += " " + a;
    }
    return out;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConstraintViolated("cannot write output file: " + path);
    }
    out << j.dump(2) << "\n";
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& e, const char* what) {
    if (e.is_number()) {
        return Complex(e.get<double>(), 0.0);
    }
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        return Complex(e[0].get<double>(), e[1].get<double>());
    }
    throw ConstraintViolated(std::string(what) + ": expected a number or an [re, im] pair");
}

json report_to_json(const CheckReport& rep) {
    json j;
    j["verdict"] = rep.verdict;
    json res;
    for (const auto& [name, value] : rep.residuals) {
        res[name] = value;
    }
    j["residuals"] = std::move(res);
    if (rep.matching_unitary) j["matching_unitary"] = matrix_to_json(*rep.matching_unitary);
    if (rep.c_scalar) j["c"] = *rep.c_scalar;
    if (rep.k_witness) j["K"] = matrix_to_json(*rep.k_witness);
    if (rep.u_theta_spectrum) {
        json spectrum = json::array();
        for (Eigen::Index i = 0; i < rep.u_theta_spectrum->size(); ++i) {
            spectrum.push_back(complex_to_json((*rep.u_theta_spectrum)(i)));
        }
        j["u_theta_spectrum"] = std::move(spectrum);
    }
    return j;
}

void print_check_line(const std::string& name, const CheckReport& rep) {
    std::cout << name << ": " << (rep.verdict ? "PASS" : "FAIL");
    double worst = 0.0;
    std::string worst_name;
    for (const auto& [rname, value] : rep.residuals) {
        if (value >= worst) {
            worst = value;
            worst_name = rname;
        }
    }
    if (!worst_name.empty()) {
        std::cout << "  (max residual " << worst_name << " = " << worst << ")";
    }
    std::cout << "\n";
}

// Problem file -> generator, state, time reversal, normalization log.
struct Context {
    GkslGenerator gen;
    DensityMatrix rho;
    TimeReversal theta;
    json normalization;
};

Context prepare(const ProblemFile& pf, bool strict, bool normalize) {
    GkslGenerator raw = pf.generator();
    DensityMatrix rho = pf.rho ? DensityMatrix(*pf.rho, pf.tolerances)
                               : find_invariant_state(raw, pf.tolerances);
    TimeReversal theta = pf.time_reversal();

    json log;
    const SpecialFormReport rep = is_special(raw, rho, pf.tolerances);
    log["was_special"] = rep.is_special;
    if (rep.is_special || !normalize) {
        if (!rep.is_special && strict) {
            throw NotSpecial("input generator is not special (strict mode)");
        }
        log["kraus_before"] = raw.kraus_count();
        log["kraus_after"] = raw.kraus_count();
        return Context{std::move(raw), std::move(rho), std::move(theta), std::move(log)};
    }
    if (strict) {
        throw NotSpecial("input generator is not special (strict mode)");
    }
    MakeSpecialResult normalized = make_special(raw, rho, pf.tolerances);
    json shifts = json::array();
    for (const Complex& c : normalized.gauge_shifts) {
        shifts.push_back(complex_to_json(c));
    }
    log["gauge_shifts"] = std::move(shifts);
    log["kraus_before"] = normalized.kraus_before;
    log["kraus_after"] = normalized.kraus_after;
    return Context{std::move(normalized.generator), std::move(rho), std::move(theta), std::move(log)};
}

ProblemFile problem_from_model(const QubitModel& model) {
    ProblemFile out;
    out.dim = 2;
    out.h = model.gen.hamiltonian();
    out.kraus = model.gen.kraus();
    out.rho = model.rho.rho();
    return out;
}

int emit_problem(const ProblemFile& out, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << problem_to_json(out).dump(2) << "\n";
    } else {
        save_problem(out, out_path);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

struct CheckOptions {
    std::string which;
    std::string file;
    std::string out_path;
    bool strict = false;
    std::optional<double> tol_override;
};

int run_check(const CheckOptions& opt, const std::string& command_echo) {
    const auto started = std::chrono::steady_clock::now();
    ProblemFile pf = load_problem(opt.file);
    if (opt.tol_override) {
        pf.tolerances.eq_tol = *opt.tol_override;
        pf.tolerances.validate();
    }
    Context ctx = prepare(pf, opt.strict, true);

    json report;
    report["command"] = command_echo;
    report["normalization"] = ctx.normalization;
    report["rho"] = matrix_to_json(ctx.rho.rho());

    bool all_pass = true;
    json verdicts;
    const bool want_kms = opt.which == "kms" || opt.which == "all";
    const bool want_sqdb = opt.which == "sqdb" || opt.which == "all";
    const bool want_theta = opt.which == "sqdb-theta" || opt.which == "all";

    if (want_kms) {
        const CheckReport rep = check_kms_symmetric(ctx.gen, ctx.rho, pf.tolerances);
        print_check_line("kms", rep);
        verdicts["kms"] = report_to_json(rep);
        all_pass = all_pass && rep.verdict;
    }
    if (want_sqdb) {
        const CheckReport rep = check_sqdb(ctx.gen, ctx.rho, pf.tolerances);
        print_check_line("sqdb", rep);
        verdicts["sqdb"] = report_to_json(rep);
        all_pass = all_pass && rep.verdict;
    }
    if (want_theta) {
        const CheckReport rep = check_sqdb_theta(ctx.gen, ctx.rho, ctx.theta, pf.tolerances);
        print_check_line("sqdb-theta", rep);
        verdicts["sqdb-theta"] = report_to_json(rep);
        all_pass = all_pass && rep.verdict;
    }
    report["verdicts"] = std::move(verdicts);

    const auto elapsed = std::chrono::duration<double, std::milli>(
        std::chrono::steady_clock::now() - started);
    report["elapsed_ms"] = elapsed.count();
    if (!opt.out_path.empty()) {
        write_json(report, opt.out_path);
    }
    return all_pass ? 0 : 1;
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"GKSL generator toolkit: special form, KMS duals, detailed balance checks"};
    app.require_subcommand(1);

    // normalize
    auto* normalize = app.add_subcommand("normalize", "rewrite a problem in special form");
    std::string norm_file, norm_out;
    normalize->add_option("file", norm_file, "problem file")->required();
    normalize->add_option("--out", norm_out, "output problem file");

    // invariant-state
    auto* inv = app.add_subcommand("invariant-state", "find a faithful invariant state");
    std::string inv_file, inv_out;
    inv->add_option("file", inv_file, "problem file")->required();
    inv->add_option("--out", inv_out, "output report file");

    // dualize
    auto* dual = app.add_subcommand("dualize", "construct the KMS-dual generator");
    std::string dual_file, dual_out;
    dual->add_option("file", dual_file, "problem file")->required();
    dual->add_option("--out", dual_out, "output problem file");

    // check
    auto* check = app.add_subcommand("check", "run detailed balance checks");
    CheckOptions copt;
    double tol_value = 0.0;
    check->add_option("which", copt.which, "kms|sqdb|sqdb-theta|all")
        ->required()
        ->check(CLI::IsMember({"kms", "sqdb", "sqdb-theta", "all"}));
    check->add_option("file", copt.file, "problem file")->required();
    check->add_option("--out", copt.out_path, "output report file");
    check->add_flag("--strict", copt.strict, "error on non-special input instead of normalizing");
    auto* tol_opt = check->add_option("--tol", tol_value, "override eq_tol");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "semigroup-level trace-identity oracle");
    std::string oracle_file, oracle_cond, oracle_out;
    std::vector<double> oracle_t{0.1, 0.5, 1.0};
    double oracle_threshold = 1e-8;
    oracle->add_option("file", oracle_file, "problem file")->required();
    oracle->add_option("--condition", oracle_cond, "kms|sqdb-theta")
        ->required()
        ->check(CLI::IsMember({"kms", "sqdb-theta"}));
    oracle->add_option("--t", oracle_t, "time grid")->delimiter(',');
    oracle->add_option("--threshold", oracle_threshold, "pass threshold (default 1e-8)");
    oracle->add_option("--out", oracle_out, "output report file");

    // evolve
    auto* evolve_cmd = app.add_subcommand("evolve", "apply the semigroup to a matrix");
    std::string evolve_file, evolve_x, evolve_out, evolve_picture = "heisenberg";
    double evolve_t = 0.0;
    evolve_cmd->add_option("file", evolve_file, "problem file")->required();
    evolve_cmd->add_option("--t", evolve_t, "time")->required();
    evolve_cmd->add_option("--x", evolve_x, "JSON file holding the matrix")->required();
    evolve_cmd->add_option("--picture", evolve_picture, "heisenberg|schrodinger")
        ->check(CLI::IsMember({"heisenberg", "schrodinger"}));
    evolve_cmd->add_option("--out", evolve_out, "output report file");

    // qubit
    auto* qubit = app.add_subcommand("qubit", "emit a standard-form qubit problem");
    std::string qubit_case, qubit_params, qubit_out;
    qubit->add_option("--case", qubit_case, "o|a|b|c|d|e")
        ->required()
        ->check(CLI::IsMember({"o", "a", "b", "c", "d", "e"}));
    qubit->add_option("--params", qubit_params, "JSON parameter file")->required();
    qubit->add_option("--out", qubit_out, "output problem file");

    // qubit-qdb
    auto* qdbsub = app.add_subcommand("qubit-qdb", "emit the detailed-balance qubit problem");
    double q_nu = 0.0, q_lam = 0.0, q_mu = 0.0, q_eta = 0.0, q_h0 = 0.0, q_h3 = 0.0;
    std::string qdb_out;
    qdbsub->add_option("--nu", q_nu)->required();
    qdbsub->add_option("--lambda", q_lam)->required();
    qdbsub->add_option("--mu", q_mu)->required();
    qdbsub->add_option("--eta", q_eta)->required();
    qdbsub->add_option("--h0", q_h0);
    qdbsub->add_option("--h3", q_h3);
    qdbsub->add_option("--out", qdb_out, "output problem file");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("qdb");
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (normalize->parsed()) {
        ProblemFile pf = load_problem(norm_file);
        GkslGenerator raw = pf.generator();
        DensityMatrix rho = pf.rho ? DensityMatrix(*pf.rho, pf.tolerances)
                                   : find_invariant_state(raw, pf.tolerances);
        MakeSpecialResult result = make_special(raw, rho, pf.tolerances);
        std::cout << "kraus " << result.kraus_before << " -> " << result.kraus_after
                  << ", removed means:";
        for (const Complex& c : result.gauge_shifts) {
            std::cout << " (" << c.real() << "," << c.imag() << ")";
        }
        std::cout << "\n";
        ProblemFile out;
        out.dim = pf.dim;
        out.h = result.generator.hamiltonian();
        out.kraus = result.generator.kraus();
        out.rho = rho.rho();
        out.theta_u = pf.theta_u;
        out.tolerances = pf.tolerances;
        return emit_problem(out, norm_out);
    }

    if (inv->parsed()) {
        ProblemFile pf = load_problem(inv_file);
        const DensityMatrix rho = find_invariant_state(pf.generator(), pf.tolerances);
        const double resid = verify_invariance(pf.generator(), rho);
        std::cout << "invariant state (residual " << resid << "):\n"
                  << rho.rho().format(Eigen::IOFormat(Eigen::StreamPrecision, 0, " ", "\n")) << "\n";
        if (!inv_out.empty()) {
            json out{{"rho", matrix_to_json(rho.rho())}, {"residual", resid}};
            write_json(out, inv_out);
        }
        return 0;
    }

    if (dual->parsed()) {
        ProblemFile pf = load_problem(dual_file);
        Context ctx = prepare(pf, false, true);
        const DualPair pair = dual_generator(ctx.gen, ctx.rho, pf.tolerances);
        std::cout << "dual relation residual: " << verify_dual_relation(pair, ctx.rho) << "\n";
        ProblemFile out;
        out.dim = pf.dim;
        out.h = pair.dual.hamiltonian();
        out.kraus = pair.dual.kraus();
        out.rho = ctx.rho.rho();
        out.theta_u = pf.theta_u;
        out.tolerances = pf.tolerances;
        return emit_problem(out, dual_out);
    }

    if (check->parsed()) {
        if (tol_opt->count() > 0) {
            copt.tol_override = tol_value;
        }
        return run_check(copt, join_args(args));
    }

    if (oracle->parsed()) {
        ProblemFile pf = load_problem(oracle_file);
        GkslGenerator gen = pf.generator();
        DensityMatrix rho = pf.rho ? DensityMatrix(*pf.rho, pf.tolerances)
                                   : find_invariant_state(gen, pf.tolerances);
        TimeReversal theta = pf.time_reversal();
        const BalanceCondition cond = oracle_cond == "kms" ? BalanceCondition::Kms
                                                           : BalanceCondition::SqdbTheta;
        const double resid = semigroup_oracle(gen, rho,
                                              cond == BalanceCondition::SqdbTheta ? &theta : nullptr,
                                              cond, oracle_t, pf.tolerances);
        const bool pass = resid <= oracle_threshold;
        std::cout << "oracle " << oracle_cond << ": " << (pass ? "PASS" : "FAIL")
                  << " (max defect " << resid << ", threshold " << oracle_threshold << ")\n";
        if (!oracle_out.empty()) {
            json out{{"command", join_args(args)},
                     {"condition", oracle_cond},
                     {"max_defect", resid},
                     {"threshold", oracle_threshold},
                     {"pass", pass}};
            write_json(out, oracle_out);
        }
        return pass ? 0 : 1;
    }

    if (evolve_cmd->parsed()) {
        ProblemFile pf = load_problem(evolve_file);
        std::ifstream xin(evolve_x);
        if (!xin) {
            throw ConstraintViolated("cannot open matrix file: " + evolve_x);
        }
        json xj;
        xin >> xj;
        const CMat x = matrix_from_json(xj.contains("x") ? xj["x"] : xj, "x");
        const Picture picture = evolve_picture == "heisenberg" ? Picture::Heisenberg
                                                               : Picture::Schrodinger;
        const CMat result = evolve(pf.generator(), x, evolve_t, picture);
        std::cout << result.format(Eigen::IOFormat(Eigen::StreamPrecision, 0, " ", "\n")) << "\n";
        if (!evolve_out.empty()) {
            write_json(json{{"x_t", matrix_to_json(result)}}, evolve_out);
        }
        return 0;
    }

    if (qubit->parsed()) {
        std::ifstream pin(qubit_params);
        if (!pin) {
            throw ConstraintViolated("cannot open parameter file: " + qubit_params);
        }
        json pj;
        pin >> pj;
        QubitParams qp;
        qp.nu = pj.value("nu", 0.5);
        qp.r1 = pj.value("r1", 0.0);
        qp.r2 = pj.value("r2", 0.0);
        if (pj.contains("zeta1")) {
            qp.zeta1 = complex_from_json(pj["zeta1"], "zeta1");
        }
        if (pj.contains("zeta2")) {
            qp.zeta2 = complex_from_json(pj["zeta2"], "zeta2");
        }
        qp.r3 = pj.value("r3", 0.0);
        qp.phase3 = pj.value("phase3", 0.0);
        qp.v3 = pj.value("v3", 0.0);
        qp.v1_free = pj.value("v1", 0.0);
        const std::string tags = "oabcde";
        qp.case_tag = static_cast<QubitCase>(tags.find(qubit_case[0]));
        const QubitModel model = build_standard_form(qp);
        for (const std::string& note : model.notes) {
            std::cout << "note: " << note << "\n";
        }
        return emit_problem(problem_from_model(model), qubit_out);
    }

    if (qdbsub->parsed()) {
        const QubitModel model = build_qdb_theta_form(q_nu, q_lam, q_mu, q_eta, q_h0, q_h3);
        return emit_problem(problem_from_model(model), qdb_out);
    }

    return 2;
}

int fail(const char* kind, const std::exception& e) {
    std::cerr << "error: " << kind << ": " << e.what() << "\n";
    return 2;
}

} // namespace

int run(const std::vector<std::string>& args) {
    try {
        return dispatch(args);
    } catch (const ShapeMismatch& e) {
        return fail("ShapeMismatch", e);
    } catch (const NotHermitian& e) {
        return fail("NotHermitian", e);
    } catch (const NotPositive& e) {
        return fail("NotPositive", e);
    } catch (const Singular& e) {
        return fail("Singular", e);
    } catch (const NotFaithful& e) {
        return fail("NotFaithful", e);
    } catch (const NoInvariantState& e) {
        return fail("NoInvariantState", e);
    } catch (const NotSpecial& e) {
        return fail("NotSpecial", e);
    } catch (const NotInvariant& e) {
        return fail("NotInvariant", e);
    } catch (const ThetaRhoNoncommuting& e) {
        return fail("ThetaRhoNoncommuting", e);
    } catch (const CaseConstraintViolated& e) {
        return fail("CaseConstraintViolated", e);
    } catch (const ConstraintViolated& e) {
        return fail("ConstraintViolated", e);
    } catch (const NumericalFailure& e) {
        return fail("NumericalFailure", e);
    } catch (const std::exception& e) {
        return fail("Error", e);
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args);
}

} // namespace qdb::cli

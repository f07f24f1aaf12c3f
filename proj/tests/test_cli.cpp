#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qdb/cli.hpp"
#include "qdb/linalg.hpp"
#include "qdb/problem_io.hpp"
#include "qdb/qubit.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>

using namespace qdb;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qdb_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_fixture_problem(const std::string& path) {
    ProblemFile pf;
    pf.dim = 2;
    pf.h = sigma3();
    pf.kraus = {sigma1()};
    pf.rho = 0.5 * CMat::Identity(2, 2);
    save_problem(pf, path);
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

} // namespace

TEST_CASE("check subcommand on the discrimination fixture") {
    TempDir dir;
    const std::string problem = dir.file("fixture.json");
    const std::string report = dir.file("report.json");
    write_fixture_problem(problem);

    const int code = cli::run({"check", "all", problem, "--out", report});
    CHECK(code == 1); // kms fails

    const json rep = read_json(report);
    CHECK(rep["verdicts"]["kms"]["verdict"] == false);
    CHECK(rep["verdicts"]["sqdb"]["verdict"] == true);
    CHECK(rep["verdicts"]["sqdb-theta"]["verdict"] == true);
    CHECK(rep["normalization"]["was_special"] == true);
    CHECK(rep.contains("elapsed_ms"));

    // single checks exit by their own verdict
    CHECK(cli::run({"check", "kms", problem}) == 1);
    CHECK(cli::run({"check", "sqdb", problem}) == 0);
    CHECK(cli::run({"check", "sqdb-theta", problem}) == 0);
}

TEST_CASE("qubit factories through the CLI") {
    TempDir dir;

    SUBCASE("qubit-qdb emits a problem that passes sqdb-theta") {
        const std::string problem = dir.file("qdb.json");
        char mu[32];
        std::snprintf(mu, sizeof(mu), "%.17g", std::sqrt(3.0));
        const int code = cli::run({"qubit-qdb", "--nu", "0.25", "--lambda", "1.0", "--mu",
                                   mu, "--eta", "1.0", "--h3", "0.2", "--out", problem});
        REQUIRE(code == 0);
        CHECK(cli::run({"check", "sqdb-theta", problem}) == 0);
        CHECK(cli::run({"check", "kms", problem}) == 1);
    }

    SUBCASE("qubit --case e emits a problem that passes sqdb-theta") {
        const std::string params = dir.file("params.json");
        {
            std::ofstream out(params);
            out << R"({"nu": 0.25, "r1": 1.0, "zeta1": [0.3, 0.2], "r2": 0.5,
                       "zeta2": [0.0, -0.7], "r3": 0.9, "v3": 0.0})";
        }
        const std::string problem = dir.file("case_e.json");
        REQUIRE(cli::run({"qubit", "--case", "e", "--params", params, "--out", problem}) == 0);
        CHECK(cli::run({"check", "sqdb-theta", problem}) == 0);
    }

    SUBCASE("constraint violations exit 2") {
        CHECK(cli::run({"qubit-qdb", "--nu", "0.25", "--lambda", "1", "--mu", "1", "--eta",
                        "0"}) == 2);
    }
}

TEST_CASE("incompatible theta is a configuration error") {
    TempDir dir;
    const std::string problem = dir.file("skewed.json");
    ProblemFile pf;
    pf.dim = 2;
    pf.kraus = {sigma1()};
    pf.rho = 0.5 * CMat::Identity(2, 2) + 0.25 * sigma2();
    save_problem(pf, problem);
    CHECK(cli::run({"check", "sqdb-theta", problem}) == 2);
}

TEST_CASE("normalize round trip preserves verdicts") {
    TempDir dir;
    const std::string problem = dir.file("offset.json");
    const std::string normalized = dir.file("normalized.json");
    ProblemFile pf;
    pf.dim = 2;
    pf.h = sigma3();
    pf.kraus = {(sigma1() + CMat::Identity(2, 2)).eval()};
    pf.rho = 0.5 * CMat::Identity(2, 2);
    save_problem(pf, problem);

    REQUIRE(cli::run({"normalize", problem, "--out", normalized}) == 0);

    const std::string r1 = dir.file("r1.json"), r2 = dir.file("r2.json");
    const int c1 = cli::run({"check", "all", problem, "--out", r1});
    const int c2 = cli::run({"check", "all", normalized, "--out", r2});
    CHECK(c1 == c2);
    const json j1 = read_json(r1), j2 = read_json(r2);
    for (const char* which : {"kms", "sqdb", "sqdb-theta"}) {
        CHECK(j1["verdicts"][which]["verdict"] == j2["verdicts"][which]["verdict"]);
    }
    CHECK(j2["normalization"]["was_special"] == true);

    SUBCASE("strict mode rejects the non-special input") {
        CHECK(cli::run({"check", "all", problem, "--strict"}) == 2);
        CHECK(cli::run({"check", "all", normalized, "--strict"}) == c2);
    }
}

TEST_CASE("dualize, invariant-state, oracle and evolve subcommands") {
    TempDir dir;
    const std::string problem = dir.file("fixture.json");
    write_fixture_problem(problem);

    SUBCASE("dualize emits the dual problem") {
        const std::string dualized = dir.file("dual.json");
        REQUIRE(cli::run({"dualize", problem, "--out", dualized}) == 0);
        const ProblemFile dual = load_problem(dualized);
        REQUIRE(dual.h.has_value());
        CHECK(residual(*dual.h, (-sigma3()).eval()) <= 1e-9);
    }

    SUBCASE("invariant-state solves when rho is omitted") {
        const std::string no_rho = dir.file("no_rho.json");
        ProblemFile pf;
        pf.dim = 2;
        pf.kraus = {sigma1()};
        save_problem(pf, no_rho);
        const std::string out = dir.file("state.json");
        REQUIRE(cli::run({"invariant-state", no_rho, "--out", out}) == 0);
        const json j = read_json(out);
        CHECK(j["residual"].get<double>() <= 1e-9);
        CHECK(j["rho"][0][0][0].get<double>() == doctest::Approx(0.5));
    }

    SUBCASE("oracle passes sqdb-theta and fails kms on the fixture") {
        CHECK(cli::run({"oracle", problem, "--condition", "sqdb-theta"}) == 0);
        CHECK(cli::run({"oracle", problem, "--condition", "kms", "--t", "0.5"}) == 1);
    }

    SUBCASE("evolve applies the semigroup") {
        const std::string xfile = dir.file("x.json");
        {
            std::ofstream out(xfile);
            out << json(matrix_to_json(sigma3())).dump();
        }
        const std::string out = dir.file("evolved.json");
        // pure sigma1 channel for a clean closed form
        const std::string channel = dir.file("channel.json");
        ProblemFile pf;
        pf.dim = 2;
        pf.kraus = {sigma1()};
        pf.rho = 0.5 * CMat::Identity(2, 2);
        save_problem(pf, channel);
        REQUIRE(cli::run({"evolve", channel, "--t", "0.5", "--x", xfile, "--out", out}) == 0);
        const json j = read_json(out);
        const CMat evolved = matrix_from_json(j["x_t"], "x_t");
        CHECK(residual(evolved, (std::exp(-1.0) * sigma3()).eval()) <= 1e-9);
    }
}

TEST_CASE("reports are deterministic") {
    TempDir dir;
    const std::string problem = dir.file("fixture.json");
    write_fixture_problem(problem);
    const std::string r1 = dir.file("r1.json"), r2 = dir.file("r2.json");
    CHECK(cli::run({"check", "all", problem, "--out", r1}) ==
          cli::run({"check", "all", problem, "--out", r2}));
    json j1 = read_json(r1), j2 = read_json(r2);
    // the command echo differs by the --out argument itself
    for (const char* volatile_field : {"elapsed_ms", "command"}) {
        j1.erase(volatile_field);
        j2.erase(volatile_field);
    }
    CHECK(j1 == j2);
}

TEST_CASE("configuration errors exit 2") {
    TempDir dir;
    CHECK(cli::run({"check", "all", dir.file("missing.json")}) == 2);

    const std::string bad = dir.file("bad.json");
    {
        std::ofstream out(bad);
        out << "{\"dim\": 0}";
    }
    CHECK(cli::run({"check", "all", bad}) == 2);

    const std::string both = dir.file("both.json");
    {
        std::ofstream out(both);
        out << R"({"dim": 1, "H": [[0]], "G": [[0]], "L": []})";
    }
    CHECK(cli::run({"check", "all", both}) == 2);

    // pure amplitude damping has no faithful invariant state
    const std::string damping = dir.file("damping.json");
    ProblemFile pf;
    pf.dim = 2;
    pf.kraus = {sigma_minus()};
    save_problem(pf, damping);
    CHECK(cli::run({"invariant-state", damping}) == 2);
    CHECK(cli::run({"check", "all", damping}) == 2);
}

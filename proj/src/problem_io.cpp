#include "qdb/problem_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace qdb {

using nlohmann::json;

json matrix_to_json(const CMat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

Complex entry_from_json(const json& e, const char* what) {
    if (e.is_number()) {
        return Complex(e.get<double>(), 0.0);
    }
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        return Complex(e[0].get<double>(), e[1].get<double>());
    }
    throw ConstraintViolated(std::string(what) + ": entries must be numbers or [re, im] pairs");
}

} // namespace

CMat matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) {
        throw ConstraintViolated(std::string(what) + ": expected a non-empty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols) {
            throw ShapeMismatch(std::string(what) + ": ragged matrix rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(i, c) = entry_from_json(j[i][c], what);
        }
    }
    return m;
}

GkslGenerator ProblemFile::generator() const {
    if (h && g) {
        throw ConstraintViolated("problem: provide at most one of H and G");
    }
    if (g) {
        return GkslGenerator::from_g(*g, kraus, tolerances);
    }
    const CMat ham = h ? *h : CMat::Zero(dim, dim).eval();
    return GkslGenerator(ham, kraus, tolerances);
}

TimeReversal ProblemFile::time_reversal() const {
    if (theta_u) {
        return TimeReversal(*theta_u, tolerances);
    }
    return TimeReversal::conjugation(dim);
}

ProblemFile problem_from_json(const json& j) {
    ProblemFile p;
    if (!j.contains("dim") || !j["dim"].is_number_integer()) {
        throw ConstraintViolated("problem: missing integer field 'dim'");
    }
    p.dim = j["dim"].get<Eigen::Index>();
    if (p.dim < 1) {
        throw ConstraintViolated("problem: dim must be >= 1");
    }

    auto check_square = [&](const CMat& m, const char* what) {
        if (m.rows() != p.dim || m.cols() != p.dim) {
            throw ShapeMismatch(std::string(what) + ": expected a dim x dim matrix");
        }
    };

    if (j.contains("H")) {
        p.h = matrix_from_json(j["H"], "H");
        check_square(*p.h, "H");
    }
    if (j.contains("G")) {
        p.g = matrix_from_json(j["G"], "G");
        check_square(*p.g, "G");
    }
    if (p.h && p.g) {
        throw ConstraintViolated("problem: provide at most one of H and G");
    }
    if (j.contains("L")) {
        if (!j["L"].is_array()) {
            throw ConstraintViolated("problem: L must be an array of matrices");
        }
        for (const auto& lj : j["L"]) {
            CMat l = matrix_from_json(lj, "L");
            check_square(l, "L");
            p.kraus.push_back(std::move(l));
        }
    }
    if (j.contains("rho")) {
        p.rho = matrix_from_json(j["rho"], "rho");
        check_square(*p.rho, "rho");
    }
    if (j.contains("theta")) {
        const auto& t = j["theta"];
        if (t.contains("kind") && t["kind"].get<std::string>() != "conjugation") {
            throw ConstraintViolated("problem: theta.kind must be 'conjugation'");
        }
        if (t.contains("U")) {
            p.theta_u = matrix_from_json(t["U"], "theta.U");
            check_square(*p.theta_u, "theta.U");
        }
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (t.contains("eq_tol")) p.tolerances.eq_tol = t["eq_tol"].get<double>();
        if (t.contains("rank_tol")) p.tolerances.rank_tol = t["rank_tol"].get<double>();
        if (t.contains("faithful_tol")) p.tolerances.faithful_tol = t["faithful_tol"].get<double>();
        p.tolerances.validate();
    }
    return p;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConstraintViolated("problem: cannot open file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConstraintViolated("problem: invalid JSON in " + path + ": " + e.what());
    }
    return problem_from_json(j);
}

json problem_to_json(const ProblemFile& p) {
    json j;
    j["dim"] = p.dim;
    if (p.h) j["H"] = matrix_to_json(*p.h);
    if (p.g) j["G"] = matrix_to_json(*p.g);
    json ls = json::array();
    for (const CMat& l : p.kraus) {
        ls.push_back(matrix_to_json(l));
    }
    j["L"] = std::move(ls);
    if (p.rho) j["rho"] = matrix_to_json(*p.rho);
    if (p.theta_u) {
        j["theta"] = json{{"kind", "conjugation"}, {"U", matrix_to_json(*p.theta_u)}};
    }
    j["tolerances"] = json{{"eq_tol", p.tolerances.eq_tol},
                           {"rank_tol", p.tolerances.rank_tol},
                           {"faithful_tol", p.tolerances.faithful_tol}};
    return j;
}

void save_problem(const ProblemFile& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConstraintViolated("problem: cannot write file: " + path);
    }
    out << problem_to_json(p).dump(2) << "\n";
}

} // namespace qdb

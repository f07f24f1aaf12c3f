// problem_io.hpp — problem-file schema and JSON (de)serialization

#pragma once

#include "qdb/gksl.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

namespace qdb {

// Structured-text problem description. Complex entries are written as
// [re, im] pairs; plain numbers are accepted on input for real entries.
struct ProblemFile {
    Eigen::Index dim = 0;
    std::optional<CMat> h;
    std::optional<CMat> g;          // alternative to H, mutually exclusive
    std::vector<CMat> kraus;
    std::optional<CMat> rho;        // solved for when absent
    std::optional<CMat> theta_u;    // symmetric unitary; identity when absent
    Tolerances tolerances;

    GkslGenerator generator() const;
    TimeReversal time_reversal() const;
};

ProblemFile problem_from_json(const nlohmann::json& j);
ProblemFile load_problem(const std::string& path);

nlohmann::json problem_to_json(const ProblemFile& p);
void save_problem(const ProblemFile& p, const std::string& path);

nlohmann::json matrix_to_json(const CMat& m);
CMat matrix_from_json(const nlohmann::json& j, const char* what);

} // namespace qdb

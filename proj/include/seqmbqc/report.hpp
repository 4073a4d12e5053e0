#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace seqmbqc {

/// Outcome of one verification case. `status` is "pass" exactly when
/// max_residual < tolerance; "error" marks a check that could not run.
/// wall_ms is kept out of the JSON line so that fixed-seed runs are
/// byte-identical; the CLI prints timings on the human (stderr) summary.
struct Report {
    std::string check;
    std::string status;
    double max_residual = 0.0;
    double tolerance = 0.0;
    nlohmann::json params = nlohmann::json::object();
    double wall_ms = 0.0;

    bool passed() const { return status == "pass"; }
};

inline Report make_report(std::string check, double max_residual, double tolerance,
                          nlohmann::json params = nlohmann::json::object()) {
    Report r;
    r.check = std::move(check);
    r.status = max_residual < tolerance ? "pass" : "fail";
    r.max_residual = max_residual;
    r.tolerance = tolerance;
    r.params = std::move(params);
    return r;
}

inline Report make_error_report(std::string check, std::string message,
                                nlohmann::json params = nlohmann::json::object()) {
    Report r;
    r.check = std::move(check);
    r.status = "error";
    r.max_residual = 0.0;
    r.tolerance = 0.0;
    r.params = std::move(params);
    r.params["error"] = std::move(message);
    return r;
}

inline nlohmann::json report_to_json(const Report& r) {
    nlohmann::json j;
    j["check"] = r.check;
    j["status"] = r.status;
    j["max_residual"] = r.max_residual;
    j["tolerance"] = r.tolerance;
    j["params"] = r.params;
    return j;
}

}  // namespace seqmbqc

#pragma once

#include <string>
#include <vector>

#include "floqeig/floquet.hpp"
#include "floqeig/scenario.hpp"

namespace floqeig {

struct VerifyOptions {
    std::vector<double> alphas = {10.0, 30.0, 100.0, 300.0};
    GridPolicy policy;          // nx = max(201, 4 alpha), nt = max(400, 2 alpha)
    double gap_tol = 5e-2;
    double tol = 1e-10;
    long max_iter = 100000;
    int jobs = 1;
    int prediction_nx = 401;    // grid for limit-problem predictions
    int prediction_nt = 800;
    int quad_n = 256;
    std::uint64_t seed = 12345;
};

enum class VerifyStatus { Pass, Warn, Fail };

const char* to_string(VerifyStatus status);

/// Outcome of one scenario: the predicted limit, the sweep towards it, the
/// final gap and whether the last three gaps are nonincreasing.
/// PASS needs both the gap and the trend; exactly one gives WARN.
struct VerifyReport {
    std::string scenario;
    std::string prediction_source;
    double prediction = 0.0;
    SweepTable sweep;
    std::vector<double> gaps;
    double final_gap = 0.0;
    bool trend_ok = false;
    bool gap_ok = false;
    bool rows_ok = false;
    bool candidates_missing = false;
    VerifyStatus status = VerifyStatus::Fail;

    std::string to_json() const;
    std::string to_text() const;
};

/// The limit value a scenario is expected to approach, per its
/// expected_limit descriptor (or its annotation when the descriptor is
/// absent). Returns the value; fills the provenance string.
double predicted_limit(const Scenario& scenario, const VerifyOptions& options,
                       std::string* source, bool* candidates_missing);

VerifyReport run_verify(const Scenario& scenario, const VerifyOptions& options);

}  // namespace floqeig

#include "floqeig/verify.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "floqeig/errors.hpp"
#include "floqeig/limits.hpp"
#include "floqeig/temporal.hpp"

namespace floqeig {

const char* to_string(VerifyStatus status) {
    switch (status) {
        case VerifyStatus::Pass: return "PASS";
        case VerifyStatus::Warn: return "WARN";
        case VerifyStatus::Fail: return "FAIL";
    }
    return "?";
}

double predicted_limit(const Scenario& scenario, const VerifyOptions& options,
                       std::string* source, bool* candidates_missing) {
    if (candidates_missing) *candidates_missing = false;

    LimitKind kind;
    if (scenario.expected_limit) {
        kind = scenario.expected_limit->kind;
    } else if (scenario.annotation) {
        kind = LimitKind::SpatialFormula;
    } else if (scenario.coefficients.has_b()) {
        kind = LimitKind::TemporalProblem;
    } else {
        throw ValidationError("scenario '" + scenario.name +
                              "' carries neither an expected limit nor an annotation");
    }

    const SpaceTimeGrid grid(options.prediction_nx, options.prediction_nt,
                             scenario.coefficients.T);
    switch (kind) {
        case LimitKind::ExplicitValue:
            if (source) *source = "declared";
            return scenario.expected_limit->value;
        case LimitKind::CurveAverageMin: {
            const LimitPrediction p = predict_limit_nondegenerate(scenario, options.quad_n);
            if (source) *source = p.argmin.describe();
            return p.minimum;
        }
        case LimitKind::SpatialFormula: {
            const LimitPrediction p =
                predict_limit_spatial(scenario, grid, options.quad_n, options.tol,
                                      options.max_iter);
            if (source) *source = p.argmin.describe();
            if (candidates_missing) *candidates_missing = !p.failed.empty();
            return p.minimum;
        }
        case LimitKind::TemporalProblem: {
            if (scenario.coefficients.has_b()) {
                const EigenResult r =
                    limit_eigenvalue_temporal(scenario, grid, options.tol, options.max_iter);
                if (source) *source = "piecewise_period_problem";
                return r.lambda;
            }
            // Drift slope depends on x too: the mixed strip problem. Strip
            // bounds come from the annotation, the switch time from the hint.
            if (!scenario.annotation || scenario.annotation->curves.empty() ||
                scenario.temporal_partition_hint.empty())
                throw ValidationError("mixed limit needs strip curves and a partition hint");
            const auto& curves = scenario.annotation->curves;
            const double k1 = curves.front().at(0.0);
            const double k2 = curves.back().at(0.0);
            const double t_star = scenario.temporal_partition_hint.front();
            const EigenResult r = mixed_degenerate_eigenvalue(scenario, k1, k2, t_star, grid,
                                                              options.tol, options.max_iter);
            if (source) *source = "mixed_strip_problem";
            return r.lambda;
        }
    }
    throw std::logic_error("unreachable");
}

VerifyReport run_verify(const Scenario& scenario, const VerifyOptions& options) {
    VerifyReport report;
    report.scenario = scenario.name;
    report.prediction =
        predicted_limit(scenario, options, &report.prediction_source, &report.candidates_missing);

    report.sweep = alpha_sweep(scenario, options.alphas, options.policy, options.tol,
                               options.max_iter, options.jobs, 1.0, options.seed);

    report.rows_ok = true;
    for (const SweepRow& row : report.sweep.rows) {
        report.rows_ok = report.rows_ok && row.ok;
        report.gaps.push_back(row.ok ? std::abs(row.lambda - report.prediction)
                                     : std::numeric_limits<double>::quiet_NaN());
    }

    const size_t n = report.gaps.size();
    report.final_gap = n > 0 ? report.gaps.back() : std::numeric_limits<double>::quiet_NaN();
    report.gap_ok = report.rows_ok && report.final_gap <= options.gap_tol;
    // Trend = evidence of approach: nonincreasing over the last three rows and
    // an overall decrease across the sweep. Movements below the rounding floor
    // of a long time-stepping run count as already converged, not as a break.
    report.trend_ok = report.rows_ok && n >= 3;
    if (report.trend_ok) {
        for (size_t i = n - 3; i + 1 < n; ++i)
            report.trend_ok =
                report.trend_ok && report.gaps[i + 1] <= std::max(report.gaps[i], 1e-9);
        report.trend_ok =
            report.trend_ok && report.gaps.back() <= std::max(0.9 * report.gaps.front(), 1e-9);
    }

    if (report.gap_ok && report.trend_ok)
        report.status = report.candidates_missing ? VerifyStatus::Warn : VerifyStatus::Pass;
    else if (report.gap_ok || report.trend_ok)
        report.status = VerifyStatus::Warn;
    else
        report.status = VerifyStatus::Fail;
    return report;
}

std::string VerifyReport::to_json() const {
    nlohmann::json j;
    j["scenario"] = scenario;
    j["prediction"] = {{"value", prediction}, {"source", prediction_source}};
    j["rows"] = nlohmann::json::array();
    for (size_t i = 0; i < sweep.rows.size(); ++i) {
        const SweepRow& row = sweep.rows[i];
        nlohmann::json rj = {{"alpha", row.alpha}, {"lambda", row.lambda}, {"gap", gaps[i]},
                             {"nx", row.nx},       {"nt", row.nt},         {"ok", row.ok}};
        j["rows"].push_back(rj);
    }
    j["final_gap"] = final_gap;
    j["trend_ok"] = trend_ok;
    j["gap_ok"] = gap_ok;
    if (candidates_missing) j["candidates_missing"] = true;
    j["status"] = to_string(status);
    return j.dump(2);
}

std::string VerifyReport::to_text() const {
    std::ostringstream os;
    os << "[" << to_string(status) << "] " << scenario << ": prediction " << prediction << " ("
       << prediction_source << ")";
    os << ", gaps";
    for (double g : gaps) os << " " << g;
    os << ", final gap " << final_gap << (gap_ok ? " <= tol" : " > tol")
       << (trend_ok ? ", trend ok" : ", trend broken");
    if (candidates_missing) os << ", some limit candidates failed";
    return os.str();
}

}  // namespace floqeig

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "floqeig/discretize.hpp"
#include "floqeig/expr.hpp"

namespace floqeig {

/// Problem coefficients. dxm enters explicitly (sign classification near
/// critical curves is tolerance-critical, so it is never differenced from m);
/// b is present exactly when the drift slope is x-independent.
struct Coefficients {
    double T = 1.0;
    double D = 1.0;
    Expr m_expr;
    Expr dxm_expr;
    Expr V_expr;
    Expr b_expr;  // optional: dxm(x,t) == b(t)

    double m(double x, double t) const { return m_expr(x, t); }
    double dxm(double x, double t) const { return dxm_expr(x, t); }
    double V(double x, double t) const { return V_expr(x, t); }
    bool has_b() const { return !b_expr.empty(); }
    double b(double t) const { return b_expr(0.0, t); }
};

/// Sign of dxm on an interval between consecutive critical curves.
enum class IntervalLabel { Neg, Zero, Pos };

const char* to_string(IntervalLabel label);

struct AnnotatedCurve {
    Expr expr;  // t -> [0,1]
    Expr rate;  // t -> d/dt expr, supplied in closed form

    double at(double t) const { return expr(0.0, t); }
    double rate_at(double t) const { return rate(0.0, t); }
};

/// Declared critical curves kappa_0 < ... < kappa_{N+1} and the sign labels of
/// the N+1 intervals between them.
struct CurveAnnotation {
    std::vector<AnnotatedCurve> curves;
    std::vector<IntervalLabel> interval_labels;

    int interval_count() const { return static_cast<int>(interval_labels.size()); }
};

enum class LimitKind { CurveAverageMin, SpatialFormula, TemporalProblem, ExplicitValue };

const char* to_string(LimitKind kind);

struct ExpectedLimit {
    LimitKind kind = LimitKind::ExplicitValue;
    double value = 0.0;  // used by ExplicitValue
};

/// One problem instance: coefficients, boundary setup, critical-curve
/// annotations and, for benchmark entries, the predicted large-drift limit.
struct Scenario {
    std::string name;
    Coefficients coefficients;
    BoundaryPair boundary;
    std::optional<CurveAnnotation> annotation;
    std::vector<double> temporal_partition_hint;
    std::optional<ExpectedLimit> expected_limit;
};

/// Parse + validate a scenario file (JSON, schema in docs/scenario_format.md).
/// Throws ParseError on malformed input, ValidationError when an invariant
/// fails (the message cites the offending sample point).
Scenario load_scenario(const std::string& path);

/// Same, from in-memory text.
Scenario parse_scenario(const std::string& text);

/// Serialise back to the file schema; reloading yields identical sampled
/// coefficient values (expression sources round-trip verbatim).
std::string serialize_scenario(const Scenario& scenario);

/// Invariant checks on an (nprobe x nprobe) sample grid: T-periodicity,
/// b consistency, m/dxm agreement, curve ordering and label signs.
void validate_scenario(const Scenario& scenario, int nprobe = 33);

/// Built-in benchmark catalog; every entry carries expected_limit and passes
/// validation on a 65 x 65 probe grid.
std::vector<Scenario> builtin_catalog();

/// Catalog entry by name; throws ValidationError when absent.
Scenario catalog_scenario(const std::string& name);

}  // namespace floqeig

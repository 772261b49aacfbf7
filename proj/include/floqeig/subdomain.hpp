#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "floqeig/floquet.hpp"
#include "floqeig/scenario.hpp"

namespace floqeig {

/// Interval endpoint curve with its closed-form time derivative.
struct IntervalCurve {
    std::function<double(double)> value;
    std::function<double(double)> rate;

    static IntervalCurve constant(double c) {
        return {[c](double) { return c; }, [](double) { return 0.0; }};
    }
    static IntervalCurve of(const AnnotatedCurve& curve);
};

/// Time-varying interval (lower(t), upper(t)) inside [0,1].
struct MovingInterval {
    IntervalCurve lower;
    IntervalCurve upper;

    double width(double t) const { return upper.value(t) - lower.value(t); }
    static MovingInterval fixed(double a, double b) {
        return {IntervalCurve::constant(a), IntervalCurve::constant(b)};
    }
};

/// Narrower intervals hit the 1/width^2 blowup of the transform.
inline constexpr double kMinIntervalWidth = 1e-4;

/// Ordering, range, width, and rate checks on a sampled time grid.
/// Throws DegenerateWidth / ValidationError.
void validate_interval(const MovingInterval& interval, double T, int samples = 129);

/// The moving-interval problem mapped to y in (0,1) by y = (x - lower)/width:
/// diffusion D/width^2, drift (lower' + y width')/width, potential carried
/// along the moving frame. `drift_alpha` folds the original alpha-advection
/// in for validation runs (the limit problems themselves are drift-free).
SampledProblem transform_to_fixed_domain(const MovingInterval& interval,
                                         const Coefficients& coefficients,
                                         double drift_alpha = 0.0);

/// Principal eigenvalue on the moving interval with endpoint kinds p, q
/// (Neumann or Dirichlet), via the fixed-domain transform.
EigenResult subdomain_eigenvalue(const Coefficients& coefficients, const MovingInterval& interval,
                                 BoundaryKind p, BoundaryKind q, const SpaceTimeGrid& grid,
                                 double tol = 1e-10, long max_iter = 100000);

/// Robin continuations of the interval eigenvalue in the parameter eta.
/// NeumannForm: dps/dx = eta psi at the lower end, dps/dx = -eta psi at the
/// upper end; eta = 0 is exactly the Neumann problem. DirichletForm is the
/// same constraint re-parameterised, psi = eta dps/dx; eta = 0 is Dirichlet.
enum class RobinForm { NeumannForm, DirichletForm };

EigenResult robin_eigenvalue(const Coefficients& coefficients, const MovingInterval& interval,
                             double eta, RobinForm form, const SpaceTimeGrid& grid,
                             double tol = 1e-10, long max_iter = 100000);

/// (delta, lambda^{NN}((kappa-delta, kappa+delta))) rows; only the
/// Neumann-Neumann case stays bounded as the strip shrinks.
struct StripTable {
    std::string header;  // "delta,lambda" or "eta,lambda"
    std::vector<std::pair<double, double>> rows;
    void write_csv(std::ostream& os) const;
};

StripTable shrinking_strip_limit(const Coefficients& coefficients, const IntervalCurve& center,
                                 const std::vector<double>& deltas, const SpaceTimeGrid& grid,
                                 double tol = 1e-10, long max_iter = 100000);

}  // namespace floqeig

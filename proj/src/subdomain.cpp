#include "floqeig/subdomain.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "floqeig/errors.hpp"

namespace floqeig {

IntervalCurve IntervalCurve::of(const AnnotatedCurve& curve) {
    if (curve.rate.empty()) {
        const Expr e = curve.expr;
        return {[e](double t) { return e(0.0, t); }, [](double) { return 0.0; }};
    }
    const Expr e = curve.expr;
    const Expr r = curve.rate;
    return {[e](double t) { return e(0.0, t); }, [r](double t) { return r(0.0, t); }};
}

void validate_interval(const MovingInterval& interval, double T, int samples) {
    const double h = 1e-5;
    for (int k = 0; k < samples; ++k) {
        const double t = T * k / (samples - 1);
        const double lo = interval.lower.value(t);
        const double hi = interval.upper.value(t);
        if (!(lo < hi))
            throw ValidationError("interval endpoints out of order at t=" + std::to_string(t));
        if (hi - lo < kMinIntervalWidth)
            throw DegenerateWidth("interval width " + std::to_string(hi - lo) + " at t=" +
                                  std::to_string(t) + " is below " +
                                  std::to_string(kMinIntervalWidth));
        if (lo < -1e-12 || hi > 1.0 + 1e-12)
            throw ValidationError("interval leaves [0,1] at t=" + std::to_string(t));
        for (const IntervalCurve* c : {&interval.lower, &interval.upper}) {
            const double fd = (c->value(t + h) - c->value(t - h)) / (2.0 * h);
            if (std::abs(fd - c->rate(t)) > 1e-6)
                throw ValidationError("interval curve rate disagrees with slope at t=" +
                                      std::to_string(t));
        }
    }
}

SampledProblem transform_to_fixed_domain(const MovingInterval& interval,
                                         const Coefficients& coefficients, double drift_alpha) {
    const double D = coefficients.D;
    const IntervalCurve lower = interval.lower;
    const IntervalCurve upper = interval.upper;
    const Expr V = coefficients.V_expr;
    const Expr dxm = coefficients.dxm_expr;

    SampledProblem p;
    p.diffusion = [=](double t) {
        const double w = upper.value(t) - lower.value(t);
        return D / (w * w);
    };
    p.drift = [=](double y, double t) {
        const double w = upper.value(t) - lower.value(t);
        double a = (lower.rate(t) + y * (upper.rate(t) - lower.rate(t))) / w;
        if (drift_alpha != 0.0) a += drift_alpha * dxm(lower.value(t) + y * w, t) / w;
        return a;
    };
    p.potential = [=](double y, double t) {
        const double w = upper.value(t) - lower.value(t);
        return V(lower.value(t) + y * w, t);
    };
    p.boundary_at = [](double) { return BoundaryPair::neumann(); };
    return p;
}

namespace {

EigenResult solve_transformed(SampledProblem problem, const Coefficients& coefficients,
                              const SpaceTimeGrid& grid, double tol, long max_iter) {
    SpaceTimeGrid unit(grid.nx, grid.nt, coefficients.T);
    const MonodromyOperator monodromy = build_monodromy_sampled(problem, unit);
    return principal_eigenvalue(monodromy, tol, max_iter);
}

}  // namespace

EigenResult subdomain_eigenvalue(const Coefficients& coefficients, const MovingInterval& interval,
                                 BoundaryKind p, BoundaryKind q, const SpaceTimeGrid& grid,
                                 double tol, long max_iter) {
    validate_interval(interval, coefficients.T);
    SampledProblem problem = transform_to_fixed_domain(interval, coefficients);
    const BoundaryPair boundary = BoundaryPair::of(p, q);
    problem.boundary_at = [boundary](double) { return boundary; };
    return solve_transformed(std::move(problem), coefficients, grid, tol, max_iter);
}

EigenResult robin_eigenvalue(const Coefficients& coefficients, const MovingInterval& interval,
                             double eta, RobinForm form, const SpaceTimeGrid& grid, double tol,
                             long max_iter) {
    if (!std::isfinite(eta)) throw ValidationError("robin eta must be finite");
    validate_interval(interval, coefficients.T);
    SampledProblem problem = transform_to_fixed_domain(interval, coefficients);

    if (form == RobinForm::DirichletForm && eta == 0.0) {
        problem.boundary_at = [](double) { return BoundaryPair::dirichlet(); };
    } else {
        // In the y frame the constraint dps/dx = eta psi becomes
        // dps/dy = (eta w) psi; the Dirichlet form psi = eta dps/dx is the
        // same constraint with parameter 1/eta.
        const double eta_n = form == RobinForm::NeumannForm ? eta : 1.0 / eta;
        const IntervalCurve lower = interval.lower;
        const IntervalCurve upper = interval.upper;
        problem.boundary_at = [=](double t) {
            const double w = upper.value(t) - lower.value(t);
            return BoundaryPair::robin(eta_n * w);
        };
    }
    return solve_transformed(std::move(problem), coefficients, grid, tol, max_iter);
}

StripTable shrinking_strip_limit(const Coefficients& coefficients, const IntervalCurve& center,
                                 const std::vector<double>& deltas, const SpaceTimeGrid& grid,
                                 double tol, long max_iter) {
    StripTable table;
    table.header = "delta,lambda";
    for (double delta : deltas) {
        if (2.0 * delta < kMinIntervalWidth)
            throw DegenerateWidth("strip half-width " + std::to_string(delta) + " is below " +
                                  std::to_string(kMinIntervalWidth / 2));
        MovingInterval interval{
            {[center, delta](double t) { return center.value(t) - delta; }, center.rate},
            {[center, delta](double t) { return center.value(t) + delta; }, center.rate}};
        const EigenResult r = subdomain_eigenvalue(coefficients, interval, BoundaryKind::Neumann,
                                                   BoundaryKind::Neumann, grid, tol, max_iter);
        table.rows.emplace_back(delta, r.lambda);
    }
    return table;
}

void StripTable::write_csv(std::ostream& os) const {
    os << header << "\n";
    char buf[80];
    for (const auto& [key, lambda] : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", key, lambda);
        os << buf;
    }
}

}  // namespace floqeig

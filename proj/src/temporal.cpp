#include "floqeig/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "floqeig/errors.hpp"

namespace floqeig {

namespace {

constexpr double kSignTol = 1e-8;
constexpr int kPlateauSamples = 3;  // shorter zero runs count as isolated stops

int sign_of(double v) { return v > kSignTol ? 1 : (v < -kSignTol ? -1 : 0); }

SegmentSign to_segment_sign(int s) {
    return s < 0 ? SegmentSign::NegDrift : (s > 0 ? SegmentSign::PosDrift : SegmentSign::ZeroDrift);
}

TemporalPartition partition_with_hint(const std::vector<int>& sign, const SpaceTimeGrid& grid,
                                      const std::vector<double>& hint) {
    std::vector<int> bounds{0};
    for (double h : hint) {
        if (!(h > 0.0) || !(h < grid.T))
            throw ValidationError("partition hint " + std::to_string(h) + " outside (0,T)");
        const int k = static_cast<int>(std::llround(h / grid.dt));
        if (k <= bounds.back() || k >= grid.nt)
            throw ValidationError("partition hints too close together for this grid");
        bounds.push_back(k);
    }
    bounds.push_back(grid.nt);

    TemporalPartition out;
    for (size_t s = 0; s + 1 < bounds.size(); ++s) {
        TemporalSegment seg;
        seg.k0 = bounds[s];
        seg.k1 = bounds[s + 1];
        int pos = 0, neg = 0;
        for (int k = seg.k0 + 1; k < seg.k1; ++k) {
            pos += sign[k] > 0;
            neg += sign[k] < 0;
        }
        if (pos > 0 && neg > 0)
            throw AmbiguousSign("drift changes sign inside hinted segment " + std::to_string(s));
        seg.sign = to_segment_sign(pos > 0 ? 1 : (neg > 0 ? -1 : 0));
        out.segments.push_back(seg);
    }
    return out;
}

}  // namespace

TemporalPartition partition_time(const std::function<double(double)>& b, const SpaceTimeGrid& grid,
                                 const std::vector<double>& hint) {
    std::vector<int> sign(grid.nt + 1);
    for (int k = 0; k <= grid.nt; ++k) sign[k] = sign_of(b(grid.t_nodes[k]));

    if (!hint.empty()) return partition_with_hint(sign, grid, hint);

    // Per-substep sign from the endpoint samples. A single zero sample inside
    // a signed stretch (an isolated stop) never produces a zero substep, so it
    // merges automatically; a zero substep needs both endpoints at zero.
    std::vector<int> sub(grid.nt);
    for (int k = 0; k < grid.nt; ++k) {
        const int a = sign[k], c = sign[k + 1];
        if (a == 0 && c == 0) sub[k] = 0;
        else if (a >= 0 && c >= 0) sub[k] = 1;
        else if (a <= 0 && c <= 0) sub[k] = -1;
        else sub[k] = c;  // sign flip with no zero sample: boundary at node k
    }

    TemporalPartition out;
    for (int k = 0; k < grid.nt;) {
        int j = k;
        while (j + 1 < grid.nt && sub[j + 1] == sub[k]) ++j;
        if (sub[k] == 0 && j - k + 1 + 1 < kPlateauSamples)
            throw AmbiguousSign("drift hovers near zero on " + std::to_string(j - k + 2) +
                                " samples from t=" + std::to_string(grid.t_nodes[k]) +
                                "; neither a flat segment nor an isolated stop");
        out.segments.push_back({k, j + 1, to_segment_sign(sub[k])});
        k = j + 1;
    }
    return out;
}

namespace {

template <typename F>
double simpson3(const F& f, double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

void append_decay_steps(MonodromyOperator& monodromy, const Scenario& scenario, int k0, int k1,
                        double x_edge) {
    const Coefficients& c = scenario.coefficients;
    for (int k = k0; k < k1; ++k) {
        PeriodStep s;
        s.kind = PeriodStep::Kind::Decay;
        s.dt = monodromy.grid.dt;
        s.scale = std::exp(-simpson3([&](double t) { return c.V(x_edge, t); },
                                     monodromy.grid.t_nodes[k], monodromy.grid.t_nodes[k + 1]));
        monodromy.steps.push_back(s);
    }
}

void append_reset(MonodromyOperator& monodromy, ResetKind kind, int lo = 0, int hi = 0) {
    PeriodStep s;
    s.kind = PeriodStep::Kind::Reset;
    s.reset = kind;
    s.extend_lo = lo;
    s.extend_hi = hi;
    monodromy.steps.push_back(s);
}

SampledProblem driftless_problem(const Scenario& scenario) {
    const Coefficients& c = scenario.coefficients;
    SampledProblem p;
    p.diffusion = [&c](double) { return c.D; };
    p.drift = [](double, double) { return 0.0; };
    p.potential = [&c](double x, double t) { return c.V(x, t); };
    p.boundary_at = [](double) { return BoundaryPair::neumann(); };
    return p;
}

}  // namespace

MonodromyOperator build_period_operator(const Scenario& scenario,
                                        const TemporalPartition& partition,
                                        const SpaceTimeGrid& grid) {
    MonodromyOperator monodromy;
    monodromy.grid = grid;
    const SampledProblem heat = driftless_problem(scenario);

    for (const TemporalSegment& seg : partition.segments) {
        switch (seg.sign) {
            case SegmentSign::NegDrift:
                append_reset(monodromy, ResetKind::CollapseToLeft);
                append_decay_steps(monodromy, scenario, seg.k0, seg.k1, 0.0);
                break;
            case SegmentSign::PosDrift:
                append_reset(monodromy, ResetKind::CollapseToRight);
                append_decay_steps(monodromy, scenario, seg.k0, seg.k1, 1.0);
                break;
            case SegmentSign::ZeroDrift:
                append_reset(monodromy, ResetKind::Identity);
                append_solve_steps(monodromy, heat, seg.k0, seg.k1);
                break;
        }
    }
    return monodromy;
}

EigenResult limit_eigenvalue_temporal(const Scenario& scenario, const SpaceTimeGrid& grid,
                                      double tol, long max_iter) {
    if (!scenario.coefficients.has_b())
        throw ValidationError("temporal limit needs an x-independent drift slope b");
    const Coefficients& c = scenario.coefficients;
    const TemporalPartition partition = partition_time([&c](double t) { return c.b(t); }, grid,
                                                       scenario.temporal_partition_hint);
    const MonodromyOperator op = build_period_operator(scenario, partition, grid);
    EigenResult result = principal_eigenvalue(op, tol, max_iter);

    // On signed segments the eigenfunction must be flat in x.
    for (const TemporalSegment& seg : partition.segments) {
        if (seg.sign == SegmentSign::ZeroDrift) continue;
        for (int k = seg.k0 + 1; k <= seg.k1; ++k) {
            double lo = result.at(0, k), hi = result.at(0, k);
            for (int i = 1; i < grid.nx; ++i) {
                lo = std::min(lo, result.at(i, k));
                hi = std::max(hi, result.at(i, k));
            }
            if (hi - lo > 1e-10 * std::max(1.0, std::abs(hi)))
                throw std::logic_error("limit eigenfunction not flat on a signed segment");
        }
    }
    return result;
}

EigenResult mixed_degenerate_eigenvalue(const Scenario& scenario, double kappa1, double kappa2,
                                        double t_star, const SpaceTimeGrid& grid, double tol,
                                        long max_iter) {
    if (!(kappa1 > 0.0) || !(kappa2 < 1.0) || kappa1 > kappa2)
        throw ValidationError("mixed problem needs 0 < kappa1 <= kappa2 < 1");
    if (!(t_star > 0.0) || !(t_star < grid.T))
        throw ValidationError("mixed problem needs 0 < t_star < T");

    // Snap to grid nodes; the restriction/extension pair then uses exact node
    // values and stays linear and positivity-preserving.
    const int i1 = static_cast<int>(std::llround(kappa1 * (grid.nx - 1)));
    const int i2 = static_cast<int>(std::llround(kappa2 * (grid.nx - 1)));
    const int kstar = static_cast<int>(std::llround(t_star / grid.dt));
    if (i1 < 1 || i2 > grid.nx - 2) throw ValidationError("strip touches the domain boundary");
    if (kstar < 1 || kstar > grid.nt - 1)
        throw ValidationError("t_star too close to the period ends for this grid");

    MonodromyOperator monodromy;
    monodromy.grid = grid;
    const SampledProblem heat = driftless_problem(scenario);
    append_solve_steps(monodromy, heat, 0, kstar, 1.0, i1, i2);
    append_reset(monodromy, ResetKind::Extend, i1, i2);
    append_solve_steps(monodromy, heat, kstar, grid.nt);
    return principal_eigenvalue(monodromy, tol, max_iter);
}

}  // namespace floqeig

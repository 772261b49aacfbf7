#pragma once

#include <functional>
#include <vector>

#include "floqeig/floquet.hpp"
#include "floqeig/scenario.hpp"

namespace floqeig {

/// Sign of the x-independent drift slope b on a time segment.
enum class SegmentSign { NegDrift, ZeroDrift, PosDrift };

struct TemporalSegment {
    int k0 = 0;  // grid substep range [k0, k1)
    int k1 = 0;
    SegmentSign sign = SegmentSign::ZeroDrift;
};

/// Partition of [0,T] into maximal segments of constant drift sign, with
/// boundaries on grid time nodes.
struct TemporalPartition {
    std::vector<TemporalSegment> segments;
};

/// Classifies b on the grid's time nodes. With a hint the boundaries are the
/// hint times (snapped to nodes) and the sampled signs must match; without
/// one, sign runs are detected directly: zero runs of >= 3 samples are flat
/// segments, shorter zero runs are isolated stops merged into their signed
/// neighbours (they do not affect the limit). Throws AmbiguousSign for zero
/// runs that are neither.
TemporalPartition partition_time(const std::function<double(double)>& b, const SpaceTimeGrid& grid,
                                 const std::vector<double>& hint = {});

/// Period map of the piecewise limit problem: on negative-drift segments the
/// profile collapses to its left-end value and decays by exp(-int V(0,s) ds)
/// (exact per-substep quadrature, no time stepping); positive-drift segments
/// collapse to the right-end value with the V(1,.) decay; flat segments run
/// the drift-free heat solve with Neumann ends. Resets sit at segment starts.
MonodromyOperator build_period_operator(const Scenario& scenario,
                                        const TemporalPartition& partition,
                                        const SpaceTimeGrid& grid);

/// Limit eigenvalue of the piecewise problem, by power iteration on the
/// period operator. The returned eigenfunction is constant in x on signed
/// segments (asserted on output).
EigenResult limit_eigenvalue_temporal(const Scenario& scenario, const SpaceTimeGrid& grid,
                                      double tol = 1e-10, long max_iter = 100000);

/// Mixed limit problem: Neumann heat on the strip [kappa1, kappa2] over
/// (0, t_star], constant extension of the strip endpoint values to [0,1],
/// then Neumann heat on the full interval over (t_star, T]. kappa1 == kappa2
/// degenerates the strip phase to pointwise decay with V(kappa, .).
EigenResult mixed_degenerate_eigenvalue(const Scenario& scenario, double kappa1, double kappa2,
                                        double t_star, const SpaceTimeGrid& grid,
                                        double tol = 1e-10, long max_iter = 100000);

}  // namespace floqeig

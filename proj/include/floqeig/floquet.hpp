#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "floqeig/discretize.hpp"

namespace floqeig {

struct Scenario;

enum class ResetKind { CollapseToLeft, CollapseToRight, Extend, Identity };

/// One action of the period map. Solve and Decay steps advance time by dt;
/// Reset steps are instantaneous linear maps placed at segment starts.
struct PeriodStep {
    enum class Kind { Solve, Decay, Reset };
    Kind kind = Kind::Solve;

    // Solve: theta-scheme substep, optionally restricted to nodes [lo, hi]
    // (identity elsewhere). `scale` carries the exact exponential factor of
    // the constant-in-x part of the potential, split off so that constant and
    // x-independent potentials integrate exactly.
    SpatialOperator op;
    SpatialOperator op_prev;  // explicit side when theta < 1
    double dt = 0.0;
    double theta = 1.0;
    double scale = 1.0;
    int lo = 0;
    int hi = -1;  // hi < 0: full range

    // Reset
    ResetKind reset = ResetKind::Identity;
    int extend_lo = 0;
    int extend_hi = 0;

    void apply(std::vector<double>& u) const;
};

/// The one-period evolution map of the discretised problem on grid vectors.
/// Immutable after construction; apply() from any number of threads.
struct MonodromyOperator {
    std::vector<PeriodStep> steps;
    SpaceTimeGrid grid;
    bool record_trajectory = false;

    void apply(std::vector<double>& u) const;
    /// apply() that also records the state after every time-advancing step;
    /// slices.size() == nt+1 afterwards, slices[0] = input.
    void apply_recording(std::vector<double>& u, std::vector<std::vector<double>>& slices) const;
    double advanced_time() const;
    /// Conjugated operator starting k time-advancing steps later in the period.
    MonodromyOperator rotated(int k) const;
};

/// Principal eigenpair of a period map.
struct EigenResult {
    double lambda = 0.0;
    int nx = 0;
    int nt = 0;
    /// Periodic eigenfunction samples, row-major nx x (nt+1), sup-normalised
    /// at t = 0; first and last time slices are equal.
    std::vector<double> eigenfunction;
    double residual = 0.0;
    long iterations = 0;

    double at(int i, int k) const { return eigenfunction[static_cast<size_t>(k) * nx + i]; }
    void write_trajectory_csv(std::ostream& os, const SpaceTimeGrid& grid) const;
};

/// Problem data given as plain samplers; the common substrate for the full
/// problem, transformed moving-interval problems and piecewise period maps.
struct SampledProblem {
    std::function<double(double)> diffusion;               // D(t)
    std::function<double(double, double)> drift;           // coefficient of -d/dx
    std::function<double(double, double)> potential;       // V(x,t)
    std::function<BoundaryPair(double)> boundary_at;       // boundary rows at time t
};

/// Appends theta-scheme substeps for grid substep indices [k_begin, k_end),
/// restricted to nodes [lo, hi] when hi >= 0. Coefficients freeze at the right
/// endpoint of each substep; the spatial minimum of the potential is split off
/// as an exact exponential factor, which keeps the matrix part nonnegative
/// (M-matrix at any drift) and makes x-independent potentials integrate
/// exactly.
void append_solve_steps(MonodromyOperator& monodromy, const SampledProblem& problem, int k_begin,
                        int k_end, double theta = 1.0, int lo = 0, int hi = -1);

MonodromyOperator build_monodromy_sampled(const SampledProblem& problem, const SpaceTimeGrid& grid,
                                          double theta = 1.0);

/// Period map of the full problem with drift alpha * dxm and potential V.
MonodromyOperator build_monodromy(const Scenario& scenario, const SpaceTimeGrid& grid, double alpha,
                                  double theta = 1.0);

struct PowerOptions {
    double tol = 1e-10;
    long max_iter = 100000;
    std::uint64_t seed = 12345;
    std::vector<double> start;  // optional start vector (positive)
};

/// Power iteration with sup-norm normalisation; lambda = -ln(r)/T with r the
/// converged ratio against the previous iterate. Throws NoConvergence.
EigenResult principal_eigenvalue(const MonodromyOperator& monodromy, double tol = 1e-10,
                                 long max_iter = 100000);
EigenResult principal_eigenvalue(const MonodromyOperator& monodromy, const PowerOptions& options);

/// Grid scaling for large-drift sweeps: nx grows like cx * alpha so the mesh
/// Peclet number stays moderate.
struct GridPolicy {
    int nx0 = 201;
    int nt0 = 400;
    double cx = 4.0;
    double ct = 2.0;
    SpaceTimeGrid grid_for(double alpha, double T) const;
};

struct SweepRow {
    double alpha = 0.0;
    double lambda = 0.0;
    double residual = 0.0;
    long iterations = 0;
    int nx = 0;
    int nt = 0;
    bool ok = false;
    std::string error;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    static const char* csv_header() { return "alpha,lambda,residual,iterations,nx,nt"; }
    void write_csv(std::ostream& os) const;
};

/// One eigenvalue per alpha; a failed row is recorded, not fatal.
SweepTable alpha_sweep(const Scenario& scenario, const std::vector<double>& alphas,
                       const GridPolicy& policy = {}, double tol = 1e-10, long max_iter = 100000,
                       int jobs = 1, double theta = 1.0, std::uint64_t seed = 12345);

}  // namespace floqeig

#pragma once

#include <functional>
#include <vector>

namespace floqeig {

struct Coefficients;  // scenario.hpp

enum class BoundaryKind { Neumann, Dirichlet, Robin };

/// Boundary condition pair for the two interval ends.
///
/// Robin uses the outward-derivative-free convention of the solver:
/// at the left end dps/dx = eta*psi, at the right end dps/dx = -eta*psi.
/// Robin with eta == 0 assembles the exact Neumann rows.
struct BoundaryPair {
    BoundaryKind left = BoundaryKind::Neumann;
    BoundaryKind right = BoundaryKind::Neumann;
    double eta_left = 0.0;
    double eta_right = 0.0;

    static BoundaryPair neumann() { return {}; }
    static BoundaryPair dirichlet() { return {BoundaryKind::Dirichlet, BoundaryKind::Dirichlet, 0, 0}; }
    static BoundaryPair robin(double eta) { return {BoundaryKind::Robin, BoundaryKind::Robin, eta, eta}; }
    static BoundaryPair of(BoundaryKind l, BoundaryKind r, double eta = 0.0) { return {l, r, eta, eta}; }
};

/// Uniform space-time grid: nx nodes spanning [x0, x1] (the unit interval by
/// default), nt time steps per period T.
struct SpaceTimeGrid {
    int nx = 0;
    int nt = 0;
    double T = 1.0;
    double x0 = 0.0;
    double x1 = 1.0;

    SpaceTimeGrid() = default;
    SpaceTimeGrid(int nx_, int nt_, double T_, double x0_ = 0.0, double x1_ = 1.0);

    double dx = 0.0;
    double dt = 0.0;
    std::vector<double> x_nodes;  // size nx
    std::vector<double> t_nodes;  // size nt+1, t_nodes[nt] == T exactly
};

/// Tridiagonal image of  L u = -D u'' - a(x) u' + V(x) u  at one time level.
///
/// The advection-diffusion part uses exponential-fitted (flux-limited by the
/// Bernoulli function) faces, so (I + dt L) stays an M-matrix at any mesh
/// Peclet number and the scheme is nodally exact for constant-coefficient
/// steady advection-diffusion.
struct SpatialOperator {
    std::vector<double> sub;   // sub[i] multiplies u[i-1], sub[0] unused
    std::vector<double> diag;  // diag[i] multiplies u[i]
    std::vector<double> sup;   // sup[i] multiplies u[i+1], sup.back() unused
    bool dirichlet_left = false;
    bool dirichlet_right = false;

    int size() const { return static_cast<int>(diag.size()); }
    void apply(const std::vector<double>& u, std::vector<double>& out) const;
};

/// Bernoulli function p / (e^p - 1), continuous through p = 0.
double bernoulli(double p);

/// Generic assembly from samplers; drift_face is sampled at the nx-1 cell
/// faces, potential at the nx nodes. Dirichlet ends become identity rows
/// (eigenfunctions are pinned to zero there).
SpatialOperator assemble_operator(int nx, double dx, double diffusion,
                                  const std::function<double(double)>& drift_at,
                                  const std::function<double(double)>& potential_at,
                                  const std::vector<double>& x_nodes,
                                  const BoundaryPair& boundary);

/// Spec surface: operator of problem coefficients frozen at t_nodes[t_index],
/// drift alpha * dxm, full potential V.
SpatialOperator assemble(const Coefficients& coefficients, const SpaceTimeGrid& grid, int t_index,
                         double alpha, const BoundaryPair& boundary);

/// One theta-scheme step: solves (I + theta dt L) u' = (I - (1-theta) dt L_prev) u.
/// L_prev may be null when theta == 1 (implicit Euler, the default).
/// Throws SingularSystem on a zero pivot.
std::vector<double> step(const std::vector<double>& u, const SpatialOperator& op,
                         const SpatialOperator* op_prev, double dt, double theta = 1.0);

/// Thomas solve of (diag,sub,sup) system in-place into x; rhs preserved.
void solve_tridiagonal(const std::vector<double>& sub, const std::vector<double>& diag,
                       const std::vector<double>& sup, const std::vector<double>& rhs,
                       std::vector<double>& x);

}  // namespace floqeig

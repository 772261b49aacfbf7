#include "floqeig/discretize.hpp"

#include <cmath>
#include <stdexcept>

#include "floqeig/errors.hpp"
#include "floqeig/scenario.hpp"

namespace floqeig {

SpaceTimeGrid::SpaceTimeGrid(int nx_, int nt_, double T_, double x0_, double x1_)
    : nx(nx_), nt(nt_), T(T_), x0(x0_), x1(x1_) {
    if (nx < 3) throw std::invalid_argument("grid needs nx >= 3");
    if (nt < 2) throw std::invalid_argument("grid needs nt >= 2");
    if (!(T > 0) || !(x1 > x0)) throw std::invalid_argument("grid needs T > 0 and x1 > x0");
    dx = (x1 - x0) / (nx - 1);
    dt = T / nt;
    x_nodes.resize(nx);
    for (int i = 0; i < nx; ++i) x_nodes[i] = x0 + i * dx;
    t_nodes.resize(nt + 1);
    for (int k = 0; k <= nt; ++k) t_nodes[k] = (T * k) / nt;
    t_nodes[nt] = T;  // exact period end
}

double bernoulli(double p) {
    // p/(e^p-1); series near zero keeps full accuracy and the M-matrix sign.
    if (std::abs(p) < 1e-5) return 1.0 - p / 2.0 + p * p / 12.0;
    return p / std::expm1(p);
}

void SpatialOperator::apply(const std::vector<double>& u, std::vector<double>& out) const {
    const int n = size();
    out.resize(n);
    for (int i = 0; i < n; ++i) {
        double v = diag[i] * u[i];
        if (i > 0) v += sub[i] * u[i - 1];
        if (i + 1 < n) v += sup[i] * u[i + 1];
        out[i] = v;
    }
}

SpatialOperator assemble_operator(int nx, double dx, double diffusion,
                                  const std::function<double(double)>& drift_at,
                                  const std::function<double(double)>& potential_at,
                                  const std::vector<double>& x_nodes,
                                  const BoundaryPair& boundary) {
    SpatialOperator op;
    op.sub.assign(nx, 0.0);
    op.diag.assign(nx, 0.0);
    op.sup.assign(nx, 0.0);
    const double D = diffusion;
    const double inv_dx2 = 1.0 / (dx * dx);

    // Face fluxes: p = a dx / D, flux across face (i,i+1) reconstructed from the
    // local two-point problem, giving coefficients B(p) toward i-1 and B(-p)
    // toward i+1. Both are positive for every p, hence off-diagonals <= 0.
    std::vector<double> bm(nx - 1), bp(nx - 1);  // B(p), B(-p) per face
    for (int f = 0; f < nx - 1; ++f) {
        const double xf = 0.5 * (x_nodes[f] + x_nodes[f + 1]);
        const double p = drift_at(xf) * dx / D;
        bm[f] = bernoulli(p);
        bp[f] = bernoulli(-p);
    }

    for (int i = 1; i + 1 < nx; ++i) {
        op.sub[i] = -D * inv_dx2 * bm[i - 1];
        op.sup[i] = -D * inv_dx2 * bp[i];
        op.diag[i] = D * inv_dx2 * (bm[i - 1] + bp[i]) + potential_at(x_nodes[i]);
    }

    // Left boundary row (half cell).
    switch (boundary.left) {
        case BoundaryKind::Dirichlet:
            op.diag[0] = 1.0;
            op.dirichlet_left = true;
            break;
        case BoundaryKind::Neumann:
        case BoundaryKind::Robin: {
            op.sup[0] = -2.0 * D * inv_dx2 * bp[0];
            op.diag[0] = 2.0 * D * inv_dx2 * bp[0] + potential_at(x_nodes[0]);
            if (boundary.left == BoundaryKind::Robin)
                op.diag[0] += 2.0 * D / dx * boundary.eta_left;
            break;
        }
    }

    // Right boundary row.
    switch (boundary.right) {
        case BoundaryKind::Dirichlet:
            op.diag[nx - 1] = 1.0;
            op.dirichlet_right = true;
            break;
        case BoundaryKind::Neumann:
        case BoundaryKind::Robin: {
            op.sub[nx - 1] = -2.0 * D * inv_dx2 * bm[nx - 2];
            op.diag[nx - 1] = 2.0 * D * inv_dx2 * bm[nx - 2] + potential_at(x_nodes[nx - 1]);
            if (boundary.right == BoundaryKind::Robin)
                op.diag[nx - 1] += 2.0 * D / dx * boundary.eta_right;
            break;
        }
    }
    return op;
}

SpatialOperator assemble(const Coefficients& coefficients, const SpaceTimeGrid& grid, int t_index,
                         double alpha, const BoundaryPair& boundary) {
    if (t_index < 0 || t_index > grid.nt) throw std::invalid_argument("t_index out of range");
    const double t = grid.t_nodes[t_index];
    return assemble_operator(
        grid.nx, grid.dx, coefficients.D,
        [&](double x) { return alpha * coefficients.dxm(x, t); },
        [&](double x) { return coefficients.V(x, t); }, grid.x_nodes, boundary);
}

void solve_tridiagonal(const std::vector<double>& sub, const std::vector<double>& diag,
                       const std::vector<double>& sup, const std::vector<double>& rhs,
                       std::vector<double>& x) {
    const int n = static_cast<int>(diag.size());
    static thread_local std::vector<double> cp, dp;
    cp.resize(n);
    dp.resize(n);
    if (diag[0] == 0.0) throw SingularSystem("zero pivot at row 0");
    cp[0] = sup[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (int i = 1; i < n; ++i) {
        const double denom = diag[i] - sub[i] * cp[i - 1];
        if (denom == 0.0) throw SingularSystem("zero pivot at row " + std::to_string(i));
        cp[i] = (i + 1 < n ? sup[i] : 0.0) / denom;
        dp[i] = (rhs[i] - sub[i] * dp[i - 1]) / denom;
    }
    x.resize(n);
    x[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = dp[i] - cp[i] * x[i + 1];
}

std::vector<double> step(const std::vector<double>& u, const SpatialOperator& op,
                         const SpatialOperator* op_prev, double dt, double theta) {
    const int n = op.size();
    std::vector<double> rhs(n);
    if (theta < 1.0) {
        const SpatialOperator& prev = op_prev ? *op_prev : op;
        prev.apply(u, rhs);
        const double w = (1.0 - theta) * dt;
        for (int i = 0; i < n; ++i) rhs[i] = u[i] - w * rhs[i];
    } else {
        rhs = u;
    }
    // Dirichlet rows are identity rows; keep the pinned value at zero.
    if (op.dirichlet_left) rhs[0] = 0.0;
    if (op.dirichlet_right) rhs[n - 1] = 0.0;

    std::vector<double> a(n), d(n), c(n);
    const double w = theta * dt;
    for (int i = 0; i < n; ++i) {
        const bool pinned = (i == 0 && op.dirichlet_left) || (i == n - 1 && op.dirichlet_right);
        if (pinned) {
            a[i] = 0.0;
            d[i] = 1.0;
            c[i] = 0.0;
        } else {
            a[i] = w * op.sub[i];
            d[i] = 1.0 + w * op.diag[i];
            c[i] = w * op.sup[i];
        }
    }
    std::vector<double> out;
    solve_tridiagonal(a, d, c, rhs, out);
    return out;
}

}  // namespace floqeig

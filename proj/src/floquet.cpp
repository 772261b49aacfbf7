#include "floqeig/floquet.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <thread>

#include "floqeig/errors.hpp"
#include "floqeig/scenario.hpp"

namespace floqeig {

namespace {

void solve_range(const PeriodStep& s, std::vector<double>& u) {
    const int n = static_cast<int>(u.size());
    const int lo = s.lo;
    const int hi = s.hi < 0 ? n - 1 : s.hi;
    const int m = hi - lo + 1;

    if (m == 1) {
        // Zero-width strip: the potential went entirely into `scale`.
        u[lo] *= s.scale;
        return;
    }
    if (m == n) {
        u = step(u, s.op, s.theta < 1.0 ? &s.op_prev : nullptr, s.dt, s.theta);
        for (double& v : u) v *= s.scale;
        return;
    }
    std::vector<double> part(u.begin() + lo, u.begin() + lo + m);
    const std::vector<double> out =
        step(part, s.op, s.theta < 1.0 ? &s.op_prev : nullptr, s.dt, s.theta);
    for (int i = 0; i < m; ++i) u[lo + i] = s.scale * out[i];
}

}  // namespace

void PeriodStep::apply(std::vector<double>& u) const {
    switch (kind) {
        case Kind::Solve:
            solve_range(*this, u);
            break;
        case Kind::Decay:
            for (double& v : u) v *= scale;
            break;
        case Kind::Reset:
            switch (reset) {
                case ResetKind::Identity:
                    break;
                case ResetKind::CollapseToLeft: {
                    const double v = u.front();
                    std::fill(u.begin(), u.end(), v);
                    break;
                }
                case ResetKind::CollapseToRight: {
                    const double v = u.back();
                    std::fill(u.begin(), u.end(), v);
                    break;
                }
                case ResetKind::Extend: {
                    const double vl = u[extend_lo];
                    const double vr = u[extend_hi];
                    for (int i = 0; i < extend_lo; ++i) u[i] = vl;
                    for (int i = extend_hi + 1; i < static_cast<int>(u.size()); ++i) u[i] = vr;
                    break;
                }
            }
            break;
    }
}

void MonodromyOperator::apply(std::vector<double>& u) const {
    for (const PeriodStep& s : steps) s.apply(u);
}

void MonodromyOperator::apply_recording(std::vector<double>& u,
                                        std::vector<std::vector<double>>& slices) const {
    slices.clear();
    slices.push_back(u);
    for (const PeriodStep& s : steps) {
        s.apply(u);
        if (s.kind != PeriodStep::Kind::Reset) slices.push_back(u);
    }
}

double MonodromyOperator::advanced_time() const {
    double t = 0.0;
    for (const PeriodStep& s : steps)
        if (s.kind != PeriodStep::Kind::Reset) t += s.dt;
    return t;
}

MonodromyOperator MonodromyOperator::rotated(int k) const {
    // Rotate by k time-advancing steps; resets travel with the step they precede.
    MonodromyOperator out;
    out.grid = grid;
    out.record_trajectory = record_trajectory;
    std::vector<std::vector<PeriodStep>> groups;  // one group per advancing step
    std::vector<PeriodStep> pending;
    for (const PeriodStep& s : steps) {
        pending.push_back(s);
        if (s.kind != PeriodStep::Kind::Reset) {
            groups.push_back(pending);
            pending.clear();
        }
    }
    const int n = static_cast<int>(groups.size());
    if (n == 0) return *this;
    k = ((k % n) + n) % n;
    for (int j = 0; j < n; ++j)
        for (const PeriodStep& s : groups[(j + k) % n]) out.steps.push_back(s);
    for (const PeriodStep& s : pending) out.steps.push_back(s);  // trailing resets, if any
    return out;
}

namespace {

// Simpson on one substep: (h/6)(f(a) + 4 f(mid) + f(b)).
template <typename F>
double simpson3(const F& f, double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

}  // namespace

void append_solve_steps(MonodromyOperator& monodromy, const SampledProblem& problem, int k_begin,
                        int k_end, double theta, int lo, int hi) {
    const SpaceTimeGrid& grid = monodromy.grid;
    const int lo_i = lo;
    const int hi_i = hi < 0 ? grid.nx - 1 : hi;
    const int m = hi_i - lo_i + 1;
    const std::vector<double> nodes(grid.x_nodes.begin() + lo_i,
                                    grid.x_nodes.begin() + hi_i + 1);

    auto potential_floor = [&](double t) {
        double fl = std::numeric_limits<double>::infinity();
        for (double x : nodes) fl = std::min(fl, problem.potential(x, t));
        return fl;
    };
    auto make_op = [&](double t) {
        const double fl = potential_floor(t);
        return assemble_operator(
            m, grid.dx, problem.diffusion(t), [&](double x) { return problem.drift(x, t); },
            [&](double x) { return problem.potential(x, t) - fl; }, nodes,
            problem.boundary_at(t));
    };

    for (int k = k_begin; k < k_end; ++k) {
        PeriodStep s;
        s.kind = PeriodStep::Kind::Solve;
        s.dt = grid.dt;
        s.theta = theta;
        s.lo = lo_i;
        s.hi = hi < 0 ? -1 : hi_i;
        if (m > 1) {
            s.op = make_op(grid.t_nodes[k + 1]);
            if (theta < 1.0) s.op_prev = make_op(grid.t_nodes[k]);
        }
        s.scale = std::exp(-simpson3(potential_floor, grid.t_nodes[k], grid.t_nodes[k + 1]));
        monodromy.steps.push_back(std::move(s));
    }
}

MonodromyOperator build_monodromy_sampled(const SampledProblem& problem, const SpaceTimeGrid& grid,
                                          double theta) {
    MonodromyOperator monodromy;
    monodromy.grid = grid;
    append_solve_steps(monodromy, problem, 0, grid.nt, theta);
    return monodromy;
}

MonodromyOperator build_monodromy(const Scenario& scenario, const SpaceTimeGrid& grid, double alpha,
                                  double theta) {
    const Coefficients& c = scenario.coefficients;
    SampledProblem problem;
    problem.diffusion = [&c](double) { return c.D; };
    problem.drift = [&c, alpha](double x, double t) { return alpha * c.dxm(x, t); };
    problem.potential = [&c](double x, double t) { return c.V(x, t); };
    const BoundaryPair boundary = scenario.boundary;
    problem.boundary_at = [boundary](double) { return boundary; };
    return build_monodromy_sampled(problem, grid, theta);
}

namespace {

double sup_norm(const std::vector<double>& u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

EigenResult principal_eigenvalue(const MonodromyOperator& monodromy, const PowerOptions& options) {
    const int n = monodromy.grid.nx;
    const double T = monodromy.grid.T;
    const double tol = options.tol;
    if (!(tol > 0)) throw std::invalid_argument("tol must be positive");

    std::vector<double> u = options.start.empty() ? std::vector<double>(n, 1.0) : options.start;
    {
        const double nu = sup_norm(u);
        for (double& v : u) v /= nu;
    }

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unif(0.1, 1.0);

    double r = 0.0, r_prev = -1.0, residual = std::numeric_limits<double>::infinity();
    double best_residual = residual;
    long best_iter = 0;
    long iter = 0;
    std::vector<double> v;
    for (iter = 1; iter <= options.max_iter; ++iter) {
        v = u;
        monodromy.apply(v);

        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            num += v[i] * u[i];
            den += u[i] * u[i];
        }
        r = num / den;
        if (!(r > 0.0) || !std::isfinite(r))
            throw NoConvergence(iter, residual);

        residual = 0.0;
        for (int i = 0; i < n; ++i) residual = std::max(residual, std::abs(v[i] - r * u[i]));

        const bool ratio_settled = r_prev > 0.0 && std::abs(r - r_prev) < tol * r;
        if (residual < tol && ratio_settled) break;
        r_prev = r;

        if (residual < best_residual) {
            best_residual = residual;
            best_iter = iter;
        } else if (iter - best_iter > 5000) {
            // Stagnation: restart from a fresh positive vector.
            for (double& w : v) w = unif(rng);
            best_iter = iter;
            best_residual = std::numeric_limits<double>::infinity();
            r_prev = -1.0;
        }

        const double nv = sup_norm(v);
        if (!(nv > 0.0) || !std::isfinite(nv)) throw NoConvergence(iter, residual);
        for (double& w : v) w /= nv;
        u.swap(v);
    }
    if (iter > options.max_iter) throw NoConvergence(options.max_iter, residual);

    EigenResult result;
    result.lambda = -std::log(r) / T;
    result.nx = n;
    result.nt = monodromy.grid.nt;
    result.residual = residual;
    result.iterations = iter;

    // One recording pass; compensate the decay e^{-lambda t} so the stored
    // slices are the periodic eigenfunction, then close the period exactly.
    std::vector<std::vector<double>> slices;
    std::vector<double> w = u;
    monodromy.apply_recording(w, slices);
    result.eigenfunction.resize(static_cast<size_t>(n) * (monodromy.grid.nt + 1));
    for (int k = 0; k <= monodromy.grid.nt; ++k) {
        const double boost = std::exp(result.lambda * monodromy.grid.t_nodes[k]);
        for (int i = 0; i < n; ++i)
            result.eigenfunction[static_cast<size_t>(k) * n + i] = boost * slices[k][i];
    }
    for (int i = 0; i < n; ++i)
        result.eigenfunction[static_cast<size_t>(monodromy.grid.nt) * n + i] =
            result.eigenfunction[i];
    return result;
}

EigenResult principal_eigenvalue(const MonodromyOperator& monodromy, double tol, long max_iter) {
    PowerOptions options;
    options.tol = tol;
    options.max_iter = max_iter;
    return principal_eigenvalue(monodromy, options);
}

void EigenResult::write_trajectory_csv(std::ostream& os, const SpaceTimeGrid& grid) const {
    os << "t,x,value\n";
    char buf[96];
    for (int k = 0; k <= nt; ++k)
        for (int i = 0; i < nx; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.t_nodes[k],
                          grid.x_nodes[i], at(i, k));
            os << buf;
        }
}

SpaceTimeGrid GridPolicy::grid_for(double alpha, double T) const {
    const int nx = std::max(nx0, static_cast<int>(std::ceil(cx * alpha)));
    const int nt = std::max(nt0, static_cast<int>(std::ceil(ct * alpha)));
    return SpaceTimeGrid(nx, nt, T);
}

void SweepTable::write_csv(std::ostream& os) const {
    os << csv_header() << "\n";
    char buf[160];
    for (const SweepRow& row : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%ld,%d,%d\n", row.alpha, row.lambda,
                      row.residual, row.iterations, row.nx, row.nt);
        os << buf;
    }
}

SweepTable alpha_sweep(const Scenario& scenario, const std::vector<double>& alphas,
                       const GridPolicy& policy, double tol, long max_iter, int jobs, double theta,
                       std::uint64_t seed) {
    if (alphas.empty()) throw std::invalid_argument("alpha_sweep needs at least one alpha");
    if (!std::is_sorted(alphas.begin(), alphas.end()))
        throw std::invalid_argument("alphas must be sorted ascending");

    SweepTable table;
    table.rows.resize(alphas.size());

    auto run_row = [&](size_t idx) {
        SweepRow& row = table.rows[idx];
        row.alpha = alphas[idx];
        const SpaceTimeGrid grid = policy.grid_for(row.alpha, scenario.coefficients.T);
        row.nx = grid.nx;
        row.nt = grid.nt;
        try {
            const MonodromyOperator m = build_monodromy(scenario, grid, row.alpha, theta);
            PowerOptions popt;
            popt.tol = tol;
            popt.max_iter = max_iter;
            popt.seed = seed;
            const EigenResult er = principal_eigenvalue(m, popt);
            row.lambda = er.lambda;
            row.residual = er.residual;
            row.iterations = er.iterations;
            row.ok = true;
        } catch (const NoConvergence& e) {
            row.lambda = std::numeric_limits<double>::quiet_NaN();
            row.residual = e.last_residual;
            row.iterations = e.iterations;
            row.ok = false;
            row.error = e.what();
        }
    };

    if (jobs <= 1 || alphas.size() == 1) {
        for (size_t i = 0; i < alphas.size(); ++i) run_row(i);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= alphas.size()) return;
                run_row(i);
            }
        };
        std::vector<std::thread> pool;
        const int nthreads = std::min<int>(jobs, static_cast<int>(alphas.size()));
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return table;
}

}  // namespace floqeig

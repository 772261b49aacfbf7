#include <cmath>
#include <cstring>
#include <random>

#include <doctest.h>

#include "floqeig/discretize.hpp"
#include "floqeig/errors.hpp"
#include "floqeig/scenario.hpp"
#include "test_support.hpp"

using namespace floqeig;

namespace {

Coefficients make_coeffs(const std::string& m, const std::string& dxm, const std::string& V) {
    Coefficients c;
    c.T = 1.0;
    c.D = 1.0;
    c.m_expr = Expr::parse(m);
    c.dxm_expr = Expr::parse(dxm);
    c.V_expr = Expr::parse(V);
    return c;
}

}  // namespace

TEST_SUITE_BEGIN("discretize");

TEST_CASE("grid is uniform and closes the period exactly") {
    const SpaceTimeGrid g(11, 7, 0.3);
    CHECK(g.dx == doctest::Approx(0.1));
    CHECK(g.x_nodes.front() == 0.0);
    CHECK(g.x_nodes.back() == 1.0);
    CHECK(g.t_nodes.size() == 8);
    CHECK(g.t_nodes.back() == 0.3);  // exact
    CHECK_THROWS(SpaceTimeGrid(2, 7, 1.0));
    CHECK_THROWS(SpaceTimeGrid(11, 1, 1.0));
}

TEST_CASE("rows sum to zero for drift-only Neumann operators") {
    const Coefficients c = make_coeffs("x^2/2*(1+sin(2*pi*t))", "x*(1+sin(2*pi*t))", "0");
    const SpaceTimeGrid g(41, 8, 1.0);
    for (double alpha : {0.0, 1.0, 10.0, 100.0}) {
        const SpatialOperator op = assemble(c, g, 3, alpha, BoundaryPair::neumann());
        std::vector<double> ones(g.nx, 1.0), out;
        op.apply(ones, out);
        for (double v : out) CHECK(std::abs(v) <= 1e-11);
    }
}

TEST_CASE("zero drift reduces to the symmetric second difference plus V") {
    const Coefficients c = make_coeffs("0", "0", "1+x");
    const SpaceTimeGrid g(21, 8, 1.0);
    const SpatialOperator op = assemble(c, g, 0, 0.0, BoundaryPair::neumann());
    const double s = 1.0 / (g.dx * g.dx);
    for (int i = 1; i + 1 < g.nx; ++i) {
        CHECK(op.sub[i] == doctest::Approx(-s));
        CHECK(op.sup[i] == doctest::Approx(-s));
        CHECK(op.diag[i] == doctest::Approx(2 * s + 1 + g.x_nodes[i]));
    }
    CHECK(op.sup[0] == doctest::Approx(-2 * s));
    CHECK(op.diag[0] == doctest::Approx(2 * s + 1));
}

TEST_CASE("exponential fitting is nodally exact for constant-coefficient kernels") {
    // L u = -u'' - 10 u' annihilates both 1 and exp(-10 x); the assembled
    // interior rows must reproduce that to rounding.
    const Coefficients c = make_coeffs("x", "1", "0");
    const SpaceTimeGrid g(33, 8, 1.0);
    const double alpha = 10.0;
    const SpatialOperator op = assemble(c, g, 2, alpha, BoundaryPair::neumann());

    std::vector<double> u1(g.nx, 1.0), u2(g.nx), out;
    for (int i = 0; i < g.nx; ++i) u2[i] = std::exp(-alpha * g.x_nodes[i]);

    op.apply(u1, out);
    for (int i = 1; i + 1 < g.nx; ++i) CHECK(std::abs(out[i]) <= 1e-12 * std::abs(op.diag[i]));

    op.apply(u2, out);
    for (int i = 1; i + 1 < g.nx; ++i) {
        const double scale = std::abs(op.sub[i] * u2[i - 1]) + std::abs(op.diag[i] * u2[i]) +
                             std::abs(op.sup[i] * u2[i + 1]);
        CHECK(std::abs(out[i]) <= 1e-12 * scale);
    }
}

TEST_CASE("theta step preserves constants with Neumann ends") {
    const Coefficients c = make_coeffs("x*(2+cos(2*pi*t))", "2+cos(2*pi*t)", "0");
    const SpaceTimeGrid g(31, 10, 1.0);
    const std::vector<double> ones(g.nx, 1.0);
    for (double theta : {0.0, 0.5, 1.0}) {
        const SpatialOperator op = assemble(c, g, 1, 5.0, BoundaryPair::neumann());
        const SpatialOperator prev = assemble(c, g, 0, 5.0, BoundaryPair::neumann());
        const std::vector<double> out = step(ones, op, &prev, g.dt, theta);
        for (double v : out) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("constant potential step is the scalar backward Euler factor") {
    const double cval = 0.8;
    const Coefficients c = make_coeffs("0", "0", "0.8");
    const SpaceTimeGrid g(31, 10, 1.0);
    const SpatialOperator op = assemble(c, g, 0, 0.0, BoundaryPair::neumann());
    const std::vector<double> out = step(std::vector<double>(g.nx, 1.0), op, nullptr, g.dt, 1.0);
    for (double v : out) CHECK(v == doctest::Approx(1.0 / (1.0 + cval * g.dt)).epsilon(1e-14));
}

TEST_CASE("heat step damps the discrete Dirichlet mode exactly") {
    const Coefficients c = make_coeffs("0", "0", "0");
    const SpaceTimeGrid g(41, 16, 1.0);
    const SpatialOperator op = assemble(c, g, 0, 0.0, BoundaryPair::dirichlet());
    std::vector<double> u(g.nx);
    for (int i = 0; i < g.nx; ++i) u[i] = std::sin(M_PI * g.x_nodes[i]);
    u[0] = u[g.nx - 1] = 0.0;
    const double lambda_h = 2.0 * (1.0 - std::cos(M_PI * g.dx)) / (g.dx * g.dx);
    const std::vector<double> out = step(u, op, nullptr, g.dt, 1.0);
    for (int i = 0; i < g.nx; ++i)
        CHECK(std::abs(out[i] - u[i] / (1.0 + g.dt * lambda_h)) <= 1e-12);
}

TEST_CASE("implicit steps preserve positivity at any drift rate") {
    const Coefficients c =
        make_coeffs("-(x^2/2-(0.5+0.2*sin(2*pi*t))*x)", "-(x-(0.5+0.2*sin(2*pi*t)))",
                    "1+cos(2*pi*x)");  // V >= 0
    const SpaceTimeGrid g(41, 16, 1.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (double alpha : {0.0, 1.0, 10.0, 100.0, 1000.0}) {
        const SpatialOperator op = assemble(c, g, 5, alpha, BoundaryPair::neumann());
        for (int rep = 0; rep < 4; ++rep) {
            std::vector<double> u(g.nx);
            for (double& v : u) v = unif(rng);
            for (double v : step(u, op, nullptr, g.dt, 1.0)) CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("the implicit matrix is an M-matrix for every drift rate") {
    const Coefficients c = make_coeffs("x^3/3", "x^2", "cos(2*pi*x)+1");  // V >= 0
    const SpaceTimeGrid g(33, 8, 1.0);
    for (double alpha : {0.0, 1.0, 10.0, 100.0, 1000.0}) {
        const SpatialOperator op = assemble(c, g, 1, alpha, BoundaryPair::neumann());
        for (int i = 0; i < g.nx; ++i) {
            if (i > 0) CHECK(op.sub[i] <= 0.0);
            if (i + 1 < g.nx) CHECK(op.sup[i] <= 0.0);
            const double offsum = (i > 0 ? -op.sub[i] : 0.0) + (i + 1 < g.nx ? -op.sup[i] : 0.0);
            CHECK(1.0 + g.dt * op.diag[i] > g.dt * offsum);
        }
    }
}

TEST_CASE("Robin with eta zero assembles the Neumann rows bit for bit") {
    const Coefficients c = make_coeffs("x", "1", "cos(2*pi*x)");
    const SpaceTimeGrid g(33, 8, 1.0);
    const SpatialOperator neumann = assemble(c, g, 2, 3.0, BoundaryPair::neumann());
    const SpatialOperator robin = assemble(c, g, 2, 3.0, BoundaryPair::robin(0.0));
    CHECK(std::memcmp(neumann.sub.data(), robin.sub.data(), sizeof(double) * g.nx) == 0);
    CHECK(std::memcmp(neumann.diag.data(), robin.diag.data(), sizeof(double) * g.nx) == 0);
    CHECK(std::memcmp(neumann.sup.data(), robin.sup.data(), sizeof(double) * g.nx) == 0);
}

TEST_CASE("tridiagonal solver flags zero pivots") {
    std::vector<double> sub{0, 1}, diag{0, 1}, sup{1, 0}, rhs{1, 1}, x;
    CHECK_THROWS_AS(solve_tridiagonal(sub, diag, sup, rhs, x), SingularSystem);
}

TEST_SUITE_END();

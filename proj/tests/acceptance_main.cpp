// Acceptance suite: runs every criterion end to end and prints one
// [PASS]/[FAIL] line per criterion. Exit code = number of failed criteria.
//
// Usage: floqeig_acceptance [--cli /path/to/floqeig]

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "floqeig/errors.hpp"
#include "floqeig/floquet.hpp"
#include "floqeig/limits.hpp"
#include "floqeig/scenario.hpp"
#include "floqeig/subdomain.hpp"
#include "floqeig/temporal.hpp"
#include "floqeig/verify.hpp"
#include "test_support.hpp"

using namespace floqeig;
using nlohmann::json;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Scenario inline_scenario(const std::string& m, const std::string& dxm, const std::string& V,
                         const std::string& b = "") {
    json j = testsupport::scenario_doc("inline", m, dxm, V);
    if (!b.empty()) j["expressions"]["b"] = b;
    return parse_scenario(j.dump());
}

double solve_lambda(const Scenario& s, double alpha, int nx, int nt) {
    const SpaceTimeGrid g(nx, nt, s.coefficients.T);
    return principal_eigenvalue(build_monodromy(s, g, alpha)).lambda;
}

// Composite Simpson of f over [a, b]; the independent quadrature oracle.
double simpson(const std::function<double(double)>& f, double a, double b, int n = 512) {
    double sum = f(a) + f(b);
    for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(a + (b - a) * k / n);
    return sum * (b - a) / n / 3.0;
}

// ---------------------------------------------------------------- criterion 1
void criterion1() {
    bool ok = true;
    std::ostringstream detail;

    // (a) constant potential: lambda == c at every drift rate
    const Scenario sc = inline_scenario("x*(2+sin(2*pi*t))", "2+sin(2*pi*t)", "0.7",
                                        "2+sin(2*pi*t)");
    double worst_a = 0.0;
    for (double alpha : {0.0, 1.0, 10.0, 100.0, 1000.0})
        worst_a = std::max(worst_a, std::abs(solve_lambda(sc, alpha, 101, 100) - 0.7));
    ok = ok && worst_a <= 1e-8;
    detail << "const gap " << fmt(worst_a);

    // (b) adding a constant shifts lambda by exactly that constant
    const Scenario s1 = catalog_scenario("interior_max_moving");
    Scenario s2 = s1;
    s2.coefficients.V_expr = Expr::parse("(x^2 + 0.3*sin(2*pi*t)) + 0.37");
    const double shift_err =
        std::abs(solve_lambda(s2, 7.0, 121, 160) - solve_lambda(s1, 7.0, 121, 160) - 0.37);
    ok = ok && shift_err <= 1e-8;
    detail << ", shift err " << fmt(shift_err);

    // (c) time-only potentials: lambda == the period mean
    struct TimeOnly {
        const char* expr;
        double mean;
    };
    const TimeOnly cases[] = {{"sin(2*pi*t)", 0.0},
                              {"0.3+cos(2*pi*t)", 0.3},
                              {"sin(2*pi*t)^2", 0.5}};
    double worst_c = 0.0;
    for (const TimeOnly& tc : cases) {
        const Scenario st = inline_scenario("x", "1", tc.expr, "1");
        for (double alpha : {1.0, 100.0})
            worst_c = std::max(worst_c,
                               std::abs(solve_lambda(st, alpha, 101, 128) - tc.mean));
    }
    ok = ok && worst_c <= 1e-8;
    detail << ", time-only gap " << fmt(worst_c);

    report(1, ok, "exact identities (constant, shift, time-only potentials)", detail.str());
}

// ---------------------------------------------------------------- criterion 2
void criterion2() {
    Coefficients c0;
    c0.T = 1.0;
    c0.D = 1.0;
    c0.m_expr = Expr::parse("0");
    c0.dxm_expr = Expr::parse("0");
    c0.V_expr = Expr::parse("0");

    const std::vector<double> ns = {101, 201, 401};
    auto refine = [&](const std::function<double(const SpaceTimeGrid&)>& solve) {
        std::vector<double> vals;
        for (double n : ns) {
            const SpaceTimeGrid g(static_cast<int>(n), 2 * static_cast<int>(n), 1.0);
            vals.push_back(solve(g));
        }
        return testsupport::extrapolate3(ns, vals);
    };

    const double dd = refine([&](const SpaceTimeGrid& g) {
        return subdomain_eigenvalue(c0, MovingInterval::fixed(0.25, 0.75),
                                    BoundaryKind::Dirichlet, BoundaryKind::Dirichlet, g)
            .lambda;
    });
    const double dd_err = std::abs(dd - 4 * M_PI * M_PI) / (4 * M_PI * M_PI);

    const double nd = refine([&](const SpaceTimeGrid& g) {
        return subdomain_eigenvalue(c0, MovingInterval::fixed(0.0, 1.0), BoundaryKind::Neumann,
                                    BoundaryKind::Dirichlet, g)
            .lambda;
    });
    const double nd_err = std::abs(nd - M_PI * M_PI / 4) / (M_PI * M_PI / 4);

    // independent oracle: bisection on the symmetric Robin dispersion relation
    auto dispersion = [](double mu) { return mu * std::tan(mu / 2.0) - 1.0; };
    double lo = 1e-12, hi = M_PI - 1e-12;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (dispersion(mid) > 0 ? hi : lo) = mid;
    }
    const double mu = 0.5 * (lo + hi);
    const double robin = refine([&](const SpaceTimeGrid& g) {
        return robin_eigenvalue(c0, MovingInterval::fixed(0.0, 1.0), 1.0, RobinForm::NeumannForm,
                                g)
            .lambda;
    });
    const double robin_err = std::abs(robin - mu * mu);

    const bool ok = dd_err <= 1e-3 && nd_err <= 1e-3 && robin_err <= 1e-6;
    report(2, ok, "analytic eigenvalue oracles under refinement",
           "pinned rel " + fmt(dd_err) + ", mixed rel " + fmt(nd_err) + ", robin abs " +
               fmt(robin_err));
}

// ------------------------------------------------------------ criteria 3/4/5c
bool sweep_criterion(const std::string& name, std::ostringstream& detail) {
    const VerifyOptions options;
    const VerifyReport r = run_verify(catalog_scenario(name), options);
    detail << name << ": final " << fmt(r.final_gap) << (r.status == VerifyStatus::Pass ? "" : "!")
           << "; ";
    return r.status == VerifyStatus::Pass;
}

void criterion3() {
    bool ok = true;
    std::ostringstream detail;
    for (const char* name : {"monotone_drift", "two_interior_maxima", "boundary_maxima_pair",
                             "interior_max_moving"})
        ok = sweep_criterion(name, detail) && ok;
    report(3, ok, "curve-average limits reached along the drift ladder", detail.str());
}

void criterion4() {
    bool ok = true;
    std::ostringstream detail;

    const Scenario s = catalog_scenario("staircase_product");
    const CriticalStructure cs = classify(s);
    const bool sets_ok = cs.E == std::set<int>{0, 4} && cs.E_NN == std::set<int>{9} &&
                         cs.E_ND == std::set<int>{2} && cs.E_DN == std::set<int>{5} &&
                         cs.E_DD == std::set<int>{7};
    ok = ok && sets_ok;
    detail << "index sets " << (sets_ok ? "exact" : "WRONG") << "; ";

    const SpaceTimeGrid g(201, 400, 1.0);
    const LimitPrediction p = predict_limit_spatial(s, g);
    std::set<std::string> sources;
    for (const LimitCandidate& cand : p.candidates) sources.insert(cand.source.describe());
    const bool display_ok =
        sources == std::set<std::string>{"avg_V(kappa_0)", "avg_V(kappa_4)",
                                         "lambda_NN(kappa_9,kappa_10)",
                                         "lambda_ND(kappa_2,kappa_3)",
                                         "lambda_DN(kappa_5,kappa_6)",
                                         "lambda_DD(kappa_7,kappa_8)"};
    ok = ok && display_ok;
    detail << "candidate display " << (display_ok ? "exact" : "WRONG") << "; ";

    ok = sweep_criterion("staircase_product", detail) && ok;
    report(4, ok, "flat-interval bookkeeping and its sweep", detail.str());
}

void criterion5() {
    bool ok = true;
    std::ostringstream detail;

    // closed form of the push-right-then-left limit, three instances
    struct Instance {
        const char* V;
        std::function<double(double, double)> v;
    };
    const Instance instances[] = {
        {"x", [](double x, double) { return x; }},
        {"x^2+0.2*x*sin(2*pi*t)",
         [](double x, double t) { return x * x + 0.2 * x * std::sin(2 * M_PI * t); }},
        {"cos(pi*x)+0.1*cos(2*pi*t)",
         [](double x, double t) { return std::cos(M_PI * x) + 0.1 * std::cos(2 * M_PI * t); }},
    };
    const SpaceTimeGrid g(201, 400, 1.0);
    double worst = 0.0;
    for (const Instance& inst : instances) {
        json j = testsupport::scenario_doc("switch", "x*sin(2*pi*t)", "sin(2*pi*t)", inst.V);
        j["expressions"]["b"] = "sin(2*pi*t)";
        j["partition_hint"] = json::array({0.5});
        const Scenario s = parse_scenario(j.dump());
        const double solved = limit_eigenvalue_temporal(s, g).lambda;
        const double target = simpson([&](double t) { return inst.v(1.0, t); }, 0.0, 0.5) +
                              simpson([&](double t) { return inst.v(0.0, t); }, 0.5, 1.0);
        worst = std::max(worst, std::abs(solved - target));
    }
    ok = ok && worst <= 1e-6;
    detail << "switch closed form err " << fmt(worst) << "; ";

    // no-flat-segment display: all boundary-trace integrals
    {
        const Scenario s = inline_scenario("x*cos(2*pi*t)", "cos(2*pi*t)",
                                           "cos(pi*x)+0.3*sin(2*pi*t)", "cos(2*pi*t)");
        const double solved = limit_eigenvalue_temporal(s, g).lambda;
        auto V = [](double x, double t) {
            return std::cos(M_PI * x) + 0.3 * std::sin(2 * M_PI * t);
        };
        const double target = simpson([&](double t) { return V(1.0, t); }, 0.0, 0.25) +
                              simpson([&](double t) { return V(0.0, t); }, 0.25, 0.75) +
                              simpson([&](double t) { return V(1.0, t); }, 0.75, 1.0);
        const double err = std::abs(solved - target);
        ok = ok && err <= 1e-6;
        detail << "segment-sum err " << fmt(err) << "; ";
    }

    for (const char* name :
         {"drift_pause_then_push", "drift_sign_switch", "drift_isolated_stop"})
        ok = sweep_criterion(name, detail) && ok;
    report(5, ok, "piecewise period problems and their sweeps", detail.str());
}

// ---------------------------------------------------------------- criterion 6
void criterion6() {
    Coefficients c;
    c.T = 1.0;
    c.D = 1.0;
    c.m_expr = Expr::parse("0");
    c.dxm_expr = Expr::parse("0");
    c.V_expr = Expr::parse("cos(2*pi*x)");
    const SpaceTimeGrid g(201, 400, 1.0);
    const StripTable t =
        shrinking_strip_limit(c, IntervalCurve::constant(0.25), {0.1, 0.05, 0.025}, g);
    bool ok = t.rows.size() == 3;
    double prev = 1e30;
    for (const auto& [delta, lambda] : t.rows) {
        const double gap = std::abs(lambda);  // curve average of V at x = 0.25 is 0
        ok = ok && gap < prev;
        prev = gap;
    }
    ok = ok && prev <= 2e-2;
    report(6, ok, "free-ends strip value approaches the centre average as it shrinks",
           "last gap " + fmt(prev));
}

// ---------------------------------------------------------------- criterion 7
void criterion7() {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    bool ok = true;
    std::ostringstream detail;

    const std::vector<std::string> pool = {"interior_max_moving", "two_interior_maxima",
                                           "plateau_max", "boundary_maxima_pair",
                                           "staircase_product"};
    auto pick = [&](auto& v) { return v[rng() % v.size()]; };

    {  // period-map positivity
        int bad = 0;
        for (int rep = 0; rep < 20; ++rep) {
            const Scenario s = catalog_scenario(pick(pool));
            const SpaceTimeGrid g(41, 32, 1.0);
            const MonodromyOperator m = build_monodromy(s, g, 1.0 + 99.0 * unif(rng));
            std::vector<double> u = testsupport::random_positive(g.nx, rng);
            m.apply(u);
            for (double v : u)
                if (!(v > 0.0)) ++bad;
        }
        ok = ok && bad == 0;
        detail << "positivity bad " << bad << "; ";
    }
    {  // potential monotonicity
        int bad = 0;
        for (int rep = 0; rep < 20; ++rep) {
            const double a = unif(rng), b = 0.05 + unif(rng);
            const std::string v1 = "cos(2*pi*x)*" + testsupport::num17(a);
            const std::string v2 =
                v1 + " + " + testsupport::num17(b) + "*(1+sin(2*pi*(t+x)))";  // nonneg bump
            const Scenario sa = inline_scenario("x", "1", v1);
            const Scenario sb = inline_scenario("x", "1", v2);
            const SpaceTimeGrid g(41, 32, 1.0);
            const double alpha = 30.0 * unif(rng);
            const double la = principal_eigenvalue(build_monodromy(sa, g, alpha)).lambda;
            const double lb = principal_eigenvalue(build_monodromy(sb, g, alpha)).lambda;
            if (!(la <= lb + 1e-10)) ++bad;
        }
        ok = ok && bad == 0;
        detail << "monotone-V bad " << bad << "; ";
    }
    {  // Robin monotonicity in eta
        Coefficients c;
        c.T = 1.0;
        c.D = 1.0;
        c.m_expr = Expr::parse("0");
        c.dxm_expr = Expr::parse("0");
        int bad = 0;
        for (int rep = 0; rep < 20; ++rep) {
            c.V_expr = Expr::parse("cos(2*pi*x)*" + testsupport::num17(unif(rng)) + "+" +
                                   testsupport::num17(unif(rng)) + "*sin(2*pi*t)");
            const double a = 0.05 + 0.3 * unif(rng);
            const double w = 0.3 + 0.5 * unif(rng);
            const MovingInterval box = MovingInterval::fixed(a, std::min(0.98, a + w));
            const SpaceTimeGrid g(41, 32, 1.0);
            double prev = -1e30;
            for (double eta : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
                const double l =
                    robin_eigenvalue(c, box, eta, RobinForm::NeumannForm, g).lambda;
                if (!(l >= prev - 1e-10)) ++bad;
                prev = l;
            }
        }
        ok = ok && bad == 0;
        detail << "robin bad " << bad << "; ";
    }
    {  // time-origin invariance
        int bad = 0;
        PowerOptions po;
        po.tol = 1e-12;
        for (int rep = 0; rep < 20; ++rep) {
            const Scenario s = catalog_scenario(pick(pool));
            const SpaceTimeGrid g(41, 32, 1.0);
            const MonodromyOperator m = build_monodromy(s, g, 1.0 + 49.0 * unif(rng));
            const double base = principal_eigenvalue(m, po).lambda;
            const int k = 1 + static_cast<int>(rng() % (g.nt - 1));
            if (std::abs(principal_eigenvalue(m.rotated(k), po).lambda - base) > 1e-10) ++bad;
        }
        ok = ok && bad == 0;
        detail << "rotation bad " << bad << "; ";
    }
    {  // resets fix ones
        int bad = 0;
        for (int rep = 0; rep < 20; ++rep) {
            PeriodStep step;
            step.kind = PeriodStep::Kind::Reset;
            const int n = 11 + static_cast<int>(rng() % 40);
            switch (rng() % 4) {
                case 0: step.reset = ResetKind::Identity; break;
                case 1: step.reset = ResetKind::CollapseToLeft; break;
                case 2: step.reset = ResetKind::CollapseToRight; break;
                default:
                    step.reset = ResetKind::Extend;
                    step.extend_lo = 1 + static_cast<int>(rng() % (n / 2));
                    step.extend_hi = step.extend_lo + 1 + static_cast<int>(rng() % (n / 3));
            }
            std::vector<double> ones(n, 1.0);
            step.apply(ones);
            for (double v : ones)
                if (v != 1.0) ++bad;
        }
        ok = ok && bad == 0;
        detail << "reset-ones bad " << bad << "; ";
    }
    {  // limit eigenfunctions stay flat on signed segments
        int bad = 0;
        const std::vector<std::string> drifts = {"2*max(0,-sin(2*pi*t))", "sin(2*pi*t)",
                                                 "2*(sin(2*pi*t)^2)^0.5"};
        for (int rep = 0; rep < 20; ++rep) {
            const std::string b = pick(drifts);
            json j = testsupport::scenario_doc(
                "flat", "x*(" + b + ")", b,
                "cos(pi*x)*" + testsupport::num17(0.2 + unif(rng)) + "+" +
                    testsupport::num17(unif(rng)) + "*cos(2*pi*t)");
            j["expressions"]["b"] = b;
            const Scenario s = parse_scenario(j.dump());
            const SpaceTimeGrid g(41, 64, 1.0);
            try {
                const EigenResult r = limit_eigenvalue_temporal(s, g);
                const TemporalPartition part = partition_time(
                    [&s](double t) { return s.coefficients.b(t); }, g, {});
                for (const TemporalSegment& seg : part.segments) {
                    if (seg.sign == SegmentSign::ZeroDrift) continue;
                    for (int k = seg.k0 + 1; k <= seg.k1; ++k) {
                        double lo = r.at(0, k), hi = r.at(0, k);
                        for (int i = 1; i < g.nx; ++i) {
                            lo = std::min(lo, r.at(i, k));
                            hi = std::max(hi, r.at(i, k));
                        }
                        if (hi - lo > 1e-10) ++bad;
                    }
                }
            } catch (const std::exception&) {
                ++bad;
            }
        }
        ok = ok && bad == 0;
        detail << "flat-segment bad " << bad << "; ";
    }
    {  // start independence
        int bad = 0;
        const Scenario s = catalog_scenario("drift_pause_then_push");
        const SpaceTimeGrid g(41, 64, 1.0);
        const TemporalPartition part =
            partition_time([&s](double t) { return s.coefficients.b(t); }, g,
                           s.temporal_partition_hint);
        const MonodromyOperator op = build_period_operator(s, part, g);
        const double ref = principal_eigenvalue(op).lambda;
        const MonodromyOperator full =
            build_monodromy(catalog_scenario("interior_max_moving"), g, 20.0);
        const double ref_full = principal_eigenvalue(full).lambda;
        for (int rep = 0; rep < 20; ++rep) {
            PowerOptions po;
            po.start = testsupport::random_positive(g.nx, rng);
            const bool temporal_case = rep % 2 == 0;
            const double got = principal_eigenvalue(temporal_case ? op : full, po).lambda;
            if (std::abs(got - (temporal_case ? ref : ref_full)) > 1e-9) ++bad;
        }
        ok = ok && bad == 0;
        detail << "start bad " << bad;
    }

    report(7, ok, "randomised property suites", detail.str());
}

// ---------------------------------------------------------------- criterion 8
void criterion8(const std::string& cli) {
    if (cli.empty()) {
        report(8, false, "negative control through the CLI", "no --cli path given");
        return;
    }
    Scenario s = catalog_scenario("const_potential");
    json doc = json::parse(serialize_scenario(s));
    const double prediction = 0.7;
    doc["expected_limit"] = {{"kind", "explicit_value"}, {"value", prediction + 0.5}};
    testsupport::TempFile file(doc.dump());

    const std::string cmd =
        cli + " verify " + file.path() + " --alphas 1,2,4 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        report(8, false, "negative control through the CLI", "popen failed");
        return;
    }
    std::string out;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    const int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

    bool ok = exit_code == 3;
    std::string status_text = "exit " + std::to_string(exit_code);
    try {
        const json reports = json::parse(out);
        status_text += ", status " + reports.at(0).at("status").get<std::string>();
        ok = ok && reports.at(0).at("status") == "FAIL";
    } catch (const std::exception&) {
        ok = false;
        status_text += ", unparseable output";
    }
    report(8, ok, "a mislabelled expected limit is rejected", status_text);
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--cli") == 0) cli = argv[i + 1];

    const auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8(cli);
    const auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::printf("%d/8 criteria passed in %.1f s\n", 8 - g_failures, dt / 1000.0);
    return g_failures;
}

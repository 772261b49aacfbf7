#include "floqeig/limits.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "floqeig/errors.hpp"
#include "floqeig/subdomain.hpp"

namespace floqeig {

std::string CandidateSource::describe() const {
    if (kind == Kind::CurveAverage) return "avg_V(kappa_" + std::to_string(curve) + ")";
    auto letter = [](BoundaryKind k) { return k == BoundaryKind::Neumann ? "N" : "D"; };
    return std::string("lambda_") + letter(p) + letter(q) + "(kappa_" + std::to_string(curve) +
           ",kappa_" + std::to_string(curve + 1) + ")";
}

std::string LimitPrediction::to_json() const {
    nlohmann::json j;
    j["candidates"] = nlohmann::json::array();
    for (const LimitCandidate& c : candidates)
        j["candidates"].push_back({{"source", c.source.describe()}, {"value", c.value}});
    for (const FailedCandidate& f : failed)
        j["failed"].push_back({{"source", f.source.describe()}, {"reason", f.reason}});
    j["minimum"] = minimum;
    j["argmin"] = argmin.describe();
    return j.dump(2);
}

double curve_average(const std::function<double(double, double)>& V,
                     const std::function<double(double)>& kappa, double T, int quad_n) {
    if (quad_n < 8 || quad_n % 2 != 0)
        throw std::invalid_argument("curve_average needs an even panel count >= 8");
    const double h = T / quad_n;
    double sum = 0.0;
    for (int k = 0; k <= quad_n; ++k) {
        const double t = T * k / quad_n;
        const double f = V(kappa(t), t);
        const double w = (k == 0 || k == quad_n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        sum += w * f;
    }
    return sum * h / 3.0 / T;
}

CriticalStructure classify(const Scenario& scenario) {
    if (!scenario.annotation)
        throw HypothesisViolation("scenario carries no critical-curve annotation");
    const CurveAnnotation& ann = *scenario.annotation;
    const int N = ann.interval_count() - 1;  // intervals 0..N
    if (N < 0) throw HypothesisViolation("annotation has no labelled interval");

    // The classification needs the curves to span all of [0,1].
    for (double t : {0.0, scenario.coefficients.T * 0.37, scenario.coefficients.T * 0.71}) {
        if (std::abs(ann.curves.front().at(t)) > 1e-12 ||
            std::abs(ann.curves.back().at(t) - 1.0) > 1e-12)
            throw HypothesisViolation("first and last curves must be the interval ends 0 and 1");
    }

    CriticalStructure cs;
    cs.interval_count = N + 1;
    for (int i = 0; i <= N; ++i) {
        switch (ann.interval_labels[i]) {
            case IntervalLabel::Neg: cs.A.insert(i); break;
            case IntervalLabel::Zero: cs.B.insert(i); break;
            case IntervalLabel::Pos: cs.C.insert(i); break;
        }
    }
    for (int i = 0; i < N; ++i)
        if (ann.interval_labels[i] == ann.interval_labels[i + 1])
            throw HypothesisViolation("adjacent intervals " + std::to_string(i) + "," +
                                      std::to_string(i + 1) + " share the label '" +
                                      to_string(ann.interval_labels[i]) + "'");

    const auto in = [](const std::set<int>& s, int i) { return s.count(i) > 0; };

    // Local-maximum curves: falling after rising, or a falling (rising) first
    // (last) interval making the domain end a maximum.
    if (in(cs.A, 0)) cs.E.insert(0);
    for (int i = 1; i <= N; ++i)
        if (in(cs.C, i - 1) && in(cs.A, i)) cs.E.insert(i);
    if (in(cs.C, N)) cs.E.insert(N + 1);

    // Flat intervals; boundary kinds forced by the flanking drift directions
    // (drift pointing into the flat pins nothing: Neumann; drift pulling away
    // pins the endpoint: Dirichlet).
    for (int i = 0; i <= N; ++i) {
        if (!in(cs.B, i)) continue;
        const bool has_left = i - 1 >= 0;
        const bool has_right = i + 1 <= N;
        if (!has_left && !has_right) {
            // Single flat interval spanning [0,1]: no drift at all, so the
            // plain Neumann problem governs.
            cs.E_NN.insert(i);
            continue;
        }
        if (has_left && has_right) {
            if (in(cs.C, i - 1) && in(cs.A, i + 1)) cs.E_NN.insert(i);
            else if (in(cs.C, i - 1) && in(cs.C, i + 1)) cs.E_ND.insert(i);
            else if (in(cs.A, i - 1) && in(cs.A, i + 1)) cs.E_DN.insert(i);
            else if (in(cs.A, i - 1) && in(cs.C, i + 1)) cs.E_DD.insert(i);
        } else if (!has_left) {
            if (in(cs.A, 1)) cs.E_NN.insert(0);
            else if (in(cs.C, 1)) cs.E_ND.insert(0);
        } else {  // i == N
            if (in(cs.C, N - 1)) cs.E_NN.insert(N);
            else if (in(cs.A, N - 1)) cs.E_DN.insert(N);
        }
    }

    // Every flat interval must have landed in exactly one E set.
    for (int i : cs.B) {
        const int hits = static_cast<int>(cs.E_NN.count(i)) + static_cast<int>(cs.E_ND.count(i)) +
                         static_cast<int>(cs.E_DN.count(i)) + static_cast<int>(cs.E_DD.count(i));
        if (hits != 1)
            throw HypothesisViolation("flat interval " + std::to_string(i) +
                                      " does not match any boundary-kind case");
    }
    return cs;
}

namespace {

LimitCandidate make_average_candidate(const Scenario& scenario, int curve_index, int quad_n) {
    const AnnotatedCurve& curve = scenario.annotation->curves[curve_index];
    const Coefficients& c = scenario.coefficients;
    LimitCandidate cand;
    cand.source = {CandidateSource::Kind::CurveAverage, curve_index, BoundaryKind::Neumann,
                   BoundaryKind::Neumann};
    cand.value = curve_average([&c](double x, double t) { return c.V(x, t); },
                               [&curve](double t) { return curve.at(t); }, c.T, quad_n);
    return cand;
}

void finish(LimitPrediction& p) {
    if (p.candidates.empty())
        throw HypothesisViolation("no admissible limit candidate survived");
    p.minimum = std::numeric_limits<double>::infinity();
    for (const LimitCandidate& c : p.candidates) {
        if (c.value < p.minimum) {
            p.minimum = c.value;
            p.argmin = c.source;
        }
    }
}

}  // namespace

LimitPrediction predict_limit_nondegenerate(const Scenario& scenario, int quad_n) {
    const CriticalStructure cs = classify(scenario);
    if (!cs.B.empty())
        throw HypothesisViolation("flat interval present; use the spatial prediction");
    LimitPrediction p;
    for (int i : cs.E) p.candidates.push_back(make_average_candidate(scenario, i, quad_n));
    finish(p);
    return p;
}

LimitPrediction predict_limit_spatial(const Scenario& scenario, const SpaceTimeGrid& grid,
                                      int quad_n, double tol, long max_iter) {
    const CriticalStructure cs = classify(scenario);
    LimitPrediction p;
    for (int i : cs.E) p.candidates.push_back(make_average_candidate(scenario, i, quad_n));

    struct Case {
        const std::set<int>* set;
        BoundaryKind pk, qk;
    };
    const Case cases[] = {
        {&cs.E_NN, BoundaryKind::Neumann, BoundaryKind::Neumann},
        {&cs.E_ND, BoundaryKind::Neumann, BoundaryKind::Dirichlet},
        {&cs.E_DN, BoundaryKind::Dirichlet, BoundaryKind::Neumann},
        {&cs.E_DD, BoundaryKind::Dirichlet, BoundaryKind::Dirichlet},
    };
    for (const Case& c : cases) {
        for (int i : *c.set) {
            CandidateSource src{CandidateSource::Kind::Subdomain, i, c.pk, c.qk};
            MovingInterval interval{IntervalCurve::of(scenario.annotation->curves[i]),
                                    IntervalCurve::of(scenario.annotation->curves[i + 1])};
            try {
                const EigenResult r = subdomain_eigenvalue(scenario.coefficients, interval, c.pk,
                                                           c.qk, grid, tol, max_iter);
                p.candidates.push_back({src, r.lambda});
            } catch (const std::exception& e) {
                p.failed.push_back({src, e.what()});
            }
        }
    }
    finish(p);
    return p;
}

}  // namespace floqeig

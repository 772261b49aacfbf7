#include "floqeig/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "floqeig/errors.hpp"

namespace floqeig {

using nlohmann::json;

const char* to_string(IntervalLabel label) {
    switch (label) {
        case IntervalLabel::Neg: return "neg";
        case IntervalLabel::Zero: return "zero";
        case IntervalLabel::Pos: return "pos";
    }
    return "?";
}

const char* to_string(LimitKind kind) {
    switch (kind) {
        case LimitKind::CurveAverageMin: return "curve_average_min";
        case LimitKind::SpatialFormula: return "spatial_formula";
        case LimitKind::TemporalProblem: return "temporal_problem";
        case LimitKind::ExplicitValue: return "explicit_value";
    }
    return "?";
}

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ParseError("unknown key '" + it.key() + "' in " + where);
}

IntervalLabel parse_label(const std::string& s) {
    if (s == "neg") return IntervalLabel::Neg;
    if (s == "zero") return IntervalLabel::Zero;
    if (s == "pos") return IntervalLabel::Pos;
    throw ParseError("bad interval label '" + s + "' (want neg|zero|pos)");
}

BoundaryKind parse_boundary_kind(const std::string& s) {
    if (s == "neumann") return BoundaryKind::Neumann;
    if (s == "dirichlet") return BoundaryKind::Dirichlet;
    if (s == "robin") return BoundaryKind::Robin;
    throw ParseError("bad boundary kind '" + s + "' (want neumann|dirichlet|robin)");
}

const char* boundary_kind_name(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::Neumann: return "neumann";
        case BoundaryKind::Dirichlet: return "dirichlet";
        case BoundaryKind::Robin: return "robin";
    }
    return "?";
}

LimitKind parse_limit_kind(const std::string& s) {
    if (s == "curve_average_min") return LimitKind::CurveAverageMin;
    if (s == "spatial_formula") return LimitKind::SpatialFormula;
    if (s == "temporal_problem") return LimitKind::TemporalProblem;
    if (s == "explicit_value") return LimitKind::ExplicitValue;
    throw ParseError("bad expected_limit kind '" + s + "'");
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ParseError("missing key '" + key + "' in " + where);
    if (!j[key].is_number()) throw ParseError("key '" + key + "' in " + where + " must be a number");
    return j[key].get<double>();
}

std::string require_string(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ParseError("missing key '" + key + "' in " + where);
    if (!j[key].is_string()) throw ParseError("key '" + key + "' in " + where + " must be a string");
    return j[key].get<std::string>();
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("scenario file must be a JSON object");
    reject_unknown_keys(j,
                        {"name", "T", "D", "expressions", "boundary", "curves", "labels",
                         "partition_hint", "expected_limit"},
                        "scenario");

    Scenario s;
    s.name = require_string(j, "name", "scenario");
    s.coefficients.T = require_number(j, "T", "scenario");
    if (!(s.coefficients.T > 0)) throw ParseError("T must be positive");
    if (j.contains("D")) {
        s.coefficients.D = require_number(j, "D", "scenario");
        if (!(s.coefficients.D > 0)) throw ParseError("D must be positive");
    }

    if (!j.contains("expressions") || !j["expressions"].is_object())
        throw ParseError("missing 'expressions' table");
    const json& ex = j["expressions"];
    reject_unknown_keys(ex, {"m", "dxm", "V", "b"}, "expressions");
    s.coefficients.m_expr = Expr::parse(require_string(ex, "m", "expressions"));
    s.coefficients.dxm_expr = Expr::parse(require_string(ex, "dxm", "expressions"));
    s.coefficients.V_expr = Expr::parse(require_string(ex, "V", "expressions"));
    if (ex.contains("b")) s.coefficients.b_expr = Expr::parse(require_string(ex, "b", "expressions"));

    if (!j.contains("boundary") || !j["boundary"].is_object())
        throw ParseError("missing 'boundary' table");
    const json& bj = j["boundary"];
    reject_unknown_keys(bj, {"left", "right", "eta"}, "boundary");
    s.boundary.left = parse_boundary_kind(require_string(bj, "left", "boundary"));
    s.boundary.right = parse_boundary_kind(require_string(bj, "right", "boundary"));
    if (bj.contains("eta")) {
        const double eta = require_number(bj, "eta", "boundary");
        if (!std::isfinite(eta)) throw ParseError("boundary eta must be finite");
        s.boundary.eta_left = s.boundary.eta_right = eta;
    }

    if (j.contains("curves")) {
        if (!j["curves"].is_array()) throw ParseError("'curves' must be an array");
        CurveAnnotation ann;
        for (const json& cj : j["curves"]) {
            if (!cj.is_object()) throw ParseError("each curve must be a table");
            reject_unknown_keys(cj, {"expr", "rate"}, "curves[]");
            AnnotatedCurve curve;
            curve.expr = Expr::parse(require_string(cj, "expr", "curves[]"));
            curve.rate = cj.contains("rate") ? Expr::parse(require_string(cj, "rate", "curves[]"))
                                             : Expr();
            ann.curves.push_back(std::move(curve));
        }
        if (!j.contains("labels") || !j["labels"].is_array())
            throw ParseError("'curves' requires a 'labels' array");
        for (const json& lj : j["labels"]) {
            if (!lj.is_string()) throw ParseError("labels must be strings");
            ann.interval_labels.push_back(parse_label(lj.get<std::string>()));
        }
        if (ann.curves.size() != ann.interval_labels.size() + 1)
            throw ParseError("need exactly one label per interval: " +
                             std::to_string(ann.curves.size()) + " curves vs " +
                             std::to_string(ann.interval_labels.size()) + " labels");
        s.annotation = std::move(ann);
    } else if (j.contains("labels")) {
        throw ParseError("'labels' requires 'curves'");
    }

    if (j.contains("partition_hint")) {
        if (!j["partition_hint"].is_array()) throw ParseError("'partition_hint' must be an array");
        for (const json& hj : j["partition_hint"]) {
            if (!hj.is_number()) throw ParseError("partition_hint entries must be numbers");
            s.temporal_partition_hint.push_back(hj.get<double>());
        }
        for (size_t i = 0; i < s.temporal_partition_hint.size(); ++i) {
            const double h = s.temporal_partition_hint[i];
            if (!(h > 0) || !(h < s.coefficients.T))
                throw ParseError("partition_hint entry " + fmt(h) + " outside (0,T)");
            if (i > 0 && !(h > s.temporal_partition_hint[i - 1]))
                throw ParseError("partition_hint must be strictly increasing");
        }
    }

    if (j.contains("expected_limit")) {
        const json& el = j["expected_limit"];
        if (!el.is_object()) throw ParseError("'expected_limit' must be a table");
        reject_unknown_keys(el, {"kind", "value"}, "expected_limit");
        ExpectedLimit lim;
        lim.kind = parse_limit_kind(require_string(el, "kind", "expected_limit"));
        if (el.contains("value")) lim.value = require_number(el, "value", "expected_limit");
        else if (lim.kind == LimitKind::ExplicitValue)
            throw ParseError("expected_limit kind explicit_value requires 'value'");
        s.expected_limit = lim;
    }

    validate_scenario(s, 33);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["T"] = s.coefficients.T;
    j["D"] = s.coefficients.D;
    json ex;
    ex["m"] = s.coefficients.m_expr.source();
    ex["dxm"] = s.coefficients.dxm_expr.source();
    ex["V"] = s.coefficients.V_expr.source();
    if (s.coefficients.has_b()) ex["b"] = s.coefficients.b_expr.source();
    j["expressions"] = ex;
    json bj;
    bj["left"] = boundary_kind_name(s.boundary.left);
    bj["right"] = boundary_kind_name(s.boundary.right);
    if (s.boundary.left == BoundaryKind::Robin || s.boundary.right == BoundaryKind::Robin)
        bj["eta"] = s.boundary.eta_left;
    j["boundary"] = bj;
    if (s.annotation) {
        json curves = json::array();
        for (const AnnotatedCurve& c : s.annotation->curves) {
            json cj;
            cj["expr"] = c.expr.source();
            if (!c.rate.empty()) cj["rate"] = c.rate.source();
            curves.push_back(cj);
        }
        j["curves"] = curves;
        json labels = json::array();
        for (IntervalLabel l : s.annotation->interval_labels) labels.push_back(to_string(l));
        j["labels"] = labels;
    }
    if (!s.temporal_partition_hint.empty()) j["partition_hint"] = s.temporal_partition_hint;
    if (s.expected_limit) {
        json el;
        el["kind"] = to_string(s.expected_limit->kind);
        if (s.expected_limit->kind == LimitKind::ExplicitValue)
            el["value"] = s.expected_limit->value;
        j["expected_limit"] = el;
    }
    return j.dump(2) + "\n";
}

namespace {

constexpr double kPeriodicityTol = 1e-10;
constexpr double kSignTol = 1e-8;        // label validation
constexpr double kRateTol = 1e-6;        // curve-rate check
constexpr double kSlopeEntryTol = 1e-4;  // m vs dxm entry check (m may be piecewise C^1)
constexpr double kDerivativeStep = 1e-5;

void check_periodic(const char* name, const Expr& f, double T, const std::vector<double>& xs,
                    const std::vector<double>& ts) {
    for (double x : xs)
        for (double t : ts) {
            const double a = f(x, t);
            const double b = f(x, t + T);
            if (std::abs(a - b) > kPeriodicityTol * (1.0 + std::abs(a)))
                throw ValidationError(std::string(name) + " is not T-periodic at (x=" + fmt(x) +
                                      ", t=" + fmt(t) + "): f(t)=" + fmt(a) +
                                      " vs f(t+T)=" + fmt(b));
        }
}

}  // namespace

void validate_scenario(const Scenario& s, int nprobe) {
    const Coefficients& c = s.coefficients;
    const double T = c.T;
    std::vector<double> xs(nprobe), ts(nprobe);
    for (int i = 0; i < nprobe; ++i) {
        xs[i] = static_cast<double>(i) / (nprobe - 1);
        ts[i] = T * i / (nprobe - 1);
    }

    check_periodic("m", c.m_expr, T, xs, ts);
    check_periodic("dxm", c.dxm_expr, T, xs, ts);
    check_periodic("V", c.V_expr, T, xs, ts);
    if (c.has_b()) check_periodic("b", c.b_expr, T, {0.0}, ts);

    // dxm must be the spatial derivative of m (entry check, not differencing).
    for (double x : xs) {
        if (x < kDerivativeStep || x > 1.0 - kDerivativeStep) continue;
        for (double t : ts) {
            const double fd = (c.m(x + kDerivativeStep, t) - c.m(x - kDerivativeStep, t)) /
                              (2.0 * kDerivativeStep);
            if (std::abs(fd - c.dxm(x, t)) > kSlopeEntryTol * (1.0 + std::abs(fd)))
                throw ValidationError("dxm disagrees with the slope of m at (x=" + fmt(x) +
                                      ", t=" + fmt(t) + "): slope=" + fmt(fd) +
                                      " vs dxm=" + fmt(c.dxm(x, t)));
        }
    }

    if (c.has_b()) {
        for (double x : xs)
            for (double t : ts)
                if (std::abs(c.dxm(x, t) - c.b(t)) > 1e-10)
                    throw ValidationError("dxm is not x-independent although b is declared, at (x=" +
                                          fmt(x) + ", t=" + fmt(t) + ")");
    }

    if (!s.annotation) return;
    const CurveAnnotation& ann = *s.annotation;
    if (ann.curves.empty()) throw ValidationError("annotation carries no curve");

    for (double t : ts) {
        for (size_t i = 0; i + 1 < ann.curves.size(); ++i) {
            const double lo = ann.curves[i].at(t);
            const double hi = ann.curves[i + 1].at(t);
            if (!(lo < hi))
                throw ValidationError("curve ordering violated at t=" + fmt(t) + ": kappa_" +
                                      std::to_string(i) + "=" + fmt(lo) + " >= kappa_" +
                                      std::to_string(i + 1) + "=" + fmt(hi));
        }
        for (const AnnotatedCurve& curve : ann.curves) {
            const double v = curve.at(t);
            if (v < -1e-12 || v > 1.0 + 1e-12)
                throw ValidationError("curve leaves [0,1] at t=" + fmt(t) + ": value " + fmt(v));
        }
    }

    // Rates: closed-form, checked against a central difference.
    for (size_t i = 0; i < ann.curves.size(); ++i) {
        const AnnotatedCurve& curve = ann.curves[i];
        for (double t : ts) {
            const double fd =
                (curve.at(t + kDerivativeStep) - curve.at(t - kDerivativeStep)) /
                (2.0 * kDerivativeStep);
            if (curve.rate.empty()) {
                if (std::abs(fd) > kRateTol)
                    throw ValidationError("curve " + std::to_string(i) +
                                          " has no rate but is not constant (slope " + fmt(fd) +
                                          " at t=" + fmt(t) + ")");
            } else if (std::abs(fd - curve.rate_at(t)) > kRateTol) {
                throw ValidationError("curve " + std::to_string(i) + " rate mismatch at t=" +
                                      fmt(t) + ": slope=" + fmt(fd) +
                                      " vs rate=" + fmt(curve.rate_at(t)));
            }
        }
    }

    // Sampled sign of dxm on each interval interior must match its label;
    // samples at the interval midpoint and quartiles.
    for (int i = 0; i < ann.interval_count(); ++i) {
        const IntervalLabel label = ann.interval_labels[i];
        for (double t : ts) {
            const double lo = ann.curves[i].at(t);
            const double w = ann.curves[i + 1].at(t) - lo;
            for (double frac : {0.25, 0.5, 0.75}) {
                const double x = lo + frac * w;
                const double v = c.dxm(x, t);
                const bool ok = (label == IntervalLabel::Neg && v < -kSignTol) ||
                                (label == IntervalLabel::Zero && std::abs(v) <= kSignTol) ||
                                (label == IntervalLabel::Pos && v > kSignTol);
                if (!ok)
                    throw ValidationError("interval " + std::to_string(i) + " labelled '" +
                                          to_string(label) + "' but dxm(" + fmt(x) + "," + fmt(t) +
                                          ")=" + fmt(v));
            }
        }
    }
}

}  // namespace floqeig

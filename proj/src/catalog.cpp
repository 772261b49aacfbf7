#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "floqeig/errors.hpp"
#include "floqeig/scenario.hpp"

namespace floqeig {

using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Piecewise-polynomial drift profiles in x. Each interval between consecutive
// knots carries sign -1, 0 or +1; on signed intervals the slope is the bump
// amp*(x-a)*(b-x) (vanishing at both knots), on zero intervals it is flat.
// m is the running integral, a C^1 piecewise cubic.
struct SlopeProfile {
    std::vector<double> knots;  // k_0 = 0 < ... < k_M = 1
    std::vector<int> signs;     // M entries
    double amp = 1.0;

    std::string slope_expr() const {
        std::string out = "piecewise(";
        const int m = static_cast<int>(signs.size());
        for (int i = 0; i < m; ++i) {
            const std::string piece =
                signs[i] == 0
                    ? std::string("0")
                    : num(amp * signs[i]) + "*(x-" + num(knots[i]) + ")*(" + num(knots[i + 1]) +
                          "-x)";
            if (i + 1 < m)
                out += "x<" + num(knots[i + 1]) + ", " + piece + ", ";
            else
                out += piece;
        }
        return out + ")";
    }

    std::string integral_expr() const {
        std::string out = "piecewise(";
        const int m = static_cast<int>(signs.size());
        double offset = 0.0;
        for (int i = 0; i < m; ++i) {
            const double a = knots[i];
            const double len = knots[i + 1] - a;
            std::string piece;
            if (signs[i] == 0) {
                piece = num(offset);
            } else {
                // integral of s*amp*(u)*(len-u), u = x-a
                piece = num(offset) + " + " + num(amp * signs[i]) + "*(" + num(len) +
                        "*(x-" + num(a) + ")^2/2 - (x-" + num(a) + ")^3/3)";
                offset += amp * signs[i] * len * len * len / 6.0;
            }
            if (i + 1 < m)
                out += "x<" + num(knots[i + 1]) + ", " + piece + ", ";
            else
                out += piece;
        }
        return out + ")";
    }
};

json curve(const std::string& expr) { return json{{"expr", expr}}; }
json curve(const std::string& expr, const std::string& rate) {
    return json{{"expr", expr}, {"rate", rate}};
}

json base(const std::string& name, const std::string& m, const std::string& dxm,
          const std::string& V) {
    json j;
    j["name"] = name;
    j["T"] = 1.0;
    j["D"] = 1.0;
    j["expressions"] = {{"m", m}, {"dxm", dxm}, {"V", V}};
    j["boundary"] = {{"left", "neumann"}, {"right", "neumann"}};
    return j;
}

json knot_curves(const SlopeProfile& p) {
    json curves = json::array();
    for (double k : p.knots) curves.push_back(curve(num(k)));
    return curves;
}

json labels_of(const SlopeProfile& p) {
    json labels = json::array();
    for (int s : p.signs) labels.push_back(s < 0 ? "neg" : (s > 0 ? "pos" : "zero"));
    return labels;
}

std::vector<json> catalog_documents() {
    std::vector<json> docs;

    {  // Constant potential; the eigenvalue equals it for every drift rate.
        json j = base("const_potential", "x*(2+sin(2*pi*t))", "2+sin(2*pi*t)", "0.7");
        j["expressions"]["b"] = "2+sin(2*pi*t)";
        j["curves"] = json::array({curve("0"), curve("1")});
        j["labels"] = json::array({"pos"});
        j["expected_limit"] = {{"kind", "explicit_value"}, {"value", 0.7}};
        docs.push_back(j);
    }
    {  // Potential depending on time alone: lambda == its period mean, any alpha.
        json j = base("time_only_potential", "x", "1", "sin(2*pi*t)");
        j["expressions"]["b"] = "1";
        j["curves"] = json::array({curve("0"), curve("1")});
        j["labels"] = json::array({"pos"});
        j["expected_limit"] = {{"kind", "explicit_value"}, {"value", 0.0}};
        docs.push_back(j);
    }
    {  // Strictly increasing drift potential: the right end wins.
        json j = base("monotone_drift", "x", "1", "cos(pi*x)+0.5*sin(2*pi*t)");
        j["expressions"]["b"] = "1";
        j["curves"] = json::array({curve("0"), curve("1")});
        j["labels"] = json::array({"pos"});
        j["expected_limit"] = {{"kind", "curve_average_min"}};
        docs.push_back(j);
    }
    {  // Two interior maximum curves, one moving; the smaller average wins.
        const std::string k1 = "(0.25+0.05*sin(2*pi*t))";
        json j = base("two_interior_maxima",
                      "-20*(x^4/4 - (" + k1 + "+1.35)*x^3/3 + (" + k1 +
                          "*1.35+0.44)*x^2/2 - " + k1 + "*0.44*x)",
                      "-20*(x-" + k1 + ")*(x-0.55)*(x-0.8)",
                      "cos(2*pi*x) + 0.4*x*sin(2*pi*t)");
        j["curves"] = json::array({curve("0"), curve("0.25+0.05*sin(2*pi*t)",
                                                     "0.1*pi*cos(2*pi*t)"),
                                   curve("0.55"), curve("0.8"), curve("1")});
        j["labels"] = json::array({"pos", "neg", "pos", "neg"});
        j["expected_limit"] = {{"kind", "curve_average_min"}};
        docs.push_back(j);
    }
    {  // Interior minimum: both boundary points are local maxima.
        json j = base("boundary_maxima_pair", "x^2/2-0.6*x", "x-0.6",
                      "0.9-0.7*x+0.2*sin(2*pi*t)");
        j["curves"] = json::array({curve("0"), curve("0.6"), curve("1")});
        j["labels"] = json::array({"neg", "pos"});
        j["expected_limit"] = {{"kind", "curve_average_min"}};
        docs.push_back(j);
    }
    {  // Single interior maximum curve oscillating across the interval.
        const std::string k = "(0.5+0.2*sin(2*pi*t))";
        json j = base("interior_max_moving", "-(x^2/2 - " + k + "*x)", "-(x-" + k + ")",
                      "x^2 + 0.3*sin(2*pi*t)");
        j["curves"] = json::array(
            {curve("0"), curve("0.5+0.2*sin(2*pi*t)", "0.4*pi*cos(2*pi*t)"), curve("1")});
        j["labels"] = json::array({"pos", "neg"});
        j["expected_limit"] = {{"kind", "curve_average_min"}};
        docs.push_back(j);
    }
    {  // Staircase profile with flats: every competing-candidate type at once.
        SlopeProfile p;
        p.knots = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
        p.signs = {-1, +1, 0, +1, -1, 0, -1, 0, +1, 0};
        p.amp = 200.0;
        json j = base("staircase_product",
                      "(" + p.integral_expr() + ")*(1+0.5*sin(2*pi*t))",
                      "(" + p.slope_expr() + ")*(1+0.5*sin(2*pi*t))",
                      "cos(2*pi*x) + 0.3*sin(2*pi*t)");
        j["curves"] = knot_curves(p);
        j["labels"] = labels_of(p);
        j["expected_limit"] = {{"kind", "spatial_formula"}};
        docs.push_back(j);
    }
    {  // Flat maximum plateau between rising and falling drift.
        SlopeProfile p{{0.0, 0.35, 0.65, 1.0}, {+1, 0, -1}, 40.0};
        json j = base("plateau_max", "(" + p.integral_expr() + ")*(1+0.3*sin(2*pi*t))",
                      "(" + p.slope_expr() + ")*(1+0.3*sin(2*pi*t))",
                      "cos(2*pi*x) + 0.2*sin(2*pi*t)");
        j["curves"] = knot_curves(p);
        j["labels"] = labels_of(p);
        j["expected_limit"] = {{"kind", "spatial_formula"}};
        docs.push_back(j);
    }
    {  // Flat minimum plateau: both ends and the pinned strip compete.
        SlopeProfile p{{0.0, 0.4, 0.6, 1.0}, {-1, 0, +1}, 8.0};
        json j = base("plateau_min", "(" + p.integral_expr() + ")*(1+0.3*sin(2*pi*t))",
                      "(" + p.slope_expr() + ")*(1+0.3*sin(2*pi*t))",
                      "0.5-0.3*x+0.2*sin(2*pi*t)");
        j["curves"] = knot_curves(p);
        j["labels"] = labels_of(p);
        j["expected_limit"] = {{"kind", "spatial_formula"}};
        docs.push_back(j);
    }
    {  // Rising drift on both sides of an interior flat.
        SlopeProfile p{{0.0, 0.3, 0.5, 1.0}, {+1, 0, +1}, 8.0};
        json j = base("ascending_plateau", "(" + p.integral_expr() + ")*(1+0.3*sin(2*pi*t))",
                      "(" + p.slope_expr() + ")*(1+0.3*sin(2*pi*t))",
                      "cos(pi*x)+0.2*sin(2*pi*t)");
        j["curves"] = knot_curves(p);
        j["labels"] = labels_of(p);
        j["expected_limit"] = {{"kind", "spatial_formula"}};
        docs.push_back(j);
    }
    {  // Rising drift into a flat that reaches the right boundary.
        SlopeProfile p{{0.0, 0.6, 1.0}, {+1, 0}, 40.0};
        json j = base("ascending_plateau_right", "(" + p.integral_expr() + ")*(1+0.3*sin(2*pi*t))",
                      "(" + p.slope_expr() + ")*(1+0.3*sin(2*pi*t))",
                      "cos(2*pi*x)+0.2*sin(2*pi*t)");
        j["curves"] = knot_curves(p);
        j["labels"] = labels_of(p);
        j["expected_limit"] = {{"kind", "spatial_formula"}};
        docs.push_back(j);
    }
    {  // Falling drift on both sides of an interior flat.
        SlopeProfile p{{0.0, 0.5, 0.7, 1.0}, {-1, 0, -1}, 8.0};
        json j = base("descending_plateau", "(" + p.integral_expr() + ")*(1+0.3*sin(2*pi*t))",
                      "(" + p.slope_expr() + ")*(1+0.3*sin(2*pi*t))",
                      "0.4-0.2*x+0.3*sin(2*pi*t)");
        j["curves"] = knot_curves(p);
        j["labels"] = labels_of(p);
        j["expected_limit"] = {{"kind", "spatial_formula"}};
        docs.push_back(j);
    }
    {  // Flat at the left boundary, falling drift after it.
        SlopeProfile p{{0.0, 0.45, 1.0}, {0, -1}, 40.0};
        json j = base("descending_plateau_left", "(" + p.integral_expr() + ")*(1+0.3*sin(2*pi*t))",
                      "(" + p.slope_expr() + ")*(1+0.3*sin(2*pi*t))",
                      "cos(2*pi*x)+0.3*sin(2*pi*t)");
        j["curves"] = knot_curves(p);
        j["labels"] = labels_of(p);
        j["expected_limit"] = {{"kind", "spatial_formula"}};
        docs.push_back(j);
    }
    {  // Drift pauses for half the period, then pushes right.
        json j = base("drift_pause_then_push", "2*x*max(0,-sin(2*pi*t))",
                      "2*max(0,-sin(2*pi*t))", "cos(pi*x) + 0.3*cos(2*pi*t)");
        j["expressions"]["b"] = "2*max(0,-sin(2*pi*t))";
        j["partition_hint"] = json::array({0.5});
        j["expected_limit"] = {{"kind", "temporal_problem"}};
        docs.push_back(j);
    }
    {  // Drift pushes right, then left; only the boundary traces matter.
        json j = base("drift_sign_switch", "x*sin(2*pi*t)", "sin(2*pi*t)", "x");
        j["expressions"]["b"] = "sin(2*pi*t)";
        j["partition_hint"] = json::array({0.5});
        j["expected_limit"] = {{"kind", "temporal_problem"}};
        docs.push_back(j);
    }
    {  // Rightward drift with one isolated stop inside the period.
        json j = base("drift_isolated_stop", "2*x*(sin(2*pi*t)^2)^0.5", "2*(sin(2*pi*t)^2)^0.5",
                      "cos(2*pi*x)+0.2*sin(2*pi*t)");
        j["expressions"]["b"] = "2*(sin(2*pi*t)^2)^0.5";
        j["expected_limit"] = {{"kind", "temporal_problem"}};
        docs.push_back(j);
    }
    {  // Narrow flat strip around x = 0.25; its pinned-free eigenvalue governs.
        SlopeProfile p{{0.0, 0.2, 0.3, 1.0}, {+1, 0, -1}, 60.0};
        json j = base("narrow_plateau_strip", "(" + p.integral_expr() + ")*(1+0.3*sin(2*pi*t))",
                      "(" + p.slope_expr() + ")*(1+0.3*sin(2*pi*t))", "cos(2*pi*x)");
        j["curves"] = knot_curves(p);
        j["labels"] = labels_of(p);
        j["expected_limit"] = {{"kind", "spatial_formula"}};
        docs.push_back(j);
    }
    {  // Spatial flat [0.3,0.7] while the drift is active, drift pause after t=0.5.
        SlopeProfile p{{0.0, 0.3, 0.7, 1.0}, {+1, 0, -1}, 80.0};
        json j = base("plateau_with_drift_pause",
                      "(" + p.integral_expr() + ")*max(0,sin(2*pi*t))",
                      "(" + p.slope_expr() + ")*max(0,sin(2*pi*t))",
                      "cos(2*pi*x)+0.2*cos(2*pi*t)");
        j["curves"] = json::array({curve("0.3"), curve("0.7")});
        j["labels"] = json::array({"zero"});
        j["partition_hint"] = json::array({0.5});
        j["expected_limit"] = {{"kind", "temporal_problem"}};
        docs.push_back(j);
    }
    {  // Drift tent peaking at x = 0.5, active on the first half period only.
        json j = base("tent_with_drift_pause", "4*(0.5*x-x^2/2)*max(0,sin(2*pi*t))",
                      "4*(0.5-x)*max(0,sin(2*pi*t))", "cos(2*pi*x)+0.3*sin(2*pi*t)");
        j["curves"] = json::array({curve("0.5")});
        j["labels"] = json::array();
        j["partition_hint"] = json::array({0.5});
        j["expected_limit"] = {{"kind", "temporal_problem"}};
        docs.push_back(j);
    }
    return docs;
}

}  // namespace

std::vector<Scenario> builtin_catalog() {
    std::vector<Scenario> out;
    for (const json& doc : catalog_documents()) out.push_back(parse_scenario(doc.dump()));
    return out;
}

Scenario catalog_scenario(const std::string& name) {
    for (const json& doc : catalog_documents())
        if (doc["name"] == name) return parse_scenario(doc.dump());
    throw ValidationError("no catalog scenario named '" + name + "'");
}

}  // namespace floqeig

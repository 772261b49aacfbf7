#include <string>

#include <doctest.h>
#include <json.hpp>

#include "floqeig/errors.hpp"
#include "floqeig/scenario.hpp"
#include "test_support.hpp"

using namespace floqeig;
using nlohmann::json;
using testsupport::scenario_doc;
using testsupport::TempFile;

TEST_SUITE_BEGIN("scenario");

TEST_CASE("loads a plain file and samples its coefficients") {
    json j = scenario_doc("plain", "x", "1", "cos(2*pi*x)");
    TempFile file(j.dump());
    const Scenario s = load_scenario(file.path());
    CHECK(s.name == "plain");
    CHECK(s.coefficients.T == 1.0);
    CHECK(s.coefficients.dxm(0.3, 0.7) == 1.0);
    CHECK(s.coefficients.V(0.5, 0.1) == doctest::Approx(-1.0));
    CHECK(s.boundary.left == BoundaryKind::Neumann);
}

TEST_CASE("rejects a slope entry that is not the derivative of m") {
    json j = scenario_doc("bad_slope", "x", "2", "0");
    CHECK_THROWS_AS(parse_scenario(j.dump()), ValidationError);
}

TEST_CASE("rejects curve ordering violations and cites the sample time") {
    json j = scenario_doc("crossing", "x^2/2-0.5*x", "x-0.5", "0");
    j["curves"] = json::array({json{{"expr", "0.2"}},
                               json{{"expr", "0.3+0.3*sin(2*pi*t)"},
                                    {"rate", "0.6*pi*cos(2*pi*t)"}}});
    j["labels"] = json::array({"neg"});
    try {
        parse_scenario(j.dump());
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string what = e.what();
        CHECK(what.find("ordering") != std::string::npos);
        CHECK(what.find("t=") != std::string::npos);
    }
}

TEST_CASE("rejects labels that disagree with the sampled drift sign") {
    json j = scenario_doc("bad_label", "x", "1", "0");
    j["curves"] = json::array({json{{"expr", "0"}}, json{{"expr", "1"}}});
    j["labels"] = json::array({"neg"});  // dxm == 1 > 0
    CHECK_THROWS_AS(parse_scenario(j.dump()), ValidationError);
}

TEST_CASE("rejects non-periodic coefficients") {
    json j = scenario_doc("aperiodic", "x*t", "t", "0");
    CHECK_THROWS_AS(parse_scenario(j.dump()), ValidationError);
}

TEST_CASE("rejects unknown keys at every level") {
    json j = scenario_doc("unknown", "x", "1", "0");
    j["surprise"] = 1;
    CHECK_THROWS_AS(parse_scenario(j.dump()), ParseError);

    json j2 = scenario_doc("unknown2", "x", "1", "0");
    j2["expressions"]["w"] = "0";
    CHECK_THROWS_AS(parse_scenario(j2.dump()), ParseError);

    json j3 = scenario_doc("unknown3", "x", "1", "0");
    j3["boundary"]["flux"] = 1.0;
    CHECK_THROWS_AS(parse_scenario(j3.dump()), ParseError);
}

TEST_CASE("rejects declared b that differs from dxm") {
    json j = scenario_doc("bad_b", "x^2/2", "x", "0");
    j["expressions"]["b"] = "1";
    CHECK_THROWS_AS(parse_scenario(j.dump()), ValidationError);
}

TEST_CASE("rejects curves without rates unless constant") {
    json j = scenario_doc("no_rate", "x^2/2-0.5*x", "x-0.5", "0");
    j["curves"] = json::array({json{{"expr", "0.2+0.1*sin(2*pi*t)"}}, json{{"expr", "0.9"}}});
    j["labels"] = json::array({"neg"});
    CHECK_THROWS_AS(parse_scenario(j.dump()), ValidationError);
}

TEST_CASE("rejects a decreasing partition hint") {
    json j = scenario_doc("bad_hint", "x", "1", "0");
    j["expressions"]["b"] = "1";
    j["partition_hint"] = json::array({0.6, 0.4});
    CHECK_THROWS_AS(parse_scenario(j.dump()), ParseError);
}

TEST_CASE("malformed JSON raises ParseError") {
    CHECK_THROWS_AS(parse_scenario("{oops"), ParseError);
    TempFile file("not json at all");
    CHECK_THROWS_AS(load_scenario(file.path()), ParseError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/path.json"), ParseError);
}

TEST_CASE("catalog has full coverage and validates on a fine probe grid") {
    const std::vector<Scenario> catalog = builtin_catalog();
    CHECK(catalog.size() >= 14);
    for (const Scenario& s : catalog) {
        CAPTURE(s.name);
        CHECK(s.expected_limit.has_value());
        CHECK_NOTHROW(validate_scenario(s, 65));
    }
}

TEST_CASE("catalog b-carrying scenarios have x-independent slopes") {
    for (const Scenario& s : builtin_catalog()) {
        if (!s.coefficients.has_b()) continue;
        CAPTURE(s.name);
        for (int i = 0; i <= 16; ++i)
            for (int k = 0; k <= 16; ++k) {
                const double x = i / 16.0, t = k / 16.0;
                CHECK(std::abs(s.coefficients.dxm(x, t) - s.coefficients.b(t)) <= 1e-10);
            }
    }
}

TEST_CASE("serialisation round-trips to identical sampled values") {
    for (const Scenario& s : builtin_catalog()) {
        CAPTURE(s.name);
        const Scenario r = parse_scenario(serialize_scenario(s));
        CHECK(r.name == s.name);
        for (int i = 0; i <= 12; ++i)
            for (int k = 0; k <= 12; ++k) {
                const double x = i / 12.0, t = k / 12.0;
                CHECK(r.coefficients.m(x, t) == s.coefficients.m(x, t));
                CHECK(r.coefficients.dxm(x, t) == s.coefficients.dxm(x, t));
                CHECK(r.coefficients.V(x, t) == s.coefficients.V(x, t));
            }
        CHECK(r.temporal_partition_hint == s.temporal_partition_hint);
        if (s.annotation) {
            REQUIRE(r.annotation.has_value());
            CHECK(r.annotation->curves.size() == s.annotation->curves.size());
            CHECK(r.annotation->interval_labels == s.annotation->interval_labels);
        }
    }
}

TEST_CASE("catalog lookup by name") {
    const Scenario s = catalog_scenario("staircase_product");
    CHECK(s.annotation.has_value());
    CHECK(s.annotation->curves.size() == 11);
    CHECK(s.annotation->interval_labels.size() == 10);
    CHECK_THROWS_AS(catalog_scenario("no_such_entry"), ValidationError);
}

TEST_SUITE_END();

// Command-line front end: solve single instances, sweep the drift rate,
// compute limit predictions, and verify sweeps against predictions.
// JSON results go to stdout, diagnostics to stderr; CSV only via --out.
// Exit codes: 0 ok, 1 load error, 2 no convergence, 3 partial result,
// 4 hypothesis violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "floqeig/errors.hpp"
#include "floqeig/floquet.hpp"
#include "floqeig/limits.hpp"
#include "floqeig/scenario.hpp"
#include "floqeig/temporal.hpp"
#include "floqeig/verify.hpp"

namespace {

using namespace floqeig;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitLoadError = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitPartial = 3;
constexpr int kExitHypothesis = 4;

Scenario resolve_scenario(const std::string& ref) {
    if (ref.rfind("catalog:", 0) == 0) return catalog_scenario(ref.substr(8));
    return load_scenario(ref);
}

std::vector<double> parse_alphas(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ParseError("bad --alphas entry '" + item + "'");
        }
    }
    if (out.empty()) throw ParseError("--alphas needs at least one value");
    return out;
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) return false;
    out << text;
    return static_cast<bool>(out);
}

struct CommonFlags {
    int nx = 201;
    int nt = 400;
    double tol = 1e-10;
    long max_iter = 100000;
    double theta = 1.0;
    std::uint64_t seed = 12345;
};

int cmd_solve(const std::string& ref, double alpha, const CommonFlags& flags,
              const std::string& out_path) {
    const Scenario scenario = resolve_scenario(ref);
    const SpaceTimeGrid grid(flags.nx, flags.nt, scenario.coefficients.T);
    const MonodromyOperator m = build_monodromy(scenario, grid, alpha, flags.theta);
    PowerOptions popt;
    popt.tol = flags.tol;
    popt.max_iter = flags.max_iter;
    popt.seed = flags.seed;
    const EigenResult r = principal_eigenvalue(m, popt);

    json j;
    j["lambda"] = r.lambda;
    j["residual"] = r.residual;
    j["iterations"] = r.iterations;
    std::cout << j.dump(2) << "\n";

    if (!out_path.empty()) {
        std::ostringstream csv;
        r.write_trajectory_csv(csv, grid);
        if (!write_file(out_path, csv.str())) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return kExitLoadError;
        }
    }
    return kExitOk;
}

int cmd_sweep(const std::string& ref, const std::vector<double>& alphas, const CommonFlags& flags,
              int jobs, const std::string& out_path) {
    const Scenario scenario = resolve_scenario(ref);
    GridPolicy policy;
    policy.nx0 = flags.nx;
    policy.nt0 = flags.nt;
    const SweepTable table = alpha_sweep(scenario, alphas, policy, flags.tol, flags.max_iter, jobs,
                                         flags.theta, flags.seed);

    std::ostringstream csv;
    table.write_csv(csv);
    if (!out_path.empty()) {
        if (!write_file(out_path, csv.str())) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return kExitLoadError;
        }
    } else {
        std::cout << csv.str();
    }

    int failed = 0;
    for (const SweepRow& row : table.rows)
        if (!row.ok) {
            ++failed;
            std::cerr << "warning: alpha=" << row.alpha << " failed: " << row.error << "\n";
        }
    return failed > 0 ? kExitPartial : kExitOk;
}

int cmd_limit(const std::string& ref, const std::string& mode, const CommonFlags& flags) {
    const Scenario scenario = resolve_scenario(ref);
    const SpaceTimeGrid grid(flags.nx, flags.nt, scenario.coefficients.T);

    auto single = [](const char* source, double value) {
        json j;
        j["candidates"] = json::array({json{{"source", source}, {"value", value}}});
        j["minimum"] = value;
        j["argmin"] = source;
        return j.dump(2);
    };

    if (mode == "nondegenerate") {
        std::cout << predict_limit_nondegenerate(scenario).to_json() << "\n";
    } else if (mode == "spatial") {
        std::cout << predict_limit_spatial(scenario, grid, 256, flags.tol, flags.max_iter).to_json()
                  << "\n";
    } else if (mode == "temporal") {
        const EigenResult r = limit_eigenvalue_temporal(scenario, grid, flags.tol, flags.max_iter);
        std::cout << single("piecewise_period_problem", r.lambda) << "\n";
    } else if (mode == "mixed") {
        if (!scenario.annotation || scenario.annotation->curves.empty() ||
            scenario.temporal_partition_hint.empty())
            throw HypothesisViolation("mixed mode needs strip curves and a partition hint");
        const auto& curves = scenario.annotation->curves;
        const EigenResult r = mixed_degenerate_eigenvalue(
            scenario, curves.front().at(0.0), curves.back().at(0.0),
            scenario.temporal_partition_hint.front(), grid, flags.tol, flags.max_iter);
        std::cout << single("mixed_strip_problem", r.lambda) << "\n";
    } else {
        throw ParseError("bad --mode '" + mode + "'");
    }
    return kExitOk;
}

int cmd_verify(const std::string& ref, bool all_catalog, VerifyOptions options,
               const std::string& out_path) {
    std::vector<Scenario> scenarios;
    if (all_catalog) {
        scenarios = builtin_catalog();
    } else {
        scenarios.push_back(resolve_scenario(ref));
    }

    json reports = json::array();
    bool all_pass = true;
    for (const Scenario& scenario : scenarios) {
        const VerifyReport report = run_verify(scenario, options);
        std::cerr << report.to_text() << "\n";
        reports.push_back(json::parse(report.to_json()));
        all_pass = all_pass && report.status == VerifyStatus::Pass;
    }
    const std::string text = reports.dump(2) + "\n";
    std::cout << text;
    if (!out_path.empty() && !write_file(out_path, text)) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return kExitLoadError;
    }
    return all_pass ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Principal eigenvalues of time-periodic advection-diffusion problems"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string scenario_ref, out_path, alphas_text = "10,30,100,300";
    std::string mode = "spatial";
    double alpha = 0.0;
    int jobs = 1;
    bool all_catalog = false;
    double gap_tol = 5e-2;

    auto add_common = [&](CLI::App* cmd, bool needs_scenario = true) {
        if (needs_scenario)
            cmd->add_option("scenario", scenario_ref,
                            "scenario file path or catalog:<name>")
                ->required();
        cmd->add_option("--nx", flags.nx, "spatial nodes");
        cmd->add_option("--nt", flags.nt, "time steps per period");
        cmd->add_option("--tol", flags.tol, "power-iteration tolerance");
        cmd->add_option("--max-iter", flags.max_iter, "power-iteration cap");
        cmd->add_option("--theta", flags.theta, "time-stepping theta (1 = implicit Euler)");
        cmd->add_option("--seed", flags.seed, "seed for restart vectors");
    };

    CLI::App* solve = app.add_subcommand("solve", "principal eigenvalue of one instance");
    add_common(solve);
    solve->add_option("--alpha", alpha, "drift rate")->required();
    solve->add_option("--out", out_path, "write the eigenfunction trajectory CSV here");

    CLI::App* sweep = app.add_subcommand("sweep", "eigenvalues over a drift-rate ladder");
    add_common(sweep);
    sweep->add_option("--alphas", alphas_text, "comma-separated drift rates (ascending)");
    sweep->add_option("--jobs", jobs, "parallel rows");
    sweep->add_option("--out", out_path, "write CSV here instead of stdout");

    CLI::App* limit = app.add_subcommand("limit", "predicted large-drift limit");
    add_common(limit);
    limit->add_option("--mode", mode, "nondegenerate|spatial|temporal|mixed");

    CLI::App* verify = app.add_subcommand("verify", "sweep against the predicted limit");
    verify->add_option("scenario", scenario_ref, "scenario file path or catalog:<name>");
    verify->add_flag("--all-catalog", all_catalog, "verify every built-in scenario");
    verify->add_option("--alphas", alphas_text, "comma-separated drift rates");
    verify->add_option("--gap-tol", gap_tol, "largest acceptable final gap");
    verify->add_option("--jobs", jobs, "parallel scenarios/rows");
    verify->add_option("--tol", flags.tol, "power-iteration tolerance");
    verify->add_option("--seed", flags.seed, "seed for restart vectors");
    verify->add_option("--out", out_path, "also write the JSON reports here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(scenario_ref, alpha, flags, out_path);
        if (sweep->parsed())
            return cmd_sweep(scenario_ref, parse_alphas(alphas_text), flags, jobs, out_path);
        if (limit->parsed()) return cmd_limit(scenario_ref, mode, flags);
        if (verify->parsed()) {
            if (!all_catalog && scenario_ref.empty()) {
                std::cerr << "error: verify needs a scenario or --all-catalog\n";
                return kExitLoadError;
            }
            VerifyOptions options;
            options.alphas = parse_alphas(alphas_text);
            options.gap_tol = gap_tol;
            options.tol = flags.tol;
            options.max_iter = flags.max_iter;
            options.jobs = jobs;
            options.seed = flags.seed;
            return cmd_verify(scenario_ref, all_catalog, options, out_path);
        }
    } catch (const HypothesisViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const NoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLoadError;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLoadError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLoadError;
    }
    return kExitOk;
}

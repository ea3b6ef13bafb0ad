#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "oscfar/detector.hpp"
#include "oscfar/error.hpp"
#include "oscfar/monte_carlo.hpp"
#include "oscfar/pfa.hpp"
#include "oscfar/quadrature.hpp"
#include "oscfar/threshold.hpp"
#include "report.hpp"

namespace oscfar::cli {

namespace {

// Usage problem detected after CLI11 parsing (cross-flag constraints).
struct UsageError {
    std::string flag;
    std::string message;
};

struct Options {
    int N = 0;
    int M = 0;
    int n = 0;
    int k = 0;
    std::optional<double> tau;
    std::optional<double> pfa;
    bool check = false;

    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0;
    unsigned shards = 0;
    double ci_level = 0.99;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> grid_alphas;
    std::vector<double> grid_betas;
    double signal_scale = 1.0;

    double abs_tol = QuadratureSettings{}.abs_tol;
    double rel_tol = QuadratureSettings{}.rel_tol;
    int max_subdivisions = QuadratureSettings{}.max_subdivisions;

    std::vector<double> cuts;
    std::vector<double> crp;
    std::string cuts_file;
    std::string crp_file;

    std::string format = "plain";
    std::string out_path;
};

struct RunConfig {
    std::string command;
    Format format = Format::plain;
    std::optional<std::string> output_path;
};

std::string flag_for(const std::string& field) {
    static const std::map<std::string, std::string> renamed = {
        {"j", "n"}, {"s", "tau"}, {"count", "trials"}, {"z0", "cuts"}};
    std::string name = field;
    if (auto it = renamed.find(field); it != renamed.end()) {
        name = it->second;
    }
    std::replace(name.begin(), name.end(), '_', '-');
    return "--" + name;
}

Row geometry_row(const Options& o) {
    return {{"N", std::int64_t{o.N}}, {"M", std::int64_t{o.M}}, {"n", std::int64_t{o.n}},
            {"k", std::int64_t{o.k}}};
}

DetectorGeometry geometry_of(const Options& o) {
    DetectorGeometry g{o.N, o.M, o.n, o.k};
    g.validate();
    return g;
}

std::vector<double> read_cells(const std::string& path, const std::string& flag) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError{flag, "cannot open " + path};
    }
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream tokens(text);
    std::vector<double> out;
    std::string tok;
    while (tokens >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) {
                throw std::invalid_argument(tok);
            }
        } catch (const std::exception&) {
            throw UsageError{flag, "non-numeric cell '" + tok + "' in " + path};
        }
    }
    return out;
}

// --tau and --pfa are alternatives; returns the threshold multiplier and
// whether it was solved.
double resolve_tau(const Options& o, const DetectorGeometry& g, Row& params) {
    if (o.tau.has_value() == o.pfa.has_value()) {
        throw UsageError{"--tau", "exactly one of --tau or --pfa is required"};
    }
    if (o.tau) {
        DetectorConfig{g, *o.tau}.validate();
        params.emplace_back("tau", *o.tau);
        return *o.tau;
    }
    if (!(*o.pfa > 0.0 && *o.pfa < 1.0)) {
        throw InvalidArgument("pfa", "target Pfa must lie in (0, 1)");
    }
    const auto solved = solve_tau(g, *o.pfa);
    params.emplace_back("pfa", *o.pfa);
    params.emplace_back("tau", solved.tau);
    return solved.tau;
}

SimulationSettings simulation_of(const Options& o) {
    SimulationSettings s;
    s.trials = o.trials;
    s.seed = o.seed;
    s.shards = o.shards;
    s.ci_level = o.ci_level;
    s.validate();
    return s;
}

Report cmd_pfa(const Options& o) {
    const DetectorConfig config{geometry_of(o), *o.tau};
    config.validate();
    Report r{"pfa", geometry_row(o), {}, {}};
    r.parameters.emplace_back("tau", config.tau);
    r.parameters.emplace_back("check", o.check);

    const auto analytic = multipulse_os_pfa(config);
    Row row = geometry_row(o);
    row.emplace_back("tau", config.tau);
    row.emplace_back("pfa", analytic.value);
    row.emplace_back("condition_estimate", analytic.condition_estimate);
    row.emplace_back("ill_conditioned", analytic.ill_conditioned());
    if (o.check) {
        const auto quad = quad_pfa(config);
        row.emplace_back("quadrature_pfa", quad.value);
        row.emplace_back("quadrature_error", quad.error_estimate);
        row.emplace_back("difference", analytic.value - quad.value);
    }
    if (analytic.ill_conditioned()) {
        r.notes.push_back("closed-form sum is ill-conditioned (condition estimate above 1e6)");
    }
    r.results.push_back(std::move(row));
    return r;
}

Report cmd_solve(const Options& o) {
    const auto g = geometry_of(o);
    Report r{"solve", geometry_row(o), {}, {}};
    r.parameters.emplace_back("pfa", *o.pfa);
    const auto s = solve_tau(g, *o.pfa);
    Row row = geometry_row(o);
    row.emplace_back("target_pfa", *o.pfa);
    row.emplace_back("tau", s.tau);
    row.emplace_back("achieved_pfa", s.achieved_pfa);
    row.emplace_back("iterations", std::int64_t{s.iterations});
    row.emplace_back("bracket_low", s.bracket_low);
    row.emplace_back("bracket_high", s.bracket_high);
    r.results.push_back(std::move(row));
    return r;
}

Report cmd_oracle(const Options& o) {
    const DetectorConfig config{geometry_of(o), *o.tau};
    config.validate();
    QuadratureSettings qs{o.abs_tol, o.rel_tol, o.max_subdivisions};
    qs.validate();
    Report r{"oracle", geometry_row(o), {}, {}};
    r.parameters.emplace_back("tau", config.tau);
    r.parameters.emplace_back("abs_tol", qs.abs_tol);
    r.parameters.emplace_back("rel_tol", qs.rel_tol);
    r.parameters.emplace_back("max_subdivisions", std::int64_t{qs.max_subdivisions});

    const auto q = quad_pfa(config, qs);
    Row row = geometry_row(o);
    row.emplace_back("tau", config.tau);
    row.emplace_back("quadrature_pfa", q.value);
    row.emplace_back("error_estimate", q.error_estimate);
    r.results.push_back(std::move(row));
    return r;
}

Report cmd_decide(const Options& o) {
    auto cells_from = [](const std::vector<double>& inline_cells, const std::string& file,
                         const std::string& flag) {
        if (inline_cells.empty() == file.empty()) {
            throw UsageError{flag, "give cells either inline (" + flag + ") or from a file (" +
                                       flag + "-file), not both or neither"};
        }
        return file.empty() ? inline_cells : read_cells(file, flag + "-file");
    };
    const auto cuts = cells_from(o.cuts, o.cuts_file, "--cuts");
    const auto crp = cells_from(o.crp, o.crp_file, "--crp");

    Report r{"decide", {}, {}, {}};
    r.parameters = {{"M", std::uint64_t{cuts.size()}},
                    {"N", std::uint64_t{crp.size()}},
                    {"n", std::int64_t{o.n}},
                    {"k", std::int64_t{o.k}},
                    {"tau", *o.tau}};
    const auto d = decide_multi(cuts, crp, o.n, o.k, *o.tau);
    r.results.push_back({{"statistic", d.statistic},
                         {"threshold", d.threshold},
                         {"outcome", std::string(to_string(d.outcome))}});
    return r;
}

Report cmd_simulate(const Options& o) {
    const auto g = geometry_of(o);
    const ParetoParams params(o.alpha, o.beta);
    const auto settings = simulation_of(o);
    if (!(o.signal_scale >= 1.0) || !std::isfinite(o.signal_scale)) {
        throw InvalidArgument("signal-scale", "signal scale must be finite and >= 1");
    }

    Report r{"simulate", geometry_row(o), {}, {}};
    const DetectorConfig config{g, resolve_tau(o, g, r.parameters)};
    r.parameters.emplace_back("alpha", params.alpha());
    r.parameters.emplace_back("beta", params.beta());
    r.parameters.emplace_back("trials", settings.trials);
    r.parameters.emplace_back("seed", settings.seed);
    r.parameters.emplace_back("ci_level", settings.ci_level);

    const double analytic = multipulse_os_pfa(config).value;
    Row row = {{"alpha", params.alpha()}, {"beta", params.beta()}};
    if (o.signal_scale > 1.0) {
        r.parameters.emplace_back("signal_scale", o.signal_scale);
        r.notes.push_back(
            "NON-PAPER EXTENSION: cells under test multiplied by signal_scale as a crude "
            "target surrogate; no target model underlies this detection rate");
        const auto e = estimate_detection_rate(config, params, o.signal_scale, settings);
        row.emplace_back("signal_scale", o.signal_scale);
        row.emplace_back("trials", e.trials);
        row.emplace_back("hits", e.hits);
        row.emplace_back("detection_rate", e.pfa_hat);
        row.emplace_back("ci_low", e.ci_low);
        row.emplace_back("ci_high", e.ci_high);
        row.emplace_back("non_paper_extension", true);
    } else {
        const auto e = estimate_pfa(config, params, settings);
        row.emplace_back("trials", e.trials);
        row.emplace_back("hits", e.hits);
        row.emplace_back("pfa_hat", e.pfa_hat);
        row.emplace_back("ci_low", e.ci_low);
        row.emplace_back("ci_high", e.ci_high);
        row.emplace_back("analytic_pfa", analytic);
        row.emplace_back("covered", e.covers(analytic));
    }
    r.results.push_back(std::move(row));
    return r;
}

Report cmd_sweep(const Options& o) {
    const auto g = geometry_of(o);
    const auto settings = simulation_of(o);
    for (double a : o.grid_alphas) {
        ParetoParams(a, 1.0);
    }
    for (double b : o.grid_betas) {
        ParetoParams(1.0, b);
    }

    Report r{"sweep", geometry_row(o), {}, {}};
    const DetectorConfig config{g, resolve_tau(o, g, r.parameters)};
    r.parameters.emplace_back("trials", settings.trials);
    r.parameters.emplace_back("seed", settings.seed);
    r.parameters.emplace_back("ci_level", settings.ci_level);

    for (const auto& rec : cfar_sweep(config, o.grid_alphas, o.grid_betas, settings)) {
        r.results.push_back({{"alpha", rec.params.alpha()},
                             {"beta", rec.params.beta()},
                             {"trials", rec.estimate.trials},
                             {"hits", rec.estimate.hits},
                             {"pfa_hat", rec.estimate.pfa_hat},
                             {"ci_low", rec.estimate.ci_low},
                             {"ci_high", rec.estimate.ci_high},
                             {"analytic_pfa", rec.analytic_pfa},
                             {"covered", rec.covered}});
    }
    return r;
}

void add_geometry(CLI::App* cmd, Options& o, bool with_sizes) {
    if (with_sizes) {
        cmd->add_option("--N", o.N, "CRP length")->required();
        cmd->add_option("--M", o.M, "number of cells under test (pulses)")->required();
    }
    cmd->add_option("--n", o.n, "CRP order-statistic rank, 1 < n <= N")->required();
    cmd->add_option("--k", o.k, "CUT order-statistic rank, 1 <= k <= M")->required();
}

void add_format(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"plain", "csv", "json"}));
    cmd->add_option("--out", o.out_path, "write the report to this file");
}

void add_simulation(CLI::App* cmd, Options& o) {
    cmd->add_option("--trials", o.trials, "Monte Carlo trials");
    cmd->add_option("--seed", o.seed, "base seed (default 0)");
    cmd->add_option("--shards", o.shards, "worker threads, 0 = hardware concurrency");
    cmd->add_option("--ci-level", o.ci_level, "Wilson interval confidence level");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Multipulse order-statistic CFAR detector for Pareto Type I clutter", "oscfar"};
    app.require_subcommand(1);

    auto* pfa = app.add_subcommand("pfa", "closed-form false-alarm probability");
    add_geometry(pfa, o, true);
    pfa->add_option("--tau", o.tau, "threshold multiplier")->required();
    pfa->add_flag("--check", o.check, "also evaluate the quadrature oracle and report the difference");
    add_format(pfa, o);

    auto* solve = app.add_subcommand("solve", "threshold multiplier for a design Pfa");
    add_geometry(solve, o, true);
    solve->add_option("--pfa", o.pfa, "target false-alarm probability")->required();
    add_format(solve, o);

    auto* oracle = app.add_subcommand("oracle", "false-alarm probability by 2D adaptive quadrature");
    add_geometry(oracle, o, true);
    oracle->add_option("--tau", o.tau, "threshold multiplier")->required();
    oracle->add_option("--abs-tol", o.abs_tol, "absolute tolerance");
    oracle->add_option("--rel-tol", o.rel_tol, "relative tolerance");
    oracle->add_option("--max-subdivisions", o.max_subdivisions, "bisection budget");
    add_format(oracle, o);

    auto* decide = app.add_subcommand("decide", "apply the decision rule to given cells");
    add_geometry(decide, o, false);
    decide->add_option("--tau", o.tau, "threshold multiplier")->required();
    decide->add_option("--cuts", o.cuts, "cells under test, comma separated")->delimiter(',');
    decide->add_option("--crp", o.crp, "clutter range profile, comma separated")->delimiter(',');
    decide->add_option("--cuts-file", o.cuts_file, "file with cells under test");
    decide->add_option("--crp-file", o.crp_file, "file with CRP cells");
    add_format(decide, o);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo false-alarm estimate in Pareto clutter");
    add_geometry(simulate, o, true);
    simulate->add_option("--tau", o.tau, "threshold multiplier");
    simulate->add_option("--pfa", o.pfa, "design Pfa; tau is solved for it");
    simulate->add_option("--alpha", o.alpha, "Pareto shape")->required();
    simulate->add_option("--beta", o.beta, "Pareto scale")->required();
    simulate->add_option("--signal-scale", o.signal_scale,
                         "multiply CUTs by this factor (non-paper extension)");
    add_simulation(simulate, o);
    add_format(simulate, o);

    auto* sweep = app.add_subcommand("sweep", "CFAR check over an (alpha, beta) grid");
    add_geometry(sweep, o, true);
    sweep->add_option("--tau", o.tau, "threshold multiplier");
    sweep->add_option("--pfa", o.pfa, "design Pfa; tau is solved for it");
    sweep->add_option("--grid-alphas", o.grid_alphas, "Pareto shapes, comma separated")
        ->delimiter(',')
        ->required();
    sweep->add_option("--grid-betas", o.grid_betas, "Pareto scales, comma separated")
        ->delimiter(',')
        ->required();
    add_simulation(sweep, o);
    add_format(sweep, o);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    RunConfig run_config;
    run_config.command = app.get_subcommands().front()->get_name();
    run_config.format = o.format == "csv" ? Format::csv : o.format == "json" ? Format::json : Format::plain;
    if (!o.out_path.empty()) {
        run_config.output_path = o.out_path;
    }

    Report report;
    try {
        const auto& c = run_config.command;
        if (c == "pfa") {
            report = cmd_pfa(o);
        } else if (c == "solve") {
            report = cmd_solve(o);
        } else if (c == "oracle") {
            report = cmd_oracle(o);
        } else if (c == "decide") {
            report = cmd_decide(o);
        } else if (c == "simulate") {
            report = cmd_simulate(o);
        } else {
            report = cmd_sweep(o);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.flag << ": " << e.message << "\n";
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        err << "usage error: " << (e.field().empty() ? std::string("argument") : flag_for(e.field()))
            << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const ComputationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitComputation;
    }

    if (run_config.output_path) {
        std::ofstream file(*run_config.output_path);
        if (!file) {
            err << "error: cannot write " << *run_config.output_path << "\n";
            return kExitComputation;
        }
        write_report(report, run_config.format, file);
    } else {
        write_report(report, run_config.format, out);
    }
    return kExitOk;
}

}  // namespace oscfar::cli

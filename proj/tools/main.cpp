#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beam/csv.hpp"
#include "beam/errors.hpp"
#include "beam/experiments.hpp"
#include "beam/model1d.hpp"
#include "beam/scenario.hpp"

namespace {

std::ofstream open_csv(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    return out;
}

struct Options {
    std::string config;
    std::string out_dir = ".";
    std::vector<std::string> methods = {"mts", "amts", "amts_beam"};
    double x0 = 0.0, v0 = 0.0, t = 0.0;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    bool quiet = false;
};

beam::Scenario load(const Options& opt) {
    beam::Scenario sc = beam::load_scenario(opt.config);
    if (opt.seed) sc.bunch.seed = *opt.seed;
    return sc;
}

int cmd_run(const Options& opt) {
    const beam::Scenario sc = load(opt);
    const beam::RunOutputs out = beam::run_scenario(sc);
    beam::write_run_csvs(out, opt.out_dir);
    if (!opt.quiet)
        std::cout << "wrote " << opt.out_dir << "/diagnostics.csv (" << out.diag.size()
                  << " rows) and step_trace.csv (" << out.trace.size() << " rows); "
                  << out.solves << " self-field solves, " << out.wall_ms << " ms\n";
    return 0;
}

int cmd_sweep_beta(const Options& opt) {
    const auto rows = beam::model1d::beta_sweep();
    auto f = open_csv(opt.out_dir, "beta_sweep.csv");
    beam::write_beta_sweep_csv(rows, f);
    if (!opt.quiet) {
        for (const auto& r : rows)
            std::cout << "H=" << r.H << " beta=" << r.beta << " steps=" << r.steps
                      << " err=" << r.err << (r.broke ? " (breakdown)" : "") << "\n";
        std::cout << "wrote " << opt.out_dir << "/beta_sweep.csv\n";
    }
    return 0;
}

int cmd_error_vs_work(const Options& opt) {
    const beam::Scenario sc = load(opt);
    const beam::ErrorVsWorkReport rep = beam::error_vs_work(sc, opt.methods);
    auto f = open_csv(opt.out_dir, "error_vs_work.csv");
    beam::write_error_vs_work_csv(rep, f);
    if (!opt.quiet) {
        std::cout << "reference: " << rep.ref_solves << " solves, " << rep.ref_wall_ms
                  << " ms\n";
        for (const auto& p : rep.points)
            std::cout << p.method << " budget=" << p.budget << " solves=" << p.solves
                      << " err=" << p.err << " (" << p.wall_ms << " ms)\n";
        std::cout << "wrote " << opt.out_dir << "/error_vs_work.csv\n";
    }
    return 0;
}

int cmd_mts_vs_stale(const Options& opt) {
    const beam::Scenario sc = load(opt);
    const beam::MtsVsStaleReport rep = beam::mts_vs_stale(sc);
    auto f = open_csv(opt.out_dir, "mts_vs_stale.csv");
    beam::write_mts_vs_stale_csv(rep, f);
    if (!opt.quiet) {
        for (const auto& r : rep.rows)
            std::cout << r.table << " period=" << r.period << " solves=" << r.solves
                      << " err=" << r.err << " (" << r.wall_ms << " ms)\n";
        std::cout << "wrote " << opt.out_dir << "/mts_vs_stale.csv\n";
    }
    return 0;
}

int cmd_oracle1d(const Options& opt) {
    const beam::model1d::State1D s = beam::model1d::exact_solution(opt.x0, opt.v0, opt.t);
    std::cout << "x,v\n" << beam::csv::cell(s.x) << "," << beam::csv::cell(s.v) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relativistic charged-bunch integrator testbed"};
    app.require_subcommand(1);
    Options opt;

    std::uint64_t seed_value = 0;
    auto* seed_flag = app.add_option("--seed", seed_value, "override the scenario RNG seed");
    app.add_option("--threads", opt.threads, "worker-thread cap for experiment drivers")
        ->check(CLI::PositiveNumber);
    app.add_flag("--quiet", opt.quiet, "suppress progress output");

    auto* run = app.add_subcommand("run", "integrate one scenario, emit diagnostics CSVs");
    run->add_option("--config", opt.config, "scenario config file")->required();
    run->add_option("--out", opt.out_dir, "output directory");

    auto* sweep = app.add_subcommand("sweep-beta",
                                     "step-equalized accuracy sweep of the 1D model");
    sweep->add_option("--out", opt.out_dir, "output directory");

    auto* evw = app.add_subcommand("error-vs-work",
                                   "emittance error vs self-field-solve budget");
    evw->add_option("--config", opt.config, "scenario config file")->required();
    evw->add_option("--methods", opt.methods,
                    "comma-separated: mts, amts, amts_beam, amts_beta_<x>")
        ->delimiter(',');
    evw->add_option("--out", opt.out_dir, "output directory");

    auto* mvs = app.add_subcommand("mts-vs-stale",
                                   "refresh-period sweep: substepping vs stale reuse");
    mvs->add_option("--config", opt.config, "scenario config file")->required();
    mvs->add_option("--out", opt.out_dir, "output directory");

    auto* oracle = app.add_subcommand("oracle1d", "exact 1D inverse-square state");
    oracle->add_option("--x0", opt.x0, "initial position")->required();
    oracle->add_option("--v0", opt.v0, "initial velocity")->required();
    oracle->add_option("--t", opt.t, "evaluation time")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (seed_flag->count() > 0) opt.seed = seed_value;

    try {
        if (run->parsed()) return cmd_run(opt);
        if (sweep->parsed()) return cmd_sweep_beta(opt);
        if (evw->parsed()) return cmd_error_vs_work(opt);
        if (mvs->parsed()) return cmd_mts_vs_stale(opt);
        if (oracle->parsed()) return cmd_oracle1d(opt);
    } catch (const beam::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const beam::NumericalError& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return 2;
    } catch (const beam::DegenerateInput& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

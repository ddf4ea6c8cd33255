// Command-line front end for the sketched channel-estimation experiments.
//
//   subsketch simulate --out traces.csv            fading traces only
//   subsketch oneshot  --out trials.csv            one-shot + time-average sweep
//   subsketch subspace --out trials.csv            subspace estimators sweep
//   subsketch ccdf     --out results/              full sweep + CCDF tables
//
// Every subcommand takes --config/--seed/--trials/--out/--format and the
// solver overrides --tol/--max-iters. Validation failures exit nonzero with
// a JSON error summary on stderr.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "subsketch/runner.hpp"

namespace {

using subsketch::Scenario;

struct CommonArgs {
    std::string config;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 0;
    int trials = 0;
    double tol = 0.0;
    int max_iters = 0;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "scenario file (key=value document)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed, "override the scenario seed");
    cmd->add_option("--trials", args.trials, "override the trial count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", args.out, "output path (stdout when omitted)");
    cmd->add_option("--format", args.format, "trial table format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--tol", args.tol, "solver tolerance override")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", args.max_iters, "solver iteration cap override")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", args.threads, "worker threads (0 = hardware)");
}

Scenario build_scenario(const CLI::App* cmd, const CommonArgs& args) {
    Scenario s = args.config.empty() ? Scenario{} : subsketch::load_scenario(args.config);
    if (cmd->count("--seed")) s.seed = args.seed;
    if (cmd->count("--trials")) s.trials = args.trials;
    if (cmd->count("--tol")) s.solver.tolerance = args.tol;
    if (cmd->count("--max-iters")) s.solver.max_iterations = args.max_iters;
    subsketch::validate_scenario(s);
    return s;
}

template <typename Fn>
void emit(const std::string& path, Fn&& write) {
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    write(out);
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void report_failures(const subsketch::SweepResult& result) {
    for (const auto& cell : result.cells)
        if (cell.failures > 0)
            std::fprintf(stderr, "warning: cell snr=%g tau_c=%g: %d of %d records failed\n",
                         cell.cell.snr_db, cell.cell.tau_c, cell.failures, cell.records);
}

void write_trials(const std::string& path, const std::string& format,
                  const std::vector<subsketch::TrialRecord>& records) {
    emit(path, [&](std::ostream& out) {
        if (format == "json")
            subsketch::write_json(out, records);
        else
            subsketch::write_csv(out, records);
    });
}

int run_estimator_sweep(const CLI::App* cmd, const CommonArgs& args,
                        const std::vector<subsketch::Estimator>& estimators) {
    Scenario s = build_scenario(cmd, args);
    if (!estimators.empty()) {
        s.estimators = estimators;
        subsketch::validate_scenario(s);
    }
    const subsketch::SweepResult result = subsketch::run_sweep(s, args.threads);
    report_failures(result);
    write_trials(args.out, args.format, result.records);
    return 0;
}

int run_ccdf(const CLI::App* cmd, const CommonArgs& args) {
    Scenario s = build_scenario(cmd, args);
    const subsketch::SweepResult result = subsketch::run_sweep(s, args.threads);
    report_failures(result);

    const std::filesystem::path dir = args.out;
    std::filesystem::create_directories(dir);
    const std::string trials_name = args.format == "json" ? "trials.json" : "trials.csv";
    write_trials((dir / trials_name).string(), args.format, result.records);
    emit((dir / "ccdf_eta.csv").string(), [&](std::ostream& out) {
        subsketch::write_ccdf_csv(
            out, subsketch::ccdf_table(result.records, subsketch::CcdfMetric::eta));
    });
    emit((dir / "ccdf_mu.csv").string(), [&](std::ostream& out) {
        subsketch::write_ccdf_csv(
            out, subsketch::ccdf_table(result.records, subsketch::CcdfMetric::mu));
    });
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sketched large-array channel estimation experiments"};
    app.require_subcommand(1);

    CommonArgs sim_args, one_args, sub_args, ccdf_args;
    CLI::App* sim = app.add_subcommand("simulate", "emit fading traces only");
    add_common(sim, sim_args);
    CLI::App* one = app.add_subcommand("oneshot", "one-shot and time-average estimators");
    add_common(one, one_args);
    CLI::App* sub = app.add_subcommand("subspace", "subspace estimators");
    add_common(sub, sub_args);
    CLI::App* ccdf = app.add_subcommand("ccdf", "full sweep with CCDF tables");
    add_common(ccdf, ccdf_args);
    ccdf->get_option("--out")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            Scenario s = build_scenario(sim, sim_args);
            emit(sim_args.out,
                 [&](std::ostream& out) { subsketch::write_trace_csv(out, s); });
            return 0;
        }
        if (one->parsed())
            return run_estimator_sweep(one, one_args,
                                       {subsketch::Estimator::oneshot,
                                        subsketch::Estimator::time_average});
        if (sub->parsed())
            return run_estimator_sweep(sub, sub_args,
                                       {subsketch::Estimator::subspace_ls,
                                        subsketch::Estimator::subspace_only});
        return run_ccdf(ccdf, ccdf_args);
    } catch (const subsketch::ScenarioError& e) {
        nlohmann::json err;
        err["error"] = "validation";
        err["issues"] = e.issues;
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = "runtime";
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
}

// qslack command-line runner: run | oracle | selftest
#include "qslack/experiment.hpp"
#include "qslack/selftest.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace {

std::filesystem::path output_root() {
    const char *env = std::getenv("QSLACK_OUTPUT_ROOT");
    return env && *env ? std::filesystem::path(env) : std::filesystem::path("results");
}

int cmd_run(const std::string &path, std::optional<std::size_t> workers) {
    auto cfg = qslack::load_config(path);
    if (workers) {
        cfg.workers = *workers;
    }
    const auto res = qslack::run_experiment(cfg, output_root());
    std::vector<double> finals;
    std::vector<double> errors;
    for (const auto &r : res.runs) {
        finals.push_back(r.last().objective);
        errors.push_back(r.last().error);
    }
    std::printf("problem      %s\n", std::string(qslack::problem_name(cfg.problem)).c_str());
    if (res.oracle) {
        std::printf("oracle       %.10g\n", *res.oracle);
    }
    std::printf("runs         %zu\n", res.runs.size());
    std::printf("median final %.10g\n", qslack::quantile(finals, 0.5));
    if (res.oracle) {
        std::printf("median error %.4e\n", qslack::quantile(errors, 0.5));
    }
    for (std::size_t k = 0; k < res.runs.size(); ++k) {
        if (res.runs[k].aborted) {
            std::fprintf(stderr, "run %zu aborted: %s\n", k, res.runs[k].diagnostic.c_str());
        }
    }
    std::printf("output       %s\n", res.directory.string().c_str());
    return res.all_completed() ? 0 : 1;
}

int cmd_oracle(const std::string &path) {
    const auto cfg = qslack::load_config(path);
    const auto r = qslack::compute_oracle(cfg);
    std::printf("problem  %s\n", std::string(qslack::problem_name(cfg.problem)).c_str());
    std::printf("value    %.12g\n", r.value);
    std::printf("method   %s\n", r.method.c_str());
    std::printf("residual %.3e\n", r.residual);
    if (r.boundary_hit) {
        std::printf("warning  multiplier search hit the grid boundary\n");
    }
    if (!r.multipliers.empty()) {
        std::printf("y       ");
        for (double y : r.multipliers) {
            std::printf(" %.6g", y);
        }
        std::printf("\n");
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Penalty-method bounds for semidefinite and linear programs"};
    app.require_subcommand(1);

    std::string run_path;
    std::optional<std::size_t> workers;
    auto *run = app.add_subcommand("run", "Train all runs of an experiment config");
    run->add_option("config", run_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("-j,--workers", workers, "Parallel runs (overrides the config)");

    std::string oracle_path;
    auto *oracle = app.add_subcommand("oracle", "Print the ground-truth value of a problem config");
    oracle->add_option("config", oracle_path, "Problem config (JSON)")->required()->check(CLI::ExistingFile);

    auto *self = app.add_subcommand("selftest", "Quick consistency checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(run_path, workers);
        }
        if (oracle->parsed()) {
            return cmd_oracle(oracle_path);
        }
        if (self->parsed()) {
            return qslack::run_selftest(std::cout) ? 0 : 1;
        }
    } catch (const qslack::ConfigError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}

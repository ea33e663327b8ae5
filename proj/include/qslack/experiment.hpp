#pragma once

#include "qslack/optimizer.hpp"
#include "qslack/oracle.hpp"
#include "qslack/problems.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qslack {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A fixed input state: frozen random purification, or a named state.
struct StateSource {
    enum class Kind { Random, MaximallyMixed, Bell, Zero };
    Kind kind = Kind::Random;
    std::uint64_t seed = 0;
    std::size_t layers = 2;

    [[nodiscard]] DensityMatrix build(std::size_t n) const;
};

/// A fixed input distribution: frozen Born machine or explicit probabilities.
struct DistributionSource {
    std::uint64_t seed = 0;
    std::size_t layers = 2;
    std::vector<double> explicit_probs;

    [[nodiscard]] std::vector<double> build(std::size_t n) const;
};

struct ExperimentConfig {
    ProblemTag problem = ProblemTag::TvdDual;
    std::size_t n_qubits = 2;
    AnsatzSpec ansatz;
    ShotModel shots = ShotModel::exact();
    double penalty = 0.0;
    double eta = 0.1;
    SpsaConfig spsa;
    LrSchedule schedule;
    std::size_t n_runs = 5;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    std::string output_dir;

    StateSource rho{StateSource::Kind::Random, 101, 2};
    StateSource sigma{StateSource::Kind::Random, 202, 2};
    std::size_t n_a = 1;
    DistributionSource p{1001, 2, {}};
    DistributionSource q{2002, 2, {}};
    std::optional<ConstrainedHamiltonian> cham;
    std::optional<ClassicalHamiltonian> classical;
};

/// Parses JSON text; defaults come from the per-problem hyperparameter tables.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::filesystem::path &path);

std::unique_ptr<PenaltyObjective> build_objective(const ExperimentConfig &cfg);
OracleResult compute_oracle(const ExperimentConfig &cfg);

/// Seed of run k, derived from the master seed.
std::uint64_t run_seed(std::uint64_t master, std::size_t k);

struct ExperimentResult {
    std::vector<RunRecord> runs;
    std::vector<AggregatePoint> summary;
    std::optional<double> oracle;
    std::filesystem::path directory;
    [[nodiscard]] bool all_completed() const;
};

/// Executes all runs (in parallel up to cfg.workers) without touching the filesystem.
ExperimentResult execute_runs(const ExperimentConfig &cfg);

/// Executes and writes run_<k>.csv, summary.csv, runs.csv and convergence.svg under root/output_dir.
ExperimentResult run_experiment(const ExperimentConfig &cfg, const std::filesystem::path &root);

std::string run_csv(const RunRecord &rec);
std::string summary_csv(const std::vector<AggregatePoint> &summary);
std::string emit_plot(const std::vector<AggregatePoint> &summary, std::optional<double> oracle,
                      const std::string &title = "");

} // namespace qslack

#pragma once

#include "qslack/estimate.hpp"
#include "qslack/problems.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace qslack {

struct SpsaConfig {
    double perturbation = 0.1;
    double learning_rate = 0.1;
    bool normalize = true;
    std::size_t max_iters = 1000;
    std::uint64_t seed = 0;
};

/**
 * @brief Learning-rate schedule, consulted every check_period iterations.
 *
 * HalveEvery halves at multiples of period. The regression kinds fit a line to the
 * last window objective values and halve on an adverse slope; the bidirectional kind
 * also multiplies by factor on a strictly favorable slope.
 */
struct LrSchedule {
    enum class Kind { Fixed, HalveEvery, Regression, RegressionBidir };

    static constexpr std::size_t check_period = 100;

    Kind kind = Kind::Fixed;
    std::size_t period = 1000;
    std::size_t window = 500;
    double factor = 1.1;
    double min_lr = 1e-3;

    static LrSchedule fixed() { return {}; }
    static LrSchedule halve_every(std::size_t n, double min_lr = 1e-6) {
        return {Kind::HalveEvery, n, 500, 1.1, min_lr};
    }
    static LrSchedule regression(std::size_t window, double min_lr = 1e-3) {
        return {Kind::Regression, 1000, window, 1.1, min_lr};
    }
    static LrSchedule regression_bidir(std::size_t window, double factor, double min_lr = 1e-3) {
        return {Kind::RegressionBidir, 1000, window, factor, min_lr};
    }
};

using ScalarFunction = std::function<double(std::span<const double>)>;

/// g_k = [f(theta + c D) - f(theta - c D)] / (2 c D_k) with Rademacher D.
std::vector<double> spsa_gradient(const ScalarFunction &f, std::span<const double> theta,
                                  double c_pert, std::mt19937_64 &rng);

/// Unit vector along g, or zero when ||g|| < 1e-15.
std::vector<double> normalize_gradient(std::span<const double> g);

/// Least-squares slope of values against their index.
double regression_slope(std::span<const double> values);

/// Regression decision on the tail of history; no change when history is shorter than the window.
double lr_step(const LrSchedule &schedule, std::span<const double> history, Sense sense,
               double current_lr);

/// Learning rate to use after iteration `iter` (1-based) has completed.
double scheduled_lr(const LrSchedule &schedule, std::size_t iter, std::span<const double> history,
                    Sense sense, double current_lr);

struct IterationRecord {
    std::size_t iter = 0;
    double objective = 0.0;
    double penalty = 0.0;
    double error = 0.0; // |objective - oracle|, NaN without an oracle
    double lr = 0.0;
    std::vector<double> scalars;
};

struct RunRecord {
    IterationRecord initial;
    std::vector<IterationRecord> steps; // iterations 1..n
    std::vector<double> final_params;
    bool aborted = false;
    std::string diagnostic;

    [[nodiscard]] const IterationRecord &last() const { return steps.empty() ? initial : steps.back(); }
};

/// Runs SPSA from init. Shot noise (if any) is seeded from cfg.seed.
RunRecord run_optimization(const PenaltyObjective &objective, std::vector<double> init,
                           const SpsaConfig &cfg, const LrSchedule &schedule,
                           std::optional<double> oracle, ShotModel shots = ShotModel::exact());

struct AggregatePoint {
    std::size_t iter = 0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
};

/// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

/// Per-iteration median and quartiles of the objective over iterations 1..n, truncated
/// to the shortest run.
std::vector<AggregatePoint> aggregate_runs(const std::vector<RunRecord> &records);

} // namespace qslack

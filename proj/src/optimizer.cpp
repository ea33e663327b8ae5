#include "qslack/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qslack {

std::vector<double> spsa_gradient(const ScalarFunction &f, std::span<const double> theta,
                                  double c_pert, std::mt19937_64 &rng) {
    if (!(c_pert > 0.0)) {
        throw std::invalid_argument("spsa_gradient: perturbation must be positive");
    }
    const std::size_t n = theta.size();
    std::vector<double> delta(n);
    std::bernoulli_distribution coin(0.5);
    for (auto &d : delta) {
        d = coin(rng) ? 1.0 : -1.0;
    }
    std::vector<double> plus(theta.begin(), theta.end());
    std::vector<double> minus(theta.begin(), theta.end());
    for (std::size_t k = 0; k < n; ++k) {
        plus[k] += c_pert * delta[k];
        minus[k] -= c_pert * delta[k];
    }
    const double f_plus = f(plus);
    const double f_minus = f(minus);
    const double diff = f_plus - f_minus;
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) {
        g[k] = diff / (2.0 * c_pert * delta[k]);
    }
    return g;
}

std::vector<double> normalize_gradient(std::span<const double> g) {
    double sq = 0.0;
    for (double v : g) {
        sq += v * v;
    }
    const double norm = std::sqrt(sq);
    std::vector<double> out(g.size(), 0.0);
    if (!(norm >= 1e-15) || !std::isfinite(norm)) {
        return out;
    }
    for (std::size_t k = 0; k < g.size(); ++k) {
        out[k] = g[k] / norm;
    }
    return out;
}

double regression_slope(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) {
        return 0.0;
    }
    const double xm = 0.5 * static_cast<double>(n - 1);
    double ym = 0.0;
    for (double v : values) {
        ym += v;
    }
    ym /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - xm;
        sxy += dx * (values[i] - ym);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

double lr_step(const LrSchedule &schedule, std::span<const double> history, Sense sense,
               double current_lr) {
    if (schedule.kind != LrSchedule::Kind::Regression &&
        schedule.kind != LrSchedule::Kind::RegressionBidir) {
        return current_lr;
    }
    if (schedule.window < 2 || history.size() < schedule.window) {
        return current_lr;
    }
    const double slope = regression_slope(history.subspan(history.size() - schedule.window));
    // slope exactly zero counts as favorable
    const double signed_slope = sense == Sense::Maximize ? slope : -slope;
    if (signed_slope < 0.0) {
        return std::max(0.5 * current_lr, schedule.min_lr);
    }
    if (schedule.kind == LrSchedule::Kind::RegressionBidir && signed_slope > 0.0) {
        return current_lr * schedule.factor;
    }
    return current_lr;
}

double scheduled_lr(const LrSchedule &schedule, std::size_t iter, std::span<const double> history,
                    Sense sense, double current_lr) {
    if (iter == 0 || iter % LrSchedule::check_period != 0) {
        return current_lr;
    }
    switch (schedule.kind) {
    case LrSchedule::Kind::Fixed:
        return current_lr;
    case LrSchedule::Kind::HalveEvery:
        if (schedule.period > 0 && iter % schedule.period == 0) {
            return std::max(0.5 * current_lr, schedule.min_lr);
        }
        return current_lr;
    case LrSchedule::Kind::Regression:
    case LrSchedule::Kind::RegressionBidir:
        return lr_step(schedule, history, sense, current_lr);
    }
    return current_lr;
}

namespace {

struct Evaluation {
    double value;
    double penalty;
    bool barrier;
};

Evaluation evaluate_at(const PenaltyObjective &obj, std::span<const double> x, const ShotModel &shots,
                       std::uint64_t eval_seed) {
    TermEstimator est(shots, eval_seed);
    try {
        const auto tb = obj.evaluate(x, est);
        return {tb.value, tb.penalty, false};
    } catch (const BarrierViolation &) {
        const double worst = obj.sense() == Sense::Minimize ? std::numeric_limits<double>::infinity()
                                                            : -std::numeric_limits<double>::infinity();
        return {worst, std::numeric_limits<double>::quiet_NaN(), true};
    }
}

} // namespace

RunRecord run_optimization(const PenaltyObjective &objective, std::vector<double> init,
                           const SpsaConfig &cfg, const LrSchedule &schedule,
                           std::optional<double> oracle, ShotModel shots) {
    if (init.size() != objective.dimension()) {
        throw std::invalid_argument("run_optimization: initial vector has wrong length");
    }
    if (!(cfg.learning_rate > 0.0) || !(cfg.perturbation > 0.0)) {
        throw std::invalid_argument("run_optimization: learning rate and perturbation must be positive");
    }
    std::mt19937_64 rng(cfg.seed);
    std::vector<double> x = std::move(init);
    objective.project(x);

    auto make_record = [&](std::size_t iter, const Evaluation &e, double lr) {
        IterationRecord r;
        r.iter = iter;
        r.objective = e.value;
        r.penalty = e.penalty;
        r.error = oracle ? std::abs(e.value - *oracle) : std::numeric_limits<double>::quiet_NaN();
        r.lr = lr;
        r.scalars = objective.scalar_snapshot(x);
        return r;
    };

    RunRecord rec;
    double lr = cfg.learning_rate;
    Evaluation current = evaluate_at(objective, x, shots, rng());
    rec.initial = make_record(0, current, lr);
    if (std::isnan(current.value)) {
        rec.aborted = true;
        rec.diagnostic = "NaN objective at initial point";
        rec.final_params = x;
        return rec;
    }

    std::vector<double> history;
    history.reserve(cfg.max_iters);
    rec.steps.reserve(cfg.max_iters);
    const double direction = objective.sense() == Sense::Maximize ? 1.0 : -1.0;

    for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
        const std::uint64_t seed_plus = rng();
        const std::uint64_t seed_minus = rng();
        bool first = true;
        bool nan_seen = false;
        auto f = [&](std::span<const double> p) {
            const auto e = evaluate_at(objective, p, shots, first ? seed_plus : seed_minus);
            first = false;
            nan_seen |= std::isnan(e.value);
            return e.value;
        };
        auto g = spsa_gradient(f, x, cfg.perturbation, rng);
        const std::uint64_t seed_eval = rng();
        if (nan_seen) {
            rec.aborted = true;
            rec.diagnostic = "NaN objective in perturbation at iteration " + std::to_string(it);
            break;
        }

        bool finite = true;
        for (double v : g) {
            finite &= std::isfinite(v);
        }
        if (finite) {
            if (cfg.normalize) {
                g = normalize_gradient(g);
            }
            std::vector<double> trial = x;
            for (std::size_t k = 0; k < x.size(); ++k) {
                trial[k] += direction * lr * g[k];
            }
            objective.project(trial);
            const Evaluation e = evaluate_at(objective, trial, shots, seed_eval);
            if (std::isnan(e.value)) {
                rec.aborted = true;
                rec.diagnostic = "NaN objective at iteration " + std::to_string(it);
                rec.steps.push_back(make_record(it, e, lr));
                break;
            }
            if (!e.barrier) {
                x = std::move(trial);
                current = e;
            }
        }
        // a non-finite difference comes from a barrier violation; the step is skipped

        history.push_back(current.value);
        rec.steps.push_back(make_record(it, current, lr));
        lr = scheduled_lr(schedule, it, history, objective.sense(), lr);
    }
    rec.final_params = x;
    return rec;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw std::invalid_argument("quantile of empty set");
    }
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<AggregatePoint> aggregate_runs(const std::vector<RunRecord> &records) {
    if (records.empty()) {
        return {};
    }
    std::size_t len = records.front().steps.size();
    for (const auto &r : records) {
        len = std::min(len, r.steps.size());
    }
    std::vector<AggregatePoint> out;
    out.reserve(len);
    std::vector<double> col(records.size());
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t r = 0; r < records.size(); ++r) {
            col[r] = records[r].steps[i].objective;
        }
        out.push_back({records.front().steps[i].iter, quantile(col, 0.5), quantile(col, 0.25),
                       quantile(col, 0.75)});
    }
    return out;
}

} // namespace qslack

#include "qslack/experiment.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

namespace qslack {

using nlohmann::json;

namespace {

struct Defaults {
    std::size_t layers;
    std::size_t born_layers;
    double penalty;
    LrSchedule schedule;
    double learning_rate;
    bool normalize;
    std::size_t max_iters;
    double perturbation = 0.01;
};

Defaults table_defaults(ProblemTag tag, AnsatzKind kind) {
    using T = ProblemTag;
    const auto reg = [](std::size_t w) { return LrSchedule::regression(w, 1e-3); };
    const bool cc = kind == AnsatzKind::ConvexCombination;
    switch (tag) {
    case T::TraceDistancePrimal:
        return cc ? Defaults{4, 2, 10, LrSchedule::fixed(), 0.005, true, 20000}
                  : Defaults{3, 2, 10, reg(500), 0.1, true, 20000};
    case T::TraceDistanceDual:
        return cc ? Defaults{3, 3, 100, LrSchedule::regression_bidir(500, 1.1), 0.03, true, 40000}
                  : Defaults{3, 2, 100, reg(500), 0.1, true, 20000};
    case T::FidelityPrimal:
        return cc ? Defaults{8, 3, 50, LrSchedule::regression_bidir(500, 1.1), 0.1, true, 20000}
                  : Defaults{4, 2, 45, reg(500), 0.1, true, 20000};
    case T::FidelityDual:
        return cc ? Defaults{4, 3, 5, LrSchedule::regression_bidir(500, 1.1), 0.1, true, 20000}
                  : Defaults{3, 2, 5, reg(300), 0.1, true, 20000};
    case T::NegativityPrimal:
        return cc ? Defaults{2, 1, 5, LrSchedule::regression_bidir(500, 1.1), 0.03, true, 20000}
                  : Defaults{3, 2, 5, reg(500), 0.1, true, 40000};
    case T::NegativityDual:
        return cc ? Defaults{4, 2, 100, LrSchedule::regression_bidir(500, 1.1), 0.01, true, 40000}
                  : Defaults{3, 2, 100, reg(500), 0.1, true, 40000};
    case T::ChamPrimal:
        return cc ? Defaults{15, 2, 100, LrSchedule::halve_every(1000), 0.1, true, 20000}
                  : Defaults{2, 2, 100, LrSchedule::halve_every(10000), 0.03, true, 40000};
    case T::ChamDual:
        return cc ? Defaults{15, 2, 100, LrSchedule::regression_bidir(500, 1.1), 0.03, true, 40000}
                  : Defaults{2, 2, 100, reg(500), 0.1, true, 20000};
    case T::ChamInteriorPoint:
        return {2, 2, 0, LrSchedule::halve_every(1000), 0.1, true, 20000};
    case T::TvdPrimal:
        return {2, 2, 10, LrSchedule::regression(300, 1e-3), 0.1, true, 20000};
    case T::TvdDual:
        return {2, 2, 100, LrSchedule::regression(300, 1e-3), 0.1, true, 20000};
    case T::ClassicalChamPrimal:
    case T::ClassicalChamDual:
        return {3, 3, 10, LrSchedule::regression(300, 1e-3), 0.1, true, 20000};
    }
    throw std::logic_error("unhandled problem tag");
}

std::size_t line_of_offset(const std::string &text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

void reject_unknown(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
    for (const auto &[key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

template <class T> T get_or(const json &obj, const char *key, T fallback, const std::string &where) {
    if (!obj.contains(key) || obj.at(key).is_null()) {
        return fallback;
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

std::size_t get_count(const json &obj, const char *key, std::size_t fallback, const std::string &where,
                      bool allow_zero = false) {
    if (!obj.contains(key) || obj.at(key).is_null()) {
        return fallback;
    }
    const auto &v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < (allow_zero ? 0 : 1)) {
        throw ConfigError(where + "." + key + ": expected a " + (allow_zero ? "non-negative" : "positive") +
                          " integer");
    }
    return v.get<std::size_t>();
}

StateSource parse_state(const json &j, const std::string &where, StateSource fallback) {
    if (j.is_null()) {
        return fallback;
    }
    if (!j.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    reject_unknown(j, {"kind", "seed", "layers"}, where);
    StateSource s = fallback;
    const auto kind = get_or<std::string>(j, "kind", "random", where);
    if (kind == "random") {
        s.kind = StateSource::Kind::Random;
    } else if (kind == "maximally_mixed") {
        s.kind = StateSource::Kind::MaximallyMixed;
    } else if (kind == "bell") {
        s.kind = StateSource::Kind::Bell;
    } else if (kind == "zero") {
        s.kind = StateSource::Kind::Zero;
    } else {
        throw ConfigError(where + ".kind: unknown state kind '" + kind + "'");
    }
    s.seed = get_or<std::uint64_t>(j, "seed", s.seed, where);
    s.layers = get_count(j, "layers", s.layers, where);
    return s;
}

DistributionSource parse_distribution(const json &j, const std::string &where, DistributionSource fallback) {
    if (j.is_null()) {
        return fallback;
    }
    if (j.is_array()) {
        DistributionSource d = fallback;
        try {
            d.explicit_probs = j.get<std::vector<double>>();
        } catch (const json::exception &e) {
            throw ConfigError(where + ": " + e.what());
        }
        return d;
    }
    if (!j.is_object()) {
        throw ConfigError(where + ": expected an object or a probability list");
    }
    reject_unknown(j, {"seed", "layers"}, where);
    DistributionSource d = fallback;
    d.seed = get_or<std::uint64_t>(j, "seed", d.seed, where);
    d.layers = get_count(j, "layers", d.layers, where);
    return d;
}

LrSchedule parse_schedule(const json &j, const std::string &where, LrSchedule s) {
    if (j.is_null()) {
        return s;
    }
    reject_unknown(j, {"kind", "period", "window", "factor", "min_lr"}, where);
    if (j.contains("kind")) {
        const auto kind = get_or<std::string>(j, "kind", "", where);
        if (kind == "fixed") {
            s.kind = LrSchedule::Kind::Fixed;
        } else if (kind == "halve_every") {
            s.kind = LrSchedule::Kind::HalveEvery;
        } else if (kind == "regression") {
            s.kind = LrSchedule::Kind::Regression;
        } else if (kind == "regression_bidir") {
            s.kind = LrSchedule::Kind::RegressionBidir;
        } else {
            throw ConfigError(where + ".kind: unknown schedule '" + kind + "'");
        }
    }
    s.period = get_count(j, "period", s.period, where);
    s.window = get_count(j, "window", s.window, where);
    s.factor = get_or<double>(j, "factor", s.factor, where);
    s.min_lr = get_or<double>(j, "min_lr", s.min_lr, where);
    if (s.period % LrSchedule::check_period != 0) {
        throw ConfigError(where + ".period: must be a multiple of " +
                          std::to_string(LrSchedule::check_period));
    }
    if (s.window < 2) {
        throw ConfigError(where + ".window: must be at least 2");
    }
    if (!(s.min_lr > 0.0) || !(s.factor > 0.0)) {
        throw ConfigError(where + ": min_lr and factor must be positive");
    }
    return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::string fmt(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v, const char *spec = "%.2f") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

} // namespace

DensityMatrix StateSource::build(std::size_t n) const {
    const std::size_t d = std::size_t{1} << n;
    switch (kind) {
    case Kind::Random:
        return random_purified_state(n, layers, seed);
    case Kind::MaximallyMixed:
        return DensityMatrix::maximally_mixed(d);
    case Kind::Zero: {
        std::vector<cplx> v(d, 0.0);
        v[0] = 1.0;
        return DensityMatrix::pure(v);
    }
    case Kind::Bell: {
        if (n != 2) {
            throw ConfigError("bell input requires 2 qubits");
        }
        const double h = 1.0 / std::sqrt(2.0);
        return DensityMatrix::pure(std::vector<cplx>{h, 0.0, 0.0, h});
    }
    }
    throw std::logic_error("unhandled state kind");
}

std::vector<double> DistributionSource::build(std::size_t n) const {
    if (explicit_probs.empty()) {
        return random_born_distribution(n, layers, seed);
    }
    if (explicit_probs.size() != (std::size_t{1} << n)) {
        throw ConfigError("distribution length " + std::to_string(explicit_probs.size()) +
                          " does not match 2^" + std::to_string(n));
    }
    double total = 0.0;
    for (double v : explicit_probs) {
        if (!(v >= 0.0)) {
            throw ConfigError("distribution entries must be non-negative");
        }
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ConfigError("distribution must sum to 1");
    }
    return explicit_probs;
}

ExperimentConfig parse_config(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError("parse error at line " + std::to_string(line_of_offset(text, e.byte)) + ": " +
                          e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    reject_unknown(j, {"problem", "n_qubits", "ansatz", "penalty", "eta", "shots", "optimizer", "n_runs",
                       "seed", "workers", "output_dir", "inputs"},
                   "config");
    if (!j.contains("problem")) {
        throw ConfigError("config: missing 'problem'");
    }
    const auto name = get_or<std::string>(j, "problem", "", "config");
    const auto tag = parse_problem(name);
    if (!tag) {
        throw ConfigError("config.problem: unknown problem tag '" + name + "'");
    }

    ExperimentConfig cfg;
    cfg.problem = *tag;
    const json none;
    const json &ansatz = j.contains("ansatz") ? j.at("ansatz") : none;
    if (!ansatz.is_null()) {
        reject_unknown(ansatz, {"kind", "layers", "born_layers", "n_reference"}, "ansatz");
        const auto kind = get_or<std::string>(ansatz, "kind", "purification", "ansatz");
        if (kind == "purification") {
            cfg.ansatz.kind = AnsatzKind::Purification;
        } else if (kind == "convex_combination") {
            cfg.ansatz.kind = AnsatzKind::ConvexCombination;
        } else {
            throw ConfigError("ansatz.kind: unknown ansatz '" + kind + "'");
        }
    }
    const Defaults d = table_defaults(cfg.problem, cfg.ansatz.kind);
    cfg.ansatz.layers = d.layers;
    cfg.ansatz.born_layers = d.born_layers;
    if (!ansatz.is_null()) {
        cfg.ansatz.layers = get_count(ansatz, "layers", d.layers, "ansatz");
        cfg.ansatz.born_layers = get_count(ansatz, "born_layers", d.born_layers, "ansatz");
        if (ansatz.contains("n_reference") && !ansatz.at("n_reference").is_null()) {
            cfg.ansatz.n_reference = get_count(ansatz, "n_reference", 1, "ansatz");
        }
    }

    cfg.penalty = get_or<double>(j, "penalty", d.penalty, "config");
    if (!(cfg.penalty >= 0.0) || !std::isfinite(cfg.penalty)) {
        throw ConfigError("config.penalty: must be a finite non-negative number");
    }
    cfg.eta = get_or<double>(j, "eta", cfg.eta, "config");
    if (!(cfg.eta > 0.0)) {
        throw ConfigError("config.eta: must be positive");
    }
    const std::size_t shots = get_count(j, "shots", 0, "config", true);
    cfg.shots = shots == 0 ? ShotModel::exact() : ShotModel::with_shots(shots, 0);

    cfg.spsa.perturbation = d.perturbation;
    cfg.spsa.learning_rate = d.learning_rate;
    cfg.spsa.normalize = d.normalize;
    cfg.spsa.max_iters = d.max_iters;
    cfg.schedule = d.schedule;
    if (j.contains("optimizer")) {
        const auto &o = j.at("optimizer");
        reject_unknown(o, {"perturbation", "learning_rate", "normalize", "max_iters", "schedule"}, "optimizer");
        cfg.spsa.perturbation = get_or<double>(o, "perturbation", cfg.spsa.perturbation, "optimizer");
        cfg.spsa.learning_rate = get_or<double>(o, "learning_rate", cfg.spsa.learning_rate, "optimizer");
        cfg.spsa.normalize = get_or<bool>(o, "normalize", cfg.spsa.normalize, "optimizer");
        cfg.spsa.max_iters = get_count(o, "max_iters", cfg.spsa.max_iters, "optimizer", true);
        if (o.contains("schedule")) {
            cfg.schedule = parse_schedule(o.at("schedule"), "optimizer.schedule", cfg.schedule);
        }
    }
    if (!(cfg.spsa.perturbation > 0.0) || !(cfg.spsa.learning_rate > 0.0)) {
        throw ConfigError("optimizer: perturbation and learning_rate must be positive");
    }

    cfg.n_runs = get_count(j, "n_runs", cfg.n_runs, "config");
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed, "config");
    cfg.workers = get_count(j, "workers", cfg.workers, "config");
    cfg.output_dir = get_or<std::string>(j, "output_dir", std::string(problem_name(cfg.problem)), "config");

    const json &inputs = j.contains("inputs") ? j.at("inputs") : none;
    if (!inputs.is_null()) {
        reject_unknown(inputs, {"rho", "sigma", "n_a", "p", "q", "hamiltonian", "constraints"}, "inputs");
    }
    auto input = [&](const char *key) -> const json & {
        return !inputs.is_null() && inputs.contains(key) ? inputs.at(key) : none;
    };
    cfg.rho = parse_state(input("rho"), "inputs.rho", cfg.rho);
    cfg.sigma = parse_state(input("sigma"), "inputs.sigma", cfg.sigma);
    cfg.p = parse_distribution(input("p"), "inputs.p", cfg.p);
    cfg.q = parse_distribution(input("q"), "inputs.q", cfg.q);

    std::optional<std::size_t> n_from_instance;
    const bool classical_cham = cfg.problem == ProblemTag::ClassicalChamPrimal ||
                                cfg.problem == ProblemTag::ClassicalChamDual;
    const bool quantum_cham = cfg.problem == ProblemTag::ChamPrimal || cfg.problem == ProblemTag::ChamDual ||
                              cfg.problem == ProblemTag::ChamInteriorPoint;
    if (quantum_cham || classical_cham) {
        const json &h = input("hamiltonian");
        const json &cons = input("constraints");
        if (!cons.is_null() && !cons.is_array()) {
            throw ConfigError("inputs.constraints: expected a list");
        }
        try {
            if (quantum_cham) {
                auto inst = ConstrainedHamiltonian::reference_instance();
                if (!h.is_null()) {
                    inst.h = PauliObservable::parse(h.get<std::string>());
                    inst.a.clear();
                    inst.b.clear();
                }
                if (!cons.is_null()) {
                    inst.a.clear();
                    inst.b.clear();
                    for (const auto &c : cons) {
                        reject_unknown(c, {"a", "b"}, "inputs.constraints[]");
                        inst.a.push_back(PauliObservable::parse(c.at("a").get<std::string>()));
                        inst.b.push_back(c.at("b").get<double>());
                    }
                }
                for (const auto &a : inst.a) {
                    if (a.n_qubits() != inst.h.n_qubits()) {
                        throw ConfigError("inputs.constraints: constraint width differs from the Hamiltonian");
                    }
                }
                n_from_instance = inst.h.n_qubits();
                cfg.cham = std::move(inst);
            } else {
                auto inst = ClassicalHamiltonian::reference_instance();
                if (!h.is_null()) {
                    inst.h = WalshObservable::parse(h.get<std::string>());
                    inst.a.clear();
                    inst.b.clear();
                }
                if (!cons.is_null()) {
                    inst.a.clear();
                    inst.b.clear();
                    for (const auto &c : cons) {
                        reject_unknown(c, {"a", "b"}, "inputs.constraints[]");
                        inst.a.push_back(WalshObservable::parse(c.at("a").get<std::string>()));
                        inst.b.push_back(c.at("b").get<double>());
                    }
                }
                for (const auto &a : inst.a) {
                    if (a.n_bits() != inst.h.n_bits()) {
                        throw ConfigError("inputs.constraints: constraint width differs from the Hamiltonian");
                    }
                }
                n_from_instance = inst.h.n_bits();
                cfg.classical = std::move(inst);
            }
        } catch (const json::exception &e) {
            throw ConfigError(std::string("inputs: ") + e.what());
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("inputs: ") + e.what());
        }
    }

    if (j.contains("n_qubits")) {
        cfg.n_qubits = get_count(j, "n_qubits", 2, "config");
        if (n_from_instance && *n_from_instance != cfg.n_qubits) {
            throw ConfigError("config.n_qubits: " + std::to_string(cfg.n_qubits) +
                              " does not match the instance width " + std::to_string(*n_from_instance));
        }
    } else if (n_from_instance) {
        cfg.n_qubits = *n_from_instance;
    }
    if (cfg.n_qubits < 1 || cfg.n_qubits > 4) {
        throw ConfigError("config.n_qubits: supported range is 1..4");
    }
    if (cfg.problem == ProblemTag::NegativityPrimal || cfg.problem == ProblemTag::NegativityDual) {
        if (cfg.n_qubits < 2) {
            throw ConfigError("negativity needs at least 2 qubits");
        }
        cfg.n_a = get_count(inputs.is_null() ? none : inputs, "n_a", cfg.n_qubits / 2, "inputs");
        if (cfg.n_a >= cfg.n_qubits) {
            throw ConfigError("inputs.n_a: must leave at least one qubit in B");
        }
    }
    if (is_classical(cfg.problem)) {
        // the distribution ansatz has only Born layers; keep both fields in sync
        if (ansatz.is_null() || !ansatz.contains("born_layers")) {
            cfg.ansatz.born_layers = cfg.ansatz.layers;
        }
        // validates explicit distributions against the width
        (void)cfg.p.build(cfg.n_qubits);
        (void)cfg.q.build(cfg.n_qubits);
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::unique_ptr<PenaltyObjective> build_objective(const ExperimentConfig &cfg) {
    using T = ProblemTag;
    const std::size_t n = cfg.n_qubits;
    const bool dual = cfg.problem == T::TraceDistanceDual || cfg.problem == T::FidelityDual ||
                      cfg.problem == T::NegativityDual || cfg.problem == T::ChamDual ||
                      cfg.problem == T::TvdDual || cfg.problem == T::ClassicalChamDual;
    switch (cfg.problem) {
    case T::TraceDistancePrimal:
    case T::TraceDistanceDual:
        return make_trace_distance(dual, cfg.rho.build(n), cfg.sigma.build(n), cfg.ansatz, cfg.penalty);
    case T::FidelityPrimal:
    case T::FidelityDual:
        return make_fidelity(dual, cfg.rho.build(n), cfg.sigma.build(n), cfg.ansatz, cfg.penalty);
    case T::NegativityPrimal:
    case T::NegativityDual:
        return make_negativity(dual, cfg.rho.build(n), cfg.n_a, cfg.ansatz, cfg.penalty);
    case T::ChamPrimal:
    case T::ChamDual:
        return make_cham(dual, cfg.cham.value(), cfg.ansatz, cfg.penalty);
    case T::ChamInteriorPoint:
        return make_cham_interior_point(cfg.cham.value(), cfg.ansatz, cfg.eta);
    case T::TvdPrimal:
    case T::TvdDual:
        return make_tvd(dual, cfg.p.build(n), cfg.q.build(n), cfg.ansatz.born_layers, cfg.penalty);
    case T::ClassicalChamPrimal:
    case T::ClassicalChamDual:
        return make_classical_cham(dual, cfg.classical.value(), cfg.ansatz.born_layers, cfg.penalty);
    }
    throw std::logic_error("unhandled problem tag");
}

OracleResult compute_oracle(const ExperimentConfig &cfg) {
    using T = ProblemTag;
    const std::size_t n = cfg.n_qubits;
    switch (cfg.problem) {
    case T::TraceDistancePrimal:
    case T::TraceDistanceDual:
        return {exact_trace_distance(cfg.rho.build(n), cfg.sigma.build(n)), "trace-norm", 0.0, false, {}};
    case T::FidelityPrimal:
    case T::FidelityDual:
        return {exact_root_fidelity(cfg.rho.build(n), cfg.sigma.build(n)), "trace-norm", 0.0, false, {}};
    case T::NegativityPrimal:
    case T::NegativityDual:
        return {exact_negativity(cfg.rho.build(n), std::size_t{1} << cfg.n_a,
                                 std::size_t{1} << (n - cfg.n_a)),
                "trace-norm", 0.0, false, {}};
    case T::ChamPrimal:
    case T::ChamDual:
    case T::ChamInteriorPoint:
        return sdp_cham_value(cfg.cham->h, cfg.cham->a, cfg.cham->b);
    case T::TvdPrimal:
    case T::TvdDual:
        return {exact_tvd(cfg.p.build(n), cfg.q.build(n)), "trace-norm", 0.0, false, {}};
    case T::ClassicalChamPrimal:
    case T::ClassicalChamDual:
        return lp_classical_cham_value(cfg.classical->h, cfg.classical->a, cfg.classical->b);
    }
    throw std::logic_error("unhandled problem tag");
}

std::uint64_t run_seed(std::uint64_t master, std::size_t k) {
    return splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(k)));
}

bool ExperimentResult::all_completed() const {
    return std::none_of(runs.begin(), runs.end(), [](const RunRecord &r) { return r.aborted; });
}

ExperimentResult execute_runs(const ExperimentConfig &cfg) {
    const auto objective = build_objective(cfg);
    ExperimentResult result;
    result.oracle = objective->oracle_value();
    result.runs.resize(cfg.n_runs);

    auto one_run = [&](std::size_t k) {
        const std::uint64_t seed = run_seed(cfg.seed, k);
        std::mt19937_64 init_rng(seed);
        auto x0 = objective->initial_parameters(init_rng);
        if (cfg.problem == ProblemTag::ChamInteriorPoint) {
            // redraw angles until the barrier is finite
            for (int attempt = 0; attempt < 10000; ++attempt) {
                try {
                    (void)objective->evaluate_exact(x0);
                    break;
                } catch (const BarrierViolation &) {
                    x0 = objective->initial_parameters(init_rng);
                }
            }
        }
        SpsaConfig spsa = cfg.spsa;
        spsa.seed = splitmix64(seed);
        ShotModel shots = cfg.shots;
        shots.seed = splitmix64(spsa.seed);
        result.runs[k] = run_optimization(*objective, std::move(x0), spsa, cfg.schedule, result.oracle, shots);
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, cfg.n_runs));
    if (workers == 1) {
        for (std::size_t k = 0; k < cfg.n_runs; ++k) {
            one_run(k);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t k = next++; k < cfg.n_runs; k = next++) {
                        one_run(k);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto &t : pool) {
            t.join();
        }
        for (auto &e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    result.summary = aggregate_runs(result.runs);
    return result;
}

std::string run_csv(const RunRecord &rec) {
    std::string out = "iter,objective,penalty,error,lr\n";
    for (const auto &s : rec.steps) {
        out += std::to_string(s.iter) + "," + fmt(s.objective) + "," + fmt(s.penalty) + "," + fmt(s.error) +
               "," + fmt(s.lr) + "\n";
    }
    return out;
}

std::string summary_csv(const std::vector<AggregatePoint> &summary) {
    std::string out = "iter,median,q1,q3\n";
    for (const auto &p : summary) {
        out += std::to_string(p.iter) + "," + fmt(p.median) + "," + fmt(p.q1) + "," + fmt(p.q3) + "\n";
    }
    return out;
}

std::string emit_plot(const std::vector<AggregatePoint> &summary, std::optional<double> oracle,
                      const std::string &title) {
    if (summary.empty()) {
        throw std::invalid_argument("emit_plot: empty summary");
    }
    constexpr double W = 640, H = 400, L = 70, R = 20, T = 36, B = 46;
    double x0 = static_cast<double>(summary.front().iter);
    double x1 = static_cast<double>(summary.back().iter);
    double y0 = std::numeric_limits<double>::infinity();
    double y1 = -y0;
    for (const auto &p : summary) {
        for (double v : {p.median, p.q1, p.q3}) {
            if (std::isfinite(v)) {
                y0 = std::min(y0, v);
                y1 = std::max(y1, v);
            }
        }
    }
    if (oracle && std::isfinite(*oracle)) {
        y0 = std::min(y0, *oracle);
        y1 = std::max(y1, *oracle);
    }
    if (!std::isfinite(y0)) {
        y0 = 0.0;
        y1 = 1.0;
    }
    if (x1 <= x0) {
        x0 -= 1.0;
        x1 += 1.0;
    }
    const double pad = y1 > y0 ? 0.05 * (y1 - y0) : 0.5 * std::max(1.0, std::abs(y0));
    y0 -= pad;
    y1 += pad;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) {
        y = std::clamp(y, y0, y1);
        return H - B - (y - y0) / (y1 - y0) * (H - T - B);
    };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
                      "viewBox=\"0 0 640 400\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
    if (!title.empty()) {
        svg += "<text x=\"320\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" + title + "</text>\n";
    }
    svg += "<!-- range x0=" + fmt(x0) + " x1=" + fmt(x1) + " y0=" + fmt(y0) + " y1=" + fmt(y1) + " -->\n";
    // axes and ticks
    svg += "<line x1=\"" + fmt_short(L) + "\" y1=\"" + fmt_short(H - B) + "\" x2=\"" + fmt_short(W - R) +
           "\" y2=\"" + fmt_short(H - B) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt_short(L) + "\" y1=\"" + fmt_short(T) + "\" x2=\"" + fmt_short(L) + "\" y2=\"" +
           fmt_short(H - B) + "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0;
        const double yv = y0 + (y1 - y0) * i / 4.0;
        svg += "<text x=\"" + fmt_short(px(xv)) + "\" y=\"" + fmt_short(H - B + 16) +
               "\" text-anchor=\"middle\">" + fmt_short(xv, "%.0f") + "</text>\n";
        svg += "<text x=\"" + fmt_short(L - 6) + "\" y=\"" + fmt_short(py(yv) + 4) +
               "\" text-anchor=\"end\">" + fmt_short(yv, "%.4g") + "</text>\n";
    }
    svg += "<text x=\"" + fmt_short(0.5 * (L + W - R)) + "\" y=\"" + fmt_short(H - 8) +
           "\" text-anchor=\"middle\">iteration</text>\n";

    // interquartile band
    std::string band;
    for (const auto &p : summary) {
        band += fmt_short(px(static_cast<double>(p.iter))) + "," + fmt_short(py(p.q3)) + " ";
    }
    for (auto it = summary.rbegin(); it != summary.rend(); ++it) {
        band += fmt_short(px(static_cast<double>(it->iter))) + "," + fmt_short(py(it->q1)) + " ";
    }
    band.pop_back();
    svg += "<polygon points=\"" + band + "\" fill=\"#1f77b4\" fill-opacity=\"0.25\" stroke=\"none\"/>\n";

    std::string line;
    for (const auto &p : summary) {
        line += fmt_short(px(static_cast<double>(p.iter))) + "," + fmt_short(py(p.median)) + " ";
    }
    line.pop_back();
    svg += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";

    if (oracle && std::isfinite(*oracle)) {
        svg += "<line class=\"oracle\" x1=\"" + fmt_short(L) + "\" y1=\"" + fmt_short(py(*oracle)) + "\" x2=\"" +
               fmt_short(W - R) + "\" y2=\"" + fmt_short(py(*oracle)) +
               "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

ExperimentResult run_experiment(const ExperimentConfig &cfg, const std::filesystem::path &root) {
    ExperimentResult result = execute_runs(cfg);
    result.directory = root / cfg.output_dir;
    std::filesystem::create_directories(result.directory);
    for (std::size_t k = 0; k < result.runs.size(); ++k) {
        write_file(result.directory / ("run_" + std::to_string(k) + ".csv"), run_csv(result.runs[k]));
    }
    write_file(result.directory / "summary.csv", summary_csv(result.summary));

    std::string status = "run,seed,final_objective,final_error,oracle,aborted,diagnostic\n";
    for (std::size_t k = 0; k < result.runs.size(); ++k) {
        const auto &r = result.runs[k];
        status += std::to_string(k) + "," + std::to_string(run_seed(cfg.seed, k)) + "," + fmt(r.last().objective) +
                  "," + fmt(r.last().error) + "," + fmt(result.oracle.value_or(std::nan(""))) + "," +
                  (r.aborted ? "1" : "0") + "," + r.diagnostic + "\n";
    }
    write_file(result.directory / "runs.csv", status);
    if (!result.summary.empty()) {
        write_file(result.directory / "convergence.svg",
                   emit_plot(result.summary, result.oracle, std::string(problem_name(cfg.problem))));
    }
    return result;
}

} // namespace qslack

#include "qslack/problems.hpp"

#include "qslack/oracle.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace qslack {

namespace {

constexpr std::array<std::pair<ProblemTag, std::string_view>, 13> kNames{{
    {ProblemTag::TraceDistancePrimal, "trace_distance_primal"},
    {ProblemTag::TraceDistanceDual, "trace_distance_dual"},
    {ProblemTag::FidelityPrimal, "fidelity_primal"},
    {ProblemTag::FidelityDual, "fidelity_dual"},
    {ProblemTag::NegativityPrimal, "negativity_primal"},
    {ProblemTag::NegativityDual, "negativity_dual"},
    {ProblemTag::ChamPrimal, "cham_primal"},
    {ProblemTag::ChamDual, "cham_dual"},
    {ProblemTag::ChamInteriorPoint, "cham_interior_point"},
    {ProblemTag::TvdPrimal, "tvd_primal"},
    {ProblemTag::TvdDual, "tvd_dual"},
    {ProblemTag::ClassicalChamPrimal, "classical_cham_primal"},
    {ProblemTag::ClassicalChamDual, "classical_cham_dual"},
}};

PauliObservable observable_from(std::span<const double> coeffs, std::size_t n) {
    PauliObservable o(n, coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] != 0.0) {
            o.set_term(PauliString::from_index(k, n), coeffs[k]);
        }
    }
    return o;
}

// (Re, Im) pairs per Pauli string
PauliObservable complex_observable_from(std::span<const double> pairs, std::size_t n) {
    PauliObservable o(n, pairs.size() / 2);
    for (std::size_t k = 0; 2 * k + 1 < pairs.size(); ++k) {
        const cplx v{pairs[2 * k], pairs[2 * k + 1]};
        if (v != cplx{0.0, 0.0}) {
            o.set_term(PauliString::from_index(k, n), v);
        }
    }
    return o;
}

std::size_t qubits_of(const DensityMatrix &m) { return qubit_count(m.dim()); }

} // namespace

std::string_view problem_name(ProblemTag tag) {
    for (const auto &[t, name] : kNames) {
        if (t == tag) {
            return name;
        }
    }
    return "unknown";
}

std::optional<ProblemTag> parse_problem(std::string_view name) {
    for (const auto &[t, s] : kNames) {
        if (s == name) {
            return t;
        }
    }
    return std::nullopt;
}

bool is_classical(ProblemTag tag) {
    return tag == ProblemTag::TvdPrimal || tag == ProblemTag::TvdDual ||
           tag == ProblemTag::ClassicalChamPrimal || tag == ProblemTag::ClassicalChamDual;
}

const std::vector<ProblemTag> &all_problems() {
    static const std::vector<ProblemTag> tags = [] {
        std::vector<ProblemTag> v;
        for (const auto &[t, s] : kNames) {
            v.push_back(t);
        }
        return v;
    }();
    return tags;
}

// ---------------------------------------------------------------------------
// TrainableState

TrainableState TrainableState::quantum(std::size_t n_system, const AnsatzSpec &spec) {
    TrainableState s;
    s.kind_ = spec.kind;
    if (spec.kind == AnsatzKind::Purification) {
        s.purification_ = PurificationState::layered(n_system, spec.n_reference.value_or(n_system),
                                                     spec.layers);
    } else {
        s.cc_ = ConvexCombinationState::layered(n_system, spec.layers, spec.born_layers);
    }
    return s;
}

TrainableState TrainableState::born(std::size_t n, std::size_t layers) {
    TrainableState s;
    s.distribution_ = true;
    s.cc_.born_circuit = ParamCircuit::qcbm(n, layers);
    return s;
}

std::size_t TrainableState::n_params() const noexcept {
    if (distribution_) {
        return cc_.born_circuit.n_params();
    }
    if (kind_ == AnsatzKind::Purification) {
        return purification_.circuit.n_params();
    }
    return cc_.born_circuit.n_params() + cc_.basis_circuit.n_params();
}

RealizedState TrainableState::realize(std::span<const double> angles) const {
    RealizedState r;
    if (distribution_) {
        r.probs = qcbm_distribution(cc_.born_circuit, angles);
        return r;
    }
    if (kind_ == AnsatzKind::Purification) {
        PurificationState p = purification_;
        p.theta.assign(angles.begin(), angles.end());
        r.rho = purification_matrix(p);
        return r;
    }
    ConvexCombinationState c = cc_;
    const std::size_t nb = c.born_circuit.n_params();
    c.phi.assign(angles.begin(), angles.begin() + static_cast<std::ptrdiff_t>(nb));
    c.gamma.assign(angles.begin() + static_cast<std::ptrdiff_t>(nb), angles.end());
    r.rho = convex_combination_matrix(c);
    r.cc = std::move(c);
    return r;
}

// ---------------------------------------------------------------------------
// PenaltyObjective

PenaltyObjective::PenaltyObjective(ProblemTag tag, Sense sense, double c)
    : tag_(tag), sense_(sense), c_(c) {
    if (!(c >= 0.0)) {
        throw std::invalid_argument("penalty constant must be non-negative");
    }
}

const ParamBlock &PenaltyObjective::block(std::string_view name) const {
    for (const auto &b : blocks_) {
        if (b.name == name) {
            return b;
        }
    }
    throw std::out_of_range("no parameter block named " + std::string(name));
}

std::size_t PenaltyObjective::add_state(std::string name, TrainableState s) {
    const std::size_t n = s.n_params();
    blocks_.push_back({std::move(name), ParamKind::Angle, dim_, n, states_.size()});
    initial_.emplace_back();
    states_.push_back(std::move(s));
    dim_ += n;
    return blocks_.size() - 1;
}

std::size_t PenaltyObjective::add_scalars(std::string name, ParamKind kind, std::vector<double> init) {
    blocks_.push_back({std::move(name), kind, dim_, init.size(), 0});
    dim_ += init.size();
    initial_.push_back(std::move(init));
    return blocks_.size() - 1;
}

std::span<const double> PenaltyObjective::slice(std::span<const double> x, std::size_t b) const {
    return x.subspan(blocks_[b].offset, blocks_[b].size);
}

std::vector<double> PenaltyObjective::initial_parameters(std::mt19937_64 &rng) const {
    std::vector<double> x(dim_);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const auto &blk = blocks_[b];
        for (std::size_t i = 0; i < blk.size; ++i) {
            x[blk.offset + i] = blk.kind == ParamKind::Angle ? angle(rng) : initial_[b][i];
        }
    }
    return x;
}

void PenaltyObjective::project(std::span<double> x) const {
    for (const auto &blk : blocks_) {
        if (blk.kind != ParamKind::NonNegative) {
            continue;
        }
        for (std::size_t i = 0; i < blk.size; ++i) {
            x[blk.offset + i] = std::max(0.0, x[blk.offset + i]);
        }
    }
}

std::vector<RealizedState> PenaltyObjective::realize(std::span<const double> x) const {
    if (x.size() != dim_) {
        throw std::invalid_argument("parameter vector length " + std::to_string(x.size()) +
                                    ", expected " + std::to_string(dim_));
    }
    std::vector<RealizedState> out;
    out.reserve(states_.size());
    for (const auto &blk : blocks_) {
        if (blk.kind == ParamKind::Angle) {
            out.push_back(states_[blk.state].realize(x.subspan(blk.offset, blk.size)));
        }
    }
    return out;
}

TermBreakdown PenaltyObjective::evaluate(std::span<const double> x, TermEstimator &est) const {
    return evaluate_realized(realize(x), x, est);
}

TermBreakdown PenaltyObjective::evaluate_exact(std::span<const double> x) const {
    TermEstimator est;
    return evaluate(x, est);
}

double PenaltyObjective::directional_derivative(const std::vector<RealizedState> &states,
                                                std::size_t state, const RealizedState &d,
                                                std::span<const double> x) const {
    auto shifted = [&](double sign) {
        std::vector<RealizedState> s = states;
        auto &target = s[state];
        if (!d.rho.empty()) {
            target.rho += sign * d.rho;
        }
        for (std::size_t i = 0; i < d.probs.size(); ++i) {
            target.probs[i] += sign * d.probs[i];
        }
        target.cc.reset();
        TermEstimator est;
        return evaluate_realized(s, x, est).value;
    };
    return 0.5 * (shifted(1.0) - shifted(-1.0));
}

double PenaltyObjective::parameter_shift_derivative(std::span<const double> x, std::size_t k) const {
    if (k >= dim_) {
        throw std::out_of_range("parameter index out of range");
    }
    const auto states = realize(x);
    for (const auto &blk : blocks_) {
        if (k < blk.offset || k >= blk.offset + blk.size) {
            continue;
        }
        if (blk.kind != ParamKind::Angle) {
            // objectives are at most quadratic in each scalar: unit-step central difference is exact
            std::vector<double> xp(x.begin(), x.end());
            std::vector<double> xm(x.begin(), x.end());
            xp[k] += 1.0;
            xm[k] -= 1.0;
            TermEstimator est;
            return 0.5 * (evaluate_realized(states, xp, est).value -
                          evaluate_realized(states, xm, est).value);
        }
        const auto &ts = states_[blk.state];
        std::vector<double> angles(x.begin() + static_cast<std::ptrdiff_t>(blk.offset),
                                   x.begin() + static_cast<std::ptrdiff_t>(blk.offset + blk.size));
        const std::size_t j = k - blk.offset;
        const double t = angles[j];
        angles[j] = t + 0.5 * std::numbers::pi;
        const auto plus = ts.realize(angles);
        angles[j] = t - 0.5 * std::numbers::pi;
        const auto minus = ts.realize(angles);
        // d rho / d theta_k = (rho(theta + pi/2 e_k) - rho(theta - pi/2 e_k)) / 2
        RealizedState d;
        if (!plus.rho.empty()) {
            d.rho = 0.5 * (plus.rho - minus.rho);
        }
        d.probs.resize(plus.probs.size());
        for (std::size_t i = 0; i < d.probs.size(); ++i) {
            d.probs[i] = 0.5 * (plus.probs[i] - minus.probs[i]);
        }
        std::size_t state_pos = 0;
        for (const auto &other : blocks_) {
            if (&other == &blk) {
                break;
            }
            state_pos += other.kind == ParamKind::Angle;
        }
        return directional_derivative(states, state_pos, d, x);
    }
    throw std::logic_error("parameter index not covered by any block");
}

std::vector<double> PenaltyObjective::exact_gradient(std::span<const double> x) const {
    std::vector<double> g(dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
        g[k] = parameter_shift_derivative(x, k);
    }
    return g;
}

std::vector<double> PenaltyObjective::scalar_snapshot(std::span<const double> x) const {
    std::vector<double> s;
    for (const auto &blk : blocks_) {
        if (blk.kind != ParamKind::Angle) {
            s.insert(s.end(), x.begin() + static_cast<std::ptrdiff_t>(blk.offset),
                     x.begin() + static_cast<std::ptrdiff_t>(blk.offset + blk.size));
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Instances

ConstrainedHamiltonian ConstrainedHamiltonian::reference_instance() {
    return {PauliObservable::parse("1.0 ZZ + 1.0 XI + 1.0 IX"),
            {PauliObservable::parse("1.0 YI"), PauliObservable::parse("1.0 IZ")},
            {0.2, 0.1}};
}

ClassicalHamiltonian ClassicalHamiltonian::reference_instance() {
    return {WalshObservable::parse("1.0 11"),
            {WalshObservable::parse("0.5 10"), WalshObservable::parse("0.7 01")},
            {0.1, 0.3}};
}

namespace {

class TraceDistanceProblem final : public PenaltyObjective {
  public:
    TraceDistanceProblem(bool dual, const DensityMatrix &rho, const DensityMatrix &sigma,
                         const AnsatzSpec &spec, double c)
        : PenaltyObjective(dual ? ProblemTag::TraceDistanceDual : ProblemTag::TraceDistancePrimal,
                           dual ? Sense::Minimize : Sense::Maximize, c),
          dual_(dual), rho_(rho), sigma_(sigma) {
        if (rho.dim() != sigma.dim()) {
            throw DimensionError("trace distance: input dimensions differ");
        }
        const std::size_t n = qubits_of(rho);
        if (dual) {
            add_state("omega", TrainableState::quantum(n, spec));
            add_state("tau", TrainableState::quantum(n, spec));
        } else {
            add_state("tau", TrainableState::quantum(n, spec));
            add_state("omega", TrainableState::quantum(n, spec));
        }
        lambda_ = add_scalars("lambda", ParamKind::NonNegative, {1.0});
        mu_ = add_scalars("mu", ParamKind::NonNegative, {1.0});
        set_oracle(exact_trace_distance(rho, sigma));
    }

  protected:
    TermBreakdown evaluate_realized(const std::vector<RealizedState> &s, std::span<const double> x,
                                    TermEstimator &est) const override {
        const double lambda = slice(x, lambda_)[0];
        const double mu = slice(x, mu_)[0];
        if (dual_) {
            return td_dual_objective(rho_, sigma_, s[0].ref(), s[1].ref(), lambda, mu,
                                     penalty_constant(), est);
        }
        return td_primal_objective(rho_, sigma_, s[0].ref(), s[1].ref(), lambda, mu,
                                   penalty_constant(), est);
    }

  private:
    bool dual_;
    DensityMatrix rho_;
    DensityMatrix sigma_;
    std::size_t lambda_ = 0;
    std::size_t mu_ = 0;
};

class FidelityProblem final : public PenaltyObjective {
  public:
    FidelityProblem(bool dual, const DensityMatrix &rho, const DensityMatrix &sigma,
                    const AnsatzSpec &spec, double c)
        : PenaltyObjective(dual ? ProblemTag::FidelityDual : ProblemTag::FidelityPrimal,
                           dual ? Sense::Minimize : Sense::Maximize, c),
          dual_(dual), rho_(rho), sigma_(sigma), n_(qubits_of(rho)) {
        if (rho.dim() != sigma.dim()) {
            throw DimensionError("fidelity: input dimensions differ");
        }
        AnsatzSpec wide = spec;
        if (wide.n_reference) {
            wide.n_reference = *wide.n_reference + 1;
        }
        if (dual) {
            add_state("omega", TrainableState::quantum(n_, spec));
            add_state("tau", TrainableState::quantum(n_, spec));
            add_state("xi", TrainableState::quantum(n_ + 1, wide));
            lambda_ = add_scalars("lambda", ParamKind::NonNegative, {1.0});
            mu_ = add_scalars("mu", ParamKind::NonNegative, {1.0});
            nu_ = add_scalars("nu", ParamKind::NonNegative, {1.0});
        } else {
            add_state("omega", TrainableState::quantum(n_ + 1, wide));
            lambda_ = add_scalars("lambda", ParamKind::NonNegative, {1.0});
            alpha_ = add_scalars("alpha", ParamKind::Free,
                                 std::vector<double>(2 * (std::size_t{1} << (2 * n_)), 0.0));
        }
        set_oracle(exact_root_fidelity(rho, sigma));
    }

  protected:
    TermBreakdown evaluate_realized(const std::vector<RealizedState> &s, std::span<const double> x,
                                    TermEstimator &est) const override {
        const double c = penalty_constant();
        const double lambda = slice(x, lambda_)[0];
        if (dual_) {
            return fidelity_dual_objective(rho_, sigma_, s[0].ref(), s[1].ref(), s[2].ref(), lambda,
                                           slice(x, mu_)[0], slice(x, nu_)[0], c, est);
        }
        const auto alpha = complex_observable_from(slice(x, alpha_), n_);
        return fidelity_primal_objective(rho_, sigma_, alpha, s[0].ref(), lambda, c, est);
    }

  private:
    bool dual_;
    DensityMatrix rho_;
    DensityMatrix sigma_;
    std::size_t n_;
    std::size_t lambda_ = 0;
    std::size_t mu_ = 0;
    std::size_t nu_ = 0;
    std::size_t alpha_ = 0;
};

class NegativityProblem final : public PenaltyObjective {
  public:
    NegativityProblem(bool dual, const DensityMatrix &rho_ab, std::size_t n_a,
                      const AnsatzSpec &spec, double c)
        : PenaltyObjective(dual ? ProblemTag::NegativityDual : ProblemTag::NegativityPrimal,
                           dual ? Sense::Minimize : Sense::Maximize, c),
          dual_(dual), rho_(rho_ab), n_(qubits_of(rho_ab)), n_a_(n_a) {
        if (n_a == 0 || n_a >= n_) {
            throw DimensionError("negativity: n_a must split the qubits into two nonempty parts");
        }
        add_state("sigma", TrainableState::quantum(n_, spec));
        add_state("tau", TrainableState::quantum(n_, spec));
        lambda_ = add_scalars("lambda", ParamKind::NonNegative, {1.0});
        mu_ = add_scalars("mu", ParamKind::NonNegative, {1.0});
        const std::size_t terms = std::size_t{1} << (2 * n_);
        alpha_ = add_scalars("alpha", ParamKind::Free, std::vector<double>(terms, 0.0));
        if (dual) {
            beta_ = add_scalars("beta", ParamKind::Free, std::vector<double>(terms, 0.0));
        }
        set_oracle(exact_negativity(rho_ab, std::size_t{1} << n_a, std::size_t{1} << (n_ - n_a)));
    }

  protected:
    TermBreakdown evaluate_realized(const std::vector<RealizedState> &s, std::span<const double> x,
                                    TermEstimator &est) const override {
        const double c = penalty_constant();
        const double lambda = slice(x, lambda_)[0];
        const double mu = slice(x, mu_)[0];
        const auto alpha = observable_from(slice(x, alpha_), n_);
        if (dual_) {
            const auto beta = observable_from(slice(x, beta_), n_);
            return negativity_dual_objective(rho_, n_a_, alpha, beta, s[0].ref(), s[1].ref(),
                                             lambda, mu, c, est);
        }
        return negativity_primal_objective(rho_, n_a_, alpha, s[0].ref(), s[1].ref(), lambda, mu,
                                           c, est);
    }

  private:
    bool dual_;
    DensityMatrix rho_;
    std::size_t n_;
    std::size_t n_a_;
    std::size_t lambda_ = 0;
    std::size_t mu_ = 0;
    std::size_t alpha_ = 0;
    std::size_t beta_ = 0;
};

std::vector<double> default_slack(std::size_t l) {
    std::vector<double> z(l, 0.1);
    if (l >= 2) {
        z[1] = 0.5;
    }
    return z;
}

class ChamProblem final : public PenaltyObjective {
  public:
    ChamProblem(bool dual, ConstrainedHamiltonian inst, const AnsatzSpec &spec, double c)
        : PenaltyObjective(dual ? ProblemTag::ChamDual : ProblemTag::ChamPrimal,
                           dual ? Sense::Maximize : Sense::Minimize, c),
          dual_(dual), inst_(std::move(inst)) {
        const std::size_t n = inst_.h.n_qubits();
        const std::size_t l = inst_.a.size();
        if (dual) {
            add_state("omega", TrainableState::quantum(n, spec));
            y_ = add_scalars("y", ParamKind::NonNegative, std::vector<double>(l, 0.001));
            mu_ = add_scalars("mu", ParamKind::Free, {-0.005});
            nu_ = add_scalars("nu", ParamKind::NonNegative, {0.001});
        } else {
            add_state("rho", TrainableState::quantum(n, spec));
            z_ = add_scalars("z", ParamKind::NonNegative, default_slack(l));
        }
        set_oracle(sdp_cham_value(inst_.h, inst_.a, inst_.b).value);
    }

  protected:
    TermBreakdown evaluate_realized(const std::vector<RealizedState> &s, std::span<const double> x,
                                    TermEstimator &est) const override {
        const double c = penalty_constant();
        if (dual_) {
            return cham_dual_objective(inst_.h, inst_.a, inst_.b, slice(x, y_), slice(x, mu_)[0],
                                       slice(x, nu_)[0], s[0].ref(), c, est);
        }
        return cham_primal_objective(inst_.h, inst_.a, inst_.b, s[0].ref(), slice(x, z_), c, est);
    }

  private:
    bool dual_;
    ConstrainedHamiltonian inst_;
    std::size_t y_ = 0;
    std::size_t mu_ = 0;
    std::size_t nu_ = 0;
    std::size_t z_ = 0;
};

class ChamInteriorPointProblem final : public PenaltyObjective {
  public:
    ChamInteriorPointProblem(ConstrainedHamiltonian inst, const AnsatzSpec &spec, double eta)
        : PenaltyObjective(ProblemTag::ChamInteriorPoint, Sense::Minimize, 0.0),
          inst_(std::move(inst)), eta_(eta) {
        if (!(eta > 0.0)) {
            throw std::invalid_argument("interior point: eta must be positive");
        }
        add_state("rho", TrainableState::quantum(inst_.h.n_qubits(), spec));
        set_oracle(sdp_cham_value(inst_.h, inst_.a, inst_.b).value);
    }

  protected:
    TermBreakdown evaluate_realized(const std::vector<RealizedState> &s, std::span<const double>,
                                    TermEstimator &est) const override {
        return interior_point_cham(inst_.h, inst_.a, inst_.b, s[0].ref(), eta_, est);
    }

    double directional_derivative(const std::vector<RealizedState> &s, std::size_t,
                                  const RealizedState &d, std::span<const double>) const override {
        // d/dt [Tr[H rho] - eta sum ln(Tr[A_i rho] - b_i)] along rho + t d
        double g = expect(inst_.h, d.rho).real();
        for (std::size_t i = 0; i < inst_.a.size(); ++i) {
            const double gap = expect(inst_.a[i], s[0].rho).real() - inst_.b[i];
            g -= eta_ * expect(inst_.a[i], d.rho).real() / gap;
        }
        return g;
    }

  private:
    ConstrainedHamiltonian inst_;
    double eta_;
};

class TvdProblem final : public PenaltyObjective {
  public:
    TvdProblem(bool dual, std::vector<double> p, std::vector<double> q, std::size_t layers, double c)
        : PenaltyObjective(dual ? ProblemTag::TvdDual : ProblemTag::TvdPrimal,
                           dual ? Sense::Minimize : Sense::Maximize, c),
          dual_(dual), p_(std::move(p)), q_(std::move(q)) {
        if (p_.size() != q_.size()) {
            throw DimensionError("tvd: distribution lengths differ");
        }
        const std::size_t n = qubit_count(p_.size());
        add_state("r", TrainableState::born(n, layers));
        add_state("s", TrainableState::born(n, layers));
        lambda_ = add_scalars("lambda", ParamKind::NonNegative, {1.0});
        mu_ = add_scalars("mu", ParamKind::NonNegative, {1.0});
        set_oracle(exact_tvd(p_, q_));
    }

  protected:
    TermBreakdown evaluate_realized(const std::vector<RealizedState> &s, std::span<const double> x,
                                    TermEstimator &est) const override {
        const double lambda = slice(x, lambda_)[0];
        const double mu = slice(x, mu_)[0];
        if (dual_) {
            return tvd_dual_objective(p_, q_, s[0].probs, s[1].probs, lambda, mu,
                                      penalty_constant(), est);
        }
        return tvd_primal_objective(p_, q_, s[0].probs, s[1].probs, lambda, mu, penalty_constant(),
                                    est);
    }

  private:
    bool dual_;
    std::vector<double> p_;
    std::vector<double> q_;
    std::size_t lambda_ = 0;
    std::size_t mu_ = 0;
};

class ClassicalChamProblem final : public PenaltyObjective {
  public:
    ClassicalChamProblem(bool dual, ClassicalHamiltonian inst, std::size_t layers, double c)
        : PenaltyObjective(dual ? ProblemTag::ClassicalChamDual : ProblemTag::ClassicalChamPrimal,
                           dual ? Sense::Maximize : Sense::Minimize, c),
          dual_(dual), inst_(std::move(inst)) {
        const std::size_t n = inst_.h.n_bits();
        const std::size_t l = inst_.a.size();
        if (dual) {
            add_state("w", TrainableState::born(n, layers));
            y_ = add_scalars("y", ParamKind::NonNegative, std::vector<double>(l, 0.0));
            mu_ = add_scalars("mu", ParamKind::Free, {0.0});
            nu_ = add_scalars("nu", ParamKind::NonNegative, {0.001});
        } else {
            add_state("p", TrainableState::born(n, layers));
            z_ = add_scalars("z", ParamKind::NonNegative, default_slack(l));
        }
        set_oracle(lp_classical_cham_value(inst_.h, inst_.a, inst_.b).value);
    }

  protected:
    TermBreakdown evaluate_realized(const std::vector<RealizedState> &s, std::span<const double> x,
                                    TermEstimator &est) const override {
        const double c = penalty_constant();
        if (dual_) {
            return classical_cham_dual_objective(inst_.h, inst_.a, inst_.b, slice(x, y_),
                                                 slice(x, mu_)[0], slice(x, nu_)[0], s[0].probs, c,
                                                 est);
        }
        return classical_cham_primal_objective(inst_.h, inst_.a, inst_.b, s[0].probs, slice(x, z_),
                                               c, est);
    }

  private:
    bool dual_;
    ClassicalHamiltonian inst_;
    std::size_t y_ = 0;
    std::size_t mu_ = 0;
    std::size_t nu_ = 0;
    std::size_t z_ = 0;
};

} // namespace

std::unique_ptr<PenaltyObjective> make_trace_distance(bool dual, const DensityMatrix &rho,
                                                      const DensityMatrix &sigma,
                                                      const AnsatzSpec &spec, double c) {
    return std::make_unique<TraceDistanceProblem>(dual, rho, sigma, spec, c);
}

std::unique_ptr<PenaltyObjective> make_fidelity(bool dual, const DensityMatrix &rho,
                                                const DensityMatrix &sigma, const AnsatzSpec &spec,
                                                double c) {
    return std::make_unique<FidelityProblem>(dual, rho, sigma, spec, c);
}

std::unique_ptr<PenaltyObjective> make_negativity(bool dual, const DensityMatrix &rho_ab,
                                                  std::size_t n_a, const AnsatzSpec &spec, double c) {
    return std::make_unique<NegativityProblem>(dual, rho_ab, n_a, spec, c);
}

std::unique_ptr<PenaltyObjective> make_cham(bool dual, const ConstrainedHamiltonian &inst,
                                            const AnsatzSpec &spec, double c) {
    return std::make_unique<ChamProblem>(dual, inst, spec, c);
}

std::unique_ptr<PenaltyObjective> make_cham_interior_point(const ConstrainedHamiltonian &inst,
                                                           const AnsatzSpec &spec, double eta) {
    return std::make_unique<ChamInteriorPointProblem>(inst, spec, eta);
}

std::unique_ptr<PenaltyObjective> make_tvd(bool dual, std::vector<double> p, std::vector<double> q,
                                           std::size_t born_layers, double c) {
    return std::make_unique<TvdProblem>(dual, std::move(p), std::move(q), born_layers, c);
}

std::unique_ptr<PenaltyObjective> make_classical_cham(bool dual, const ClassicalHamiltonian &inst,
                                                      std::size_t born_layers, double c) {
    return std::make_unique<ClassicalChamProblem>(dual, inst, born_layers, c);
}

} // namespace qslack

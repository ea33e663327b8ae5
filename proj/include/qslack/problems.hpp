#pragma once

#include "qslack/ansatz.hpp"
#include "qslack/objective.hpp"

#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qslack {

enum class ProblemTag {
    TraceDistancePrimal,
    TraceDistanceDual,
    FidelityPrimal,
    FidelityDual,
    NegativityPrimal,
    NegativityDual,
    ChamPrimal,
    ChamDual,
    ChamInteriorPoint,
    TvdPrimal,
    TvdDual,
    ClassicalChamPrimal,
    ClassicalChamDual,
};

std::string_view problem_name(ProblemTag tag);
std::optional<ProblemTag> parse_problem(std::string_view name);
bool is_classical(ProblemTag tag);
const std::vector<ProblemTag> &all_problems();

enum class Sense { Maximize, Minimize };

enum class AnsatzKind { Purification, ConvexCombination };

struct AnsatzSpec {
    AnsatzKind kind = AnsatzKind::Purification;
    std::size_t layers = 2;
    std::size_t born_layers = 2;
    std::optional<std::size_t> n_reference; // defaults to the system width
};

enum class ParamKind { Angle, NonNegative, Free };

struct ParamBlock {
    std::string name;
    ParamKind kind;
    std::size_t offset;
    std::size_t size;
    std::size_t state = 0; // index into the state list for Angle blocks
};

/// A realized ansatz state: a density matrix, or a distribution for classical problems.
struct RealizedState {
    ComplexMatrix rho;
    std::vector<double> probs;
    std::optional<ConvexCombinationState> cc;

    [[nodiscard]] StateRef ref() const { return {rho, cc ? &*cc : nullptr}; }
};

/// Maps a block of angles to a state.
class TrainableState {
  public:
    static TrainableState quantum(std::size_t n_system, const AnsatzSpec &spec);
    static TrainableState born(std::size_t n, std::size_t layers);

    [[nodiscard]] std::size_t n_params() const noexcept;
    [[nodiscard]] bool is_distribution() const noexcept { return distribution_; }
    [[nodiscard]] RealizedState realize(std::span<const double> angles) const;

  private:
    bool distribution_ = false;
    AnsatzKind kind_ = AnsatzKind::Purification;
    PurificationState purification_;
    ConvexCombinationState cc_;
};

/**
 * @brief A problem instance with its parameter layout, bound to an evaluable objective.
 *
 * The parameter vector holds circuit angles and scalars side by side. Non-negative
 * scalars are projected back to zero by project().
 */
class PenaltyObjective {
  public:
    virtual ~PenaltyObjective() = default;

    [[nodiscard]] ProblemTag tag() const noexcept { return tag_; }
    [[nodiscard]] Sense sense() const noexcept { return sense_; }
    [[nodiscard]] double penalty_constant() const noexcept { return c_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<ParamBlock> &blocks() const noexcept { return blocks_; }
    [[nodiscard]] const ParamBlock &block(std::string_view name) const;
    [[nodiscard]] std::optional<double> oracle_value() const noexcept { return oracle_; }
    /// True for the objectives that bound the target from below.
    [[nodiscard]] bool lower_bound_side() const noexcept { return sense_ == Sense::Maximize; }

    /// Angles Uniform[0, 2pi), scalars at their documented initial values.
    [[nodiscard]] std::vector<double> initial_parameters(std::mt19937_64 &rng) const;
    void project(std::span<double> x) const;

    [[nodiscard]] TermBreakdown evaluate(std::span<const double> x, TermEstimator &est) const;
    [[nodiscard]] TermBreakdown evaluate_exact(std::span<const double> x) const;
    [[nodiscard]] std::vector<RealizedState> realize(std::span<const double> x) const;
    [[nodiscard]] TermBreakdown evaluate_states(const std::vector<RealizedState> &states,
                                                std::span<const double> x,
                                                TermEstimator &est) const {
        return evaluate_realized(states, x, est);
    }

    /// Exact partial derivative of the exact-mode objective with respect to x[k].
    [[nodiscard]] double parameter_shift_derivative(std::span<const double> x, std::size_t k) const;
    [[nodiscard]] std::vector<double> exact_gradient(std::span<const double> x) const;

    /// Scalars (everything except angles) for logging.
    [[nodiscard]] std::vector<double> scalar_snapshot(std::span<const double> x) const;

  protected:
    PenaltyObjective(ProblemTag tag, Sense sense, double c);

    std::size_t add_state(std::string name, TrainableState s);
    std::size_t add_scalars(std::string name, ParamKind kind, std::vector<double> init);
    void set_oracle(double v) { oracle_ = v; }
    [[nodiscard]] std::span<const double> slice(std::span<const double> x, std::size_t block) const;
    [[nodiscard]] const std::vector<TrainableState> &states() const noexcept { return states_; }

    virtual TermBreakdown evaluate_realized(const std::vector<RealizedState> &states,
                                            std::span<const double> x,
                                            TermEstimator &est) const = 0;
    /// Derivative of the exact objective when one state moves along d (matrix and/or probs).
    /// The default uses the central difference with unit step, exact for objectives at most
    /// quadratic in each state.
    virtual double directional_derivative(const std::vector<RealizedState> &states,
                                          std::size_t state, const RealizedState &d,
                                          std::span<const double> x) const;

  private:
    ProblemTag tag_;
    Sense sense_;
    double c_;
    std::size_t dim_ = 0;
    std::vector<ParamBlock> blocks_;
    std::vector<std::vector<double>> initial_;
    std::vector<TrainableState> states_;
    std::optional<double> oracle_;
};

struct ConstrainedHamiltonian {
    PauliObservable h;
    std::vector<PauliObservable> a;
    std::vector<double> b;

    /// H = ZZ + XI + IX, A1 = YI with b1 = 0.2, A2 = IZ with b2 = 0.1.
    static ConstrainedHamiltonian reference_instance();
};

struct ClassicalHamiltonian {
    WalshObservable h;
    std::vector<WalshObservable> a;
    std::vector<double> b;

    /// h = s1 s1, a1 = 0.5 s1 s0 with b1 = 0.1, a2 = 0.7 s0 s1 with b2 = 0.3.
    static ClassicalHamiltonian reference_instance();
};

std::unique_ptr<PenaltyObjective> make_trace_distance(bool dual, const DensityMatrix &rho,
                                                      const DensityMatrix &sigma,
                                                      const AnsatzSpec &spec, double c);
std::unique_ptr<PenaltyObjective> make_fidelity(bool dual, const DensityMatrix &rho,
                                                const DensityMatrix &sigma, const AnsatzSpec &spec,
                                                double c);
std::unique_ptr<PenaltyObjective> make_negativity(bool dual, const DensityMatrix &rho_ab,
                                                  std::size_t n_a, const AnsatzSpec &spec, double c);
std::unique_ptr<PenaltyObjective> make_cham(bool dual, const ConstrainedHamiltonian &inst,
                                            const AnsatzSpec &spec, double c);
std::unique_ptr<PenaltyObjective> make_cham_interior_point(const ConstrainedHamiltonian &inst,
                                                           const AnsatzSpec &spec, double eta);
std::unique_ptr<PenaltyObjective> make_tvd(bool dual, std::vector<double> p, std::vector<double> q,
                                           std::size_t born_layers, double c);
std::unique_ptr<PenaltyObjective> make_classical_cham(bool dual, const ClassicalHamiltonian &inst,
                                                      std::size_t born_layers, double c);

} // namespace qslack

#pragma once

#include "qslack/ansatz.hpp"
#include "qslack/estimate.hpp"
#include "qslack/linalg.hpp"
#include "qslack/pauli.hpp"

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qslack {

/**
 * @brief Named term estimates plus the recombined objective.
 *
 * penalty holds the squared norm (or sum of squares) that is weighted by c;
 * for the interior-point variant it holds the barrier sum.
 */
struct TermBreakdown {
    std::vector<std::pair<std::string, Estimate>> terms;
    double value = 0.0;
    double penalty = 0.0;

    void add(std::string name, const Estimate &e) { terms.emplace_back(std::move(name), e); }
    [[nodiscard]] const Estimate &term(std::string_view name) const;
};

/// A state argument: a matrix and, when prepared that way, its convex-combination form.
struct StateRef {
    const ComplexMatrix *rho;
    const ConvexCombinationState *cc = nullptr;

    StateRef(const ComplexMatrix &m) : rho(&m) {}
    StateRef(const DensityMatrix &d) : rho(&d.matrix()) {}
    StateRef(const ComplexMatrix &m, const ConvexCombinationState *c) : rho(&m), cc(c) {}
};

/**
 * @brief Estimates primitive quantities, exactly or with emulated shot noise.
 *
 * In shot mode every call draws from a fresh stream seeded by eval_seed xor the
 * running term index, so terms receive independent noise.
 */
class TermEstimator {
  public:
    explicit TermEstimator(ShotModel model = ShotModel::exact(), std::uint64_t eval_seed = 0)
        : model_(model), seed_(eval_seed) {}

    Estimate overlap(StateRef a, StateRef b);
    Estimate purity(StateRef a);
    Estimate pauli(StateRef a, const PauliString &p);
    Estimate collision(std::span<const double> p, std::span<const double> q);
    Estimate walsh(std::span<const double> p, const WalshString &w);

    [[nodiscard]] bool is_exact() const noexcept { return model_.is_exact(); }

  private:
    std::mt19937_64 next_rng() { return std::mt19937_64(seed_ ^ counter_++); }

    ShotModel model_;
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

class BarrierViolation : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// Generic instances

struct LinearCombinationModel {
    std::vector<double> alpha;              // A = sum alpha_i rho_i
    std::vector<DensityMatrix> a_states;
    std::vector<double> beta;               // B = sum beta_j tau_j
    std::vector<DensityMatrix> b_states;
    std::vector<std::vector<double>> phi;   // phi[k][l]
    std::vector<DensityMatrix> phi_in;      // sigma_k
    std::vector<DensityMatrix> phi_out;     // omega_l
};

struct PauliModel {
    PauliObservable a;
    PauliObservable b;
    std::map<std::pair<PauliString, PauliString>, double> phi; // (x, y) -> phi_{x,y}
};

/// Phi(X) = sum phi_{kl} Tr[sigma_k X] omega_l, or sum phi_{x,y} sigma_y Tr[sigma_x X].
struct SdpInstance {
    std::variant<LinearCombinationModel, PauliModel> model;

    [[nodiscard]] std::size_t input_dim() const;
    [[nodiscard]] std::size_t output_dim() const;
    [[nodiscard]] ComplexMatrix a_dense() const;
    [[nodiscard]] ComplexMatrix b_dense() const;
    [[nodiscard]] ComplexMatrix apply_map(const ComplexMatrix &x) const;
    [[nodiscard]] ComplexMatrix apply_adjoint(const ComplexMatrix &y) const;
};

/// max side: lambda Tr[A rho] - c ||B - lambda Phi(rho) - mu sigma||^2
TermBreakdown generic_primal_objective(const SdpInstance &inst, StateRef rho, StateRef sigma,
                                       double lambda, double mu, double c, TermEstimator &est);
/// min side: kappa Tr[B tau] + c ||kappa Phi^dagger(tau) - A - nu omega||^2
TermBreakdown generic_dual_objective(const SdpInstance &inst, StateRef tau, StateRef omega,
                                     double kappa, double nu, double c, TermEstimator &est);

// ---------------------------------------------------------------------------
// Quantum problems

TermBreakdown td_dual_objective(StateRef rho, StateRef sigma, StateRef omega, StateRef tau,
                                double lambda, double mu, double c, TermEstimator &est);
TermBreakdown td_primal_objective(StateRef rho, StateRef sigma, StateRef tau, StateRef omega,
                                  double lambda, double mu, double c, TermEstimator &est);

/// omega lives on 1 + n qubits with qubit 0 as the block index.
TermBreakdown fidelity_primal_objective(StateRef rho, StateRef sigma, const PauliObservable &alpha,
                                        StateRef omega, double lambda, double c, TermEstimator &est);
TermBreakdown fidelity_dual_objective(StateRef rho, StateRef sigma, StateRef omega, StateRef tau,
                                      StateRef xi, double lambda, double mu, double nu, double c,
                                      TermEstimator &est);

/// The first n_a qubits form A, the rest form B.
TermBreakdown negativity_primal_objective(StateRef rho_ab, std::size_t n_a,
                                          const PauliObservable &alpha, StateRef sigma_ab,
                                          StateRef tau_ab, double lambda, double mu, double c,
                                          TermEstimator &est);
TermBreakdown negativity_dual_objective(StateRef rho_ab, std::size_t n_a,
                                        const PauliObservable &alpha, const PauliObservable &beta,
                                        StateRef sigma_ab, StateRef tau_ab, double lambda,
                                        double mu, double c, TermEstimator &est);

/// min side: Tr[H rho] + c sum_i (Tr[A_i rho] - b_i - z_i)^2
TermBreakdown cham_primal_objective(const PauliObservable &h, const std::vector<PauliObservable> &a,
                                    std::span<const double> b, StateRef rho,
                                    std::span<const double> z, double c, TermEstimator &est);
/// max side: sum b_i y_i + mu - c ||H - sum y_i A_i - mu I - nu omega||^2
TermBreakdown cham_dual_objective(const PauliObservable &h, const std::vector<PauliObservable> &a,
                                  std::span<const double> b, std::span<const double> y, double mu,
                                  double nu, StateRef omega, double c, TermEstimator &est);
/// Tr[H rho] - eta sum_i ln(Tr[A_i rho] - b_i); throws BarrierViolation when infeasible.
TermBreakdown interior_point_cham(const PauliObservable &h, const std::vector<PauliObservable> &a,
                                  std::span<const double> b, StateRef rho, double eta,
                                  TermEstimator &est);

// ---------------------------------------------------------------------------
// Classical problems

TermBreakdown tvd_dual_objective(std::span<const double> p, std::span<const double> q,
                                 std::span<const double> r, std::span<const double> s,
                                 double lambda, double mu, double c, TermEstimator &est);
/// max side: lambda r.(p - q) - c ||1 - lambda r - mu s||^2
TermBreakdown tvd_primal_objective(std::span<const double> p, std::span<const double> q,
                                   std::span<const double> r, std::span<const double> s,
                                   double lambda, double mu, double c, TermEstimator &est);
TermBreakdown classical_cham_primal_objective(const WalshObservable &h,
                                              const std::vector<WalshObservable> &a,
                                              std::span<const double> b, std::span<const double> p,
                                              std::span<const double> z, double c,
                                              TermEstimator &est);
TermBreakdown classical_cham_dual_objective(const WalshObservable &h,
                                            const std::vector<WalshObservable> &a,
                                            std::span<const double> b, std::span<const double> y,
                                            double mu, double nu, std::span<const double> w,
                                            double c, TermEstimator &est);

} // namespace qslack

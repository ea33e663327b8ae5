#pragma once

#include "qslack/ansatz.hpp"
#include "qslack/linalg.hpp"
#include "qslack/pauli.hpp"

#include <cstdint>
#include <random>
#include <span>

namespace qslack {

struct ShotModel {
    enum class Mode { Exact, Shots };
    Mode mode = Mode::Exact;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    static ShotModel exact() { return {}; }
    static ShotModel with_shots(std::uint64_t n, std::uint64_t seed = 0);
    [[nodiscard]] bool is_exact() const noexcept { return mode == Mode::Exact; }
};

struct Estimate {
    double value = 0.0;
    double std_err = 0.0;
    std::uint64_t n_shots = 0;
};

/// Sample mean of N draws of a +-1 variable with mean m (Gaussian above 1e6 draws).
Estimate emulate_pm1(double m, std::uint64_t n, std::mt19937_64 &rng);
/// Sample mean of N Bernoulli(p) draws.
Estimate emulate_bernoulli(double p, std::uint64_t n, std::mt19937_64 &rng);

Estimate estimate_pauli_expect(const ComplexMatrix &rho, const PauliString &p, const ShotModel &shots,
                               std::mt19937_64 &rng);
Estimate estimate_overlap_swap(const ComplexMatrix &rho, const ComplexMatrix &sigma,
                               const ShotModel &shots, std::mt19937_64 &rng);
/// Echo with U^dagger V: Tr[rho sigma] = sum_x p(x) t(x), t(x) = <x|U^dagger sigma U|x>.
Estimate estimate_overlap_loschmidt(const ConvexCombinationState &cc1, const ComplexMatrix &other,
                                    const ShotModel &shots, std::mt19937_64 &rng);
Estimate estimate_overlap_loschmidt(const ConvexCombinationState &cc1,
                                    const ConvexCombinationState &cc2, const ShotModel &shots,
                                    std::mt19937_64 &rng);
Estimate estimate_collision(std::span<const double> p, std::span<const double> q,
                            const ShotModel &shots, std::mt19937_64 &rng);
Estimate estimate_walsh(std::span<const double> p, const WalshString &w, const ShotModel &shots,
                        std::mt19937_64 &rng);

/// Smallest T with T >= ln(2/delta) / (2 eps^2).
std::uint64_t hoeffding_shots(double epsilon, double delta);

} // namespace qslack

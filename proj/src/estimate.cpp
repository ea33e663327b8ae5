#include "qslack/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qslack {

namespace {

constexpr std::uint64_t kGaussianThreshold = 1'000'000;

Estimate exact(double v) { return {v, 0.0, 0}; }

} // namespace

ShotModel ShotModel::with_shots(std::uint64_t n, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("ShotModel: shot count must be positive");
    }
    return {Mode::Shots, n, seed};
}

Estimate emulate_pm1(double m, std::uint64_t n, std::mt19937_64 &rng) {
    m = std::clamp(m, -1.0, 1.0);
    const double nd = static_cast<double>(n);
    const double sd = std::sqrt(std::max(0.0, 1.0 - m * m) / nd);
    double mean;
    if (n > kGaussianThreshold) {
        std::normal_distribution<double> z(0.0, 1.0);
        mean = m + z(rng) * sd;
    } else {
        std::binomial_distribution<std::uint64_t> k(n, 0.5 * (1.0 + m));
        mean = 2.0 * static_cast<double>(k(rng)) / nd - 1.0;
    }
    return {mean, sd, n};
}

Estimate emulate_bernoulli(double p, std::uint64_t n, std::mt19937_64 &rng) {
    p = std::clamp(p, 0.0, 1.0);
    const double nd = static_cast<double>(n);
    const double sd = std::sqrt(p * (1.0 - p) / nd);
    double mean;
    if (n > kGaussianThreshold) {
        std::normal_distribution<double> z(0.0, 1.0);
        mean = p + z(rng) * sd;
    } else {
        std::binomial_distribution<std::uint64_t> k(n, p);
        mean = static_cast<double>(k(rng)) / nd;
    }
    return {mean, sd, n};
}

Estimate estimate_pauli_expect(const ComplexMatrix &rho, const PauliString &p, const ShotModel &shots,
                               std::mt19937_64 &rng) {
    const double m = pauli_trace(p, rho).real();
    if (shots.is_exact() || p.is_identity()) {
        return exact(m);
    }
    return emulate_pm1(m, shots.shots, rng);
}

Estimate estimate_overlap_swap(const ComplexMatrix &rho, const ComplexMatrix &sigma,
                               const ShotModel &shots, std::mt19937_64 &rng) {
    if (rho.rows() != sigma.rows() || !rho.is_square() || !sigma.is_square()) {
        throw DimensionError("estimate_overlap_swap: dimension mismatch");
    }
    const double m = trace_product(rho, sigma).real();
    if (shots.is_exact()) {
        return exact(m);
    }
    return emulate_pm1(m, shots.shots, rng);
}

Estimate estimate_overlap_loschmidt(const ConvexCombinationState &cc1, const ComplexMatrix &other,
                                    const ShotModel &shots, std::mt19937_64 &rng) {
    const auto p = qcbm_distribution(cc1.born_circuit, cc1.phi);
    if (other.rows() != p.size()) {
        throw DimensionError("estimate_overlap_loschmidt: dimension mismatch");
    }
    const auto u = cc1.basis_circuit.unitary(cc1.gamma);
    // t(x) = <x| U^dagger other U |x>
    const ComplexMatrix rotated = u.adjoint() * other * u;
    double m = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        m += p[x] * rotated(x, x).real();
    }
    if (shots.is_exact()) {
        return exact(m);
    }
    return emulate_bernoulli(m, shots.shots, rng);
}

Estimate estimate_overlap_loschmidt(const ConvexCombinationState &cc1,
                                    const ConvexCombinationState &cc2, const ShotModel &shots,
                                    std::mt19937_64 &rng) {
    const auto p = qcbm_distribution(cc1.born_circuit, cc1.phi);
    const auto q = qcbm_distribution(cc2.born_circuit, cc2.phi);
    if (p.size() != q.size()) {
        throw DimensionError("estimate_overlap_loschmidt: dimension mismatch");
    }
    const auto u = cc1.basis_circuit.unitary(cc1.gamma);
    const auto v = cc2.basis_circuit.unitary(cc2.gamma);
    // |<x|U^dagger V|y>|^2 is the transition probability of the echo circuit
    const ComplexMatrix w = u.adjoint() * v;
    double m = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        for (std::size_t y = 0; y < q.size(); ++y) {
            m += p[x] * q[y] * std::norm(w(x, y));
        }
    }
    if (shots.is_exact()) {
        return exact(m);
    }
    return emulate_bernoulli(m, shots.shots, rng);
}

Estimate estimate_collision(std::span<const double> p, std::span<const double> q,
                            const ShotModel &shots, std::mt19937_64 &rng) {
    if (p.size() != q.size()) {
        throw DimensionError("estimate_collision: length mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        m += p[i] * q[i];
    }
    if (shots.is_exact()) {
        return exact(m);
    }
    return emulate_bernoulli(m, shots.shots, rng);
}

Estimate estimate_walsh(std::span<const double> p, const WalshString &w, const ShotModel &shots,
                        std::mt19937_64 &rng) {
    const double m = walsh_dot(w, p);
    if (shots.is_exact() || w.mask() == 0) {
        return exact(m);
    }
    return emulate_pm1(m, shots.shots, rng);
}

std::uint64_t hoeffding_shots(double epsilon, double delta) {
    if (!(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("hoeffding_shots: need epsilon > 0 and delta in (0,1)");
    }
    const double bound = std::log(2.0 / delta) / (2.0 * epsilon * epsilon);
    // guard against bound landing a hair above an integer through rounding
    const double r = std::round(bound);
    if (std::abs(bound - r) < 1e-9 * std::max(1.0, r)) {
        return static_cast<std::uint64_t>(r);
    }
    return static_cast<std::uint64_t>(std::ceil(bound));
}

} // namespace qslack

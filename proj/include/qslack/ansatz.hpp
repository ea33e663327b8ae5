#pragma once

#include "qslack/linalg.hpp"

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace qslack {

enum class GateKind : std::uint8_t { Rx, Ry, Rz, Rxx, Ryy, Rzz, CX };

inline constexpr std::size_t kNoParam = std::numeric_limits<std::size_t>::max();

struct Gate {
    GateKind kind;
    std::size_t q0;
    std::size_t q1 = 0;             // second qubit of two-qubit gates, CX target
    std::size_t param = kNoParam;   // index into the angle vector
};

/**
 * @brief Ordered gate list acting on n qubits.
 *
 * Rotations are exp(-i theta G / 2) for a Pauli generator G, so the zero angle
 * vector gives the identity and every angle admits the +-pi/2 shift rule.
 * Qubit 0 is the most significant bit of a basis index.
 */
class ParamCircuit {
  public:
    ParamCircuit() = default;
    explicit ParamCircuit(std::size_t n_qubits);

    /// Ry, Rz on each qubit, then a ring of Rzz, repeated.
    static ParamCircuit layered_unitary(std::size_t n, std::size_t layers);
    /// Rx, Rz on each qubit, then a ring of Rzz, repeated.
    static ParamCircuit qcbm(std::size_t n, std::size_t layers);

    void add_rotation(GateKind kind, std::size_t q0, std::size_t q1 = 0);
    void add_cx(std::size_t control, std::size_t target);
    /// Appends other on qubits shifted by qubit_offset, parameters shifted to the end.
    void append(const ParamCircuit &other, std::size_t qubit_offset);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_; }
    [[nodiscard]] std::size_t n_params() const noexcept { return n_params_; }
    [[nodiscard]] std::size_t layers() const noexcept { return layers_; }
    [[nodiscard]] const std::vector<Gate> &gates() const noexcept { return gates_; }
    /// True when every parameterized gate is a half-angle Pauli rotation.
    [[nodiscard]] bool shift_rule_applicable() const noexcept;

    void apply(std::vector<cplx> &state, std::span<const double> theta) const;
    [[nodiscard]] std::vector<cplx> run_from_zero(std::span<const double> theta) const;
    [[nodiscard]] ComplexMatrix unitary(std::span<const double> theta) const;

  private:
    void check_params(std::span<const double> theta) const;

    std::size_t n_ = 0;
    std::size_t layers_ = 0;
    std::size_t n_params_ = 0;
    std::vector<Gate> gates_;
};

ComplexMatrix build_layered_unitary(std::size_t n, std::size_t layers, std::span<const double> theta);

std::vector<double> qcbm_distribution(const ParamCircuit &born, std::span<const double> phi);

struct PurificationState {
    ParamCircuit circuit; // on n_reference + n_system qubits, reference first
    std::size_t n_reference = 0;
    std::size_t n_system = 0;
    std::vector<double> theta;

    static PurificationState layered(std::size_t n_system, std::size_t n_reference,
                                     std::size_t layers);
};

struct ConvexCombinationState {
    ParamCircuit born_circuit;  // phi
    ParamCircuit basis_circuit; // gamma
    std::vector<double> phi;
    std::vector<double> gamma;

    static ConvexCombinationState layered(std::size_t n, std::size_t unitary_layers,
                                          std::size_t born_layers);
    [[nodiscard]] std::size_t n_system() const noexcept { return basis_circuit.n_qubits(); }
};

/// Reduced state on S, no spectral validation.
ComplexMatrix purification_matrix(const PurificationState &s);
ComplexMatrix convex_combination_matrix(const ConvexCombinationState &s);

DensityMatrix realize_density(const PurificationState &s);
DensityMatrix realize_density(const ConvexCombinationState &s);

struct CcSample {
    std::size_t index;
    std::vector<cplx> state; // U(gamma)|index>
};

CcSample sample_cc(const ConvexCombinationState &s, std::mt19937_64 &rng);

/// Purification over n_R = n_S qubits: Born circuit on R, CX fan-out R->S, U(gamma) on S.
PurificationState born_cc_as_purification(const ConvexCombinationState &s);

/// Random mixed state: purification with n_R = n_S, angles Uniform[0, 2pi).
DensityMatrix random_purified_state(std::size_t n, std::size_t layers, std::uint64_t seed);
/// Born distribution with angles Uniform[0, 2pi).
std::vector<double> random_born_distribution(std::size_t n, std::size_t layers, std::uint64_t seed);

} // namespace qslack

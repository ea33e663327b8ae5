#pragma once

#include "qslack/linalg.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qslack {

/// Pauli label convention: 0=I, 1=X, 2=Y, 3=Z. Qubit 0 is the leftmost tensor factor.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::vector<std::uint8_t> labels);
    /// Text form such as "XZIY".
    static PauliString parse(std::string_view text);
    static PauliString identity(std::size_t n);
    /// Index in 0..4^n-1 with qubit 0 as the most significant base-4 digit.
    static PauliString from_index(std::size_t index, std::size_t n);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return labels_.size(); }
    [[nodiscard]] const std::vector<std::uint8_t> &labels() const noexcept { return labels_; }
    [[nodiscard]] std::uint8_t operator[](std::size_t q) const { return labels_[q]; }
    [[nodiscard]] bool is_identity() const noexcept;
    [[nodiscard]] std::size_t count(std::uint8_t label) const noexcept;
    [[nodiscard]] std::size_t index() const noexcept;
    [[nodiscard]] std::string to_string() const;
    /// Concatenation: this on the left factor, other on the right.
    [[nodiscard]] PauliString tensor(const PauliString &other) const;

    auto operator<=>(const PauliString &) const = default;

  private:
    std::vector<std::uint8_t> labels_;
};

ComplexMatrix pauli_matrix(std::uint8_t label);
ComplexMatrix dense(const PauliString &p);

/// Tr[P m] in O(dim) using the signed-permutation structure of P.
cplx pauli_trace(const PauliString &p, const ComplexMatrix &m);

std::size_t default_term_cap(std::size_t n);

/// Sparse Pauli expansion sum_x coeff_x sigma_x, canonical lexicographic order.
class PauliObservable {
  public:
    PauliObservable() = default;
    explicit PauliObservable(std::size_t n, std::size_t term_cap = 0);
    /// Text form like "1.0 ZZ + XI - 0.5 IX"; a bare string has coefficient 1.
    static PauliObservable parse(std::string_view text);

    void add_term(const PauliString &p, cplx coeff);
    void set_term(const PauliString &p, cplx coeff);
    [[nodiscard]] cplx coefficient(const PauliString &p) const;
    [[nodiscard]] const std::map<PauliString, cplx> &terms() const noexcept { return terms_; }
    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_; }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
    [[nodiscard]] bool is_hermitian() const noexcept;
    [[nodiscard]] std::string to_string() const;
    /// Squared Euclidean norm of the coefficient vector.
    [[nodiscard]] double coeff_norm_sq() const noexcept;

  private:
    std::size_t n_ = 0;
    std::size_t cap_ = 0;
    std::map<PauliString, cplx> terms_;
};

ComplexMatrix observable_dense(const PauliObservable &o);
cplx expect(const PauliObservable &o, const ComplexMatrix &rho);

/// Walsh label convention: 0 -> s0=(1,1), 1 -> s1=(1,-1).
class WalshString {
  public:
    WalshString() = default;
    explicit WalshString(std::vector<std::uint8_t> bits);
    /// Text form such as "10".
    static WalshString parse(std::string_view text);
    static WalshString zeros(std::size_t n);

    [[nodiscard]] std::size_t n_bits() const noexcept { return bits_.size(); }
    [[nodiscard]] const std::vector<std::uint8_t> &bits() const noexcept { return bits_; }
    [[nodiscard]] std::size_t mask() const noexcept;
    [[nodiscard]] std::string to_string() const;
    auto operator<=>(const WalshString &) const = default;

  private:
    std::vector<std::uint8_t> bits_;
};

std::vector<double> walsh_vector(const WalshString &w);
double walsh_dot(const WalshString &w, std::span<const double> p);

class WalshObservable {
  public:
    WalshObservable() = default;
    explicit WalshObservable(std::size_t n);
    /// Text form like "0.5 10 + 0.7 01".
    static WalshObservable parse(std::string_view text);

    void add_term(const WalshString &w, double coeff);
    [[nodiscard]] double coefficient(const WalshString &w) const;
    [[nodiscard]] const std::map<WalshString, double> &terms() const noexcept { return terms_; }
    [[nodiscard]] std::size_t n_bits() const noexcept { return n_; }
    [[nodiscard]] double coeff_norm_sq() const noexcept;
    [[nodiscard]] std::string to_string() const;

  private:
    std::size_t n_ = 0;
    std::map<WalshString, double> terms_;
};

std::vector<double> walsh_dense(const WalshObservable &o);

/// Single-qubit measurement basis for one Pauli label.
struct QubitBasis {
    std::array<std::array<cplx, 2>, 2> vectors; // vectors[y] = |phi_y>
    bool in_sign;                               // f(label): outcome enters the parity
};

std::vector<QubitBasis> pauli_eigenbasis_sampler(const PauliString &p);

/// Outcome distribution of measuring rho in the product basis.
std::vector<double> basis_outcome_distribution(const std::vector<QubitBasis> &bases,
                                               const ComplexMatrix &rho);

} // namespace qslack

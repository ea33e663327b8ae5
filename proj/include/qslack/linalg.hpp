#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qslack {

using cplx = std::complex<double>;

class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/**
 * @brief Dense complex matrix, row-major.
 */
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> d);
    /// |v><v|
    static ComplexMatrix projector(std::span<const cplx> v);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    cplx &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx &operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }
    [[nodiscard]] std::span<cplx> data() noexcept { return data_; }
    [[nodiscard]] std::span<const cplx> data() const noexcept { return data_; }

    [[nodiscard]] ComplexMatrix adjoint() const;
    [[nodiscard]] ComplexMatrix transpose() const;
    [[nodiscard]] cplx trace() const;
    [[nodiscard]] bool all_finite() const;

    ComplexMatrix &operator+=(const ComplexMatrix &o);
    ComplexMatrix &operator-=(const ComplexMatrix &o);
    ComplexMatrix &operator*=(cplx s);

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(double s, ComplexMatrix a);

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

/**
 * @brief Trace out every factor whose keep flag is false.
 *
 * @param keep one flag per tensor factor, leftmost factor first
 * @param dims dimension of each factor
 */
ComplexMatrix partial_trace(const ComplexMatrix &m, const std::vector<bool> &keep,
                            const std::vector<std::size_t> &dims);

/// Transpose of the right tensor factor of an (dim_a*dim_b)-square matrix.
ComplexMatrix partial_transpose_B(const ComplexMatrix &m, std::size_t dim_a,
                                  std::size_t dim_b);

/// Tr[a^dagger b]
cplx hs_inner(const ComplexMatrix &a, const ComplexMatrix &b);
double hs_norm_sq(const ComplexMatrix &a);
/// Tr[a b] without forming the product.
cplx trace_product(const ComplexMatrix &a, const ComplexMatrix &b);
double hs_distance(const ComplexMatrix &a, const ComplexMatrix &b);

bool is_hermitian(const ComplexMatrix &m, double tol = 1e-12);

class HermitianMatrix {
  public:
    HermitianMatrix() = default;
    /// Throws if m differs from its adjoint by more than tol (scaled by max entry).
    explicit HermitianMatrix(ComplexMatrix m, double tol = 1e-12);
    /// (m + m^dagger)/2, no check.
    static HermitianMatrix symmetrized(const ComplexMatrix &m);

    [[nodiscard]] const ComplexMatrix &matrix() const noexcept { return m_; }
    [[nodiscard]] std::size_t dim() const noexcept { return m_.rows(); }

  private:
    ComplexMatrix m_;
};

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // columns
};

/// Cyclic complex Jacobi; sweeps until the off-diagonal HS norm is below 1e-12.
EigenDecomposition eig_hermitian(const HermitianMatrix &m);
std::vector<double> eigvals_hermitian(const ComplexMatrix &m);
double min_eigenvalue(const ComplexMatrix &m);

/// Sum of singular values.
double trace_norm(const ComplexMatrix &m);

/// Principal square root; eigenvalues in [-1e-8, 0) are clamped to 0.
HermitianMatrix mat_sqrt_psd(const HermitianMatrix &m);

class DensityMatrix {
  public:
    DensityMatrix() = default;
    /// Validates PSD (eigenvalues >= -1e-10) and unit trace (within 1e-10).
    explicit DensityMatrix(HermitianMatrix h);
    static DensityMatrix pure(std::span<const cplx> psi);
    static DensityMatrix maximally_mixed(std::size_t dim);
    /// Skips the spectral check; for states that are PSD by construction.
    static DensityMatrix trusted(ComplexMatrix m);

    [[nodiscard]] const ComplexMatrix &matrix() const noexcept { return m_; }
    [[nodiscard]] std::size_t dim() const noexcept { return m_.rows(); }
    operator const ComplexMatrix &() const noexcept { return m_; }

  private:
    ComplexMatrix m_;
};

/// log2 of a power of two, throws otherwise.
std::size_t qubit_count(std::size_t dim);

} // namespace qslack

#include "qslack/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qslack {

namespace {

void require_same_shape(const ComplexMatrix &a, const ComplexMatrix &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(what) + ": shape mismatch");
    }
}

double max_abs_entry(const ComplexMatrix &m) {
    double r = 0.0;
    for (const auto &z : m.data()) {
        r = std::max(r, std::abs(z));
    }
    return r;
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("ComplexMatrix: entry count does not match shape");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        m(i, i) = d[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::projector(std::span<const cplx> v) {
    const std::size_t n = v.size();
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = v[i] * std::conj(v[j]);
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            r(j, i) = std::conj((*this)(i, j));
        }
    }
    return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            r(j, i) = (*this)(i, j);
        }
    }
    return r;
}

cplx ComplexMatrix::trace() const {
    if (!is_square()) {
        throw DimensionError("trace: matrix not square");
    }
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const cplx &z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &o) {
    require_same_shape(*this, o, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += o.data_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &o) {
    require_same_shape(*this, o, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= o.data_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(cplx s) {
    for (auto &z : data_) {
        z *= s;
    }
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= cplx{s, 0.0}; }

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matrix product: inner dimensions differ");
    }
    ComplexMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{0.0, 0.0}) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                r(i, j) += aik * b(k, j);
            }
        }
    }
    return r;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    const std::size_t p = b.rows();
    const std::size_t q = b.cols();
    ComplexMatrix r(a.rows() * p, a.cols() * q);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            for (std::size_t k = 0; k < p; ++k) {
                for (std::size_t l = 0; l < q; ++l) {
                    r(i * p + k, j * q + l) = aij * b(k, l);
                }
            }
        }
    }
    return r;
}

ComplexMatrix partial_trace(const ComplexMatrix &m, const std::vector<bool> &keep,
                            const std::vector<std::size_t> &dims) {
    if (keep.size() != dims.size()) {
        throw DimensionError("partial_trace: keep mask and dims differ in length");
    }
    const std::size_t total =
        std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    if (!m.is_square() || m.rows() != total) {
        throw DimensionError("partial_trace: product of dims does not match matrix");
    }
    const std::size_t nf = dims.size();
    std::size_t dim_keep = 1;
    for (std::size_t f = 0; f < nf; ++f) {
        if (keep[f]) {
            dim_keep *= dims[f];
        }
    }
    ComplexMatrix r(dim_keep, dim_keep);
    // strides of each factor in the full index
    std::vector<std::size_t> stride(nf, 1);
    for (std::size_t f = nf; f-- > 1;) {
        stride[f - 1] = stride[f] * dims[f];
    }
    std::vector<std::size_t> digits(nf);
    for (std::size_t row = 0; row < total; ++row) {
        std::size_t rem = row;
        for (std::size_t f = 0; f < nf; ++f) {
            digits[f] = rem / stride[f];
            rem %= stride[f];
        }
        // row index restricted to kept factors, and the traced part of row
        std::size_t rk = 0;
        for (std::size_t f = 0; f < nf; ++f) {
            if (keep[f]) {
                rk = rk * dims[f] + digits[f];
            }
        }
        // enumerate columns sharing the traced digits of row
        std::size_t ck_count = dim_keep;
        for (std::size_t ck = 0; ck < ck_count; ++ck) {
            std::size_t col = 0;
            std::size_t crem = ck;
            std::size_t div = dim_keep;
            for (std::size_t f = 0; f < nf; ++f) {
                std::size_t d;
                if (keep[f]) {
                    div /= dims[f];
                    d = crem / div;
                    crem %= div;
                } else {
                    d = digits[f];
                }
                col += d * stride[f];
            }
            r(rk, ck) += m(row, col);
        }
    }
    return r;
}

ComplexMatrix partial_transpose_B(const ComplexMatrix &m, std::size_t dim_a, std::size_t dim_b) {
    if (!m.is_square() || m.rows() != dim_a * dim_b) {
        throw DimensionError("partial_transpose_B: dim_a*dim_b does not match matrix");
    }
    ComplexMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < dim_a; ++i) {
        for (std::size_t j = 0; j < dim_a; ++j) {
            for (std::size_t k = 0; k < dim_b; ++k) {
                for (std::size_t l = 0; l < dim_b; ++l) {
                    r(i * dim_b + k, j * dim_b + l) = m(i * dim_b + l, j * dim_b + k);
                }
            }
        }
    }
    return r;
}

cplx hs_inner(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_shape(a, b, "hs_inner");
    cplx s{0.0, 0.0};
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t k = 0; k < da.size(); ++k) {
        s += std::conj(da[k]) * db[k];
    }
    return s;
}

double hs_norm_sq(const ComplexMatrix &a) {
    double s = 0.0;
    for (const auto &z : a.data()) {
        s += std::norm(z);
    }
    return s;
}

cplx trace_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) {
        throw DimensionError("trace_product: shape mismatch");
    }
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            s += a(i, k) * b(k, i);
        }
    }
    return s;
}

double hs_distance(const ComplexMatrix &a, const ComplexMatrix &b) {
    return std::sqrt(hs_norm_sq(a - b));
}

bool is_hermitian(const ComplexMatrix &m, double tol) {
    if (!m.is_square()) {
        return false;
    }
    const double scale = std::max(1.0, max_abs_entry(m));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i; j < m.cols(); ++j) {
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol * scale) {
                return false;
            }
        }
    }
    return true;
}

HermitianMatrix::HermitianMatrix(ComplexMatrix m, double tol) : m_(std::move(m)) {
    if (!m_.is_square()) {
        throw DimensionError("HermitianMatrix: not square");
    }
    if (!is_hermitian(m_, tol)) {
        throw std::invalid_argument("HermitianMatrix: input is not Hermitian");
    }
}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix &m) {
    if (!m.is_square()) {
        throw DimensionError("HermitianMatrix: not square");
    }
    ComplexMatrix s = 0.5 * (m + m.adjoint());
    HermitianMatrix h;
    h.m_ = std::move(s);
    return h;
}

EigenDecomposition eig_hermitian(const HermitianMatrix &hm) {
    ComplexMatrix a = hm.matrix();
    const std::size_t n = a.rows();
    ComplexMatrix v = ComplexMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
    }
    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) {
                    s += std::norm(a(i, j));
                }
            }
        }
        return std::sqrt(s);
    };
    const double threshold = 1e-12 * std::max(1.0, std::sqrt(hs_norm_sq(a)));
    for (int sweep = 0; sweep < 100 && off_norm() > threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag < 1e-300) {
                    continue;
                }
                const cplx phase = a(p, q) / mag;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sp = s * phase;            // J(p,q)
                const cplx sq = -s * std::conj(phase); // J(q,p)
                // A <- A J
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp + sq * akq;
                    a(k, q) = sp * akp + c * akq;
                }
                // A <- J^dagger A
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(sq) * aqk;
                    a(q, k) = std::conj(sp) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = c * vkp + sq * vkq;
                    v(k, q) = sp * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        out.values[c] = a(order[c], order[c]).real();
        for (std::size_t k = 0; k < n; ++k) {
            out.vectors(k, c) = v(k, order[c]);
        }
    }
    return out;
}

std::vector<double> eigvals_hermitian(const ComplexMatrix &m) {
    return eig_hermitian(HermitianMatrix::symmetrized(m)).values;
}

double min_eigenvalue(const ComplexMatrix &m) { return eigvals_hermitian(m).front(); }

double trace_norm(const ComplexMatrix &m) {
    if (!m.is_square()) {
        throw DimensionError("trace_norm: matrix not square");
    }
    double s = 0.0;
    if (is_hermitian(m, 1e-12)) {
        for (double ev : eigvals_hermitian(m)) {
            s += std::abs(ev);
        }
        return s;
    }
    for (double ev : eigvals_hermitian(m.adjoint() * m)) {
        s += std::sqrt(std::max(ev, 0.0));
    }
    return s;
}

HermitianMatrix mat_sqrt_psd(const HermitianMatrix &m) {
    const auto ed = eig_hermitian(m);
    const std::size_t n = m.dim();
    ComplexMatrix r(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        double ev = ed.values[c];
        if (ev < -1e-8) {
            throw std::domain_error("mat_sqrt_psd: eigenvalue below -1e-8");
        }
        const double root = std::sqrt(std::max(ev, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vi = ed.vectors(i, c) * root;
            for (std::size_t j = 0; j < n; ++j) {
                r(i, j) += vi * std::conj(ed.vectors(j, c));
            }
        }
    }
    return HermitianMatrix::symmetrized(r);
}

DensityMatrix::DensityMatrix(HermitianMatrix h) : m_(h.matrix()) {
    const cplx tr = m_.trace();
    if (std::abs(tr - cplx{1.0, 0.0}) > 1e-10) {
        throw std::invalid_argument("DensityMatrix: trace differs from 1");
    }
    if (eigvals_hermitian(m_).front() < -1e-10) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::pure(std::span<const cplx> psi) {
    double nrm = 0.0;
    for (const auto &z : psi) {
        nrm += std::norm(z);
    }
    if (std::abs(nrm - 1.0) > 1e-10) {
        throw std::invalid_argument("DensityMatrix::pure: vector not normalized");
    }
    return trusted(ComplexMatrix::projector(psi));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    return trusted((1.0 / static_cast<double>(dim)) * ComplexMatrix::identity(dim));
}

DensityMatrix DensityMatrix::trusted(ComplexMatrix m) {
    DensityMatrix d;
    d.m_ = std::move(m);
    return d;
}

std::size_t qubit_count(std::size_t dim) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    if ((std::size_t{1} << n) != dim) {
        throw DimensionError("dimension is not a power of two");
    }
    return n;
}

} // namespace qslack

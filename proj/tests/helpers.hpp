#pragma once
// Independent dense references for the tests. Everything here is built from explicit
// matrices, never from the expansion code under test.

#include "qslack/linalg.hpp"
#include "qslack/pauli.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace testing {

using qslack::ComplexMatrix;
using qslack::cplx;

inline ComplexMatrix mat2(cplx a, cplx b, cplx c, cplx d) { return ComplexMatrix(2, 2, {a, b, c, d}); }

inline ComplexMatrix I2() { return mat2(1, 0, 0, 1); }
inline ComplexMatrix X2() { return mat2(0, 1, 1, 0); }
inline ComplexMatrix Y2() { return mat2(0, cplx(0, -1), cplx(0, 1), 0); }
inline ComplexMatrix Z2() { return mat2(1, 0, 0, -1); }

/// Haar-ish random density matrix of rank r from a Ginibre matrix.
inline ComplexMatrix random_density(std::size_t dim, std::size_t rank, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    ComplexMatrix a(dim, rank);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < rank; ++j) {
            a(i, j) = cplx(g(rng), g(rng));
        }
    }
    ComplexMatrix rho = a * a.adjoint();
    const double tr = rho.trace().real();
    return (1.0 / tr) * rho;
}

inline ComplexMatrix random_hermitian(std::size_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    ComplexMatrix a(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            a(i, j) = cplx(g(rng), g(rng));
        }
    }
    return 0.5 * (a + a.adjoint());
}

inline double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    }
    return m;
}

inline double fro_sq(const ComplexMatrix &a) {
    double s = 0.0;
    for (auto v : a.data()) {
        s += std::norm(v);
    }
    return s;
}

inline double re_trace(const ComplexMatrix &a, const ComplexMatrix &b) { return (a * b).trace().real(); }

/// Partial transpose on the second factor, by explicit index bookkeeping.
inline ComplexMatrix pt_second(const ComplexMatrix &m, std::size_t da, std::size_t db) {
    ComplexMatrix out(da * db, da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t k = 0; k < db; ++k)
            for (std::size_t j = 0; j < da; ++j)
                for (std::size_t l = 0; l < db; ++l)
                    out(i * db + k, j * db + l) = m(i * db + l, j * db + k);
    return out;
}

/// Dense matrix of a Pauli observable, assembled from 2x2 factors.
inline ComplexMatrix dense_of(const qslack::PauliObservable &o) {
    const std::size_t dim = std::size_t{1} << o.n_qubits();
    ComplexMatrix out(dim, dim);
    for (const auto &[p, c] : o.terms()) {
        ComplexMatrix f(1, 1, {1.0});
        for (auto l : p.labels()) {
            const ComplexMatrix s = l == 0 ? I2() : l == 1 ? X2() : l == 2 ? Y2() : Z2();
            f = qslack::kron(f, s);
        }
        out += c * f;
    }
    return out;
}

/// Random Hermitian Pauli observable with real coefficients in [-1, 1].
inline qslack::PauliObservable random_observable(std::size_t n, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    qslack::PauliObservable o(n);
    for (std::size_t k = 0; k < (std::size_t{1} << (2 * n)); ++k) {
        o.set_term(qslack::PauliString::from_index(k, n), u(rng));
    }
    return o;
}

} // namespace testing

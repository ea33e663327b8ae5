#include "qslack/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace qslack {

namespace {

// Directions for the pattern search; the concave objective has kinks, so more than
// the coordinate axes are needed.
std::vector<std::vector<double>> search_directions(std::size_t l) {
    const int span = l <= 2 ? 2 : 1;
    std::vector<std::vector<double>> dirs;
    std::vector<int> v(l, -span);
    while (true) {
        bool nonzero = false;
        for (int c : v) {
            nonzero |= c != 0;
        }
        if (nonzero) {
            dirs.emplace_back(v.begin(), v.end());
        }
        std::size_t k = 0;
        while (k < l && v[k] == span) {
            v[k] = -span;
            ++k;
        }
        if (k == l) {
            break;
        }
        ++v[k];
    }
    return dirs;
}

struct SearchResult {
    std::vector<double> y;
    double value;
    double step;
    bool boundary;
};

// Grid over [0, y_max]^l, then a shrinking pattern search down to step 1e-5.
SearchResult maximize_concave(const std::function<double(std::span<const double>)> &f,
                              std::size_t l, double y_max) {
    if (l == 0) {
        return {{}, f({}), 0.0, false};
    }
    if (l > 3) {
        throw std::invalid_argument("dual search supports at most 3 constraints");
    }
    const std::size_t per_dim = l == 1 ? 1001 : l == 2 ? 201 : 41;
    const double h = y_max / static_cast<double>(per_dim - 1);
    std::vector<double> y(l, 0.0);
    std::vector<double> best_y = y;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(l, 0);
    while (true) {
        for (std::size_t i = 0; i < l; ++i) {
            y[i] = h * static_cast<double>(idx[i]);
        }
        const double v = f(y);
        if (v > best) {
            best = v;
            best_y = y;
        }
        std::size_t k = 0;
        while (k < l && idx[k] == per_dim - 1) {
            idx[k] = 0;
            ++k;
        }
        if (k == l) {
            break;
        }
        ++idx[k];
    }
    const auto dirs = search_directions(l);
    double step = h;
    std::vector<double> trial(l);
    while (step >= 1e-5) {
        bool improved = false;
        for (const auto &d : dirs) {
            for (std::size_t i = 0; i < l; ++i) {
                trial[i] = std::clamp(best_y[i] + step * d[i], 0.0, y_max);
            }
            const double v = f(trial);
            if (v > best + 1e-15) {
                best = v;
                best_y = trial;
                improved = true;
            }
        }
        if (!improved) {
            step *= 0.5;
        }
    }
    bool boundary = false;
    for (double yi : best_y) {
        boundary |= yi >= y_max - 1e-9;
    }
    return {best_y, best, step, boundary};
}

double sum_product(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

// Solves m x = r in place (square, partial pivoting); false when singular.
bool solve_square(std::vector<std::vector<double>> m, std::vector<double> r, std::vector<double> &x) {
    const std::size_t n = r.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i) {
            if (std::abs(m[i][col]) > std::abs(m[piv][col])) {
                piv = i;
            }
        }
        if (std::abs(m[piv][col]) < 1e-12) {
            return false;
        }
        std::swap(m[piv], m[col]);
        std::swap(r[piv], r[col]);
        for (std::size_t i = col + 1; i < n; ++i) {
            const double f = m[i][col] / m[col][col];
            for (std::size_t j = col; j < n; ++j) {
                m[i][j] -= f * m[col][j];
            }
            r[i] -= f * r[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = r[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            s -= m[i][j] * x[j];
        }
        x[i] = s / m[i][i];
    }
    return true;
}

// Visits all k-subsets of {0..n-1}.
void for_each_subset(std::size_t n, std::size_t k,
                     const std::function<void(const std::vector<std::size_t> &)> &fn) {
    if (k > n) {
        return;
    }
    std::vector<std::size_t> s(k);
    for (std::size_t i = 0; i < k; ++i) {
        s[i] = i;
    }
    while (true) {
        fn(s);
        std::size_t i = k;
        while (i > 0 && s[i - 1] == n - k + i - 1) {
            --i;
        }
        if (i == 0) {
            return;
        }
        ++s[i - 1];
        for (std::size_t j = i; j < k; ++j) {
            s[j] = s[j - 1] + 1;
        }
    }
}

} // namespace

double exact_trace_distance(const ComplexMatrix &rho, const ComplexMatrix &sigma) {
    return 0.5 * trace_norm(rho - sigma);
}

double exact_root_fidelity(const ComplexMatrix &rho, const ComplexMatrix &sigma) {
    const auto sr = mat_sqrt_psd(HermitianMatrix::symmetrized(rho));
    const ComplexMatrix inner = sr.matrix() * sigma * sr.matrix();
    double f = 0.0;
    for (double ev : eigvals_hermitian(inner)) {
        f += std::sqrt(std::max(ev, 0.0));
    }
    return f;
}

double exact_negativity(const ComplexMatrix &rho_ab, std::size_t dim_a, std::size_t dim_b) {
    return trace_norm(partial_transpose_B(rho_ab, dim_a, dim_b));
}

double exact_tvd(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw DimensionError("exact_tvd: length mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += std::abs(p[i] - q[i]);
    }
    return 0.5 * s;
}

OracleResult sdp_cham_value(const PauliObservable &h, const std::vector<PauliObservable> &a,
                            std::span<const double> b, double y_max) {
    if (a.size() != b.size()) {
        throw DimensionError("sdp_cham_value: one bound per constraint");
    }
    const ComplexMatrix hd = observable_dense(h);
    std::vector<ComplexMatrix> ad;
    for (const auto &ai : a) {
        ad.push_back(observable_dense(ai));
    }
    auto dual = [&](std::span<const double> y) {
        ComplexMatrix m = hd;
        for (std::size_t i = 0; i < y.size(); ++i) {
            m -= y[i] * ad[i];
        }
        return sum_product(b, y) + min_eigenvalue(m);
    };
    const auto r = maximize_concave(dual, a.size(), y_max);
    return {r.value, "eigen-dual-search", r.step, r.boundary, r.y};
}

OracleResult lp_vertex_enumeration(std::span<const double> h,
                                   const std::vector<std::vector<double>> &a,
                                   std::span<const double> b) {
    const std::size_t d = h.size();
    const std::size_t l = a.size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> x;
    for (std::size_t k = 1; k <= std::min(d, l + 1); ++k) {
        for_each_subset(d, k, [&](const std::vector<std::size_t> &support) {
            for_each_subset(l, k - 1, [&](const std::vector<std::size_t> &active) {
                std::vector<std::vector<double>> m(k, std::vector<double>(k));
                std::vector<double> r(k);
                for (std::size_t j = 0; j < k; ++j) {
                    m[0][j] = 1.0;
                }
                r[0] = 1.0;
                for (std::size_t t = 0; t < active.size(); ++t) {
                    for (std::size_t j = 0; j < k; ++j) {
                        m[t + 1][j] = a[active[t]][support[j]];
                    }
                    r[t + 1] = b[active[t]];
                }
                if (!solve_square(m, r, x)) {
                    return;
                }
                std::vector<double> p(d, 0.0);
                for (std::size_t j = 0; j < k; ++j) {
                    if (x[j] < -1e-12) {
                        return;
                    }
                    p[support[j]] = std::max(x[j], 0.0);
                }
                for (std::size_t i = 0; i < l; ++i) {
                    if (sum_product(a[i], p) < b[i] - 1e-12) {
                        return;
                    }
                }
                best = std::min(best, sum_product(h, p));
            });
        });
    }
    if (!std::isfinite(best)) {
        throw std::domain_error("lp_vertex_enumeration: infeasible program");
    }
    return {best, "lp-vertex", 0.0, false, {}};
}

OracleResult lp_classical_cham_value(const WalshObservable &h, const std::vector<WalshObservable> &a,
                                     std::span<const double> b, double y_max) {
    if (a.size() != b.size()) {
        throw DimensionError("lp_classical_cham_value: one bound per constraint");
    }
    const auto hd = walsh_dense(h);
    std::vector<std::vector<double>> ad;
    for (const auto &ai : a) {
        ad.push_back(walsh_dense(ai));
    }
    auto dual = [&](std::span<const double> y) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < hd.size(); ++j) {
            double v = hd[j];
            for (std::size_t i = 0; i < y.size(); ++i) {
                v -= y[i] * ad[i][j];
            }
            m = std::min(m, v);
        }
        return sum_product(b, y) + m;
    };
    const auto r = maximize_concave(dual, a.size(), y_max);
    const auto vertex = lp_vertex_enumeration(hd, ad, b);
    // the vertex value is exact; the dual search is the independent cross-check
    return {vertex.value, "lp-vertex", std::abs(r.value - vertex.value), r.boundary, r.y};
}

} // namespace qslack

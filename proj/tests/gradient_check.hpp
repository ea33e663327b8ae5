#pragma once
// Parameter-shift derivatives against central finite differences.

#include "qslack/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace testing {

/// Angles uniform, non-negative scalars in [0.2, 2], free scalars in [-1, 1].
inline std::vector<double> random_point(const qslack::PenaltyObjective &obj, std::mt19937_64 &rng) {
    auto x = obj.initial_parameters(rng);
    std::uniform_real_distribution<double> pos(0.2, 2.0);
    std::uniform_real_distribution<double> fre(-1.0, 1.0);
    for (const auto &b : obj.blocks()) {
        for (std::size_t i = 0; i < b.size; ++i) {
            if (b.kind == qslack::ParamKind::NonNegative) {
                x[b.offset + i] = pos(rng);
            } else if (b.kind == qslack::ParamKind::Free) {
                x[b.offset + i] = fre(rng);
            }
        }
    }
    return x;
}

struct ShiftGap {
    double max_gap = 0.0;   // worst |shift - finite difference|
    double max_deriv = 0.0; // largest derivative seen, for scale
};

inline ShiftGap shift_vs_finite_difference(const qslack::PenaltyObjective &obj, const std::vector<double> &x,
                                           double h = 1e-5) {
    ShiftGap g;
    for (std::size_t k = 0; k < x.size(); ++k) {
        auto xp = x;
        auto xm = x;
        xp[k] += h;
        xm[k] -= h;
        const double fd = (obj.evaluate_exact(xp).value - obj.evaluate_exact(xm).value) / (2 * h);
        const double ps = obj.parameter_shift_derivative(x, k);
        g.max_gap = std::max(g.max_gap, std::abs(ps - fd));
        g.max_deriv = std::max(g.max_deriv, std::abs(ps));
    }
    return g;
}

} // namespace testing

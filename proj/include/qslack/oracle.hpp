#pragma once

#include "qslack/linalg.hpp"
#include "qslack/pauli.hpp"

#include <span>
#include <string>
#include <vector>

namespace qslack {

/// method: "trace-norm", "eigen-dual-search" or "lp-vertex".
/// residual: search step at termination, or the primal/dual gap for cross-checked LPs.
struct OracleResult {
    double value = 0.0;
    std::string method;
    double residual = 0.0;
    bool boundary_hit = false;
    std::vector<double> multipliers;
};

double exact_trace_distance(const ComplexMatrix &rho, const ComplexMatrix &sigma);
double exact_root_fidelity(const ComplexMatrix &rho, const ComplexMatrix &sigma);
double exact_negativity(const ComplexMatrix &rho_ab, std::size_t dim_a, std::size_t dim_b);
double exact_tvd(std::span<const double> p, std::span<const double> q);

/// max over y >= 0 of sum b_i y_i + lambda_min(H - sum y_i A_i); at most 3 constraints.
OracleResult sdp_cham_value(const PauliObservable &h, const std::vector<PauliObservable> &a,
                            std::span<const double> b, double y_max = 10.0);

/// Vertex enumeration of the primal, cross-checked by the same dual search over the simplex;
/// residual is the gap between the two.
OracleResult lp_classical_cham_value(const WalshObservable &h, const std::vector<WalshObservable> &a,
                                     std::span<const double> b, double y_max = 10.0);

/// min h.p over {p in simplex, a_i.p >= b_i} by enumerating basic feasible points.
OracleResult lp_vertex_enumeration(std::span<const double> h,
                                   const std::vector<std::vector<double>> &a,
                                   std::span<const double> b);

} // namespace qslack

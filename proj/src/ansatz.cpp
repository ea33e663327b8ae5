#include "qslack/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qslack {

namespace {

void apply_1q(std::vector<cplx> &psi, std::size_t bit, const cplx (&g)[2][2]) {
    const std::size_t dim = psi.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & bit) {
            continue;
        }
        const cplx a = psi[i];
        const cplx b = psi[i | bit];
        psi[i] = g[0][0] * a + g[0][1] * b;
        psi[i | bit] = g[1][0] * a + g[1][1] * b;
    }
}

void apply_rz(std::vector<cplx> &psi, std::size_t bit, double theta) {
    const cplx e0 = std::polar(1.0, -0.5 * theta);
    const cplx e1 = std::conj(e0);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        psi[i] *= (i & bit) ? e1 : e0;
    }
}

void apply_rzz(std::vector<cplx> &psi, std::size_t b0, std::size_t b1, double theta) {
    const cplx even = std::polar(1.0, -0.5 * theta);
    const cplx odd = std::conj(even);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const bool parity = ((i & b0) != 0) != ((i & b1) != 0);
        psi[i] *= parity ? odd : even;
    }
}

// exp(-i theta/2 PP) for PP in {XX, YY}
void apply_rpp(std::vector<cplx> &psi, std::size_t b0, std::size_t b1, double theta, bool yy) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const std::size_t flip = b0 | b1;
    const cplx mis{0.0, -s};
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const std::size_t j = i ^ flip;
        if (j < i) {
            continue;
        }
        const cplx a = psi[i];
        const cplx b = psi[j];
        // YY|j> = -|i> when the two bits agree, +|i> otherwise
        double sign = 1.0;
        if (yy) {
            const bool agree = ((i & b0) != 0) == ((i & b1) != 0);
            sign = agree ? -1.0 : 1.0;
        }
        psi[i] = c * a + mis * sign * b;
        psi[j] = c * b + mis * sign * a;
    }
}

} // namespace

ParamCircuit::ParamCircuit(std::size_t n_qubits) : n_(n_qubits) {}

ParamCircuit ParamCircuit::layered_unitary(std::size_t n, std::size_t layers) {
    ParamCircuit c(n);
    c.layers_ = layers;
    for (std::size_t l = 0; l < layers; ++l) {
        for (std::size_t q = 0; q < n; ++q) {
            c.add_rotation(GateKind::Ry, q);
            c.add_rotation(GateKind::Rz, q);
        }
        for (std::size_t q = 0; q + 1 < n; ++q) {
            c.add_rotation(GateKind::Rzz, q, q + 1);
        }
        if (n >= 3) {
            c.add_rotation(GateKind::Rzz, n - 1, 0);
        }
    }
    return c;
}

ParamCircuit ParamCircuit::qcbm(std::size_t n, std::size_t layers) {
    ParamCircuit c(n);
    c.layers_ = layers;
    for (std::size_t l = 0; l < layers; ++l) {
        for (std::size_t q = 0; q < n; ++q) {
            c.add_rotation(GateKind::Rx, q);
            c.add_rotation(GateKind::Rz, q);
        }
        for (std::size_t q = 0; q + 1 < n; ++q) {
            c.add_rotation(GateKind::Rzz, q, q + 1);
        }
        if (n >= 3) {
            c.add_rotation(GateKind::Rzz, n - 1, 0);
        }
    }
    return c;
}

void ParamCircuit::add_rotation(GateKind kind, std::size_t q0, std::size_t q1) {
    if (kind == GateKind::CX) {
        throw std::invalid_argument("add_rotation: CX is not a rotation");
    }
    const bool two = kind == GateKind::Rxx || kind == GateKind::Ryy || kind == GateKind::Rzz;
    if (q0 >= n_ || (two && (q1 >= n_ || q1 == q0))) {
        throw std::out_of_range("add_rotation: qubit index out of range");
    }
    gates_.push_back({kind, q0, two ? q1 : 0, n_params_++});
}

void ParamCircuit::add_cx(std::size_t control, std::size_t target) {
    if (control >= n_ || target >= n_ || control == target) {
        throw std::out_of_range("add_cx: qubit index out of range");
    }
    gates_.push_back({GateKind::CX, control, target, kNoParam});
}

void ParamCircuit::append(const ParamCircuit &other, std::size_t qubit_offset) {
    if (other.n_ + qubit_offset > n_) {
        throw std::out_of_range("append: circuit does not fit");
    }
    for (Gate g : other.gates_) {
        g.q0 += qubit_offset;
        g.q1 += qubit_offset;
        if (g.param != kNoParam) {
            g.param += n_params_;
        }
        gates_.push_back(g);
    }
    n_params_ += other.n_params_;
}

bool ParamCircuit::shift_rule_applicable() const noexcept {
    // every parameterized gate here is a half-angle Pauli rotation used once
    std::vector<int> uses(n_params_, 0);
    for (const auto &g : gates_) {
        if (g.param != kNoParam && ++uses[g.param] > 1) {
            return false;
        }
    }
    return true;
}

void ParamCircuit::check_params(std::span<const double> theta) const {
    if (theta.size() != n_params_) {
        throw std::invalid_argument("ParamCircuit: expected " + std::to_string(n_params_) +
                                    " parameters, got " + std::to_string(theta.size()));
    }
}

void ParamCircuit::apply(std::vector<cplx> &psi, std::span<const double> theta) const {
    check_params(theta);
    if (psi.size() != (std::size_t{1} << n_)) {
        throw DimensionError("ParamCircuit::apply: state size mismatch");
    }
    auto bit_of = [this](std::size_t q) { return std::size_t{1} << (n_ - 1 - q); };
    const cplx mi{0.0, -1.0};
    for (const auto &g : gates_) {
        const double t = g.param == kNoParam ? 0.0 : theta[g.param];
        const double c = std::cos(0.5 * t);
        const double s = std::sin(0.5 * t);
        switch (g.kind) {
        case GateKind::Rx: {
            const cplx m[2][2] = {{c, mi * s}, {mi * s, c}};
            apply_1q(psi, bit_of(g.q0), m);
            break;
        }
        case GateKind::Ry: {
            const cplx m[2][2] = {{c, -s}, {s, c}};
            apply_1q(psi, bit_of(g.q0), m);
            break;
        }
        case GateKind::Rz:
            apply_rz(psi, bit_of(g.q0), t);
            break;
        case GateKind::Rxx:
            apply_rpp(psi, bit_of(g.q0), bit_of(g.q1), t, false);
            break;
        case GateKind::Ryy:
            apply_rpp(psi, bit_of(g.q0), bit_of(g.q1), t, true);
            break;
        case GateKind::Rzz:
            apply_rzz(psi, bit_of(g.q0), bit_of(g.q1), t);
            break;
        case GateKind::CX: {
            const std::size_t cb = bit_of(g.q0);
            const std::size_t tb = bit_of(g.q1);
            for (std::size_t i = 0; i < psi.size(); ++i) {
                if ((i & cb) && !(i & tb)) {
                    std::swap(psi[i], psi[i | tb]);
                }
            }
            break;
        }
        }
    }
}

std::vector<cplx> ParamCircuit::run_from_zero(std::span<const double> theta) const {
    std::vector<cplx> psi(std::size_t{1} << n_, cplx{0.0, 0.0});
    psi[0] = 1.0;
    apply(psi, theta);
    return psi;
}

ComplexMatrix ParamCircuit::unitary(std::span<const double> theta) const {
    const std::size_t dim = std::size_t{1} << n_;
    ComplexMatrix u(dim, dim);
    std::vector<cplx> col(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        std::fill(col.begin(), col.end(), cplx{0.0, 0.0});
        col[j] = 1.0;
        apply(col, theta);
        for (std::size_t i = 0; i < dim; ++i) {
            u(i, j) = col[i];
        }
    }
    return u;
}

ComplexMatrix build_layered_unitary(std::size_t n, std::size_t layers, std::span<const double> theta) {
    return ParamCircuit::layered_unitary(n, layers).unitary(theta);
}

std::vector<double> qcbm_distribution(const ParamCircuit &born, std::span<const double> phi) {
    const auto psi = born.run_from_zero(phi);
    std::vector<double> p(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        p[i] = std::norm(psi[i]);
    }
    return p;
}

PurificationState PurificationState::layered(std::size_t n_system, std::size_t n_reference,
                                             std::size_t layers) {
    PurificationState s;
    s.circuit = ParamCircuit::layered_unitary(n_system + n_reference, layers);
    s.n_reference = n_reference;
    s.n_system = n_system;
    s.theta.assign(s.circuit.n_params(), 0.0);
    return s;
}

ConvexCombinationState ConvexCombinationState::layered(std::size_t n, std::size_t unitary_layers,
                                                       std::size_t born_layers) {
    ConvexCombinationState s;
    s.born_circuit = ParamCircuit::qcbm(n, born_layers);
    s.basis_circuit = ParamCircuit::layered_unitary(n, unitary_layers);
    s.phi.assign(s.born_circuit.n_params(), 0.0);
    s.gamma.assign(s.basis_circuit.n_params(), 0.0);
    return s;
}

ComplexMatrix purification_matrix(const PurificationState &s) {
    if (s.circuit.n_qubits() != s.n_reference + s.n_system) {
        throw DimensionError("purification: circuit width differs from n_R + n_S");
    }
    const auto psi = s.circuit.run_from_zero(s.theta);
    const std::size_t ds = std::size_t{1} << s.n_system;
    const std::size_t dr = std::size_t{1} << s.n_reference;
    ComplexMatrix rho(ds, ds);
    for (std::size_t r = 0; r < dr; ++r) {
        const cplx *row = psi.data() + r * ds;
        for (std::size_t i = 0; i < ds; ++i) {
            const cplx a = row[i];
            for (std::size_t j = 0; j < ds; ++j) {
                rho(i, j) += a * std::conj(row[j]);
            }
        }
    }
    return rho;
}

ComplexMatrix convex_combination_matrix(const ConvexCombinationState &s) {
    if (s.born_circuit.n_qubits() != s.basis_circuit.n_qubits()) {
        throw DimensionError("convex combination: Born and basis circuits differ in width");
    }
    const auto p = qcbm_distribution(s.born_circuit, s.phi);
    const auto u = s.basis_circuit.unitary(s.gamma);
    const std::size_t d = p.size();
    ComplexMatrix rho(d, d);
    for (std::size_t x = 0; x < d; ++x) {
        if (p[x] == 0.0) {
            continue;
        }
        for (std::size_t i = 0; i < d; ++i) {
            const cplx a = p[x] * u(i, x);
            for (std::size_t j = 0; j < d; ++j) {
                rho(i, j) += a * std::conj(u(j, x));
            }
        }
    }
    return rho;
}

DensityMatrix realize_density(const PurificationState &s) {
    return DensityMatrix(HermitianMatrix(purification_matrix(s)));
}

DensityMatrix realize_density(const ConvexCombinationState &s) {
    return DensityMatrix(HermitianMatrix(convex_combination_matrix(s)));
}

CcSample sample_cc(const ConvexCombinationState &s, std::mt19937_64 &rng) {
    const auto p = qcbm_distribution(s.born_circuit, s.phi);
    std::discrete_distribution<std::size_t> pick(p.begin(), p.end());
    CcSample out;
    out.index = pick(rng);
    out.state.assign(p.size(), cplx{0.0, 0.0});
    out.state[out.index] = 1.0;
    s.basis_circuit.apply(out.state, s.gamma);
    return out;
}

PurificationState born_cc_as_purification(const ConvexCombinationState &s) {
    const std::size_t n = s.n_system();
    PurificationState out;
    out.n_reference = n;
    out.n_system = n;
    out.circuit = ParamCircuit(2 * n);
    out.circuit.append(s.born_circuit, 0);
    for (std::size_t q = 0; q < n; ++q) {
        out.circuit.add_cx(q, n + q);
    }
    out.circuit.append(s.basis_circuit, n);
    out.theta = s.phi;
    out.theta.insert(out.theta.end(), s.gamma.begin(), s.gamma.end());
    return out;
}

DensityMatrix random_purified_state(std::size_t n, std::size_t layers, std::uint64_t seed) {
    auto s = PurificationState::layered(n, n, layers);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (auto &t : s.theta) {
        t = angle(rng);
    }
    return realize_density(s);
}

std::vector<double> random_born_distribution(std::size_t n, std::size_t layers, std::uint64_t seed) {
    const auto born = ParamCircuit::qcbm(n, layers);
    std::vector<double> phi(born.n_params());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (auto &t : phi) {
        t = angle(rng);
    }
    return qcbm_distribution(born, phi);
}

} // namespace qslack

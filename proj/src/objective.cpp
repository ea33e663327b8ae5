#include "qslack/objective.hpp"

#include <cmath>
#include <set>

namespace qslack {

namespace {

double dimension_of(std::size_t n_qubits) { return std::ldexp(1.0, static_cast<int>(n_qubits)); }

std::string tag(const PauliString &p, std::string_view state) {
    return "tr[" + p.to_string() + "." + std::string(state) + "]";
}

std::string tag(const WalshString &w, std::string_view dist) {
    return "s" + w.to_string() + "." + std::string(dist);
}

// Pauli expectations of one state, each string estimated once and logged.
class PauliTable {
  public:
    PauliTable(StateRef state, std::string_view name, TermEstimator &est, TermBreakdown &out)
        : state_(state), name_(name), est_(est), out_(out) {}

    double operator()(const PauliString &p) {
        const auto it = cache_.find(p);
        if (it != cache_.end()) {
            return it->second;
        }
        const Estimate e = est_.pauli(state_, p);
        out_.add(tag(p, name_), e);
        cache_.emplace(p, e.value);
        return e.value;
    }

  private:
    StateRef state_;
    std::string name_;
    TermEstimator &est_;
    TermBreakdown &out_;
    std::map<PauliString, double> cache_;
};

class WalshTable {
  public:
    WalshTable(std::span<const double> dist, std::string_view name, TermEstimator &est,
               TermBreakdown &out)
        : dist_(dist), name_(name), est_(est), out_(out) {}

    double operator()(const WalshString &w) {
        const auto it = cache_.find(w);
        if (it != cache_.end()) {
            return it->second;
        }
        const Estimate e = est_.walsh(dist_, w);
        out_.add(tag(w, name_), e);
        cache_.emplace(w, e.value);
        return e.value;
    }

  private:
    std::span<const double> dist_;
    std::string name_;
    TermEstimator &est_;
    TermBreakdown &out_;
    std::map<WalshString, double> cache_;
};

double overlap(TermEstimator &est, TermBreakdown &out, std::string name, StateRef a, StateRef b) {
    const Estimate e = est.overlap(a, b);
    out.add(std::move(name), e);
    return e.value;
}

double purity(TermEstimator &est, TermBreakdown &out, std::string name, StateRef a) {
    const Estimate e = est.purity(a);
    out.add(std::move(name), e);
    return e.value;
}

double collision(TermEstimator &est, TermBreakdown &out, std::string name,
                 std::span<const double> p, std::span<const double> q) {
    const Estimate e = est.collision(p, q);
    out.add(std::move(name), e);
    return e.value;
}

void require_dim(const ComplexMatrix &m, std::size_t dim, const char *what) {
    if (!m.is_square() || m.rows() != dim) {
        throw DimensionError(std::string(what) + ": dimension mismatch");
    }
}

void require_same(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension mismatch");
    }
}

double sq(double x) { return x * x; }

} // namespace

const Estimate &TermBreakdown::term(std::string_view name) const {
    for (const auto &[k, v] : terms) {
        if (k == name) {
            return v;
        }
    }
    throw std::out_of_range("TermBreakdown: no term named " + std::string(name));
}

Estimate TermEstimator::overlap(StateRef a, StateRef b) {
    if (model_.is_exact()) {
        std::mt19937_64 unused;
        return estimate_overlap_swap(*a.rho, *b.rho, model_, unused);
    }
    auto rng = next_rng();
    if (a.cc != nullptr && b.cc != nullptr) {
        return estimate_overlap_loschmidt(*a.cc, *b.cc, model_, rng);
    }
    if (a.cc != nullptr) {
        return estimate_overlap_loschmidt(*a.cc, *b.rho, model_, rng);
    }
    if (b.cc != nullptr) {
        return estimate_overlap_loschmidt(*b.cc, *a.rho, model_, rng);
    }
    return estimate_overlap_swap(*a.rho, *b.rho, model_, rng);
}

Estimate TermEstimator::purity(StateRef a) {
    if (!model_.is_exact() && a.cc != nullptr) {
        // purity of a convex combination is the collision probability of its spectrum
        const auto p = qcbm_distribution(a.cc->born_circuit, a.cc->phi);
        auto rng = next_rng();
        return estimate_collision(p, p, model_, rng);
    }
    return overlap(a, a);
}

Estimate TermEstimator::pauli(StateRef a, const PauliString &p) {
    if (model_.is_exact()) {
        std::mt19937_64 unused;
        return estimate_pauli_expect(*a.rho, p, model_, unused);
    }
    auto rng = next_rng();
    return estimate_pauli_expect(*a.rho, p, model_, rng);
}

Estimate TermEstimator::collision(std::span<const double> p, std::span<const double> q) {
    if (model_.is_exact()) {
        std::mt19937_64 unused;
        return estimate_collision(p, q, model_, unused);
    }
    auto rng = next_rng();
    return estimate_collision(p, q, model_, rng);
}

Estimate TermEstimator::walsh(std::span<const double> p, const WalshString &w) {
    if (model_.is_exact()) {
        std::mt19937_64 unused;
        return estimate_walsh(p, w, model_, unused);
    }
    auto rng = next_rng();
    return estimate_walsh(p, w, model_, rng);
}

// ---------------------------------------------------------------------------
// SdpInstance

std::size_t SdpInstance::input_dim() const {
    if (const auto *lc = std::get_if<LinearCombinationModel>(&model)) {
        if (!lc->phi_in.empty()) {
            return lc->phi_in.front().dim();
        }
        return lc->a_states.empty() ? 0 : lc->a_states.front().dim();
    }
    return std::size_t{1} << std::get<PauliModel>(model).a.n_qubits();
}

std::size_t SdpInstance::output_dim() const {
    if (const auto *lc = std::get_if<LinearCombinationModel>(&model)) {
        if (!lc->phi_out.empty()) {
            return lc->phi_out.front().dim();
        }
        return lc->b_states.empty() ? 0 : lc->b_states.front().dim();
    }
    return std::size_t{1} << std::get<PauliModel>(model).b.n_qubits();
}

ComplexMatrix SdpInstance::a_dense() const {
    if (const auto *lc = std::get_if<LinearCombinationModel>(&model)) {
        ComplexMatrix m(input_dim(), input_dim());
        for (std::size_t i = 0; i < lc->alpha.size(); ++i) {
            m += lc->alpha[i] * lc->a_states[i].matrix();
        }
        return m;
    }
    return observable_dense(std::get<PauliModel>(model).a);
}

ComplexMatrix SdpInstance::b_dense() const {
    if (const auto *lc = std::get_if<LinearCombinationModel>(&model)) {
        ComplexMatrix m(output_dim(), output_dim());
        for (std::size_t j = 0; j < lc->beta.size(); ++j) {
            m += lc->beta[j] * lc->b_states[j].matrix();
        }
        return m;
    }
    return observable_dense(std::get<PauliModel>(model).b);
}

ComplexMatrix SdpInstance::apply_map(const ComplexMatrix &x) const {
    ComplexMatrix out(output_dim(), output_dim());
    if (const auto *lc = std::get_if<LinearCombinationModel>(&model)) {
        for (std::size_t k = 0; k < lc->phi_in.size(); ++k) {
            const cplx t = trace_product(lc->phi_in[k].matrix(), x);
            for (std::size_t l = 0; l < lc->phi_out.size(); ++l) {
                out += (lc->phi[k][l] * t) * lc->phi_out[l].matrix();
            }
        }
        return out;
    }
    for (const auto &[key, coeff] : std::get<PauliModel>(model).phi) {
        out += (coeff * pauli_trace(key.first, x)) * dense(key.second);
    }
    return out;
}

ComplexMatrix SdpInstance::apply_adjoint(const ComplexMatrix &y) const {
    ComplexMatrix out(input_dim(), input_dim());
    if (const auto *lc = std::get_if<LinearCombinationModel>(&model)) {
        for (std::size_t k = 0; k < lc->phi_in.size(); ++k) {
            for (std::size_t l = 0; l < lc->phi_out.size(); ++l) {
                const cplx t = trace_product(lc->phi_out[l].matrix(), y);
                out += (lc->phi[k][l] * t) * lc->phi_in[k].matrix();
            }
        }
        return out;
    }
    for (const auto &[key, coeff] : std::get<PauliModel>(model).phi) {
        out += (coeff * pauli_trace(key.second, y)) * dense(key.first);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generic builders

TermBreakdown generic_primal_objective(const SdpInstance &inst, StateRef rho, StateRef sigma,
                                       double lambda, double mu, double c, TermEstimator &est) {
    require_dim(*rho.rho, inst.input_dim(), "generic_primal_objective rho");
    require_dim(*sigma.rho, inst.output_dim(), "generic_primal_objective sigma");
    TermBreakdown out;
    double tr_a_rho = 0.0;
    double b_norm = 0.0;
    double map_norm = 0.0;
    double b_map = 0.0;
    double b_sigma = 0.0;
    double map_sigma = 0.0;
    const double sigma2 = purity(est, out, "tr[sigma^2]", sigma);

    if (const auto *lc = std::get_if<LinearCombinationModel>(&inst.model)) {
        for (std::size_t i = 0; i < lc->alpha.size(); ++i) {
            tr_a_rho += lc->alpha[i] *
                        overlap(est, out, "tr[a" + std::to_string(i) + ".rho]", lc->a_states[i], rho);
        }
        for (std::size_t j = 0; j < lc->beta.size(); ++j) {
            for (std::size_t jj = 0; jj < lc->beta.size(); ++jj) {
                b_norm += lc->beta[j] * lc->beta[jj] *
                          overlap(est, out, "tr[b" + std::to_string(j) + ".b" + std::to_string(jj) + "]",
                                  lc->b_states[j], lc->b_states[jj]);
            }
            b_sigma += lc->beta[j] *
                       overlap(est, out, "tr[b" + std::to_string(j) + ".sigma]", lc->b_states[j], sigma);
        }
        std::vector<double> in(lc->phi_in.size());
        for (std::size_t k = 0; k < in.size(); ++k) {
            in[k] = overlap(est, out, "tr[in" + std::to_string(k) + ".rho]", lc->phi_in[k], rho);
        }
        const std::size_t nl = lc->phi_out.size();
        // coefficient of omega_l in Phi(rho)
        std::vector<double> w(nl, 0.0);
        for (std::size_t k = 0; k < in.size(); ++k) {
            for (std::size_t l = 0; l < nl; ++l) {
                w[l] += lc->phi[k][l] * in[k];
            }
        }
        for (std::size_t l = 0; l < nl; ++l) {
            for (std::size_t ll = 0; ll < nl; ++ll) {
                map_norm += w[l] * w[ll] *
                            overlap(est, out, "tr[out" + std::to_string(l) + ".out" + std::to_string(ll) + "]",
                                    lc->phi_out[l], lc->phi_out[ll]);
            }
            for (std::size_t j = 0; j < lc->beta.size(); ++j) {
                b_map += lc->beta[j] * w[l] *
                         overlap(est, out, "tr[b" + std::to_string(j) + ".out" + std::to_string(l) + "]",
                                 lc->b_states[j], lc->phi_out[l]);
            }
            map_sigma += w[l] * overlap(est, out, "tr[out" + std::to_string(l) + ".sigma]",
                                        lc->phi_out[l], sigma);
        }
    } else {
        const auto &pm = std::get<PauliModel>(inst.model);
        const double dout = static_cast<double>(inst.output_dim());
        PauliTable on_rho(rho, "rho", est, out);
        PauliTable on_sigma(sigma, "sigma", est, out);
        for (const auto &[p, a] : pm.a.terms()) {
            tr_a_rho += a.real() * on_rho(p);
        }
        // Phi(rho) = sum_y cy sigma_y
        std::map<PauliString, double> cy;
        for (const auto &[key, coeff] : pm.phi) {
            cy[key.second] += coeff * on_rho(key.first);
        }
        b_norm = dout * pm.b.coeff_norm_sq();
        for (const auto &[y, v] : cy) {
            map_norm += dout * v * v;
            b_map += dout * pm.b.coefficient(y).real() * v;
            map_sigma += v * on_sigma(y);
        }
        for (const auto &[y, bv] : pm.b.terms()) {
            b_sigma += bv.real() * on_sigma(y);
        }
    }
    out.penalty = b_norm + lambda * lambda * map_norm + mu * mu * sigma2 - 2.0 * lambda * b_map -
                  2.0 * mu * b_sigma + 2.0 * lambda * mu * map_sigma;
    out.value = lambda * tr_a_rho - c * out.penalty;
    return out;
}

TermBreakdown generic_dual_objective(const SdpInstance &inst, StateRef tau, StateRef omega,
                                     double kappa, double nu, double c, TermEstimator &est) {
    require_dim(*tau.rho, inst.output_dim(), "generic_dual_objective tau");
    require_dim(*omega.rho, inst.input_dim(), "generic_dual_objective omega");
    TermBreakdown out;
    double tr_b_tau = 0.0;
    double adj_norm = 0.0;
    double a_norm = 0.0;
    double adj_a = 0.0;
    double adj_omega = 0.0;
    double a_omega = 0.0;
    const double omega2 = purity(est, out, "tr[omega^2]", omega);

    if (const auto *lc = std::get_if<LinearCombinationModel>(&inst.model)) {
        for (std::size_t j = 0; j < lc->beta.size(); ++j) {
            tr_b_tau += lc->beta[j] *
                        overlap(est, out, "tr[b" + std::to_string(j) + ".tau]", lc->b_states[j], tau);
        }
        for (std::size_t i = 0; i < lc->alpha.size(); ++i) {
            for (std::size_t ii = 0; ii < lc->alpha.size(); ++ii) {
                a_norm += lc->alpha[i] * lc->alpha[ii] *
                          overlap(est, out, "tr[a" + std::to_string(i) + ".a" + std::to_string(ii) + "]",
                                  lc->a_states[i], lc->a_states[ii]);
            }
            a_omega += lc->alpha[i] *
                       overlap(est, out, "tr[a" + std::to_string(i) + ".omega]", lc->a_states[i], omega);
        }
        std::vector<double> outs(lc->phi_out.size());
        for (std::size_t l = 0; l < outs.size(); ++l) {
            outs[l] = overlap(est, out, "tr[out" + std::to_string(l) + ".tau]", lc->phi_out[l], tau);
        }
        const std::size_t nk = lc->phi_in.size();
        // coefficient of sigma_k in Phi^dagger(tau)
        std::vector<double> e(nk, 0.0);
        for (std::size_t k = 0; k < nk; ++k) {
            for (std::size_t l = 0; l < outs.size(); ++l) {
                e[k] += lc->phi[k][l] * outs[l];
            }
        }
        for (std::size_t k = 0; k < nk; ++k) {
            for (std::size_t kk = 0; kk < nk; ++kk) {
                adj_norm += e[k] * e[kk] *
                            overlap(est, out, "tr[in" + std::to_string(k) + ".in" + std::to_string(kk) + "]",
                                    lc->phi_in[k], lc->phi_in[kk]);
            }
            for (std::size_t i = 0; i < lc->alpha.size(); ++i) {
                adj_a += e[k] * lc->alpha[i] *
                         overlap(est, out, "tr[in" + std::to_string(k) + ".a" + std::to_string(i) + "]",
                                 lc->phi_in[k], lc->a_states[i]);
            }
            adj_omega += e[k] * overlap(est, out, "tr[in" + std::to_string(k) + ".omega]",
                                        lc->phi_in[k], omega);
        }
    } else {
        const auto &pm = std::get<PauliModel>(inst.model);
        const double din = static_cast<double>(inst.input_dim());
        PauliTable on_tau(tau, "tau", est, out);
        PauliTable on_omega(omega, "omega", est, out);
        for (const auto &[y, bv] : pm.b.terms()) {
            tr_b_tau += bv.real() * on_tau(y);
        }
        std::map<PauliString, double> dx;
        for (const auto &[key, coeff] : pm.phi) {
            dx[key.first] += coeff * on_tau(key.second);
        }
        a_norm = din * pm.a.coeff_norm_sq();
        for (const auto &[x, v] : dx) {
            adj_norm += din * v * v;
            adj_a += din * v * pm.a.coefficient(x).real();
            adj_omega += v * on_omega(x);
        }
        for (const auto &[x, av] : pm.a.terms()) {
            a_omega += av.real() * on_omega(x);
        }
    }
    out.penalty = kappa * kappa * adj_norm + a_norm + nu * nu * omega2 - 2.0 * kappa * adj_a -
                  2.0 * kappa * nu * adj_omega + 2.0 * nu * a_omega;
    out.value = kappa * tr_b_tau + c * out.penalty;
    return out;
}

// ---------------------------------------------------------------------------
// Trace distance

TermBreakdown td_dual_objective(StateRef rho, StateRef sigma, StateRef omega, StateRef tau,
                                double lambda, double mu, double c, TermEstimator &est) {
    const std::size_t d = rho.rho->rows();
    require_dim(*sigma.rho, d, "td_dual_objective");
    require_dim(*omega.rho, d, "td_dual_objective");
    require_dim(*tau.rho, d, "td_dual_objective");
    TermBreakdown out;
    const double ww = purity(est, out, "tr[omega^2]", omega);
    const double rr = purity(est, out, "tr[rho^2]", rho);
    const double ss = purity(est, out, "tr[sigma^2]", sigma);
    const double tt = purity(est, out, "tr[tau^2]", tau);
    const double wr = overlap(est, out, "tr[omega.rho]", omega, rho);
    const double ws = overlap(est, out, "tr[omega.sigma]", omega, sigma);
    const double wt = overlap(est, out, "tr[omega.tau]", omega, tau);
    const double rs = overlap(est, out, "tr[rho.sigma]", rho, sigma);
    const double rt = overlap(est, out, "tr[rho.tau]", rho, tau);
    const double st = overlap(est, out, "tr[sigma.tau]", sigma, tau);
    out.penalty = lambda * lambda * ww + rr + ss + mu * mu * tt - 2.0 * lambda * wr +
                  2.0 * lambda * ws - 2.0 * lambda * mu * wt - 2.0 * rs + 2.0 * mu * rt -
                  2.0 * mu * st;
    out.value = lambda + c * out.penalty;
    return out;
}

TermBreakdown td_primal_objective(StateRef rho, StateRef sigma, StateRef tau, StateRef omega,
                                  double lambda, double mu, double c, TermEstimator &est) {
    const std::size_t d = rho.rho->rows();
    require_dim(*sigma.rho, d, "td_primal_objective");
    require_dim(*tau.rho, d, "td_primal_objective");
    require_dim(*omega.rho, d, "td_primal_objective");
    TermBreakdown out;
    const double tr = overlap(est, out, "tr[tau.rho]", tau, rho);
    const double ts = overlap(est, out, "tr[tau.sigma]", tau, sigma);
    const double tt = purity(est, out, "tr[tau^2]", tau);
    const double ww = purity(est, out, "tr[omega^2]", omega);
    const double tw = overlap(est, out, "tr[tau.omega]", tau, omega);
    out.penalty = static_cast<double>(d) + lambda * lambda * tt + mu * mu * ww - 2.0 * lambda -
                  2.0 * mu + 2.0 * lambda * mu * tw;
    out.value = lambda * tr - lambda * ts - c * out.penalty;
    return out;
}

// ---------------------------------------------------------------------------
// Root fidelity

TermBreakdown fidelity_primal_objective(StateRef rho, StateRef sigma, const PauliObservable &alpha,
                                        StateRef omega, double lambda, double c, TermEstimator &est) {
    const std::size_t d = rho.rho->rows();
    const std::size_t n = qubit_count(d);
    require_dim(*sigma.rho, d, "fidelity_primal_objective sigma");
    require_dim(*omega.rho, 2 * d, "fidelity_primal_objective omega");
    if (alpha.n_qubits() != n) {
        throw DimensionError("fidelity_primal_objective: alpha qubit count");
    }
    TermBreakdown out;
    const ComplexMatrix p0 = ComplexMatrix::diagonal(std::vector<double>{1.0, 0.0});
    const ComplexMatrix p1 = ComplexMatrix::diagonal(std::vector<double>{0.0, 1.0});
    const ComplexMatrix block0 = kron(p0, *rho.rho);
    const ComplexMatrix block1 = kron(p1, *sigma.rho);

    const double rr = purity(est, out, "tr[rho^2]", rho);
    const double ss = purity(est, out, "tr[sigma^2]", sigma);
    const double ww = purity(est, out, "tr[omega^2]", omega);
    const double w0 = overlap(est, out, "tr[(0x0.rho).omega]", block0, omega);
    const double w1 = overlap(est, out, "tr[(1x1.sigma).omega]", block1, omega);
    PauliTable on_omega(omega, "omega", est, out);
    const PauliString x1 = PauliString::parse("X");
    const PauliString y1 = PauliString::parse("Y");
    // Re[alpha_x Tr[((X - iY) (x) sigma_x) omega]]
    double offdiag = 0.0;
    for (const auto &[p, a] : alpha.terms()) {
        const double ex = on_omega(x1.tensor(p));
        const double ey = on_omega(y1.tensor(p));
        offdiag += a.real() * ex + a.imag() * ey;
    }
    const double dn = static_cast<double>(d);
    out.penalty = rr + ss + lambda * lambda * ww + 2.0 * dn * alpha.coeff_norm_sq() -
                  2.0 * lambda * w0 - 2.0 * lambda * w1 - 2.0 * lambda * offdiag;
    out.value = dn * alpha.coefficient(PauliString::identity(n)).real() - c * out.penalty;
    return out;
}

TermBreakdown fidelity_dual_objective(StateRef rho, StateRef sigma, StateRef omega, StateRef tau,
                                      StateRef xi, double lambda, double mu, double nu, double c,
                                      TermEstimator &est) {
    const std::size_t d = rho.rho->rows();
    const std::size_t n = qubit_count(d);
    require_dim(*sigma.rho, d, "fidelity_dual_objective sigma");
    require_dim(*omega.rho, d, "fidelity_dual_objective omega");
    require_dim(*tau.rho, d, "fidelity_dual_objective tau");
    require_dim(*xi.rho, 2 * d, "fidelity_dual_objective xi");
    TermBreakdown out;
    const ComplexMatrix p0 = ComplexMatrix::diagonal(std::vector<double>{1.0, 0.0});
    const ComplexMatrix p1 = ComplexMatrix::diagonal(std::vector<double>{0.0, 1.0});
    const ComplexMatrix block0 = kron(p0, *omega.rho);
    const ComplexMatrix block1 = kron(p1, *tau.rho);

    const double wr = overlap(est, out, "tr[omega.rho]", omega, rho);
    const double ts = overlap(est, out, "tr[tau.sigma]", tau, sigma);
    const double ww = purity(est, out, "tr[omega^2]", omega);
    const double tt = purity(est, out, "tr[tau^2]", tau);
    const double xx = purity(est, out, "tr[xi^2]", xi);
    const double x0 = overlap(est, out, "tr[(0x0.omega).xi]", block0, xi);
    const double x1 = overlap(est, out, "tr[(1x1.tau).xi]", block1, xi);
    PauliTable on_xi(xi, "xi", est, out);
    const double xoff = on_xi(PauliString::parse("X").tensor(PauliString::identity(n)));
    const double dn = static_cast<double>(d);
    out.penalty = lambda * lambda * ww + mu * mu * tt + 2.0 * dn + nu * nu * xx -
                  2.0 * lambda * nu * x0 - 2.0 * mu * nu * x1 - 2.0 * nu * xoff;
    out.value = 0.5 * lambda * wr + 0.5 * mu * ts + c * out.penalty;
    return out;
}

// ---------------------------------------------------------------------------
// Negativity

namespace {

double pt_sign(const PauliString &p, std::size_t n_a) {
    std::size_t ys = 0;
    for (std::size_t q = n_a; q < p.n_qubits(); ++q) {
        ys += p[q] == 2;
    }
    return (ys % 2) ? -1.0 : 1.0;
}

void check_bipartition(const ComplexMatrix &rho, std::size_t n_a, const PauliObservable &alpha) {
    const std::size_t n = qubit_count(rho.rows());
    if (n_a == 0 || n_a >= n) {
        throw DimensionError("negativity: n_a must split the qubits into two nonempty parts");
    }
    if (alpha.n_qubits() != n || !alpha.is_hermitian()) {
        throw DimensionError("negativity: coefficient vector must be real on all qubits");
    }
}

} // namespace

TermBreakdown negativity_primal_objective(StateRef rho_ab, std::size_t n_a,
                                          const PauliObservable &alpha, StateRef sigma_ab,
                                          StateRef tau_ab, double lambda, double mu, double c,
                                          TermEstimator &est) {
    check_bipartition(*rho_ab.rho, n_a, alpha);
    const std::size_t d = rho_ab.rho->rows();
    require_dim(*sigma_ab.rho, d, "negativity_primal_objective sigma");
    require_dim(*tau_ab.rho, d, "negativity_primal_objective tau");
    TermBreakdown out;
    PauliTable on_rho(rho_ab, "rho", est, out);
    PauliTable on_sigma(sigma_ab, "sigma", est, out);
    PauliTable on_tau(tau_ab, "tau", est, out);
    const double ss = purity(est, out, "tr[sigma^2]", sigma_ab);
    const double tt = purity(est, out, "tr[tau^2]", tau_ab);
    double g1 = 0.0;
    double h_sigma = 0.0;
    double h_tau = 0.0;
    for (const auto &[p, a] : alpha.terms()) {
        g1 += pt_sign(p, n_a) * a.real() * on_rho(p);
        h_sigma += a.real() * on_sigma(p);
        h_tau += a.real() * on_tau(p);
    }
    const double dn = static_cast<double>(d);
    out.penalty = 2.0 * dn + 2.0 * dn * alpha.coeff_norm_sq() + lambda * lambda * ss +
                  mu * mu * tt - 2.0 * lambda - 2.0 * mu + 2.0 * lambda * h_sigma -
                  2.0 * mu * h_tau;
    out.value = g1 - c * out.penalty;
    return out;
}

TermBreakdown negativity_dual_objective(StateRef rho_ab, std::size_t n_a,
                                        const PauliObservable &alpha, const PauliObservable &beta,
                                        StateRef sigma_ab, StateRef tau_ab, double lambda,
                                        double mu, double c, TermEstimator &est) {
    check_bipartition(*rho_ab.rho, n_a, alpha);
    check_bipartition(*rho_ab.rho, n_a, beta);
    const std::size_t d = rho_ab.rho->rows();
    const std::size_t n = qubit_count(d);
    require_dim(*sigma_ab.rho, d, "negativity_dual_objective sigma");
    require_dim(*tau_ab.rho, d, "negativity_dual_objective tau");
    TermBreakdown out;
    PauliTable on_rho(rho_ab, "rho", est, out);
    PauliTable on_sigma(sigma_ab, "sigma", est, out);
    PauliTable on_tau(tau_ab, "tau", est, out);
    const double rr = purity(est, out, "tr[rho^2]", rho_ab);
    const double ss = purity(est, out, "tr[sigma^2]", sigma_ab);
    const double tt = purity(est, out, "tr[tau^2]", tau_ab);

    std::set<PauliString> support;
    for (const auto &[p, a] : alpha.terms()) {
        support.insert(p);
    }
    for (const auto &[p, b] : beta.terms()) {
        support.insert(p);
    }
    double pt_rho = 0.0;
    double cross = 0.0;
    double k_sigma = 0.0;
    double l_tau = 0.0;
    for (const auto &p : support) {
        const double a = alpha.coefficient(p).real();
        const double b = beta.coefficient(p).real();
        pt_rho += pt_sign(p, n_a) * (a - b) * on_rho(p);
        cross += a * b;
        if (a != 0.0) {
            k_sigma += a * on_sigma(p);
        }
        if (b != 0.0) {
            l_tau += b * on_tau(p);
        }
    }
    const double dn = static_cast<double>(d);
    out.penalty = 2.0 * dn * (alpha.coeff_norm_sq() + beta.coeff_norm_sq()) + rr + mu * mu * tt -
                  2.0 * pt_rho - 2.0 * dn * cross + lambda * lambda * ss - 2.0 * lambda * k_sigma -
                  2.0 * mu * l_tau;
    const PauliString id = PauliString::identity(n);
    out.value = dn * (alpha.coefficient(id).real() + beta.coefficient(id).real()) + c * out.penalty;
    return out;
}

// ---------------------------------------------------------------------------
// Constrained Hamiltonian

namespace {

void check_cham(const PauliObservable &h, const std::vector<PauliObservable> &a,
                std::span<const double> b, const ComplexMatrix &rho) {
    if (a.size() != b.size()) {
        throw DimensionError("constrained Hamiltonian: one bound per constraint");
    }
    require_dim(rho, std::size_t{1} << h.n_qubits(), "constrained Hamiltonian state");
    for (const auto &ai : a) {
        if (ai.n_qubits() != h.n_qubits()) {
            throw DimensionError("constrained Hamiltonian: constraint qubit count");
        }
    }
}

} // namespace

TermBreakdown cham_primal_objective(const PauliObservable &h, const std::vector<PauliObservable> &a,
                                    std::span<const double> b, StateRef rho,
                                    std::span<const double> z, double c, TermEstimator &est) {
    check_cham(h, a, b, *rho.rho);
    require_same(z.size(), a.size(), "cham_primal_objective slack");
    TermBreakdown out;
    PauliTable on_rho(rho, "rho", est, out);
    double energy = 0.0;
    for (const auto &[p, v] : h.terms()) {
        energy += v.real() * on_rho(p);
    }
    double pen = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double ai = 0.0;
        for (const auto &[p, v] : a[i].terms()) {
            ai += v.real() * on_rho(p);
        }
        pen += sq(ai - b[i] - z[i]);
    }
    out.penalty = pen;
    out.value = energy + c * pen;
    return out;
}

TermBreakdown cham_dual_objective(const PauliObservable &h, const std::vector<PauliObservable> &a,
                                  std::span<const double> b, std::span<const double> y, double mu,
                                  double nu, StateRef omega, double c, TermEstimator &est) {
    check_cham(h, a, b, *omega.rho);
    require_same(y.size(), a.size(), "cham_dual_objective multipliers");
    const std::size_t n = h.n_qubits();
    const PauliString id = PauliString::identity(n);
    const double dn = dimension_of(n);
    TermBreakdown out;
    PauliTable on_omega(omega, "omega", est, out);
    const double ww = purity(est, out, "tr[omega^2]", omega);

    auto dot = [](const PauliObservable &u, const PauliObservable &v) {
        double s = 0.0;
        for (const auto &[p, x] : u.terms()) {
            s += x.real() * v.coefficient(p).real();
        }
        return s;
    };
    auto on = [&](const PauliObservable &u) {
        double s = 0.0;
        for (const auto &[p, x] : u.terms()) {
            s += x.real() * on_omega(p);
        }
        return s;
    };
    double yy = 0.0;
    double yh = 0.0;
    double ya0 = 0.0;
    double ya_omega = 0.0;
    double by = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            yy += y[i] * y[j] * dot(a[i], a[j]);
        }
        yh += y[i] * dot(h, a[i]);
        ya0 += y[i] * a[i].coefficient(id).real();
        ya_omega += y[i] * on(a[i]);
        by += b[i] * y[i];
    }
    const double h_omega = on(h);
    out.penalty = dn * h.coeff_norm_sq() + dn * yy + mu * mu * dn + nu * nu * ww -
                  2.0 * dn * yh - 2.0 * dn * mu * h.coefficient(id).real() - 2.0 * nu * h_omega +
                  2.0 * dn * mu * ya0 + 2.0 * nu * ya_omega + 2.0 * mu * nu;
    out.value = by + mu - c * out.penalty;
    return out;
}

TermBreakdown interior_point_cham(const PauliObservable &h, const std::vector<PauliObservable> &a,
                                  std::span<const double> b, StateRef rho, double eta,
                                  TermEstimator &est) {
    check_cham(h, a, b, *rho.rho);
    if (!(eta > 0.0)) {
        throw std::invalid_argument("interior_point_cham: eta must be positive");
    }
    TermBreakdown out;
    PauliTable on_rho(rho, "rho", est, out);
    double energy = 0.0;
    for (const auto &[p, v] : h.terms()) {
        energy += v.real() * on_rho(p);
    }
    double barrier = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double ai = 0.0;
        for (const auto &[p, v] : a[i].terms()) {
            ai += v.real() * on_rho(p);
        }
        const double gap = ai - b[i];
        if (!(gap > 0.0)) {
            throw BarrierViolation("interior_point_cham: constraint " + std::to_string(i) +
                                   " not strictly satisfied (Tr[A rho] - b = " +
                                   std::to_string(gap) + ")");
        }
        barrier += std::log(gap);
    }
    out.penalty = barrier;
    out.value = energy - eta * barrier;
    return out;
}

// ---------------------------------------------------------------------------
// Classical

TermBreakdown tvd_dual_objective(std::span<const double> p, std::span<const double> q,
                                 std::span<const double> r, std::span<const double> s,
                                 double lambda, double mu, double c, TermEstimator &est) {
    require_same(p.size(), q.size(), "tvd_dual_objective");
    require_same(p.size(), r.size(), "tvd_dual_objective");
    require_same(p.size(), s.size(), "tvd_dual_objective");
    TermBreakdown out;
    const double rr = collision(est, out, "r.r", r, r);
    const double pp = collision(est, out, "p.p", p, p);
    const double qq = collision(est, out, "q.q", q, q);
    const double ss = collision(est, out, "s.s", s, s);
    const double rp = collision(est, out, "r.p", r, p);
    const double rq = collision(est, out, "r.q", r, q);
    const double rs = collision(est, out, "r.s", r, s);
    const double pq = collision(est, out, "p.q", p, q);
    const double ps = collision(est, out, "p.s", p, s);
    const double qs = collision(est, out, "q.s", q, s);
    out.penalty = lambda * lambda * rr + pp + qq + mu * mu * ss - 2.0 * lambda * rp +
                  2.0 * lambda * rq - 2.0 * lambda * mu * rs - 2.0 * pq + 2.0 * mu * ps -
                  2.0 * mu * qs;
    out.value = lambda + c * out.penalty;
    return out;
}

TermBreakdown tvd_primal_objective(std::span<const double> p, std::span<const double> q,
                                   std::span<const double> r, std::span<const double> s,
                                   double lambda, double mu, double c, TermEstimator &est) {
    require_same(p.size(), q.size(), "tvd_primal_objective");
    require_same(p.size(), r.size(), "tvd_primal_objective");
    require_same(p.size(), s.size(), "tvd_primal_objective");
    TermBreakdown out;
    const double rp = collision(est, out, "r.p", r, p);
    const double rq = collision(est, out, "r.q", r, q);
    const double rr = collision(est, out, "r.r", r, r);
    const double ss = collision(est, out, "s.s", s, s);
    const double rs = collision(est, out, "r.s", r, s);
    const double dn = static_cast<double>(p.size());
    out.penalty = dn + lambda * lambda * rr + mu * mu * ss - 2.0 * lambda - 2.0 * mu +
                  2.0 * lambda * mu * rs;
    out.value = lambda * (rp - rq) - c * out.penalty;
    return out;
}

namespace {

void check_classical(const WalshObservable &h, const std::vector<WalshObservable> &a,
                     std::span<const double> b, std::span<const double> dist) {
    if (a.size() != b.size()) {
        throw DimensionError("classical constrained Hamiltonian: one bound per constraint");
    }
    require_same(dist.size(), std::size_t{1} << h.n_bits(), "classical constrained Hamiltonian");
    for (const auto &ai : a) {
        require_same(ai.n_bits(), h.n_bits(), "classical constrained Hamiltonian");
    }
}

} // namespace

TermBreakdown classical_cham_primal_objective(const WalshObservable &h,
                                              const std::vector<WalshObservable> &a,
                                              std::span<const double> b, std::span<const double> p,
                                              std::span<const double> z, double c,
                                              TermEstimator &est) {
    check_classical(h, a, b, p);
    require_same(z.size(), a.size(), "classical_cham_primal_objective slack");
    TermBreakdown out;
    WalshTable on_p(p, "p", est, out);
    double energy = 0.0;
    for (const auto &[w, v] : h.terms()) {
        energy += v * on_p(w);
    }
    double pen = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double ai = 0.0;
        for (const auto &[w, v] : a[i].terms()) {
            ai += v * on_p(w);
        }
        pen += sq(ai - b[i] - z[i]);
    }
    out.penalty = pen;
    out.value = energy + c * pen;
    return out;
}

TermBreakdown classical_cham_dual_objective(const WalshObservable &h,
                                            const std::vector<WalshObservable> &a,
                                            std::span<const double> b, std::span<const double> y,
                                            double mu, double nu, std::span<const double> w,
                                            double c, TermEstimator &est) {
    check_classical(h, a, b, w);
    require_same(y.size(), a.size(), "classical_cham_dual_objective multipliers");
    const std::size_t n = h.n_bits();
    const WalshString zero = WalshString::zeros(n);
    const double dn = dimension_of(n);
    TermBreakdown out;
    WalshTable on_w(w, "w", est, out);
    const double ww = collision(est, out, "w.w", w, w);

    auto dot = [](const WalshObservable &u, const WalshObservable &v) {
        double s = 0.0;
        for (const auto &[x, cu] : u.terms()) {
            s += cu * v.coefficient(x);
        }
        return s;
    };
    auto on = [&](const WalshObservable &u) {
        double s = 0.0;
        for (const auto &[x, cu] : u.terms()) {
            s += cu * on_w(x);
        }
        return s;
    };
    double yy = 0.0;
    double yh = 0.0;
    double ya0 = 0.0;
    double ya_w = 0.0;
    double by = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            yy += y[i] * y[j] * dot(a[i], a[j]);
        }
        yh += y[i] * dot(h, a[i]);
        ya0 += y[i] * a[i].coefficient(zero);
        ya_w += y[i] * on(a[i]);
        by += b[i] * y[i];
    }
    out.penalty = dn * h.coeff_norm_sq() + dn * yy + mu * mu * dn + nu * nu * ww - 2.0 * dn * yh -
                  2.0 * dn * mu * h.coefficient(zero) - 2.0 * nu * on(h) + 2.0 * dn * mu * ya0 +
                  2.0 * nu * ya_w + 2.0 * mu * nu;
    out.value = by + mu - c * out.penalty;
    return out;
}

} // namespace qslack

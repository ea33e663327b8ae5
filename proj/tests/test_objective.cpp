#include "doctest.h"
#include "equivalence.hpp"

#include "qslack/objective.hpp"
#include "qslack/oracle.hpp"
#include "qslack/problems.hpp"

#include <cmath>

using namespace qslack;
using testing::dm;

namespace {

/// Pauli coefficients of a matrix: Tr[sigma_x M] / 2^n.
PauliObservable coefficients_of(const ComplexMatrix &m) {
    const std::size_t n = qubit_count(m.rows());
    PauliObservable o(n);
    for (std::size_t k = 0; k < (std::size_t{1} << (2 * n)); ++k) {
        const auto p = PauliString::from_index(k, n);
        const cplx v = (dense(p) * m).trace() / double(m.rows());
        if (std::abs(v) > 1e-14) {
            o.set_term(p, v);
        }
    }
    return o;
}

struct Split {
    ComplexMatrix plus;
    ComplexMatrix minus;
    ComplexMatrix proj_plus;
    std::size_t rank_plus = 0;
};

Split jordan(const ComplexMatrix &m) {
    const auto e = eig_hermitian(HermitianMatrix::symmetrized(m));
    const std::size_t d = m.rows();
    Split s{ComplexMatrix(d, d), ComplexMatrix(d, d), ComplexMatrix(d, d)};
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<cplx> v(d);
        for (std::size_t r = 0; r < d; ++r) {
            v[r] = e.vectors(r, i);
        }
        const auto pr = ComplexMatrix::projector(v);
        if (e.values[i] > 0) {
            s.plus += e.values[i] * pr;
            s.proj_plus += pr;
            ++s.rank_plus;
        } else {
            s.minus -= e.values[i] * pr;
        }
    }
    return s;
}

} // namespace

TEST_CASE("expansions equal dense evaluation") {
    for (const auto &g : testing::expansion_gaps({1, 2}, 200, 20240601)) {
        INFO(g.builder, " scale ", g.max_scale);
        CHECK(g.max_gap < 1e-9);
    }
}

TEST_CASE("classical expansions equal dense vector arithmetic") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> pos(0.0, 2.0);
    std::uniform_real_distribution<double> sgn(-1.0, 1.0);
    for (std::size_t n = 1; n <= 3; ++n) {
        const std::size_t d = std::size_t{1} << n;
        for (int t = 0; t < 100; ++t) {
            const auto p = testing::random_dist(d, rng), q = testing::random_dist(d, rng);
            const auto r = testing::random_dist(d, rng), s = testing::random_dist(d, rng);
            const double l = pos(rng), m = pos(rng), c = 10 * pos(rng);
            TermEstimator est;
            CHECK(tvd_dual_objective(p, q, r, s, l, m, c, est).value ==
                  doctest::Approx(testing::tvd_dual(p, q, r, s, l, m, c)).epsilon(1e-12));
            CHECK(tvd_primal_objective(p, q, r, s, l, m, c, est).value ==
                  doctest::Approx(testing::tvd_primal(p, q, r, s, l, m, c)).epsilon(1e-12));

            WalshObservable h(n);
            std::vector<WalshObservable> a(2, WalshObservable(n));
            for (std::size_t x = 0; x < d; ++x) {
                std::vector<std::uint8_t> bits(n);
                for (std::size_t k = 0; k < n; ++k) {
                    bits[k] = std::uint8_t(x >> (n - 1 - k) & 1);
                }
                h.add_term(WalshString(bits), sgn(rng));
                a[0].add_term(WalshString(bits), sgn(rng));
                a[1].add_term(WalshString(bits), sgn(rng));
            }
            const std::vector<double> b{sgn(rng), sgn(rng)};
            const std::vector<double> z{pos(rng), pos(rng)};
            const std::vector<double> y{pos(rng), pos(rng)};
            const double mu = sgn(rng), nu = pos(rng);
            CHECK(std::abs(classical_cham_primal_objective(h, a, b, p, z, c, est).value -
                           testing::classical_cham_primal(h, a, b, p, z, c)) < 1e-10);
            CHECK(std::abs(classical_cham_dual_objective(h, a, b, y, mu, nu, r, c, est).value -
                           testing::classical_cham_dual(h, a, b, y, mu, nu, r, c)) < 1e-10);
        }
    }
}

TEST_CASE("generic builders") {
    std::mt19937_64 rng(5);
    SUBCASE("all zero gives zero") {
        PauliModel pm{PauliObservable(1), PauliObservable(1), {}};
        const SdpInstance inst{pm};
        const auto rho = testing::random_density(2, 2, rng);
        TermEstimator est;
        CHECK(generic_primal_objective(inst, rho, rho, 0, 0, 3.0, est).value == doctest::Approx(0.0));
        CHECK(generic_dual_objective(inst, rho, rho, 0, 0, 3.0, est).value == doctest::Approx(0.0));
    }
    SUBCASE("adjoint identity") {
        for (int t = 0; t < 20; ++t) {
            const auto inst = (t % 2) ? testing::random_lc_instance(2, 1, rng) : testing::random_pauli_instance(2, rng);
            const std::size_t din = inst.input_dim(), dout = inst.output_dim();
            const auto x = testing::random_hermitian(din, rng);
            const auto y = testing::random_hermitian(dout, rng);
            CHECK(std::abs(hs_inner(y, inst.apply_map(x)) - hs_inner(inst.apply_adjoint(y), x)) < 1e-10);
            CHECK(testing::max_abs_diff(inst.apply_map(x), testing::phi_map(inst, x)) < 1e-12);
        }
    }
    SUBCASE("B built from the constraint makes the penalty vanish") {
        auto inst = testing::random_lc_instance(1, 1, rng);
        auto &lc = std::get<LinearCombinationModel>(inst.model);
        const auto rho = testing::random_density(2, 2, rng);
        const auto sigma = testing::random_density(2, 2, rng);
        const double lambda = 0.7, mu = 1.3;
        lc.beta.clear();
        lc.b_states.clear();
        for (std::size_t l = 0; l < lc.phi_out.size(); ++l) {
            double w = 0.0;
            for (std::size_t k = 0; k < lc.phi_in.size(); ++k) {
                w += lc.phi[k][l] * (lc.phi_in[k].matrix() * rho).trace().real();
            }
            lc.beta.push_back(lambda * w);
            lc.b_states.push_back(lc.phi_out[l]);
        }
        lc.beta.push_back(mu);
        lc.b_states.push_back(dm(sigma));
        TermEstimator est;
        const auto r = generic_primal_objective(inst, rho, sigma, lambda, mu, 10.0, est);
        CHECK(r.penalty == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(r.value == doctest::Approx(lambda * testing::re_trace(testing::a_of(inst), rho)));
    }
}

TEST_CASE("trace distance objectives") {
    std::mt19937_64 rng(8);
    const auto rho = testing::random_density(4, 2, rng);
    const auto sigma = testing::random_density(4, 3, rng);
    TermEstimator est;
    CHECK(td_dual_objective(rho, rho, sigma, sigma, 1, 1, 7.0, est).value == doctest::Approx(1.0));
    CHECK(td_dual_objective(rho, sigma, rho, rho, 0, 0, 7.0, est).value ==
          doctest::Approx(7.0 * testing::fro_sq(sigma - rho)));
    CHECK(td_primal_objective(rho, sigma, rho, rho, 0, 0, 3.0, est).value == doctest::Approx(-12.0));
    const auto half = 0.5 * ComplexMatrix::identity(2);
    const auto r1 = testing::random_density(2, 2, rng);
    CHECK(td_primal_objective(r1, r1, half, half, 1, 1, 3.0, est).penalty == doctest::Approx(0.0));

    // Helstrom optimum sits exactly on the oracle from both sides
    const auto sp = jordan(rho - sigma);
    const double td = exact_trace_distance(rho, sigma);
    const double k = double(sp.rank_plus);
    const auto tau = (1.0 / k) * sp.proj_plus;
    const auto omega = (1.0 / (4.0 - k)) * (ComplexMatrix::identity(4) - sp.proj_plus);
    const auto primal = td_primal_objective(rho, sigma, tau, omega, k, 4.0 - k, 10.0, est);
    CHECK(std::abs(primal.value - td) < 1e-6);
    const double lam = sp.plus.trace().real();
    const double mu = sp.minus.trace().real();
    const auto dual = td_dual_objective(rho, sigma, (1.0 / lam) * sp.plus, (1.0 / mu) * sp.minus, lam, mu, 10.0, est);
    CHECK(std::abs(dual.value - td) < 1e-6);
}

TEST_CASE("fidelity objectives") {
    TermEstimator est;
    const auto zero = testing::proj(0);
    PauliObservable alpha(1);
    alpha.set_term(PauliString::parse("I"), 0.5);
    alpha.set_term(PauliString::parse("Z"), 0.5);
    const auto omega = 0.5 * kron(ComplexMatrix(2, 2, {1, 1, 1, 1}), zero);
    const auto r = fidelity_primal_objective(zero, zero, alpha, omega, 2.0, 5.0, est);
    CHECK(r.penalty == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.value == doctest::Approx(1.0));

    std::mt19937_64 rng(1);
    const auto rho = testing::random_density(2, 2, rng);
    const auto sigma = testing::random_density(2, 2, rng);
    const auto w = testing::random_density(4, 2, rng);
    CHECK(fidelity_primal_objective(rho, sigma, PauliObservable(1), w, 0.0, 3.0, est).value ==
          doctest::Approx(-3.0 * (testing::fro_sq(rho) + testing::fro_sq(sigma))));
    CHECK(fidelity_dual_objective(rho, sigma, rho, sigma, w, 0, 0, 0, 3.0, est).value == doctest::Approx(3.0 * 4));

    // rho = sigma = I/2: lambda omega = mu tau = I, nu xi = [[I, I], [I, I]] is feasible with value 1
    const auto mixed = 0.5 * ComplexMatrix::identity(2);
    const auto xi = 0.25 * kron(ComplexMatrix(2, 2, {1, 1, 1, 1}), ComplexMatrix::identity(2));
    const auto d = fidelity_dual_objective(mixed, mixed, mixed, mixed, xi, 2.0, 2.0, 4.0, 5.0, est);
    CHECK(d.penalty == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d.value == doctest::Approx(exact_root_fidelity(mixed, mixed)));
    CHECK_THROWS_AS(fidelity_primal_objective(rho, sigma, alpha, rho, 1.0, 1.0, est), DimensionError);
}

TEST_CASE("negativity objectives") {
    TermEstimator est;
    const double s = 1 / std::sqrt(2.0);
    const auto bell = DensityMatrix::pure(std::vector<cplx>{s, 0, 0, s}).matrix();
    const auto mixed = 0.25 * ComplexMatrix::identity(4);

    PauliObservable id_only(2);
    id_only.set_term(PauliString::identity(2), 1.0);
    const auto r = negativity_primal_objective(bell, 1, id_only, mixed, mixed, 1, 1, 2.0, est);
    CHECK(r.value + 2.0 * r.penalty == doctest::Approx(1.0));
    CHECK(r.value == doctest::Approx(testing::negativity_primal(bell, 1, id_only, mixed, mixed, 1, 1, 2.0)));

    CHECK(negativity_dual_objective(bell, 1, PauliObservable(2), PauliObservable(2), mixed, mixed, 0, 0, 3.0, est)
              .value == doctest::Approx(3.0));

    // Jordan split of the partial transpose reaches the negativity
    const auto pt = partial_transpose_B(bell, 2, 2);
    const auto sp = jordan(pt);
    const auto k = coefficients_of(sp.plus);
    const auto l = coefficients_of(sp.minus);
    const double lam = sp.plus.trace().real();
    const double mu = sp.minus.trace().real();
    const auto dual = negativity_dual_objective(bell, 1, k, l, (1.0 / lam) * sp.plus, (1.0 / mu) * sp.minus, lam, mu,
                                                100.0, est);
    CHECK(dual.penalty == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dual.value == doctest::Approx(2.0));
    CHECK(exact_negativity(bell, 2, 2) == doctest::Approx(2.0));

    CHECK_THROWS_AS(negativity_primal_objective(bell, 2, id_only, mixed, mixed, 1, 1, 1, est), DimensionError);
}

TEST_CASE("constrained Hamiltonian objectives") {
    TermEstimator est;
    const auto inst = ConstrainedHamiltonian::reference_instance();
    const auto mixed = 0.25 * ComplexMatrix::identity(4);

    const std::vector<double> none;
    std::mt19937_64 rng(4);
    const auto rho = testing::random_density(4, 2, rng);
    CHECK(cham_primal_objective(inst.h, {}, none, rho, none, 10.0, est).value ==
          doctest::Approx(expect(inst.h, rho).real()));

    // single qubit, Z constraint met with equality by construction
    const auto zero = testing::proj(0);
    const std::vector<PauliObservable> az{PauliObservable::parse("Z")};
    const std::vector<double> bz{0.4};
    const std::vector<double> zz{0.6};
    CHECK(cham_primal_objective(PauliObservable::parse("X"), az, bz, zero, zz, 10.0, est).penalty ==
          doctest::Approx(0.0));

    const std::vector<double> y0{0.0, 0.0};
    const auto d0 = cham_dual_objective(inst.h, inst.a, inst.b, y0, 0.3, 0.0, mixed, 1.0, est);
    CHECK(d0.penalty == doctest::Approx(testing::fro_sq(observable_dense(inst.h) - 0.3 * ComplexMatrix::identity(4))));

    const auto hd = observable_dense(inst.h);
    const double lmin = min_eigenvalue(hd);
    const auto shifted = hd - lmin * ComplexMatrix::identity(4);
    const double nu = shifted.trace().real();
    const auto opt = cham_dual_objective(inst.h, inst.a, inst.b, y0, lmin, nu, (1.0 / nu) * shifted, 100.0, est);
    CHECK(opt.penalty == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(opt.value == doctest::Approx(-std::sqrt(5.0)));
}

TEST_CASE("interior-point objective") {
    TermEstimator est;
    const auto inst = ConstrainedHamiltonian::reference_instance();
    const auto mixed = 0.25 * ComplexMatrix::identity(4);
    CHECK_THROWS_AS(interior_point_cham(inst.h, inst.a, inst.b, mixed, 0.1, est), BarrierViolation);
    const std::vector<double> none;
    CHECK(interior_point_cham(inst.h, {}, none, mixed, 0.1, est).value == doctest::Approx(0.0));
    CHECK_THROWS_AS(interior_point_cham(inst.h, {}, none, mixed, 0.0, est), std::invalid_argument);

    // |0><0| (x) |+><+|: Tr[YI] = 0 so use an instance it satisfies strictly
    const std::vector<PauliObservable> a{PauliObservable::parse("ZI")};
    const std::vector<double> b{0.5};
    const auto rho = testing::kron(testing::proj(0), 0.5 * ComplexMatrix::identity(2));
    const double e0 = expect(inst.h, rho).real();
    const auto small = interior_point_cham(inst.h, a, b, rho, 1e-9, est);
    CHECK(small.value == doctest::Approx(e0).epsilon(1e-8));
    CHECK(interior_point_cham(inst.h, a, b, rho, 0.1, est).value == doctest::Approx(e0 - 0.1 * std::log(0.5)));
}

TEST_CASE("objectives are affine in the penalty constant") {
    std::mt19937_64 rng(12);
    const auto rho = testing::random_density(2, 2, rng), sigma = testing::random_density(2, 2, rng);
    const auto omega = testing::random_density(2, 1, rng), tau = testing::random_density(2, 2, rng);
    for (double c : {0.0, 1.0, 10.0, 100.0}) {
        TermEstimator est;
        const auto d = td_dual_objective(rho, sigma, omega, tau, 0.4, 0.7, c, est);
        CHECK(d.value == doctest::Approx(0.4 + c * d.penalty));
        const auto p = td_primal_objective(rho, sigma, tau, omega, 0.4, 0.7, c, est);
        CHECK(p.value == doctest::Approx(0.4 * testing::re_trace(tau, rho - sigma) - c * p.penalty));
        CHECK(p.penalty > 0.0);
    }
}

TEST_CASE("shot-mode terms are unbiased") {
    std::mt19937_64 rng(77);
    const auto rho = testing::random_density(2, 2, rng), sigma = testing::random_density(2, 2, rng);
    const auto omega = testing::random_density(2, 2, rng), tau = testing::random_density(2, 2, rng);
    TermEstimator exact;
    const double want = td_dual_objective(rho, sigma, omega, tau, 0.5, 0.5, 1.0, exact).value;
    double sum = 0.0;
    double sum2 = 0.0;
    const int reps = 2000;
    for (int t = 0; t < reps; ++t) {
        TermEstimator est(ShotModel::with_shots(1000), 1000 + t);
        const double v = td_dual_objective(rho, sigma, omega, tau, 0.5, 0.5, 1.0, est).value;
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
    CHECK(std::abs(mean - want) < 4 * se);
}

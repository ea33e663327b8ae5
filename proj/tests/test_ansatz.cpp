#include "doctest.h"
#include "helpers.hpp"

#include "qslack/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace qslack;

namespace {

std::vector<double> random_angles(std::size_t k, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
    std::vector<double> v(k);
    for (auto &x : v) {
        x = u(rng);
    }
    return v;
}

} // namespace

TEST_CASE("layered unitary parameter layout") {
    // per layer: two rotations per qubit, one Rzz per chain pair, ring pair only from n = 3
    CHECK(ParamCircuit::layered_unitary(1, 2).n_params() == 4);
    CHECK(ParamCircuit::layered_unitary(2, 2).n_params() == 10);
    CHECK(ParamCircuit::layered_unitary(3, 1).n_params() == 9);
    CHECK(ParamCircuit::layered_unitary(4, 3).n_params() == 36);
    CHECK(ParamCircuit::layered_unitary(2, 2).shift_rule_applicable());
}

TEST_CASE("zero angles give the identity") {
    for (std::size_t n = 1; n <= 3; ++n) {
        const auto c = ParamCircuit::layered_unitary(n, 2);
        const std::vector<double> zero(c.n_params(), 0.0);
        CHECK(testing::max_abs_diff(c.unitary(zero), ComplexMatrix::identity(std::size_t{1} << n)) < 1e-15);
    }
}

TEST_CASE("single Ry(pi) flips the qubit") {
    ParamCircuit c(1);
    c.add_rotation(GateKind::Ry, 0);
    const std::vector<double> th{std::numbers::pi};
    const auto u = c.unitary(th);
    // exp(-i pi Y / 2) = -iY
    const auto expect = cplx(0, -1) * testing::Y2();
    CHECK(testing::max_abs_diff(u, expect) < 1e-15);
    const auto psi = c.run_from_zero(th);
    CHECK(std::abs(psi[0]) < 1e-15);
    CHECK(std::abs(psi[1]) == doctest::Approx(1.0));
}

TEST_CASE("rotation gates match their exponentials") {
    const double t = 0.37;
    const cplx ci(std::cos(t / 2), 0);
    const cplx si(0, -std::sin(t / 2));
    struct Case {
        GateKind kind;
        ComplexMatrix gen;
        std::size_t n;
    };
    const std::vector<Case> cases{
        {GateKind::Rx, testing::X2(), 1},
        {GateKind::Ry, testing::Y2(), 1},
        {GateKind::Rz, testing::Z2(), 1},
        {GateKind::Rxx, kron(testing::X2(), testing::X2()), 2},
        {GateKind::Ryy, kron(testing::Y2(), testing::Y2()), 2},
        {GateKind::Rzz, kron(testing::Z2(), testing::Z2()), 2},
    };
    for (const auto &cs : cases) {
        ParamCircuit c(cs.n);
        c.add_rotation(cs.kind, 0, 1);
        const std::vector<double> th{t};
        const std::size_t d = std::size_t{1} << cs.n;
        const auto expect = ci * ComplexMatrix::identity(d) + si * cs.gen;
        CHECK(testing::max_abs_diff(c.unitary(th), expect) < 1e-15);
    }
}

TEST_CASE("CX and qubit ordering") {
    ParamCircuit c(2);
    c.add_cx(0, 1);
    const auto u = c.unitary(std::vector<double>{});
    const ComplexMatrix expect(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
    CHECK(testing::max_abs_diff(u, expect) == 0.0);

    // Rx on qubit 0 acts on the most significant bit
    ParamCircuit r(2);
    r.add_rotation(GateKind::Rx, 0);
    const std::vector<double> th{0.8};
    const auto expect_r = kron(cplx(std::cos(0.4), 0) * testing::I2() + cplx(0, -std::sin(0.4)) * testing::X2(),
                               testing::I2());
    CHECK(testing::max_abs_diff(r.unitary(th), expect_r) < 1e-15);
    CHECK_THROWS_AS(c.add_cx(0, 2), std::out_of_range);
}

TEST_CASE("layered unitaries are unitary and 4pi periodic") {
    std::mt19937_64 rng(21);
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto c = ParamCircuit::layered_unitary(n, 2);
        auto th = random_angles(c.n_params(), rng);
        const auto u = c.unitary(th);
        const std::size_t d = std::size_t{1} << n;
        CHECK(testing::max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(d)) < 1e-10);
        th[1] += 4 * std::numbers::pi;
        CHECK(testing::max_abs_diff(c.unitary(th), u) < 1e-10);
        CHECK(testing::max_abs_diff(build_layered_unitary(n, 2, th), u) < 1e-10);
    }
    CHECK_THROWS_AS(build_layered_unitary(2, 2, std::vector<double>(3)), std::invalid_argument);
}

TEST_CASE("Born machine distributions") {
    const auto born = ParamCircuit::qcbm(2, 2);
    CHECK(qcbm_distribution(born, std::vector<double>(born.n_params(), 0.0)) ==
          std::vector<double>{1.0, 0.0, 0.0, 0.0});

    ParamCircuit one(1);
    one.add_rotation(GateKind::Ry, 0);
    const auto half = qcbm_distribution(one, std::vector<double>{std::numbers::pi / 2});
    CHECK(half[0] == doctest::Approx(0.5));
    CHECK(half[1] == doctest::Approx(0.5));

    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        const auto p = qcbm_distribution(born, random_angles(born.n_params(), rng));
        double s = 0.0;
        for (double x : p) {
            CHECK(x >= 0.0);
            s += x;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("purification ansatz") {
    std::mt19937_64 rng(13);
    SUBCASE("no reference qubits gives a pure state") {
        auto s = PurificationState::layered(2, 0, 2);
        s.theta = random_angles(s.circuit.n_params(), rng);
        const auto rho = realize_density(s).matrix();
        CHECK((rho * rho).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("rank bounded by the reference dimension") {
        auto s = PurificationState::layered(2, 1, 2);
        s.theta = random_angles(s.circuit.n_params(), rng);
        const auto ev = eigvals_hermitian(realize_density(s).matrix());
        CHECK(std::abs(ev[0]) < 1e-10);
        CHECK(std::abs(ev[1]) < 1e-10);
    }
    SUBCASE("matches an explicit partial trace") {
        auto s = PurificationState::layered(1, 1, 2);
        s.theta = random_angles(s.circuit.n_params(), rng);
        const auto psi = s.circuit.run_from_zero(s.theta);
        ComplexMatrix ref(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t r = 0; r < 2; ++r)
                    ref(i, j) += psi[r * 2 + i] * std::conj(psi[r * 2 + j]);
        CHECK(testing::max_abs_diff(purification_matrix(s), ref) < 1e-14);
    }
    SUBCASE("realized states are valid density matrices") {
        auto s = PurificationState::layered(2, 2, 2);
        for (int t = 0; t < 1000; ++t) {
            s.theta = random_angles(s.circuit.n_params(), rng);
            REQUIRE_NOTHROW((void)DensityMatrix(HermitianMatrix(purification_matrix(s), 1e-10)));
        }
    }
}

TEST_CASE("convex-combination ansatz") {
    std::mt19937_64 rng(17);
    auto s = ConvexCombinationState::layered(2, 2, 2);
    for (int t = 0; t < 50; ++t) {
        s.phi = random_angles(s.born_circuit.n_params(), rng);
        s.gamma = random_angles(s.basis_circuit.n_params(), rng);
        const auto rho = convex_combination_matrix(s);
        auto p = qcbm_distribution(s.born_circuit, s.phi);
        std::sort(p.begin(), p.end());
        const auto ev = eigvals_hermitian(rho);
        double purity = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(ev[i] == doctest::Approx(p[i]).epsilon(1e-9));
            purity += p[i] * p[i];
        }
        CHECK((rho * rho).trace().real() == doctest::Approx(purity).epsilon(1e-9));
        CHECK(rho.trace().real() == doctest::Approx(1.0));
    }
}

TEST_CASE("sampling the convex combination") {
    std::mt19937_64 rng(23);
    auto s = ConvexCombinationState::layered(2, 2, 2);
    s.phi.assign(s.born_circuit.n_params(), 0.0);
    s.gamma = random_angles(s.basis_circuit.n_params(), rng);
    for (int t = 0; t < 20; ++t) {
        CHECK(sample_cc(s, rng).index == 0);
    }

    s.phi = random_angles(s.born_circuit.n_params(), rng);
    const auto p = qcbm_distribution(s.born_circuit, s.phi);
    const auto u = s.basis_circuit.unitary(s.gamma);
    const std::size_t draws = 100000;
    std::vector<double> counts(4, 0.0);
    for (std::size_t t = 0; t < draws; ++t) {
        const auto smp = sample_cc(s, rng);
        counts[smp.index] += 1.0;
        if (t < 10) {
            for (std::size_t i = 0; i < 4; ++i) {
                CHECK(std::abs(smp.state[i] - u(i, smp.index)) < 1e-12);
            }
        }
    }
    double chi2 = 0.0;
    for (std::size_t x = 0; x < 4; ++x) {
        const double e = p[x] * draws;
        if (e > 0) {
            chi2 += (counts[x] - e) * (counts[x] - e) / e;
        }
    }
    // 3 degrees of freedom, 99.9% quantile 16.27
    CHECK(chi2 < 16.27);
}

TEST_CASE("Born convex combination as a purification") {
    std::mt19937_64 rng(29);
    for (std::size_t n = 1; n <= 2; ++n) {
        auto s = ConvexCombinationState::layered(n, 2, 2);
        s.phi.assign(s.born_circuit.n_params(), 0.0);
        s.gamma.assign(s.basis_circuit.n_params(), 0.0);
        const auto zero_state = purification_matrix(born_cc_as_purification(s));
        CHECK(std::abs(zero_state(0, 0) - cplx(1, 0)) < 1e-12);

        for (int t = 0; t < 20; ++t) {
            s.phi = random_angles(s.born_circuit.n_params(), rng);
            s.gamma = random_angles(s.basis_circuit.n_params(), rng);
            const auto pur = born_cc_as_purification(s);
            CHECK(pur.n_reference == n);
            CHECK(hs_distance(purification_matrix(pur), convex_combination_matrix(s)) < 1e-9);
        }
    }
    // uniform Born output: Ry(pi/2) on each qubit
    ConvexCombinationState u;
    u.born_circuit = ParamCircuit(2);
    u.born_circuit.add_rotation(GateKind::Ry, 0);
    u.born_circuit.add_rotation(GateKind::Ry, 1);
    u.basis_circuit = ParamCircuit::layered_unitary(2, 1);
    u.phi = {std::numbers::pi / 2, std::numbers::pi / 2};
    u.gamma = random_angles(u.basis_circuit.n_params(), rng);
    CHECK(testing::max_abs_diff(convex_combination_matrix(u), 0.25 * ComplexMatrix::identity(4)) < 1e-12);
}

TEST_CASE("frozen random inputs are reproducible") {
    const auto a = random_purified_state(2, 2, 101);
    const auto b = random_purified_state(2, 2, 101);
    CHECK(testing::max_abs_diff(a.matrix(), b.matrix()) == 0.0);
    CHECK(testing::max_abs_diff(a.matrix(), random_purified_state(2, 2, 202).matrix()) > 1e-3);
    const auto p = random_born_distribution(2, 2, 1001);
    CHECK(p == random_born_distribution(2, 2, 1001));
}

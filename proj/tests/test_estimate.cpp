#include "doctest.h"
#include "helpers.hpp"

#include "qslack/estimate.hpp"

#include <cmath>
#include <numbers>

using namespace qslack;

namespace {

struct Stats {
    double mean = 0.0;
    double sd = 0.0;
};

template <class F> Stats repeat(F &&draw, std::size_t times) {
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t t = 0; t < times; ++t) {
        const double v = draw();
        s += v;
        s2 += v * v;
    }
    const double m = s / double(times);
    return {m, std::sqrt(std::max(0.0, s2 / double(times) - m * m))};
}

} // namespace

TEST_CASE("exact Pauli expectations") {
    std::mt19937_64 rng(0);
    const auto zero = DensityMatrix::pure(std::vector<cplx>{1, 0});
    const auto e = estimate_pauli_expect(zero.matrix(), PauliString::parse("Z"), ShotModel::exact(), rng);
    CHECK(e.value == doctest::Approx(1.0));
    CHECK(e.std_err == 0.0);
    const auto rho = testing::random_density(4, 2, rng);
    CHECK(estimate_pauli_expect(rho, PauliString::parse("II"), ShotModel::exact(), rng).value ==
          doctest::Approx(1.0));
}

TEST_CASE("shot-noise Pauli expectation concentrates") {
    std::mt19937_64 rng(31);
    const auto rho = testing::random_density(4, 2, rng);
    const auto p = PauliString::parse("XZ");
    const double m = (dense(p) * rho).trace().real();
    const double n = 1e4;
    const double bound = 5 * std::sqrt((1 - m * m) / n);
    int inside = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto e = estimate_pauli_expect(rho, p, ShotModel::with_shots(10000), rng);
        inside += std::abs(e.value - m) <= bound;
    }
    CHECK(inside >= 990);
}

TEST_CASE("swap-test overlaps") {
    std::mt19937_64 rng(1);
    const auto zero = DensityMatrix::pure(std::vector<cplx>{1, 0}).matrix();
    const auto one = DensityMatrix::pure(std::vector<cplx>{0, 1}).matrix();
    const auto mixed = DensityMatrix::maximally_mixed(2).matrix();
    CHECK(estimate_overlap_swap(zero, zero, ShotModel::exact(), rng).value == doctest::Approx(1.0));
    CHECK(estimate_overlap_swap(zero, one, ShotModel::exact(), rng).value == doctest::Approx(0.0));
    CHECK(estimate_overlap_swap(mixed, mixed, ShotModel::exact(), rng).value == doctest::Approx(0.5));
    CHECK_THROWS_AS(estimate_overlap_swap(zero, ComplexMatrix::identity(4), ShotModel::exact(), rng),
                    DimensionError);
}

TEST_CASE("Loschmidt echo matches the swap test") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
    auto a = ConvexCombinationState::layered(2, 2, 2);
    auto b = ConvexCombinationState::layered(2, 2, 2);
    const auto fill = [&](std::vector<double> &v, std::size_t k) {
        v.resize(k);
        for (auto &x : v) {
            x = u(rng);
        }
    };
    for (int t = 0; t < 200; ++t) {
        fill(a.phi, a.born_circuit.n_params());
        fill(a.gamma, a.basis_circuit.n_params());
        fill(b.phi, b.born_circuit.n_params());
        fill(b.gamma, b.basis_circuit.n_params());
        const auto ra = convex_combination_matrix(a);
        const auto rb = convex_combination_matrix(b);
        const double ref = (ra * rb).trace().real();
        REQUIRE(estimate_overlap_loschmidt(a, b, ShotModel::exact(), rng).value == doctest::Approx(ref).epsilon(1e-10));
        REQUIRE(estimate_overlap_loschmidt(a, rb, ShotModel::exact(), rng).value == doctest::Approx(ref).epsilon(1e-10));
        REQUIRE(estimate_overlap_swap(ra, rb, ShotModel::exact(), rng).value == doctest::Approx(ref).epsilon(1e-10));
    }
    // point mass with equal gamma
    a.phi.assign(a.born_circuit.n_params(), 0.0);
    b = a;
    CHECK(estimate_overlap_loschmidt(a, b, ShotModel::exact(), rng).value == doctest::Approx(1.0));
}

TEST_CASE("collision test") {
    std::mt19937_64 rng(2);
    const std::vector<double> point{1, 0, 0, 0};
    const std::vector<double> uniform{0.25, 0.25, 0.25, 0.25};
    const std::vector<double> other{0, 0.5, 0.5, 0};
    CHECK(estimate_collision(point, point, ShotModel::exact(), rng).value == doctest::Approx(1.0));
    CHECK(estimate_collision(uniform, uniform, ShotModel::exact(), rng).value == doctest::Approx(0.25));
    CHECK(estimate_collision(point, other, ShotModel::exact(), rng).value == doctest::Approx(0.0));
    CHECK(estimate_collision(point, other, ShotModel::with_shots(100), rng).value == doctest::Approx(0.0));
    CHECK_THROWS_AS(estimate_collision(point, std::vector<double>{1, 0}, ShotModel::exact(), rng), DimensionError);
}

TEST_CASE("Walsh estimates") {
    std::mt19937_64 rng(3);
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    // s_{10} = (1,1,-1,-1)
    CHECK(estimate_walsh(p, WalshString::parse("10"), ShotModel::exact(), rng).value == doctest::Approx(-0.4));
    const auto st = repeat([&] { return estimate_walsh(p, WalshString::parse("10"), ShotModel::with_shots(1000), rng).value; }, 2000);
    CHECK(std::abs(st.mean + 0.4) < 3 * st.sd / std::sqrt(2000.0));
}

TEST_CASE("emulated +-1 means are unbiased and calibrated") {
    std::mt19937_64 rng(41);
    for (double m : {-0.7, 0.0, 0.3, 0.95}) {
        const std::uint64_t n = 10000;
        const auto st = repeat([&] { return emulate_pm1(m, n, rng).value; }, 10000);
        const double sd = std::sqrt((1 - m * m) / double(n));
        CHECK(std::abs(st.mean - m) < 3 * sd / 100.0);
        CHECK(std::abs(st.sd - sd) < 0.1 * sd);
    }
    const auto e = emulate_pm1(1.0, 500, rng);
    CHECK(e.value == 1.0);
    CHECK(e.n_shots == 500);
}

TEST_CASE("Hoeffding sample counts") {
    CHECK(hoeffding_shots(0.1, 0.05) == 185);
    CHECK(hoeffding_shots(1.0, 2.0 / std::exp(2.0)) == 1);
    const double ratio = double(hoeffding_shots(0.0005, 0.05)) / double(hoeffding_shots(0.001, 0.05));
    CHECK(ratio == doctest::Approx(4.0).epsilon(1e-5));
    CHECK_THROWS_AS(hoeffding_shots(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(hoeffding_shots(0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ShotModel::with_shots(0), std::invalid_argument);
}

#include "doctest.h"
#include "dense_refs.hpp"
#include "helpers.hpp"

#include "qslack/oracle.hpp"
#include "qslack/problems.hpp"

#include <cmath>

using namespace qslack;

TEST_CASE("trace distance") {
    std::mt19937_64 rng(1);
    const auto rho = testing::random_density(4, 2, rng);
    CHECK(exact_trace_distance(rho, rho) == doctest::Approx(0.0));
    CHECK(exact_trace_distance(testing::proj(0), testing::proj(1)) == doctest::Approx(1.0));
    const auto plus = testing::mat2(0.5, 0.5, 0.5, 0.5);
    CHECK(std::abs(exact_trace_distance(testing::proj(0), plus) - 0.70710678118654752) < 1e-12);
    for (int t = 0; t < 100; ++t) {
        const double td = exact_trace_distance(testing::random_density(4, 3, rng), testing::random_density(4, 1, rng));
        CHECK(td >= 0.0);
        CHECK(td <= 1.0 + 1e-12);
    }
}

TEST_CASE("root fidelity") {
    std::mt19937_64 rng(2);
    const auto rho = testing::random_density(4, 3, rng);
    CHECK(exact_root_fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));
    const double c = std::cos(0.3), s = std::sin(0.3);
    const auto psi = DensityMatrix::pure(std::vector<cplx>{1, 0}).matrix();
    const auto phi = DensityMatrix::pure(std::vector<cplx>{c, cplx(0, s)}).matrix();
    CHECK(exact_root_fidelity(psi, phi) == doctest::Approx(c).epsilon(1e-9));
    CHECK(exact_root_fidelity(0.5 * ComplexMatrix::identity(2), psi) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("Fuchs-van de Graaf bounds") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t d = t % 2 ? 2 : 4;
        const auto rho = testing::random_density(d, 1 + t % d, rng);
        const auto sigma = testing::random_density(d, 1 + (t / 2) % d, rng);
        const double f = exact_root_fidelity(rho, sigma);
        const double td = exact_trace_distance(rho, sigma);
        REQUIRE(1 - f <= td + 1e-7);
        REQUIRE(td <= std::sqrt(std::max(0.0, 1 - f * f)) + 1e-7);
    }
}

TEST_CASE("negativity") {
    const double s = 1 / std::sqrt(2.0);
    const auto bell = DensityMatrix::pure(std::vector<cplx>{s, 0, 0, s}).matrix();
    CHECK(std::abs(exact_negativity(bell, 2, 2) - 2.0) < 1e-12);
    std::mt19937_64 rng(4);
    const auto prod = kron(testing::random_density(2, 2, rng), testing::random_density(2, 1, rng));
    CHECK(exact_negativity(prod, 2, 2) == doctest::Approx(1.0));
    ComplexMatrix mix(4, 4);
    mix(0, 0) = 0.5;
    mix(3, 3) = 0.5;
    CHECK(exact_negativity(mix, 2, 2) == doctest::Approx(1.0));
    for (int t = 0; t < 100; ++t) {
        CHECK(exact_negativity(testing::random_density(4, 2, rng), 2, 2) >= 1.0 - 1e-12);
    }
}

TEST_CASE("total variation distance") {
    CHECK(exact_tvd(std::vector<double>{0.3, 0.7}, std::vector<double>{0.3, 0.7}) == doctest::Approx(0.0));
    CHECK(exact_tvd(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == doctest::Approx(1.0));
    CHECK(exact_tvd(std::vector<double>{0.7, 0.3}, std::vector<double>{0.5, 0.5}) == doctest::Approx(0.2));
}

TEST_CASE("constrained Hamiltonian SDP value") {
    const auto inst = ConstrainedHamiltonian::reference_instance();
    const auto r = sdp_cham_value(inst.h, inst.a, inst.b);
    CHECK(r.method == "eigen-dual-search");
    CHECK(std::abs(r.value + 2.2097) < 1e-3);
    CHECK_FALSE(r.boundary_hit);
    CHECK(r.multipliers.size() == 2);

    const std::vector<double> none;
    const auto free = sdp_cham_value(inst.h, {}, none);
    CHECK(std::abs(free.value + std::sqrt(5.0)) < 1e-9);

    // weak duality: every feasible state has energy at least the dual value
    std::mt19937_64 rng(5);
    const auto hd = observable_dense(inst.h);
    const auto a0 = observable_dense(inst.a[0]);
    const auto a1 = observable_dense(inst.a[1]);
    int feasible = 0;
    for (int t = 0; t < 10000; ++t) {
        const auto rho = testing::random_density(4, 1 + t % 4, rng);
        if (testing::re_trace(a0, rho) >= inst.b[0] && testing::re_trace(a1, rho) >= inst.b[1]) {
            ++feasible;
            REQUIRE(testing::re_trace(hd, rho) >= r.value - 1e-6);
        }
    }
    CHECK(feasible > 100);
    const std::vector<PauliObservable> four(4, inst.a[0]);
    CHECK_THROWS(sdp_cham_value(inst.h, four, std::vector<double>(4, 0.0)));
}

TEST_CASE("classical constrained Hamiltonian LP value") {
    const auto inst = ClassicalHamiltonian::reference_instance();
    const auto r = lp_classical_cham_value(inst.h, inst.a, inst.b);
    CHECK(r.method == "lp-vertex");
    CHECK(r.value == doctest::Approx(-13.0 / 35.0).epsilon(1e-9));
    CHECK(r.residual < 1e-4);

    const std::vector<double> none;
    CHECK(lp_classical_cham_value(inst.h, {}, none).value == doctest::Approx(-1.0));

    // inactive constraint: minimum entry of h satisfies it
    const std::vector<double> h{3.0, -2.0, 1.0, 0.5};
    const std::vector<std::vector<double>> a{{1.0, 1.0, 1.0, 1.0}};
    const std::vector<double> b{0.5};
    CHECK(lp_vertex_enumeration(h, a, b).value == doctest::Approx(-2.0));
}

TEST_CASE("LP vertex enumeration against brute force") {
    // min h.p on the simplex with one cut, checked on a fine grid at dim 3
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const std::vector<double> h{u(rng), u(rng), u(rng)};
        const std::vector<std::vector<double>> a{{u(rng), u(rng), u(rng)}};
        const std::vector<double> b{0.3 * u(rng)};
        double best = 1e9;
        const int steps = 400;
        for (int i = 0; i <= steps; ++i) {
            for (int j = 0; i + j <= steps; ++j) {
                const double p0 = double(i) / steps, p1 = double(j) / steps, p2 = 1 - p0 - p1;
                if (a[0][0] * p0 + a[0][1] * p1 + a[0][2] * p2 >= b[0]) {
                    best = std::min(best, h[0] * p0 + h[1] * p1 + h[2] * p2);
                }
            }
        }
        if (best > 1e8) {
            continue;
        }
        const auto r = lp_vertex_enumeration(h, a, b);
        CHECK(r.value <= best + 1e-12);
        CHECK(r.value >= best - 1e-2);
    }
}

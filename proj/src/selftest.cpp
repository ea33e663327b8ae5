#include "qslack/selftest.hpp"

#include "qslack/optimizer.hpp"
#include "qslack/oracle.hpp"
#include "qslack/problems.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace qslack {

namespace {

struct Check {
    std::string name;
    std::function<double()> measure; // returns the deviation
    double tolerance;
};

std::vector<cplx> plus_state() {
    const double h = 1.0 / std::sqrt(2.0);
    return {h, h};
}

} // namespace

bool run_selftest(std::ostream &out) {
    const std::vector<Check> checks{
        {"trace distance |0> vs |+>",
         [] {
             const auto a = DensityMatrix::pure(std::vector<cplx>{1.0, 0.0});
             const auto b = DensityMatrix::pure(plus_state());
             return std::abs(exact_trace_distance(a, b) - 1.0 / std::sqrt(2.0));
         },
         1e-9},
        {"bell negativity",
         [] {
             const double h = 1.0 / std::sqrt(2.0);
             const auto bell = DensityMatrix::pure(std::vector<cplx>{h, 0.0, 0.0, h});
             return std::abs(exact_negativity(bell, 2, 2) - 2.0);
         },
         1e-9},
        {"constrained hamiltonian oracle",
         [] {
             const auto inst = ConstrainedHamiltonian::reference_instance();
             return std::abs(sdp_cham_value(inst.h, inst.a, inst.b).value + 2.2097);
         },
         1e-3},
        {"unconstrained reduction",
         [] {
             const auto inst = ConstrainedHamiltonian::reference_instance();
             return std::abs(sdp_cham_value(inst.h, {}, {}).value + std::sqrt(5.0));
         },
         1e-9},
        {"parameter shift vs finite difference",
         [] {
             const auto rho = random_purified_state(1, 2, 7);
             const auto sigma = random_purified_state(1, 2, 8);
             const auto obj = make_trace_distance(true, rho, sigma, AnsatzSpec{}, 10.0);
             std::mt19937_64 rng(3);
             const auto x = obj->initial_parameters(rng);
             const auto g = obj->exact_gradient(x);
             double worst = 0.0;
             for (std::size_t k = 0; k < x.size(); ++k) {
                 auto xp = x;
                 auto xm = x;
                 xp[k] += 1e-5;
                 xm[k] -= 1e-5;
                 const double fd = (obj->evaluate_exact(xp).value - obj->evaluate_exact(xm).value) / 2e-5;
                 worst = std::max(worst, std::abs(fd - g[k]));
             }
             return worst;
         },
         1e-6},
        {"vqe reduction converges",
         [] {
             ConstrainedHamiltonian inst{PauliObservable::parse("1.0 Z"), {}, {}};
             const auto obj = make_cham(false, inst, AnsatzSpec{}, 1.0);
             std::mt19937_64 rng(1);
             SpsaConfig cfg;
             cfg.max_iters = 2000;
             cfg.learning_rate = 0.1;
             cfg.seed = 9;
             const auto rec = run_optimization(*obj, obj->initial_parameters(rng), cfg,
                                               LrSchedule::regression(200), -1.0);
             return rec.last().error;
         },
         1e-3},
    };
    bool ok = true;
    for (const auto &c : checks) {
        const double dev = c.measure();
        const bool pass = dev <= c.tolerance;
        ok &= pass;
        char line[160];
        std::snprintf(line, sizeof line, "%s  %-40s deviation %.3e (tolerance %.0e)\n", pass ? "PASS" : "FAIL",
                      c.name.c_str(), dev, c.tolerance);
        out << line;
    }
    return ok;
}

} // namespace qslack

#include "doctest.h"

#include "qslack/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qslack;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path &p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            row.push_back(std::stod(cell));
        }
        rows.push_back(row);
    }
    return rows;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

fs::path scratch(const std::string &name) {
    auto dir = fs::temp_directory_path() / ("qslack_test_" + name);
    fs::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("minimal config takes table defaults") {
    const auto cfg = parse_config(R"({"problem": "tvd_dual"})");
    CHECK(cfg.problem == ProblemTag::TvdDual);
    CHECK(cfg.n_qubits == 2);
    CHECK(cfg.ansatz.born_layers == 2);
    CHECK(cfg.penalty == 100.0);
    CHECK(cfg.spsa.normalize);
    CHECK(cfg.shots.is_exact());
    CHECK(cfg.n_runs == 5);
}

TEST_CASE("config errors") {
    try {
        (void)parse_config("{\n  \"problem\": \"tvd_dual\",\n  \"penalty\": \n}");
        FAIL("expected a parse error");
    } catch (const ConfigError &e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    CHECK_THROWS_AS((void)parse_config(R"({"problem": "tvd_dual", "penalty": -1})"), ConfigError);
    CHECK_THROWS_AS((void)parse_config(R"({"problem": "nope"})"), ConfigError);
    CHECK_THROWS_AS((void)parse_config(R"({"penalty": 1})"), ConfigError);
    CHECK_THROWS_AS((void)parse_config(R"({"problem": "tvd_dual", "bogus": 1})"), ConfigError);
    CHECK_THROWS_AS((void)parse_config(R"({"problem": "tvd_dual", "n_qubits": 9})"), ConfigError);
    CHECK_THROWS_AS((void)parse_config(R"({"problem": "tvd_dual", "optimizer": {"schedule": {"kind": "halve_every", "period": 150}}})"),
                    ConfigError);
    CHECK_THROWS_AS((void)parse_config(R"({"problem": "tvd_dual", "inputs": {"p": [0.5, 0.6, 0, 0]}})"), ConfigError);
}

TEST_CASE("single short run writes one row per iteration") {
    auto cfg = parse_config(R"({"problem": "tvd_dual", "n_runs": 1, "optimizer": {"max_iters": 10}, "output_dir": "short"})");
    const auto root = scratch("short");
    const auto res = run_experiment(cfg, root);
    const auto rows = read_csv(root / "short" / "run_0.csv");
    REQUIRE(rows.size() == 10);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i][0] == doctest::Approx(double(i + 1)));
        CHECK(rows[i].size() == 5);
    }
    CHECK(fs::exists(root / "short" / "summary.csv"));
    CHECK(fs::exists(root / "short" / "runs.csv"));
    CHECK(fs::exists(root / "short" / "convergence.svg"));
    CHECK(res.all_completed());
    fs::remove_all(root);
}

TEST_CASE("same seed gives byte-identical output") {
    const std::string text = R"({"problem": "trace_distance_dual", "n_runs": 3, "seed": 7,
        "optimizer": {"max_iters": 200}, "output_dir": "det"})";
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    (void)run_experiment(parse_config(text), a);
    (void)run_experiment(parse_config(text), b);
    for (const char *f : {"run_0.csv", "run_1.csv", "run_2.csv", "summary.csv", "runs.csv", "convergence.svg"}) {
        CAPTURE(f);
        CHECK(slurp(a / "det" / f) == slurp(b / "det" / f));
    }
    const auto c = scratch("det_c");
    auto other = parse_config(text);
    other.seed = 8;
    (void)run_experiment(other, c);
    CHECK(slurp(a / "det" / "run_0.csv") != slurp(c / "det" / "run_0.csv"));
    for (const auto &d : {a, b, c}) {
        fs::remove_all(d);
    }
}

TEST_CASE("summary medians agree with the run files") {
    const auto root = scratch("summary");
    (void)run_experiment(parse_config(R"({"problem": "tvd_primal", "n_runs": 4, "optimizer": {"max_iters": 50}, "output_dir": "s"})"),
                         root);
    std::vector<std::vector<std::vector<double>>> runs;
    for (int k = 0; k < 4; ++k) {
        runs.push_back(read_csv(root / "s" / ("run_" + std::to_string(k) + ".csv")));
    }
    const auto summary = read_csv(root / "s" / "summary.csv");
    REQUIRE(summary.size() == 50);
    for (std::size_t i = 0; i < summary.size(); ++i) {
        std::vector<double> col;
        for (const auto &r : runs) {
            col.push_back(r[i][1]);
        }
        CHECK(summary[i][1] == doctest::Approx(median_of(col)).epsilon(1e-12));
        CHECK(summary[i][2] <= summary[i][1] + 1e-15);
        CHECK(summary[i][3] >= summary[i][1] - 1e-15);
    }
    fs::remove_all(root);
}

TEST_CASE("plot") {
    CHECK_THROWS_AS((void)emit_plot({}, std::nullopt), std::invalid_argument);
    const std::vector<AggregatePoint> one{{1, 0.5, 0.4, 0.6}};
    const auto svg1 = emit_plot(one, 0.8);
    CHECK(svg1.find("<svg") == 0);
    CHECK(svg1.find("class=\"oracle\"") != std::string::npos);

    const std::vector<AggregatePoint> pts{{1, 0.2, 0.1, 0.3}, {2, 0.4, 0.3, 0.5}, {3, 0.5, 0.45, 0.55}};
    const auto svg = emit_plot(pts, 0.9, "t");
    const auto at = svg.find("range ");
    REQUIRE(at != std::string::npos);
    double x0, x1, y0, y1;
    REQUIRE(std::sscanf(svg.c_str() + at, "range x0=%lf x1=%lf y0=%lf y1=%lf", &x0, &x1, &y0, &y1) == 4);
    CHECK(x0 <= 1.0);
    CHECK(x1 >= 3.0);
    CHECK(y0 <= 0.1);
    CHECK(y1 >= 0.9);
    CHECK(emit_plot(pts, std::nullopt).find("class=\"oracle\"") == std::string::npos);
}

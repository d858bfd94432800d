#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sysid/bench.hpp"
#include "sysid/errors.hpp"

using namespace sysid;
using namespace sysid::bench;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.n = 2;
    cfg.entry_low = -2.0;
    cfg.entry_high = 2.0;
    cfg.target_rho = 0.6;
    cfg.w_bar = 1.0;
    cfg.T_grid = {20, 40, 80};
    cfg.trials = 6;
    cfg.methods = {BenchMethod::OLS, BenchMethod::CLS, BenchMethod::SME_DIAMETER};
    cfg.diameter_directions = 20;
    cfg.master_seed = 313;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("config validation catches bad grids") {
    auto cfg = tiny_config();
    cfg.T_grid = {40, 20};
    CHECK_THROWS_AS(cfg.validate(), InvalidParam);
    cfg = tiny_config();
    cfg.T_grid = {2, 20};  // below n + 1
    CHECK_THROWS_AS(cfg.validate(), InvalidParam);
    cfg = tiny_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidParam);
}

TEST_CASE("experiment output is identical across thread counts") {
    auto cfg = tiny_config();
    auto r1 = run_convergence_experiment(cfg, 1);
    auto r4 = run_convergence_experiment(cfg, 4);
    REQUIRE(r1.curves.size() == r4.curves.size());
    for (std::size_t c = 0; c < r1.curves.size(); ++c)
        CHECK(r1.curves[c].values == r4.curves[c].values);  // bitwise
}

TEST_CASE("prefix reuse keeps per-trial curves coherent") {
    // The diameter shrinks (weakly) as more of the same trajectory is used.
    auto cfg = tiny_config();
    auto rep = run_convergence_experiment(cfg, 2);
    for (const auto& curve : rep.curves) {
        if (curve.method != BenchMethod::SME_DIAMETER) continue;
        for (const auto& trial : curve.values)
            for (std::size_t g = 1; g < trial.size(); ++g) {
                if (std::isnan(trial[g - 1]) || std::isnan(trial[g])) continue;
                CHECK(trial[g] <= trial[g - 1] * (1.0 + 1e-9));
            }
    }
}

TEST_CASE("ols error is invariant to the noise scale") {
    // x_0 = 0 makes the whole trajectory linear in the noise, so rescaling
    // w_bar rescales every state and leaves the ols estimate unchanged.
    auto cfg = tiny_config();
    cfg.methods = {BenchMethod::OLS};
    cfg.T_grid = {20, 40};
    cfg.trials = 3;
    cfg.w_bar = 1e-9;
    auto tiny_noise = run_convergence_experiment(cfg, 1);
    cfg.w_bar = 1.0;
    auto unit_noise = run_convergence_experiment(cfg, 1);
    for (std::size_t t = 0; t < cfg.trials; ++t)
        for (std::size_t g = 0; g < cfg.T_grid.size(); ++g)
            CHECK(tiny_noise.curves[0].values[t][g] ==
                  doctest::Approx(unit_noise.curves[0].values[t][g]).epsilon(1e-6));
}

TEST_CASE("csv layout: data rows then aggregate rows") {
    auto cfg = tiny_config();
    auto rep = run_convergence_experiment(cfg, 2);
    const auto path = tmp_path("sysid_bench_layout.csv");
    emit_csv(rep, path);
    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "method,trial,T,value");
    std::size_t data = 0, median = 0, mean = 0;
    while (std::getline(in, line)) {
        if (line.find(",MEDIAN,") != std::string::npos)
            ++median;
        else if (line.find(",MEAN,") != std::string::npos)
            ++mean;
        else
            ++data;
    }
    std::size_t missing = 0, cells = 0;
    for (const auto& c : rep.curves) {
        missing += c.missing_cells;
        cells += cfg.trials * cfg.T_grid.size();
    }
    CHECK(data == cells - missing);
    CHECK(median == cfg.methods.size() * cfg.T_grid.size());
    CHECK(mean == cfg.methods.size() * cfg.T_grid.size());
    std::remove(path.c_str());
}

TEST_CASE("svg plot is a self-contained xml document") {
    auto cfg = tiny_config();
    auto rep = run_convergence_experiment(cfg, 2);
    const auto path = tmp_path("sysid_bench_plot.svg");
    emit_plot(rep, path);
    const auto svg = slurp(path);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    // every method appears in the legend with a fitted slope
    for (auto m : cfg.methods)
        CHECK(svg.find(bench_method_name(m) + " (slope ") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("parse_bench_config round trip and error paths") {
    const std::string good = R"({
        "system": {"n": 2, "entry_low": -2.0, "entry_high": 2.0, "target_rho": 0.6},
        "noise": {"kind": "uniform", "w_bar": 1.0},
        "experiment": {"T_grid": [20, 40], "trials": 4, "methods": ["OLS", "CLS"]},
        "seed": 99,
        "out": {"csv": "/tmp/a.csv", "svg": "/tmp/a.svg"}
    })";
    auto job = parse_bench_config(good);
    CHECK(job.config.n == 2);
    CHECK(job.config.master_seed == 99);
    CHECK(job.config.methods.size() == 2);
    CHECK(job.csv_path == "/tmp/a.csv");

    const std::string missing_wbar = R"({
        "system": {"n": 2, "entry_low": -2.0, "entry_high": 2.0, "target_rho": 0.6},
        "noise": {"kind": "uniform"},
        "experiment": {"T_grid": [20], "trials": 4, "methods": ["OLS"]},
        "out": {"csv": "/tmp/a.csv", "svg": "/tmp/a.svg"}
    })";
    try {
        parse_bench_config(missing_wbar);
        FAIL("expected InvalidParam");
    } catch (const InvalidParam& e) {
        CHECK(std::string(e.what()).find("noise.w_bar") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_bench_config("not json"), InvalidParam);
}

TEST_CASE("thm1 overlay is present by default and decays like 1/T") {
    auto cfg = tiny_config();
    auto rep = run_convergence_experiment(cfg, 2);
    REQUIRE(rep.thm1_curve.size() == cfg.T_grid.size());
    const double r01 = rep.thm1_curve[0].second / rep.thm1_curve[1].second;
    CHECK(r01 == doctest::Approx(double(cfg.T_grid[1]) / double(cfg.T_grid[0])).epsilon(1e-12));
}

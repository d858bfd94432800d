#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sysid/estimators.hpp"
#include "sysid/system.hpp"

namespace sysid {
namespace bench {

enum class BenchMethod { OLS, OLS_SME, CLS, SME_DIAMETER };

std::string bench_method_name(BenchMethod m);

struct ExperimentConfig {
    std::size_t n = 4;
    double entry_low = -5.0;
    double entry_high = 5.0;
    double target_rho = 0.7;
    NoiseKind noise_kind = NoiseKind::Uniform;
    double w_bar = 2.0;
    double sigma = 0.0;  // TruncatedGaussian only
    std::vector<std::size_t> T_grid;
    std::size_t trials = 50;
    std::vector<BenchMethod> methods;
    ErrorNorm error_norm = ErrorNorm::Spectral;
    std::size_t diameter_directions = 200;
    std::uint64_t master_seed = 0;
    bool overlay_thm1 = true;
    double overlay_delta = 0.99;

    /// Throws InvalidParam when an invariant fails (grid not increasing,
    /// trials = 0, min T below n + 1, ...).
    void validate() const;
};

struct Aggregate {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double mean = 0.0;
    std::size_t count = 0;  // non-missing cells
};

struct ConvergenceCurve {
    BenchMethod method;
    // values[trial][grid index]; NaN marks a failed cell.
    std::vector<std::vector<double>> values;
    std::vector<Aggregate> aggregates;  // one per grid point
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t missing_cells = 0;
};

struct BenchReport {
    ExperimentConfig config;
    std::vector<ConvergenceCurve> curves;
    // Theorem 1 lower-bound overlay, empty when disabled.
    std::vector<std::pair<std::size_t, double>> thm1_curve;
    // Index of the first grid point used for slope fitting (asymptotic cut:
    // the upper half of the grid).
    std::size_t slope_fit_start = 0;
    double wall_seconds = 0.0;
};

/// One long trajectory per trial, every method evaluated on each prefix in
/// T_grid. Deterministic for a fixed config regardless of `threads`
/// (0 = hardware concurrency).
BenchReport run_convergence_experiment(const ExperimentConfig& cfg, std::size_t threads = 0);

/// Long-format CSV: `method,trial,T,value` data rows (failed cells omitted),
/// then `method,MEDIAN,T,value` and `method,MEAN,T,value` aggregate rows.
void emit_csv(const BenchReport& report, const std::string& path);

/// Self-contained SVG: log-log median polylines, interquartile bands, the
/// optional lower-bound reference line, legend with fitted slopes.
void emit_plot(const BenchReport& report, const std::string& path);

struct BenchJob {
    ExperimentConfig config;
    std::string csv_path;
    std::string svg_path;
};

/// Parse the bench JSON config document; InvalidParam messages carry the
/// offending field path.
BenchJob parse_bench_config(const std::string& json_text);

}  // namespace bench
}  // namespace sysid

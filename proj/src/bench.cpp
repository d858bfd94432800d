#include "sysid/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "sysid/errors.hpp"
#include "sysid/theory.hpp"

namespace sysid {
namespace bench {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Substream purpose tags, one per consumer of randomness within a trial.
constexpr std::uint64_t kTagSystem = 1;
constexpr std::uint64_t kTagNoise = 2;
constexpr std::uint64_t kTagDiameter = 3;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Aggregate aggregate_cells(std::vector<double> cells) {
    Aggregate agg;
    cells.erase(std::remove_if(cells.begin(), cells.end(),
                               [](double v) { return std::isnan(v); }),
                cells.end());
    agg.count = cells.size();
    if (cells.empty()) {
        agg.median = agg.q1 = agg.q3 = agg.mean = kNaN;
        return agg;
    }
    std::sort(cells.begin(), cells.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(cells.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, cells.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return cells[lo] * (1.0 - frac) + cells[hi] * frac;
    };
    agg.q1 = quantile(0.25);
    agg.median = quantile(0.5);
    agg.q3 = quantile(0.75);
    double s = 0.0;
    for (double v : cells) s += v;
    agg.mean = s / static_cast<double>(cells.size());
    return agg;
}

}  // namespace

std::string bench_method_name(BenchMethod m) {
    switch (m) {
        case BenchMethod::OLS: return "OLS";
        case BenchMethod::OLS_SME: return "OLS_SME";
        case BenchMethod::CLS: return "CLS";
        case BenchMethod::SME_DIAMETER: return "SME_DIAMETER";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (n < 1) throw InvalidParam("config: n must be >= 1");
    if (!(entry_low < entry_high)) throw InvalidParam("config: empty entry range");
    if (!(target_rho > 0.0 && target_rho < 1.0))
        throw InvalidParam("config: target_rho must be in (0,1)");
    if (!(w_bar > 0.0)) throw InvalidParam("config: w_bar must be positive");
    if (noise_kind == NoiseKind::TruncatedGaussian && !(sigma > 0.0))
        throw InvalidParam("config: sigma required for truncated-Gaussian noise");
    if (T_grid.empty()) throw InvalidParam("config: T_grid must be nonempty");
    for (std::size_t i = 1; i < T_grid.size(); ++i)
        if (T_grid[i] <= T_grid[i - 1])
            throw InvalidParam("config: T_grid must be strictly increasing");
    if (T_grid.front() < n + 1) throw InvalidParam("config: min T must be >= n + 1");
    if (trials < 1) throw InvalidParam("config: trials must be >= 1");
}

BenchReport run_convergence_experiment(const ExperimentConfig& cfg, std::size_t threads) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const NoiseModel noise = make_noise_model(cfg.noise_kind, cfg.w_bar, cfg.sigma);
    const std::size_t ngrid = cfg.T_grid.size();
    const std::size_t nm = cfg.methods.size();
    const std::size_t Tmax = cfg.T_grid.empty() ? 1 : cfg.T_grid.back();

    // results[method][trial][grid point], preassigned slots so thread count
    // cannot change anything but wall time.
    std::vector<std::vector<std::vector<double>>> results(
        nm, std::vector<std::vector<double>>(cfg.trials, std::vector<double>(ngrid, kNaN)));

    auto run_trial = [&](std::size_t trial) {
        RngStream rng_sys = RngStream::keyed(cfg.master_seed, trial, kTagSystem);
        const SystemMatrix sys =
            random_system(cfg.n, cfg.entry_low, cfg.entry_high, cfg.target_rho, rng_sys);
        RngStream rng_noise = RngStream::keyed(cfg.master_seed, trial, kTagNoise);
        const Trajectory traj = simulate(sys, noise, Tmax, rng_noise);

        for (std::size_t gi = 0; gi < ngrid; ++gi) {
            const TrajectoryView view(traj, cfg.T_grid[gi]);
            for (std::size_t mi = 0; mi < nm; ++mi) {
                double value = kNaN;
                try {
                    switch (cfg.methods[mi]) {
                        case BenchMethod::OLS:
                            value = estimation_error(ols_estimate(view).A_hat, sys.A,
                                                     cfg.error_norm);
                            break;
                        case BenchMethod::OLS_SME:
                            value = estimation_error(ols_sme_estimate(view, cfg.w_bar).A_hat,
                                                     sys.A, cfg.error_norm);
                            break;
                        case BenchMethod::CLS:
                            value = estimation_error(cls_estimate(view, cfg.w_bar).A_hat,
                                                     sys.A, cfg.error_norm);
                            break;
                        case BenchMethod::SME_DIAMETER: {
                            // Fresh keyed stream per checkpoint: every T sees
                            // the same direction set.
                            RngStream rng_diam =
                                RngStream::keyed(cfg.master_seed, trial, kTagDiameter);
                            value = sme_diameter(sme_polytope(view, cfg.w_bar),
                                                 cfg.diameter_directions, rng_diam);
                            break;
                        }
                    }
                } catch (const SingularMatrix&) {
                } catch (const Infeasible&) {
                } catch (const Unbounded&) {
                } catch (const DidNotConverge&) {
                }
                results[mi][trial][gi] = value;
            }
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<std::size_t>(threads, cfg.trials);
    if (threads <= 1) {
        for (std::size_t trial = 0; trial < cfg.trials; ++trial) run_trial(trial);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t trial = next.fetch_add(1);
                    if (trial >= cfg.trials) return;
                    run_trial(trial);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    BenchReport report;
    report.config = cfg;
    report.slope_fit_start = ngrid / 2;
    for (std::size_t mi = 0; mi < nm; ++mi) {
        ConvergenceCurve curve;
        curve.method = cfg.methods[mi];
        curve.values = std::move(results[mi]);
        curve.aggregates.reserve(ngrid);
        for (std::size_t gi = 0; gi < ngrid; ++gi) {
            std::vector<double> cells(cfg.trials);
            for (std::size_t trial = 0; trial < cfg.trials; ++trial)
                cells[trial] = curve.values[trial][gi];
            curve.aggregates.push_back(aggregate_cells(std::move(cells)));
            curve.missing_cells += cfg.trials - curve.aggregates.back().count;
        }
        std::vector<std::pair<std::size_t, double>> pts;
        for (std::size_t gi = report.slope_fit_start; gi < ngrid; ++gi) {
            const double med = curve.aggregates[gi].median;
            if (std::isfinite(med) && med > 0.0) pts.emplace_back(cfg.T_grid[gi], med);
        }
        try {
            std::tie(curve.slope, curve.intercept) = fit_loglog_slope(pts);
        } catch (const DegenerateInput&) {
            curve.slope = curve.intercept = kNaN;
        }
        report.curves.push_back(std::move(curve));
    }

    if (cfg.overlay_thm1) {
        report.thm1_curve = theory::thm1_error_lower_curve(
            cfg.T_grid, cfg.overlay_delta, cfg.n, noise.c_w_bar, cfg.w_bar);
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

void emit_csv(const BenchReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("emit_csv: cannot open for writing: " + path);
    out << "method,trial,T,value\n";
    const auto& grid = report.config.T_grid;
    for (const auto& curve : report.curves) {
        const std::string name = bench_method_name(curve.method);
        for (std::size_t trial = 0; trial < curve.values.size(); ++trial)
            for (std::size_t gi = 0; gi < grid.size(); ++gi) {
                const double v = curve.values[trial][gi];
                if (std::isnan(v)) continue;
                out << name << ',' << trial << ',' << grid[gi] << ',' << fmt17(v) << "\n";
            }
        for (std::size_t gi = 0; gi < grid.size(); ++gi)
            if (curve.aggregates[gi].count > 0)
                out << name << ",MEDIAN," << grid[gi] << ','
                    << fmt17(curve.aggregates[gi].median) << "\n";
        for (std::size_t gi = 0; gi < grid.size(); ++gi)
            if (curve.aggregates[gi].count > 0)
                out << name << ",MEAN," << grid[gi] << ',' << fmt17(curve.aggregates[gi].mean)
                    << "\n";
    }
    if (!out) throw IoError("emit_csv: write failed: " + path);
}

namespace {

struct LogAxes {
    double xmin, xmax, ymin, ymax;  // log10 ranges
    double px0, px1, py0, py1;      // pixel viewport (y grows downward)

    double x(double t) const {
        return px0 + (std::log10(t) - xmin) / (xmax - xmin) * (px1 - px0);
    }
    double y(double v) const {
        return py1 - (std::log10(v) - ymin) / (ymax - ymin) * (py1 - py0);
    }
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#17becf"};

}  // namespace

void emit_plot(const BenchReport& report, const std::string& path) {
    if (report.curves.empty()) throw InvalidParam("emit_plot: no curves");
    const auto& grid = report.config.T_grid;

    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();
    auto consider = [&](double v) {
        if (std::isfinite(v) && v > 0.0) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    };
    for (const auto& curve : report.curves)
        for (const auto& agg : curve.aggregates) {
            consider(agg.q1);
            consider(agg.q3);
            consider(agg.median);
        }
    for (const auto& [t, v] : report.thm1_curve) consider(v);
    if (!std::isfinite(ymin)) {
        ymin = 1e-3;
        ymax = 1.0;
    }

    LogAxes ax;
    ax.xmin = std::log10(static_cast<double>(grid.front()));
    ax.xmax = std::log10(static_cast<double>(grid.back()));
    if (ax.xmax - ax.xmin < 1e-9) ax.xmax = ax.xmin + 1.0;
    ax.ymin = std::log10(ymin) - 0.1;
    ax.ymax = std::log10(ymax) + 0.1;
    if (ax.ymax - ax.ymin < 1e-9) ax.ymax = ax.ymin + 1.0;
    ax.px0 = 70;
    ax.px1 = 760;
    ax.py0 = 40;
    ax.py1 = 500;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"560\" "
           "viewBox=\"0 0 800 560\">\n"
        << "<rect width=\"800\" height=\"560\" fill=\"white\"/>\n"
        << "<rect x=\"" << ax.px0 << "\" y=\"" << ax.py0 << "\" width=\"" << ax.px1 - ax.px0
        << "\" height=\"" << ax.py1 - ax.py0
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    // Decade gridlines and tick labels.
    for (int e = static_cast<int>(std::ceil(ax.xmin)); e <= static_cast<int>(std::floor(ax.xmax));
         ++e) {
        const double px = ax.x(std::pow(10.0, e));
        svg << "<line x1=\"" << px << "\" y1=\"" << ax.py0 << "\" x2=\"" << px << "\" y2=\""
            << ax.py1 << "\" stroke=\"#dddddd\"/>\n"
            << "<text x=\"" << px << "\" y=\"" << ax.py1 + 18
            << "\" font-size=\"12\" text-anchor=\"middle\">1e" << e << "</text>\n";
    }
    for (int e = static_cast<int>(std::ceil(ax.ymin)); e <= static_cast<int>(std::floor(ax.ymax));
         ++e) {
        const double py = ax.y(std::pow(10.0, e));
        svg << "<line x1=\"" << ax.px0 << "\" y1=\"" << py << "\" x2=\"" << ax.px1 << "\" y2=\""
            << py << "\" stroke=\"#dddddd\"/>\n"
            << "<text x=\"" << ax.px0 - 6 << "\" y=\"" << py + 4
            << "\" font-size=\"12\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
    svg << "<text x=\"" << (ax.px0 + ax.px1) / 2 << "\" y=\"545\" font-size=\"13\" "
           "text-anchor=\"middle\">trajectory length T</text>\n"
        << "<text x=\"16\" y=\"" << (ax.py0 + ax.py1) / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (ax.py0 + ax.py1) / 2 << ")\">error / diameter</text>\n";

    std::size_t ci = 0;
    double legend_y = ax.py0 + 18;
    for (const auto& curve : report.curves) {
        const char* color = kPalette[ci % 6];
        ++ci;
        // Interquartile band.
        std::ostringstream band;
        bool band_ok = true;
        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            const auto& agg = curve.aggregates[gi];
            if (!(std::isfinite(agg.q3) && agg.q3 > 0.0)) {
                band_ok = false;
                continue;
            }
            band << ax.x(static_cast<double>(grid[gi])) << ',' << ax.y(agg.q3) << ' ';
        }
        for (std::size_t gi = grid.size(); gi-- > 0;) {
            const auto& agg = curve.aggregates[gi];
            if (!(std::isfinite(agg.q1) && agg.q1 > 0.0)) {
                band_ok = false;
                continue;
            }
            band << ax.x(static_cast<double>(grid[gi])) << ',' << ax.y(agg.q1) << ' ';
        }
        if (band_ok)
            svg << "<polygon points=\"" << band.str() << "\" fill=\"" << color
                << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";

        std::ostringstream line;
        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            const auto& agg = curve.aggregates[gi];
            if (!(std::isfinite(agg.median) && agg.median > 0.0)) continue;
            line << ax.x(static_cast<double>(grid[gi])) << ',' << ax.y(agg.median) << ' ';
        }
        svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";

        char slope_txt[64];
        std::snprintf(slope_txt, sizeof slope_txt, "%.2f", curve.slope);
        svg << "<line x1=\"" << ax.px1 - 180 << "\" y1=\"" << legend_y - 4 << "\" x2=\""
            << ax.px1 - 156 << "\" y2=\"" << legend_y - 4 << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << ax.px1 - 150 << "\" y=\"" << legend_y
            << "\" font-size=\"12\">" << bench_method_name(curve.method) << " (slope "
            << slope_txt << ")</text>\n";
        legend_y += 16;
    }

    if (!report.thm1_curve.empty()) {
        std::ostringstream line;
        for (const auto& [t, v] : report.thm1_curve)
            if (v > 0.0) line << ax.x(static_cast<double>(t)) << ',' << ax.y(v) << ' ';
        svg << "<polyline points=\"" << line.str()
            << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" "
               "stroke-dasharray=\"6,4\"/>\n"
            << "<line x1=\"" << ax.px1 - 180 << "\" y1=\"" << legend_y - 4 << "\" x2=\""
            << ax.px1 - 156 << "\" y2=\"" << legend_y - 4
            << "\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n"
            << "<text x=\"" << ax.px1 - 150 << "\" y=\"" << legend_y
            << "\" font-size=\"12\">minimax lower bound</text>\n";
    }

    svg << "</svg>\n";
    std::ofstream out(path);
    if (!out) throw IoError("emit_plot: cannot open for writing: " + path);
    out << svg.str();
    if (!out) throw IoError("emit_plot: write failed: " + path);
}

namespace {

const nlohmann::json& require_field(const nlohmann::json& j, const std::string& path,
                                    const char* key) {
    if (!j.contains(key)) throw InvalidParam("missing field: " + path + "." + key);
    return j.at(key);
}

double number_at(const nlohmann::json& j, const std::string& path, const char* key) {
    const auto& v = require_field(j, path, key);
    if (!v.is_number()) throw InvalidParam("expected number at " + path + "." + key);
    return v.get<double>();
}

}  // namespace

BenchJob parse_bench_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParam(std::string("config is not valid JSON: ") + e.what());
    }

    BenchJob job;
    ExperimentConfig& cfg = job.config;

    const auto& system = require_field(j, "$", "system");
    cfg.n = static_cast<std::size_t>(number_at(system, "system", "n"));
    cfg.entry_low = number_at(system, "system", "entry_low");
    cfg.entry_high = number_at(system, "system", "entry_high");
    cfg.target_rho = number_at(system, "system", "target_rho");

    const auto& noise = require_field(j, "$", "noise");
    const std::string kind = require_field(noise, "noise", "kind").get<std::string>();
    if (kind == "uniform") {
        cfg.noise_kind = NoiseKind::Uniform;
    } else if (kind == "tgauss") {
        cfg.noise_kind = NoiseKind::TruncatedGaussian;
        cfg.sigma = number_at(noise, "noise", "sigma");
    } else {
        throw InvalidParam("noise.kind must be \"uniform\" or \"tgauss\"");
    }
    cfg.w_bar = number_at(noise, "noise", "w_bar");

    const auto& exp = require_field(j, "$", "experiment");
    const auto& tgrid = require_field(exp, "experiment", "T_grid");
    if (!tgrid.is_array() || tgrid.empty())
        throw InvalidParam("experiment.T_grid must be a nonempty array");
    for (const auto& t : tgrid) {
        if (!t.is_number_integer() || t.get<std::int64_t>() < 1)
            throw InvalidParam("experiment.T_grid entries must be positive integers");
        cfg.T_grid.push_back(t.get<std::size_t>());
    }
    cfg.trials = static_cast<std::size_t>(number_at(exp, "experiment", "trials"));
    const auto& methods = require_field(exp, "experiment", "methods");
    if (!methods.is_array() || methods.empty())
        throw InvalidParam("experiment.methods must be a nonempty array");
    for (const auto& m : methods) {
        const std::string name = m.get<std::string>();
        if (name == "OLS") cfg.methods.push_back(BenchMethod::OLS);
        else if (name == "OLS_SME") cfg.methods.push_back(BenchMethod::OLS_SME);
        else if (name == "CLS") cfg.methods.push_back(BenchMethod::CLS);
        else if (name == "SME_DIAMETER") cfg.methods.push_back(BenchMethod::SME_DIAMETER);
        else throw InvalidParam("experiment.methods: unknown method \"" + name + "\"");
    }
    if (exp.contains("error_norm")) {
        const std::string norm = exp.at("error_norm").get<std::string>();
        if (norm == "spectral") cfg.error_norm = ErrorNorm::Spectral;
        else if (norm == "frobenius") cfg.error_norm = ErrorNorm::Frobenius;
        else throw InvalidParam("experiment.error_norm must be \"spectral\" or \"frobenius\"");
    }
    if (exp.contains("diameter_directions"))
        cfg.diameter_directions =
            static_cast<std::size_t>(number_at(exp, "experiment", "diameter_directions"));
    if (j.contains("seed")) cfg.master_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("overlay_thm1")) cfg.overlay_thm1 = j.at("overlay_thm1").get<bool>();

    const auto& out = require_field(j, "$", "out");
    job.csv_path = require_field(out, "out", "csv").get<std::string>();
    job.svg_path = require_field(out, "out", "svg").get<std::string>();

    cfg.validate();
    return job;
}

}  // namespace bench
}  // namespace sysid

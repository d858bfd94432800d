// Command-line front end: simulate / estimate / bench / bounds / check.
//
// Exit codes (stable contract):
//   0 ok, 1 verification-check failure, 2 usage or config error, 3 IO error,
//   4 numerical or model error, 5 infeasibility / unbounded set.

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sysid/bench.hpp"
#include "sysid/errors.hpp"
#include "sysid/estimators.hpp"
#include "sysid/system.hpp"
#include "sysid/theory.hpp"
#include "sysid/verify.hpp"

namespace {

using nlohmann::json;
using namespace sysid;

// Fixed default so bare invocations reproduce; `--seed now` opts into
// wall-clock seeding.
constexpr std::uint64_t kDefaultSeed = 20250401;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitInfeasible = 5;

std::uint64_t parse_seed(const std::string& seed_flag) {
    if (seed_flag == "now") return static_cast<std::uint64_t>(std::time(nullptr));
    return std::stoull(seed_flag);
}

std::size_t thread_count(std::size_t flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("BOUNDED_SYSID_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 0;  // library default: hardware concurrency
}

Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open matrix file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("empty matrix file: " + path);
    Matrix A(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != A.cols()) throw IoError("ragged matrix file: " + path);
        for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) = rows[i][j];
    }
    return A;
}

int cmd_simulate(std::size_t n, double a_scalar, bool have_a, const std::string& a_file,
                 bool random, double entry_low, double entry_high, double rho,
                 const std::string& noise_kind, double wbar, double sigma, std::size_t T,
                 const std::string& seed_flag, const std::string& out_path) {
    const std::uint64_t seed = parse_seed(seed_flag);
    const NoiseKind kind =
        noise_kind == "tgauss" ? NoiseKind::TruncatedGaussian : NoiseKind::Uniform;
    const NoiseModel model = make_noise_model(kind, wbar, sigma);

    SystemMatrix sys;
    if (random) {
        if (!(rho > 0.0 && rho < 1.0))
            throw UnstableSystem("random system requires target rho in (0,1)");
        RngStream rng = RngStream::keyed(seed, 0, 1);
        sys = random_system(n, entry_low, entry_high, rho, rng);
    } else if (have_a) {
        sys = make_system(Matrix::from_rows({{a_scalar}}));
    } else if (!a_file.empty()) {
        sys = make_system(read_matrix_csv(a_file));
    } else {
        std::cerr << "simulate: need one of --a, --a-file, --random\n";
        return kExitUsage;
    }

    RngStream rng = RngStream::keyed(seed, 0, 2);
    const Trajectory traj = simulate(sys, model, T, rng);
    write_trajectory_csv(traj, out_path);

    double max_state = 0.0;
    for (double v : traj.states) max_state = std::max(max_state, std::abs(v));
    std::printf("rho = %.6g\nmax |x_t| = %.6g\n", sys.rho, max_state);
    if (sys.n == 1)
        std::printf("state envelope bound = %.6g\n",
                    theory::state_envelope_bound(sys.A(0, 0), model.w_bar));
    std::printf("wrote %s (T = %zu)\n", out_path.c_str(), traj.T);
    return kExitOk;
}

int cmd_estimate(const std::string& in_path, double wbar, const std::string& method,
                 const std::string& out_path) {
    const Trajectory traj = read_trajectory_csv(in_path);
    json out;
    auto to_json = [](const EstimateReport& rep) { return json::parse(report_to_json(rep)); };
    if (method == "ols") {
        out = to_json(ols_estimate(traj));
    } else if (method == "ols-sme") {
        out = to_json(ols_sme_estimate(traj, wbar));
    } else if (method == "cls") {
        out = to_json(cls_estimate(traj, wbar));
    } else if (method == "all") {
        out = json::array({to_json(ols_estimate(traj)), to_json(ols_sme_estimate(traj, wbar)),
                           to_json(cls_estimate(traj, wbar))});
    } else {
        std::cerr << "estimate: unknown --method " << method << "\n";
        return kExitUsage;
    }
    if (out_path.empty() || out_path == "-") {
        std::cout << out.dump(2) << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw IoError("cannot open for writing: " + out_path);
        f << out.dump(2) << "\n";
        if (!f) throw IoError("write failed: " + out_path);
    }
    return kExitOk;
}

int cmd_bench(const std::string& config_path, std::size_t threads) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open config: " + config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    bench::BenchJob job;
    try {
        job = bench::parse_bench_config(ss.str());
    } catch (const InvalidParam& e) {
        std::cerr << "bench config error: " << e.what() << "\n";
        return kExitUsage;
    }
    const bench::BenchReport report =
        bench::run_convergence_experiment(job.config, thread_count(threads));
    bench::emit_csv(report, job.csv_path);
    bench::emit_plot(report, job.svg_path);

    std::printf("%-14s %10s %12s %8s\n", "method", "slope", "intercept", "missing");
    for (const auto& curve : report.curves)
        std::printf("%-14s %10.3f %12.3f %8zu\n", bench::bench_method_name(curve.method).c_str(),
                    curve.slope, curve.intercept, curve.missing_cells);
    std::printf("slope fit over T >= %zu; wall time %.1f s\n",
                report.config.T_grid[report.slope_fit_start], report.wall_seconds);
    std::printf("wrote %s, %s\n", job.csv_path.c_str(), job.svg_path.c_str());
    return kExitOk;
}

int cmd_bounds(const std::string& which, double eps, double delta, std::size_t n, double cwbar,
               double wbar, double mu, double a, std::size_t T, double sigma_w, double C1,
               double C2, double C5, bool constants_given) {
    json out;
    out["which"] = which;
    try {
        if (which == "thm1") {
            out["inputs"] = {{"eps", eps}, {"delta", delta}, {"n", n},
                             {"c_w_bar", cwbar}, {"w_bar", wbar}};
            const double v = theory::thm1_sample_lower_bound(eps, delta, n, cwbar, wbar);
            out["sample_lower_bound"] = v;
            out["vacuous"] = v == 0.0;
        } else if (which == "thm2") {
            if (!constants_given)
                std::cerr << "warning: universal constants C1/C2/C5 defaulted to 1.0; "
                             "values are shape only, not calibrated\n";
            theory::Thm2Constants consts{C1, C2, C5};
            out["inputs"] = {{"a", a}, {"eps", eps}, {"T", T}, {"sigma_w", sigma_w},
                             {"w_bar", wbar}, {"C1", C1}, {"C2", C2}, {"C5", C5}};
            out["C4"] = theory::c4_constant(a, wbar, sigma_w, C1);
            out["probability_upper_bound"] =
                theory::thm2_probability_upper_bound(a, eps, T, sigma_w, wbar, consts);
        } else if (which == "lemma1") {
            out["inputs"] = {{"mu", mu}, {"eps", eps}, {"w_bar", wbar},
                             {"c_w_bar", cwbar}, {"T", T}};
            const auto bv = theory::lemma1_tv_upper_bound(mu, eps, wbar, cwbar, T);
            out["tv_upper_bound"] = bv.value;
            out["vacuous"] = bv.vacuous;
        } else if (which == "lemma3") {
            out["inputs"] = {{"a", a}, {"w_bar", wbar}, {"T", T}};
            out["variance_bound"] = theory::lemma3_variance_bound(a, wbar, T);
        } else {
            std::cerr << "bounds: unknown --which " << which << "\n";
            return kExitUsage;
        }
    } catch (const InvalidParam& e) {
        std::cerr << "bounds: precondition violated: " << e.what() << "\n";
        return kExitUsage;
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_check(const std::string& suite, std::size_t reps, const std::string& seed_flag) {
    const std::uint64_t seed = parse_seed(seed_flag);
    std::vector<verify::CheckResult> results;
    auto append = [&](std::vector<verify::CheckResult> v) {
        for (auto& r : v) results.push_back(std::move(r));
    };
    if (suite == "envelope" || suite == "all") append(verify::envelope_checks(reps, 1000, seed));
    if (suite == "lemma3" || suite == "all") append(verify::lemma3_checks(reps, seed));
    if (suite == "tv" || suite == "all") append(verify::tv_checks(reps, seed));
    if (results.empty()) {
        std::cerr << "check: unknown --suite " << suite << "\n";
        return kExitUsage;
    }
    bool ok = true;
    for (const auto& r : results) {
        std::printf("[%s] %-32s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        ok = ok && r.pass;
    }
    return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded-noise linear system identification toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Roll out one trajectory to CSV");
    std::size_t sim_n = 1, sim_T = 100;
    double sim_a = 0.0, sim_lo = -5.0, sim_hi = 5.0, sim_rho = 0.7, sim_wbar = 2.0,
           sim_sigma = 0.0;
    bool sim_random = false;
    std::string sim_afile, sim_noise = "uniform", sim_seed = std::to_string(kDefaultSeed),
                sim_out = "traj.csv";
    auto* sim_a_opt = sim->add_option("--a", sim_a, "Scalar system parameter");
    sim->add_option("--n", sim_n, "State dimension");
    sim->add_option("--a-file", sim_afile, "CSV file holding the system matrix");
    sim->add_flag("--random", sim_random, "Draw a random system");
    sim->add_option("--entry-low", sim_lo, "Random entry lower bound");
    sim->add_option("--entry-high", sim_hi, "Random entry upper bound");
    sim->add_option("--rho", sim_rho, "Target spectral radius for --random");
    sim->add_option("--noise", sim_noise, "uniform | tgauss")
        ->check(CLI::IsMember({"uniform", "tgauss"}));
    sim->add_option("--wbar", sim_wbar, "Noise bound w_bar");
    sim->add_option("--sigma", sim_sigma, "Pre-truncation std (tgauss)");
    sim->add_option("--T", sim_T, "Trajectory length");
    sim->add_option("--seed", sim_seed, "Seed (integer, or 'now')");
    sim->add_option("--out", sim_out, "Output CSV path");

    // estimate
    auto* est = app.add_subcommand("estimate", "Run estimators on a trajectory CSV");
    std::string est_in, est_method = "all", est_out;
    double est_wbar = 2.0;
    est->add_option("--in", est_in, "Trajectory CSV")->required();
    est->add_option("--wbar", est_wbar, "Noise bound w_bar");
    est->add_option("--method", est_method, "ols | ols-sme | cls | all");
    est->add_option("--out", est_out, "Report JSON path (default stdout)");

    // bench
    auto* ben = app.add_subcommand("bench", "Convergence experiment from a JSON config");
    std::string ben_config;
    std::size_t ben_threads = 0;
    ben->add_option("config", ben_config, "JSON config path")->required();
    ben->add_option("--threads", ben_threads, "Worker cap (default: machine parallelism)");

    // bounds
    auto* bnd = app.add_subcommand("bounds", "Evaluate the closed-form bounds");
    std::string bnd_which;
    double bnd_eps = 0.01, bnd_delta = 0.99, bnd_cwbar = 0.25, bnd_wbar = 2.0, bnd_mu = 0.0,
           bnd_a = 0.0, bnd_sigma_w = 1.0, bnd_C1 = 1.0, bnd_C2 = 1.0, bnd_C5 = 1.0;
    std::size_t bnd_n = 4, bnd_T = 100;
    bnd->add_option("--which", bnd_which, "thm1 | thm2 | lemma1 | lemma3")->required();
    bnd->add_option("--eps", bnd_eps, "Accuracy epsilon");
    bnd->add_option("--delta", bnd_delta, "Confidence parameter delta");
    bnd->add_option("--n", bnd_n, "State dimension");
    bnd->add_option("--cwbar", bnd_cwbar, "Boundary constant C_w_bar");
    bnd->add_option("--wbar", bnd_wbar, "Noise bound w_bar");
    bnd->add_option("--mu", bnd_mu, "Midpoint mu (lemma1)");
    bnd->add_option("--a", bnd_a, "Scalar parameter a");
    bnd->add_option("--T", bnd_T, "Trajectory length");
    bnd->add_option("--sigma-w", bnd_sigma_w, "Noise std sigma_w");
    auto* c1 = bnd->add_option("--C1", bnd_C1, "Universal constant C1");
    auto* c2 = bnd->add_option("--C2", bnd_C2, "Universal constant C2");
    auto* c5 = bnd->add_option("--C5", bnd_C5, "Universal constant C5");

    // check
    auto* chk = app.add_subcommand("check", "Monte-Carlo verification suites");
    std::string chk_suite = "all", chk_seed = std::to_string(kDefaultSeed);
    std::size_t chk_reps = 10000;
    chk->add_option("--suite", chk_suite, "tv | lemma3 | envelope | all");
    chk->add_option("--reps", chk_reps, "Samples / repetitions per check");
    chk->add_option("--seed", chk_seed, "Seed (integer, or 'now')");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(sim_n, sim_a, sim_a_opt->count() > 0, sim_afile, sim_random,
                                sim_lo, sim_hi, sim_rho, sim_noise, sim_wbar, sim_sigma, sim_T,
                                sim_seed, sim_out);
        if (est->parsed()) return cmd_estimate(est_in, est_wbar, est_method, est_out);
        if (ben->parsed()) return cmd_bench(ben_config, ben_threads);
        if (bnd->parsed())
            return cmd_bounds(bnd_which, bnd_eps, bnd_delta, bnd_n, bnd_cwbar, bnd_wbar, bnd_mu,
                              bnd_a, bnd_T, bnd_sigma_w, bnd_C1, bnd_C2, bnd_C5,
                              c1->count() + c2->count() + c5->count() > 0);
        if (chk->parsed()) return cmd_check(chk_suite, chk_reps, chk_seed);
    } catch (const IoError& e) {
        std::cerr << "IO error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const Unbounded& e) {
        std::cerr << "unbounded: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const Error& e) {  // singular / unstable / invalid / non-convergent
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

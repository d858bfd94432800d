#include "sysid/system.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sysid/errors.hpp"
#include "sysid/numerics.hpp"

namespace sysid {

namespace {

double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

NoiseModel make_noise_model(NoiseKind kind, double w_bar, double sigma) {
    if (!(w_bar > 0.0) || !std::isfinite(w_bar))
        throw InvalidParam("make_noise_model: w_bar must be positive");
    NoiseModel m;
    m.kind = kind;
    m.w_bar = w_bar;
    if (kind == NoiseKind::Uniform) {
        m.sigma_w_sq = w_bar * w_bar / 3.0;
        m.c_w_bar = 1.0 / (2.0 * w_bar);
    } else {
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw InvalidParam("make_noise_model: sigma must be positive");
        if (w_bar / sigma < 0.1)
            throw InvalidParam("make_noise_model: w_bar/sigma < 0.1, rejection rate too high");
        m.sigma = sigma;
        const double alpha = w_bar / sigma;
        const double mass = 2.0 * std_normal_cdf(alpha) - 1.0;
        m.sigma_w_sq = sigma * sigma * (1.0 - 2.0 * alpha * std_normal_pdf(alpha) / mass);
        // The boundary-mass constant must satisfy P(w >= w_bar - eps) <= c eps
        // for every eps up to w_bar. For any symmetric density with its mode at
        // zero the supremum of P(w >= w_bar - eps) / eps sits at eps = w_bar,
        // where it equals P(w >= 0) / w_bar = 1 / (2 w_bar); smaller constants
        // (e.g. the density value at the boundary) fail at large eps.
        m.c_w_bar = 1.0 / (2.0 * w_bar);
    }
    return m;
}

std::vector<double> sample_noise(const NoiseModel& model, std::size_t n, RngStream& rng) {
    std::vector<double> w(n);
    if (model.kind == NoiseKind::Uniform) {
        for (double& wi : w) wi = rng.uniform(-model.w_bar, model.w_bar);
    } else {
        for (double& wi : w) {
            double x;
            do {
                x = rng.normal(0.0, model.sigma);
            } while (std::abs(x) > model.w_bar);
            wi = x;
        }
    }
    return w;
}

SystemMatrix make_system(const Matrix& A) {
    if (A.rows() != A.cols()) throw DimensionMismatch("make_system: A not square");
    SystemMatrix s;
    s.n = A.rows();
    s.A = A;
    s.rho = spectral_radius(A, /*accept_nonconverged=*/true);
    return s;
}

SystemMatrix random_system(std::size_t n, double entry_low, double entry_high,
                           double target_rho, RngStream& rng) {
    if (!(entry_low < entry_high)) throw InvalidParam("random_system: empty entry range");
    if (!(target_rho > 0.0 && target_rho < 1.0))
        throw InvalidParam("random_system: target_rho must be in (0,1)");
    for (;;) {
        Matrix A(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) A(i, j) = rng.uniform(entry_low, entry_high);
        double rho;
        try {
            rho = spectral_radius(A);
        } catch (const DidNotConverge&) {
            continue;  // near-degenerate spectrum, redraw
        }
        if (rho < 1e-8) continue;
        SystemMatrix s;
        s.n = n;
        s.A = A.scaled(target_rho / rho);
        s.rho = target_rho;
        return s;
    }
}

Trajectory simulate(const SystemMatrix& sys, const NoiseModel& model, std::size_t T,
                    RngStream& rng) {
    if (sys.rho >= 1.0) throw UnstableSystem("simulate: spectral radius >= 1");
    if (T < 1) throw InvalidParam("simulate: T must be >= 1");
    const std::size_t n = sys.n;
    Trajectory traj;
    traj.n = n;
    traj.T = T;
    traj.states.assign((T + 1) * n, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        const double* x = traj.state(t);
        double* xn = traj.states.data() + (t + 1) * n;
        const std::vector<double> w = sample_noise(model, n, rng);
        for (std::size_t i = 0; i < n; ++i) {
            double s = w[i];
            for (std::size_t j = 0; j < n; ++j) s += sys.A(i, j) * x[j];
            xn[i] = s;
        }
    }
    return traj;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    out << "t";
    for (std::size_t i = 1; i <= traj.n; ++i) out << ",x" << i;
    out << "\n";
    char buf[64];
    for (std::size_t t = 0; t <= traj.T; ++t) {
        out << t;
        for (std::size_t i = 0; i < traj.n; ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g", traj.state(t)[i]);
            out << buf;
        }
        out << "\n";
    }
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_trajectory_csv(traj, out);
    if (!out) throw IoError("write failed: " + path);
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty trajectory file: " + path);
    std::size_t n = 0;
    for (char c : line)
        if (c == ',') ++n;
    if (n == 0) throw IoError("malformed trajectory header: " + path);

    Trajectory traj;
    traj.n = n;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        if (!std::getline(ss, cell, ',')) throw IoError("malformed trajectory row: " + path);
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::getline(ss, cell, ','))
                throw IoError("short trajectory row: " + path);
            traj.states.push_back(std::stod(cell));
        }
    }
    if (traj.states.size() < 2 * n) throw IoError("trajectory needs at least two states: " + path);
    traj.T = traj.states.size() / n - 1;
    return traj;
}

}  // namespace sysid

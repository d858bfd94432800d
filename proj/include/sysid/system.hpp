#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "sysid/matrix.hpp"
#include "sysid/rng.hpp"

namespace sysid {

enum class NoiseKind { Uniform, TruncatedGaussian };

/// Bounded zero-mean noise description: |w| <= w_bar per coordinate, i.i.d.
/// across coordinates and time, with per-coordinate variance sigma_w_sq and
/// boundary constant c_w_bar defined by
///     P(w >= w_bar - eps) <= c_w_bar * eps   for eps in [0, w_bar]
/// (and symmetrically at the lower end).
///
/// Uniform on [-w_bar, w_bar]: the density is flat at 1/(2 w_bar), so
/// c_w_bar = 1/(2 w_bar) holds with equality for every eps.
///
/// Truncated Gaussian (zero-mean, std sigma, truncated to [-w_bar, w_bar]):
/// the bound must hold for all eps in [0, w_bar], and at eps = w_bar it reads
/// P(w >= 0) = 1/2 <= c_w_bar w_bar. For a symmetric unimodal density that
/// constraint is binding, so c_w_bar = 1/(2 w_bar) is the tightest constant
/// here as well.
struct NoiseModel {
    NoiseKind kind = NoiseKind::Uniform;
    double w_bar = 0.0;
    double sigma = 0.0;  // pre-truncation std, TruncatedGaussian only
    double sigma_w_sq = 0.0;
    double c_w_bar = 0.0;
};

NoiseModel make_noise_model(NoiseKind kind, double w_bar, double sigma = 0.0);

/// n i.i.d. draws from the model; every coordinate lands in [-w_bar, w_bar].
std::vector<double> sample_noise(const NoiseModel& model, std::size_t n, RngStream& rng);

struct SystemMatrix {
    std::size_t n = 0;
    Matrix A;
    double rho = 0.0;  // cached spectral radius
};

/// Wrap an explicit matrix, computing and caching its spectral radius.
SystemMatrix make_system(const Matrix& A);

/// Entries i.i.d. uniform on [entry_low, entry_high], then rescaled so the
/// spectral radius equals target_rho (degenerate draws are resampled).
SystemMatrix random_system(std::size_t n, double entry_low, double entry_high,
                           double target_rho, RngStream& rng);

/// State sequence x_0..x_T of one rollout; x_0 = 0. Stored as a flat
/// (T+1) x n row-major block.
struct Trajectory {
    std::size_t n = 0;
    std::size_t T = 0;
    std::vector<double> states;  // (T+1) * n

    const double* state(std::size_t t) const { return states.data() + t * n; }
    double scalar_state(std::size_t t) const { return states[t * n]; }
};

/// Read-only prefix of a trajectory; estimators work on views so benchmark
/// checkpoints reuse one rollout.
struct TrajectoryView {
    const Trajectory* traj = nullptr;
    std::size_t T = 0;

    TrajectoryView(const Trajectory& tr) : traj(&tr), T(tr.T) {}
    TrajectoryView(const Trajectory& tr, std::size_t prefix) : traj(&tr), T(prefix) {}

    std::size_t n() const { return traj->n; }
    const double* state(std::size_t t) const { return traj->state(t); }
};

/// x_{t+1} = A x_t + w_t from x_0 = 0, consuming exactly T noise draws.
/// Throws UnstableSystem when sys.rho >= 1.
Trajectory simulate(const SystemMatrix& sys, const NoiseModel& model, std::size_t T,
                    RngStream& rng);

/// CSV with header t,x1,...,xn and 17-significant-digit values.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace sysid

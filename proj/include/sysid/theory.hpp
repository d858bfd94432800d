#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sysid/rng.hpp"
#include "sysid/system.hpp"

namespace sysid {
namespace theory {

/// Universal constants of the OLS lower-bound evaluation. The source analysis
/// never pins them numerically; they default to 1 and callers are expected to
/// treat the resulting values as shape information, not calibrated truth.
struct Thm2Constants {
    double C1 = 1.0;
    double C2 = 1.0;
    double C5 = 1.0;
};

/// Minimal sample count below which no estimator can reach accuracy eps with
/// confidence 1 - delta: (1 / (4 c_w_bar w_bar eps)) * (1 - 2 delta / n).
/// Returns 0 when 2 delta / n >= 1 (the bound is vacuous there).
double thm1_sample_lower_bound(double eps, double delta, std::size_t n, double c_w_bar,
                               double w_bar);

/// The same bound inverted for plotting: eps(T) per grid point.
std::vector<std::pair<std::size_t, double>> thm1_error_lower_curve(
    const std::vector<std::size_t>& T_grid, double delta, std::size_t n, double c_w_bar,
    double w_bar);

struct BoundValue {
    double value = 0.0;
    bool vacuous = false;  // exceeds 1, carries no information
};

/// TV-distance bound between trajectory laws of scalar systems with
/// parameters mu +/- eps: 2 c_w_bar eps w_bar T (1-|mu|) / ((1-|mu|)^2 - eps^2).
/// Preconditions: |mu| + eps < 1 and the small-eps condition
/// eps < (1 - max|mu +/- eps|) / (2 c_w_bar w_bar).
BoundValue lemma1_tv_upper_bound(double mu, double eps, double w_bar, double c_w_bar,
                                 std::size_t T);

struct TvEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Monte-Carlo TV distance between the trajectory laws of scalar parameters
/// a1 and a2 under uniform noise. The uniform product densities have equal
/// height wherever positive, so TV = (P1(f2 = 0) + P2(f1 = 0)) / 2 where
/// {f2 = 0} = {exists k: |x_k - a2 x_{k-1}| > w_bar}.
TvEstimate empirical_tv_uniform(double a1, double a2, double w_bar, std::size_t T,
                                std::size_t samples, RngStream& rng);

/// Second-moment bound for scalar trajectories:
///     E[(sum_t (x_t^2 - E x_t^2))^2] <= w_bar^4 (1+a^2) / ((1-|a|)^4 (1-a^2)) * T.
double lemma3_variance_bound(double a, double w_bar, std::size_t T);

/// Monte-Carlo estimate of the left side above vs the bound. Two passes over
/// rep-keyed substreams: the first estimates E[x_t^2] per t, the second forms
/// the centered sum. The shared pool introduces O(1/reps) bias; use
/// reps >= 1e4.
std::pair<double, double> lemma3_mc_check(double a, const NoiseModel& model, std::size_t T,
                                          std::size_t reps, RngStream& rng);

/// C4 = C1 * (1/(1-a^2)^2 + w^4/((1-a^4) s^4) + w^4 (1+a^2)/((1-|a|)^4 (1-a^2) s^4))^{1/5}.
double c4_constant(double a, double w_bar, double sigma_w, double C1);

/// Upper bound on P(|ols - a| <= eps):
///     min{ eps sqrt(T) / (sqrt(2 pi) sigma_w) + C4 T^{-1/5},
///          C5 exp(-C2 (1-a)^4 (1-a^2) / (2 w_bar^2 T ln 2)) },
/// clipped to [0, 1].
double thm2_probability_upper_bound(double a, double eps, std::size_t T, double sigma_w,
                                    double w_bar, const Thm2Constants& consts);

/// Strict envelope of every scalar trajectory: w_bar / (1 - |a|).
double state_envelope_bound(double a, double w_bar);

}  // namespace theory
}  // namespace sysid

#include "sysid/theory.hpp"

#include <algorithm>
#include <cmath>

#include "sysid/errors.hpp"

namespace sysid {
namespace theory {

namespace {
constexpr double kPi = 3.14159265358979323846;

void require_stable_scalar(double a) {
    if (!(std::abs(a) < 1.0)) throw InvalidParam("scalar parameter must satisfy |a| < 1");
}
}  // namespace

double thm1_sample_lower_bound(double eps, double delta, std::size_t n, double c_w_bar,
                               double w_bar) {
    if (!(eps > 0.0)) throw InvalidParam("thm1: eps must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidParam("thm1: delta must be in (0,1)");
    if (n < 1) throw InvalidParam("thm1: n must be >= 1");
    if (!(c_w_bar > 0.0) || !(w_bar > 0.0))
        throw InvalidParam("thm1: c_w_bar and w_bar must be positive");
    const double slack = 1.0 - 2.0 * delta / static_cast<double>(n);
    if (slack <= 0.0) return 0.0;  // vacuous regime
    return slack / (4.0 * c_w_bar * w_bar * eps);
}

std::vector<std::pair<std::size_t, double>> thm1_error_lower_curve(
    const std::vector<std::size_t>& T_grid, double delta, std::size_t n, double c_w_bar,
    double w_bar) {
    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(T_grid.size());
    for (std::size_t T : T_grid) {
        if (T == 0) throw InvalidParam("thm1 curve: T = 0");
        // eps(T) solves T = thm1_sample_lower_bound(eps); reuse it at eps = 1
        // so all parameter validation lives in one place.
        const double scale = thm1_sample_lower_bound(1.0, delta, n, c_w_bar, w_bar);
        out.emplace_back(T, scale / static_cast<double>(T));
    }
    return out;
}

BoundValue lemma1_tv_upper_bound(double mu, double eps, double w_bar, double c_w_bar,
                                 std::size_t T) {
    if (!(eps > 0.0)) throw InvalidParam("lemma1: eps must be positive");
    if (!(w_bar > 0.0) || !(c_w_bar > 0.0))
        throw InvalidParam("lemma1: w_bar and c_w_bar must be positive");
    if (!(std::abs(mu) + eps < 1.0))
        throw InvalidParam("lemma1: requires |mu| + eps < 1");
    const double amax = std::max(std::abs(mu + eps), std::abs(mu - eps));
    if (!(eps < (1.0 - amax) / (2.0 * c_w_bar * w_bar)))
        throw InvalidParam("lemma1: small-eps condition eps < (1-max|a_i|)/(2 c_w_bar w_bar)");
    const double one_m = 1.0 - std::abs(mu);
    BoundValue bv;
    bv.value = 2.0 * c_w_bar * eps * w_bar * static_cast<double>(T) * one_m /
               (one_m * one_m - eps * eps);
    bv.vacuous = bv.value > 1.0;
    return bv;
}

TvEstimate empirical_tv_uniform(double a1, double a2, double w_bar, std::size_t T,
                                std::size_t samples, RngStream& rng) {
    require_stable_scalar(a1);
    require_stable_scalar(a2);
    if (!(w_bar > 0.0)) throw InvalidParam("empirical_tv_uniform: w_bar must be positive");
    if (samples == 0) throw InvalidParam("empirical_tv_uniform: need samples >= 1");

    // P(sim = generating parameter, other): fraction of trajectories that leave
    // the support of the other parameter's density.
    auto escape_prob = [&](double gen, double other, RngStream stream) {
        std::size_t hits = 0;
        for (std::size_t s = 0; s < samples; ++s) {
            double x = 0.0;
            for (std::size_t t = 0; t < T; ++t) {
                const double xn = gen * x + stream.uniform(-w_bar, w_bar);
                if (std::abs(xn - other * x) > w_bar) {
                    ++hits;
                    break;
                }
                x = xn;
            }
        }
        return static_cast<double>(hits) / static_cast<double>(samples);
    };

    const double p1 = escape_prob(a1, a2, rng.substream(1));
    const double p2 = escape_prob(a2, a1, rng.substream(2));
    TvEstimate est;
    est.samples = samples;
    est.estimate = 0.5 * (p1 + p2);
    const double N = static_cast<double>(samples);
    est.std_error = 0.5 * std::sqrt(p1 * (1.0 - p1) / N + p2 * (1.0 - p2) / N);
    return est;
}

double lemma3_variance_bound(double a, double w_bar, std::size_t T) {
    require_stable_scalar(a);
    if (!(w_bar > 0.0)) throw InvalidParam("lemma3: w_bar must be positive");
    if (T < 1) throw InvalidParam("lemma3: T must be >= 1");
    const double aa = std::abs(a);
    const double w4 = w_bar * w_bar * w_bar * w_bar;
    // (1-|a|)^4 in the denominator: the form the distribution of x_t actually
    // obeys for negative a as well.
    return w4 * (1.0 + a * a) /
           (std::pow(1.0 - aa, 4) * (1.0 - a * a)) * static_cast<double>(T);
}

std::pair<double, double> lemma3_mc_check(double a, const NoiseModel& model, std::size_t T,
                                          std::size_t reps, RngStream& rng) {
    require_stable_scalar(a);
    if (reps == 0) throw InvalidParam("lemma3_mc_check: need reps >= 1");
    const std::uint64_t base = rng.next_u64();

    auto rollout_sq = [&](std::size_t rep, std::vector<double>& xsq) {
        RngStream stream = RngStream::keyed(base, rep, 0);
        double x = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            const std::vector<double> w = sample_noise(model, 1, stream);
            x = a * x + w[0];
            xsq[t] = x * x;
        }
    };

    std::vector<double> mean_sq(T, 0.0);
    std::vector<double> xsq(T);
    for (std::size_t rep = 0; rep < reps; ++rep) {
        rollout_sq(rep, xsq);
        for (std::size_t t = 0; t < T; ++t) mean_sq[t] += xsq[t];
    }
    for (double& v : mean_sq) v /= static_cast<double>(reps);

    double acc = 0.0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        rollout_sq(rep, xsq);
        double s = 0.0;
        for (std::size_t t = 0; t < T; ++t) s += xsq[t] - mean_sq[t];
        acc += s * s;
    }
    return {acc / static_cast<double>(reps), lemma3_variance_bound(a, model.w_bar, T)};
}

double c4_constant(double a, double w_bar, double sigma_w, double C1) {
    require_stable_scalar(a);
    if (!(w_bar > 0.0) || !(sigma_w > 0.0) || !(C1 > 0.0))
        throw InvalidParam("c4_constant: w_bar, sigma_w, C1 must be positive");
    const double aa = std::abs(a);
    const double a2 = a * a;
    const double s4 = std::pow(sigma_w, 4);
    const double w4 = std::pow(w_bar, 4);
    const double inner = 1.0 / ((1.0 - a2) * (1.0 - a2)) + w4 / ((1.0 - a2 * a2) * s4) +
                         w4 * (1.0 + a2) / (std::pow(1.0 - aa, 4) * (1.0 - a2) * s4);
    return C1 * std::pow(inner, 0.2);
}

double thm2_probability_upper_bound(double a, double eps, std::size_t T, double sigma_w,
                                    double w_bar, const Thm2Constants& consts) {
    require_stable_scalar(a);
    if (!(eps > 0.0)) throw InvalidParam("thm2: eps must be positive");
    if (T < 1) throw InvalidParam("thm2: T must be >= 1");
    if (!(sigma_w > 0.0) || !(w_bar > 0.0))
        throw InvalidParam("thm2: sigma_w and w_bar must be positive");
    const double Td = static_cast<double>(T);
    const double C4 = c4_constant(a, w_bar, sigma_w, consts.C1);
    const double gaussian_branch =
        eps * std::sqrt(Td) / (std::sqrt(2.0 * kPi) * sigma_w) + C4 * std::pow(Td, -0.2);
    const double exponent = -consts.C2 * std::pow(1.0 - a, 4) * (1.0 - a * a) /
                            (2.0 * w_bar * w_bar * Td * std::log(2.0));
    const double tail_branch = consts.C5 * std::exp(exponent);
    return std::clamp(std::min(gaussian_branch, tail_branch), 0.0, 1.0);
}

double state_envelope_bound(double a, double w_bar) {
    require_stable_scalar(a);
    if (!(w_bar > 0.0)) throw InvalidParam("state_envelope_bound: w_bar must be positive");
    return w_bar / (1.0 - std::abs(a));
}

}  // namespace theory
}  // namespace sysid

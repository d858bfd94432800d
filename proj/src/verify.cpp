#include "sysid/verify.hpp"

#include <cmath>
#include <cstdio>

#include "sysid/matrix.hpp"
#include "sysid/system.hpp"
#include "sysid/theory.hpp"

namespace sysid {
namespace verify {

namespace {
std::string fmt(const char* pattern, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}
}  // namespace

std::vector<CheckResult> envelope_checks(std::size_t trajectories, std::size_t T,
                                         std::uint64_t seed) {
    const double w_bar = 2.0;
    const NoiseModel noise = make_noise_model(NoiseKind::Uniform, w_bar);
    std::vector<CheckResult> out;
    std::size_t case_idx = 0;
    for (double a : {0.5, -0.5, 0.9}) {
        SystemMatrix sys = make_system(Matrix::from_rows({{a}}));
        const double bound = theory::state_envelope_bound(a, w_bar);
        double worst = 0.0;
        for (std::size_t k = 0; k < trajectories; ++k) {
            RngStream rng = RngStream::keyed(seed, case_idx * trajectories + k, 10);
            const Trajectory traj = simulate(sys, noise, T, rng);
            for (std::size_t t = 0; t <= T; ++t)
                worst = std::max(worst, std::abs(traj.scalar_state(t)));
        }
        CheckResult r;
        r.name = fmt("envelope a=%+.2f (limit %.4g)", a, bound);
        r.observed = worst;
        r.limit = bound;
        r.pass = worst < bound;  // strict
        r.detail = fmt("max |x_t| = %.6g vs %.6g", worst, bound);
        out.push_back(std::move(r));
        ++case_idx;
    }
    return out;
}

std::vector<CheckResult> lemma3_checks(std::size_t reps, std::uint64_t seed) {
    const NoiseModel noise = make_noise_model(NoiseKind::Uniform, 1.0);
    std::vector<CheckResult> out;
    std::uint64_t tag = 20;
    for (double a : {0.0, 0.5, -0.5, 0.9}) {
        for (std::size_t T : {std::size_t{10}, std::size_t{100}}) {
            RngStream rng = RngStream::keyed(seed, tag++, 20);
            const auto [empirical, bound] = theory::lemma3_mc_check(a, noise, T, reps, rng);
            CheckResult r;
            r.name = fmt("lemma3 a=%+.2f T=%.0f", a, static_cast<double>(T));
            r.observed = empirical;
            r.limit = bound;
            r.pass = empirical <= bound;
            r.detail = fmt("empirical %.6g <= bound %.6g", empirical, bound);
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<CheckResult> tv_checks(std::size_t samples, std::uint64_t seed) {
    const double w_bar = 2.0;
    const double c_w_bar = make_noise_model(NoiseKind::Uniform, w_bar).c_w_bar;
    std::vector<CheckResult> out;
    std::uint64_t tag = 30;
    for (double eps : {0.01, 0.02, 0.05}) {
        for (std::size_t T : {std::size_t{5}, std::size_t{10}, std::size_t{50}}) {
            RngStream rng = RngStream::keyed(seed, tag++, 30);
            const auto est = theory::empirical_tv_uniform(eps, -eps, w_bar, T, samples, rng);
            const auto bound = theory::lemma1_tv_upper_bound(0.0, eps, w_bar, c_w_bar, T);
            CheckResult r;
            r.name = fmt("tv eps=%.3g T=%.0f", eps, static_cast<double>(T));
            r.observed = est.estimate;
            r.limit = bound.value + 3.0 * est.std_error;
            r.pass = est.estimate <= r.limit;
            r.detail = fmt("empirical %.6g <= bound+3se %.6g", est.estimate, r.limit);
            out.push_back(std::move(r));
        }
    }
    return out;
}

bool all_pass(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace verify
}  // namespace sysid

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sysid {
namespace verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double limit = 0.0;
    std::string detail;
};

/// Strict state envelope |x_t| < w_bar / (1 - |a|) for scalar trajectories,
/// a in {+/-0.5, 0.9}, w_bar = 2, `trajectories` rollouts of length T each.
std::vector<CheckResult> envelope_checks(std::size_t trajectories, std::size_t T,
                                         std::uint64_t seed);

/// Second-moment dominance: Monte-Carlo E[(sum(x_t^2 - E x_t^2))^2] against
/// the closed-form bound, a in {0, +/-0.5, 0.9}, T in {10, 100}, uniform
/// noise with w_bar = 1.
std::vector<CheckResult> lemma3_checks(std::size_t reps, std::uint64_t seed);

/// TV sandwich under uniform noise: empirical TV <= analytic bound + 3 SE
/// for mu = 0, eps in {0.01, 0.02, 0.05}, T in {5, 10, 50}, w_bar = 2.
std::vector<CheckResult> tv_checks(std::size_t samples, std::uint64_t seed);

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace verify
}  // namespace sysid

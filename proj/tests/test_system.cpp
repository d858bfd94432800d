#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "sysid/errors.hpp"
#include "sysid/system.hpp"
#include "sysid/theory.hpp"

using namespace sysid;

TEST_CASE("noise model constants") {
    auto u = make_noise_model(NoiseKind::Uniform, 2.0);
    CHECK(u.c_w_bar == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(u.sigma_w_sq == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

    auto g = make_noise_model(NoiseKind::TruncatedGaussian, 2.0, 1.0);
    // alpha = 2: sigma_w^2 = 1 - 2*2*phi(2)/(2 Phi(2) - 1)
    const double phi2 = std::exp(-2.0) / std::sqrt(2.0 * 3.14159265358979323846);
    const double Z = std::erf(2.0 / std::sqrt(2.0));
    CHECK(g.sigma_w_sq == doctest::Approx(1.0 - 4.0 * phi2 / Z).epsilon(1e-12));
    CHECK(g.sigma_w_sq == doctest::Approx(0.77375).epsilon(1e-3));
    CHECK(g.c_w_bar == doctest::Approx(0.25).epsilon(1e-15));
    // boundary-mass consistency: c_w_bar * w_bar >= P(w >= 0) = 1/2
    CHECK(g.c_w_bar * g.w_bar >= 0.5);
    CHECK(u.c_w_bar * u.w_bar >= 0.5);
}

TEST_CASE("noise model parameter validation") {
    CHECK_THROWS_AS(make_noise_model(NoiseKind::Uniform, -1.0), InvalidParam);
    CHECK_THROWS_AS(make_noise_model(NoiseKind::TruncatedGaussian, 2.0, 0.0), InvalidParam);
    // rejection sampling guard: w_bar / sigma must be >= 0.1
    CHECK_THROWS_AS(make_noise_model(NoiseKind::TruncatedGaussian, 0.05, 1.0), InvalidParam);
}

TEST_CASE("noise samples respect the bound and the moments") {
    for (auto kind : {NoiseKind::Uniform, NoiseKind::TruncatedGaussian}) {
        auto model = make_noise_model(kind, 1.5, 1.0);
        RngStream rng(99);
        const std::size_t N = 200000;
        double sum = 0.0, sum2 = 0.0;
        auto draws = sample_noise(model, N, rng);
        for (double w : draws) {
            CHECK(std::abs(w) <= model.w_bar);
            sum += w;
            sum2 += w * w;
        }
        const double mean = sum / N;
        const double var = sum2 / N - mean * mean;
        const double se = std::sqrt(model.sigma_w_sq / N);
        CHECK(std::abs(mean) <= 4.0 * se);
        CHECK(var == doctest::Approx(model.sigma_w_sq).epsilon(0.02));
    }
}

TEST_CASE("truncated gaussian boundary mass obeys the c_w_bar constant") {
    // Assumption-style check: P(w >= w_bar - eps) <= c_w_bar * eps.
    auto model = make_noise_model(NoiseKind::TruncatedGaussian, 2.0, 1.0);
    RngStream rng(1234);
    const std::size_t N = 2000000;
    auto draws = sample_noise(model, N, rng);
    for (double eps : {0.05, 0.1, 0.3}) {
        std::size_t hits = 0;
        for (double w : draws)
            if (w >= model.w_bar - eps) ++hits;
        const double p = double(hits) / N;
        const double se = std::sqrt(p * (1.0 - p) / N);
        CHECK(p <= model.c_w_bar * eps + 3.0 * se);
    }
}

TEST_CASE("sampling is deterministic for a fixed seed") {
    auto model = make_noise_model(NoiseKind::Uniform, 1.0);
    RngStream a(5), b(5);
    CHECK(sample_noise(model, 64, a) == sample_noise(model, 64, b));
}

TEST_CASE("simulate follows the recursion exactly") {
    auto sys = make_system(Matrix::from_rows({{0.5}}));
    auto model = make_noise_model(NoiseKind::Uniform, 1.0);
    RngStream rng(77), replay(77);
    auto traj = simulate(sys, model, 16, rng);
    REQUIRE(traj.T == 16);
    CHECK(traj.scalar_state(0) == 0.0);
    double x = 0.0;
    for (std::size_t t = 0; t < 16; ++t) {
        const double w = sample_noise(model, 1, replay)[0];
        x = 0.5 * x + w;
        CHECK(traj.scalar_state(t + 1) == x);
    }
}

TEST_CASE("simulate with a = 0 reproduces the raw noise shifted by one") {
    auto sys = make_system(Matrix::from_rows({{0.0}}));
    auto model = make_noise_model(NoiseKind::Uniform, 2.0);
    RngStream rng(8), replay(8);
    auto traj = simulate(sys, model, 10, rng);
    auto w = sample_noise(model, 10, replay);
    for (std::size_t t = 0; t < 10; ++t) CHECK(traj.scalar_state(t + 1) == w[t]);
}

TEST_CASE("simulate refuses unstable systems") {
    auto sys = make_system(Matrix::from_rows({{1.05}}));
    auto model = make_noise_model(NoiseKind::Uniform, 1.0);
    RngStream rng(1);
    CHECK_THROWS_AS(simulate(sys, model, 10, rng), UnstableSystem);
}

TEST_CASE("states stay inside the scalar envelope") {
    for (double a : {0.5, -0.5, 0.9}) {
        auto sys = make_system(Matrix::from_rows({{a}}));
        auto model = make_noise_model(NoiseKind::Uniform, 2.0);
        const double env = theory::state_envelope_bound(a, 2.0);
        RngStream rng(static_cast<std::uint64_t>(a * 1000) + 500);
        auto traj = simulate(sys, model, 2000, rng);
        for (std::size_t t = 0; t <= traj.T; ++t)
            CHECK(std::abs(traj.scalar_state(t)) < env);
    }
}

TEST_CASE("stationary second moment stays above the one-step variance") {
    // E[x_t^2] = sigma_w^2 (1 + a^2 + a^4 + ...) >= sigma_w^2 for t >= 1.
    auto sys = make_system(Matrix::from_rows({{0.6}}));
    auto model = make_noise_model(NoiseKind::Uniform, 1.0);
    const std::size_t N = 100000;
    double sum2 = 0.0;
    for (std::size_t r = 0; r < N; ++r) {
        auto rng = RngStream::keyed(42, r, 0);
        auto traj = simulate(sys, model, 3, rng);
        const double x = traj.scalar_state(3);
        sum2 += x * x;
    }
    const double m2 = sum2 / N;
    const double se = model.sigma_w_sq / std::sqrt(double(N));  // crude scale
    CHECK(m2 >= model.sigma_w_sq * (1.0 - 3.0 * se));
}

TEST_CASE("random_system hits the requested spectral radius") {
    RngStream rng(2024);
    for (int rep = 0; rep < 10; ++rep) {
        auto sys = random_system(4, -5.0, 5.0, 0.7, rng);
        CHECK(sys.rho == doctest::Approx(0.7).epsilon(1e-4));
        CHECK(sys.A.all_finite());
        CHECK(sys.n == 4);
    }
}

TEST_CASE("trajectory csv round trip") {
    auto sys = make_system(Matrix::from_rows({{0.3, 0.1}, {-0.2, 0.4}}));
    auto model = make_noise_model(NoiseKind::Uniform, 1.0);
    RngStream rng(17);
    auto traj = simulate(sys, model, 25, rng);
    const std::string path = (std::filesystem::temp_directory_path() / "sysid_rt.csv").string();
    write_trajectory_csv(traj, path);
    auto back = read_trajectory_csv(path);
    CHECK(back.n == traj.n);
    CHECK(back.T == traj.T);
    CHECK(back.states == traj.states);
    std::remove(path.c_str());
}

TEST_CASE("read_trajectory_csv reports missing files") {
    CHECK_THROWS_AS(read_trajectory_csv("/nonexistent/definitely_missing.csv"), IoError);
}

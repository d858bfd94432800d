#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "sysid/errors.hpp"
#include "sysid/estimators.hpp"
#include "sysid/system.hpp"

using namespace sysid;

namespace {

Trajectory from_scalar_states(std::initializer_list<double> xs) {
    Trajectory t;
    t.n = 1;
    t.T = xs.size() - 1;
    t.states.assign(xs.begin(), xs.end());
    return t;
}

Trajectory simulate_random(std::size_t n, std::size_t T, double w_bar, std::uint64_t seed,
                           SystemMatrix& sys_out) {
    RngStream rng(seed);
    sys_out = random_system(n, -5.0, 5.0, 0.7, rng);
    auto model = make_noise_model(NoiseKind::Uniform, w_bar);
    return simulate(sys_out, model, T, rng);
}

// Scalar SME interval [lo, hi] from the constraint list, by direct scan.
std::pair<double, double> scalar_interval(const SmePolytope& P) {
    double lo = -1e300, hi = 1e300;
    for (std::size_t r = 0; r < P.G.rows(); ++r) {
        const double g = P.G(r, 0), off = P.h[0][r];
        if (g > 0)
            hi = std::min(hi, off / g);
        else
            lo = std::max(lo, off / g);
    }
    return {lo, hi};
}

}  // namespace

TEST_CASE("ols matches the hand-solved scalar normal equations") {
    // a_hat = sum x_t x_{t+1} / sum x_t^2
    auto traj = from_scalar_states({0.0, 1.0, 0.8, 0.2});
    auto rep = ols_estimate(traj);
    const double expect = (1.0 * 0.8 + 0.8 * 0.2) / (1.0 + 0.64);
    CHECK(rep.A_hat(0, 0) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(rep.method == Method::OLS);
}

TEST_CASE("ols matches an Eigen least-squares oracle") {
    SystemMatrix sys;
    auto traj = simulate_random(3, 40, 1.0, 606, sys);
    auto rep = ols_estimate(traj);

    Eigen::MatrixXd X(3, 40), Y(3, 40);
    for (int k = 0; k < 40; ++k)
        for (int i = 0; i < 3; ++i) {
            X(i, k) = traj.state(k)[i];
            Y(i, k) = traj.state(k + 1)[i];
        }
    Eigen::MatrixXd Ahat = Y * X.transpose() * (X * X.transpose()).inverse();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(rep.A_hat(i, j) == doctest::Approx(Ahat(i, j)).epsilon(1e-8));
}

TEST_CASE("ols flags a singular gram matrix") {
    auto traj = from_scalar_states({0.0, 0.0, 0.0});
    CHECK_THROWS_AS(ols_estimate(traj), SingularMatrix);
}

TEST_CASE("sme polytope drops the x_0 sample and keeps the rest") {
    auto traj = from_scalar_states({0.0, 2.0, 1.0});
    auto P = sme_polytope(traj, 1.0);
    CHECK(P.G.rows() == 2);  // one kept sample, two halfspaces
    auto [lo, hi] = scalar_interval(P);
    CHECK(lo == doctest::Approx(0.0));
    CHECK(hi == doctest::Approx(1.0));
}

TEST_CASE("scalar sme intersection of two samples") {
    // pairs (2 -> 1) and (1 -> 1.2) with w_bar = 1:
    // intervals [0, 1] and [0.2, 2.2], intersection [0.2, 1].
    auto traj = from_scalar_states({0.0, 2.0, 1.0, 1.2});
    auto P = sme_polytope(traj, 1.0);
    auto [lo, hi] = scalar_interval(P);
    CHECK(lo == doctest::Approx(0.2));
    CHECK(hi == doctest::Approx(1.0));
    RngStream rng(1);
    CHECK(sme_diameter(P, 0, rng) == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("sme_contains is exact on the boundary") {
    auto traj = from_scalar_states({0.0, 2.0, 1.0});
    auto P = sme_polytope(traj, 1.0);  // interval [0, 1]
    CHECK(sme_contains(P, Matrix::from_rows({{0.5}})));
    CHECK(sme_contains(P, Matrix::from_rows({{1.0}})));
    CHECK(sme_contains(P, Matrix::from_rows({{0.0}})));
    CHECK(!sme_contains(P, Matrix::from_rows({{1.01}})));
}

TEST_CASE("true system always lies in its own sme set") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        SystemMatrix sys;
        auto traj = simulate_random(2, 30, 1.5, 1000 + seed, sys);
        auto P = sme_polytope(traj, 1.5);
        CHECK(sme_contains(P, sys.A, 1e-9));
    }
}

TEST_CASE("sme sets are nested in T") {
    SystemMatrix sys;
    auto traj = simulate_random(2, 60, 1.0, 52, sys);
    auto P_long = sme_polytope(TrajectoryView(traj, 60), 1.0);
    auto P_short = sme_polytope(TrajectoryView(traj, 30), 1.0);
    // every member of the long set satisfies the short set's constraints
    RngStream rng(9);
    for (int probe = 0; probe < 50; ++probe) {
        Matrix A(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                A(i, j) = sys.A(i, j) + rng.uniform(-0.5, 0.5);
        if (sme_contains(P_long, A, 1e-12)) CHECK(sme_contains(P_short, A, 1e-9));
    }
}

TEST_CASE("ols_sme returns ols unchanged when already feasible") {
    SystemMatrix sys;
    auto traj = simulate_random(2, 200, 2.0, 7, sys);
    auto P = sme_polytope(traj, 2.0);
    auto ols = ols_estimate(traj);
    if (sme_contains(P, ols.A_hat, 0.0)) {
        auto blend = ols_sme_estimate(traj, 2.0);
        CHECK(blend.A_hat == ols.A_hat);  // bitwise
        CHECK(blend.in_sme_set);
    }
}

TEST_CASE("ols_sme output is the closest feasible point") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        SystemMatrix sys;
        auto traj = simulate_random(2, 10, 0.8, 300 + seed, sys);
        auto P = sme_polytope(traj, 0.8);
        auto ols = ols_estimate(traj);
        auto blend = ols_sme_estimate(traj, 0.8);
        CHECK(sme_contains(P, blend.A_hat, 1e-6));
        for (std::size_t i = 0; i < 2; ++i) {
            std::vector<double> row{ols.A_hat(i, 0), ols.A_hat(i, 1)};
            auto ref = oracles::active_set_qp(Matrix::identity(2), row,
                                              drop_null_constraints(P.row_polyhedron(i)));
            REQUIRE(ref.has_value());
            CHECK(std::abs(blend.A_hat(i, 0) - (*ref)[0]) <= 1e-6);
            CHECK(std::abs(blend.A_hat(i, 1) - (*ref)[1]) <= 1e-6);
        }
    }
}

TEST_CASE("cls matches the constrained active-set oracle") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        SystemMatrix sys;
        auto traj = simulate_random(2, 10, 0.8, 500 + seed, sys);
        auto P = sme_polytope(traj, 0.8);
        auto cls = cls_estimate(traj, 0.8);
        CHECK(sme_contains(P, cls.A_hat, 1e-6));

        // Row i minimizes 0.5 a' (2 X X') a - (2 X y_i)' a over the row set.
        Matrix XXt(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < traj.T; ++k)
                    s += traj.state(k)[i] * traj.state(k)[j];
                XXt(i, j) = s;
            }
        for (std::size_t i = 0; i < 2; ++i) {
            std::vector<double> b(2, 0.0);
            for (std::size_t k = 0; k < traj.T; ++k)
                for (std::size_t j = 0; j < 2; ++j)
                    b[j] += traj.state(k)[j] * traj.state(k + 1)[i];
            auto ref = oracles::active_set_qp(XXt, b,
                                              drop_null_constraints(P.row_polyhedron(i)));
            REQUIRE(ref.has_value());
            CHECK(std::abs(cls.A_hat(i, 0) - (*ref)[0]) <= 1e-6);
            CHECK(std::abs(cls.A_hat(i, 1) - (*ref)[1]) <= 1e-6);
        }
    }
}

TEST_CASE("sse ordering ols <= cls <= ols_sme") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        SystemMatrix sys;
        auto traj = simulate_random(2, 15, 0.6, 800 + seed, sys);
        auto ols = ols_estimate(traj);
        auto cls = cls_estimate(traj, 0.6);
        auto blend = ols_sme_estimate(traj, 0.6);
        const double slack = 1e-6 * (1.0 + blend.residual_sse);
        CHECK(ols.residual_sse <= cls.residual_sse + slack);
        CHECK(cls.residual_sse <= blend.residual_sse + slack);
    }
}

TEST_CASE("cls reports the infeasible row for contradictory data") {
    // data that no scalar a can explain with w_bar = 0.1:
    // (1 -> 1) wants a near 1, (1 -> -1) wants a near -1
    auto traj = from_scalar_states({0.0, 1.0, 1.0, -1.0});
    CHECK_THROWS_AS(cls_estimate(traj, 0.1), Infeasible);
    try {
        cls_estimate(traj, 0.1);
    } catch (const Infeasible& e) {
        CHECK(std::string(e.what()).find("row 0") != std::string::npos);
    }
}

TEST_CASE("sme_diameter matches vertex enumeration on 2d rows") {
    RngStream dir_rng(4);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SystemMatrix sys;
        auto traj = simulate_random(2, 8, 1.0, 900 + seed, sys);
        auto P = sme_polytope(traj, 1.0);
        double ref2 = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            const double di =
                oracles::vertex_diameter(drop_null_constraints(P.row_polyhedron(i)));
            ref2 += di * di;
        }
        const double ref = std::sqrt(ref2);
        const double est = sme_diameter(P, 200, dir_rng);
        CHECK(est <= ref * (1.0 + 1e-8));
        CHECK(est >= 0.8 * ref);
    }
}

TEST_CASE("estimation_error norms") {
    auto A = Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}});
    auto B = Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
    CHECK(estimation_error(A, B, ErrorNorm::Spectral) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(estimation_error(A, B, ErrorNorm::Frobenius) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("report_to_json mentions the method and feasibility") {
    SystemMatrix sys;
    auto traj = simulate_random(1, 30, 1.0, 77, sys);
    auto rep = ols_sme_estimate(traj, 1.0);
    auto js = report_to_json(rep);
    CHECK(js.find("\"method\"") != std::string::npos);
    CHECK(js.find("OLS_SME") != std::string::npos);
    CHECK(js.find("in_sme_set") != std::string::npos);
}

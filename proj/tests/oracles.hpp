// Independent oracles used only by tests. Everything here deliberately avoids
// the solver paths it is checking: norms and spectra come from Eigen's dense
// decompositions, LP values from brute-force vertex enumeration, QP solutions
// from exhaustive active-set enumeration.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "sysid/matrix.hpp"
#include "sysid/numerics.hpp"

namespace oracles {

inline Eigen::MatrixXd to_eigen(const sysid::Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

inline double svd_operator_norm(const sysid::Matrix& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
    return svd.singularValues()(0);
}

inline double eigen_spectral_radius(const sysid::Matrix& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(m), false);
    double rho = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        rho = std::max(rho, std::abs(es.eigenvalues()(i)));
    return rho;
}

// All vertices of {a : G a <= h}: every d-subset of constraints solved as an
// equality system, kept when feasible.
inline std::vector<std::vector<double>> enumerate_vertices(const sysid::Polyhedron& P,
                                                           double feas_tol = 1e-7) {
    const std::size_t m = P.num_constraints();
    const std::size_t d = P.dim();
    std::vector<std::vector<double>> vertices;
    if (d == 0 || m < d) return vertices;
    // iterate over d-combinations of [0, m)
    std::vector<std::size_t> comb(d);
    for (std::size_t i = 0; i < d; ++i) comb[i] = i;
    for (;;) {
        Eigen::MatrixXd N(d, d);
        Eigen::VectorXd rhs(d);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t j = 0; j < d; ++j) N(r, j) = P.G(comb[r], j);
            rhs(r) = P.h[comb[r]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(N);
        if (lu.isInvertible()) {
            Eigen::VectorXd a = lu.solve(rhs);
            std::vector<double> av(d);
            for (std::size_t j = 0; j < d; ++j) av[j] = a(j);
            if (P.max_violation(av) <= feas_tol) vertices.push_back(std::move(av));
        }
        // next combination
        std::size_t k = d;
        while (k-- > 0) {
            if (comb[k] + (d - k) < m) {
                ++comb[k];
                for (std::size_t j = k + 1; j < d; ++j) comb[j] = comb[j - 1] + 1;
                break;
            }
            if (k == 0) return vertices;
        }
    }
}

inline double vertex_lp_max(const std::vector<double>& c, const sysid::Polyhedron& P) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : enumerate_vertices(P)) best = std::max(best, sysid::dot(c, v));
    return best;
}

inline double vertex_diameter(const sysid::Polyhedron& P) {
    const auto vs = enumerate_vertices(P);
    double best = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < vs[i].size(); ++k) {
                const double diff = vs[i][k] - vs[j][k];
                d2 += diff * diff;
            }
            best = std::max(best, std::sqrt(d2));
        }
    return best;
}

// Exhaustive active-set QP: minimize 0.5 a'Qa - b'a s.t. G a <= h by solving
// the KKT equality system for every constraint subset of size <= d and
// keeping the best primal-dual feasible candidate.
inline std::optional<std::vector<double>> active_set_qp(const sysid::Matrix& Q,
                                                        const std::vector<double>& b,
                                                        const sysid::Polyhedron& P,
                                                        double tol = 1e-7) {
    const std::size_t m = P.num_constraints();
    const std::size_t d = P.dim();
    const Eigen::MatrixXd Qe = to_eigen(Q);
    Eigen::VectorXd be(d);
    for (std::size_t j = 0; j < d; ++j) be(j) = b[j];

    double best_obj = std::numeric_limits<double>::infinity();
    std::optional<std::vector<double>> best;

    std::vector<std::vector<std::size_t>> subsets{{}};
    for (std::size_t k = 1; k <= std::min(d, m); ++k) {
        std::vector<std::size_t> comb(k);
        for (std::size_t i = 0; i < k; ++i) comb[i] = i;
        for (;;) {
            subsets.push_back(comb);
            std::size_t j = k;
            bool done = true;
            while (j-- > 0) {
                if (comb[j] + (k - j) < m) {
                    ++comb[j];
                    for (std::size_t t = j + 1; t < k; ++t) comb[t] = comb[t - 1] + 1;
                    done = false;
                    break;
                }
            }
            if (done) break;
        }
    }

    for (const auto& act : subsets) {
        const std::size_t k = act.size();
        Eigen::MatrixXd kkt(d + k, d + k);
        kkt.setZero();
        kkt.topLeftCorner(d, d) = Qe;
        Eigen::VectorXd rhs(d + k);
        rhs.head(d) = be;
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t j = 0; j < d; ++j) {
                kkt(j, d + r) = P.G(act[r], j);
                kkt(d + r, j) = P.G(act[r], j);
            }
            rhs(d + r) = P.h[act[r]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
        if (!lu.isInvertible()) continue;
        Eigen::VectorXd sol = lu.solve(rhs);
        std::vector<double> a(d);
        for (std::size_t j = 0; j < d; ++j) a[j] = sol(j);
        bool ok = P.max_violation(a) <= tol;
        for (std::size_t r = 0; ok && r < k; ++r)
            if (sol(d + r) < -tol) ok = false;
        if (!ok) continue;
        const double obj = 0.5 * (to_eigen(Q) * sol.head(d)).dot(sol.head(d)) -
                           be.dot(sol.head(d));
        if (obj < best_obj - 1e-12) {
            best_obj = obj;
            best = a;
        }
    }
    return best;
}

}  // namespace oracles

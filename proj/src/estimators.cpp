#include "sysid/estimators.hpp"

#include <cmath>
#include <tuple>
#include <utility>

#include <nlohmann/json.hpp>

#include "sysid/errors.hpp"

namespace sysid {

std::string method_name(Method m) {
    switch (m) {
        case Method::OLS: return "OLS";
        case Method::OLS_SME: return "OLS_SME";
        case Method::CLS: return "CLS";
    }
    return "?";
}

Polyhedron SmePolytope::row_polyhedron(std::size_t row) const {
    if (row >= n) throw DimensionMismatch("row_polyhedron: row out of range");
    return Polyhedron(G, h[row]);
}

double residual_sse(TrajectoryView traj, const Matrix& A) {
    const std::size_t n = traj.n();
    if (A.rows() != n || A.cols() != n) throw DimensionMismatch("residual_sse: A shape");
    double sse = 0.0;
    for (std::size_t t = 0; t < traj.T; ++t) {
        const double* x = traj.state(t);
        const double* y = traj.state(t + 1);
        for (std::size_t i = 0; i < n; ++i) {
            double r = y[i];
            for (std::size_t j = 0; j < n; ++j) r -= A(i, j) * x[j];
            sse += r * r;
        }
    }
    return sse;
}

EstimateReport ols_estimate(TrajectoryView traj) {
    const std::size_t n = traj.n();
    const std::size_t T = traj.T;
    // Gram = sum x_t x_t', Cross = sum x_{t+1} x_t' over t = 0..T-1;
    // x_0 = 0 contributes nothing.
    Matrix gram(n, n), cross(n, n);
    for (std::size_t t = 0; t < T; ++t) {
        const double* x = traj.state(t);
        const double* y = traj.state(t + 1);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                gram(i, j) += x[i] * x[j];
                cross(i, j) += y[i] * x[j];
            }
        }
    }
    Matrix At;
    try {
        At = solve_linear(gram, cross.transpose());
    } catch (const SingularMatrix&) {
        throw SingularMatrix("ols_estimate: singular Gram matrix (insufficient excitation)");
    }
    EstimateReport rep;
    rep.method = Method::OLS;
    rep.A_hat = At.transpose();
    rep.residual_sse = residual_sse(traj, rep.A_hat);
    rep.rows.assign(n, RowDiagnostics{});
    return rep;
}

SmePolytope sme_polytope(TrajectoryView traj, double w_bar) {
    if (!(w_bar > 0.0)) throw InvalidParam("sme_polytope: w_bar must be positive");
    const std::size_t n = traj.n();
    const std::size_t T = traj.T;
    SmePolytope P;
    P.n = n;
    P.w_bar = w_bar;
    P.X = Matrix(n, T);
    P.Y = Matrix(n, T);
    for (std::size_t k = 0; k < T; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            P.X(i, k) = traj.state(k)[i];
            P.Y(i, k) = traj.state(k + 1)[i];
        }

    // Keep samples with a non-null regressor; x_0 = 0 always drops out.
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < T; ++k) {
        double n2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) n2 += P.X(i, k) * P.X(i, k);
        if (std::sqrt(n2) >= 1e-12) kept.push_back(k);
    }

    P.G = Matrix(2 * kept.size(), n);
    P.h.assign(n, std::vector<double>(2 * kept.size()));
    for (std::size_t r = 0; r < kept.size(); ++r) {
        const std::size_t k = kept[r];
        for (std::size_t j = 0; j < n; ++j) {
            P.G(2 * r, j) = P.X(j, k);
            P.G(2 * r + 1, j) = -P.X(j, k);
        }
        for (std::size_t i = 0; i < n; ++i) {
            P.h[i][2 * r] = w_bar + P.Y(i, k);
            P.h[i][2 * r + 1] = w_bar - P.Y(i, k);
        }
    }
    return P;
}

bool sme_contains(const SmePolytope& P, const Matrix& A, double tol) {
    if (A.rows() != P.n || A.cols() != P.n) throw DimensionMismatch("sme_contains: A shape");
    if (P.G.rows() == 0) return true;  // no informative samples: whole space
    for (std::size_t i = 0; i < P.n; ++i) {
        std::vector<double> row(P.n);
        for (std::size_t j = 0; j < P.n; ++j) row[j] = A(i, j);
        if (P.row_polyhedron(i).max_violation(row) > tol) return false;
    }
    return true;
}

EstimateReport ols_sme_estimate(TrajectoryView traj, double w_bar, double tol) {
    EstimateReport rep = ols_estimate(traj);
    rep.method = Method::OLS_SME;
    const SmePolytope P = sme_polytope(traj, w_bar);
    if (P.G.rows() > 0) {
        for (std::size_t i = 0; i < P.n; ++i) {
            std::vector<double> row(P.n);
            for (std::size_t j = 0; j < P.n; ++j) row[j] = rep.A_hat(i, j);
            const Polyhedron rowP = P.row_polyhedron(i);
            if (rowP.max_violation(row) <= 0.0) continue;  // feasible row kept bitwise
            QpSolution sol;
            try {
                sol = project_polytope(row, rowP, tol);
            } catch (const Infeasible& e) {
                throw Infeasible("row " + std::to_string(i) + ": " + e.what());
            }
            for (std::size_t j = 0; j < P.n; ++j) rep.A_hat(i, j) = sol.point[j];
            rep.rows[i] = RowDiagnostics{sol.kkt_residual, sol.iterations, sol.converged};
        }
    }
    rep.residual_sse = residual_sse(traj, rep.A_hat);
    rep.in_sme_set = sme_contains(P, rep.A_hat, 1e-6);
    return rep;
}

EstimateReport cls_estimate(TrajectoryView traj, double w_bar, double tol) {
    const std::size_t n = traj.n();
    const std::size_t T = traj.T;
    const SmePolytope P = sme_polytope(traj, w_bar);
    Matrix gram(n, n);
    for (std::size_t t = 0; t < T; ++t) {
        const double* x = traj.state(t);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) gram(i, j) += x[i] * x[j];
    }
    const Matrix Q = gram.scaled(2.0);

    EstimateReport rep;
    rep.method = Method::CLS;
    rep.A_hat = Matrix(n, n);
    rep.rows.assign(n, RowDiagnostics{});
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> b(n, 0.0);
        for (std::size_t t = 0; t < T; ++t) {
            const double* x = traj.state(t);
            const double yi = traj.state(t + 1)[i];
            for (std::size_t j = 0; j < n; ++j) b[j] += 2.0 * yi * x[j];
        }
        QpSolution sol;
        if (P.G.rows() == 0) {
            sol.point = solve_linear(Q, b);
            sol.converged = true;
        } else {
            try {
                sol = qp_solve(Q, b, P.row_polyhedron(i), tol);
            } catch (const Infeasible& e) {
                throw Infeasible("row " + std::to_string(i) + ": " + e.what());
            }
        }
        for (std::size_t j = 0; j < n; ++j) rep.A_hat(i, j) = sol.point[j];
        rep.rows[i] = RowDiagnostics{sol.kkt_residual, sol.iterations, sol.converged};
    }
    rep.residual_sse = residual_sse(traj, rep.A_hat);
    rep.in_sme_set = sme_contains(P, rep.A_hat, 1e-6);
    return rep;
}

double sme_diameter(const SmePolytope& P, std::size_t extra_directions, RngStream& rng) {
    const std::size_t n = P.n;
    if (P.G.rows() == 0) throw Unbounded("sme_diameter: no informative samples");
    std::vector<Polyhedron> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) rows.push_back(P.row_polyhedron(i));

    // Support values are evaluated with a per-row working set of constraints:
    // solve the LP over the subset, scan the full constraint list for a
    // violation at the optimum, add the worst offender, repeat. On
    // termination the point is feasible for the full set, so the value is
    // exact; with many directions per row the working set is shared and most
    // evaluations need one small LP plus one linear scan.
    std::vector<std::vector<std::size_t>> work(n);
    std::vector<std::vector<char>> in_work(n, std::vector<char>(P.G.rows(), 0));

    auto subset_poly = [&](std::size_t row) {
        const std::size_t k = work[row].size();
        Matrix G(k, n);
        std::vector<double> h(k);
        for (std::size_t r = 0; r < k; ++r) {
            const std::size_t src = work[row][r];
            for (std::size_t j = 0; j < n; ++j) G(r, j) = rows[row].G(src, j);
            h[r] = rows[row].h[src];
        }
        return Polyhedron(std::move(G), std::move(h));
    };

    auto add_bounding = [&](std::size_t row, const std::vector<double>& dir) {
        // constraint whose normal points most along dir (normalized); it cuts
        // off the current unbounded ray if anything does
        const Polyhedron& full = rows[row];
        double best_score = 0.0;
        std::size_t best_k = full.num_constraints();
        for (std::size_t k = 0; k < full.num_constraints(); ++k) {
            if (in_work[row][k]) continue;
            double along = 0.0, nn = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                along += full.G(k, j) * dir[j];
                nn += full.G(k, j) * full.G(k, j);
            }
            if (nn == 0.0) continue;
            const double score = along / std::sqrt(nn);
            if (score > best_score) {
                best_score = score;
                best_k = k;
            }
        }
        if (best_k == full.num_constraints()) return false;
        work[row].push_back(best_k);
        in_work[row][best_k] = 1;
        return true;
    };

    auto support = [&](std::size_t row, const std::vector<double>& dir) {
        const Polyhedron& full = rows[row];
        for (;;) {
            if (work[row].empty() && !add_bounding(row, dir))
                throw Unbounded("sme_diameter: unbounded support direction");
            std::vector<double> pt;
            double val;
            try {
                std::tie(pt, val) = lp_solve(dir, subset_poly(row));
            } catch (const Unbounded&) {
                if (!add_bounding(row, dir))
                    throw Unbounded("sme_diameter: unbounded support direction");
                continue;
            }
            std::size_t worst = full.num_constraints();
            double worst_v = 0.0;
            for (std::size_t k = 0; k < full.num_constraints(); ++k) {
                if (in_work[row][k]) continue;
                double v = -full.h[k];
                for (std::size_t j = 0; j < n; ++j) v += full.G(k, j) * pt[j];
                if (v > worst_v) {
                    worst_v = v;
                    worst = k;
                }
            }
            if (worst == full.num_constraints() || worst_v <= 1e-9 * (1.0 + std::abs(val)))
                return val;
            work[row].push_back(worst);
            in_work[row][worst] = 1;
        }
    };

    auto width = [&](std::size_t row, const std::vector<double>& dir) {
        std::vector<double> neg(dir.size());
        for (std::size_t j = 0; j < dir.size(); ++j) neg[j] = -dir[j];
        return support(row, dir) + support(row, neg);
    };

    double best = 0.0;
    // Coordinate directions E_ij: only row i contributes.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> e(n, 0.0);
            e[j] = 1.0;
            best = std::max(best, width(i, e));
        }
    }
    // Random unit-Frobenius matrix directions; widths add row-wise.
    for (std::size_t k = 0; k < extra_directions; ++k) {
        Matrix D(n, n);
        for (double& v : D.data()) v = rng.normal();
        const double nf = D.frobenius_norm();
        if (nf == 0.0) continue;
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> dir(n);
            for (std::size_t j = 0; j < n; ++j) dir[j] = D(i, j) / nf;
            w += width(i, dir);
        }
        best = std::max(best, w);
    }
    return best;
}

double estimation_error(const Matrix& A_hat, const Matrix& A_true, ErrorNorm norm) {
    if (A_hat.rows() != A_true.rows() || A_hat.cols() != A_true.cols())
        throw DimensionMismatch("estimation_error: shape mismatch");
    const Matrix diff = A_hat - A_true;
    return norm == ErrorNorm::Spectral ? operator_norm(diff) : diff.frobenius_norm();
}

std::string report_to_json(const EstimateReport& report) {
    nlohmann::json j;
    j["method"] = method_name(report.method);
    j["n"] = report.A_hat.rows();
    j["A_hat"] = report.A_hat.data();
    j["residual_sse"] = report.residual_sse;
    j["in_sme_set"] = report.in_sme_set;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"kkt_residual", r.kkt_residual},
                        {"iterations", r.iterations},
                        {"converged", r.converged}});
    }
    j["rows"] = rows;
    return j.dump(2);
}

}  // namespace sysid

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sysid/matrix.hpp"

namespace sysid {

/// Halfspace set { a : G a <= h } componentwise. May be empty or unbounded;
/// both are detected by the solvers, never assumed away.
struct Polyhedron {
    Matrix G;               // m x d constraint normals
    std::vector<double> h;  // m offsets

    Polyhedron() = default;
    Polyhedron(Matrix g, std::vector<double> offs);

    std::size_t num_constraints() const { return G.rows(); }
    std::size_t dim() const { return G.cols(); }

    /// Largest of (g_i . a - h_i); <= 0 means feasible.
    double max_violation(const std::vector<double>& a) const;
};

/// Drop constraints whose normal has 2-norm below `tol` (vacuous rows, e.g.
/// the x_0 = 0 sample). A dropped row with h_i < -tol would be infeasible by
/// itself and is kept as-is so the solvers can report it.
Polyhedron drop_null_constraints(const Polyhedron& p, double tol = 1e-12);

struct QpSolution {
    std::vector<double> point;
    double objective = 0.0;
    double kkt_residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> multipliers;
};

inline constexpr double kQpDefaultTol = 1e-8;
inline constexpr double kLpPivotTol = 1e-10;

/// Solve M X = B for square M via LU with partial pivoting.
/// Throws SingularMatrix when a pivot falls below 1e-12 * max initial |entry|.
Matrix solve_linear(const Matrix& M, const Matrix& B);

std::vector<double> solve_linear(const Matrix& M, const std::vector<double>& b);

/// Largest singular value via power iteration on M^T M; deterministic.
double operator_norm(const Matrix& M);

/// Spectral radius via Gelfand iteration rho ~ ||M^(2^k)||^(1/2^k) with
/// renormalized repeated squaring. Throws DidNotConverge after 60 squarings
/// unless accept_nonconverged, in which case the last estimate is returned.
double spectral_radius(const Matrix& M, bool accept_nonconverged = false);

/// Maximize c.a over the polyhedron; dense simplex with Bland's rule.
/// Returns an optimal point and the optimal value.
/// Throws Infeasible / Unbounded.
std::pair<std::vector<double>, double> lp_solve(const std::vector<double>& c,
                                                const Polyhedron& P);

/// Minimize 0.5 a'Qa - b'a subject to G a <= h via Hildreth dual coordinate
/// ascent. Q must be positive definite. max_iter counts single-constraint
/// dual updates; 0 means the default 200 * m.
QpSolution qp_solve(const Matrix& Q, const std::vector<double>& b, const Polyhedron& P,
                    double tol = kQpDefaultTol, std::size_t max_iter = 0);

/// Euclidean projection of p onto the polyhedron (qp_solve with Q = I).
QpSolution project_polytope(const std::vector<double>& p, const Polyhedron& P,
                            double tol = kQpDefaultTol, std::size_t max_iter = 0);

/// OLS fit of log(err) against log(T). Throws DegenerateInput when all T
/// coincide or some err <= 0.
std::pair<double, double> fit_loglog_slope(
    const std::vector<std::pair<std::size_t, double>>& points);

}  // namespace sysid

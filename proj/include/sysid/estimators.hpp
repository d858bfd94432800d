#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sysid/matrix.hpp"
#include "sysid/numerics.hpp"
#include "sysid/rng.hpp"
#include "sysid/system.hpp"

namespace sysid {

enum class Method { OLS, OLS_SME, CLS };

std::string method_name(Method m);

/// Membership set of all A consistent with the data under the noise bound:
///     ||x_k - A x_{k-1}||_inf <= w_bar  for k in [T].
/// Row-decoupled: every row a_i of A satisfies the same constraint normals
/// (+/- x_{k-1}) with row-specific offsets w_bar +/- x_k(i). Constraints with
/// a null normal (the k = 1 sample, since x_0 = 0) are dropped.
struct SmePolytope {
    std::size_t n = 0;
    double w_bar = 0.0;
    Matrix X;  // n x T, columns x_0..x_{T-1}
    Matrix Y;  // n x T, columns x_1..x_T

    Matrix G;                              // shared normals, 2 * kept samples rows
    std::vector<std::vector<double>> h;    // per-row offsets, n vectors

    Polyhedron row_polyhedron(std::size_t row) const;
};

struct RowDiagnostics {
    double kkt_residual = 0.0;
    std::size_t iterations = 0;
    bool converged = true;
};

struct EstimateReport {
    Method method = Method::OLS;
    Matrix A_hat;
    double residual_sse = 0.0;
    bool in_sme_set = false;
    std::vector<RowDiagnostics> rows;
};

/// Exact minimizer of sum_t ||x_{t+1} - A x_t||^2 via the normal equations.
/// Throws SingularMatrix when the Gram matrix is (near) singular.
EstimateReport ols_estimate(TrajectoryView traj);

SmePolytope sme_polytope(TrajectoryView traj, double w_bar);

/// True iff every constraint of every row holds within tol (closed set:
/// exactly tight constraints pass).
bool sme_contains(const SmePolytope& P, const Matrix& A, double tol = 1e-9);

/// OLS followed, when needed, by the Frobenius-norm projection onto the SME
/// set; rows already feasible are returned bitwise.
EstimateReport ols_sme_estimate(TrajectoryView traj, double w_bar,
                                double tol = kQpDefaultTol);

/// Least squares minimized over the SME set, one QP per row.
EstimateReport cls_estimate(TrajectoryView traj, double w_bar, double tol = kQpDefaultTol);

/// Lower-bounding estimate of the Frobenius diameter of the SME set: maximal
/// directional width over all coordinate directions plus `extra_directions`
/// random unit-Frobenius directions. Exact for n = 1.
double sme_diameter(const SmePolytope& P, std::size_t extra_directions, RngStream& rng);

enum class ErrorNorm { Spectral, Frobenius };

double estimation_error(const Matrix& A_hat, const Matrix& A_true, ErrorNorm norm);

/// Sum of squared one-step residuals of A over the (prefix of the) data.
double residual_sse(TrajectoryView traj, const Matrix& A);

std::string report_to_json(const EstimateReport& report);

}  // namespace sysid

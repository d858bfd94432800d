#include "sysid/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "sysid/errors.hpp"

namespace sysid {

Polyhedron::Polyhedron(Matrix g, std::vector<double> offs) : G(std::move(g)), h(std::move(offs)) {
    if (G.rows() != h.size()) throw DimensionMismatch("Polyhedron: G rows != h size");
    if (G.rows() == 0) throw InvalidParam("Polyhedron: need at least one constraint");
    if (!G.all_finite()) throw InvalidParam("Polyhedron: non-finite constraint normal");
}

double Polyhedron::max_violation(const std::vector<double>& a) const {
    if (a.size() != dim()) throw DimensionMismatch("max_violation: point dimension");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < num_constraints(); ++i) {
        double s = -h[i];
        const double* g = G.row_ptr(i);
        for (std::size_t j = 0; j < dim(); ++j) s += g[j] * a[j];
        worst = std::max(worst, s);
    }
    return worst;
}

Polyhedron drop_null_constraints(const Polyhedron& p, double tol) {
    const std::size_t d = p.dim();
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < p.num_constraints(); ++i) {
        double n2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) n2 += p.G(i, j) * p.G(i, j);
        if (std::sqrt(n2) >= tol) {
            keep.push_back(i);
        } else if (p.h[i] < -1e-9) {
            // 0 <= h_i fails: the row alone is inconsistent.
            throw Infeasible("constraint with null normal and negative offset");
        }
    }
    if (keep.empty()) throw InvalidParam("all constraints vacuous");
    Matrix G(keep.size(), d);
    std::vector<double> h(keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        for (std::size_t j = 0; j < d; ++j) G(r, j) = p.G(keep[r], j);
        h[r] = p.h[keep[r]];
    }
    return Polyhedron(std::move(G), std::move(h));
}

// ---------------------------------------------------------------------------
// Linear solve
// ---------------------------------------------------------------------------

Matrix solve_linear(const Matrix& M, const Matrix& B) {
    if (M.rows() != M.cols()) throw DimensionMismatch("solve_linear: M not square");
    if (M.rows() != B.rows()) throw DimensionMismatch("solve_linear: B row count");
    const std::size_t n = M.rows();
    const std::size_t k = B.cols();
    Matrix lu = M;
    Matrix x = B;
    const double pivot_floor = 1e-12 * lu.max_abs();

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(lu(r, col)) > std::abs(lu(piv, col))) piv = r;
        if (std::abs(lu(piv, col)) <= pivot_floor)
            throw SingularMatrix("solve_linear: pivot below threshold");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(piv, j));
            for (std::size_t j = 0; j < k; ++j) std::swap(x(col, j), x(piv, j));
        }
        const double d = lu(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = lu(r, col) / d;
            if (f == 0.0) continue;
            for (std::size_t j = col + 1; j < n; ++j) lu(r, j) -= f * lu(col, j);
            for (std::size_t j = 0; j < k; ++j) x(r, j) -= f * x(col, j);
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        const double d = lu(col, col);
        for (std::size_t j = 0; j < k; ++j) x(col, j) /= d;
        for (std::size_t r = 0; r < col; ++r) {
            const double f = lu(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < k; ++j) x(r, j) -= f * x(col, j);
        }
    }
    return x;
}

std::vector<double> solve_linear(const Matrix& M, const std::vector<double>& b) {
    Matrix B(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) B(i, 0) = b[i];
    Matrix X = solve_linear(M, B);
    std::vector<double> x(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) x[i] = X(i, 0);
    return x;
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

double operator_norm(const Matrix& M) {
    if (M.empty() || M.max_abs() == 0.0) return 0.0;
    const std::size_t d = M.cols();
    const Matrix Mt = M.transpose();
    double best = 0.0;
    // Power iteration on M^T M with a few deterministic restarts.
    for (std::uint64_t restart = 0; restart < 3; ++restart) {
        std::mt19937_64 eng(0xC0FFEEULL + restart);
        std::vector<double> v(d);
        for (double& vi : v) vi = static_cast<double>(eng() >> 11) * 0x1.0p-53 - 0.5;
        double nv = norm2(v);
        if (nv == 0.0) continue;
        for (double& vi : v) vi /= nv;
        double sigma = 0.0;
        for (int iter = 0; iter < 50000; ++iter) {
            std::vector<double> mv = M * v;
            const double s = norm2(mv);
            std::vector<double> w = Mt * mv;
            const double nw = norm2(w);
            if (nw == 0.0) {
                sigma = s;
                break;
            }
            for (std::size_t j = 0; j < d; ++j) v[j] = w[j] / nw;
            if (std::abs(s - sigma) <= 1e-10 * (s + 1e-300)) {
                sigma = s;
                break;
            }
            sigma = s;
        }
        best = std::max(best, sigma);
    }
    return best;
}

double spectral_radius(const Matrix& M, bool accept_nonconverged) {
    if (M.rows() != M.cols()) throw DimensionMismatch("spectral_radius: not square");
    if (!M.all_finite()) throw InvalidParam("spectral_radius: non-finite entries");
    if (M.max_abs() == 0.0) return 0.0;

    Matrix B = M;
    double log_sum = 0.0;
    double scale = 1.0;  // 1 / 2^(k-1)
    double prev = -1.0;
    double est = 0.0;
    for (int k = 1; k <= 60; ++k) {
        const double nrm = operator_norm(B);
        if (nrm == 0.0) return 0.0;  // nilpotent
        log_sum += std::log(nrm) * scale;
        est = std::exp(log_sum);
        if (k >= 2 && std::abs(est - prev) < 1e-5 * std::max(est, 1e-300)) return est;
        prev = est;
        B = B.scaled(1.0 / nrm);
        B = B * B;
        scale *= 0.5;
    }
    if (accept_nonconverged) return est;
    throw DidNotConverge("spectral_radius: Gelfand iteration did not stabilize");
}

// ---------------------------------------------------------------------------
// Linear programming
// ---------------------------------------------------------------------------

namespace {

// Simplex over the dual of max{c.a : G a <= h}:
//     min h'y   s.t.  G'y = c,  y >= 0.
// The tableau has d rows and m + d columns (d artificials), so the method
// stays cheap when d is tiny and m is large, which is the shape of every SME
// polytope here. Bland's rule throughout.
class DualSimplex {
  public:
    DualSimplex(const Polyhedron& P, const std::vector<double>& c)
        : m_(P.num_constraints()), d_(P.dim()), ncols_(m_ + d_), tab_(d_, ncols_ + 1),
          basis_(d_), row_active_(d_, true) {
        for (std::size_t i = 0; i < d_; ++i) {
            const double s = c[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < m_; ++j) tab_(i, j) = s * P.G(j, i);
            tab_(i, m_ + i) = 1.0;
            tab_(i, ncols_) = s * c[i];
            basis_[i] = m_ + i;
        }
    }

    // Returns false when the phase objective is unbounded below.
    bool run(const std::vector<double>& cost, bool allow_artificial) {
        for (;;) {
            std::size_t enter = ncols_;
            double enter_rc = 0.0;
            for (std::size_t j = 0; j < ncols_; ++j) {
                if (!allow_artificial && j >= m_) break;
                if (is_basic(j)) continue;
                double rc = cost[j];
                for (std::size_t i = 0; i < d_; ++i) {
                    if (!row_active_[i]) continue;
                    rc -= cost[basis_[i]] * tab_(i, j);
                }
                if (rc < -kLpPivotTol) {
                    enter = j;
                    enter_rc = rc;
                    break;  // Bland: lowest index
                }
            }
            (void)enter_rc;
            if (enter == ncols_) return true;  // optimal

            std::size_t leave = d_;
            double best_ratio = 0.0;
            for (std::size_t i = 0; i < d_; ++i) {
                if (!row_active_[i]) continue;
                const double a = tab_(i, enter);
                if (a <= kLpPivotTol) continue;
                const double ratio = tab_(i, ncols_) / a;
                if (leave == d_ || ratio < best_ratio - 1e-15 ||
                    (std::abs(ratio - best_ratio) <= 1e-15 && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == d_) return false;  // unbounded
            pivot(leave, enter);
        }
    }

    double objective(const std::vector<double>& cost) const {
        double v = 0.0;
        for (std::size_t i = 0; i < d_; ++i)
            if (row_active_[i]) v += cost[basis_[i]] * tab_(i, ncols_);
        return v;
    }

    // Push zero-level artificials out of the basis; rows that cannot be
    // cleared correspond to redundant equations and are deactivated.
    void drive_out_artificials() {
        for (std::size_t i = 0; i < d_; ++i) {
            if (!row_active_[i] || basis_[i] < m_) continue;
            std::size_t enter = ncols_;
            for (std::size_t j = 0; j < m_; ++j) {
                if (is_basic(j)) continue;
                if (std::abs(tab_(i, j)) > kLpPivotTol) {
                    enter = j;
                    break;
                }
            }
            if (enter == ncols_) {
                row_active_[i] = false;
            } else {
                pivot(i, enter);
            }
        }
    }

    std::size_t num_artificials_basic() const {
        std::size_t k = 0;
        for (std::size_t i = 0; i < d_; ++i)
            if (row_active_[i] && basis_[i] >= m_) ++k;
        return k;
    }

    std::vector<std::pair<std::size_t, double>> basic_constraints() const {
        std::vector<std::pair<std::size_t, double>> out;
        for (std::size_t i = 0; i < d_; ++i)
            if (row_active_[i] && basis_[i] < m_) out.emplace_back(basis_[i], tab_(i, ncols_));
        return out;
    }

    std::size_t num_real_vars() const { return m_; }

  private:
    bool is_basic(std::size_t j) const {
        for (std::size_t i = 0; i < d_; ++i)
            if (row_active_[i] && basis_[i] == j) return true;
        return false;
    }

    void pivot(std::size_t row, std::size_t col) {
        const double p = tab_(row, col);
        for (std::size_t j = 0; j <= ncols_; ++j) tab_(row, j) /= p;
        for (std::size_t i = 0; i < d_; ++i) {
            if (i == row || !row_active_[i]) continue;
            const double f = tab_(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= ncols_; ++j) tab_(i, j) -= f * tab_(row, j);
        }
        basis_[row] = col;
    }

    std::size_t m_, d_, ncols_;
    Matrix tab_;
    std::vector<std::size_t> basis_;
    std::vector<bool> row_active_;
};

std::pair<std::vector<double>, double> lp_solve_impl(const std::vector<double>& c,
                                                     const Polyhedron& P, bool allow_recovery);

// Smallest t >= 0 with G a <= h + t*1 for some a. Zero iff P is feasible;
// the minimizing a doubles as a recovered feasible point.
std::pair<std::vector<double>, double> feasibility_gap(const Polyhedron& P) {
    const std::size_t m = P.num_constraints();
    const std::size_t d = P.dim();
    Matrix G2(m + 1, d + 1);
    std::vector<double> h2(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < d; ++j) G2(i, j) = P.G(i, j);
        G2(i, d) = -1.0;
        h2[i] = P.h[i];
    }
    G2(m, d) = -1.0;  // t >= 0
    h2[m] = 0.0;
    std::vector<double> c2(d + 1, 0.0);
    c2[d] = -1.0;  // maximize -t
    auto [pt, val] = lp_solve_impl(c2, Polyhedron(std::move(G2), std::move(h2)), false);
    std::vector<double> a(pt.begin(), pt.begin() + static_cast<std::ptrdiff_t>(d));
    return {a, -val};
}

std::pair<std::vector<double>, double> lp_solve_impl(const std::vector<double>& c,
                                                     const Polyhedron& P0, bool allow_recovery) {
    const Polyhedron P = drop_null_constraints(P0);
    const std::size_t m = P.num_constraints();
    const std::size_t d = P.dim();
    if (c.size() != d) throw DimensionMismatch("lp_solve: objective dimension");

    DualSimplex sx(P, c);

    // Phase 1: minimize the artificial mass to find y >= 0 with G'y = c.
    std::vector<double> cost1(m + d, 0.0);
    for (std::size_t j = m; j < m + d; ++j) cost1[j] = 1.0;
    if (!sx.run(cost1, true)) throw Infeasible("lp_solve: dual phase-1 unbounded");
    const double scale = 1.0 + max_abs(c);
    if (sx.objective(cost1) > 1e-9 * scale) {
        // c is not in the cone of constraint normals: the primal is unbounded
        // along c unless it is empty outright.
        if (allow_recovery && feasibility_gap(P).second > 1e-9) {
            throw Infeasible("lp_solve: empty feasible set");
        }
        throw Unbounded("lp_solve: objective unbounded over the feasible set");
    }
    sx.drive_out_artificials();

    // Phase 2: minimize h'y over the dual feasible region.
    std::vector<double> cost2(m + d, 0.0);
    for (std::size_t j = 0; j < m; ++j) cost2[j] = P.h[j];
    if (!sx.run(cost2, false)) throw Infeasible("lp_solve: empty feasible set");
    const double value = sx.objective(cost2);

    // Primal vertex from the active constraints (complementary slackness).
    const auto active = sx.basic_constraints();
    std::vector<double> a(d, 0.0);
    bool extracted = false;
    if (!active.empty()) {
        const std::size_t k = active.size();
        Matrix N(k, d);
        std::vector<double> rhs(k);
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t j = 0; j < d; ++j) N(r, j) = P.G(active[r].first, j);
            rhs[r] = P.h[active[r].first];
        }
        try {
            if (k == d) {
                a = solve_linear(N, rhs);
            } else {
                // Least-norm point on the active face.
                Matrix NNt = N * N.transpose();
                std::vector<double> z = solve_linear(NNt, rhs);
                a = N.transpose() * z;
            }
            extracted = true;
        } catch (const SingularMatrix&) {
            extracted = false;
        }
    }
    const double feas_tol = 1e-6 * (1.0 + max_abs(P.h));
    if ((!extracted || P.max_violation(a) > feas_tol) && allow_recovery) {
        a = feasibility_gap(P).first;  // degenerate basis; keep the dual value
    }
    return {a, value};
}

}  // namespace

std::pair<std::vector<double>, double> lp_solve(const std::vector<double>& c,
                                                const Polyhedron& P) {
    return lp_solve_impl(c, P, true);
}

// ---------------------------------------------------------------------------
// Quadratic programming (Hildreth dual coordinate ascent)
// ---------------------------------------------------------------------------

QpSolution qp_solve(const Matrix& Q, const std::vector<double>& b, const Polyhedron& P0,
                    double tol, std::size_t max_iter) {
    if (Q.rows() != Q.cols()) throw DimensionMismatch("qp_solve: Q not square");
    if (Q.rows() != b.size()) throw DimensionMismatch("qp_solve: b dimension");
    const Polyhedron P = drop_null_constraints(P0);
    const std::size_t d = Q.rows();
    const std::size_t m = P.num_constraints();
    if (P.dim() != d) throw DimensionMismatch("qp_solve: polyhedron dimension");
    if (max_iter == 0) max_iter = 200 * m;

    const Matrix Qinv = solve_linear(Q, Matrix::identity(d));
    std::vector<double> a0 = Qinv * b;

    // Per-constraint data: qcol_i = Qinv g_i, mdiag_i = g_i . qcol_i.
    std::vector<double> qcol(m * d);
    std::vector<double> mdiag(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t r = 0; r < d; ++r) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += Qinv(r, j) * P.G(i, j);
            qcol[i * d + r] = s;
        }
        double md = 0.0;
        for (std::size_t j = 0; j < d; ++j) md += P.G(i, j) * qcol[i * d + j];
        if (md <= 0.0) throw InvalidParam("qp_solve: Q not positive definite on a constraint");
        mdiag[i] = md;
    }

    std::vector<double> lambda(m, 0.0);
    std::vector<double> a = a0;
    std::size_t updates = 0;
    bool converged = false;
    double viol = 0.0, comp = 0.0;
    std::size_t sweep = 0;

    auto refresh_point = [&] {
        a = a0;
        for (std::size_t i = 0; i < m; ++i) {
            const double li = lambda[i];
            if (li == 0.0) continue;
            for (std::size_t r = 0; r < d; ++r) a[r] -= li * qcol[i * d + r];
        }
    };

    while (updates < max_iter) {
        ++sweep;
        for (std::size_t i = 0; i < m && updates < max_iter; ++i) {
            double slack = -P.h[i];
            for (std::size_t j = 0; j < d; ++j) slack += P.G(i, j) * a[j];
            const double lnew = std::max(0.0, lambda[i] + slack / mdiag[i]);
            const double delta = lnew - lambda[i];
            ++updates;
            if (delta == 0.0) continue;
            lambda[i] = lnew;
            for (std::size_t r = 0; r < d; ++r) a[r] -= delta * qcol[i * d + r];
        }
        if (sweep % 64 == 0) refresh_point();  // undo incremental-update drift

        viol = 0.0;
        comp = 0.0;
        double lmax = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double slack = -P.h[i];
            for (std::size_t j = 0; j < d; ++j) slack += P.G(i, j) * a[j];
            viol = std::max(viol, slack);
            comp = std::max(comp, std::abs(lambda[i] * slack));
            lmax = std::max(lmax, lambda[i]);
        }
        if (viol <= tol && comp <= tol) {
            converged = true;
            break;
        }
        if (lmax > 1e10 && viol > std::sqrt(tol)) {
            throw Infeasible("qp_solve: dual diverging, constraints appear inconsistent");
        }
    }
    refresh_point();

    // Hildreth identifies the optimal active set quickly but can crawl toward
    // the exact multiplier values when active constraints are nearly parallel.
    // Polish the iterate: solve the equality KKT system on the rows the
    // multipliers flag as active, dropping rows that come back with negative
    // multipliers, and accept the result only if the full KKT check passes.
    {
        std::vector<std::size_t> act;
        for (std::size_t i = 0; i < m; ++i)
            if (lambda[i] > 0.0) act.push_back(i);
        std::sort(act.begin(), act.end(),
                  [&](std::size_t x, std::size_t y) { return lambda[x] > lambda[y]; });
        if (act.size() > d) act.resize(d);
        while (!act.empty() || !converged) {
            const std::size_t k = act.size();
            // [Q G_A'; G_A 0] [a; mu] = [b; h_A]
            Matrix kkt(d + k, d + k);
            std::vector<double> rhs(d + k);
            for (std::size_t r = 0; r < d; ++r) {
                for (std::size_t c = 0; c < d; ++c) kkt(r, c) = Q(r, c);
                rhs[r] = b[r];
            }
            for (std::size_t r = 0; r < k; ++r) {
                for (std::size_t c = 0; c < d; ++c) {
                    kkt(c, d + r) = P.G(act[r], c);
                    kkt(d + r, c) = P.G(act[r], c);
                }
                rhs[d + r] = P.h[act[r]];
            }
            std::vector<double> sol_vec;
            try {
                sol_vec = solve_linear(kkt, rhs);
            } catch (const SingularMatrix&) {
                act.pop_back();  // weakest candidate first
                continue;
            }
            // drop the most negative refined multiplier, if any
            std::size_t worst = k;
            double worst_mu = -1e-10;
            for (std::size_t r = 0; r < k; ++r)
                if (sol_vec[d + r] < worst_mu) {
                    worst_mu = sol_vec[d + r];
                    worst = r;
                }
            if (worst < k) {
                act.erase(act.begin() + static_cast<std::ptrdiff_t>(worst));
                continue;
            }
            std::vector<double> cand(sol_vec.begin(), sol_vec.begin() + d);
            double cviol = P.max_violation(cand);
            if (cviol <= tol) {
                a = cand;
                std::fill(lambda.begin(), lambda.end(), 0.0);
                for (std::size_t r = 0; r < k; ++r) lambda[act[r]] = sol_vec[d + r];
                converged = true;
                viol = cviol;
            }
            break;
        }
    }

    // Separate "ran out of iterations" from "there is nothing to converge to":
    // a persistent primal violation on an empty feasible set would otherwise
    // surface as converged = false. The gap LP settles it definitively.
    if (!converged && viol > std::sqrt(tol)) {
        Matrix Ggap(m, d + 1);
        std::vector<double> hgap(P.h);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < d; ++j) Ggap(i, j) = P.G(i, j);
            Ggap(i, d) = -1.0;
        }
        std::vector<double> cgap(d + 1, 0.0);
        cgap[d] = -1.0;  // maximize -t, i.e. minimize the violation gap t
        Polyhedron gap(std::move(Ggap), std::move(hgap));
        try {
            const double best_gap = -lp_solve(cgap, gap).second;
            if (best_gap > std::sqrt(tol))
                throw Infeasible("qp_solve: feasibility gap " + std::to_string(best_gap));
        } catch (const Unbounded&) {
            // the gap can be driven to -inf, so the set is certainly nonempty
        }
    }

    QpSolution sol;
    sol.point = a;
    sol.iterations = updates;
    sol.multipliers = std::move(lambda);

    // KKT residuals at the final iterate.
    viol = 0.0;
    comp = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double slack = -P.h[i];
        for (std::size_t j = 0; j < d; ++j) slack += P.G(i, j) * a[j];
        viol = std::max(viol, slack);
        comp = std::max(comp, std::abs(sol.multipliers[i] * slack));
    }
    std::vector<double> grad = Q * a;  // Qa - b + G'lambda
    for (std::size_t j = 0; j < d; ++j) grad[j] -= b[j];
    for (std::size_t i = 0; i < m; ++i) {
        const double li = sol.multipliers[i];
        if (li == 0.0) continue;
        for (std::size_t j = 0; j < d; ++j) grad[j] += li * P.G(i, j);
    }
    const double stat = max_abs(grad) / (1.0 + max_abs(b));
    sol.kkt_residual = std::max({viol, comp, stat});
    sol.converged = converged && sol.kkt_residual <= tol;

    double quad = 0.0;
    const std::vector<double> qa = Q * a;
    for (std::size_t j = 0; j < d; ++j) quad += 0.5 * a[j] * qa[j] - b[j] * a[j];
    sol.objective = quad;
    return sol;
}

QpSolution project_polytope(const std::vector<double>& p, const Polyhedron& P, double tol,
                            std::size_t max_iter) {
    return qp_solve(Matrix::identity(p.size()), p, P, tol, max_iter);
}

// ---------------------------------------------------------------------------
// Log-log regression
// ---------------------------------------------------------------------------

std::pair<double, double> fit_loglog_slope(
    const std::vector<std::pair<std::size_t, double>>& points) {
    if (points.size() < 2) throw DegenerateInput("fit_loglog_slope: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(points.size());
    bool distinct = false;
    for (const auto& [t, err] : points) {
        if (t == 0) throw DegenerateInput("fit_loglog_slope: T = 0");
        if (!(err > 0.0)) throw DegenerateInput("fit_loglog_slope: nonpositive error");
        if (t != points.front().first) distinct = true;
        const double x = std::log(static_cast<double>(t));
        const double y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    if (!distinct) throw DegenerateInput("fit_loglog_slope: all T equal");
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    return {slope, intercept};
}

}  // namespace sysid

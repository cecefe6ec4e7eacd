#pragma once

// Dense two-phase tableau simplex with Bland's rule. Problem sizes here are
// small (tens of variables, hundreds of rows), and Bland's rule keeps the
// pivot sequence deterministic and cycle-free.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "anosov/error.hpp"
#include "anosov/linalg.hpp"

namespace anosov {

inline constexpr double kLpTol = 1e-9;

enum class LpStatus { optimal, infeasible, unbounded };

inline const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "optimal";
}

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    VecR point;
    double value = 0.0;
};

namespace detail {

class Tableau {
public:
    // rows x (cols + 1); the last column is the right-hand side.
    MatR t;
    std::vector<int> basis;

    int rows() const { return static_cast<int>(t.rows()); }
    int cols() const { return static_cast<int>(t.cols()) - 1; }

    void pivot(int r, int c) {
        t.row(r) /= t(r, c);
        for (int i = 0; i < rows(); ++i) {
            if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
        }
        basis[static_cast<std::size_t>(r)] = c;
    }

    /// Reduced costs of objective vector obj (maximize) at the current basis.
    VecR reduced_costs(const VecR& obj) const {
        VecR cb(rows());
        for (int i = 0; i < rows(); ++i) cb[i] = obj[basis[static_cast<std::size_t>(i)]];
        VecR rc = obj.transpose() - cb.transpose() * t.leftCols(cols());
        return rc;
    }

    /// Maximizes obj over the allowed columns. Returns false if unbounded.
    bool optimize(const VecR& obj, const std::vector<bool>& allowed, double tol) {
        const int cap = 50 * (rows() + cols()) + 1000;
        for (int iter = 0; iter < cap; ++iter) {
            const VecR rc = reduced_costs(obj);
            int enter = -1;
            for (int j = 0; j < cols(); ++j) {
                if (allowed[static_cast<std::size_t>(j)] && rc[j] > tol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < rows(); ++i) {
                const double a = t(i, enter);
                if (a <= tol) continue;
                const double ratio = t(i, cols()) / a;
                if (ratio < best - tol ||
                    (std::abs(ratio - best) <= tol && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
        throw InternalError("simplex: iteration cap reached");
    }
};

}  // namespace detail

/// Maximizes c.x subject to A x <= b with x free.
inline LpResult lp_maximize(const VecR& c, const MatR& a, const VecR& b, double tol = kLpTol) {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    if (c.size() != n || b.size() != m) throw InvalidArgument("lp_maximize: dimension mismatch");

    // Columns: u (n), v (n) with x = u - v, slacks (m), artificials (one per negative row).
    std::vector<int> art_rows;
    for (int i = 0; i < m; ++i) {
        if (b[i] < 0.0) art_rows.push_back(i);
    }
    const int n_art = static_cast<int>(art_rows.size());
    const int cols = 2 * n + m + n_art;
    detail::Tableau tab;
    tab.t = MatR::Zero(m, cols + 1);
    tab.basis.assign(static_cast<std::size_t>(m), -1);
    int next_art = 2 * n + m;
    for (int i = 0; i < m; ++i) {
        const double sign = b[i] < 0.0 ? -1.0 : 1.0;
        tab.t.block(i, 0, 1, n) = sign * a.row(i);
        tab.t.block(i, n, 1, n) = -sign * a.row(i);
        tab.t(i, 2 * n + i) = sign;
        tab.t(i, cols) = sign * b[i];
        if (b[i] < 0.0) {
            tab.t(i, next_art) = 1.0;
            tab.basis[static_cast<std::size_t>(i)] = next_art++;
        } else {
            tab.basis[static_cast<std::size_t>(i)] = 2 * n + i;
        }
    }

    std::vector<bool> allowed(static_cast<std::size_t>(cols), true);
    if (n_art > 0) {
        VecR phase1 = VecR::Zero(cols);
        for (int j = 2 * n + m; j < cols; ++j) phase1[j] = -1.0;
        tab.optimize(phase1, allowed, tol);
        double infeas = 0.0;
        for (int i = 0; i < m; ++i) {
            if (tab.basis[static_cast<std::size_t>(i)] >= 2 * n + m) infeas += tab.t(i, cols);
        }
        if (infeas > 1e3 * tol * (1.0 + b.cwiseAbs().maxCoeff())) return {LpStatus::infeasible, {}, 0.0};
        // Drive remaining (zero-level) artificials out of the basis.
        for (int i = 0; i < m; ++i) {
            if (tab.basis[static_cast<std::size_t>(i)] < 2 * n + m) continue;
            for (int j = 0; j < 2 * n + m; ++j) {
                if (std::abs(tab.t(i, j)) > tol) {
                    tab.pivot(i, j);
                    break;
                }
            }
        }
        for (int j = 2 * n + m; j < cols; ++j) allowed[static_cast<std::size_t>(j)] = false;
    }

    VecR obj = VecR::Zero(cols);
    obj.head(n) = c;
    obj.segment(n, n) = -c;
    if (!tab.optimize(obj, allowed, tol)) return {LpStatus::unbounded, {}, std::numeric_limits<double>::infinity()};

    VecR z = VecR::Zero(cols);
    for (int i = 0; i < m; ++i) z[tab.basis[static_cast<std::size_t>(i)]] = tab.t(i, cols);
    VecR x = z.head(n) - z.segment(n, n);
    return {LpStatus::optimal, x, c.dot(x)};
}

}  // namespace anosov

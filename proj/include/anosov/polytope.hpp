#pragma once

// H-representation utilities: redundancy removal, Chebyshev center,
// boundedness, low-dimensional vertex enumeration and Monte Carlo volume.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "anosov/error.hpp"
#include "anosov/linalg.hpp"
#include "anosov/lp.hpp"

namespace anosov {

/// Where a constraint came from: class word, block pair (i, j) and gap index k.
struct Provenance {
    std::string word;
    int i = 0;
    int j = 0;
    int k = 0;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// The half-space coeffs . x < bound.
struct HalfSpace {
    VecR coeffs;
    double bound = 0.0;
    Provenance provenance;
};

using HalfSpaces = std::vector<HalfSpace>;

namespace detail {

inline int space_dim(const HalfSpaces& h) {
    if (h.empty()) throw InvalidArgument("polytope: empty constraint list");
    const auto n = h.front().coeffs.size();
    for (const auto& hs : h) {
        if (hs.coeffs.size() != n) throw InvalidArgument("polytope: inconsistent constraint dimensions");
    }
    return static_cast<int>(n);
}

inline void to_matrix(const HalfSpaces& h, MatR& a, VecR& b) {
    const int n = space_dim(h);
    a.resize(static_cast<Eigen::Index>(h.size()), n);
    b.resize(static_cast<Eigen::Index>(h.size()));
    for (std::size_t i = 0; i < h.size(); ++i) {
        a.row(static_cast<Eigen::Index>(i)) = h[i].coeffs.transpose();
        b[static_cast<Eigen::Index>(i)] = h[i].bound;
    }
}

}  // namespace detail

inline LpResult lp_maximize(const VecR& c, const HalfSpaces& h) {
    MatR a;
    VecR b;
    detail::to_matrix(h, a, b);
    return lp_maximize(c, a, b);
}

inline bool is_feasible(const HalfSpaces& h) {
    return lp_maximize(VecR::Zero(detail::space_dim(h)), h).status != LpStatus::infeasible;
}

/// Drops constraints implied by the others. Each constraint is tested with
/// one LP that maximizes its left side over the currently kept set minus
/// itself; it is dropped when that optimum does not exceed its bound (up to
/// 1e-9). Testing against the kept set means exactly one copy of a repeated
/// half-space survives.
inline HalfSpaces remove_redundant(const HalfSpaces& h, double tol = kLpTol) {
    detail::space_dim(h);
    std::vector<bool> keep(h.size(), true);
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i].coeffs.isZero()) {
            if (h[i].bound > 0.0) keep[i] = false;
            continue;
        }
        HalfSpaces others;
        for (std::size_t j = 0; j < h.size(); ++j) {
            if (j != i && keep[j]) others.push_back(h[j]);
        }
        // Relaxed copy of i keeps the LP bounded in its own direction.
        HalfSpace relaxed = h[i];
        relaxed.bound += 1.0 + std::abs(h[i].bound);
        others.push_back(relaxed);
        const auto res = lp_maximize(h[i].coeffs, others);
        if (res.status == LpStatus::infeasible) throw HypothesisError("remove_redundant: constraint system is infeasible");
        if (res.status == LpStatus::optimal && res.value <= h[i].bound + tol) keep[i] = false;
    }
    HalfSpaces out;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (keep[i]) out.push_back(h[i]);
    }
    return out;
}

struct ChebyshevBall {
    VecR center;
    double radius = 0.0;
    LpStatus status = LpStatus::optimal;
};

/// Largest inscribed ball: maximize r subject to a_i.x + |a_i| r <= b_i, r >= 0.
/// An unbounded LP gives radius +inf.
inline ChebyshevBall chebyshev_center(const HalfSpaces& h) {
    const int n = detail::space_dim(h);
    MatR a = MatR::Zero(static_cast<Eigen::Index>(h.size()) + 1, n + 1);
    VecR b = VecR::Zero(static_cast<Eigen::Index>(h.size()) + 1);
    for (std::size_t i = 0; i < h.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        a.block(r, 0, 1, n) = h[i].coeffs.transpose();
        a(r, n) = h[i].coeffs.norm();
        b[r] = h[i].bound;
    }
    a(static_cast<Eigen::Index>(h.size()), n) = -1.0;
    VecR c = VecR::Zero(n + 1);
    c[n] = 1.0;
    const auto res = lp_maximize(c, a, b);
    if (res.status == LpStatus::infeasible) return {VecR(), 0.0, LpStatus::infeasible};
    if (res.status == LpStatus::unbounded) return {VecR(), std::numeric_limits<double>::infinity(), LpStatus::unbounded};
    return {res.point.head(n), res.point[n], LpStatus::optimal};
}

/// Bounded iff the LP along +-e_i is bounded for every axis.
inline bool is_bounded(const HalfSpaces& h) {
    const int n = detail::space_dim(h);
    for (int i = 0; i < n; ++i) {
        for (double s : {1.0, -1.0}) {
            VecR c = VecR::Zero(n);
            c[i] = s;
            const auto res = lp_maximize(c, h);
            if (res.status == LpStatus::infeasible) throw HypothesisError("is_bounded: constraint system is infeasible");
            if (res.status == LpStatus::unbounded) return false;
        }
    }
    return true;
}

/// Axis-aligned bounding box [lo, hi]; nullopt when unbounded.
inline std::optional<std::pair<VecR, VecR>> bounding_box(const HalfSpaces& h) {
    const int n = detail::space_dim(h);
    VecR lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        VecR c = VecR::Zero(n);
        c[i] = 1.0;
        const auto up = lp_maximize(c, h);
        c[i] = -1.0;
        const auto down = lp_maximize(c, h);
        if (up.status == LpStatus::infeasible) throw HypothesisError("bounding_box: constraint system is infeasible");
        if (up.status != LpStatus::optimal || down.status != LpStatus::optimal) return std::nullopt;
        hi[i] = up.value;
        lo[i] = -down.value;
    }
    return std::make_pair(lo, hi);
}

inline bool satisfies(const HalfSpaces& h, const VecR& x, double tol) {
    return std::all_of(h.begin(), h.end(), [&](const HalfSpace& hs) { return hs.coeffs.dot(x) <= hs.bound + tol; });
}

/// Vertices by exhaustive choice of n active constraints (n <= 3), solving
/// each square system and keeping feasible, distinct solutions.
inline std::vector<VecR> vertices(const HalfSpaces& h, double tol = 1e-9) {
    const int n = detail::space_dim(h);
    if (n < 1 || n > 3) throw InvalidArgument("vertices: only dimensions 1 to 3 are supported");
    const int m = static_cast<int>(h.size());
    std::vector<VecR> out;
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::function<void(int, int)> choose = [&](int start, int depth) {
        if (depth == n) {
            MatR a(n, n);
            VecR b(n);
            for (int r = 0; r < n; ++r) {
                a.row(r) = h[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].coeffs.transpose();
                b[r] = h[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].bound;
            }
            Eigen::FullPivLU<MatR> lu(a);
            if (!lu.isInvertible()) return;
            VecR x = lu.solve(b);
            const double scale = 1.0 + x.cwiseAbs().maxCoeff();
            if (!satisfies(h, x, tol * scale)) return;
            for (const auto& v : out) {
                if ((v - x).cwiseAbs().maxCoeff() <= 1e-7 * scale) return;
            }
            out.push_back(x);
            return;
        }
        for (int i = start; i < m; ++i) {
            idx[static_cast<std::size_t>(depth)] = i;
            choose(i + 1, depth + 1);
        }
    };
    choose(0, 0);
    std::sort(out.begin(), out.end(), [](const VecR& a, const VecR& b) {
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
    });
    return out;
}

/// Vertices of a 2-dimensional polygon in counter-clockwise order.
inline std::vector<VecR> polygon(const HalfSpaces& h) {
    if (detail::space_dim(h) != 2) throw InvalidArgument("polygon: expected a 2-dimensional system");
    auto v = vertices(h);
    if (v.size() < 3) return v;
    VecR c = VecR::Zero(2);
    for (const auto& p : v) c += p;
    c /= static_cast<double>(v.size());
    std::sort(v.begin(), v.end(), [&](const VecR& a, const VecR& b) {
        return std::atan2(a[1] - c[1], a[0] - c[0]) < std::atan2(b[1] - c[1], b[0] - c[0]);
    });
    return v;
}

struct VolumeEstimate {
    double volume = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::size_t hits = 0;
};

/// Rejection sampling in the LP bounding box. Uses mt19937_64 and a fixed
/// 53-bit mantissa mapping so results are identical across platforms.
inline VolumeEstimate mc_volume(const HalfSpaces& h, std::size_t sample_count, std::uint64_t seed) {
    const auto box = bounding_box(h);
    if (!box) throw HypothesisError("mc_volume: polytope is unbounded");
    const auto& [lo, hi] = *box;
    const int n = static_cast<int>(lo.size());
    double box_vol = 1.0;
    for (int i = 0; i < n; ++i) box_vol *= (hi[i] - lo[i]);
    std::mt19937_64 rng(seed);
    std::size_t hits = 0;
    VecR x(n);
    for (std::size_t s = 0; s < sample_count; ++s) {
        for (int i = 0; i < n; ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            x[i] = lo[i] + u * (hi[i] - lo[i]);
        }
        if (std::all_of(h.begin(), h.end(), [&](const HalfSpace& hs) { return hs.coeffs.dot(x) < hs.bound; })) ++hits;
    }
    VolumeEstimate est;
    est.samples = sample_count;
    est.hits = hits;
    if (sample_count > 0) {
        const double p = static_cast<double>(hits) / static_cast<double>(sample_count);
        est.volume = box_vol * p;
        est.std_error = box_vol * std::sqrt(p * (1.0 - p) / static_cast<double>(sample_count));
    }
    return est;
}

}  // namespace anosov

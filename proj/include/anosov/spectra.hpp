#pragma once

// Dense spectral kernel: eigenvalue magnitudes, logarithmic gaps,
// attracting/repelling subspaces and flags, proximality.
//
// Eigenvalues come from Eigen's real Schur (real input) or complex Schur
// (complex input) solvers. Invariant subspaces are read off a complex Schur
// form whose diagonal has been reordered by magnitude with unitary Givens
// swaps; for real input the resulting conjugation-closed subspace is
// realified, so dimensions count real dimensions.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "anosov/error.hpp"
#include "anosov/linalg.hpp"
#include "anosov/theta_set.hpp"

namespace anosov {

inline constexpr double kProximalityTol = 1e-9;
inline constexpr double kSubspaceTol = 1e-7;

/// Eigenvalues of a d x d matrix sorted by non-increasing magnitude, with
/// algebraic multiplicity. block_tags is either empty or holds the block
/// index each eigenvalue came from.
struct Spectrum {
    std::vector<double> magnitudes;
    std::vector<Complex> eigenvalues;
    std::vector<int> block_tags;

    int dim() const { return static_cast<int>(magnitudes.size()); }

    /// lambda_k with the usual 1-based indexing.
    double lambda(int k) const {
        if (k < 1 || k > dim()) throw InvalidArgument("lambda index " + std::to_string(k) + " out of range");
        return magnitudes[static_cast<std::size_t>(k - 1)];
    }
};

namespace detail {

struct TaggedEigenvalue {
    Complex value;
    int tag;
};

inline Spectrum sorted_spectrum(std::vector<TaggedEigenvalue> ev, bool keep_tags) {
    std::stable_sort(ev.begin(), ev.end(), [](const TaggedEigenvalue& a, const TaggedEigenvalue& b) {
        return std::abs(a.value) > std::abs(b.value);
    });
    Spectrum s;
    for (const auto& e : ev) {
        s.eigenvalues.push_back(e.value);
        s.magnitudes.push_back(std::abs(e.value));
        if (keep_tags) s.block_tags.push_back(e.tag);
    }
    return s;
}

}  // namespace detail

/// All eigenvalues of a square matrix. Throws SpectralError when the QR
/// iteration does not converge within Eigen's iteration cap.
template <typename Scalar>
std::vector<Complex> eigenvalues(const Mat<Scalar>& a) {
    require_square(a, "eigenvalues");
    if (!all_finite(a)) throw InvalidArgument("eigenvalues: non-finite matrix entry");
    std::vector<Complex> out;
    if constexpr (is_complex_v<Scalar>) {
        Eigen::ComplexEigenSolver<MatC> es(a, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success) throw SpectralError("complex eigensolver did not converge");
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
    } else {
        Eigen::EigenSolver<MatR> es(a, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success) throw SpectralError("real Schur eigensolver did not converge");
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
    }
    return out;
}

template <typename Scalar>
Spectrum eigen_magnitudes(const Mat<Scalar>& a) {
    std::vector<detail::TaggedEigenvalue> ev;
    for (const Complex& z : eigenvalues(a)) ev.push_back({z, 0});
    return detail::sorted_spectrum(std::move(ev), false);
}

/// Merges per-block spectra of a block diagonal matrix, tagging each
/// eigenvalue with its block. Ties keep block order.
inline Spectrum merge_block_spectra(const std::vector<Spectrum>& blocks) {
    std::vector<detail::TaggedEigenvalue> ev;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        for (const Complex& z : blocks[j].eigenvalues) ev.push_back({z, static_cast<int>(j)});
    }
    return detail::sorted_spectrum(std::move(ev), true);
}

/// Spectrum of A assembled from the computed spectra of A and of A^-1.
///
/// A backward-stable eigensolver resolves |mu| to roughly eps*||A|| in
/// absolute terms, so tiny magnitudes of a long word product are noise.
/// Each lambda_k is taken from whichever side resolves it better: from A
/// when lambda_k^2 >= ||A|| / ||A^-1||, otherwise as 1/lambda_{d-k+1}(A^-1).
template <typename Scalar>
Spectrum two_sided_magnitudes(const Mat<Scalar>& a, const Mat<Scalar>& a_inv) {
    Spectrum fwd = eigen_magnitudes(a);
    Spectrum inv = eigen_magnitudes(a_inv);
    if (fwd.dim() != inv.dim()) throw InvalidArgument("two_sided_magnitudes: size mismatch");
    const double na = a.template lpNorm<Eigen::Infinity>();
    const double ni = a_inv.template lpNorm<Eigen::Infinity>();
    const int d = fwd.dim();
    std::vector<detail::TaggedEigenvalue> ev;
    for (int k = 1; k <= d; ++k) {
        const double f = fwd.lambda(k);
        if (f * f * ni >= na) {
            ev.push_back({fwd.eigenvalues[static_cast<std::size_t>(k - 1)], 0});
        } else {
            ev.push_back({1.0 / inv.eigenvalues[static_cast<std::size_t>(d - k)], 0});
        }
    }
    return detail::sorted_spectrum(std::move(ev), false);
}

/// log(lambda_k / lambda_{k+1}). Throws SingularError when lambda_{k+1}
/// vanishes.
inline double log_gap(const Spectrum& s, int k) {
    if (k < 1 || k > s.dim() - 1) throw InvalidArgument("log_gap: k=" + std::to_string(k) + " outside 1..d-1");
    const double hi = s.lambda(k);
    const double lo = s.lambda(k + 1);
    if (!(lo > std::numeric_limits<double>::min())) throw SingularError("log_gap: lambda_{k+1} is zero");
    return std::max(0.0, std::log(hi / lo));
}

template <typename Scalar>
double log_gap(const Mat<Scalar>& a, int k) {
    return log_gap(eigen_magnitudes(a), k);
}

/// True iff lambda_k - lambda_{k+1} > tol * lambda_1 for every k in theta.
inline bool is_proximal(const Spectrum& s, const ThetaSet& theta, double tol = kProximalityTol) {
    if (!theta.empty() && theta.dim() != s.dim()) throw InvalidArgument("is_proximal: theta dimension mismatch");
    const double scale = s.dim() > 0 ? s.lambda(1) : 0.0;
    for (int k : theta) {
        if (!(s.lambda(k) - s.lambda(k + 1) > tol * scale)) return false;
    }
    return true;
}

template <typename Scalar>
bool is_proximal(const Mat<Scalar>& a, const ThetaSet& theta, double tol = kProximalityTol) {
    return is_proximal(eigen_magnitudes(a), theta, tol);
}

/// Subspace of K^d with an orthonormal basis stored column-wise.
template <typename Scalar>
struct Subspace {
    int ambient_dim = 0;
    Mat<Scalar> basis;

    int dim() const { return static_cast<int>(basis.cols()); }

    static Subspace zero(int d) { return {d, Mat<Scalar>(d, 0)}; }
};

/// Orthonormal basis for the column span, singular values below tol dropped.
template <typename Scalar>
Subspace<Scalar> span_of(const Mat<Scalar>& columns, double tol = kSubspaceTol) {
    const int d = static_cast<int>(columns.rows());
    if (columns.cols() == 0) return Subspace<Scalar>::zero(d);
    Eigen::JacobiSVD<Mat<Scalar>> svd(columns, Eigen::ComputeThinU);
    Eigen::Index r = 0;
    while (r < svd.singularValues().size() && svd.singularValues()[r] > tol) ++r;
    return {d, svd.matrixU().leftCols(r)};
}

template <typename Scalar>
int numerical_rank(const Mat<Scalar>& m, double tol = kSubspaceTol) {
    if (m.cols() == 0 || m.rows() == 0) return 0;
    Eigen::JacobiSVD<Mat<Scalar>> svd(m);
    int r = 0;
    while (r < svd.singularValues().size() && svd.singularValues()[r] > tol) ++r;
    return r;
}

/// dim(U) + dim(W) - rank[U W].
template <typename Scalar>
int intersection_dim(const Subspace<Scalar>& u, const Subspace<Scalar>& w, double tol = kSubspaceTol) {
    if (u.ambient_dim != w.ambient_dim) throw InvalidArgument("intersection_dim: ambient dimension mismatch");
    Mat<Scalar> stacked(u.ambient_dim, u.dim() + w.dim());
    stacked << u.basis, w.basis;
    return u.dim() + w.dim() - numerical_rank(stacked, tol);
}

/// Orthonormal basis of U cap W from the null space of [U, -W].
template <typename Scalar>
Subspace<Scalar> intersect(const Subspace<Scalar>& u, const Subspace<Scalar>& w, double tol = kSubspaceTol) {
    if (u.ambient_dim != w.ambient_dim) throw InvalidArgument("intersect: ambient dimension mismatch");
    const int d = u.ambient_dim;
    if (u.dim() == 0 || w.dim() == 0) return Subspace<Scalar>::zero(d);
    Mat<Scalar> stacked(d, u.dim() + w.dim());
    stacked << u.basis, -w.basis;
    Eigen::JacobiSVD<Mat<Scalar>> svd(stacked, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const int n = static_cast<int>(stacked.cols());
    std::vector<Eigen::Index> null_cols;
    for (int i = 0; i < n; ++i) {
        if (i >= sv.size() || sv[i] <= tol) null_cols.push_back(i);
    }
    Mat<Scalar> coeffs(u.dim(), static_cast<Eigen::Index>(null_cols.size()));
    for (std::size_t c = 0; c < null_cols.size(); ++c) {
        coeffs.col(static_cast<Eigen::Index>(c)) = svd.matrixV().col(null_cols[c]).head(u.dim());
    }
    return span_of<Scalar>(u.basis * coeffs, tol);
}

/// Sine of the smallest principal angle between U and W; 0 when they meet.
template <typename Scalar>
double min_angle_sine(const Subspace<Scalar>& u, const Subspace<Scalar>& w) {
    if (u.dim() == 0 || w.dim() == 0) return 1.0;
    Eigen::JacobiSVD<Mat<Scalar>> svd(u.basis.adjoint() * w.basis);
    const double c = std::min(1.0, svd.singularValues()[0]);
    return std::sqrt(std::max(0.0, 1.0 - c * c));
}

/// Whether W is contained in U within tolerance.
template <typename Scalar>
bool contains(const Subspace<Scalar>& u, const Subspace<Scalar>& w, double tol = kSubspaceTol) {
    if (w.dim() == 0) return true;
    if (u.dim() == 0) return false;
    Mat<Scalar> resid = w.basis - u.basis * (u.basis.adjoint() * w.basis);
    return resid.cwiseAbs().maxCoeff() <= std::sqrt(tol);
}

namespace detail {

/// Complex Schur form A = U T U^* with |T(i,i)| sorted (descending or
/// ascending). Adjacent diagonal entries are exchanged with a unitary
/// rotation built from the eigenvector of the trailing entry.
struct OrderedSchur {
    MatC t;
    MatC u;
};

inline void swap_adjacent(MatC& t, MatC& u, Eigen::Index p) {
    const Complex t11 = t(p, p), t12 = t(p, p + 1), t22 = t(p + 1, p + 1);
    Eigen::Vector2cd v(t12, t22 - t11);
    const double nv = v.norm();
    if (nv == 0.0) return;
    v /= nv;
    Eigen::Matrix2cd q;
    q.col(0) = v;
    q.col(1) = Eigen::Vector2cd(-std::conj(v[1]), std::conj(v[0]));
    t.middleCols(p, 2) = t.middleCols(p, 2) * q;
    t.middleRows(p, 2) = q.adjoint() * t.middleRows(p, 2);
    u.middleCols(p, 2) = u.middleCols(p, 2) * q;
    t(p + 1, p) = Complex(0.0, 0.0);
}

template <typename Scalar>
OrderedSchur ordered_schur(const Mat<Scalar>& a, bool descending) {
    require_square(a, "ordered_schur");
    MatC ac = a.template cast<Complex>();
    Eigen::ComplexSchur<MatC> cs(ac);
    if (cs.info() != Eigen::Success) throw SpectralError("complex Schur iteration did not converge");
    OrderedSchur s{cs.matrixT(), cs.matrixU()};
    const Eigen::Index n = s.t.rows();
    auto out_of_order = [&](Eigen::Index i) {
        const double x = std::abs(s.t(i, i)), y = std::abs(s.t(i + 1, i + 1));
        return descending ? x < y : x > y;
    };
    // Bubble sort; each swap keeps the form upper triangular.
    for (Eigen::Index pass = 0; pass < n; ++pass) {
        bool swapped = false;
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            if (out_of_order(i)) {
                swap_adjacent(s.t, s.u, i);
                swapped = true;
            }
        }
        if (!swapped) break;
    }
    return s;
}

/// Leading r Schur vectors as a subspace over Scalar. For real Scalar the
/// span of real and imaginary parts is taken, which has real dimension r
/// when the complex span is conjugation closed.
template <typename Scalar>
Subspace<Scalar> leading_subspace(const MatC& u, int r) {
    const int d = static_cast<int>(u.rows());
    if (r == 0) return Subspace<Scalar>::zero(d);
    MatC lead = u.leftCols(r);
    if constexpr (is_complex_v<Scalar>) {
        return {d, lead};
    } else {
        MatR parts(d, 2 * r);
        parts << lead.real(), lead.imag();
        Eigen::JacobiSVD<MatR> svd(parts, Eigen::ComputeThinU);
        return {d, svd.matrixU().leftCols(r)};
    }
}

inline int check_subspace_index(int d, int k, const char* what) {
    if (k < 0 || k > d) throw InvalidArgument(std::string(what) + ": k=" + std::to_string(k) + " outside 0..d");
    return k;
}

}  // namespace detail

/// Span of generalized eigenspaces with |mu| >= lambda_k (ties within
/// tol*lambda_1 included). Dimension is k exactly when lambda_k > lambda_{k+1}.
template <typename Scalar>
Subspace<Scalar> attracting_subspace(const Mat<Scalar>& a, int k, double tol = kProximalityTol) {
    const int d = static_cast<int>(a.rows());
    detail::check_subspace_index(d, k, "attracting_subspace");
    if (k == 0) return Subspace<Scalar>::zero(d);
    auto s = detail::ordered_schur(a, true);
    const double scale = std::abs(s.t(0, 0));
    const double cut = std::abs(s.t(k - 1, k - 1)) - tol * scale;
    int r = 0;
    while (r < d && std::abs(s.t(r, r)) >= cut) ++r;
    return detail::leading_subspace<Scalar>(s.u, r);
}

/// Span of generalized eigenspaces with |mu| <= lambda_{d-k+1}, i.e. the
/// k smallest magnitudes (ties included).
template <typename Scalar>
Subspace<Scalar> repelling_subspace(const Mat<Scalar>& a, int k, double tol = kProximalityTol) {
    const int d = static_cast<int>(a.rows());
    detail::check_subspace_index(d, k, "repelling_subspace");
    if (k == 0) return Subspace<Scalar>::zero(d);
    auto s = detail::ordered_schur(a, false);
    const double scale = std::abs(s.t(d - 1, d - 1));
    const double cut = std::abs(s.t(k - 1, k - 1)) + tol * scale;
    int r = 0;
    while (r < d && std::abs(s.t(r, r)) <= cut) ++r;
    return detail::leading_subspace<Scalar>(s.u, r);
}

/// Nested subspaces indexed by a signature.
template <typename Scalar>
struct Flag {
    ThetaSet signature;
    std::map<int, Subspace<Scalar>> subspaces;

    const Subspace<Scalar>& at(int k) const { return subspaces.at(k); }
};

template <typename Scalar>
bool is_nested(const Flag<Scalar>& f, double tol = kSubspaceTol) {
    const Subspace<Scalar>* prev = nullptr;
    for (const auto& [k, sub] : f.subspaces) {
        if (sub.dim() != k) return false;
        if (prev && !contains(sub, *prev, tol)) return false;
        prev = &sub;
    }
    return true;
}

/// Attracting theta-flag. Throws NonProximalError unless A is P_theta-proximal.
template <typename Scalar>
Flag<Scalar> attracting_flag(const Mat<Scalar>& a, const ThetaSet& theta, double tol = kProximalityTol) {
    const Spectrum spec = eigen_magnitudes(a);
    for (int k : theta) {
        if (!is_proximal(spec, ThetaSet(spec.dim(), {k}), tol)) {
            throw NonProximalError(k, "attracting_flag: not proximal at k=" + std::to_string(k));
        }
    }
    auto s = detail::ordered_schur(a, true);
    Flag<Scalar> f{theta, {}};
    for (int k : theta) f.subspaces.emplace(k, detail::leading_subspace<Scalar>(s.u, k));
    return f;
}

/// Repelling iota(theta)-flag: subspaces of dimension d-k for k in theta.
template <typename Scalar>
Flag<Scalar> repelling_flag(const Mat<Scalar>& a, const ThetaSet& theta, double tol = kProximalityTol) {
    const Spectrum spec = eigen_magnitudes(a);
    const int d = spec.dim();
    std::vector<int> dual;
    for (int k : theta) {
        if (!is_proximal(spec, ThetaSet(d, {k}), tol)) {
            throw NonProximalError(k, "repelling_flag: not proximal at k=" + std::to_string(k));
        }
        dual.push_back(d - k);
    }
    auto s = detail::ordered_schur(a, false);
    Flag<Scalar> f{ThetaSet(d, dual), {}};
    for (int k : f.signature) f.subspaces.emplace(k, detail::leading_subspace<Scalar>(s.u, k));
    return f;
}

}  // namespace anosov

#pragma once

// Large eigenvalue theta-configurations relative to a decomposition:
// admissibility, the gap formula through block spectra, structured flags
// and the opposition involution.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "anosov/blocks.hpp"
#include "anosov/error.hpp"
#include "anosov/spectra.hpp"
#include "anosov/theta_set.hpp"

namespace anosov {

/// iota_V(k) = d - k.
inline int iota(int d, int k) {
    if (k < 1 || k > d - 1) throw InvalidArgument("iota: k=" + std::to_string(k) + " outside 1.." + std::to_string(d - 1));
    return d - k;
}

inline ThetaSet iota_set(const ThetaSet& theta) {
    std::vector<int> out;
    for (int k : theta) out.push_back(iota(theta.dim(), k));
    return ThetaSet(theta.dim(), std::move(out));
}

/// Table q[k][j] = number of the k largest eigenvalue magnitudes that come
/// from block j (0-based j, k in theta).
struct EigConfig {
    Decomposition dec;
    ThetaSet theta;
    std::map<int, std::vector<int>> q;

    int at(int j, int k) const { return q.at(k).at(static_cast<std::size_t>(j)); }

    friend bool operator==(const EigConfig& a, const EigConfig& b) {
        return a.dec == b.dec && a.theta == b.theta && a.q == b.q;
    }

    std::string to_string() const {
        std::string s;
        for (const auto& [k, row] : q) {
            if (!s.empty()) s += "; ";
            s += "k=" + std::to_string(k) + ":";
            for (std::size_t j = 0; j < row.size(); ++j) s += (j ? "," : "") + std::to_string(row[j]);
        }
        return s;
    }
};

/// Configuration from a block-tagged spectrum (see merge_block_spectra).
/// A tie at position k whose tied magnitudes all sit in one block is a
/// NonProximalError; a tie spanning several blocks is a TieAmbiguityError.
inline EigConfig large_config(const Spectrum& tagged, const Decomposition& dec, const ThetaSet& theta,
                              double tol = kProximalityTol) {
    if (tagged.block_tags.size() != tagged.magnitudes.size()) throw InvalidArgument("large_config: spectrum lacks block tags");
    if (tagged.dim() != dec.total()) throw InvalidArgument("large_config: spectrum size mismatch");
    if (!theta.empty() && theta.dim() != dec.total()) throw InvalidArgument("large_config: theta dimension mismatch");
    const double scale = tagged.lambda(1);
    EigConfig cfg{dec, theta, {}};
    for (int k : theta) {
        const double lk = tagged.lambda(k);
        if (!(lk - tagged.lambda(k + 1) > tol * scale)) {
            std::set<int> tied_blocks;
            for (int i = 1; i <= tagged.dim(); ++i) {
                if (std::abs(tagged.lambda(i) - lk) <= tol * scale) tied_blocks.insert(tagged.block_tags[static_cast<std::size_t>(i - 1)]);
            }
            const std::string msg = "large_config: lambda_" + std::to_string(k) + " and lambda_" + std::to_string(k + 1) +
                                    " are tied within tolerance";
            if (tied_blocks.size() > 1) throw TieAmbiguityError(k, msg + " across blocks");
            throw NonProximalError(k, msg);
        }
        std::vector<int> row(static_cast<std::size_t>(dec.blocks()), 0);
        for (int i = 0; i < k; ++i) ++row[static_cast<std::size_t>(tagged.block_tags[static_cast<std::size_t>(i)])];
        cfg.q.emplace(k, std::move(row));
    }
    return cfg;
}

inline EigConfig large_config(const std::vector<Spectrum>& block_spectra, const Decomposition& dec, const ThetaSet& theta,
                              double tol = kProximalityTol) {
    return large_config(merge_block_spectra(block_spectra), dec, theta, tol);
}

template <typename Scalar>
std::vector<Spectrum> block_spectra(const Mat<Scalar>& a, const Decomposition& dec) {
    std::vector<Spectrum> out;
    for (int j = 0; j < dec.blocks(); ++j) {
        out.push_back(dec.dim(j) > 0 ? eigen_magnitudes(Mat<Scalar>(block(a, dec, j, j))) : Spectrum{});
    }
    return out;
}

/// Configuration of a block upper triangular matrix, read from its diagonal blocks.
template <typename Scalar>
EigConfig large_config(const Mat<Scalar>& a, const Decomposition& dec, const ThetaSet& theta, double tol = kProximalityTol) {
    if (!is_block_upper_triangular(a, dec)) throw HypothesisError("large_config: matrix is not block upper triangular");
    return large_config(block_spectra(a, dec), dec, theta, tol);
}

inline bool is_admissible(const EigConfig& cfg) {
    const auto& dec = cfg.dec;
    const std::vector<int>* prev = nullptr;
    for (int k : cfg.theta) {
        auto it = cfg.q.find(k);
        if (it == cfg.q.end() || static_cast<int>(it->second.size()) != dec.blocks()) return false;
        int sum = 0;
        for (int j = 0; j < dec.blocks(); ++j) {
            const int v = it->second[static_cast<std::size_t>(j)];
            if (v < 0 || v > dec.dim(j)) return false;
            if (prev && v < (*prev)[static_cast<std::size_t>(j)]) return false;
            sum += v;
        }
        if (sum != k) return false;
        prev = &it->second;
    }
    return cfg.q.size() == cfg.theta.size();
}

/// All (i, j), 0-based, with q_{i,k} > 0 and q_{j,k} < d_j.
inline std::vector<std::pair<int, int>> nonempty_pairs(const EigConfig& cfg, int k) {
    std::vector<std::pair<int, int>> out;
    const auto& row = cfg.q.at(k);
    for (int i = 0; i < cfg.dec.blocks(); ++i) {
        if (row[static_cast<std::size_t>(i)] <= 0) continue;
        for (int j = 0; j < cfg.dec.blocks(); ++j) {
            if (row[static_cast<std::size_t>(j)] < cfg.dec.dim(j)) out.emplace_back(i, j);
        }
    }
    return out;
}

/// log(lambda_{q_i}(B_i) / lambda_{q_j + 1}(B_j)) for one admissible pair.
inline double pair_log_ratio(const std::vector<Spectrum>& blocks, const EigConfig& cfg, int k, int i, int j) {
    const double top = blocks.at(static_cast<std::size_t>(i)).lambda(cfg.at(i, k));
    const double bottom = blocks.at(static_cast<std::size_t>(j)).lambda(cfg.at(j, k) + 1);
    if (!(bottom > 0.0)) throw SingularError("pair_log_ratio: vanishing eigenvalue");
    return std::log(top / bottom);
}

/// Minimum pair log-ratio over nonempty_pairs(Q, k); equals the k-th
/// logarithmic gap of the assembled block diagonal matrix.
inline double gap_via_config(const std::vector<Spectrum>& blocks, const EigConfig& cfg, int k) {
    const auto pairs = nonempty_pairs(cfg, k);
    if (pairs.empty()) throw InternalError("gap_via_config: no admissible pairs at k=" + std::to_string(k));
    double best = std::numeric_limits<double>::infinity();
    for (auto [i, j] : pairs) best = std::min(best, pair_log_ratio(blocks, cfg, k, i, j));
    return best;
}

enum class StructureMode { weak, strong };

template <typename Scalar>
struct StructuredReport {
    StructureMode mode = StructureMode::strong;
    std::map<int, std::vector<int>> measured;
    bool pass = false;
};

namespace detail {

template <typename Scalar>
Subspace<Scalar> coordinate_span(int d, int first, int count) {
    Mat<Scalar> b = Mat<Scalar>::Zero(d, count);
    for (int c = 0; c < count; ++c) b(first + c, c) = Scalar(1);
    return {d, b};
}

}  // namespace detail

/// Measures dim(U_j cap F_k) (strong) or dim pi_j(U'_j cap F_k) (weak) for
/// every block and every k in the flag's signature, and compares with Q.
template <typename Scalar>
StructuredReport<Scalar> check_structured(const Flag<Scalar>& flag, const Decomposition& dec, const EigConfig& cfg,
                                          StructureMode mode, double tol = kSubspaceTol) {
    if (!(flag.signature == cfg.theta)) throw InvalidArgument("check_structured: flag signature differs from theta");
    const int d = dec.total();
    StructuredReport<Scalar> rep{mode, {}, true};
    for (int k : flag.signature) {
        const auto& fk = flag.at(k);
        std::vector<int> row;
        for (int j = 0; j < dec.blocks(); ++j) {
            int measured = 0;
            if (dec.dim(j) > 0) {
                if (mode == StructureMode::strong) {
                    measured = intersection_dim(detail::coordinate_span<Scalar>(d, dec.offset(j), dec.dim(j)), fk, tol);
                } else {
                    const auto partial = detail::coordinate_span<Scalar>(d, 0, dec.offset(j) + dec.dim(j));
                    const auto meet = intersect(partial, fk, tol);
                    Mat<Scalar> projected = meet.basis.middleRows(dec.offset(j), dec.dim(j));
                    measured = numerical_rank(projected, tol);
                }
            }
            row.push_back(measured);
            if (measured != cfg.at(j, k)) rep.pass = false;
        }
        rep.measured.emplace(k, std::move(row));
    }
    return rep;
}

/// theta_j = {q_{j,k} : k in theta} cap {1, ..., d_j - 1}, one set per block.
inline std::vector<ThetaSet> block_thetas(const EigConfig& cfg) {
    std::vector<ThetaSet> out;
    for (int j = 0; j < cfg.dec.blocks(); ++j) {
        const int dj = cfg.dec.dim(j);
        std::vector<int> members;
        for (int k : cfg.theta) {
            const int v = cfg.at(j, k);
            if (v >= 1 && v <= dj - 1) members.push_back(v);
        }
        out.emplace_back(dj, std::move(members));
    }
    return out;
}

/// q_{j,k} <= d_j/2 whenever k <= d/2, and q_{j,k} >= d_j/2 whenever k >= d/2.
inline bool half_bound_check(const EigConfig& cfg) {
    const int d = cfg.dec.total();
    for (int k : cfg.theta) {
        for (int j = 0; j < cfg.dec.blocks(); ++j) {
            const int twice_q = 2 * cfg.at(j, k);
            const int dj = cfg.dec.dim(j);
            if (2 * k <= d && twice_q > dj) return false;
            if (2 * k >= d && twice_q < dj) return false;
        }
    }
    return true;
}

}  // namespace anosov

#pragma once

// Outer approximations A_L of the Anosov deformation domain of a block
// normalized representation zeta.
//
// For every primitive class gamma of length <= L, every k in theta and every
// admissible block pair (i, j), i != j, the deformation phi must satisfy
//
//     phi_j(gamma) - phi_i(gamma) < log( lambda_{q_ik}(zeta_i(gamma)) / lambda_{q_jk + 1}(zeta_j(gamma)) ),
//
// a strict linear inequality in phi because phi(gamma) only depends on the
// abelianization of gamma.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "anosov/blocks.hpp"
#include "anosov/certify.hpp"
#include "anosov/configs.hpp"
#include "anosov/polytope.hpp"
#include "anosov/words.hpp"

namespace anosov {

inline constexpr double kContainsTol = 1e-10;

/// Coordinates on hom(F_n, D_U). Each generator contributes one coordinate
/// per nonzero block except the last nonzero block, whose value is
/// eliminated through sum_j d_j x_j = 0. Coordinates are ordered generator
/// major, block minor.
class ParamSpace {
public:
    ParamSpace(int rank, Decomposition dec) : rank_(rank), dec_(std::move(dec)) {
        last_ = dec_.last_nonzero();
        for (int j = 0; j < dec_.blocks(); ++j) {
            if (dec_.dim(j) > 0 && j != last_) free_blocks_.push_back(j);
        }
    }

    int rank() const { return rank_; }
    const Decomposition& decomposition() const { return dec_; }
    int dim() const { return rank_ * static_cast<int>(free_blocks_.size()); }
    int per_generator() const { return static_cast<int>(free_blocks_.size()); }
    const std::vector<int>& free_blocks() const { return free_blocks_; }
    int eliminated_block() const { return last_; }

    /// d x_j / d t for the free coordinate of block `free_block` (same generator).
    double partial(int j, int free_block) const {
        if (j == free_block) return 1.0;
        if (j == last_) return -static_cast<double>(dec_.dim(free_block)) / dec_.dim(last_);
        return 0.0;
    }

    std::vector<DeformVector> to_phi(const VecR& t) const {
        if (t.size() != dim()) throw InvalidArgument("ParamSpace: point has wrong dimension");
        std::vector<DeformVector> phi;
        for (int g = 0; g < rank_; ++g) {
            DeformVector x = DeformVector::zero(dec_);
            for (int f = 0; f < per_generator(); ++f) {
                const int jf = free_blocks_[static_cast<std::size_t>(f)];
                const double v = t[g * per_generator() + f];
                for (int j = 0; j < dec_.blocks(); ++j) x.x[static_cast<std::size_t>(j)] += partial(j, jf) * v;
            }
            phi.push_back(std::move(x));
        }
        return phi;
    }

    VecR from_phi(const std::vector<DeformVector>& phi) const {
        if (static_cast<int>(phi.size()) != rank_) throw InvalidArgument("ParamSpace: need one DeformVector per generator");
        VecR t(dim());
        for (int g = 0; g < rank_; ++g) {
            phi[static_cast<std::size_t>(g)].validate(dec_);
            for (int f = 0; f < per_generator(); ++f) {
                t[g * per_generator() + f] = phi[static_cast<std::size_t>(g)].x[static_cast<std::size_t>(free_blocks_[static_cast<std::size_t>(f)])];
            }
        }
        return t;
    }

    /// Coefficients of phi_j(gamma) - phi_i(gamma) as a linear form in t.
    VecR difference_form(const std::vector<int>& ab, int i, int j) const {
        VecR c = VecR::Zero(dim());
        for (int g = 0; g < rank_; ++g) {
            for (int f = 0; f < per_generator(); ++f) {
                const int jf = free_blocks_[static_cast<std::size_t>(f)];
                c[g * per_generator() + f] = ab[static_cast<std::size_t>(g)] * (partial(j, jf) - partial(i, jf)) + 0.0;
            }
        }
        return c;
    }

    Deformation deformation(const VecR& t) const {
        return {std::vector<double>(static_cast<std::size_t>(rank_), 0.0), to_phi(t)};
    }

private:
    int rank_;
    Decomposition dec_;
    int last_ = -1;
    std::vector<int> free_blocks_;
};

struct DomainApprox {
    int max_length = 0;
    ThetaSet theta;
    EigConfig config;
    HalfSpaces halfspaces;
    int reduced_dim = 0;
    std::size_t classes = 0;
};

namespace detail {

/// Half-spaces from precomputed samples of a block structured rep with
/// configuration cfg, restricted to classes of length <= max_length.
/// Identical coefficient vectors keep the smallest bound.
inline HalfSpaces constraints_from_samples(const std::vector<GapSample>& samples, const EigConfig& cfg,
                                           const ParamSpace& space, const FreeGroup& group, int max_length) {
    HalfSpaces out;
    std::map<std::vector<double>, std::size_t> seen;
    for (const auto& s : samples) {
        if (s.length > max_length) continue;
        if (s.status != SampleStatus::ok) throw InternalError("constraints: sample without a valid spectrum");
        const auto ab = abelianize(s.class_rep.word);
        const std::string word = group.format(s.class_rep.word);
        for (int k : cfg.theta) {
            for (auto [i, j] : nonempty_pairs(cfg, k)) {
                if (i == j) continue;
                const double bound = pair_log_ratio(s.blocks, cfg, k, i, j);
                if (!(bound > 0.0)) {
                    throw InternalError("constraints: non-positive bound for class '" + word + "' at k=" + std::to_string(k) +
                                        "; the configuration is inconsistent");
                }
                VecR coeffs = space.difference_form(ab, i, j);
                if (coeffs.isZero()) continue;
                std::vector<double> key(coeffs.data(), coeffs.data() + coeffs.size());
                auto [it, fresh] = seen.emplace(key, out.size());
                if (fresh) {
                    out.push_back({coeffs, bound, {word, i + 1, j + 1, k}});
                } else if (bound < out[it->second].bound) {
                    out[it->second].bound = bound;
                    out[it->second].provenance = {word, i + 1, j + 1, k};
                }
            }
        }
    }
    return out;
}

template <typename Scalar>
std::pair<std::vector<GapSample>, CertReport> certified_samples(const RepSpec<Scalar>& zeta, const ThetaSet& theta,
                                                                int max_length, const Thresholds& th, int threads) {
    if (zeta.structure() != Structure::block_normalized) {
        throw HypothesisError("domain: representation must be block normalized (run normalize-rep first)");
    }
    auto samples = gap_series(zeta, theta, max_length, th.tol, threads);
    auto report = summarize(zeta, theta, max_length, th, samples);
    if (report.verdict != Verdict::plausibly_anosov || !report.unique_config) {
        throw HypothesisError(std::string("domain: zeta is not certified P_theta-Anosov at L=") + std::to_string(max_length) +
                              " (verdict " + to_string(report.verdict) + ": " + report.reason + ")");
    }
    return {std::move(samples), std::move(report)};
}

}  // namespace detail

/// A_L for a block normalized zeta that certifies as P_theta-Anosov at L.
/// Throws HypothesisError when certification fails.
template <typename Scalar>
DomainApprox constraints(const RepSpec<Scalar>& zeta, const ThetaSet& theta, int max_length, const Thresholds& th = {},
                         int threads = 0) {
    auto [samples, report] = detail::certified_samples(zeta, theta, max_length, th, threads);
    const ParamSpace space(zeta.group().rank(), zeta.decomposition());
    DomainApprox d;
    d.max_length = max_length;
    d.theta = theta;
    d.config = *report.unique_config;
    d.reduced_dim = space.dim();
    d.classes = samples.size();
    d.halfspaces = detail::constraints_from_samples(samples, d.config, space, zeta.group(), max_length);
    return d;
}

/// 1 - max_i (a_i . t) / b_i; positive exactly on the interior of A_L.
inline double margin(const DomainApprox& d, const VecR& t) {
    if (t.size() != d.reduced_dim) throw InvalidArgument("margin: point has wrong dimension");
    double worst = 0.0;
    for (const auto& h : d.halfspaces) worst = std::max(worst, h.coeffs.dot(t) / h.bound);
    return 1.0 - worst;
}

/// Strict membership in the outer approximation A_L.
inline bool contains(const DomainApprox& d, const VecR& t) {
    if (t.size() != d.reduced_dim) throw InvalidArgument("contains: point has wrong dimension");
    return std::all_of(d.halfspaces.begin(), d.halfspaces.end(),
                       [&](const HalfSpace& h) { return h.coeffs.dot(t) < h.bound - kContainsTol; });
}

/// Restriction to the plane base + s e_{axis0} + t e_{axis1}. Returns
/// nullopt when the slice is empty because a constant constraint fails.
inline std::optional<HalfSpaces> slice_2d(const HalfSpaces& h, int axis0, int axis1, const VecR& base) {
    HalfSpaces out;
    for (const auto& hs : h) {
        if (axis0 < 0 || axis1 < 0 || axis0 >= hs.coeffs.size() || axis1 >= hs.coeffs.size() || axis0 == axis1) {
            throw InvalidArgument("slice_2d: invalid plane axes");
        }
        VecR c(2);
        c << hs.coeffs[axis0], hs.coeffs[axis1];
        VecR rest = hs.coeffs;
        rest[axis0] = 0.0;
        rest[axis1] = 0.0;
        const double b = hs.bound - rest.dot(base);
        if (c.isZero()) {
            if (b <= 0.0) return std::nullopt;
            continue;
        }
        out.push_back({c, b, hs.provenance});
    }
    return out;
}

struct ConvergenceLevel {
    int max_length = 0;
    std::size_t constraint_count = 0;
    std::size_t irredundant_count = 0;
    std::vector<Provenance> irredundant;
    double chebyshev_radius = 0.0;
    bool bounded = false;
};

struct ConvergenceReport {
    ThetaSet theta;
    EigConfig config;
    std::vector<ConvergenceLevel> levels;
    bool stable = false;
    bool insufficient_data = false;
};

namespace detail {

inline std::vector<std::pair<std::vector<double>, double>> halfspace_keys(const HalfSpaces& h) {
    std::vector<std::pair<std::vector<double>, double>> keys;
    for (const auto& hs : h) keys.emplace_back(std::vector<double>(hs.coeffs.data(), hs.coeffs.data() + hs.coeffs.size()), hs.bound);
    std::sort(keys.begin(), keys.end());
    return keys;
}

}  // namespace detail

/// Irredundant constraint sets of A_L for L = min_length..max_length. The
/// set is flagged stable when it is unchanged over the top third of the range.
template <typename Scalar>
ConvergenceReport convergence_experiment(const RepSpec<Scalar>& zeta, const ThetaSet& theta, int min_length, int max_length,
                                         const Thresholds& th = {}, int threads = 0) {
    if (min_length < 1 || max_length < min_length) throw InvalidArgument("convergence_experiment: invalid length range");
    auto [samples, report] = detail::certified_samples(zeta, theta, max_length, th, threads);
    const ParamSpace space(zeta.group().rank(), zeta.decomposition());
    ConvergenceReport out;
    out.theta = theta;
    out.config = *report.unique_config;
    std::vector<std::vector<std::pair<std::vector<double>, double>>> keys;
    for (int len = min_length; len <= max_length; ++len) {
        ConvergenceLevel lvl;
        lvl.max_length = len;
        const auto hs = detail::constraints_from_samples(samples, out.config, space, zeta.group(), len);
        lvl.constraint_count = hs.size();
        if (hs.empty()) {
            lvl.bounded = space.dim() == 0;
            lvl.chebyshev_radius = space.dim() == 0 ? 0.0 : std::numeric_limits<double>::infinity();
            keys.emplace_back();
        } else {
            const auto irr = remove_redundant(hs);
            lvl.irredundant_count = irr.size();
            for (const auto& h : irr) lvl.irredundant.push_back(h.provenance);
            lvl.bounded = is_bounded(irr);
            lvl.chebyshev_radius = chebyshev_center(irr).radius;
            keys.push_back(detail::halfspace_keys(irr));
        }
        out.levels.push_back(std::move(lvl));
    }
    const std::size_t n = out.levels.size();
    if (n < 2) {
        out.stable = true;
        out.insufficient_data = true;
        return out;
    }
    const std::size_t band = std::max<std::size_t>(2, (n + 2) / 3);
    out.stable = true;
    for (std::size_t i = n - band + 1; i < n; ++i) {
        if (keys[i] != keys[n - band]) out.stable = false;
    }
    return out;
}

/// Certifies beta_U(0, phi(t), zeta) at the given length.
template <typename Scalar>
CertReport certify_deformation(const RepSpec<Scalar>& zeta, const VecR& t, const ThetaSet& theta, int max_length,
                               const Thresholds& th = {}, int threads = 0) {
    const ParamSpace space(zeta.group().rank(), zeta.decomposition());
    return certify(beta_rep(space.deformation(t), zeta), theta, max_length, th, threads);
}

}  // namespace anosov

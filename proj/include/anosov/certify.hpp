#pragma once

// Empirical Anosov certification over conjugacy classes of bounded length.
//
// A representation is P_theta-Anosov when every k-th logarithmic eigenvalue
// gap (k in theta) grows at least linearly in translation length. Only
// finitely many classes can be inspected, so the verdict is a surrogate:
// not_anosov is definitive when witnessed (a non-proximal class, or two
// classes with different large eigenvalue configurations), while
// plausibly_anosov only says the finite data looks linear.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anosov/blocks.hpp"
#include "anosov/configs.hpp"
#include "anosov/parallel.hpp"
#include "anosov/spectra.hpp"
#include "anosov/words.hpp"

namespace anosov {

struct Thresholds {
    /// Minimum gap / length over the top third of the length range.
    double ratio_floor = 0.05;
    /// The least-squares slope of min-gap-per-length must exceed this.
    double min_slope = 0.0;
    /// Relative proximality tolerance.
    double tol = kProximalityTol;
};

enum class Verdict { plausibly_anosov, not_anosov, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::plausibly_anosov: return "plausibly_anosov";
        case Verdict::not_anosov: return "not_anosov";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

enum class SampleStatus { ok, non_proximal, tie_ambiguous, solver_failure };

inline const char* to_string(SampleStatus s) {
    switch (s) {
        case SampleStatus::ok: return "ok";
        case SampleStatus::non_proximal: return "non_proximal";
        case SampleStatus::tie_ambiguous: return "tie_ambiguous";
        case SampleStatus::solver_failure: return "solver_failure";
    }
    return "ok";
}

struct GapSample {
    ClassRep class_rep;
    int length = 0;
    std::map<int, double> gaps;
    SampleStatus status = SampleStatus::ok;
    int failed_k = 0;
    std::string error;
    std::optional<EigConfig> config;
    Spectrum spectrum;
    /// Per-block two-sided spectra; filled for block upper triangular reps.
    std::vector<Spectrum> blocks;
};

namespace detail {

template <typename Scalar>
GapSample evaluate_class(const RepSpec<Scalar>& rep, const ClassRep& cls, const ThetaSet& theta, double tol) {
    GapSample s;
    s.class_rep = cls;
    s.length = translation_length(cls.word);
    const Word inv = invert(cls.word);
    try {
        if (rep.is_structured()) {
            const auto& dec = rep.decomposition();
            for (int j = 0; j < dec.blocks(); ++j) {
                if (dec.dim(j) == 0) {
                    s.blocks.emplace_back();
                    continue;
                }
                s.blocks.push_back(two_sided_magnitudes(rep.evaluate_block(j, cls.word), rep.evaluate_block(j, inv)));
            }
            s.spectrum = merge_block_spectra(s.blocks);
        } else {
            s.spectrum = two_sided_magnitudes(rep.evaluate(cls.word), rep.evaluate(inv));
        }
    } catch (const SpectralError& e) {
        s.status = SampleStatus::solver_failure;
        s.error = e.what();
        return s;
    }
    for (int k : theta) s.gaps[k] = log_gap(s.spectrum, k);
    if (rep.is_structured()) {
        try {
            s.config = large_config(s.spectrum, rep.decomposition(), theta, tol);
        } catch (const TieAmbiguityError& e) {
            s.status = SampleStatus::tie_ambiguous;
            s.failed_k = e.k();
            s.error = e.what();
        } catch (const NonProximalError& e) {
            s.status = SampleStatus::non_proximal;
            s.failed_k = e.k();
            s.error = e.what();
        }
    } else {
        for (int k : theta) {
            if (!is_proximal(s.spectrum, ThetaSet(theta.dim(), {k}), tol)) {
                s.status = SampleStatus::non_proximal;
                s.failed_k = k;
                s.error = "lambda_" + std::to_string(k) + " and lambda_" + std::to_string(k + 1) + " tied within tolerance";
                break;
            }
        }
    }
    return s;
}

}  // namespace detail

/// One sample per primitive conjugacy class of length <= max_length (gamma
/// and gamma^-1 counted separately), ordered by (length, representative).
/// Eigensolver failures are recorded in the sample, not thrown.
template <typename Scalar>
std::vector<GapSample> gap_series(const RepSpec<Scalar>& rep, const ThetaSet& theta, int max_length,
                                  double tol = kProximalityTol, int threads = 0) {
    if (!theta.empty() && theta.dim() != rep.dim()) throw InvalidArgument("gap_series: theta dimension mismatch");
    std::vector<ClassRep> classes;
    for_each_class(rep.group().rank(), max_length, [&](const ClassRep& c) {
        if (c.is_primitive) classes.push_back(c);
        return true;
    });
    std::vector<GapSample> out(classes.size());
    parallel_for(classes.size(), [&](std::size_t i) { out[i] = detail::evaluate_class(rep, classes[i], theta, tol); },
                 threads);
    return out;
}

struct GapStats {
    int k = 0;
    double min_ratio = std::numeric_limits<double>::infinity();
    double band_min_ratio = std::numeric_limits<double>::infinity();
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<std::string> witnesses;
    std::vector<std::pair<int, double>> min_gap_by_length;
};

struct BlockVerdict {
    int block = 0;
    ThetaSet theta;
    Verdict verdict = Verdict::inconclusive;
    std::vector<GapStats> stats;
};

struct CertReport {
    ThetaSet theta;
    int max_length = 0;
    Thresholds thresholds;
    std::size_t sample_count = 0;
    std::size_t failure_count = 0;
    int band_start = 0;
    std::vector<GapStats> stats;
    bool config_consistent = true;
    std::optional<EigConfig> unique_config;
    std::vector<BlockVerdict> block_verdicts;
    Verdict verdict = Verdict::inconclusive;
    std::string reason;
    std::string witness;
    int witness_k = 0;
};

namespace detail {

/// First length of the top third of 1..max_length.
inline int band_start(int max_length) { return max_length - (max_length + 2) / 3 + 1; }

using GapFn = std::function<std::optional<double>(const GapSample&)>;

inline GapStats gap_stats(const std::vector<GapSample>& samples, int k, int max_length, const FreeGroup& group,
                          const GapFn& gap_of) {
    GapStats st;
    st.k = k;
    std::map<int, double> by_len;
    const int band = band_start(max_length);
    for (const auto& s : samples) {
        const auto g = gap_of(s);
        if (!g || s.length == 0) continue;
        const double ratio = *g / s.length;
        if (ratio < st.min_ratio - 1e-12) {
            st.min_ratio = ratio;
            st.witnesses.clear();
        }
        if (std::abs(ratio - st.min_ratio) <= 1e-12 && st.witnesses.size() < 5) st.witnesses.push_back(group.format(s.class_rep.word));
        if (s.length >= band) st.band_min_ratio = std::min(st.band_min_ratio, ratio);
        auto [it, fresh] = by_len.emplace(s.length, *g);
        if (!fresh) it->second = std::min(it->second, *g);
    }
    st.min_gap_by_length.assign(by_len.begin(), by_len.end());
    if (by_len.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (auto [l, g] : by_len) {
            mx += l;
            my += g;
        }
        mx /= static_cast<double>(by_len.size());
        my /= static_cast<double>(by_len.size());
        double sxy = 0.0, sxx = 0.0;
        for (auto [l, g] : by_len) {
            sxy += (l - mx) * (g - my);
            sxx += (l - mx) * (l - mx);
        }
        st.slope = sxy / sxx;
        st.intercept = my - st.slope * mx;
    } else {
        st.slope = std::numeric_limits<double>::quiet_NaN();
    }
    return st;
}

inline bool stats_pass(const std::vector<GapStats>& stats, const Thresholds& th) {
    return std::all_of(stats.begin(), stats.end(), [&](const GapStats& s) {
        return s.band_min_ratio >= th.ratio_floor && s.slope > th.min_slope;
    });
}

}  // namespace detail

/// Aggregates a gap series into a verdict. Kept separate from sampling so
/// callers that already hold the samples (the domain module) reuse them.
template <typename Scalar>
CertReport summarize(const RepSpec<Scalar>& rep, const ThetaSet& theta, int max_length, const Thresholds& th,
                     const std::vector<GapSample>& samples) {
    CertReport r;
    r.theta = theta;
    r.max_length = max_length;
    r.thresholds = th;
    r.sample_count = samples.size();
    r.band_start = detail::band_start(max_length);
    const FreeGroup& group = rep.group();

    for (const auto& s : samples) {
        if (s.status == SampleStatus::solver_failure) ++r.failure_count;
    }
    for (int k : theta) {
        r.stats.push_back(detail::gap_stats(samples, k, max_length, group, [k](const GapSample& s) -> std::optional<double> {
            if (s.status == SampleStatus::solver_failure) return std::nullopt;
            return s.gaps.at(k);
        }));
    }

    if (theta.empty()) {
        r.verdict = Verdict::plausibly_anosov;
        r.reason = "empty theta: the condition is vacuous";
        return r;
    }

    for (const auto& s : samples) {
        if (s.status == SampleStatus::non_proximal || s.status == SampleStatus::tie_ambiguous) {
            r.verdict = Verdict::not_anosov;
            r.witness = group.format(s.class_rep.word);
            r.witness_k = s.failed_k;
            r.reason = std::string("class is not proximal at k=") + std::to_string(s.failed_k) + " (" + to_string(s.status) + ")";
            return r;
        }
    }

    if (rep.is_structured()) {
        for (const auto& s : samples) {
            if (!s.config) continue;
            if (!r.unique_config) {
                r.unique_config = s.config;
            } else if (!(*r.unique_config == *s.config)) {
                r.config_consistent = false;
                r.unique_config.reset();
                r.verdict = Verdict::not_anosov;
                r.witness = group.format(s.class_rep.word);
                r.reason = "large eigenvalue configurations disagree (" + s.config->to_string() + ")";
                return r;
            }
        }
        if (r.unique_config) {
            const auto thetas = block_thetas(*r.unique_config);
            for (int j = 0; j < static_cast<int>(thetas.size()); ++j) {
                if (thetas[static_cast<std::size_t>(j)].empty()) continue;
                BlockVerdict bv{j, thetas[static_cast<std::size_t>(j)], Verdict::inconclusive, {}};
                for (int q : bv.theta) {
                    bv.stats.push_back(detail::gap_stats(samples, q, max_length, group, [j, q](const GapSample& s) -> std::optional<double> {
                        if (s.status == SampleStatus::solver_failure) return std::nullopt;
                        return log_gap(s.blocks.at(static_cast<std::size_t>(j)), q);
                    }));
                }
                bv.verdict = detail::stats_pass(bv.stats, th) ? Verdict::plausibly_anosov : Verdict::inconclusive;
                r.block_verdicts.push_back(std::move(bv));
            }
        }
    }

    if (r.failure_count > 0) {
        r.verdict = Verdict::inconclusive;
        r.reason = std::to_string(r.failure_count) + " classes could not be evaluated";
        return r;
    }
    if (detail::stats_pass(r.stats, th)) {
        r.verdict = Verdict::plausibly_anosov;
        r.reason = "gaps grow linearly over the sampled classes";
    } else {
        r.verdict = Verdict::inconclusive;
        r.reason = "gap growth below thresholds";
    }
    return r;
}

template <typename Scalar>
CertReport certify(const RepSpec<Scalar>& rep, const ThetaSet& theta, int max_length, const Thresholds& th = {},
                   int threads = 0) {
    if (max_length < 2) throw InvalidArgument("certify: max length must be at least 2");
    return summarize(rep, theta, max_length, th, gap_series(rep, theta, max_length, th.tol, threads));
}

/// Verdicts for theta and iota(theta) agree.
template <typename Scalar>
bool involution_crosscheck(const RepSpec<Scalar>& rep, const ThetaSet& theta, int max_length, const Thresholds& th = {},
                           int threads = 0) {
    return certify(rep, theta, max_length, th, threads).verdict ==
           certify(rep, iota_set(theta), max_length, th, threads).verdict;
}

}  // namespace anosov

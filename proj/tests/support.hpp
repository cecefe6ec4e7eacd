#pragma once

// Shared helpers for the test binaries: seeded random matrices, the worked
// Schottky example and small independent oracles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "anosov/anosov.hpp"

namespace anosov {

// Readable gtest diagnostics for words.
inline void PrintTo(const Word& w, std::ostream* os) {
    *os << '"';
    for (Letter l : w.letters()) *os << static_cast<char>((l.exp > 0 ? 'a' : 'A') + l.gen);
    *os << '"';
}

}  // namespace anosov

namespace testing_support {

using namespace anosov;

inline std::string fixture(const std::string& name) { return std::string(ANOSOV_FIXTURE_DIR) + "/" + name; }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline MatR random_matrix(std::mt19937_64& rng, int rows, int cols, double lo = -2.0, double hi = 2.0) {
    MatR m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) m(r, c) = uniform(rng, lo, hi);
    }
    return m;
}

inline MatR random_matrix(std::mt19937_64& rng, int d) { return random_matrix(rng, d, d); }

/// Identity plus a small perturbation: condition number close to 1.
inline MatR well_conditioned(std::mt19937_64& rng, int d, double eps = 0.3) {
    return MatR::Identity(d, d) + random_matrix(rng, d, d, -eps / d, eps / d);
}

inline MatR random_upper(std::mt19937_64& rng, const Decomposition& dec, double lo = -2.0, double hi = 2.0) {
    MatR a = random_matrix(rng, dec.total(), dec.total(), lo, hi);
    for (int i = 0; i < dec.blocks(); ++i) {
        for (int j = 0; j < i; ++j) a.block(dec.offset(i), dec.offset(j), dec.dim(i), dec.dim(j)).setZero();
    }
    return a;
}

inline MatR random_block_diagonal(std::mt19937_64& rng, const Decomposition& dec, double lo = -2.0, double hi = 2.0) {
    MatR a = MatR::Zero(dec.total(), dec.total());
    for (int j = 0; j < dec.blocks(); ++j) a.block(dec.offset(j), dec.offset(j), dec.dim(j), dec.dim(j)) = random_matrix(rng, dec.dim(j), dec.dim(j), lo, hi);
    return a;
}

/// Random decomposition with at most max_blocks nonzero blocks and total at most max_dim.
inline Decomposition random_decomposition(std::mt19937_64& rng, int max_dim, int max_blocks) {
    const int m = std::uniform_int_distribution<int>(1, max_blocks)(rng);
    std::vector<int> dims;
    int left = max_dim;
    for (int j = 0; j < m; ++j) {
        const int hi = std::max(1, left - (m - j - 1));
        const int dj = std::uniform_int_distribution<int>(1, std::min(hi, 4))(rng);
        dims.push_back(dj);
        left -= dj;
    }
    return Decomposition(dims);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline MatR schottky_a() {
    MatR a(2, 2);
    a << 3.0, 0.0, 0.0, 1.0 / 3.0;
    return a;
}

inline MatR schottky_b() {
    MatR b(2, 2);
    b << 5.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0, 5.0 / 3.0;
    return b;
}

/// Schottky block on U_1 = R^2 plus the trivial block on U_2 = R.
inline RepSpec<double> worked_example() {
    const Decomposition dec({2, 1});
    MatR one = MatR::Identity(1, 1);
    return RepSpec<double>(FreeGroup(2), dec, {direct_sum<double>({schottky_a(), one}), direct_sum<double>({schottky_b(), one})},
                           Structure::block_normalized);
}

inline RepSpec<double> trivial_rep(const Decomposition& dec) {
    const MatR id = MatR::Identity(dec.total(), dec.total());
    return RepSpec<double>(FreeGroup(2), dec, {id, id}, Structure::block_normalized);
}

/// Eigenvalue magnitudes of a real 2x2 matrix from the quadratic formula.
inline std::vector<double> quadratic_magnitudes(const MatR& m) {
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4.0 * det, 0.0));
    const std::complex<double> r1 = (tr + disc) / 2.0;
    const std::complex<double> r2 = (tr - disc) / 2.0;
    std::vector<double> out{std::abs(r1), std::abs(r2)};
    std::sort(out.rbegin(), out.rend());
    return out;
}

/// Companion matrix of prod (x - r_i).
inline MatR companion(const std::vector<double>& roots) {
    std::vector<double> c{1.0};
    for (double r : roots) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];
            next[i + 1] -= r * c[i];
        }
        c = next;
    }
    const int d = static_cast<int>(roots.size());
    MatR m = MatR::Zero(d, d);
    for (int i = 1; i < d; ++i) m(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) m(i, d - 1) = -c[static_cast<std::size_t>(d - i)];
    return m;
}

/// Merge of per-block magnitude lists, sorted descending.
inline std::vector<double> sort_merge(const std::vector<std::vector<double>>& lists) {
    std::vector<double> all;
    for (const auto& l : lists) all.insert(all.end(), l.begin(), l.end());
    std::sort(all.rbegin(), all.rend());
    return all;
}

/// Block diagonal matrix with prescribed, well separated magnitudes per block.
inline MatR separated_block_diagonal(std::mt19937_64& rng, const Decomposition& dec, std::vector<std::vector<double>>& mags) {
    const int d = dec.total();
    std::vector<double> pool;
    double m = 0.2;
    for (int i = 0; i < d; ++i) {
        m *= uniform(rng, 1.2, 2.5);
        pool.push_back(m);
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    MatR a = MatR::Zero(d, d);
    mags.assign(static_cast<std::size_t>(dec.blocks()), {});
    std::size_t next = 0;
    for (int j = 0; j < dec.blocks(); ++j) {
        VecR dv(dec.dim(j));
        for (int i = 0; i < dec.dim(j); ++i) {
            const double v = pool[next++];
            mags[static_cast<std::size_t>(j)].push_back(v);
            dv[i] = uniform(rng, 0, 1) < 0.5 ? -v : v;
        }
        const MatR p = well_conditioned(rng, dec.dim(j), 0.8);
        a.block(dec.offset(j), dec.offset(j), dec.dim(j), dec.dim(j)) = p * dv.asDiagonal() * p.inverse();
    }
    return a;
}

/// For the worked example the constraints are +-3 (ab . t) < log mu(gamma),
/// with mu the top eigenvalue magnitude of the Schottky block. Keyed by the
/// coefficient vector, keeping the smallest bound.
inline std::map<std::vector<double>, double> slab_oracle(int max_length) {
    std::map<std::vector<double>, double> out;
    const MatR a = schottky_a(), b = schottky_b();
    const MatR ai = a.inverse(), bi = b.inverse();
    for (const auto& c : enumerate_classes(2, max_length)) {
        if (!c.is_primitive) continue;
        MatR m = MatR::Identity(2, 2);
        for (Letter l : c.word.letters()) m = m * (l.gen == 0 ? (l.exp > 0 ? a : ai) : (l.exp > 0 ? b : bi));
        const double mu = quadratic_magnitudes(m)[0];
        const auto ab = abelianize(c.word);
        for (double sign : {1.0, -1.0}) {
            std::vector<double> key{sign * 3.0 * ab[0] + 0.0, sign * 3.0 * ab[1] + 0.0};
            if (key[0] == 0.0 && key[1] == 0.0) continue;
            auto [it, fresh] = out.emplace(key, std::log(mu));
            if (!fresh) it->second = std::min(it->second, std::log(mu));
        }
    }
    return out;
}

inline Word random_word(std::mt19937_64& rng, int rank, int max_len) {
    const int len = std::uniform_int_distribution<int>(0, max_len)(rng);
    std::vector<Letter> letters;
    for (int i = 0; i < len; ++i) letters.push_back(Letter::from_code(std::uniform_int_distribution<int>(0, 2 * rank - 1)(rng)));
    return reduce(rank, letters);
}

}  // namespace testing_support

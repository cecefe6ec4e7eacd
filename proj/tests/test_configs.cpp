#include <gtest/gtest.h>

#include "support.hpp"

using namespace anosov;
using namespace testing_support;

namespace {

MatR diag(std::initializer_list<double> v) {
    VecR d(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) d[i++] = x;
    return d.asDiagonal();
}

EigConfig make_config(const Decomposition& dec, const ThetaSet& theta, std::map<int, std::vector<int>> q) {
    return {dec, theta, std::move(q)};
}

/// Brute-force configuration: label every eigenvalue with its block, sort, count.
std::map<int, std::vector<int>> oracle_config(const std::vector<std::vector<double>>& per_block, const ThetaSet& theta) {
    std::vector<std::pair<double, int>> all;
    for (std::size_t j = 0; j < per_block.size(); ++j) {
        for (double v : per_block[j]) all.emplace_back(v, static_cast<int>(j));
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::map<int, std::vector<int>> q;
    for (int k : theta) {
        std::vector<int> row(per_block.size(), 0);
        for (int i = 0; i < k; ++i) ++row[static_cast<std::size_t>(all[static_cast<std::size_t>(i)].second)];
        q[k] = row;
    }
    return q;
}

ThetaSet full_theta(int d) { return ThetaSet::full(d); }

}  // namespace

TEST(Iota, Examples) {
    EXPECT_EQ(iota(4, 1), 3);
    for (int k = 1; k < 6; ++k) EXPECT_EQ(iota(6, iota(6, k)), k);
    EXPECT_EQ(iota_set(ThetaSet(4, {1, 2})), ThetaSet(4, {2, 3}));
    EXPECT_EQ(iota_set(iota_set(ThetaSet(5, {1, 4, 2}))), ThetaSet(5, {1, 2, 4}));
    EXPECT_THROW(iota(4, 0), InvalidArgument);
    EXPECT_THROW(iota(4, 4), InvalidArgument);
}

TEST(LargeConfig, Examples) {
    const Decomposition d22({2, 2});
    const MatR b = direct_sum<double>({diag({4, 1}), diag({3, 2})});
    const auto q2 = large_config(b, d22, ThetaSet(4, {2}));
    EXPECT_EQ(q2.at(0, 2), 1);
    EXPECT_EQ(q2.at(1, 2), 1);
    EXPECT_EQ(q2.q, oracle_config({{4, 1}, {3, 2}}, ThetaSet(4, {2})));
    const auto q1 = large_config(b, d22, ThetaSet(4, {1}));
    EXPECT_EQ(q1.at(0, 1), 1);
    EXPECT_EQ(q1.at(1, 1), 0);

    const Decomposition d21({2, 1});
    EXPECT_THROW(large_config(direct_sum<double>({diag({2, 2}), diag({1})}), d21, ThetaSet(3, {1})), NonProximalError);
}

TEST(LargeConfig, TieAcrossBlocksIsAmbiguous) {
    const Decomposition d21({2, 1});
    try {
        large_config(direct_sum<double>({diag({2, 1}), diag({2})}), d21, ThetaSet(3, {1}));
        FAIL() << "expected a tie error";
    } catch (const TieAmbiguityError& e) {
        EXPECT_EQ(e.k(), 1);
    }
    // Ties strictly inside the top k do not matter.
    const auto q = large_config(direct_sum<double>({diag({2, 1}), diag({2})}), d21, ThetaSet(3, {2}));
    EXPECT_EQ(q.at(0, 2), 1);
    EXPECT_EQ(q.at(1, 2), 1);
}

TEST(LargeConfig, RequiresBlockUpperTriangular) {
    MatR a = MatR::Identity(2, 2);
    a(1, 0) = 1.0;
    EXPECT_THROW(large_config(a, Decomposition({1, 1}), ThetaSet(2, {1})), HypothesisError);
}

TEST(LargeConfig, MatchesSortMergeOracleAndInvariants) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const Decomposition dec = random_decomposition(rng, 8, 3);
        if (dec.total() < 2) continue;
        std::vector<std::vector<double>> mags;
        const MatR b = separated_block_diagonal(rng, dec, mags);
        const ThetaSet theta = full_theta(dec.total());
        const auto cfg = large_config(b, dec, theta);
        EXPECT_EQ(cfg.q, oracle_config(mags, theta));
        EXPECT_TRUE(is_admissible(cfg));
        for (int j = 0; j < dec.blocks(); ++j) {
            int prev = 0;
            for (int k : theta) {
                EXPECT_GE(cfg.at(j, k), prev);
                EXPECT_LE(cfg.at(j, k), dec.dim(j));
                prev = cfg.at(j, k);
            }
        }

        // Adding strictly upper blocks changes nothing.
        MatR a = b;
        MatR n = random_upper(rng, dec);
        for (int j = 0; j < dec.blocks(); ++j) a.block(dec.offset(j), dec.offset(j), dec.dim(j), dec.dim(j)).setZero();
        a = b + (n - block_diagonalize(n, dec));
        EXPECT_EQ(large_config(a, dec, theta), cfg);

        // The inverse at iota(k) has configuration d_j - q_{j,k}.
        const auto inv = large_config(MatR(a.inverse()), dec, iota_set(theta));
        for (int k : theta) {
            for (int j = 0; j < dec.blocks(); ++j) EXPECT_EQ(inv.at(j, dec.total() - k), dec.dim(j) - cfg.at(j, k));
        }
    }
}

TEST(Admissibility, Examples) {
    const Decomposition d22({2, 2});
    EXPECT_TRUE(is_admissible(make_config(d22, ThetaSet(4, {2}), {{2, {1, 1}}})));
    EXPECT_FALSE(is_admissible(make_config(d22, ThetaSet(4, {2}), {{2, {2, 1}}})));
    EXPECT_FALSE(is_admissible(make_config(d22, ThetaSet(4, {1, 2}), {{1, {1, 0}}, {2, {0, 2}}})));
    EXPECT_FALSE(is_admissible(make_config(d22, ThetaSet(4, {1}), {{1, {-1, 2}}})));

    const Decomposition d21({2, 1});
    const auto q = make_config(d21, ThetaSet(3, {1}), {{1, {1, 0}}});
    EXPECT_EQ(nonempty_pairs(q, 1), (std::vector<std::pair<int, int>>{{0, 0}, {0, 1}}));
}

TEST(Admissibility, PairsAreNeverEmptyForAdmissibleConfigs) {
    // Exhaustive over small decompositions.
    for (const auto& dims : std::vector<std::vector<int>>{{1, 1}, {2, 1}, {1, 2, 1}, {3, 2}, {2, 0, 2}}) {
        const Decomposition dec(dims);
        const int d = dec.total();
        for (int k = 1; k < d; ++k) {
            std::vector<int> row(dims.size(), 0);
            std::function<void(std::size_t, int)> fill = [&](std::size_t j, int left) {
                if (j == dims.size()) {
                    if (left != 0) return;
                    const auto cfg = make_config(dec, ThetaSet(d, {k}), {{k, row}});
                    EXPECT_TRUE(is_admissible(cfg));
                    EXPECT_FALSE(nonempty_pairs(cfg, k).empty());
                    return;
                }
                for (int v = 0; v <= std::min(dims[j], left); ++v) {
                    row[j] = v;
                    fill(j + 1, left - v);
                }
            };
            fill(0, k);
        }
    }
}

TEST(GapViaConfig, Examples) {
    const Decomposition d22({2, 2});
    const std::vector<Spectrum> blocks{eigen_magnitudes(diag({4, 1})), eigen_magnitudes(diag({3, 2}))};
    const auto q2 = make_config(d22, ThetaSet(4, {2}), {{2, {1, 1}}});
    EXPECT_NEAR(gap_via_config(blocks, q2, 2), std::log(1.5), 1e-15);
    const auto q1 = make_config(d22, ThetaSet(4, {1}), {{1, {1, 0}}});
    EXPECT_NEAR(gap_via_config(blocks, q1, 1), std::log(4.0 / 3.0), 1e-15);

    const Decomposition d3({3});
    const MatR a = diag({5, 2, 1});
    const auto single = large_config(a, d3, ThetaSet(3, {1, 2}));
    for (int k : {1, 2}) EXPECT_NEAR(gap_via_config(block_spectra(a, d3), single, k), log_gap(a, k), 1e-15);
}

TEST(GapViaConfig, EqualsDirectGapOnRandomSamples) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 500; ++trial) {
        const Decomposition dec = random_decomposition(rng, 8, 3);
        if (dec.total() < 2) continue;
        std::vector<std::vector<double>> mags;
        MatR a = separated_block_diagonal(rng, dec, mags);
        const MatR n = random_upper(rng, dec);
        a += n - block_diagonalize(n, dec);
        const ThetaSet theta = full_theta(dec.total());
        const auto cfg = large_config(a, dec, theta);
        const auto blocks = block_spectra(a, dec);
        const auto full = eigen_magnitudes(block_diagonalize(a, dec));
        for (int k : theta) EXPECT_NEAR(gap_via_config(blocks, cfg, k), log_gap(full, k), 1e-9);
    }
}

TEST(Structured, StrongPassesOnBlockDiagonal) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const Decomposition dec = random_decomposition(rng, 7, 3);
        if (dec.total() < 2) continue;
        std::vector<std::vector<double>> mags;
        const MatR b = separated_block_diagonal(rng, dec, mags);
        const ThetaSet theta = full_theta(dec.total());
        const auto cfg = large_config(b, dec, theta);
        const auto rep = check_structured(attracting_flag(b, theta), dec, cfg, StructureMode::strong);
        EXPECT_TRUE(rep.pass);
        EXPECT_EQ(rep.measured, cfg.q);
    }
}

TEST(Structured, WeakPassesOnUpperTriangular) {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 100; ++trial) {
        const Decomposition dec = random_decomposition(rng, 7, 3);
        if (dec.total() < 2) continue;
        std::vector<std::vector<double>> mags;
        MatR a = separated_block_diagonal(rng, dec, mags);
        const MatR n = random_upper(rng, dec);
        a += n - block_diagonalize(n, dec);
        const ThetaSet theta = full_theta(dec.total());
        const auto cfg = large_config(a, dec, theta);
        const auto rep = check_structured(attracting_flag(a, theta), dec, cfg, StructureMode::weak);
        EXPECT_TRUE(rep.pass) << "dims " << dec.total();
    }
}

TEST(Structured, GenericFlagFails) {
    std::mt19937_64 rng(45);
    const Decomposition dec({2, 2});
    const ThetaSet theta(4, {1, 2, 3});
    const auto cfg = make_config(dec, theta, {{1, {1, 0}}, {2, {1, 1}}, {3, {2, 1}}});
    int failures = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const MatR g = random_matrix(rng, 4);
        Flag<double> f{theta, {}};
        for (int k : theta) f.subspaces.emplace(k, span_of(MatR(g.leftCols(k))));
        if (!check_structured(f, dec, cfg, StructureMode::strong).pass) ++failures;
        if (!check_structured(f, dec, cfg, StructureMode::weak).pass) ++failures;
    }
    EXPECT_EQ(failures, 100);
    Flag<double> f{ThetaSet(4, {1}), {}};
    f.subspaces.emplace(1, span_of(MatR(MatR::Identity(4, 1))));
    EXPECT_THROW(check_structured(f, dec, cfg, StructureMode::strong), InvalidArgument);
}

TEST(BlockThetas, Examples) {
    const Decomposition d21({2, 1});
    const auto worked = make_config(d21, ThetaSet(3, {1, 2}), {{1, {1, 0}}, {2, {1, 1}}});
    const auto t = block_thetas(worked);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t[0], ThetaSet(2, {1}));
    EXPECT_TRUE(t[1].empty());

    const Decomposition d22({2, 2});
    const auto extremes = make_config(d22, ThetaSet(4, {2}), {{2, {2, 0}}});
    for (const auto& s : block_thetas(extremes)) EXPECT_TRUE(s.empty());

    const Decomposition d31({3, 1});
    const auto inner = make_config(d31, ThetaSet(4, {1, 2}), {{1, {1, 0}}, {2, {2, 0}}});
    EXPECT_EQ(block_thetas(inner)[0], ThetaSet(3, {1, 2}));
}

TEST(HalfBound, Examples) {
    const Decomposition d21({2, 1});
    EXPECT_TRUE(half_bound_check(make_config(d21, ThetaSet(3, {1, 2}), {{1, {1, 0}}, {2, {1, 1}}})));
    EXPECT_FALSE(half_bound_check(make_config(Decomposition({2, 2}), ThetaSet(4, {1}), {{1, {2, -1}}})));
    EXPECT_FALSE(half_bound_check(make_config(Decomposition({2, 2}), ThetaSet(4, {2}), {{2, {2, 0}}})));
    EXPECT_TRUE(half_bound_check(make_config(d21, ThetaSet(3, {}), {})));
}

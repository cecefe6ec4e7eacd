#include <gtest/gtest.h>

#include <map>
#include <set>

#include "support.hpp"

using namespace anosov;
using testing_support::random_word;

namespace {

const FreeGroup F2(2);

Word w(const std::string& s) { return F2.parse(s); }

}  // namespace

TEST(Reduce, CancelsAdjacentInversePairs) {
    EXPECT_TRUE(reduce(2, {{0, 1}, {0, -1}}).empty());
    EXPECT_EQ(reduce(2, {{0, 1}, {1, 1}, {1, -1}, {0, 1}}), w("a a"));
    EXPECT_EQ(reduce(2, {{0, 1}, {1, 1}}).length(), 2u);
}

TEST(Reduce, UnknownGeneratorIsRejected) {
    EXPECT_THROW(reduce(2, {{2, 1}}), InvalidArgument);
    EXPECT_THROW(reduce(2, {{0, 2}}), InvalidArgument);
    EXPECT_THROW(F2.parse("a c"), InvalidArgument);
}

TEST(GroupLaw, MultiplyAndInvert) {
    EXPECT_TRUE(multiply(w("a"), w("A")).empty());
    EXPECT_EQ(invert(w("a b")), w("B A"));
    EXPECT_EQ(multiply(w("a b"), w("B")), w("a"));
    EXPECT_THROW(multiply(w("a"), FreeGroup(3).parse("c")), InvalidArgument);
}

TEST(GroupLaw, PowersAndInverses) {
    EXPECT_EQ(power(w("a b"), 3), w("a b a b a b"));
    EXPECT_EQ(power(w("a b"), -1), w("B A"));
    EXPECT_TRUE(power(w("a b"), 0).empty());
}

TEST(TranslationLength, Examples) {
    EXPECT_EQ(translation_length(w("a b A")), 1);
    EXPECT_EQ(translation_length(F2.identity()), 0);
    EXPECT_EQ(translation_length(w("a b a b")), 4);
    EXPECT_EQ(cyclic_reduction(w("a b A")), w("b"));
    EXPECT_EQ(cyclic_reduction(w("B a b A b")), w("b"));
    EXPECT_EQ(cyclic_reduction(w("a a b A")), w("a b"));
}

TEST(TranslationLength, InverseAndConjugationInvariance) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const Word g = random_word(rng, 2, 12);
        const Word u = random_word(rng, 2, 8);
        EXPECT_EQ(translation_length(g), translation_length(invert(g)));
        EXPECT_EQ(translation_length(multiply(u, multiply(g, invert(u)))), translation_length(g));
    }
}

TEST(Abelianize, Examples) {
    EXPECT_EQ(abelianize(w("a b A B")), (std::vector<int>{0, 0}));
    EXPECT_EQ(abelianize(w("a b a")), (std::vector<int>{2, 1}));
    EXPECT_EQ(abelianize(F2.identity()), (std::vector<int>{0, 0}));
}

TEST(Abelianize, IsAHomomorphism) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 2000; ++trial) {
        const Word u = random_word(rng, 3, 10);
        const Word v = random_word(rng, 3, 10);
        const auto au = abelianize(u), av = abelianize(v), auv = abelianize(multiply(u, v));
        for (std::size_t g = 0; g < 3; ++g) EXPECT_EQ(auv[g], au[g] + av[g]);
    }
}

TEST(Enumerate, LengthOneGivesTheFourLetters) {
    const auto cls = enumerate_classes(2, 1);
    ASSERT_EQ(cls.size(), 4u);
    std::set<std::string> names;
    for (const auto& c : cls) names.insert(F2.format(c.word));
    EXPECT_EQ(names, (std::set<std::string>{"a", "A", "b", "B"}));
}

TEST(Enumerate, ReducedWordCountOracle) {
    // Brute force over all 4^l letter strings.
    for (int len = 1; len <= 6; ++len) {
        long count = 0;
        long total = 1;
        for (int i = 0; i < len; ++i) total *= 4;
        for (long code = 0; code < total; ++code) {
            std::vector<Letter> letters;
            long c = code;
            for (int i = 0; i < len; ++i, c /= 4) letters.push_back(Letter::from_code(static_cast<int>(c % 4)));
            if (static_cast<int>(reduce(2, letters).length()) == len) ++count;
        }
        long expected = 4;
        for (int i = 1; i < len; ++i) expected *= 3;
        EXPECT_EQ(count, expected) << "length " << len;
    }
}

TEST(Enumerate, PowerAnnotation) {
    const auto c = class_rep(w("a b a b"));
    EXPECT_FALSE(c.is_primitive);
    EXPECT_EQ(c.root, w("a b"));
    EXPECT_EQ(c.power, 2);
    const auto p = class_rep(w("b a b"));
    EXPECT_EQ(p.word, w("a b b"));
    EXPECT_TRUE(p.is_primitive);
    EXPECT_EQ(p.power, 1);
}

TEST(Enumerate, ExhaustiveAgainstBruteForceRotationClasses) {
    // Oracle: every cyclically reduced string, bucketed by the minimum of its rotations.
    for (int rank : {2, 3}) {
        const int max_len = rank == 2 ? 6 : 4;
        std::set<std::vector<int>> oracle;
        for (int len = 1; len <= max_len; ++len) {
            long total = 1;
            for (int i = 0; i < len; ++i) total *= 2 * rank;
            for (long code = 0; code < total; ++code) {
                std::vector<int> s;
                long c = code;
                for (int i = 0; i < len; ++i, c /= 2 * rank) s.push_back(static_cast<int>(c % (2 * rank)));
                bool reduced = true;
                for (int i = 0; i < len && reduced; ++i) {
                    const Letter x = Letter::from_code(s[static_cast<std::size_t>(i)]);
                    const Letter y = Letter::from_code(s[static_cast<std::size_t>((i + 1) % len)]);
                    if (len > 1 && x.cancels(y)) reduced = false;
                }
                if (!reduced) continue;
                std::vector<int> best = s;
                for (int r = 1; r < len; ++r) {
                    std::vector<int> rot(s.begin() + r, s.end());
                    rot.insert(rot.end(), s.begin(), s.begin() + r);
                    best = std::min(best, rot);
                }
                oracle.insert(best);
            }
        }
        std::set<std::vector<int>> emitted;
        std::size_t count = 0;
        Word prev(rank);
        for (const auto& c : enumerate_classes(rank, max_len)) {
            ASSERT_TRUE(is_cyclically_reduced(c.word));
            ASSERT_EQ(least_rotation(c.word), c.word);
            EXPECT_EQ(power(c.root, c.power), c.word);
            EXPECT_TRUE(prev < c.word) << "order is not strictly increasing";
            prev = c.word;
            std::vector<int> codes;
            for (Letter l : c.word.letters()) codes.push_back(l.code());
            emitted.insert(codes);
            ++count;
        }
        EXPECT_EQ(count, emitted.size()) << "a class was emitted twice";
        EXPECT_EQ(emitted, oracle) << "rank " << rank;
    }
}

TEST(Enumerate, NoTwoRepresentativesAreRotations) {
    std::set<std::string> seen;
    for (const auto& c : enumerate_classes(2, 6)) {
        for (std::size_t s = 0; s < c.word.length(); ++s) {
            const std::string r = F2.format(rotate(c.word, s));
            if (s == 0) continue;
            EXPECT_TRUE(r == F2.format(c.word) || !seen.count(r)) << r;
        }
        seen.insert(F2.format(c.word));
    }
}

TEST(Enumerate, InverseClassesAreListedSeparately) {
    std::set<std::string> names;
    for (const auto& c : enumerate_classes(2, 3)) names.insert(F2.format(c.word));
    EXPECT_TRUE(names.count("a b"));
    EXPECT_TRUE(names.count("A B"));
}

TEST(Enumerate, EarlyStopIsHonoured) {
    int visited = 0;
    for_each_class(2, 6, [&](const ClassRep&) { return ++visited < 10; });
    EXPECT_EQ(visited, 10);
}

TEST(FreeGroupNames, ParseAndFormat) {
    const FreeGroup g({"x", "y", "z"});
    EXPECT_EQ(g.format(g.parse("x Y z")), "x Y z");
    EXPECT_EQ(g.parse("xYz"), g.parse("x Y z"));
    EXPECT_EQ(g.format(g.identity()), "");
    const FreeGroup long_names({"s1", "s2"});
    EXPECT_EQ(long_names.format(long_names.parse("s1 S2 s2 s1")), "s1 s1");
    EXPECT_THROW(long_names.parse("s1s2"), InvalidArgument);
}

TEST(FreeGroupNames, Validation) {
    EXPECT_THROW(FreeGroup(1), InvalidArgument);
    EXPECT_THROW(FreeGroup(std::vector<std::string>{"a"}), InvalidArgument);
    EXPECT_THROW(FreeGroup(std::vector<std::string>{"a", "A"}), InvalidArgument);
    EXPECT_THROW(FreeGroup(std::vector<std::string>{"a", "a"}), InvalidArgument);
    EXPECT_THROW(FreeGroup(std::vector<std::string>{"a", "b c"}), InvalidArgument);
    EXPECT_THROW(FreeGroup(std::vector<std::string>{"a", "1"}), InvalidArgument);
}

#include "gramcode/exponents.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gramcode;

TEST(Trivial, SmallCases) {
    EXPECT_EQ(construct_trivial(1).exponents, (std::vector<std::int64_t>{0, 1}));
    EXPECT_EQ(construct_trivial(3).exponents, (std::vector<std::int64_t>{0, 1, 3, 7}));
    EXPECT_EQ(construct_trivial(4).exponents, (std::vector<std::int64_t>{0, 1, 3, 7, 15}));
}

TEST(Trivial, AllSumsDistinct) {
    for (std::size_t p = 1; p <= 10; ++p) {
        auto phi = construct_trivial(p);
        EXPECT_TRUE(is_valid(phi, p).valid) << "p = " << p;
        // distinct binary expansions make every pair sum unique
        EXPECT_EQ(distinct_exponents(phi).size(), (p + 1) * (p + 2) / 2);
        EXPECT_EQ(phi.largest(), (std::int64_t{1} << p) - 1);
    }
}

TEST(Trivial, Bounds) {
    EXPECT_THROW(construct_trivial(0), InvalidPartition);
    EXPECT_THROW(construct_trivial(62), Overflow);
}

TEST(Doubling, PaperVectors) {
    EXPECT_EQ(construct_doubling(1).exponents, (std::vector<std::int64_t>{0, 1}));
    EXPECT_EQ(construct_doubling(3).exponents, (std::vector<std::int64_t>{0, 1, 3, 4}));
    EXPECT_EQ(construct_doubling(7).exponents,
              (std::vector<std::int64_t>{0, 1, 3, 4, 9, 10, 12, 13}));
}

TEST(Doubling, TriplingDistinctCountAtPowersOfTwo) {
    std::size_t expect = 1;
    for (unsigned n = 0; n <= 5; ++n) {
        auto seq = doubling_sequence(n);
        ASSERT_EQ(seq.size(), std::size_t{1} << n);
        auto h = distinct_exponents(ExponentVector::with_one_noise(seq));
        EXPECT_EQ(h.size(), expect) << "n = " << n;
        // contiguous range 0..3^n - 1
        for (std::size_t k = 0; k < h.size(); ++k)
            EXPECT_EQ(h.members[k], static_cast<std::int64_t>(k));
        expect *= 3;
    }
}

TEST(Doubling, ValidAndBoundedForAllP) {
    const double log2_3 = std::log2(3.0);
    for (std::size_t p = 1; p <= 31; ++p) {
        auto phi = construct_doubling(p);
        ASSERT_EQ(phi.size(), p + 1);
        EXPECT_TRUE(is_valid(phi, p).valid) << "p = " << p;
        const double bound = 3.0 * std::pow(static_cast<double>(p + 1), log2_3);
        EXPECT_LE(static_cast<double>(distinct_exponents(phi).size()), bound + 1e-9) << "p = " << p;
    }
}

TEST(Doubling, PrefixOfNextPowerOfTwo) {
    auto full = construct_doubling(7).exponents;
    for (std::size_t p = 4; p <= 7; ++p) {
        auto phi = construct_doubling(p).exponents;
        EXPECT_TRUE(std::equal(phi.begin(), phi.end(), full.begin()));
    }
}

TEST(Doubling, GeneralizedBase) {
    EXPECT_EQ(sidon_offsets(2), (std::vector<std::int64_t>{0, 1}));
    EXPECT_EQ(sidon_offsets(3), (std::vector<std::int64_t>{0, 1, 3}));
    // base 3 step multiplies the distinct count by 3*4/2 = 6
    auto seq = doubling_sequence(2, 3);
    ASSERT_EQ(seq.size(), 9u);
    EXPECT_EQ(distinct_exponents(ExponentVector::with_one_noise(seq)).size(), 36u);
    for (std::size_t p : {2, 5, 8, 12}) {
        auto phi = construct_doubling(p, 3);
        EXPECT_TRUE(is_valid(phi, p).valid) << "p = " << p;
    }
    for (std::size_t p : {3, 9, 14}) {
        auto phi = construct_doubling(p, 4);
        EXPECT_TRUE(is_valid(phi, p).valid) << "p = " << p;
    }
}

TEST(Search, MatchesKnownOptimaForSmallP) {
    EXPECT_EQ(search_min_max(1).largest, 1);
    EXPECT_EQ(search_min_max(2).largest, 3);
    EXPECT_EQ(search_min_max(2).phi.exponents, (std::vector<std::int64_t>{0, 1, 3}));
    EXPECT_EQ(search_min_max(3).largest, 4);
    EXPECT_EQ(search_min_max(4).largest, 8);
    EXPECT_EQ(search_min_max(5).largest, 10);
    EXPECT_EQ(search_min_max(6).largest, 12);
}

TEST(Search, ResultIsValidWithConsistentMetadata) {
    for (std::size_t p = 1; p <= 7; ++p) {
        auto res = search_min_max(p);
        EXPECT_TRUE(is_valid(res.phi, p).valid);
        EXPECT_EQ(res.largest, res.phi.largest());
        EXPECT_EQ(res.distinct_count, distinct_exponents(res.phi).size());
        EXPECT_GT(res.nodes_visited, 0u);
        EXPECT_TRUE(res.phi.strictly_increasing());
        EXPECT_EQ(res.phi[0], 0);
    }
}

TEST(Search, OptimumDominatesConstructions) {
    for (std::size_t p = 1; p <= 8; ++p) {
        auto best = search_min_max(p).largest;
        EXPECT_LE(best, construct_doubling(p).largest()) << "p = " << p;
        EXPECT_LE(best, construct_trivial(p).largest()) << "p = " << p;
    }
}

TEST(Search, LargestIsMonotoneInP) {
    std::int64_t prev = 0;
    for (std::size_t p = 1; p <= 8; ++p) {
        auto cur = search_min_max(p).largest;
        EXPECT_GE(cur, prev);
        prev = cur;
    }
}

TEST(Search, BudgetExhaustionCarriesFallback) {
    try {
        search_min_max(9, 100);
        FAIL() << "expected BudgetExceeded";
    } catch (const BudgetExceeded& e) {
        EXPECT_GT(e.nodes_visited, 100u - 1);
        EXPECT_TRUE(is_valid(e.fallback, 9).valid);
        EXPECT_EQ(e.fallback.exponents, construct_doubling(9).exponents);
    }
}

TEST(Search, RejectsZeroP) {
    EXPECT_THROW(search_min_max(0), InvalidPartition);
}

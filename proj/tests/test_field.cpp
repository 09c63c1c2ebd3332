#include "gramcode/field.hpp"
#include "gramcode/matrix.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace gramcode;
using gramcode::testing::naive_gram;
using gramcode::testing::naive_mul;

TEST(PrimeField, BasicArithmetic) {
    PrimeField f(11);
    EXPECT_EQ(f.mul(3, 5), 4u); // 15 mod 11
    EXPECT_EQ(f.inv(2), 6u);    // 2 * 6 = 12 = 1 mod 11
    EXPECT_EQ(f.add(7, 9), 5u);
    EXPECT_EQ(f.sub(3, 9), 5u);
}

TEST(PrimeField, PowMatchesRepeatedSquaringOracle) {
    PrimeField f(11);
    // independent oracle: plain repeated multiplication
    std::uint64_t expect = 1;
    for (int i = 0; i < 7; ++i) expect = expect * 2 % 11;
    EXPECT_EQ(expect, 7u); // 128 mod 11
    EXPECT_EQ(f.pow(2, 7), expect);

    PrimeField big(kDefaultModulus);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        std::uint64_t base = uniform_field_element(rng, big.modulus());
        std::uint64_t e = rng() % 64;
        std::uint64_t slow = 1;
        for (std::uint64_t i = 0; i < e; ++i) slow = big.mul(slow, base);
        EXPECT_EQ(big.pow(base, e), slow);
    }
}

TEST(PrimeField, RejectsNonPrimeModulus) {
    EXPECT_THROW(PrimeField(10), InvalidModulus);
    EXPECT_THROW(PrimeField(1), InvalidModulus);
    EXPECT_NO_THROW((void)PrimeField(7));
    EXPECT_NO_THROW((void)PrimeField(kDefaultModulus));
}

TEST(PrimeField, InverseOfZeroThrows) {
    PrimeField f(11);
    EXPECT_THROW(f.inv(0), DivisionByZero);
}

TEST(PrimeField, AxiomsOnRandomSamples) {
    for (std::uint64_t q : {std::uint64_t{7}, std::uint64_t{11}, kDefaultModulus}) {
        PrimeField f(q);
        std::mt19937_64 rng(q);
        for (int trial = 0; trial < 50; ++trial) {
            std::uint64_t a = uniform_field_element(rng, q);
            std::uint64_t b = uniform_field_element(rng, q);
            std::uint64_t c = uniform_field_element(rng, q);
            EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            if (a != 0) {
                EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
            }
        }
    }
}

TEST(PrimeField, PrimalityCheck) {
    EXPECT_TRUE(is_prime_u64(2));
    EXPECT_TRUE(is_prime_u64(kDefaultModulus));
    EXPECT_FALSE(is_prime_u64(1));
    EXPECT_FALSE(is_prime_u64((1ULL << 61) - 3));
    EXPECT_TRUE(is_prime_u64(1000000007));
}

TEST(PartitionIpp, EvenSplit) {
    PrimeField f(11);
    FieldMatrix a(f, 2, 4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j) a.at(i, j) = i * 4 + j + 1;
    auto blocks = partition_ipp(a, 2);
    ASSERT_EQ(blocks.size(), 2u);
    for (const auto& b : blocks) {
        EXPECT_EQ(b.rows(), 2u);
        EXPECT_EQ(b.cols(), 2u);
    }
    EXPECT_EQ(blocks[0].at(0, 0), 1u);
    EXPECT_EQ(blocks[0].at(0, 1), 2u);
    EXPECT_EQ(blocks[1].at(0, 0), 3u);
    EXPECT_EQ(blocks[1].at(1, 1), 8u);
}

TEST(PartitionIpp, PadsWithZeroColumns) {
    PrimeField f(11);
    FieldMatrix a(f, 2, 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) a.at(i, j) = i * 3 + j + 1;
    auto blocks = partition_ipp(a, 2);
    ASSERT_EQ(blocks.size(), 2u);
    EXPECT_EQ(blocks[1].at(0, 0), 3u);
    EXPECT_EQ(blocks[1].at(0, 1), 0u);
    EXPECT_EQ(blocks[1].at(1, 1), 0u);
}

TEST(PartitionIpp, GramSumIsPreserved) {
    PrimeField f(11);
    std::mt19937_64 rng(42);
    FieldMatrix a = FieldMatrix::random(f, 3, 8, rng);
    auto blocks = partition_ipp(a, 4);
    FieldMatrix sum(f, 3, 3);
    for (const auto& b : blocks) sum = sum.add(naive_gram(b));
    EXPECT_EQ(sum, naive_gram(a));
}

TEST(PartitionIpp, RoundTripForAllPartitionCounts) {
    PrimeField f(101);
    std::mt19937_64 rng(7);
    FieldMatrix a = FieldMatrix::random(f, 3, 7, rng);
    for (std::size_t p = 1; p <= a.cols(); ++p) {
        auto blocks = partition_ipp(a, p);
        const std::size_t chunk = blocks[0].cols();
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < p * chunk; ++j) {
                std::uint64_t v = blocks[j / chunk].at(i, j % chunk);
                if (j < a.cols())
                    EXPECT_EQ(v, a.at(i, j));
                else
                    EXPECT_EQ(v, 0u);
            }
    }
}

TEST(PartitionIpp, RejectsZeroPartitions) {
    PrimeField f(11);
    FieldMatrix a(f, 2, 2);
    EXPECT_THROW(partition_ipp(a, 0), InvalidPartition);
}

TEST(GramLower, IdentityAndZero) {
    PrimeField f(7);
    auto packed = gram_lower(FieldMatrix::identity(f, 2));
    ASSERT_EQ(packed.entries.size(), 3u);
    EXPECT_EQ(packed.entries, (std::vector<std::uint64_t>{1, 0, 1}));

    auto zero = gram_lower(FieldMatrix(f, 3, 4));
    for (auto v : zero.entries) EXPECT_EQ(v, 0u);
}

TEST(GramLower, MatchesFullProductOracle) {
    for (std::uint64_t q : {std::uint64_t{7}, kDefaultModulus}) {
        PrimeField f(q);
        std::mt19937_64 rng(q + 1);
        for (int trial = 0; trial < 10; ++trial) {
            FieldMatrix m = FieldMatrix::random(f, 3, 5, rng);
            FieldMatrix expect = naive_gram(m);
            FieldMatrix got = unpack(gram_lower(m), f);
            EXPECT_EQ(got, expect);
            // symmetry of the unpacked result
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(got.at(i, j), got.at(j, i));
        }
    }
}

TEST(GramLower, PackUnpackRoundTrip) {
    PrimeField f(13);
    std::mt19937_64 rng(3);
    FieldMatrix m = FieldMatrix::random(f, 4, 6, rng);
    auto packed = gram_lower(m);
    EXPECT_EQ(pack_lower(unpack(packed, f)), packed);
}

TEST(FieldMatrix, TransposeInvolutionAndProductRule) {
    PrimeField f(kDefaultModulus);
    std::mt19937_64 rng(9);
    FieldMatrix m = FieldMatrix::random(f, 3, 5, rng);
    FieldMatrix n = FieldMatrix::random(f, 5, 2, rng);
    EXPECT_EQ(m.transpose().transpose(), m);
    EXPECT_EQ(naive_mul(m, n).transpose(), naive_mul(n.transpose(), m.transpose()));
}

#include "gramcode/costs.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "gramcode/scheme.hpp"
#include "test_util.hpp"

using namespace gramcode;

namespace {
// s divisible by every partition count in play keeps the per-ts comparisons
// free of rounding
constexpr std::size_t kT = 10;
constexpr std::size_t kS = 2520;
} // namespace

TEST(SchemeParams, SdgmmRows) {
    auto row = scheme_params("sdgmm-i", 7, kT, kS);
    EXPECT_EQ(row.recovery_threshold, 27u);
    EXPECT_EQ(row.partitions, 7u);
    EXPECT_TRUE(row.straggler_tolerant);
    EXPECT_EQ(row.upload_elems, 27u * kT * (kS / 7));
    EXPECT_EQ(row.download_elems, 27u * kT * (kT + 1) / 2);

    auto ii = scheme_params("sdgmm-ii", 4, kT, kS);
    EXPECT_EQ(ii.recovery_threshold, 14u); // |H| = 14 beats 2*8+1 = 17

    auto trivial = scheme_params("sdgmm-trivial", 4, kT, kS);
    EXPECT_EQ(trivial.recovery_threshold, 15u); // (p+1)(p+2)/2
}

TEST(SchemeParams, RUsesInterpolationWhenSmaller) {
    // scheme II at p = 8: |H| = 34 vs 2*19 + 1 = 39
    auto row = scheme_params("sdgmm-ii", 8, kT, kS);
    EXPECT_EQ(row.recovery_threshold, 34u);
}

TEST(SchemeParams, MatDotRow) {
    auto row = scheme_params("matdot", 7, kT, kS);
    EXPECT_EQ(row.partitions, 14u);
    EXPECT_EQ(row.recovery_threshold, 29u); // 2 * 14 + 1
    EXPECT_EQ(row.upload_elems, 2u * 29 * kT * (kS / 14));
    EXPECT_EQ(row.download_elems, 29u * kT * kT);
    EXPECT_TRUE(row.straggler_tolerant);
    EXPECT_FALSE(row.model_only);
}

TEST(SchemeParams, DftRow) {
    auto row = scheme_params("dft", 4, kT, kS);
    EXPECT_EQ(row.partitions, 8u);
    EXPECT_EQ(row.recovery_threshold, 10u); // 2p + 2X, all must respond
    EXPECT_EQ(row.upload_elems, 2u * 10 * kT * (kS / 8));
    EXPECT_FALSE(row.straggler_tolerant);
    EXPECT_TRUE(row.model_only);
}

TEST(SchemeParams, Errors) {
    EXPECT_THROW(scheme_params("gasp", 4, kT, kS), InvalidScheme);
    EXPECT_THROW(scheme_params("matdot", 0, kT, kS), InvalidPartition);
    EXPECT_THROW(scheme_params("matdot", 4, kT, kS, 2), UnsupportedCollusion);
}

TEST(Compare, CrossoverAfterPSeven) {
    auto result = compare_table(9, kT, kS);
    EXPECT_EQ(result.crossover.sdgmm_i_last_p_below_matdot, 7u);
    EXPECT_EQ(result.crossover.sdgmm_ii_last_p_below_matdot, 7u);
    EXPECT_TRUE(result.crossover.dft_below_matdot_everywhere);
    EXPECT_EQ(result.crossover.dft_lowest_from_p, 3u);
}

TEST(Compare, SanityAtPOne) {
    auto result = compare_table(1, kT, kS);
    std::size_t sdgmm_ii = 0, matdot = 0;
    for (const auto& row : result.rows) {
        if (row.scheme == "sdgmm-ii") sdgmm_ii = row.recovery_threshold;
        if (row.scheme == "matdot") matdot = row.recovery_threshold;
    }
    EXPECT_EQ(sdgmm_ii, 3u);
    EXPECT_EQ(matdot, 5u);
}

TEST(Compare, SchemeIIRowsCapAtNine) {
    auto result = compare_table(11, kT, kS);
    std::size_t max_ii = 0;
    for (const auto& row : result.rows)
        if (row.scheme == "sdgmm-ii") max_ii = std::max(max_ii, row.p);
    EXPECT_EQ(max_ii, 9u);
    EXPECT_EQ(result.sdgmm_ii_max_p, 9u);
}

TEST(Compare, ModelMatchesMeasuredRun) {
    // Scheme I at p + 1 = 2^n: the model's R equals the response count of an
    // actual run
    PrimeField f(kDefaultModulus);
    std::mt19937_64 rng(1);
    FieldMatrix a = FieldMatrix::random(f, 3, 6, rng);
    auto row = scheme_params("sdgmm-i", 3, 3, 6);
    EXPECT_EQ(row.recovery_threshold, 9u);

    ExponentSchemeSpec spec;
    spec.kind = ExponentSchemeSpec::Kind::doubling;
    RunOptions opts;
    opts.workers = row.recovery_threshold;
    opts.seed = 77;
    auto run = run_sdgmm(a, 3, spec, opts);
    EXPECT_EQ(run.trace.responses_used, row.recovery_threshold);
    EXPECT_EQ(run.gram, gramcode::testing::naive_gram(a));
}

TEST(Compare, EverySdgmmRowRecomputesFromExponents) {
    auto result = compare_table(6, kT, kS);
    for (const auto& row : result.rows) {
        if (row.scheme == "sdgmm-trivial") {
            auto phi = construct_trivial(row.p);
            EXPECT_EQ(row.recovery_threshold,
                      std::min<std::size_t>(distinct_exponents(phi).size(), 2 * phi.largest() + 1));
        }
        if (row.scheme == "sdgmm-i") {
            auto phi = construct_doubling(row.p);
            EXPECT_EQ(row.recovery_threshold,
                      std::min<std::size_t>(distinct_exponents(phi).size(), 2 * phi.largest() + 1));
        }
    }
}

TEST(Csv, HeaderAndShape) {
    auto result = compare_table(2, kT, kS);
    std::string csv = to_csv(result.rows);
    EXPECT_EQ(csv.rfind("scheme,p,partitions,R,upload_elems,download_elems,straggler_tolerant\n", 0), 0u);
    std::size_t lines = std::count(csv.begin(), csv.end(), '\n');
    EXPECT_EQ(lines, 1 + result.rows.size());
    EXPECT_NE(csv.find("dft,2,4,6,"), std::string::npos);
}

#include "gramcode/scheme.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "gramcode/exponents.hpp"
#include "test_util.hpp"

using namespace gramcode;
using gramcode::testing::naive_gram;

namespace {

ExponentVector vec(std::vector<std::int64_t> e) {
    return ExponentVector::with_one_noise(std::move(e));
}

SchemeInstance pinned_instance(const PrimeField& f, std::size_t t, std::size_t s, std::size_t p,
                               ExponentVector phi, std::vector<std::uint64_t> alpha, DecodeMode mode) {
    SchemeInstance inst;
    inst.field = f;
    inst.t = t;
    inst.s = s;
    inst.p = p;
    inst.phi = std::move(phi);
    inst.alpha = std::move(alpha);
    inst.hset = distinct_exponents(inst.phi);
    inst.mode = mode;
    inst.recovery_threshold = mode == DecodeMode::subset_safe
                                  ? inst.hset.size()
                                  : static_cast<std::size_t>(2 * inst.phi.largest() + 1);
    return inst;
}

} // namespace

TEST(ChoosePoints, FieldTooSmall) {
    PrimeField f(5);
    std::mt19937_64 rng(1);
    EXPECT_THROW(choose_points(f, 6, {0, 1, 2}, DecodeMode::interpolation, 3, rng), FieldTooSmall);
    // exactly q - 1 nonzero points exist
    auto pts = choose_points(f, 4, {0, 1, 2}, DecodeMode::interpolation, 3, rng);
    std::sort(pts.begin(), pts.end());
    EXPECT_EQ(pts, (std::vector<std::uint64_t>{1, 2, 3, 4}));
}

TEST(ChoosePoints, FailsWhenTheFieldCannotSupportTheExponentSet) {
    // q = 7: x^6 = 1 for every nonzero x, so the columns for exponents 0 and
    // 6 coincide and no point set can decode H = {0,1,2,3,4,6}
    PrimeField f7(7);
    auto h = distinct_exponents(ExponentVector::with_one_noise({0, 1, 3})).members;
    std::mt19937_64 rng(1);
    EXPECT_THROW(choose_points(f7, 6, h, DecodeMode::subset_safe, 6, rng), PointSelectionFailed);
    // one prime up, the same exponent set verifies
    PrimeField f11(11);
    EXPECT_EQ(choose_points(f11, 6, h, DecodeMode::subset_safe, 6, rng).size(), 6u);
}

TEST(ChoosePoints, DistinctAndNonzero) {
    PrimeField f(kDefaultModulus);
    std::mt19937_64 rng(2);
    auto hset = distinct_exponents(construct_doubling(3)).members;
    auto pts = choose_points(f, 12, hset, DecodeMode::subset_safe, 9, rng);
    EXPECT_EQ(pts.size(), 12u);
    std::set<std::uint64_t> uniq(pts.begin(), pts.end());
    EXPECT_EQ(uniq.size(), 12u);
    EXPECT_FALSE(uniq.count(0));
}

TEST(ChoosePoints, GappedExponentSetVerifiesAllSubsets) {
    PrimeField f(kDefaultModulus);
    std::mt19937_64 rng(3);
    auto phi = vec({0, 1, 3, 7, 8});
    auto hset = distinct_exponents(phi);
    ASSERT_EQ(hset.size(), 14u);
    auto pts = choose_points(f, 15, hset.members, DecodeMode::subset_safe, 14, rng);
    // every 14-subset of the generalized Vandermonde rows must be invertible
    for (std::size_t skip = 0; skip < 15; ++skip) {
        std::vector<std::uint64_t> sub;
        for (std::size_t i = 0; i < 15; ++i)
            if (i != skip) sub.push_back(pts[i]);
        EXPECT_TRUE(field_invertible(f, detail::point_power_matrix(f, sub, hset.members)));
    }
}

TEST(EncodeShares, HandComputedScalarExample) {
    PrimeField f(11);
    FieldMatrix a(f, 1, 2);
    a.at(0, 0) = 3;
    a.at(0, 1) = 5;
    auto inst = pinned_instance(f, 1, 2, 2, vec({0, 1, 3}), {2}, DecodeMode::subset_safe);
    FieldMatrix noise(f, 1, 1);
    noise.at(0, 0) = 7;
    auto shares = encode_shares_with_noise(a, inst, noise);
    ASSERT_EQ(shares.size(), 1u);
    // 3 + 5*2 + 7*2^3 = 69 = 3 mod 11
    EXPECT_EQ(shares[0].payload.at(0, 0), 3u);
    EXPECT_EQ(shares[0].byte_size, 8u);
}

TEST(EncodeShares, ZeroMatrixAndZeroNoiseGiveZeroShares) {
    PrimeField f(11);
    FieldMatrix a(f, 2, 4);
    auto inst = pinned_instance(f, 2, 4, 2, vec({0, 1, 3}), {2, 5, 6, 7, 8, 9}, DecodeMode::subset_safe);
    auto shares = encode_shares_with_noise(a, inst, FieldMatrix(f, 2, 2));
    for (const auto& sh : shares)
        for (auto v : sh.payload.data()) EXPECT_EQ(v, 0u);
}

TEST(EncodeShares, NoiseSweepIsAPermutation) {
    PrimeField f(7);
    FieldMatrix a(f, 1, 2);
    a.at(0, 0) = 4;
    a.at(0, 1) = 2;
    auto inst = pinned_instance(f, 1, 2, 2, vec({0, 1, 3}), {3}, DecodeMode::subset_safe);
    std::vector<bool> seen(7, false);
    for (std::uint64_t r = 0; r < 7; ++r) {
        FieldMatrix noise(f, 1, 1);
        noise.at(0, 0) = r;
        auto shares = encode_shares_with_noise(a, inst, noise);
        seen[shares[0].payload.at(0, 0)] = true;
    }
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
}

TEST(Decode, IdentityGram) {
    PrimeField f(kDefaultModulus);
    RunOptions opts;
    opts.workers = 6;
    opts.seed = 5;
    ExponentSchemeSpec spec;
    spec.kind = ExponentSchemeSpec::Kind::doubling;
    FieldMatrix a = FieldMatrix::identity(f, 4);
    auto res = run_sdgmm(a, 2, spec, opts);
    EXPECT_EQ(res.gram, FieldMatrix::identity(f, 4));
}

TEST(Decode, MatchesOracleOnGappedExponents) {
    PrimeField f(kDefaultModulus);
    std::mt19937_64 rng(11);
    FieldMatrix a = FieldMatrix::random(f, 3, 8, rng);
    RunOptions opts;
    opts.workers = 14; // R = |H| = 14
    opts.seed = 21;
    ExponentSchemeSpec spec;
    spec.kind = ExponentSchemeSpec::Kind::explicit_phi;
    spec.phi = vec({0, 1, 3, 7, 8});
    auto res = run_sdgmm(a, 4, spec, opts);
    EXPECT_EQ(res.gram, naive_gram(a));
    EXPECT_EQ(res.trace.upload_elems, 14u * 3 * 2);
    EXPECT_EQ(res.trace.download_elems, 14u * 6);
}

TEST(Decode, PaperExampleSeventeenWorkersDropThree) {
    PrimeField f(kDefaultModulus);
    std::mt19937_64 rng(13);
    FieldMatrix a = FieldMatrix::random(f, 4, 12, rng);
    RunOptions opts;
    opts.workers = 17;
    opts.drop_count = 3;
    opts.seed = 31;
    ExponentSchemeSpec spec;
    spec.kind = ExponentSchemeSpec::Kind::search;
    auto res = run_sdgmm(a, 4, spec, opts);
    EXPECT_EQ(res.gram, naive_gram(a));
    EXPECT_EQ(res.instance.recovery_threshold, 14u);
    EXPECT_EQ(res.trace.upload_elems, 17u * 4 * 3); // 17 shares uploaded
    EXPECT_EQ(res.trace.download_elems, 14u * 10);  // 14 triangles downloaded
    EXPECT_EQ(res.trace.responses_used, 14u);
}

TEST(Decode, InterpolationModeNeedsFullDegreeCount) {
    PrimeField f(kDefaultModulus);
    std::mt19937_64 rng(17);
    FieldMatrix a = FieldMatrix::random(f, 3, 8, rng);
    ExponentSchemeSpec spec;
    spec.kind = ExponentSchemeSpec::Kind::search;
    RunOptions opts;
    opts.mode = DecodeMode::interpolation;
    opts.seed = 7;
    opts.workers = 17; // 2 * 8 + 1
    auto res = run_sdgmm(a, 4, spec, opts);
    EXPECT_EQ(res.gram, naive_gram(a));
    EXPECT_EQ(res.instance.recovery_threshold, 17u);

    // dropping below 2*phi_max + 1 responses is refused in this mode
    opts.workers = 20;
    opts.drop_count = 4;
    EXPECT_THROW(run_sdgmm(a, 4, spec, opts), NotEnoughResponses);
    opts.drop_count = 3;
    auto res2 = run_sdgmm(a, 4, spec, opts);
    EXPECT_EQ(res2.gram, naive_gram(a));
}

TEST(Decode, AnySubsetDecodesInSubsetSafeMode) {
    PrimeField f(kDefaultModulus);
    std::mt19937_64 rng(19);
    FieldMatrix a = FieldMatrix::random(f, 2, 6, rng);
    auto phi = vec({0, 1, 3});
    auto inst = make_instance(f, 2, 6, 2, phi, 8, DecodeMode::subset_safe, rng);
    ASSERT_EQ(inst.recovery_threshold, 6u);
    auto shares = encode_shares(a, inst, rng);

    std::vector<std::pair<std::size_t, PackedLowerTriangle<std::uint64_t>>> all;
    for (const auto& sh : shares) all.emplace_back(sh.worker_index, gram_lower(sh.payload));

    const FieldMatrix expect = naive_gram(a);
    std::vector<std::size_t> idx(8);
    for (std::size_t i = 0; i < 8; ++i) idx[i] = i;
    for (int trial = 0; trial < 30; ++trial) {
        std::shuffle(idx.begin(), idx.end(), rng);
        std::vector<std::pair<std::size_t, PackedLowerTriangle<std::uint64_t>>> subset;
        for (std::size_t k = 0; k < 6; ++k) subset.push_back(all[idx[k]]);
        EXPECT_EQ(decode_gram(subset, inst), expect);
    }
}

TEST(Decode, NotEnoughResponses) {
    PrimeField f(kDefaultModulus);
    std::mt19937_64 rng(23);
    FieldMatrix a = FieldMatrix::random(f, 2, 4, rng);
    ExponentSchemeSpec spec;
    spec.kind = ExponentSchemeSpec::Kind::doubling;
    RunOptions opts;
    opts.workers = 5; // R = 6 for p = 2
    try {
        run_sdgmm(a, 2, spec, opts);
        FAIL() << "expected NotEnoughResponses";
    } catch (const NotEnoughResponses& e) {
        EXPECT_EQ(e.missing, 1u);
    }
}

TEST(Decode, CollusionBeyondOneIsRejected) {
    PrimeField f(kDefaultModulus);
    FieldMatrix a(f, 2, 4);
    ExponentSchemeSpec spec;
    spec.kind = ExponentSchemeSpec::Kind::doubling;
    RunOptions opts;
    opts.workers = 10;
    opts.collusion = 2;
    EXPECT_THROW(run_sdgmm(a, 2, spec, opts), UnsupportedCollusion);
}

TEST(Decode, InvalidExplicitPhiIsRejected) {
    PrimeField f(kDefaultModulus);
    FieldMatrix a(f, 2, 8);
    ExponentSchemeSpec spec;
    spec.kind = ExponentSchemeSpec::Kind::explicit_phi;
    spec.phi = vec({0, 1, 2, 3, 4});
    RunOptions opts;
    opts.workers = 20;
    EXPECT_THROW(run_sdgmm(a, 4, spec, opts), Error);
}

TEST(Run, SeedDeterminism) {
    PrimeField f(kDefaultModulus);
    std::mt19937_64 rng(29);
    FieldMatrix a = FieldMatrix::random(f, 3, 9, rng);
    ExponentSchemeSpec spec;
    spec.kind = ExponentSchemeSpec::Kind::doubling;
    RunOptions opts;
    opts.workers = 12;
    opts.drop_count = 2;
    opts.seed = 123;
    auto r1 = run_sdgmm(a, 3, spec, opts);
    auto r2 = run_sdgmm(a, 3, spec, opts);
    EXPECT_EQ(r1.gram, r2.gram);
    EXPECT_EQ(r1.instance.alpha, r2.instance.alpha);
    EXPECT_EQ(r1.trace.dropped, r2.trace.dropped);
    EXPECT_EQ(r1.trace.responders, r2.trace.responders);
    EXPECT_EQ(r1.trace.upload_elems, r2.trace.upload_elems);

    opts.seed = 124;
    auto r3 = run_sdgmm(a, 3, spec, opts);
    EXPECT_EQ(r3.gram, r1.gram); // value is seed-independent
    EXPECT_NE(r3.instance.alpha, r1.instance.alpha);
}

TEST(Run, TrivialSchemeEndToEnd) {
    PrimeField f(kDefaultModulus);
    std::mt19937_64 rng(31);
    FieldMatrix a = FieldMatrix::random(f, 2, 5, rng);
    ExponentSchemeSpec spec;
    spec.kind = ExponentSchemeSpec::Kind::trivial;
    RunOptions opts;
    opts.workers = 10; // R = (p+1)(p+2)/2 = 10 for p = 3
    opts.seed = 3;
    auto res = run_sdgmm(a, 3, spec, opts);
    EXPECT_EQ(res.gram, naive_gram(a));
}

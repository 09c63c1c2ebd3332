#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "gramcode/degree_table.hpp"
#include "gramcode/errors.hpp"
#include "gramcode/field.hpp"
#include "gramcode/linalg.hpp"
#include "gramcode/matrix.hpp"
#include "gramcode/pool.hpp"
#include "gramcode/scheme.hpp"

namespace gramcode {

/// Secure MatDot with X = 1: A-side exponents (0..p), B-side exponents
/// (p-1, ..., 0, p), so every useful product lands on x^{p-1} and the sum of
/// the inner-product blocks is one interpolation coefficient.
struct MatDotInstance {
    PrimeField field;
    std::size_t p = 0;
    ExponentVector phi;   // (0, 1, ..., p)
    ExponentVector gamma; // (p-1, ..., 0, p)
    std::vector<std::uint64_t> alpha;
    std::size_t recovery_threshold = 0; // 2p + 1
};

inline ExponentVector matdot_phi(std::size_t p) {
    std::vector<std::int64_t> e(p + 1);
    for (std::size_t j = 0; j <= p; ++j) e[j] = static_cast<std::int64_t>(j);
    return ExponentVector(std::move(e), p);
}

inline ExponentVector matdot_gamma(std::size_t p) {
    std::vector<std::int64_t> e(p + 1);
    for (std::size_t j = 0; j < p; ++j) e[j] = static_cast<std::int64_t>(p - 1 - j);
    e[p] = static_cast<std::int64_t>(p);
    return ExponentVector(std::move(e), p);
}

inline MatDotInstance make_matdot_instance(const PrimeField& field, std::size_t p, std::size_t n_workers,
                                           std::mt19937_64& rng) {
    if (p == 0) throw InvalidPartition("p must be at least 1");
    MatDotInstance inst{field, p, matdot_phi(p), matdot_gamma(p), {}, 2 * p + 1};
    if (n_workers < inst.recovery_threshold)
        throw NotEnoughResponses(inst.recovery_threshold - n_workers);
    // Decoding is plain interpolation of a degree-2p polynomial, so any
    // distinct nonzero points do.
    inst.alpha = choose_points(field, n_workers, {}, DecodeMode::interpolation, inst.recovery_threshold, rng);
    return inst;
}

using PairShare = std::pair<FieldMatrix, FieldMatrix>;
using MatDotDispatcher = std::function<DispatchResult<PairShare, FieldMatrix>(
    const std::vector<PairShare>&, const PrimeField&, const PoolConfig&, TaskTrace&)>;

inline DispatchResult<PairShare, FieldMatrix> local_matdot_dispatch(const std::vector<PairShare>& shares,
                                                                    const PrimeField&,
                                                                    const PoolConfig& cfg,
                                                                    TaskTrace& trace) {
    return dispatch<FieldMatrix>(
        shares, [](const PairShare& sh) { return sh.first.mul(sh.second); }, cfg, trace);
}

struct MatDotRunResult {
    FieldMatrix product;
    TaskTrace trace;
};

/// Computes A * B with p inner-product partitions and N workers; exact.
inline MatDotRunResult matdot_run(const FieldMatrix& A, const FieldMatrix& B, std::size_t p,
                                  std::size_t n_workers, std::uint64_t seed,
                                  const PoolConfig* pool_cfg = nullptr,
                                  MatDotDispatcher dispatcher = {}) {
    if (A.cols() != B.rows()) throw Error("inner dimensions do not match");
    if (A.field() != B.field()) throw Error("operands live in different fields");
    std::mt19937_64 rng(seed);
    MatDotInstance inst = make_matdot_instance(A.field(), p, n_workers, rng);
    const PrimeField& f = inst.field;

    const auto a_blocks = partition_ipp(A, p);
    const auto b_blocks = partition_rows(B, p);
    const FieldMatrix a_noise = FieldMatrix::random(f, A.rows(), a_blocks[0].cols(), rng);
    const FieldMatrix b_noise = FieldMatrix::random(f, b_blocks[0].rows(), B.cols(), rng);

    std::vector<PairShare> shares;
    shares.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) {
        FieldMatrix fa(f, A.rows(), a_blocks[0].cols());
        FieldMatrix fb(f, b_blocks[0].rows(), B.cols());
        for (std::size_t j = 0; j < p; ++j) {
            fa.add_scaled(a_blocks[j], f.pow(inst.alpha[i], static_cast<std::uint64_t>(inst.phi[j])));
            fb.add_scaled(b_blocks[j], f.pow(inst.alpha[i], static_cast<std::uint64_t>(inst.gamma[j])));
        }
        fa.add_scaled(a_noise, f.pow(inst.alpha[i], static_cast<std::uint64_t>(inst.phi[p])));
        fb.add_scaled(b_noise, f.pow(inst.alpha[i], static_cast<std::uint64_t>(inst.gamma[p])));
        shares.emplace_back(std::move(fa), std::move(fb));
    }

    PoolConfig cfg;
    if (pool_cfg) cfg = *pool_cfg;
    cfg.seed = seed;
    TaskTrace trace;
    if (!dispatcher) dispatcher = local_matdot_dispatch;
    auto result = dispatcher(shares, f, cfg, trace);

    auto ordered = result.ordered();
    const std::size_t r = inst.recovery_threshold;
    if (ordered.size() < r) throw NotEnoughResponses(r - ordered.size());
    ordered.erase(ordered.begin() + static_cast<std::ptrdiff_t>(r), ordered.end());

    std::vector<std::int64_t> basis(r);
    for (std::size_t k = 0; k < r; ++k) basis[k] = static_cast<std::int64_t>(k);
    std::vector<std::uint64_t> points(r);
    for (std::size_t i = 0; i < r; ++i) points[i] = inst.alpha[ordered[i].first];
    const FieldSquare vinv = field_invert(f, detail::point_power_matrix(f, points, basis));
    const std::vector<std::uint64_t>& weights = vinv[p - 1]; // coefficient of x^{p-1}

    FieldMatrix product(f, A.rows(), B.cols());
    for (std::size_t k = 0; k < r; ++k) product.add_scaled(ordered[k].second, weights[k]);

    trace.recovery_threshold = r;
    trace.responses_used = r;
    trace.upload_elems = static_cast<std::uint64_t>(n_workers) *
                         (A.rows() * a_blocks[0].cols() + b_blocks[0].rows() * B.cols());
    trace.download_elems = static_cast<std::uint64_t>(r) * A.rows() * B.cols();
    return MatDotRunResult{std::move(product), std::move(trace)};
}

struct MatDotGramCosts {
    std::size_t workers = 0;           // N = R = 2p + 1 at minimum
    std::size_t recovery_threshold = 0;
    std::uint64_t upload_elems = 0;    // two encodings of size t * ceil(s/p) each
    std::uint64_t download_elems = 0;  // full t x t responses; no symmetry to exploit
};

/// Cost of computing A A^T with secure MatDot: the matrix is encoded twice
/// and responses are full squares.
inline MatDotGramCosts matdot_gram_costs(std::size_t p, std::size_t t, std::size_t s) {
    if (p == 0) throw InvalidPartition("p must be at least 1");
    MatDotGramCosts c;
    c.recovery_threshold = 2 * p + 1;
    c.workers = c.recovery_threshold;
    const std::uint64_t chunk = (s + p - 1) / p;
    c.upload_elems = 2ULL * c.workers * t * chunk;
    c.download_elems = static_cast<std::uint64_t>(c.workers) * t * t;
    return c;
}

} // namespace gramcode

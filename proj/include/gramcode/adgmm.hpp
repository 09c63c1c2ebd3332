#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "gramcode/errors.hpp"
#include "gramcode/linalg.hpp"
#include "gramcode/matrix.hpp"
#include "gramcode/pool.hpp"

namespace gramcode {

/// N-th roots of unity. Any distinct unit-modulus points would do; roots of
/// unity make the full-set decode an inverse DFT with condition number 1.
inline std::vector<std::complex<double>> choose_unit_points(std::size_t n) {
    std::vector<std::complex<double>> pts(n);
    for (std::size_t k = 0; k < n; ++k) {
        double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        pts[k] = std::polar(1.0, angle);
    }
    return pts;
}

using ComplexTriangle = PackedLowerTriangle<std::complex<double>>;

/// Encodes with consecutive exponents 0..p-1 and no noise term. Shares are a
/// deterministic function of A: this scheme provides no security.
inline std::vector<ComplexMatrix> adgmm_encode(const ComplexMatrix& A, std::size_t p,
                                               const std::vector<std::complex<double>>& points) {
    const auto blocks = partition_ipp(A, p);
    std::vector<ComplexMatrix> shares;
    shares.reserve(points.size());
    for (const auto& alpha : points) {
        ComplexMatrix share(A.rows(), blocks[0].cols());
        std::complex<double> power = 1.0;
        for (std::size_t j = 0; j < p; ++j) {
            share.add_scaled(blocks[j], power);
            power *= alpha;
        }
        shares.push_back(std::move(share));
    }
    return shares;
}

/// Decodes A A^* from responses at unit-modulus points. Each response is a
/// value of f(x) f(x)^*; multiplying by x^{p-1} turns that into a degree
/// 2p-2 polynomial whose x^{p-1} coefficient is the Gram matrix. With all N
/// points present this is one inverse DFT bin; otherwise the first 2p-1
/// responses feed a Vandermonde solve.
inline ComplexMatrix adgmm_decode(const std::vector<std::pair<std::size_t, ComplexTriangle>>& responses,
                                  const std::vector<std::complex<double>>& points, std::size_t p) {
    const std::size_t need = 2 * p - 1;
    if (responses.size() < need) throw NotEnoughResponses(need - responses.size());
    const std::size_t t = responses.front().second.dim;
    const std::size_t packed = PackedLowerTriangle<std::complex<double>>::packed_size(t);

    std::vector<std::complex<double>> weights;
    std::vector<std::size_t> used;
    if (responses.size() == points.size()) {
        // Full set of N-th roots of unity: the x^{p-1} coefficient of
        // x^{p-1} f f^* is the DC bin of the raw responses.
        used.resize(points.size());
        weights.assign(points.size(), {1.0 / static_cast<double>(points.size()), 0.0});
        for (std::size_t i = 0; i < responses.size(); ++i) used[i] = i;
    } else {
        used.resize(need);
        std::vector<std::vector<std::complex<double>>> vt(need, std::vector<std::complex<double>>(need));
        for (std::size_t i = 0; i < need; ++i) {
            used[i] = i;
            const auto alpha = points[responses[i].first];
            std::complex<double> power = 1.0;
            for (std::size_t k = 0; k < need; ++k) {
                vt[k][i] = power; // transposed Vandermonde
                power *= alpha;
            }
        }
        std::vector<std::complex<double>> rhs(need, 0.0);
        rhs[p - 1] = 1.0;
        weights = solve_complex(std::move(vt), std::move(rhs));
        // fold in the x^{p-1} shift of each response
        for (std::size_t i = 0; i < need; ++i)
            weights[i] *= std::pow(points[responses[i].first], static_cast<double>(p - 1));
    }

    ComplexTriangle out(t);
    for (std::size_t e = 0; e < packed; ++e) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i)
            acc += weights[i] * responses[used[i]].second.entries[e];
        out.entries[e] = acc;
    }
    return unpack_hermitian(out);
}

struct AdgmmResult {
    ComplexMatrix gram;
    TaskTrace trace;
};

/// End-to-end analog run with N workers at the N-th roots of unity.
inline AdgmmResult adgmm_run(const ComplexMatrix& A, std::size_t p, std::size_t n_workers,
                             const PoolConfig* pool_cfg = nullptr) {
    if (p == 0) throw InvalidPartition("p must be at least 1");
    const std::size_t need = 2 * p - 1;
    if (n_workers < need) throw NotEnoughResponses(need - n_workers);
    const auto points = choose_unit_points(n_workers);
    auto shares = adgmm_encode(A, p, points);

    PoolConfig cfg;
    if (pool_cfg) cfg = *pool_cfg;
    TaskTrace trace;
    auto result = dispatch<ComplexTriangle>(
        shares, [](const ComplexMatrix& m) { return gram_lower(m); }, cfg, trace);

    auto ordered = result.ordered();
    if (ordered.size() < need) throw NotEnoughResponses(need - ordered.size());
    ComplexMatrix gram = adgmm_decode(ordered, points, p);

    const std::size_t used = ordered.size() == n_workers ? n_workers : need;
    trace.recovery_threshold = need;
    trace.responses_used = used;
    trace.upload_elems = static_cast<std::uint64_t>(n_workers) * A.rows() * ((A.cols() + p - 1) / p);
    trace.download_elems = static_cast<std::uint64_t>(used) *
                           PackedLowerTriangle<std::complex<double>>::packed_size(A.rows());
    trace.wall_time_ms = 0.0;
    return AdgmmResult{std::move(gram), std::move(trace)};
}

/// Least-squares fit via the explicit normal-equation solution
/// beta = (A A^T)^{-1} A b, with the Gram matrix computed by the analog
/// scheme and the small t x t solve done locally.
inline std::vector<double> lstsq(const ComplexMatrix& A, const std::vector<double>& b, std::size_t p,
                                 std::size_t n_workers) {
    if (b.size() != A.cols()) throw Error("b must have one entry per column of A");
    const std::size_t t = A.rows();
    auto run = adgmm_run(A, p, n_workers);

    std::vector<std::vector<double>> gram(t, std::vector<double>(t));
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < t; ++j) gram[i][j] = run.gram.at(i, j).real();

    std::vector<double> rhs(t, 0.0);
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t k = 0; k < A.cols(); ++k) rhs[i] += A.at(i, k).real() * b[k];

    return solve_real_spd(std::move(gram), std::move(rhs));
}

} // namespace gramcode

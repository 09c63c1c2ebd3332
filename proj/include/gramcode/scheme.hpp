#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gramcode/degree_table.hpp"
#include "gramcode/errors.hpp"
#include "gramcode/exponents.hpp"
#include "gramcode/field.hpp"
#include "gramcode/linalg.hpp"
#include "gramcode/matrix.hpp"
#include "gramcode/pool.hpp"

namespace gramcode {

/// subset_safe: decode any R = |H| responses against the exponent set H;
/// points must be verified. interpolation: decode 2*phi_max + 1 responses by
/// plain polynomial interpolation; any distinct nonzero points work.
enum class DecodeMode { subset_safe, interpolation };

inline std::string to_string(DecodeMode m) {
    return m == DecodeMode::subset_safe ? "subset-safe" : "interp";
}

/// Everything needed to encode and decode one Gram job.
struct SchemeInstance {
    PrimeField field;
    std::size_t t = 0, s = 0, p = 0;
    std::size_t collusion = 1; // X; fixed to 1
    ExponentVector phi;        // valid, length p + 1
    std::vector<std::uint64_t> alpha;
    ExponentSet hset;
    std::size_t recovery_threshold = 0;
    DecodeMode mode = DecodeMode::subset_safe;

    std::size_t n_workers() const { return alpha.size(); }
    std::size_t chunk_cols() const { return (s + p - 1) / p; }
};

struct EncodedShare {
    std::size_t worker_index = 0;
    FieldMatrix payload;
    std::size_t byte_size = 0; // 8 bytes per element on the wire
};

namespace detail {

inline FieldSquare point_power_matrix(const PrimeField& f, const std::vector<std::uint64_t>& points,
                                      const std::vector<std::int64_t>& basis) {
    FieldSquare m(points.size(), std::vector<std::uint64_t>(basis.size()));
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t k = 0; k < basis.size(); ++k)
            m[i][k] = f.pow(points[i], static_cast<std::uint64_t>(basis[k]));
    return m;
}

inline std::uint64_t binomial_capped(std::size_t n, std::size_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        // result * (n - k + i) / i, capped to avoid overflow
        if (result > cap) return cap + 1;
        result = result * (n - k + i) / i;
    }
    return result;
}

/// Visits R-subsets of [n]: all of them when their count is at most
/// `exhaustive_cap`, otherwise `sample_count` random ones.
template <typename Visit>
bool for_each_subset(std::size_t n, std::size_t r, std::uint64_t exhaustive_cap,
                     std::size_t sample_count, std::mt19937_64& rng, Visit&& visit) {
    if (binomial_capped(n, r, exhaustive_cap) <= exhaustive_cap) {
        std::vector<std::size_t> idx(r);
        for (std::size_t i = 0; i < r; ++i) idx[i] = i;
        while (true) {
            if (!visit(idx)) return false;
            std::size_t i = r;
            while (i-- > 0) {
                if (idx[i] != i + n - r) {
                    ++idx[i];
                    for (std::size_t j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
                    break;
                }
                if (i == 0) return true;
            }
        }
    }
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    for (std::size_t trial = 0; trial < sample_count; ++trial) {
        for (std::size_t k = 0; k < r; ++k) {
            std::size_t j = k + static_cast<std::size_t>(rng() % (n - k));
            std::swap(all[k], all[j]);
        }
        std::vector<std::size_t> idx(all.begin(), all.begin() + r);
        std::sort(idx.begin(), idx.end());
        if (!visit(idx)) return false;
    }
    return true;
}

} // namespace detail

/// Draws N distinct nonzero evaluation points. In subset-safe mode the
/// points are checked: every R-subset of rows of the generalized Vandermonde
/// matrix on H must be invertible (all subsets when there are at most 1e5 of
/// them, else 1000 random ones), resampling up to 100 times.
inline std::vector<std::uint64_t> choose_points(const PrimeField& field, std::size_t n,
                                                const std::vector<std::int64_t>& hset,
                                                DecodeMode mode, std::size_t recovery_threshold,
                                                std::mt19937_64& rng) {
    const std::uint64_t q = field.modulus();
    if (q <= n)
        throw FieldTooSmall("field with " + std::to_string(q - 1) + " nonzero elements cannot host " +
                            std::to_string(n) + " distinct points");
    auto sample = [&]() {
        std::vector<std::uint64_t> pts;
        if (q <= 2 * n + 2 || q <= 1024) {
            std::vector<std::uint64_t> all(q - 1);
            for (std::uint64_t v = 1; v < q; ++v) all[v - 1] = v;
            for (std::size_t k = 0; k < n; ++k) {
                std::size_t j = k + static_cast<std::size_t>(rng() % (all.size() - k));
                std::swap(all[k], all[j]);
            }
            pts.assign(all.begin(), all.begin() + n);
        } else {
            std::set<std::uint64_t> seen;
            while (seen.size() < n) seen.insert(uniform_nonzero_element(rng, q));
            pts.assign(seen.begin(), seen.end());
            for (std::size_t k = 0; k + 1 < n; ++k) { // shuffle so order is not sorted
                std::size_t j = k + static_cast<std::size_t>(rng() % (n - k));
                std::swap(pts[k], pts[j]);
            }
        }
        return pts;
    };

    if (mode == DecodeMode::interpolation) return sample();

    const std::size_t r = recovery_threshold;
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto pts = sample();
        bool ok = detail::for_each_subset(n, r, 100'000, 1000, rng, [&](const std::vector<std::size_t>& idx) {
            std::vector<std::uint64_t> sub(r);
            for (std::size_t i = 0; i < r; ++i) sub[i] = pts[idx[i]];
            return field_invertible(field, detail::point_power_matrix(field, sub, hset));
        });
        if (ok) return pts;
    }
    throw PointSelectionFailed("no decodable point set found in 100 attempts; try a larger field");
}

/// Selects the exponent vector for a run.
struct ExponentSchemeSpec {
    enum class Kind { trivial, doubling, search, explicit_phi };
    Kind kind = Kind::search;
    std::optional<ExponentVector> phi; // for explicit_phi
    unsigned base = 2;                 // for doubling
    std::uint64_t search_budget = 100'000'000ULL;

    static ExponentSchemeSpec parse(const std::string& name) {
        ExponentSchemeSpec spec;
        if (name == "trivial") spec.kind = Kind::trivial;
        else if (name == "doubling") spec.kind = Kind::doubling;
        else if (name == "search") spec.kind = Kind::search;
        else throw InvalidScheme(name);
        return spec;
    }

    ExponentVector resolve(std::size_t p) const {
        switch (kind) {
        case Kind::trivial: return construct_trivial(p);
        case Kind::doubling: return construct_doubling(p, base);
        case Kind::search: return search_min_max(p, search_budget).phi;
        case Kind::explicit_phi: break;
        }
        if (!phi) throw Error("explicit exponent scheme requires a vector");
        auto check = is_valid(*phi, p);
        if (!check.valid) {
            std::string msg = "exponent vector is not valid for p = " + std::to_string(p);
            if (check.collision)
                msg += " (diagonal of entry " + std::to_string(check.collision->diag_index + 1) +
                       " collides with cell (" + std::to_string(check.collision->row + 1) + ", " +
                       std::to_string(check.collision->col + 1) + "))";
            throw Error(msg);
        }
        return *phi;
    }
};

inline SchemeInstance make_instance(const PrimeField& field, std::size_t t, std::size_t s, std::size_t p,
                                    ExponentVector phi, std::size_t n_workers, DecodeMode mode,
                                    std::mt19937_64& rng, std::size_t collusion = 1) {
    if (collusion != 1) throw UnsupportedCollusion(collusion);
    if (p == 0) throw InvalidPartition("p must be at least 1");
    auto check = is_valid(phi, p);
    if (!check.valid) throw Error("exponent vector is not valid for p = " + std::to_string(p));

    SchemeInstance inst{field, t, s, p, collusion, std::move(phi), {}, {}, 0, mode};
    inst.hset = distinct_exponents(inst.phi);
    if (mode == DecodeMode::subset_safe) {
        inst.recovery_threshold = inst.hset.size();
    } else {
        inst.recovery_threshold = static_cast<std::size_t>(2 * inst.phi.largest() + 1);
    }
    if (n_workers < inst.recovery_threshold)
        throw NotEnoughResponses(inst.recovery_threshold - n_workers);
    inst.alpha = choose_points(field, n_workers, inst.hset.members, mode, inst.recovery_threshold, rng);
    return inst;
}

/// Evaluates f(x) = sum_j A_j x^{phi_j} + R_1 x^{phi_{p+1}} at each point
/// for a caller-provided noise matrix R_1.
inline std::vector<EncodedShare> encode_shares_with_noise(const FieldMatrix& A,
                                                          const SchemeInstance& inst,
                                                          const FieldMatrix& noise) {
    const auto blocks = partition_ipp(A, inst.p);
    std::vector<EncodedShare> shares;
    shares.reserve(inst.n_workers());
    for (std::size_t i = 0; i < inst.n_workers(); ++i) {
        FieldMatrix payload(inst.field, inst.t, inst.chunk_cols());
        for (std::size_t j = 0; j < inst.p; ++j)
            payload.add_scaled(blocks[j],
                               inst.field.pow(inst.alpha[i], static_cast<std::uint64_t>(inst.phi[j])));
        payload.add_scaled(noise,
                           inst.field.pow(inst.alpha[i], static_cast<std::uint64_t>(inst.phi[inst.p])));
        shares.push_back(EncodedShare{i, std::move(payload), inst.t * inst.chunk_cols() * 8});
    }
    return shares;
}

/// R_1 drawn uniformly from the seeded generator.
inline std::vector<EncodedShare> encode_shares(const FieldMatrix& A, const SchemeInstance& inst,
                                               std::mt19937_64& rng) {
    return encode_shares_with_noise(A, inst,
                                    FieldMatrix::random(inst.field, inst.t, inst.chunk_cols(), rng));
}

/// Solves the R x R system shared by all triangle positions once, then
/// applies the combined useful-coefficient row to every response entry.
/// Returns the symmetric t x t Gram matrix A A^T.
inline FieldMatrix decode_gram(const std::vector<std::pair<std::size_t, PackedLowerTriangle<std::uint64_t>>>& responses,
                               const SchemeInstance& inst) {
    const PrimeField& f = inst.field;
    const std::size_t r = inst.recovery_threshold;
    if (responses.size() < r) throw NotEnoughResponses(r - responses.size());

    std::vector<std::int64_t> basis;
    if (inst.mode == DecodeMode::subset_safe) {
        basis = inst.hset.members;
    } else {
        basis.resize(r);
        for (std::size_t k = 0; k < r; ++k) basis[k] = static_cast<std::int64_t>(k);
    }

    std::vector<std::uint64_t> points(r);
    for (std::size_t i = 0; i < r; ++i) points[i] = inst.alpha[responses[i].first];
    const FieldSquare vinv = field_invert(f, detail::point_power_matrix(f, points, basis));

    // Weight vector: sum of the V^{-1} rows that pick out the useful
    // coefficients x^{2 phi_j}; interference rows are never materialized.
    std::vector<std::uint64_t> weights(r, 0);
    for (std::size_t j = 0; j < inst.p; ++j) {
        const std::int64_t target = 2 * inst.phi[j];
        const std::size_t row = inst.mode == DecodeMode::subset_safe
                                    ? inst.hset.index_of(target)
                                    : static_cast<std::size_t>(target);
        for (std::size_t k = 0; k < r; ++k) weights[k] = f.add(weights[k], vinv[row][k]);
    }

    PackedLowerTriangle<std::uint64_t> packed(inst.t);
    for (std::size_t e = 0; e < packed.entries.size(); ++e) {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < r; ++k)
            acc = f.add(acc, f.mul(weights[k], responses[k].second.entries[e]));
        packed.entries[e] = acc;
    }
    return unpack(packed, f);
}

/// Pluggable transport: the in-process pool by default, the wire transport
/// in distributed mode.
using GramDispatcher =
    std::function<DispatchResult<FieldMatrix, PackedLowerTriangle<std::uint64_t>>(
        const std::vector<FieldMatrix>&, const PrimeField&, const PoolConfig&, TaskTrace&)>;

inline DispatchResult<FieldMatrix, PackedLowerTriangle<std::uint64_t>>
local_gram_dispatch(const std::vector<FieldMatrix>& shares, const PrimeField&, const PoolConfig& cfg,
                    TaskTrace& trace) {
    return dispatch<PackedLowerTriangle<std::uint64_t>>(
        shares, [](const FieldMatrix& m) { return gram_lower(m); }, cfg, trace);
}

struct RunOptions {
    std::size_t workers = 0;
    DecodeMode mode = DecodeMode::subset_safe;
    std::uint64_t seed = 0;
    bool secure_randomness = false; // seed from the OS instead of `seed`
    std::optional<std::vector<std::size_t>> drop_set;
    std::size_t drop_count = 0;
    std::size_t collusion = 1;
};

struct RunResult {
    FieldMatrix gram;
    TaskTrace trace;
    SchemeInstance instance;
};

/// The full pipeline: partition -> encode -> dispatch -> collect the first R
/// responses -> decode. Trace counts follow the scheme costs exactly:
/// N * t * ceil(s/p) elements up, R * t(t+1)/2 elements down.
inline RunResult run_sdgmm(const FieldMatrix& A, std::size_t p, const ExponentSchemeSpec& scheme,
                           const RunOptions& opts, GramDispatcher dispatcher = {}) {
    const auto start = std::chrono::steady_clock::now();
    std::uint64_t seed = opts.seed;
    if (opts.secure_randomness) {
        std::random_device rd;
        seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    std::mt19937_64 rng(seed);

    ExponentVector phi = scheme.resolve(p);
    SchemeInstance inst = make_instance(A.field(), A.rows(), A.cols(), p, std::move(phi),
                                        opts.workers, opts.mode, rng, opts.collusion);

    auto shares = encode_shares(A, inst, rng);
    std::vector<FieldMatrix> payloads;
    payloads.reserve(shares.size());
    for (auto& sh : shares) payloads.push_back(sh.payload);

    PoolConfig cfg;
    cfg.drop_set = opts.drop_set;
    cfg.drop_count = opts.drop_count;
    cfg.seed = seed;

    TaskTrace trace;
    if (!dispatcher) dispatcher = local_gram_dispatch;
    auto result = dispatcher(payloads, inst.field, cfg, trace);

    auto ordered = result.ordered();
    if (ordered.size() < inst.recovery_threshold)
        throw NotEnoughResponses(inst.recovery_threshold - ordered.size());
    ordered.resize(inst.recovery_threshold);
    FieldMatrix gram = decode_gram(ordered, inst);

    trace.recovery_threshold = inst.recovery_threshold;
    trace.responses_used = inst.recovery_threshold;
    trace.upload_elems = static_cast<std::uint64_t>(inst.n_workers()) * inst.t * inst.chunk_cols();
    trace.download_elems = static_cast<std::uint64_t>(inst.recovery_threshold) *
                           PackedLowerTriangle<std::uint64_t>::packed_size(inst.t);
    trace.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return RunResult{std::move(gram), std::move(trace), std::move(inst)};
}

} // namespace gramcode

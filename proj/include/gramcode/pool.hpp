#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "gramcode/errors.hpp"

namespace gramcode {

/// Straggler / latency / collusion-capture configuration for a dispatch.
/// Stragglers are modeled as workers that never respond.
struct PoolConfig {
    std::optional<std::vector<std::size_t>> drop_set; // explicit straggler indices
    std::size_t drop_count = 0;                       // random stragglers when drop_set is unset
    std::optional<std::vector<double>> latency_ms;    // deterministic per-worker latency
    std::uint64_t seed = 0;                           // drives random drops and latency order
    std::vector<std::size_t> collusion_capture;       // record the shares these workers receive
};

/// Accounting for one distributed job. upload/download counts are in field
/// elements (or complex entries); wire_* fields are filled only by the
/// network transport and measure actual bytes on the socket.
struct TaskTrace {
    std::size_t n_workers = 0;
    std::size_t recovery_threshold = 0;
    std::uint64_t upload_elems = 0;
    std::uint64_t download_elems = 0;
    std::vector<std::size_t> responders; // completion order
    std::vector<std::size_t> dropped;
    std::vector<double> latency_ms;
    std::size_t responses_used = 0;
    double wall_time_ms = 0.0;
    std::uint64_t wire_upload_bytes = 0;
    std::uint64_t wire_download_bytes = 0;
};

template <typename Share, typename Resp>
struct DispatchResult {
    std::vector<std::optional<Resp>> responses; // keyed by worker index
    std::vector<std::size_t> completion_order;  // responders, first to last
    std::map<std::size_t, Share> captured;      // collusion_capture copies

    /// Responses in completion order, as (worker index, payload) pairs.
    std::vector<std::pair<std::size_t, Resp>> ordered() const {
        std::vector<std::pair<std::size_t, Resp>> out;
        out.reserve(completion_order.size());
        for (std::size_t idx : completion_order) out.emplace_back(idx, *responses[idx]);
        return out;
    }
};

namespace detail {

inline std::vector<std::size_t> pick_drops(std::size_t n, const PoolConfig& cfg, std::mt19937_64& rng) {
    if (cfg.drop_set) {
        std::vector<std::size_t> drops;
        for (std::size_t idx : *cfg.drop_set)
            if (idx < n) drops.push_back(idx);
        std::sort(drops.begin(), drops.end());
        drops.erase(std::unique(drops.begin(), drops.end()), drops.end());
        return drops;
    }
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    for (std::size_t k = 0; k < cfg.drop_count && k < n; ++k) {
        std::size_t j = k + static_cast<std::size_t>(rng() % (n - k));
        std::swap(all[k], all[j]);
    }
    all.resize(std::min(cfg.drop_count, n));
    std::sort(all.begin(), all.end());
    return all;
}

} // namespace detail

/// Runs `compute` on every non-dropped share concurrently. Response payloads
/// depend only on the shares; the seeded latency model determines completion
/// order, so a fixed seed reproduces the whole dispatch.
template <typename Resp, typename Share, typename Fn>
DispatchResult<Share, Resp> dispatch(const std::vector<Share>& shares, Fn&& compute,
                                     const PoolConfig& cfg, TaskTrace& trace) {
    const std::size_t n = shares.size();
    std::mt19937_64 rng(cfg.seed);

    std::vector<std::size_t> dropped = detail::pick_drops(n, cfg, rng);
    std::set<std::size_t> dropped_set(dropped.begin(), dropped.end());

    std::vector<double> latency(n);
    if (cfg.latency_ms && cfg.latency_ms->size() == n) {
        latency = *cfg.latency_ms;
    } else {
        std::exponential_distribution<double> dist(1.0);
        for (std::size_t i = 0; i < n; ++i) latency[i] = dist(rng);
    }

    DispatchResult<Share, Resp> result;
    result.responses.resize(n);
    for (std::size_t idx : cfg.collusion_capture)
        if (idx < n) result.captured.emplace(idx, shares[idx]);

    if (dropped.size() >= n) throw NoResponses();

    std::vector<std::future<Resp>> futures(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (dropped_set.count(i)) continue;
        futures[i] = std::async(std::launch::async, [&shares, &compute, i] { return compute(shares[i]); });
    }
    for (std::size_t i = 0; i < n; ++i)
        if (futures[i].valid()) result.responses[i] = futures[i].get();

    for (std::size_t i = 0; i < n; ++i)
        if (!dropped_set.count(i)) result.completion_order.push_back(i);
    std::stable_sort(result.completion_order.begin(), result.completion_order.end(),
                     [&latency](std::size_t a, std::size_t b) { return latency[a] < latency[b]; });

    trace.n_workers = n;
    trace.dropped = dropped;
    trace.latency_ms = latency;
    trace.responders = result.completion_order;
    return result;
}

} // namespace gramcode

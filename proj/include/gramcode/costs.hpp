#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "gramcode/degree_table.hpp"
#include "gramcode/errors.hpp"
#include "gramcode/exponents.hpp"

namespace gramcode {

/// One scheme at one p, with computation fixed across schemes: the Gram
/// schemes use p partitions, the two-sided baselines use 2p partitions so
/// every worker multiplies the same number of entries.
struct CostRow {
    std::string scheme;
    std::size_t p = 0;
    std::size_t partitions = 0;
    std::size_t recovery_threshold = 0; // minimal N
    std::uint64_t upload_elems = 0;
    std::uint64_t download_elems = 0;
    bool straggler_tolerant = false;
    bool model_only = false; // cost model only; no end-to-end implementation here
};

namespace detail {

inline CostRow sdgmm_cost_row(const std::string& name, const ExponentVector& phi, std::size_t p,
                              std::size_t t, std::size_t s) {
    CostRow row;
    row.scheme = name;
    row.p = p;
    row.partitions = p;
    const std::size_t distinct = distinct_exponents(phi).size();
    const std::size_t interp = static_cast<std::size_t>(2 * phi.largest() + 1);
    row.recovery_threshold = std::min(distinct, interp);
    const std::uint64_t chunk = (s + p - 1) / p;
    row.upload_elems = static_cast<std::uint64_t>(row.recovery_threshold) * t * chunk;
    row.download_elems = static_cast<std::uint64_t>(row.recovery_threshold) * t * (t + 1) / 2;
    row.straggler_tolerant = true;
    return row;
}

} // namespace detail

/// Cost row at minimal N for one of {sdgmm-trivial, sdgmm-i, sdgmm-ii,
/// matdot, dft}. Baselines run with 2p partitions and encode both factors.
inline CostRow scheme_params(const std::string& scheme, std::size_t p, std::size_t t, std::size_t s,
                             std::size_t collusion = 1,
                             std::uint64_t search_budget = 100'000'000ULL) {
    if (collusion != 1) throw UnsupportedCollusion(collusion);
    if (p == 0) throw InvalidPartition("p must be at least 1");
    if (scheme == "sdgmm-trivial") return detail::sdgmm_cost_row(scheme, construct_trivial(p), p, t, s);
    if (scheme == "sdgmm-i") return detail::sdgmm_cost_row(scheme, construct_doubling(p), p, t, s);
    if (scheme == "sdgmm-ii")
        return detail::sdgmm_cost_row(scheme, search_min_max(p, search_budget).phi, p, t, s);
    if (scheme == "matdot") {
        CostRow row;
        row.scheme = scheme;
        row.p = p;
        row.partitions = 2 * p;
        row.recovery_threshold = 2 * row.partitions + 2 * collusion - 1; // 4p + 1
        const std::uint64_t chunk = (s + row.partitions - 1) / row.partitions;
        row.upload_elems = 2ULL * row.recovery_threshold * t * chunk;
        row.download_elems = static_cast<std::uint64_t>(row.recovery_threshold) * t * t;
        row.straggler_tolerant = true;
        return row;
    }
    if (scheme == "dft") {
        CostRow row;
        row.scheme = scheme;
        row.p = p;
        row.partitions = 2 * p;
        row.recovery_threshold = row.partitions + 2 * collusion; // all N must respond
        const std::uint64_t chunk = (s + row.partitions - 1) / row.partitions;
        row.upload_elems = 2ULL * row.recovery_threshold * t * chunk;
        row.download_elems = static_cast<std::uint64_t>(row.recovery_threshold) * t * t;
        row.straggler_tolerant = false;
        row.model_only = true;
        return row;
    }
    throw InvalidScheme(scheme);
}

struct CrossoverSummary {
    std::size_t sdgmm_i_last_p_below_matdot = 0;
    std::size_t sdgmm_ii_last_p_below_matdot = 0;
    /// Smallest p from which the dft row has strictly the lowest upload cost
    /// of all rows at every larger p in range.
    std::size_t dft_lowest_from_p = 0;
    bool dft_below_matdot_everywhere = false;
};

struct CompareResult {
    std::vector<CostRow> rows;
    CrossoverSummary crossover;
    std::size_t sdgmm_ii_max_p = 0; // search rows computed up to here
};

/// Builds the full comparison grid for p = 1..p_max. Scheme II rows stop at
/// p = 9 unless the search budget is raised.
inline CompareResult compare_table(std::size_t p_max, std::size_t t, std::size_t s,
                                   std::size_t search_p_cap = 9,
                                   std::uint64_t search_budget = 100'000'000ULL) {
    if (p_max == 0) throw InvalidPartition("p range must start at 1");
    CompareResult result;
    result.sdgmm_ii_max_p = std::min(p_max, search_p_cap);
    for (std::size_t p = 1; p <= p_max; ++p) {
        result.rows.push_back(scheme_params("sdgmm-trivial", p, t, s));
        result.rows.push_back(scheme_params("sdgmm-i", p, t, s));
        if (p <= result.sdgmm_ii_max_p)
            result.rows.push_back(scheme_params("sdgmm-ii", p, t, s, 1, search_budget));
        result.rows.push_back(scheme_params("matdot", p, t, s));
        result.rows.push_back(scheme_params("dft", p, t, s));
    }

    auto upload_of = [&result](const std::string& scheme, std::size_t p) -> const CostRow* {
        for (const auto& row : result.rows)
            if (row.scheme == scheme && row.p == p) return &row;
        return nullptr;
    };

    auto& cross = result.crossover;
    cross.dft_below_matdot_everywhere = true;
    for (std::size_t p = 1; p <= p_max; ++p) {
        const CostRow* matdot = upload_of("matdot", p);
        const CostRow* dft = upload_of("dft", p);
        if (const CostRow* r = upload_of("sdgmm-i", p); r && r->upload_elems < matdot->upload_elems)
            cross.sdgmm_i_last_p_below_matdot = p;
        if (const CostRow* r = upload_of("sdgmm-ii", p); r && r->upload_elems < matdot->upload_elems)
            cross.sdgmm_ii_last_p_below_matdot = p;
        if (dft->upload_elems >= matdot->upload_elems) cross.dft_below_matdot_everywhere = false;
    }
    for (std::size_t start = 1; start <= p_max; ++start) {
        bool lowest = true;
        for (std::size_t p = start; p <= p_max && lowest; ++p) {
            const CostRow* dft = upload_of("dft", p);
            for (const auto& row : result.rows)
                if (row.p == p && row.scheme != "dft" && row.upload_elems <= dft->upload_elems) {
                    lowest = false;
                    break;
                }
        }
        if (lowest) {
            cross.dft_lowest_from_p = start;
            break;
        }
    }
    return result;
}

inline std::string to_csv(const std::vector<CostRow>& rows) {
    std::ostringstream out;
    out << "scheme,p,partitions,R,upload_elems,download_elems,straggler_tolerant\n";
    for (const auto& row : rows)
        out << row.scheme << ',' << row.p << ',' << row.partitions << ',' << row.recovery_threshold
            << ',' << row.upload_elems << ',' << row.download_elems << ','
            << (row.straggler_tolerant ? "true" : "false") << '\n';
    return out.str();
}

} // namespace gramcode

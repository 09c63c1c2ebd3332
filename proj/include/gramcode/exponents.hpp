#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gramcode/degree_table.hpp"
#include "gramcode/errors.hpp"

namespace gramcode {

/// phi_j = 2^{j-1} - 1: doubling-plus-one recursion starting from 0. Always
/// valid, but the largest exponent grows exponentially while the degree
/// table keeps all (p+1)(p+2)/2 sums distinct.
inline ExponentVector construct_trivial(std::size_t p) {
    if (p == 0) throw InvalidPartition("p must be at least 1");
    if (p > 61) throw Overflow("trivial construction exceeds 64-bit exponents for p > 61");
    std::vector<std::int64_t> exps(p + 1);
    for (std::size_t j = 0; j <= p; ++j) exps[j] = (std::int64_t{1} << j) - 1;
    return ExponentVector::with_one_noise(std::move(exps));
}

/// Greedy Sidon set of the requested size starting at 0: all pairwise sums
/// distinct. Gives (0, 1) for k = 2 and (0, 1, 3) for k = 3.
inline std::vector<std::int64_t> sidon_offsets(unsigned k) {
    std::vector<std::int64_t> v{0};
    std::unordered_set<std::int64_t> sums{0};
    while (v.size() < k) {
        for (std::int64_t cand = v.back() + 1;; ++cand) {
            bool ok = !sums.count(2 * cand);
            for (std::int64_t prev : v)
                if (!ok || sums.count(prev + cand)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            for (std::int64_t prev : v) sums.insert(prev + cand);
            sums.insert(2 * cand);
            v.push_back(cand);
            break;
        }
    }
    return v;
}

/// Raw iterated-concatenation sequence of length base^n. Each step places
/// `base` copies of the current vector at Sidon-set multiples of the stride
/// 2M+1, so block sums collide only where the copies' own tables allow it.
/// For base 2 the offsets are (0, 1): the paper's rule, tripling the
/// distinct-sum count per step; in general the count multiplies by
/// base*(base+1)/2.
inline std::vector<std::int64_t> doubling_sequence(unsigned n, unsigned base = 2) {
    if (base < 2) throw InvalidPartition("doubling base must be at least 2");
    const auto offsets = sidon_offsets(base);
    std::vector<std::int64_t> v{0};
    for (unsigned step = 0; step < n; ++step) {
        const std::int64_t m = v.back();
        const std::int64_t stride = detail::checked_add_i64(detail::checked_add_i64(m, m), 1);
        const std::size_t len = v.size();
        for (unsigned b = 1; b < base; ++b) {
            std::int64_t offset = 0;
            for (std::int64_t k = 0; k < offsets[b]; ++k)
                offset = detail::checked_add_i64(offset, stride);
            for (std::size_t i = 0; i < len; ++i)
                v.push_back(detail::checked_add_i64(v[i], offset));
        }
    }
    return v;
}

/// Scheme I: round p+1 up to the nearest power of `base` and keep the first
/// p+1 entries of the iterated sequence. A prefix of a valid vector is valid.
inline ExponentVector construct_doubling(std::size_t p, unsigned base = 2) {
    if (p == 0) throw InvalidPartition("p must be at least 1");
    unsigned n = 0;
    std::size_t cap = 1;
    while (cap < p + 1) {
        cap *= base;
        ++n;
    }
    auto seq = doubling_sequence(n, base);
    seq.resize(p + 1);
    return ExponentVector::with_one_noise(std::move(seq));
}

struct SearchResult {
    ExponentVector phi;
    std::int64_t largest = 0;
    std::size_t distinct_count = 0;
    std::uint64_t nodes_visited = 0;
};

/// Raised when the node budget runs out before the optimum is proven. No
/// complete assignment has been seen at that point (the search stops at the
/// first one), so the best valid vector we can offer is the Scheme I
/// construction.
struct BudgetExceeded : Error {
    std::uint64_t nodes_visited;
    std::int64_t bound_reached;
    ExponentVector fallback;
    BudgetExceeded(std::uint64_t nodes, std::int64_t bound, ExponentVector fb)
        : Error("search budget exhausted after " + std::to_string(nodes) + " nodes (bound " +
                std::to_string(bound) + ")"),
          nodes_visited(nodes), bound_reached(bound), fallback(std::move(fb)) {}
};

namespace detail {

/// Depth-first extension of strictly increasing prefixes under a fixed cap
/// on the largest element. `sum_count` holds every pairwise sum of the
/// placed prefix (with multiplicity); `useful_diag` the diagonals 2*phi_j of
/// placed useful entries. An extension value v is rejected if a new
/// off-diagonal sum phi_i + v hits a useful diagonal, or (for useful v) if
/// its own diagonal 2v already appears anywhere in the table.
class MinMaxSearch {
public:
    MinMaxSearch(std::size_t p, std::uint64_t budget) : p_(p), budget_(budget) {
        phi_.reserve(p + 1);
        phi_.push_back(0);
        sum_count_[0] = 1;
        useful_diag_.insert(0);
    }

    bool run(std::int64_t bound) {
        bound_ = bound;
        return extend(1);
    }

    const std::vector<std::int64_t>& phi() const { return phi_; }
    std::uint64_t nodes() const { return nodes_; }

private:
    bool extend(std::size_t index) {
        if (index == p_ + 1) return true;
        const bool useful = index < p_;
        const std::int64_t remaining = static_cast<std::int64_t>(p_ - index);
        const std::int64_t hi = bound_ - remaining;
        for (std::int64_t v = phi_.back() + 1; v <= hi; ++v) {
            if (++nodes_ > budget_)
                throw BudgetExceeded(nodes_, bound_, construct_doubling(p_));
            if (!admissible(v, useful)) continue;
            place(v, useful);
            if (extend(index + 1)) return true;
            unplace(v, useful);
        }
        return false;
    }

    bool admissible(std::int64_t v, bool useful) const {
        for (std::int64_t prev : phi_)
            if (useful_diag_.count(prev + v)) return false;
        if (useful && sum_count_.count(2 * v)) return false;
        return true;
    }

    void place(std::int64_t v, bool useful) {
        for (std::int64_t prev : phi_) sum_count_[prev + v] += 2; // (i,k) and (k,i)
        sum_count_[2 * v] += 1;
        if (useful) useful_diag_.insert(2 * v);
        phi_.push_back(v);
    }

    void unplace(std::int64_t v, bool useful) {
        phi_.pop_back();
        if (useful) useful_diag_.erase(2 * v);
        auto drop = [this](std::int64_t key, std::uint32_t by) {
            auto it = sum_count_.find(key);
            it->second -= by;
            if (it->second == 0) sum_count_.erase(it);
        };
        drop(2 * v, 1);
        for (std::int64_t prev : phi_) drop(prev + v, 2);
    }

    std::size_t p_;
    std::uint64_t budget_;
    std::int64_t bound_ = 0;
    std::uint64_t nodes_ = 0;
    std::vector<std::int64_t> phi_;
    std::unordered_map<std::int64_t, std::uint32_t> sum_count_;
    std::unordered_set<std::int64_t> useful_diag_;
};

} // namespace detail

/// Scheme II: iterative deepening on the candidate maximum B = p, p+1, ...;
/// the first complete assignment wins, which makes the result the
/// lexicographically smallest vector among those with the minimal largest
/// element.
inline SearchResult search_min_max(std::size_t p, std::uint64_t budget = 100'000'000ULL) {
    if (p == 0) throw InvalidPartition("p must be at least 1");
    std::uint64_t nodes_so_far = 0;
    for (std::int64_t bound = static_cast<std::int64_t>(p);; ++bound) {
        detail::MinMaxSearch search(p, budget - nodes_so_far);
        bool found;
        try {
            found = search.run(bound);
        } catch (BudgetExceeded& e) {
            e.nodes_visited += nodes_so_far;
            throw;
        }
        nodes_so_far += search.nodes();
        if (found) {
            SearchResult res;
            res.phi = ExponentVector::with_one_noise(search.phi());
            res.largest = res.phi.largest();
            res.distinct_count = distinct_exponents(res.phi).size();
            res.nodes_visited = nodes_so_far;
            return res;
        }
    }
}

} // namespace gramcode

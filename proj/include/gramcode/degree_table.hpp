#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gramcode/errors.hpp"

namespace gramcode {

namespace detail {

inline std::int64_t checked_add_i64(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow("exponent sum overflows 64 bits");
    return r;
}

} // namespace detail

/// Exponents of the encoding polynomial. The first `useful_count` entries
/// carry data blocks, the rest carry noise. Vectors built by the exponent
/// constructors are strictly increasing and start at 0; general vectors
/// (e.g. the MatDot column exponents) need not be sorted.
struct ExponentVector {
    std::vector<std::int64_t> exponents;
    std::size_t useful_count = 0;

    ExponentVector() = default;
    ExponentVector(std::vector<std::int64_t> exps, std::size_t useful)
        : exponents(std::move(exps)), useful_count(useful) {}

    /// Convention for SDGMM vectors with X = 1: everything but the last
    /// entry is useful.
    static ExponentVector with_one_noise(std::vector<std::int64_t> exps) {
        std::size_t useful = exps.empty() ? 0 : exps.size() - 1;
        return ExponentVector(std::move(exps), useful);
    }

    std::size_t size() const { return exponents.size(); }
    std::int64_t operator[](std::size_t i) const { return exponents[i]; }
    std::int64_t largest() const { return exponents.back(); }

    bool strictly_increasing() const {
        for (std::size_t i = 1; i < exponents.size(); ++i)
            if (exponents[i] <= exponents[i - 1]) return false;
        return true;
    }

    bool operator==(const ExponentVector& other) const { return exponents == other.exponents; }
};

/// Grid of pairwise exponent sums (or differences); cell(i,j) tells which
/// monomial the product of terms i and j lands on.
struct DegreeTable {
    ExponentVector row_exps;
    ExponentVector col_exps;
    std::vector<std::vector<std::int64_t>> cells;

    std::size_t rows() const { return cells.size(); }
    std::size_t cols() const { return cells.empty() ? 0 : cells[0].size(); }
    std::int64_t cell(std::size_t i, std::size_t j) const { return cells[i][j]; }
};

/// Distinct entries of the symmetric table phi (+) phi, sorted. Its size is
/// the recovery threshold of the associated scheme.
struct ExponentSet {
    std::vector<std::int64_t> members;
    ExponentVector source;

    std::size_t size() const { return members.size(); }
    bool contains(std::int64_t v) const {
        return std::binary_search(members.begin(), members.end(), v);
    }
    /// Index of v in the sorted member list; caller guarantees membership.
    std::size_t index_of(std::int64_t v) const {
        return static_cast<std::size_t>(std::lower_bound(members.begin(), members.end(), v) - members.begin());
    }
};

inline DegreeTable outer_sum(const ExponentVector& rows, const ExponentVector& cols) {
    DegreeTable t;
    t.row_exps = rows;
    t.col_exps = cols;
    t.cells.resize(rows.size(), std::vector<std::int64_t>(cols.size(), 0));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            t.cells[i][j] = detail::checked_add_i64(rows[i], cols[j]);
    return t;
}

/// Difference table phi_i - phi_j, used by the analog scheme where the
/// conjugate of a unit-modulus point is its inverse.
inline DegreeTable difference_table(const ExponentVector& phi) {
    DegreeTable t;
    t.row_exps = phi;
    t.col_exps = phi;
    t.cells.resize(phi.size(), std::vector<std::int64_t>(phi.size(), 0));
    for (std::size_t i = 0; i < phi.size(); ++i)
        for (std::size_t j = 0; j < phi.size(); ++j) t.cells[i][j] = phi[i] - phi[j];
    return t;
}

/// A collision certificate: useful diagonal entry 2*phi[diag_index] also
/// appears at cell (row, col).
struct Collision {
    std::size_t diag_index;
    std::size_t row, col;
};

struct ValidityResult {
    bool valid = false;
    std::optional<Collision> collision;
    explicit operator bool() const { return valid; }
};

/// The SDGMM validity condition for X = 1: each useful diagonal value
/// 2*phi_j (j < p) must appear in the symmetric table only at (j, j). The
/// noise diagonal is allowed to collide with interference cells.
inline ValidityResult is_valid(const ExponentVector& phi, std::size_t p) {
    ValidityResult res;
    const std::size_t n = phi.size();
    if (n != p + 1 || p == 0) return res; // X = 1 means length p + 1
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            std::int64_t cell = detail::checked_add_i64(phi[i], phi[k]);
            for (std::size_t j = 0; j < p; ++j) {
                if (cell == detail::checked_add_i64(phi[j], phi[j]) && !(i == j && k == j)) {
                    res.collision = Collision{j, i, k};
                    return res;
                }
            }
        }
    }
    res.valid = true;
    return res;
}

inline ExponentSet distinct_exponents(const ExponentVector& phi) {
    ExponentSet set;
    set.source = phi;
    for (std::size_t i = 0; i < phi.size(); ++i)
        for (std::size_t j = i; j < phi.size(); ++j)
            set.members.push_back(detail::checked_add_i64(phi[i], phi[j]));
    std::sort(set.members.begin(), set.members.end());
    set.members.erase(std::unique(set.members.begin(), set.members.end()), set.members.end());
    return set;
}

/// Aligned integer grid with the useful diagonal cells bracketed, in the
/// style of printed degree tables. `useful` = 0 marks nothing.
inline std::string render_table(const DegreeTable& t, std::size_t useful = 0) {
    std::size_t width = 1;
    auto measure = [&width](std::int64_t v) {
        width = std::max(width, std::to_string(v).size());
    };
    for (std::size_t j = 0; j < t.col_exps.size(); ++j) measure(t.col_exps[j]);
    for (std::size_t i = 0; i < t.rows(); ++i) {
        measure(t.row_exps[i]);
        for (std::size_t j = 0; j < t.cols(); ++j) measure(t.cell(i, j));
    }
    const int w = static_cast<int>(width);
    std::ostringstream out;
    out << std::setw(w + 2) << "" << " |";
    for (std::size_t j = 0; j < t.col_exps.size(); ++j)
        out << " " << std::setw(w + 2) << t.col_exps[j];
    out << "\n";
    out << std::string(width + 3, '-') << "+" << std::string((width + 3) * t.cols(), '-') << "\n";
    for (std::size_t i = 0; i < t.rows(); ++i) {
        out << std::setw(w + 2) << t.row_exps[i] << " |";
        for (std::size_t j = 0; j < t.cols(); ++j) {
            std::string s = std::to_string(t.cell(i, j));
            if (i == j && i < useful) s = "[" + s + "]";
            out << " " << std::setw(w + 2) << s;
        }
        out << "\n";
    }
    return out.str();
}

} // namespace gramcode

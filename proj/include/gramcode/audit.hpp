#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gramcode/degree_table.hpp"
#include "gramcode/errors.hpp"
#include "gramcode/field.hpp"
#include "gramcode/matrix.hpp"

namespace gramcode {

inline constexpr std::uint64_t kAuditEnumerationBound = 1'000'000;

/// Exact mutual information (in bits) of a joint histogram. Terms whose
/// integer cross-products match exactly contribute a hard zero, so a uniform
/// channel yields MI == 0.0 with no rounding residue.
inline double mutual_information_bits(const std::vector<std::vector<std::uint64_t>>& joint) {
    std::uint64_t total = 0;
    std::vector<std::uint64_t> row_sum(joint.size(), 0);
    std::vector<std::uint64_t> col_sum(joint.empty() ? 0 : joint[0].size(), 0);
    for (std::size_t a = 0; a < joint.size(); ++a)
        for (std::size_t s = 0; s < joint[a].size(); ++s) {
            row_sum[a] += joint[a][s];
            col_sum[s] += joint[a][s];
            total += joint[a][s];
        }
    if (total == 0) return 0.0;
    double mi = 0.0;
    for (std::size_t a = 0; a < joint.size(); ++a)
        for (std::size_t s = 0; s < joint[a].size(); ++s) {
            const std::uint64_t c = joint[a][s];
            if (c == 0) continue;
            const __uint128_t lhs = static_cast<__uint128_t>(c) * total;
            const __uint128_t rhs = static_cast<__uint128_t>(row_sum[a]) * col_sum[s];
            if (lhs == rhs) continue; // log2(1) exactly
            mi += (static_cast<double>(c) / static_cast<double>(total)) *
                  std::log2(static_cast<double>(lhs) / static_cast<double>(rhs));
        }
    return mi;
}

namespace detail {

inline std::uint64_t pow_u64_checked(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (v > cap / base) return cap + 1;
        v *= base;
    }
    return v;
}

/// Flattens a t x c matrix of field values into a base-q index.
inline std::uint64_t matrix_index(const std::vector<std::uint64_t>& flat, std::uint64_t q) {
    std::uint64_t idx = 0;
    for (std::uint64_t v : flat) idx = idx * q + v;
    return idx;
}

} // namespace detail

struct UniformityReport {
    bool uniform = false;        // every share value hit exactly once over all R_1
    std::uint64_t state_count = 0; // q^{t * chunk_cols}
    std::vector<std::uint32_t> histogram;
    std::uint64_t alpha = 0;
};

/// Enumerates every noise matrix R_1 and counts the induced share values for
/// a fixed A and evaluation point. With a nonzero point the map
/// R_1 -> C + R_1 * alpha^{phi_noise} is a bijection, so the histogram is
/// flat at exactly 1; a zero point collapses it and the check flags that.
inline UniformityReport share_uniformity_check(const PrimeField& field, std::size_t t,
                                               std::size_t chunk_cols, const ExponentVector& phi,
                                               std::uint64_t alpha, const FieldMatrix& A) {
    const std::uint64_t q = field.modulus();
    const std::size_t cells = t * chunk_cols;
    const std::uint64_t states = detail::pow_u64_checked(q, cells, kAuditEnumerationBound);
    if (states > kAuditEnumerationBound)
        throw TooLarge("q^(t*chunk) exceeds the enumeration bound");

    const std::size_t p = phi.useful_count;
    if (A.rows() != t || A.cols() != p * chunk_cols)
        throw Error("A must be t x (p * chunk_cols)");
    const auto blocks = partition_ipp(A, p);

    // fixed data part C = sum_j A_j alpha^{phi_j}
    std::vector<std::uint64_t> fixed(cells, 0);
    for (std::size_t j = 0; j < p; ++j) {
        const std::uint64_t coef = field.pow(alpha, static_cast<std::uint64_t>(phi[j]));
        for (std::size_t i = 0; i < t; ++i)
            for (std::size_t c = 0; c < chunk_cols; ++c)
                fixed[i * chunk_cols + c] =
                    field.add(fixed[i * chunk_cols + c], field.mul(blocks[j].at(i, c), coef));
    }
    const std::uint64_t beta = field.pow(alpha, static_cast<std::uint64_t>(phi[p]));

    UniformityReport report;
    report.alpha = alpha;
    report.state_count = states;
    report.histogram.assign(states, 0);
    std::vector<std::uint64_t> noise(cells), share(cells);
    for (std::uint64_t r = 0; r < states; ++r) {
        std::uint64_t rem = r;
        for (std::size_t k = cells; k-- > 0;) {
            noise[k] = rem % q;
            rem /= q;
        }
        for (std::size_t k = 0; k < cells; ++k)
            share[k] = field.add(fixed[k], field.mul(noise[k], beta));
        ++report.histogram[detail::matrix_index(share, q)];
    }
    report.uniform = true;
    for (std::uint32_t c : report.histogram)
        if (c != 1) {
            report.uniform = false;
            break;
        }
    return report;
}

/// Exact I(A; share) over a uniform prior on the provided A values,
/// enumerating all noise matrices for each. Zero iff each conditional share
/// distribution is flat.
inline double single_share_mi_bits(const PrimeField& field, std::size_t t, std::size_t chunk_cols,
                                   const ExponentVector& phi, std::uint64_t alpha,
                                   const std::vector<FieldMatrix>& a_values) {
    std::vector<std::vector<std::uint64_t>> joint;
    for (const auto& A : a_values) {
        auto rep = share_uniformity_check(field, t, chunk_cols, phi, alpha, A);
        joint.emplace_back(rep.histogram.begin(), rep.histogram.end());
    }
    return mutual_information_bits(joint);
}

struct LeakageReport {
    /// Coefficients c_k of the functional sum_k c_k A_k that two colluding
    /// workers can compute exactly after eliminating the shared noise term.
    std::vector<std::uint64_t> functional;
    double mi_single_bits = 0.0; // I(A; share_i), expected exactly 0
    double mi_pair_bits = 0.0;   // I(A; share_i, share_j), positive
    std::uint64_t alpha_i = 0, alpha_j = 0;
};

/// Scalar-block demonstration (t = 1, chunk = 1) that X = 1 security does
/// not survive a two-worker collusion: with one noise unknown shared by two
/// equations, beta_j * share_i - beta_i * share_j is noise-free.
inline LeakageReport collusion_leakage_demo(const PrimeField& field, const ExponentVector& phi,
                                            std::uint64_t alpha_i, std::uint64_t alpha_j) {
    const std::uint64_t q = field.modulus();
    if (alpha_i % q == 0 || alpha_j % q == 0 || alpha_i % q == alpha_j % q)
        throw Error("collusion demo needs two distinct nonzero evaluation points");
    const std::size_t p = phi.useful_count;
    const std::uint64_t a_states = detail::pow_u64_checked(q, p, kAuditEnumerationBound);
    if (a_states > kAuditEnumerationBound || a_states * q > kAuditEnumerationBound)
        throw TooLarge("q^p exceeds the enumeration bound");

    const std::uint64_t beta_i = field.pow(alpha_i, static_cast<std::uint64_t>(phi[p]));
    const std::uint64_t beta_j = field.pow(alpha_j, static_cast<std::uint64_t>(phi[p]));

    LeakageReport report;
    report.alpha_i = alpha_i;
    report.alpha_j = alpha_j;
    for (std::size_t k = 0; k < p; ++k) {
        const std::uint64_t pi = field.pow(alpha_i, static_cast<std::uint64_t>(phi[k]));
        const std::uint64_t pj = field.pow(alpha_j, static_cast<std::uint64_t>(phi[k]));
        report.functional.push_back(field.sub(field.mul(beta_j, pi), field.mul(beta_i, pj)));
    }

    std::vector<std::vector<std::uint64_t>> joint_single(a_states, std::vector<std::uint64_t>(q, 0));
    std::vector<std::vector<std::uint64_t>> joint_pair(a_states, std::vector<std::uint64_t>(q * q, 0));
    std::vector<std::uint64_t> a(p);
    for (std::uint64_t ai = 0; ai < a_states; ++ai) {
        std::uint64_t rem = ai;
        for (std::size_t k = p; k-- > 0;) {
            a[k] = rem % q;
            rem /= q;
        }
        std::uint64_t ci = 0, cj = 0;
        for (std::size_t k = 0; k < p; ++k) {
            ci = field.add(ci, field.mul(a[k], field.pow(alpha_i, static_cast<std::uint64_t>(phi[k]))));
            cj = field.add(cj, field.mul(a[k], field.pow(alpha_j, static_cast<std::uint64_t>(phi[k]))));
        }
        for (std::uint64_t r = 0; r < q; ++r) {
            const std::uint64_t si = field.add(ci, field.mul(r, beta_i));
            const std::uint64_t sj = field.add(cj, field.mul(r, beta_j));
            ++joint_single[ai][si];
            ++joint_pair[ai][si * q + sj];
        }
    }
    report.mi_single_bits = mutual_information_bits(joint_single);
    report.mi_pair_bits = mutual_information_bits(joint_pair);
    return report;
}

} // namespace gramcode

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "gramcode/errors.hpp"
#include "gramcode/field.hpp"

namespace gramcode {

/// Square matrix over F_q in nested-vector form, used only for the small
/// decoding systems (R x R with R a few dozen).
using FieldSquare = std::vector<std::vector<std::uint64_t>>;

inline bool field_invertible(const PrimeField& f, FieldSquare m) {
    const std::size_t n = m.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) return false;
        std::swap(m[col], m[pivot]);
        const std::uint64_t inv = f.inv(m[col][col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            if (m[row][col] == 0) continue;
            const std::uint64_t factor = f.mul(m[row][col], inv);
            for (std::size_t k = col; k < n; ++k)
                m[row][k] = f.sub(m[row][k], f.mul(factor, m[col][k]));
        }
    }
    return true;
}

/// Gauss-Jordan inverse; throws DecodingSingular when the matrix has no
/// inverse.
inline FieldSquare field_invert(const PrimeField& f, FieldSquare m) {
    const std::size_t n = m.size();
    FieldSquare inv(n, std::vector<std::uint64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) throw DecodingSingular();
        std::swap(m[col], m[pivot]);
        std::swap(inv[col], inv[pivot]);
        const std::uint64_t scale = f.inv(m[col][col]);
        for (std::size_t k = 0; k < n; ++k) {
            m[col][k] = f.mul(m[col][k], scale);
            inv[col][k] = f.mul(inv[col][k], scale);
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col] == 0) continue;
            const std::uint64_t factor = m[row][col];
            for (std::size_t k = 0; k < n; ++k) {
                m[row][k] = f.sub(m[row][k], f.mul(factor, m[col][k]));
                inv[row][k] = f.sub(inv[row][k], f.mul(factor, inv[col][k]));
            }
        }
    }
    return inv;
}

/// Solves a dense complex system with partial pivoting. Used for the small
/// Vandermonde systems of the analog decoder.
inline std::vector<std::complex<double>> solve_complex(std::vector<std::vector<std::complex<double>>> m,
                                                       std::vector<std::complex<double>> rhs) {
    const std::size_t n = m.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(m[col][col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            double mag = std::abs(m[row][col]);
            if (mag > best) {
                best = mag;
                pivot = row;
            }
        }
        if (best == 0.0) throw DecodingSingular();
        std::swap(m[col], m[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            std::complex<double> factor = m[row][col] / m[col][col];
            if (factor == std::complex<double>{0.0, 0.0}) continue;
            for (std::size_t k = col; k < n; ++k) m[row][k] -= factor * m[col][k];
            rhs[row] -= factor * rhs[col];
        }
    }
    std::vector<std::complex<double>> x(n);
    for (std::size_t i = n; i-- > 0;) {
        std::complex<double> acc = rhs[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= m[i][k] * x[k];
        x[i] = acc / m[i][i];
    }
    return x;
}

/// Real solve with a relative pivot threshold; raises SingularGram on
/// (near-)singular systems. Used by the least-squares demo.
inline std::vector<double> solve_real_spd(std::vector<std::vector<double>> m, std::vector<double> rhs,
                                          double rel_tol = 1e-9) {
    const std::size_t n = m.size();
    double scale = 0.0;
    for (const auto& row : m)
        for (double v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw SingularGram();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(m[col][col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            double mag = std::abs(m[row][col]);
            if (mag > best) {
                best = mag;
                pivot = row;
            }
        }
        if (best <= rel_tol * scale) throw SingularGram();
        std::swap(m[col], m[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            double factor = m[row][col] / m[col][col];
            if (factor == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) m[row][k] -= factor * m[col][k];
            rhs[row] -= factor * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = rhs[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= m[i][k] * x[k];
        x[i] = acc / m[i][i];
    }
    return x;
}

} // namespace gramcode

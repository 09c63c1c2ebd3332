#pragma once

#include <cassert>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "gramcode/errors.hpp"
#include "gramcode/field.hpp"

namespace gramcode {

/// Dense row-major matrix over F_q. Immutable use is the norm: operations
/// return new matrices; shares may be handed to concurrent workers freely.
class FieldMatrix {
public:
    FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static FieldMatrix identity(PrimeField field, std::size_t n) {
        FieldMatrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static FieldMatrix random(PrimeField field, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
        FieldMatrix m(field, rows, cols);
        for (auto& v : m.data_) v = uniform_field_element(rng, field.modulus());
        return m;
    }

    const PrimeField& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    std::uint64_t& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    std::uint64_t at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<std::uint64_t>& data() const { return data_; }
    std::vector<std::uint64_t>& data() { return data_; }

    FieldMatrix transpose() const {
        FieldMatrix out(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
        return out;
    }

    FieldMatrix add(const FieldMatrix& other) const {
        assert(rows_ == other.rows_ && cols_ == other.cols_ && field_ == other.field_);
        FieldMatrix out(field_, rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k)
            out.data_[k] = field_.add(data_[k], other.data_[k]);
        return out;
    }

    FieldMatrix mul(const FieldMatrix& other) const {
        assert(cols_ == other.rows_ && field_ == other.field_);
        FieldMatrix out(field_, rows_, other.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                std::uint64_t a = at(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < other.cols_; ++j)
                    out.at(i, j) = field_.add(out.at(i, j), field_.mul(a, other.at(k, j)));
            }
        }
        return out;
    }

    /// this += other * scalar, entrywise. The workhorse of share encoding.
    void add_scaled(const FieldMatrix& other, std::uint64_t scalar) {
        assert(rows_ == other.rows_ && cols_ == other.cols_);
        for (std::size_t k = 0; k < data_.size(); ++k)
            data_[k] = field_.add(data_[k], field_.mul(other.data_[k], scalar));
    }

    FieldMatrix scaled(std::uint64_t scalar) const {
        FieldMatrix out(field_, rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k)
            out.data_[k] = field_.mul(data_[k], scalar);
        return out;
    }

    bool operator==(const FieldMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && field_ == other.field_ && data_ == other.data_;
    }
    bool operator!=(const FieldMatrix& other) const { return !(*this == other); }

private:
    PrimeField field_;
    std::size_t rows_, cols_;
    std::vector<std::uint64_t> data_;
};

/// Dense row-major matrix over complex doubles for the analog scheme.
class ComplexMatrix {
public:
    using value_type = std::complex<double>;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, value_type{0.0, 0.0}) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    value_type& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    value_type at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<value_type>& data() const { return data_; }

    ComplexMatrix conj_transpose() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = std::conj(at(i, j));
        return out;
    }

    ComplexMatrix mul(const ComplexMatrix& other) const {
        assert(cols_ == other.rows_);
        ComplexMatrix out(rows_, other.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                value_type a = at(i, k);
                for (std::size_t j = 0; j < other.cols_; ++j) out.at(i, j) += a * other.at(k, j);
            }
        return out;
    }

    void add_scaled(const ComplexMatrix& other, value_type scalar) {
        assert(rows_ == other.rows_ && cols_ == other.cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k] * scalar;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : data_) s += std::norm(v);
        return std::sqrt(s);
    }

private:
    std::size_t rows_, cols_;
    std::vector<value_type> data_;
};

/// Row-major lower triangle of a symmetric (or Hermitian) t x t matrix;
/// exactly t(t+1)/2 entries. This is what workers return.
template <typename T>
struct PackedLowerTriangle {
    std::size_t dim = 0;
    std::vector<T> entries;

    PackedLowerTriangle() = default;
    explicit PackedLowerTriangle(std::size_t t) : dim(t), entries(t * (t + 1) / 2, T{}) {}

    static std::size_t packed_size(std::size_t t) { return t * (t + 1) / 2; }

    // i >= j
    T& at(std::size_t i, std::size_t j) { return entries[i * (i + 1) / 2 + j]; }
    T at(std::size_t i, std::size_t j) const { return entries[i * (i + 1) / 2 + j]; }

    bool operator==(const PackedLowerTriangle& other) const {
        return dim == other.dim && entries == other.entries;
    }
};

/// Splits A into p column blocks of equal width ceil(s/p), zero-padding the
/// last block on the right. Padding columns contribute nothing to the Gram
/// sum, so sum_j A_j A_j^T = A A^T regardless of divisibility.
inline std::vector<FieldMatrix> partition_ipp(const FieldMatrix& A, std::size_t p) {
    if (p == 0) throw InvalidPartition("partition count must be at least 1");
    const std::size_t chunk = (A.cols() + p - 1) / p;
    std::vector<FieldMatrix> blocks;
    blocks.reserve(p);
    for (std::size_t b = 0; b < p; ++b) {
        FieldMatrix block(A.field(), A.rows(), chunk);
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t j = 0; j < chunk; ++j) {
                std::size_t col = b * chunk + j;
                if (col < A.cols()) block.at(i, j) = A.at(i, col);
            }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

inline std::vector<ComplexMatrix> partition_ipp(const ComplexMatrix& A, std::size_t p) {
    if (p == 0) throw InvalidPartition("partition count must be at least 1");
    const std::size_t chunk = (A.cols() + p - 1) / p;
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(p);
    for (std::size_t b = 0; b < p; ++b) {
        ComplexMatrix block(A.rows(), chunk);
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t j = 0; j < chunk; ++j) {
                std::size_t col = b * chunk + j;
                if (col < A.cols()) block.at(i, j) = A.at(i, col);
            }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

/// Row partitioning (for the B side of MatDot): blocks of ceil(r/p) rows,
/// zero-padded at the bottom.
inline std::vector<FieldMatrix> partition_rows(const FieldMatrix& B, std::size_t p) {
    if (p == 0) throw InvalidPartition("partition count must be at least 1");
    const std::size_t chunk = (B.rows() + p - 1) / p;
    std::vector<FieldMatrix> blocks;
    blocks.reserve(p);
    for (std::size_t b = 0; b < p; ++b) {
        FieldMatrix block(B.field(), chunk, B.cols());
        for (std::size_t i = 0; i < chunk; ++i) {
            std::size_t row = b * chunk + i;
            if (row >= B.rows()) break;
            for (std::size_t j = 0; j < B.cols(); ++j) block.at(i, j) = B.at(row, j);
        }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

/// The worker task: lower triangle of M M^T using one inner product per row
/// pair (i, j), i >= j.
inline PackedLowerTriangle<std::uint64_t> gram_lower(const FieldMatrix& M) {
    const PrimeField& f = M.field();
    PackedLowerTriangle<std::uint64_t> out(M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < M.cols(); ++k)
                acc = f.add(acc, f.mul(M.at(i, k), M.at(j, k)));
            out.at(i, j) = acc;
        }
    return out;
}

/// Hermitian variant: entry (i, j) = row_i . conj(row_j). Summation order is
/// fixed row-major so repeated runs are bit-identical.
inline PackedLowerTriangle<std::complex<double>> gram_lower(const ComplexMatrix& M) {
    PackedLowerTriangle<std::complex<double>> out(M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            std::complex<double> acc = 0.0;
            for (std::size_t k = 0; k < M.cols(); ++k) acc += M.at(i, k) * std::conj(M.at(j, k));
            out.at(i, j) = acc;
        }
    return out;
}

inline FieldMatrix unpack(const PackedLowerTriangle<std::uint64_t>& L, const PrimeField& field) {
    FieldMatrix out(field, L.dim, L.dim);
    for (std::size_t i = 0; i < L.dim; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            out.at(i, j) = L.at(i, j);
            out.at(j, i) = L.at(i, j);
        }
    return out;
}

inline ComplexMatrix unpack_hermitian(const PackedLowerTriangle<std::complex<double>>& L) {
    ComplexMatrix out(L.dim, L.dim);
    for (std::size_t i = 0; i < L.dim; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            out.at(i, j) = L.at(i, j);
            if (i != j) out.at(j, i) = std::conj(L.at(i, j));
        }
    return out;
}

inline PackedLowerTriangle<std::uint64_t> pack_lower(const FieldMatrix& M) {
    PackedLowerTriangle<std::uint64_t> out(M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j) out.at(i, j) = M.at(i, j);
    return out;
}

} // namespace gramcode

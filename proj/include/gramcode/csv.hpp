#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gramcode/errors.hpp"
#include "gramcode/field.hpp"
#include "gramcode/matrix.hpp"

namespace gramcode {

namespace detail {

inline std::vector<std::vector<std::string>> read_cells(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t a = cell.find_first_not_of(" \t");
            std::size_t b = cell.find_last_not_of(" \t");
            cells.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
        }
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) throw Malformed("matrix file is empty");
    for (const auto& r : rows)
        if (r.size() != rows[0].size()) throw Malformed("ragged rows in matrix file");
    return rows;
}

} // namespace detail

/// One row per line, comma-separated nonnegative integers, no header;
/// entries are reduced mod q on load.
inline FieldMatrix load_field_csv(std::istream& in, const PrimeField& field) {
    const auto cells = detail::read_cells(in);
    FieldMatrix m(field, cells.size(), cells[0].size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = 0; j < cells[i].size(); ++j) {
            const std::string& cell = cells[i][j];
            if (cell.empty() || cell.find_first_not_of("0123456789") != std::string::npos)
                throw Malformed("bad integer: " + cell);
            try {
                m.at(i, j) = field.reduce(std::stoull(cell));
            } catch (const std::exception&) {
                throw Malformed("bad integer: " + cell);
            }
        }
    return m;
}

inline FieldMatrix load_field_csv_file(const std::string& path, const PrimeField& field) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return load_field_csv(in, field);
}

/// Analog variant: decimal floats, loaded with zero imaginary parts.
inline ComplexMatrix load_real_csv(std::istream& in) {
    const auto cells = detail::read_cells(in);
    ComplexMatrix m(cells.size(), cells[0].size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = 0; j < cells[i].size(); ++j) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cells[i][j], &used);
                if (used != cells[i][j].size()) throw Malformed("bad number: " + cells[i][j]);
                m.at(i, j) = v;
            } catch (const Malformed&) {
                throw;
            } catch (const std::exception&) {
                throw Malformed("bad number: " + cells[i][j]);
            }
        }
    return m;
}

inline ComplexMatrix load_real_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return load_real_csv(in);
}

/// A vector is a one-row or one-column CSV.
inline std::vector<double> load_real_vector_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    const ComplexMatrix m = load_real_csv(in);
    std::vector<double> v;
    if (m.rows() == 1) {
        for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m.at(0, j).real());
    } else if (m.cols() == 1) {
        for (std::size_t i = 0; i < m.rows(); ++i) v.push_back(m.at(i, 0).real());
    } else {
        throw Malformed("expected a single-row or single-column vector file");
    }
    return v;
}

inline void save_field_csv(std::ostream& out, const FieldMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m.at(i, j);
        }
        out << '\n';
    }
}

/// Writes the real parts; imaginary parts below the cutoff are truncated,
/// larger ones are an error (the caller expected a real-valued result).
inline void save_real_csv(std::ostream& out, const ComplexMatrix& m, double imag_cutoff = 1e-10) {
    double scale = 0.0;
    for (const auto& v : m.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (std::abs(m.at(i, j).imag()) > imag_cutoff * std::max(1.0, scale))
                throw Error("matrix has non-negligible imaginary parts");
            if (j) out << ',';
            out << m.at(i, j).real();
        }
        out << '\n';
    }
}

} // namespace gramcode

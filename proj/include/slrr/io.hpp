#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "slrr/types.hpp"

namespace slrr {

/// On-disk sample orientation. In memory samples are always columns.
enum class Layout { SamplesAsColumns, SamplesAsRows };

namespace detail {

inline std::vector<double> parse_row(const std::string& line, int line_no) {
    std::vector<double> values;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
        if (std::isspace(static_cast<unsigned char>(*p)) || *p == ',') {
            ++p;
            continue;
        }
        double v = 0.0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc{}) {
            throw std::runtime_error("non-numeric token at line " + std::to_string(line_no) +
                                     ": '" + std::string(p, std::min<size_t>(end - p, 16)) + "'");
        }
        if (!std::isfinite(v)) {
            throw std::runtime_error("non-finite entry at line " + std::to_string(line_no));
        }
        values.push_back(v);
        p = next;
    }
    return values;
}

} // namespace detail

/**
 * Load a delimited text matrix (commas and/or whitespace, one matrix row per
 * line, '#' lines ignored). Returns the matrix with samples as columns:
 * Layout::SamplesAsRows transposes the on-disk matrix.
 *
 * Throws std::runtime_error naming the path or the offending line for I/O
 * failures, ragged rows, and non-numeric tokens.
 */
inline Matrix load_matrix(const std::string& path, Layout layout = Layout::SamplesAsColumns) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open matrix file: " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<double> row = detail::parse_row(line, line_no);
        if (row.empty())
            continue;
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw std::runtime_error("ragged row at line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(width) + " entries, got " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw std::runtime_error("empty matrix file: " + path);

    Matrix M(rows.size(), width);
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < width; ++j)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];

    if (layout == Layout::SamplesAsRows)
        return M.transpose();
    return M;
}

/// Write a matrix as comma-delimited text, 17 significant digits (lossless
/// for double round trips).
inline void save_matrix(const std::string& path, const Matrix& M) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path);
    std::ostringstream buf;
    buf.precision(17);
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j)
                buf << ',';
            buf << M(i, j);
        }
        buf << '\n';
    }
    out << buf.str();
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

/// Label files: one 1-based integer per line; '#' lines ignored.
inline Labels load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open label file: " + path);
    Labels labels;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        int v = 0;
        auto [next, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        (void)next;
        if (ec != std::errc{} || v < 1)
            throw std::runtime_error("bad label at line " + std::to_string(line_no) + " of " + path);
        labels.push_back(v);
    }
    return labels;
}

inline void save_labels(const std::string& path, const Labels& labels) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path);
    for (int v : labels)
        out << v << '\n';
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

} // namespace slrr

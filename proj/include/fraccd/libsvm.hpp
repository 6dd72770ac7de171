#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "fraccd/csc_matrix.hpp"
#include "fraccd/errors.hpp"

namespace fraccd {

namespace detail {

inline double parse_double(std::string_view s, std::size_t line, const char* what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError(line, std::string("bad ") + what + " '" + std::string(s) + "'");
    return v;
}

inline long long parse_index(std::string_view s, std::size_t line) {
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError(line, "bad feature index '" + std::string(s) + "'");
    return v;
}

// Shortest decimal that round-trips the double.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

// LIBSVM sparse text format: "label idx:val idx:val ...", indices 1-based and
// strictly increasing within a line. Labels are parsed but returned separately;
// the matrix has one row per line and n = largest index seen.
struct LibsvmData {
    CscMatrix matrix;
    std::vector<double> labels;
};

inline LibsvmData parse_libsvm(std::istream& in) {
    std::vector<std::tuple<index_t, index_t, double>> triplets;
    std::vector<double> labels;
    std::string line;
    index_t n_cols = 0;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) throw ParseError(line_no, "empty line");
        labels.push_back(detail::parse_double(tok, line_no, "label"));
        long long prev_idx = 0;
        while (ls >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos) throw ParseError(line_no, "missing ':' in '" + tok + "'");
            const long long idx = detail::parse_index(std::string_view(tok).substr(0, colon), line_no);
            if (idx < 1) throw ParseError(line_no, "indices are 1-based");
            if (idx <= prev_idx)
                throw IndexOutOfOrder(line_no, "feature indices must be strictly increasing");
            prev_idx = idx;
            const double val =
                detail::parse_double(std::string_view(tok).substr(colon + 1), line_no, "value");
            triplets.emplace_back(static_cast<index_t>(labels.size() - 1),
                                  static_cast<index_t>(idx - 1), val);
            n_cols = std::max(n_cols, static_cast<index_t>(idx));
        }
    }
    const index_t n_rows = static_cast<index_t>(labels.size());
    return {CscMatrix::from_triplets(n_rows, n_cols, std::move(triplets)), std::move(labels)};
}

inline LibsvmData load_libsvm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    return parse_libsvm(in);
}

inline void write_libsvm(std::ostream& out, const CscMatrix& m,
                         const std::vector<double>* labels = nullptr) {
    // CSC is column-major; regroup by row first.
    std::vector<std::vector<std::pair<index_t, double>>> rows(m.rows());
    for (index_t j = 0; j < m.cols(); ++j) {
        const auto r = m.col_rows(j);
        const auto v = m.col_vals(j);
        for (std::size_t p = 0; p < r.size(); ++p) rows[r[p]].emplace_back(j, v[p]);
    }
    for (index_t i = 0; i < m.rows(); ++i) {
        std::sort(rows[i].begin(), rows[i].end());
        out << detail::format_double(labels ? (*labels)[i] : 0.0);
        for (const auto& [j, v] : rows[i]) out << ' ' << (j + 1) << ':' << detail::format_double(v);
        out << '\n';
    }
}

inline void write_libsvm(const std::string& path, const CscMatrix& m,
                         const std::vector<double>* labels = nullptr) {
    std::ofstream out(path);
    if (!out) throw ParseError(0, "cannot open '" + path + "' for writing");
    write_libsvm(out, m, labels);
}

}  // namespace fraccd

#ifndef HWT_TEXT_IO_HPP
#define HWT_TEXT_IO_HPP

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"

namespace hwt
{

/// Shortest-safe round-trip formatting (17 significant digits).
inline std::string format_real(double v, int digits = 17)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

namespace detail
{

inline std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.emplace_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<std::string> split_ws(std::string_view s)
{
    std::vector<std::string> out;
    std::istringstream is{std::string(s)};
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline bool try_parse_real(std::string_view s, double& out)
{
    s = trim(s);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline double parse_real(std::string_view s, std::size_t line, const std::string& field)
{
    double v = 0.0;
    if (!try_parse_real(s, v)) {
        throw parse_error(line, field, "expected a real number, got '" + std::string(s) + "'");
    }
    return v;
}

inline std::size_t parse_count(std::string_view s, std::size_t line, const std::string& field)
{
    s = trim(s);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw parse_error(line, field, "expected a nonnegative integer, got '" + std::string(s) + "'");
    }
    return v;
}

} // namespace detail

/**
 *  Reads a CSV data matrix. The first row holds column ids. The first column
 *  holds row ids when its header cell is empty or "id", or when the first
 *  cell of the first data row is not numeric.
 */
inline DataMatrix read_csv(std::istream& in)
{
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (!detail::trim(line).empty()) {
            header = detail::split(line, ',');
            break;
        }
    }
    if (header.empty()) throw parse_error(lineno, "header", "missing header row");

    std::vector<std::string> row_ids;
    std::vector<double> vals;
    int has_row_ids = -1;
    std::size_t cols = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        auto cells = detail::split(line, ',');
        if (has_row_ids < 0) {
            double probe = 0.0;
            const auto h0 = detail::trim(header.front());
            const bool named = (h0.empty() || h0 == "id") && header.size() == cells.size();
            has_row_ids = named || !detail::try_parse_real(cells.front(), probe) ? 1 : 0;
            cols = cells.size() - static_cast<std::size_t>(has_row_ids);
            if (cols == 0) throw parse_error(lineno, "row", "no numeric columns");
        }
        if (cells.size() != cols + static_cast<std::size_t>(has_row_ids)) {
            throw parse_error(lineno, "row", "expected " + std::to_string(cols + has_row_ids)
                                                  + " cells, got " + std::to_string(cells.size()));
        }
        std::size_t first = 0;
        if (has_row_ids == 1) {
            row_ids.push_back(cells[0]);
            first = 1;
        }
        for (std::size_t j = first; j < cells.size(); ++j) {
            vals.push_back(detail::parse_real(cells[j], lineno, "column " + std::to_string(j + 1)));
        }
    }
    if (has_row_ids < 0) throw parse_error(lineno, "data", "no data rows");

    const std::size_t rows = vals.size() / cols;
    std::vector<std::string> col_ids;
    if (header.size() == cols + 1) {
        col_ids.assign(header.begin() + 1, header.end());
    } else if (header.size() == cols) {
        col_ids = header;
    } else {
        throw parse_error(1, "header", "header has " + std::to_string(header.size())
                                           + " cells for " + std::to_string(cols) + " columns");
    }
    if (row_ids.empty()) {
        for (std::size_t i = 0; i < rows; ++i) row_ids.push_back(std::to_string(i + 1));
    }
    return DataMatrix(Matrix(rows, cols, std::move(vals)), std::move(row_ids), std::move(col_ids));
}

inline DataMatrix read_csv_string(const std::string& text)
{
    std::istringstream is(text);
    return read_csv(is);
}

/// Writes row ids as the first column, reals at 17 significant digits.
inline void write_csv(std::ostream& out, const DataMatrix& x, int digits = 17)
{
    out << "id";
    for (const auto& c : x.col_ids) out << ',' << c;
    out << '\n';
    for (std::size_t i = 0; i < x.rows(); ++i) {
        out << x.row_ids[i];
        for (std::size_t j = 0; j < x.cols(); ++j) out << ',' << format_real(x.values(i, j), digits);
        out << '\n';
    }
}

} // namespace hwt
#endif // HWT_TEXT_IO_HPP

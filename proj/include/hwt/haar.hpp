#ifndef HWT_HAAR_HPP
#define HWT_HAAR_HPP

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "hierarchy.hpp"
#include "matrix.hpp"
#include "text_io.hpp"

namespace hwt
{

/**
 *  Left/right labelling of the two children of every internal node.
 *
 *  Two terminals: the smaller index is left. Two internal nodes: the smaller
 *  seq is left. A terminal against an internal node: the child holding the
 *  smaller terminal index is left. The detail of a node is half the left
 *  smooth minus the right smooth.
 */
using ChildPair = std::pair<NodeId, NodeId>;

inline std::vector<ChildPair> oriented_children(const Dendrogram& d)
{
    const auto lo = min_members(d);
    std::vector<ChildPair> out(d.merges.size() + 1);
    for (const auto& m : d.merges) {
        const NodeId a = m.left;
        const NodeId b = m.right;
        bool a_left = false;
        if (a.is_terminal() && b.is_terminal()) {
            a_left = a.index < b.index;
        } else if (a.is_internal() && b.is_internal()) {
            a_left = a.index < b.index;
        } else {
            const std::size_t la = a.is_terminal() ? a.index : lo[a.index];
            const std::size_t lb = b.is_terminal() ? b.index : lo[b.index];
            a_left = la < lb;
        }
        out[m.seq] = a_left ? ChildPair{a, b} : ChildPair{b, a};
    }
    return out;
}

/// Detail rows d(q_1)..d(q_{n-1}) plus the root smooth.
struct HaarDecomposition
{
    Matrix details; // (n-1) x m; row k-1 holds d(q_k)
    std::vector<double> final_smooth;
    Dendrogram dendrogram;
    std::vector<std::string> row_ids; // labels of the transformed rows, may be empty
    std::vector<std::string> col_ids;

    /// Name of the child-orientation rule used by oriented_children().
    static constexpr std::string_view orientation = "min-member-left";

    std::size_t n() const { return dendrogram.n; }
    std::size_t m() const { return final_smooth.size(); }

    /// Throws invalid_input when shapes disagree with the dendrogram.
    void check() const
    {
        require_wellformed(dendrogram);
        if (details.rows() + 1 != dendrogram.n || details.cols() != final_smooth.size()) {
            throw invalid_input("decomposition: detail matrix is " + std::to_string(details.rows()) + "x"
                                + std::to_string(details.cols()) + ", expected "
                                + std::to_string(dendrogram.n - 1) + "x"
                                + std::to_string(final_smooth.size()));
        }
    }

    friend bool operator==(const HaarDecomposition&, const HaarDecomposition&) = default;
};

/// Forward transform: smooths and details in increasing node order, O(n*m).
inline HaarDecomposition forward(const DataMatrix& x, const Dendrogram& d)
{
    require_wellformed(d);
    if (x.rows() != d.n) {
        throw invalid_input("forward: data has " + std::to_string(x.rows()) + " rows, dendrogram has "
                            + std::to_string(d.n) + " terminals");
    }
    const std::size_t m = x.cols();
    const auto kids = oriented_children(d);
    Matrix smooth(d.n - 1, m);
    HaarDecomposition h;
    h.details = Matrix(d.n - 1, m);
    h.dendrogram = d;
    h.row_ids = x.row_ids;
    h.col_ids = x.col_ids;

    auto smooth_of = [&](NodeId id) {
        return id.is_terminal() ? x.values.row(id.index - 1) : std::as_const(smooth).row(id.index - 1);
    };
    for (std::size_t k = 1; k < d.n; ++k) {
        const auto left = smooth_of(kids[k].first);
        const auto right = smooth_of(kids[k].second);
        auto s = smooth.row(k - 1);
        auto det = h.details.row(k - 1);
        for (std::size_t j = 0; j < m; ++j) {
            s[j] = 0.5 * (left[j] + right[j]);
            det[j] = 0.5 * (left[j] - right[j]);
        }
    }
    const auto root = smooth.row(d.n - 2);
    h.final_smooth.assign(root.begin(), root.end());
    return h;
}

namespace detail
{

/// Unfolds smooths from the root; returns internal smooths and fills `terminals`.
inline Matrix unfold(const HaarDecomposition& h, Matrix& terminals)
{
    const auto& d = h.dendrogram;
    const std::size_t m = h.m();
    const auto kids = oriented_children(d);
    Matrix smooth(d.n - 1, m);
    terminals = Matrix(d.n, m);
    std::copy(h.final_smooth.begin(), h.final_smooth.end(), smooth.row(d.n - 2).begin());
    auto target = [&](NodeId id) {
        return id.is_terminal() ? terminals.row(id.index - 1) : smooth.row(id.index - 1);
    };
    for (std::size_t k = d.n - 1; k >= 1; --k) {
        const auto s = std::as_const(smooth).row(k - 1);
        const auto det = h.details.row(k - 1);
        auto left = target(kids[k].first);
        auto right = target(kids[k].second);
        for (std::size_t j = 0; j < m; ++j) {
            left[j] = s[j] + det[j];
            right[j] = s[j] - det[j];
        }
    }
    return smooth;
}

} // namespace detail

/// Inverse transform; rows come back in original order.
inline DataMatrix inverse(const HaarDecomposition& h)
{
    h.check();
    Matrix rows;
    detail::unfold(h, rows);
    if (h.row_ids.size() == rows.rows() && h.col_ids.size() == rows.cols()) {
        return DataMatrix(std::move(rows), h.row_ids, h.col_ids);
    }
    return DataMatrix(std::move(rows));
}

/// Smooth s(node), recomputed by unfolding from the root.
inline std::vector<double> node_smooth(const HaarDecomposition& h, NodeId node)
{
    h.check();
    if (!h.dendrogram.contains(node)) throw not_found("node " + node.str() + " is not in the dendrogram");
    Matrix terminals;
    const Matrix internal = detail::unfold(h, terminals);
    const auto r = node.is_terminal() ? terminals.row(node.index - 1) : internal.row(node.index - 1);
    return {r.begin(), r.end()};
}

/// n x (n-1) branch code: +1 left subtree, -1 right subtree, 0 outside.
struct CharacteristicMatrix
{
    std::size_t n = 0;
    std::vector<std::int8_t> entries; // row-major n x (n-1)

    std::int8_t operator()(std::size_t i, std::size_t j) const { return entries[i * (n - 1) + j]; }
    std::int8_t& operator()(std::size_t i, std::size_t j) { return entries[i * (n - 1) + j]; }
    std::size_t rows() const { return n; }
    std::size_t cols() const { return n - 1; }
};

inline CharacteristicMatrix characteristic_matrix(const Dendrogram& d)
{
    require_wellformed(d);
    const auto kids = oriented_children(d);
    CharacteristicMatrix c{d.n, std::vector<std::int8_t>(d.n * (d.n - 1), 0)};
    for (std::size_t k = 1; k < d.n; ++k) {
        for (std::size_t i : cluster_members(d, kids[k].first)) c(i - 1, k - 1) = 1;
        for (std::size_t i : cluster_members(d, kids[k].second)) c(i - 1, k - 1) = -1;
    }
    return c;
}

/// X = C D + S, with the final smooth repeated on every row.
inline Matrix reconstruct_matrix_form(const CharacteristicMatrix& c, const Matrix& details,
                                      std::span<const double> final_smooth)
{
    if (c.n < 2 || details.rows() != c.cols() || details.cols() != final_smooth.size()) {
        throw invalid_input("reconstruct_matrix_form: shapes do not agree");
    }
    const std::size_t m = details.cols();
    Matrix x(c.n, m);
    for (std::size_t i = 0; i < c.n; ++i) {
        auto row = x.row(i);
        std::copy(final_smooth.begin(), final_smooth.end(), row.begin());
        for (std::size_t k = 0; k < c.cols(); ++k) {
            const int code = c(i, k);
            if (code == 0) continue;
            const auto det = details.row(k);
            for (std::size_t j = 0; j < m; ++j) row[j] += code * det[j];
        }
    }
    return x;
}

// ---------------------------------------------------------------------------
// Text form
//
//   hwt-decomposition
//   n <count>
//   m <width>
//   criterion <name>
//   orientation min-member-left
//   rows <id> ...            (optional)
//   cols <id> ...            (optional)
//   seq left right level d_1 .. d_m
//   1 1 2 0.5 <m reals>
//   ...
//   smooth <m reals>

namespace detail
{

inline std::string escape_label(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        if (ch == '%') out += "%25";
        else if (ch == ' ') out += "%20";
        else if (ch == '\t') out += "%09";
        else out += ch;
    }
    return out.empty() ? "%" : out;
}

inline std::string unescape_label(const std::string& s)
{
    if (s == "%") return {};
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size()) {
            const auto code = s.substr(i + 1, 2);
            if (code == "25") out += '%';
            else if (code == "20") out += ' ';
            else if (code == "09") out += '\t';
            else out += s.substr(i, 3);
            i += 2;
        } else {
            out += s[i];
        }
    }
    return out;
}

} // namespace detail

inline void write_decomposition(std::ostream& out, const HaarDecomposition& h)
{
    h.check();
    const auto& d = h.dendrogram;
    out << "hwt-decomposition\n"
        << "n " << d.n << '\n'
        << "m " << h.m() << '\n'
        << "criterion " << to_string(d.criterion) << '\n'
        << "orientation " << HaarDecomposition::orientation << '\n';
    if (h.row_ids.size() == d.n) {
        out << "rows";
        for (const auto& r : h.row_ids) out << ' ' << detail::escape_label(r);
        out << '\n';
    }
    if (h.col_ids.size() == h.m()) {
        out << "cols";
        for (const auto& c : h.col_ids) out << ' ' << detail::escape_label(c);
        out << '\n';
    }
    out << "seq left right level";
    for (std::size_t j = 1; j <= h.m(); ++j) out << " d_" << j;
    out << '\n';
    for (const auto& mstep : d.merges) {
        detail::write_merge_row(out, mstep);
        for (double v : h.details.row(mstep.seq - 1)) out << ' ' << format_real(v);
        out << '\n';
    }
    out << "smooth";
    for (double v : h.final_smooth) out << ' ' << format_real(v);
    out << '\n';
}

inline HaarDecomposition read_decomposition(std::istream& in)
{
    using detail::parse_count;
    using detail::parse_real;
    using detail::split_ws;

    std::string line;
    std::size_t lineno = 0;
    auto next = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            const auto t = detail::trim(line);
            if (!t.empty() && t.front() != '#') return true;
        }
        return false;
    };
    auto keyed = [&](const char* key) {
        if (!next()) throw parse_error(lineno, key, "unexpected end of input");
        auto f = split_ws(line);
        if (f.size() != 2 || f[0] != key) {
            throw parse_error(lineno, key, std::string("expected '") + key + " <value>'");
        }
        return f[1];
    };

    if (!next() || detail::trim(line) != "hwt-decomposition") {
        throw parse_error(lineno, "tag", "expected 'hwt-decomposition'");
    }
    HaarDecomposition h;
    auto& d = h.dendrogram;
    d.n = parse_count(keyed("n"), lineno, "n");
    if (d.n < 2) throw invalid_input("decomposition needs n >= 2");
    const std::size_t m = parse_count(keyed("m"), lineno, "m");
    if (m < 1) throw invalid_input("decomposition needs m >= 1");
    try {
        d.criterion = parse_criterion(keyed("criterion"));
    } catch (const invalid_input& e) {
        throw parse_error(lineno, "criterion", e.what());
    }
    if (keyed("orientation") != HaarDecomposition::orientation) {
        throw parse_error(lineno, "orientation", "unsupported orientation rule");
    }

    if (!next()) throw parse_error(lineno, "header", "unexpected end of input");
    auto f = split_ws(line);
    if (!f.empty() && f[0] == "rows") {
        if (f.size() != d.n + 1) throw parse_error(lineno, "rows", "expected " + std::to_string(d.n) + " labels");
        for (std::size_t i = 1; i < f.size(); ++i) h.row_ids.push_back(detail::unescape_label(f[i]));
        if (!next()) throw parse_error(lineno, "header", "unexpected end of input");
        f = split_ws(line);
    }
    if (!f.empty() && f[0] == "cols") {
        if (f.size() != m + 1) throw parse_error(lineno, "cols", "expected " + std::to_string(m) + " labels");
        for (std::size_t i = 1; i < f.size(); ++i) h.col_ids.push_back(detail::unescape_label(f[i]));
        if (!next()) throw parse_error(lineno, "header", "unexpected end of input");
        f = split_ws(line);
    }
    if (f.size() != 4 + m || f[0] != "seq") throw parse_error(lineno, "header", "bad column header");

    h.details = Matrix(d.n - 1, m);
    for (std::size_t k = 1; k < d.n; ++k) {
        if (!next()) throw parse_error(lineno, "row", "expected " + std::to_string(d.n - 1) + " detail rows");
        f = split_ws(line);
        if (f.size() != 4 + m) {
            throw parse_error(lineno, "row", "expected " + std::to_string(4 + m) + " fields, got "
                                                 + std::to_string(f.size()));
        }
        MergeStep s;
        s.seq = parse_count(f[0], lineno, "seq");
        if (s.seq != k) throw parse_error(lineno, "seq", "expected seq " + std::to_string(k));
        const auto l = parse_node_id(f[1]);
        const auto r = parse_node_id(f[2]);
        if (!l) throw parse_error(lineno, "left", "bad node reference '" + f[1] + "'");
        if (!r) throw parse_error(lineno, "right", "bad node reference '" + f[2] + "'");
        s.left = *l;
        s.right = *r;
        s.level = parse_real(f[3], lineno, "level");
        d.merges.push_back(s);
        for (std::size_t j = 0; j < m; ++j) {
            h.details(k - 1, j) = parse_real(f[4 + j], lineno, "d_" + std::to_string(j + 1));
        }
    }
    if (!next()) throw parse_error(lineno, "smooth", "missing smooth row");
    f = split_ws(line);
    if (f.size() != m + 1 || f[0] != "smooth") {
        throw parse_error(lineno, "smooth", "expected 'smooth' followed by " + std::to_string(m) + " reals");
    }
    for (std::size_t j = 0; j < m; ++j) h.final_smooth.push_back(parse_real(f[1 + j], lineno, "smooth"));
    h.check();
    return h;
}

inline std::string decomposition_to_string(const HaarDecomposition& h)
{
    std::ostringstream os;
    write_decomposition(os, h);
    return os.str();
}

inline HaarDecomposition decomposition_from_string(const std::string& s)
{
    std::istringstream is(s);
    return read_decomposition(is);
}

} // namespace hwt
#endif // HWT_HAAR_HPP

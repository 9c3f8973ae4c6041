#ifndef HWT_HIERARCHY_HPP
#define HWT_HIERARCHY_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"
#include "text_io.hpp"

namespace hwt
{

enum class Criterion
{
    ward,
    median,
    unweighted_average,
};

inline std::string_view to_string(Criterion c)
{
    switch (c) {
        case Criterion::ward: return "ward";
        case Criterion::median: return "median";
        case Criterion::unweighted_average: return "unweighted_average";
    }
    return "?";
}

inline Criterion parse_criterion(std::string_view s)
{
    if (s == "ward") return Criterion::ward;
    if (s == "median") return Criterion::median;
    if (s == "unweighted_average" || s == "average") return Criterion::unweighted_average;
    throw invalid_input("unknown criterion '" + std::string(s) + "'");
}

/**
 *  Reference to a dendrogram node. Terminals are numbered 1..n in row
 *  order; internal nodes q_1..q_{n-1} in merge order. Both indices are
 *  1-based, as in the text formats.
 */
struct NodeId
{
    enum class Kind : std::uint8_t
    {
        terminal,
        internal,
    };

    Kind kind = Kind::terminal;
    std::size_t index = 0;

    static constexpr NodeId terminal(std::size_t i) { return {Kind::terminal, i}; }
    static constexpr NodeId internal(std::size_t k) { return {Kind::internal, k}; }

    constexpr bool is_terminal() const { return kind == Kind::terminal; }
    constexpr bool is_internal() const { return kind == Kind::internal; }

    /// Label used by the tie-break rule: terminals 1..n, internals n+k.
    constexpr std::size_t label(std::size_t n) const { return is_terminal() ? index : n + index; }

    std::string str() const
    {
        return is_terminal() ? std::to_string(index) : "q" + std::to_string(index);
    }

    friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const NodeId& id) { return os << id.str(); }

/// Parses "7" or "q7". Returns nullopt on syntax error.
inline std::optional<NodeId> parse_node_id(std::string_view s)
{
    bool internal = false;
    if (!s.empty() && (s.front() == 'q' || s.front() == 'Q')) {
        internal = true;
        s.remove_prefix(1);
    }
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v == 0) return std::nullopt;
    return internal ? NodeId::internal(v) : NodeId::terminal(v);
}

struct MergeStep
{
    std::size_t seq = 0;
    NodeId left;
    NodeId right;
    double level = 0.0;

    friend bool operator==(const MergeStep&, const MergeStep&) = default;
};

/// Ranked binary rooted tree over n terminals; merges[k-1] creates q_k.
struct Dendrogram
{
    std::size_t n = 0;
    std::vector<MergeStep> merges;
    Criterion criterion = Criterion::ward;

    NodeId root() const { return NodeId::internal(n - 1); }
    const MergeStep& merge(std::size_t seq) const { return merges.at(seq - 1); }

    bool contains(NodeId id) const
    {
        if (id.index == 0) return false;
        return id.is_terminal() ? id.index <= n : id.index <= merges.size();
    }

    friend bool operator==(const Dendrogram&, const Dendrogram&) = default;
};

// ---------------------------------------------------------------------------
// Agglomerative clustering

namespace detail
{

/// Lance-Williams update of d(k, i+j) for the chosen criterion.
inline double lance_williams(Criterion c, double d_ki, double d_kj, double d_ij,
                             double n_i, double n_j, double n_k)
{
    switch (c) {
        case Criterion::ward:
            return ((n_i + n_k) * d_ki + (n_j + n_k) * d_kj - n_k * d_ij) / (n_i + n_j + n_k);
        case Criterion::median:
            return 0.5 * d_ki + 0.5 * d_kj - 0.25 * d_ij;
        case Criterion::unweighted_average:
            return 0.5 * d_ki + 0.5 * d_kj;
    }
    return 0.0;
}

} // namespace detail

/**
 *  Builds a ranked binary dendrogram by stored-dissimilarity agglomeration.
 *
 *  Ward and median work on squared Euclidean distances, unweighted average
 *  on plain Euclidean distances. Among equal minimum dissimilarities the pair
 *  with the lexicographically least (smaller label, larger label) is merged,
 *  where terminals are labelled 1..n and q_k is labelled n+k. Each MergeStep
 *  stores the smaller-labelled child as `left`.
 *
 *  A nearest-neighbour array keyed on labels keeps the typical cost at
 *  O(n^2) while preserving the exact tie-break.
 */
inline Dendrogram build_hierarchy(const DataMatrix& x, Criterion criterion)
{
    x.validate();
    const std::size_t n = x.rows();
    const bool squared = criterion != Criterion::unweighted_average;

    // Slot s starts as terminal s+1; merged clusters reuse the slot of their
    // smaller-labelled child.
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            double d = squared_distance(x.values.row(a), x.values.row(b));
            if (!squared) d = std::sqrt(d);
            dist[a * n + b] = dist[b * n + a] = d;
        }
    }
    auto D = [&](std::size_t a, std::size_t b) -> double& { return dist[a * n + b]; };

    std::vector<NodeId> node(n);
    std::vector<std::size_t> label(n);
    std::vector<double> size(n, 1.0);
    std::vector<bool> active(n, true);
    for (std::size_t s = 0; s < n; ++s) {
        node[s] = NodeId::terminal(s + 1);
        label[s] = s + 1;
    }

    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> nn(n, none);
    std::vector<double> nn_dist(n, std::numeric_limits<double>::infinity());

    // Best partner among active slots with a larger label; ties -> smallest label.
    auto refresh = [&](std::size_t a) {
        nn[a] = none;
        nn_dist[a] = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < n; ++b) {
            if (!active[b] || label[b] <= label[a]) continue;
            const double d = D(a, b);
            if (nn[a] == none || d < nn_dist[a] || (d == nn_dist[a] && label[b] < label[nn[a]])) {
                nn[a] = b;
                nn_dist[a] = d;
            }
        }
    };
    for (std::size_t a = 0; a < n; ++a) refresh(a);

    Dendrogram out;
    out.n = n;
    out.criterion = criterion;
    out.merges.reserve(n - 1);

    for (std::size_t k = 1; k < n; ++k) {
        std::size_t a = none;
        for (std::size_t s = 0; s < n; ++s) {
            if (!active[s] || nn[s] == none) continue;
            if (a == none || nn_dist[s] < nn_dist[a]
                || (nn_dist[s] == nn_dist[a]
                    && (label[s] < label[a]
                        || (label[s] == label[a] && label[nn[s]] < label[nn[a]])))) {
                a = s;
            }
        }
        const std::size_t b = nn[a];
        const double level = nn_dist[a];
        out.merges.push_back({k, node[a], node[b], level});

        const double d_ab = D(a, b);
        for (std::size_t s = 0; s < n; ++s) {
            if (!active[s] || s == a || s == b) continue;
            const double d = detail::lance_williams(criterion, D(s, a), D(s, b), d_ab,
                                                    size[a], size[b], size[s]);
            D(s, a) = D(a, s) = d;
        }
        active[b] = false;
        size[a] += size[b];
        node[a] = NodeId::internal(k);
        label[a] = n + k;

        // The merged cluster now carries the largest label, so it has no
        // partner of its own and is a candidate partner for everyone else.
        nn[a] = none;
        nn_dist[a] = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < n; ++s) {
            if (!active[s] || s == a) continue;
            if (nn[s] == a || nn[s] == b) {
                refresh(s);
            } else if (D(s, a) < nn_dist[s]) {
                nn[s] = a;
                nn_dist[s] = D(s, a);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structure queries

/// Terminal members of a node, 1-based and ascending.
inline std::vector<std::size_t> cluster_members(const Dendrogram& d, NodeId node)
{
    if (!d.contains(node)) throw not_found("node " + node.str() + " is not in the dendrogram");
    if (node.is_terminal()) return {node.index};
    std::vector<std::size_t> out;
    std::vector<NodeId> stack{node};
    while (!stack.empty()) {
        const NodeId cur = stack.back();
        stack.pop_back();
        if (cur.is_terminal()) {
            out.push_back(cur.index);
            continue;
        }
        if (cur.index > node.index || cur.index == 0) {
            throw invalid_input("dendrogram is not well formed below " + node.str());
        }
        const auto& m = d.merge(cur.index);
        stack.push_back(m.left);
        stack.push_back(m.right);
        if (stack.size() > 2 * d.n) throw invalid_input("dendrogram contains a cycle");
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Smallest terminal index under each internal node (index 0 unused).
inline std::vector<std::size_t> min_members(const Dendrogram& d)
{
    std::vector<std::size_t> lo(d.merges.size() + 1, 0);
    auto of = [&](NodeId id) { return id.is_terminal() ? id.index : lo[id.index]; };
    for (const auto& m : d.merges) lo[m.seq] = std::min(of(m.left), of(m.right));
    return lo;
}

/// Cluster size of each internal node (index 0 unused).
inline std::vector<std::size_t> cluster_sizes(const Dendrogram& d)
{
    std::vector<std::size_t> sz(d.merges.size() + 1, 0);
    auto of = [&](NodeId id) { return id.is_terminal() ? std::size_t{1} : sz[id.index]; };
    for (const auto& m : d.merges) sz[m.seq] = of(m.left) + of(m.right);
    return sz;
}

struct ValidationReport
{
    bool wellformed = true;
    std::vector<std::string> problems;   // structural diagnostics
    std::vector<std::size_t> inversions; // seqs k with level(q_k) < level(q_{k-1})

    bool ok() const { return wellformed; }
};

/**
 *  Checks tree structure and level monotonicity. Inversions are reported,
 *  not treated as errors. Never throws on malformed trees.
 */
inline ValidationReport validate(const Dendrogram& d)
{
    ValidationReport r;
    auto fail = [&](std::string msg) {
        r.wellformed = false;
        r.problems.push_back(std::move(msg));
    };
    if (d.n < 2) fail("n must be at least 2, got " + std::to_string(d.n));
    if (d.merges.size() + 1 != d.n) {
        fail("expected " + std::to_string(d.n > 0 ? d.n - 1 : 0) + " merges, got "
             + std::to_string(d.merges.size()));
    }

    std::vector<std::size_t> term_parent(d.n + 1, 0);
    std::vector<std::size_t> int_parent(d.merges.size() + 1, 0);
    for (std::size_t pos = 0; pos < d.merges.size(); ++pos) {
        const auto& m = d.merges[pos];
        const std::size_t k = pos + 1;
        if (m.seq != k) fail("merge " + std::to_string(k) + " has seq " + std::to_string(m.seq));
        if (m.left == m.right) fail("q" + std::to_string(k) + " merges " + m.left.str() + " with itself");
        if (!std::isfinite(m.level)) fail("q" + std::to_string(k) + " has a non-finite level");
        for (const NodeId& c : {m.left, m.right}) {
            if (c.is_terminal()) {
                if (c.index == 0 || c.index > d.n) {
                    fail("q" + std::to_string(k) + " references unknown terminal " + c.str());
                } else if (term_parent[c.index] != 0) {
                    fail("node " + c.str() + " used as a child twice (q"
                         + std::to_string(term_parent[c.index]) + " and q" + std::to_string(k) + ")");
                } else {
                    term_parent[c.index] = k;
                }
            } else {
                if (c.index == 0 || c.index >= k) {
                    fail("q" + std::to_string(k) + " references " + c.str()
                         + ", which is not an earlier merge");
                } else if (int_parent[c.index] != 0) {
                    fail("node " + c.str() + " used as a child twice (q"
                         + std::to_string(int_parent[c.index]) + " and q" + std::to_string(k) + ")");
                } else {
                    int_parent[c.index] = k;
                }
            }
        }
        if (k > 1 && m.level < d.merges[pos - 1].level) r.inversions.push_back(k);
    }
    for (std::size_t i = 1; i <= d.n; ++i) {
        if (term_parent[i] == 0) fail("terminal " + std::to_string(i) + " is never merged");
    }
    for (std::size_t k = 1; k + 1 <= d.merges.size(); ++k) {
        if (int_parent[k] == 0) fail("q" + std::to_string(k) + " is never merged and is not the root");
    }
    return r;
}

/// Throws invalid_input with the first diagnostic if `d` is not a tree.
inline void require_wellformed(const Dendrogram& d)
{
    const auto r = validate(d);
    if (!r.wellformed) throw invalid_input("invalid dendrogram: " + r.problems.front());
}

// ---------------------------------------------------------------------------
// Text form
//
//   hwt-dendrogram
//   n <count>
//   criterion <ward|median|unweighted_average>
//   seq left right level [extra columns...]
//   1 1 2 0.5
//   2 q1 3 1.25
//   ...

namespace detail
{

inline void write_merge_header(std::ostream& out, std::string_view tag, const Dendrogram& d,
                               std::string_view extra_columns)
{
    out << tag << '\n' << "n " << d.n << '\n' << "criterion " << to_string(d.criterion) << '\n';
    out << "seq left right level" << extra_columns << '\n';
}

inline void write_merge_row(std::ostream& out, const MergeStep& m)
{
    out << m.seq << ' ' << m.left.str() << ' ' << m.right.str() << ' ' << format_real(m.level);
}

/// Reads the shared merge-table layout; extra per-row fields are returned.
inline Dendrogram read_merge_table(std::istream& in, std::string_view tag, std::size_t extra,
                                   std::vector<std::vector<std::string>>* extra_out,
                                   std::vector<std::size_t>* lines_out = nullptr)
{
    std::string line;
    std::size_t lineno = 0;
    auto next = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            const auto t = trim(line);
            if (!t.empty() && t.front() != '#') return true;
        }
        return false;
    };
    if (!next() || trim(line) != tag) {
        throw parse_error(lineno, "tag", "expected '" + std::string(tag) + "'");
    }
    Dendrogram d;
    if (!next()) throw parse_error(lineno, "n", "missing n");
    auto f = split_ws(line);
    if (f.size() != 2 || f[0] != "n") throw parse_error(lineno, "n", "expected 'n <count>'");
    d.n = parse_count(f[1], lineno, "n");
    if (d.n < 2) throw invalid_input("dendrogram needs n >= 2, got " + std::to_string(d.n));

    if (!next()) throw parse_error(lineno, "criterion", "missing criterion");
    f = split_ws(line);
    if (f.size() != 2 || f[0] != "criterion") {
        throw parse_error(lineno, "criterion", "expected 'criterion <name>'");
    }
    try {
        d.criterion = parse_criterion(f[1]);
    } catch (const invalid_input& e) {
        throw parse_error(lineno, "criterion", e.what());
    }
    if (!next()) throw parse_error(lineno, "header", "missing column header");
    f = split_ws(line);
    if (f.size() < 4 || f[0] != "seq") throw parse_error(lineno, "header", "expected 'seq left right level'");

    while (next()) {
        f = split_ws(line);
        if (f.size() != 4 + extra) {
            throw parse_error(lineno, "row", "expected " + std::to_string(4 + extra) + " fields, got "
                                                 + std::to_string(f.size()));
        }
        MergeStep m;
        m.seq = parse_count(f[0], lineno, "seq");
        const auto l = parse_node_id(f[1]);
        if (!l) throw parse_error(lineno, "left", "bad node reference '" + f[1] + "'");
        const auto r = parse_node_id(f[2]);
        if (!r) throw parse_error(lineno, "right", "bad node reference '" + f[2] + "'");
        m.left = *l;
        m.right = *r;
        m.level = parse_real(f[3], lineno, "level");
        if (m.seq != d.merges.size() + 1) {
            throw parse_error(lineno, "seq", "expected seq " + std::to_string(d.merges.size() + 1));
        }
        d.merges.push_back(m);
        if (extra_out) extra_out->emplace_back(f.begin() + 4, f.end());
        if (lines_out) lines_out->push_back(lineno);
    }
    if (d.merges.size() != d.n - 1) {
        throw parse_error(lineno, "row", "expected " + std::to_string(d.n - 1) + " merges, got "
                                             + std::to_string(d.merges.size()));
    }
    return d;
}

} // namespace detail

inline void write_dendrogram(std::ostream& out, const Dendrogram& d)
{
    detail::write_merge_header(out, "hwt-dendrogram", d, "");
    for (const auto& m : d.merges) {
        detail::write_merge_row(out, m);
        out << '\n';
    }
}

/// Parses and validates; structural defects surface as invalid_input.
inline Dendrogram read_dendrogram(std::istream& in)
{
    auto d = detail::read_merge_table(in, "hwt-dendrogram", 0, nullptr);
    require_wellformed(d);
    return d;
}

inline std::string dendrogram_to_string(const Dendrogram& d)
{
    std::ostringstream os;
    write_dendrogram(os, d);
    return os.str();
}

inline Dendrogram dendrogram_from_string(const std::string& s)
{
    std::istringstream is(s);
    return read_dendrogram(is);
}

} // namespace hwt
#endif // HWT_HIERARCHY_HPP

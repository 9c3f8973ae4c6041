#ifndef HWT_CONDENSE_HPP
#define HWT_CONDENSE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "haar.hpp"
#include "hierarchy.hpp"
#include "matrix.hpp"
#include "random.hpp"
#include "text_io.hpp"

namespace hwt
{

/// Euclidean norm of each detail row, in seq order.
inline std::vector<double> detail_norms(const HaarDecomposition& h)
{
    std::vector<double> out(h.details.rows());
    for (std::size_t k = 0; k < out.size(); ++k) {
        double s = 0.0;
        for (double v : h.details.row(k)) s += v * v;
        out[k] = std::sqrt(s);
    }
    return out;
}

/// Dendrogram whose collapsed nodes share the level of the preceding merge.
struct CondensedHierarchy
{
    Dendrogram base;
    std::vector<double> adjusted_levels; // index k-1 holds q_k
    std::set<std::size_t> collapsed;     // seqs

    bool is_collapsed(std::size_t seq) const { return collapsed.count(seq) != 0; }

    friend bool operator==(const CondensedHierarchy&, const CondensedHierarchy&) = default;
};

namespace detail
{

inline std::vector<double> adjust_levels(const Dendrogram& d, const std::set<std::size_t>& collapsed)
{
    std::vector<double> lv(d.merges.size());
    for (std::size_t k = 1; k <= lv.size(); ++k) {
        if (!collapsed.count(k)) {
            lv[k - 1] = d.merge(k).level;
        } else {
            lv[k - 1] = k == 1 ? 0.0 : lv[k - 2];
        }
    }
    return lv;
}

} // namespace detail

struct CondenseResult
{
    CondensedHierarchy hierarchy;
    HaarDecomposition filtered; // collapsed detail rows set to zero
};

/// Collapses every node whose detail norm is strictly below tau.
inline CondenseResult condense(const HaarDecomposition& h, double tau)
{
    if (!(tau >= 0.0)) throw invalid_input("tau must be nonnegative");
    h.check();
    CondenseResult r{{h.dendrogram, {}, {}}, h};
    const auto norms = detail_norms(h);
    for (std::size_t k = 1; k <= norms.size(); ++k) {
        if (norms[k - 1] < tau) {
            r.hierarchy.collapsed.insert(k);
            for (double& v : r.filtered.details.row(k - 1)) v = 0.0;
        }
    }
    r.hierarchy.adjusted_levels = detail::adjust_levels(h.dendrogram, r.hierarchy.collapsed);
    return r;
}

/// A set of disjoint clusters covering terminals 1..n; members ascending,
/// clusters ordered by their smallest member.
using Partition = std::vector<std::vector<std::size_t>>;

struct LevelPartition
{
    double level = 0.0;
    Partition clusters;
};

namespace detail
{

class DisjointSets
{
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t i)
    {
        while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
        return i;
    }

    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

inline Partition snapshot(DisjointSets& sets, std::size_t n)
{
    std::vector<std::size_t> slot(n, SIZE_MAX);
    Partition p;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = sets.find(i);
        if (slot[r] == SIZE_MAX) {
            slot[r] = p.size();
            p.emplace_back();
        }
        p[slot[r]].push_back(i + 1);
    }
    return p;
}

} // namespace detail

/// One partition per distinct adjusted level, ascending; each applies every
/// merge whose adjusted level is at or below that level.
inline std::vector<LevelPartition> unique_partitions(const CondensedHierarchy& c)
{
    const Dendrogram& d = c.base;
    require_wellformed(d);
    if (c.adjusted_levels.size() != d.merges.size()) {
        throw invalid_input("condensed hierarchy: adjusted levels do not match the merges");
    }
    const auto lo = min_members(d);
    auto rep = [&](NodeId id) { return (id.is_terminal() ? id.index : lo[id.index]) - 1; };

    std::vector<std::size_t> order(d.merges.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return c.adjusted_levels[a] < c.adjusted_levels[b]; });

    detail::DisjointSets sets(d.n);
    std::vector<LevelPartition> out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& m = d.merges[order[i]];
        sets.unite(rep(m.left), rep(m.right));
        const double lv = c.adjusted_levels[order[i]];
        if (i + 1 == order.size() || c.adjusted_levels[order[i + 1]] != lv) {
            out.push_back({lv, detail::snapshot(sets, d.n)});
        }
    }
    return out;
}

namespace detail
{

inline void require_partition(const Matrix& x, const Partition& p)
{
    std::vector<char> seen(x.rows(), 0);
    std::size_t count = 0;
    for (const auto& cl : p) {
        if (cl.empty()) throw invalid_input("partition contains an empty cluster");
        for (std::size_t i : cl) {
            if (i == 0 || i > x.rows()) throw invalid_input("partition references row " + std::to_string(i));
            if (seen[i - 1]) throw invalid_input("row " + std::to_string(i) + " appears twice in the partition");
            seen[i - 1] = 1;
            ++count;
        }
    }
    if (count != x.rows()) throw invalid_input("partition does not cover every row");
}

/// Sum of squared distances of members to their centroid; members are 1-based.
inline double cluster_ss(const Matrix& x, const std::vector<std::size_t>& members)
{
    const std::size_t m = x.cols();
    std::vector<double> c(m, 0.0);
    for (std::size_t i : members) {
        for (std::size_t j = 0; j < m; ++j) c[j] += x(i - 1, j);
    }
    for (double& v : c) v /= static_cast<double>(members.size());
    double s = 0.0;
    for (std::size_t i : members) s += squared_distance(x.row(i - 1), c);
    return s;
}

} // namespace detail

/// Within-cluster sum of squares about the cluster centroids.
inline double partition_ss(const Matrix& x, const Partition& p)
{
    detail::require_partition(x, p);
    double s = 0.0;
    for (const auto& cl : p) s += detail::cluster_ss(x, cl);
    return s;
}

/// Mean over clusters of the per-member squared distance to the centroid.
inline double average_cluster_variance(const Matrix& x, const Partition& p)
{
    detail::require_partition(x, p);
    double s = 0.0;
    for (const auto& cl : p) s += detail::cluster_ss(x, cl) / static_cast<double>(cl.size());
    return s / static_cast<double>(p.size());
}

struct KMeansResult
{
    std::vector<std::size_t> assignment; // cluster index per row, clusters labelled by smallest member
    Partition clusters;
    double ss = 0.0;
};

namespace detail
{

inline std::vector<double> centroid(const Matrix& x, const std::vector<std::size_t>& assign, std::size_t c)
{
    std::vector<double> out(x.cols(), 0.0);
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        if (assign[i] != c) continue;
        ++cnt;
        for (std::size_t j = 0; j < x.cols(); ++j) out[j] += x(i, j);
    }
    for (double& v : out) v /= static_cast<double>(cnt);
    return out;
}

/**
 *  One k-means run from the given seed rows: nearest-centre assignment, then
 *  Hartigan single-point transfers until no move lowers the within-cluster SS.
 */
inline std::vector<std::size_t> kmeans_run(const Matrix& x, const std::vector<std::size_t>& seeds)
{
    const std::size_t n = x.rows();
    const std::size_t m = x.cols();
    const std::size_t k = seeds.size();
    std::vector<std::vector<double>> centre(k);
    for (std::size_t c = 0; c < k; ++c) centre[c].assign(x.row(seeds[c]).begin(), x.row(seeds[c]).end());

    std::vector<std::size_t> assign(n);
    std::vector<std::size_t> size(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            const double dd = squared_distance(x.row(i), centre[c]);
            if (dd < bd) {
                bd = dd;
                best = c;
            }
        }
        assign[i] = best;
    }
    // seed rows always own their cluster, so duplicated seeds never leave one empty
    for (std::size_t c = 0; c < k; ++c) assign[seeds[c]] = c;
    for (std::size_t i = 0; i < n; ++i) ++size[assign[i]];
    for (std::size_t c = 0; c < k; ++c) centre[c] = centroid(x, assign, c);

    const double tol = 1e-12;
    bool moved = true;
    for (std::size_t sweep = 0; moved && sweep < 1000; ++sweep) {
        moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t a = assign[i];
            if (size[a] < 2) continue;
            const double na = static_cast<double>(size[a]);
            const double loss = na / (na - 1.0) * squared_distance(x.row(i), centre[a]);
            std::size_t best = a;
            double gain = loss;
            for (std::size_t c = 0; c < k; ++c) {
                if (c == a) continue;
                const double nc = static_cast<double>(size[c]);
                const double add = nc / (nc + 1.0) * squared_distance(x.row(i), centre[c]);
                if (add < gain) {
                    gain = add;
                    best = c;
                }
            }
            if (best == a || loss - gain <= tol * (1.0 + loss)) continue;
            const double nb = static_cast<double>(size[best]);
            for (std::size_t j = 0; j < m; ++j) {
                const double v = x(i, j);
                centre[a][j] = (centre[a][j] * na - v) / (na - 1.0);
                centre[best][j] = (centre[best][j] * nb + v) / (nb + 1.0);
            }
            --size[a];
            ++size[best];
            assign[i] = best;
            moved = true;
        }
    }
    return assign;
}

inline Partition to_partition(const std::vector<std::size_t>& assign, std::size_t k)
{
    Partition p(k);
    for (std::size_t i = 0; i < assign.size(); ++i) p[assign[i]].push_back(i + 1);
    std::erase_if(p, [](const auto& cl) { return cl.empty(); });
    std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return p;
}

} // namespace detail

/// Best of `restarts` runs, each seeded with k distinct random rows. Equal SS keeps the earlier run.
inline KMeansResult kmeans(const Matrix& x, std::size_t k, std::uint64_t seed, std::size_t restarts = 20)
{
    const std::size_t n = x.rows();
    if (k < 1 || k > n) {
        throw invalid_input("k must be between 1 and " + std::to_string(n) + ", got " + std::to_string(k));
    }
    if (restarts < 1) throw invalid_input("restarts must be positive");
    Rng rng(seed);
    KMeansResult best;
    best.ss = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pool(n);
    for (std::size_t r = 0; r < restarts; ++r) {
        std::iota(pool.begin(), pool.end(), 0);
        for (std::size_t c = 0; c < k; ++c) {
            const auto j = c + static_cast<std::size_t>(rng.index(n - c));
            std::swap(pool[c], pool[j]);
        }
        const std::vector<std::size_t> seeds(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
        auto clusters = detail::to_partition(detail::kmeans_run(x, seeds), k);
        const double ss = partition_ss(x, clusters);
        if (ss < best.ss) {
            best.ss = ss;
            best.clusters = std::move(clusters);
        }
        if (k == 1 || k == n) break; // single optimum
    }
    best.assignment.assign(n, 0);
    for (std::size_t c = 0; c < best.clusters.size(); ++c) {
        for (std::size_t i : best.clusters[c]) best.assignment[i - 1] = c;
    }
    return best;
}

struct BenchmarkRow
{
    double level = 0.0;
    double multiway_ss = 0.0;
    std::size_t cardinality = 0;
    double kmeans_ss = 0.0;
};

/// Each unique partition against k-means with the same number of clusters.
inline std::vector<BenchmarkRow> benchmark(const CondensedHierarchy& c, const Matrix& x, std::uint64_t seed,
                                           std::size_t restarts = 20)
{
    if (x.rows() != c.base.n) throw invalid_input("benchmark: data rows do not match the hierarchy");
    std::vector<BenchmarkRow> rows;
    for (const auto& p : unique_partitions(c)) {
        const std::size_t k = p.clusters.size();
        rows.push_back({p.level, partition_ss(x, p.clusters), k, kmeans(x, k, seed, restarts).ss});
    }
    return rows;
}

inline void write_benchmark_tsv(std::ostream& out, const std::vector<BenchmarkRow>& rows)
{
    out << "level\tmultiway_ss\tcardinality\tkmeans_ss\n";
    for (const auto& r : rows) {
        out << format_real(r.level, 10) << '\t' << format_real(r.multiway_ss, 10) << '\t' << r.cardinality
            << '\t' << format_real(r.kmeans_ss, 10) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Text form: the dendrogram layout under its own tag, with two extra columns.
//
//   hwt-condensed
//   n 5
//   criterion ward
//   seq left right level adjusted_level collapsed
//   1 1 2 0.5 0 true

inline void write_condensed(std::ostream& out, const CondensedHierarchy& c)
{
    detail::write_merge_header(out, "hwt-condensed", c.base, " adjusted_level collapsed");
    for (const auto& m : c.base.merges) {
        detail::write_merge_row(out, m);
        out << ' ' << format_real(c.adjusted_levels.at(m.seq - 1)) << ' '
            << (c.is_collapsed(m.seq) ? "true" : "false") << '\n';
    }
}

inline CondensedHierarchy read_condensed(std::istream& in)
{
    std::vector<std::vector<std::string>> extra;
    std::vector<std::size_t> lines;
    CondensedHierarchy c;
    c.base = detail::read_merge_table(in, "hwt-condensed", 2, &extra, &lines);
    require_wellformed(c.base);
    for (std::size_t k = 1; k <= extra.size(); ++k) {
        const auto& f = extra[k - 1];
        double lv = 0.0;
        if (!detail::try_parse_real(f[0], lv)) {
            throw parse_error(lines[k - 1], "adjusted_level", "bad level '" + f[0] + "'");
        }
        c.adjusted_levels.push_back(lv);
        if (f[1] == "true") {
            c.collapsed.insert(k);
        } else if (f[1] != "false") {
            throw parse_error(lines[k - 1], "collapsed", "expected true or false");
        }
    }
    if (c.adjusted_levels != detail::adjust_levels(c.base, c.collapsed)) {
        throw invalid_input("condensed hierarchy: adjusted levels disagree with the collapsed set");
    }
    return c;
}

inline std::string condensed_to_string(const CondensedHierarchy& c)
{
    std::ostringstream os;
    write_condensed(os, c);
    return os.str();
}

inline CondensedHierarchy condensed_from_string(const std::string& s)
{
    std::istringstream is(s);
    return read_condensed(is);
}

} // namespace hwt
#endif // HWT_CONDENSE_HPP

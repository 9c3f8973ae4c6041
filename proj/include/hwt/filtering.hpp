#ifndef HWT_FILTERING_HPP
#define HWT_FILTERING_HPP

#include <algorithm>
#include <cmath>
#include <ostream>
#include <span>
#include <vector>

#include "error.hpp"
#include "haar.hpp"
#include "hierarchy.hpp"
#include "matrix.hpp"
#include "text_io.hpp"

namespace hwt
{

struct ThresholdResult
{
    HaarDecomposition filtered;
    std::size_t zero_count = 0; // detail entries equal to 0 after thresholding
    double pct_zero = 0.0;      // over all (n-1)*m detail entries
};

/// Hard threshold: every detail entry with |d| <= t becomes 0. The final smooth is kept.
inline ThresholdResult hard_threshold(const HaarDecomposition& h, double t)
{
    if (!(t >= 0.0)) throw invalid_input("threshold must be nonnegative");
    ThresholdResult r{h, 0, 0.0};
    for (double& v : r.filtered.details.values()) {
        if (std::abs(v) <= t) v = 0.0;
        if (v == 0.0) ++r.zero_count;
    }
    const auto total = r.filtered.details.size();
    r.pct_zero = total ? 100.0 * static_cast<double>(r.zero_count) / static_cast<double>(total) : 0.0;
    return r;
}

/// Mean energy 1/(nm) * sum x^2.
inline double energy(const Matrix& x)
{
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x.values()) s += v * v;
    return s / static_cast<double>(x.size());
}

inline double energy(const DataMatrix& x) { return energy(x.values); }

enum class MseMode
{
    per_observation, // (1/n) sum (xhat - x)^2
    per_entry,       // (1/(nm)) sum (xhat - x)^2
    relative,        // sum (xhat - x)^2 / sum x^2
};

inline double mse(const Matrix& x, const Matrix& xhat, MseMode mode)
{
    if (x.rows() != xhat.rows() || x.cols() != xhat.cols()) throw invalid_input("mse: shape mismatch");
    double err = 0.0;
    double ref = 0.0;
    auto a = x.values();
    auto b = xhat.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = b[i] - a[i];
        err += d * d;
        ref += a[i] * a[i];
    }
    switch (mode) {
        case MseMode::per_observation: return x.rows() ? err / static_cast<double>(x.rows()) : 0.0;
        case MseMode::per_entry: return x.size() ? err / static_cast<double>(x.size()) : 0.0;
        case MseMode::relative:
            if (ref == 0.0) throw invalid_input("relative mse: reference data is all zero");
            return err / ref;
    }
    return 0.0;
}

inline double mse(const DataMatrix& x, const DataMatrix& xhat, MseMode mode)
{
    return mse(x.values, xhat.values, mode);
}

struct SmoothStats
{
    double threshold = 0.0;
    std::size_t zero_count = 0;
    double pct_zero = 0.0;
    double mse_per_observation = 0.0;
    double mse_per_entry = 0.0;
    double mse_relative = 0.0; // NaN when the input is all zero
    double energy = 0.0;
};

struct SmoothResult
{
    DataMatrix reconstruction;
    SmoothStats stats;
};

namespace detail
{

inline SmoothResult filter_decomposition(const DataMatrix& x, const HaarDecomposition& h, double t)
{
    auto thr = hard_threshold(h, t);
    SmoothResult r{inverse(thr.filtered), {}};
    auto& s = r.stats;
    s.threshold = t;
    s.zero_count = thr.zero_count;
    s.pct_zero = thr.pct_zero;
    s.mse_per_observation = mse(x, r.reconstruction, MseMode::per_observation);
    s.mse_per_entry = mse(x, r.reconstruction, MseMode::per_entry);
    s.energy = energy(x);
    s.mse_relative = s.energy > 0.0 ? mse(x, r.reconstruction, MseMode::relative) : std::nan("");
    return r;
}

} // namespace detail

/// Cluster, transform, hard-threshold at t, reconstruct.
inline SmoothResult smooth_pipeline(const DataMatrix& x, Criterion criterion, double t)
{
    if (!(t >= 0.0)) throw invalid_input("threshold must be nonnegative");
    return detail::filter_decomposition(x, forward(x, build_hierarchy(x, criterion)), t);
}

struct SweepRow
{
    double threshold = 0.0;
    double pct_zero = 0.0;
    double mse = 0.0; // per entry
};

/// One row per threshold; the hierarchy and transform are computed once.
inline std::vector<SweepRow> threshold_sweep(const DataMatrix& x, Criterion criterion,
                                             std::span<const double> thresholds)
{
    for (double t : thresholds) {
        if (!(t >= 0.0)) throw invalid_input("thresholds must be nonnegative");
    }
    std::vector<SweepRow> rows;
    if (thresholds.empty()) return rows;
    const auto h = forward(x, build_hierarchy(x, criterion));
    for (double t : thresholds) {
        const auto r = detail::filter_decomposition(x, h, t);
        rows.push_back({t, r.stats.pct_zero, r.stats.mse_per_entry});
    }
    return rows;
}

inline void write_sweep_tsv(std::ostream& out, std::span<const SweepRow> rows)
{
    out << "threshold\tpct_zero\tmse\n";
    for (const auto& r : rows) {
        out << format_real(r.threshold, 6) << '\t' << format_real(r.pct_zero, 6) << '\t'
            << format_real(r.mse, 6) << '\n';
    }
}

/// Median of all entries; even counts take the midpoint of the central pair.
inline double global_median(const Matrix& x)
{
    if (x.empty()) throw invalid_input("median of an empty matrix");
    std::vector<double> v(x.values().begin(), x.values().end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

enum class BaselineRule
{
    at_or_below,    // zero x <= median
    strictly_below, // zero x < median
};

struct BaselineResult
{
    DataMatrix filtered;
    double median = 0.0;
    double mse_per_entry = 0.0;
    double mse_per_observation = 0.0;
};

/// Direct filtering without a hierarchy: zero entries at or below the global median.
inline BaselineResult median_baseline(const DataMatrix& x, BaselineRule rule = BaselineRule::at_or_below)
{
    BaselineResult r{x, global_median(x.values), 0.0, 0.0};
    for (double& v : r.filtered.values.values()) {
        const bool drop = rule == BaselineRule::at_or_below ? v <= r.median : v < r.median;
        if (drop) v = 0.0;
    }
    r.mse_per_entry = mse(x, r.filtered, MseMode::per_entry);
    r.mse_per_observation = mse(x, r.filtered, MseMode::per_observation);
    return r;
}

} // namespace hwt
#endif // HWT_FILTERING_HPP

#ifndef HWT_DATASETS_HPP
#define HWT_DATASETS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"
#include "random.hpp"

namespace hwt
{

/// Fisher's iris measurements, 150 x 4, in the usual distribution order.
inline DataMatrix iris()
{
    static const std::vector<double> values = {
        5.1, 3.5, 1.4, 0.2,
        4.9, 3.0, 1.4, 0.2,
        4.7, 3.2, 1.3, 0.2,
        4.6, 3.1, 1.5, 0.2,
        5.0, 3.6, 1.4, 0.2,
        5.4, 3.9, 1.7, 0.4,
        4.6, 3.4, 1.4, 0.3,
        5.0, 3.4, 1.5, 0.2,
        4.4, 2.9, 1.4, 0.2,
        4.9, 3.1, 1.5, 0.1,
        5.4, 3.7, 1.5, 0.2,
        4.8, 3.4, 1.6, 0.2,
        4.8, 3.0, 1.4, 0.1,
        4.3, 3.0, 1.1, 0.1,
        5.8, 4.0, 1.2, 0.2,
        5.7, 4.4, 1.5, 0.4,
        5.4, 3.9, 1.3, 0.4,
        5.1, 3.5, 1.4, 0.3,
        5.7, 3.8, 1.7, 0.3,
        5.1, 3.8, 1.5, 0.3,
        5.4, 3.4, 1.7, 0.2,
        5.1, 3.7, 1.5, 0.4,
        4.6, 3.6, 1.0, 0.2,
        5.1, 3.3, 1.7, 0.5,
        4.8, 3.4, 1.9, 0.2,
        5.0, 3.0, 1.6, 0.2,
        5.0, 3.4, 1.6, 0.4,
        5.2, 3.5, 1.5, 0.2,
        5.2, 3.4, 1.4, 0.2,
        4.7, 3.2, 1.6, 0.2,
        4.8, 3.1, 1.6, 0.2,
        5.4, 3.4, 1.5, 0.4,
        5.2, 4.1, 1.5, 0.1,
        5.5, 4.2, 1.4, 0.2,
        4.9, 3.1, 1.5, 0.2,
        5.0, 3.2, 1.2, 0.2,
        5.5, 3.5, 1.3, 0.2,
        4.9, 3.6, 1.4, 0.1,
        4.4, 3.0, 1.3, 0.2,
        5.1, 3.4, 1.5, 0.2,
        5.0, 3.5, 1.3, 0.3,
        4.5, 2.3, 1.3, 0.3,
        4.4, 3.2, 1.3, 0.2,
        5.0, 3.5, 1.6, 0.6,
        5.1, 3.8, 1.9, 0.4,
        4.8, 3.0, 1.4, 0.3,
        5.1, 3.8, 1.6, 0.2,
        4.6, 3.2, 1.4, 0.2,
        5.3, 3.7, 1.5, 0.2,
        5.0, 3.3, 1.4, 0.2,
        7.0, 3.2, 4.7, 1.4,
        6.4, 3.2, 4.5, 1.5,
        6.9, 3.1, 4.9, 1.5,
        5.5, 2.3, 4.0, 1.3,
        6.5, 2.8, 4.6, 1.5,
        5.7, 2.8, 4.5, 1.3,
        6.3, 3.3, 4.7, 1.6,
        4.9, 2.4, 3.3, 1.0,
        6.6, 2.9, 4.6, 1.3,
        5.2, 2.7, 3.9, 1.4,
        5.0, 2.0, 3.5, 1.0,
        5.9, 3.0, 4.2, 1.5,
        6.0, 2.2, 4.0, 1.0,
        6.1, 2.9, 4.7, 1.4,
        5.6, 2.9, 3.6, 1.3,
        6.7, 3.1, 4.4, 1.4,
        5.6, 3.0, 4.5, 1.5,
        5.8, 2.7, 4.1, 1.0,
        6.2, 2.2, 4.5, 1.5,
        5.6, 2.5, 3.9, 1.1,
        5.9, 3.2, 4.8, 1.8,
        6.1, 2.8, 4.0, 1.3,
        6.3, 2.5, 4.9, 1.5,
        6.1, 2.8, 4.7, 1.2,
        6.4, 2.9, 4.3, 1.3,
        6.6, 3.0, 4.4, 1.4,
        6.8, 2.8, 4.8, 1.4,
        6.7, 3.0, 5.0, 1.7,
        6.0, 2.9, 4.5, 1.5,
        5.7, 2.6, 3.5, 1.0,
        5.5, 2.4, 3.8, 1.1,
        5.5, 2.4, 3.7, 1.0,
        5.8, 2.7, 3.9, 1.2,
        6.0, 2.7, 5.1, 1.6,
        5.4, 3.0, 4.5, 1.5,
        6.0, 3.4, 4.5, 1.6,
        6.7, 3.1, 4.7, 1.5,
        6.3, 2.3, 4.4, 1.3,
        5.6, 3.0, 4.1, 1.3,
        5.5, 2.5, 4.0, 1.3,
        5.5, 2.6, 4.4, 1.2,
        6.1, 3.0, 4.6, 1.4,
        5.8, 2.6, 4.0, 1.2,
        5.0, 2.3, 3.3, 1.0,
        5.6, 2.7, 4.2, 1.3,
        5.7, 3.0, 4.2, 1.2,
        5.7, 2.9, 4.2, 1.3,
        6.2, 2.9, 4.3, 1.3,
        5.1, 2.5, 3.0, 1.1,
        5.7, 2.8, 4.1, 1.3,
        6.3, 3.3, 6.0, 2.5,
        5.8, 2.7, 5.1, 1.9,
        7.1, 3.0, 5.9, 2.1,
        6.3, 2.9, 5.6, 1.8,
        6.5, 3.0, 5.8, 2.2,
        7.6, 3.0, 6.6, 2.1,
        4.9, 2.5, 4.5, 1.7,
        7.3, 2.9, 6.3, 1.8,
        6.7, 2.5, 5.8, 1.8,
        7.2, 3.6, 6.1, 2.5,
        6.5, 3.2, 5.1, 2.0,
        6.4, 2.7, 5.3, 1.9,
        6.8, 3.0, 5.5, 2.1,
        5.7, 2.5, 5.0, 2.0,
        5.8, 2.8, 5.1, 2.4,
        6.4, 3.2, 5.3, 2.3,
        6.5, 3.0, 5.5, 1.8,
        7.7, 3.8, 6.7, 2.2,
        7.7, 2.6, 6.9, 2.3,
        6.0, 2.2, 5.0, 1.5,
        6.9, 3.2, 5.7, 2.3,
        5.6, 2.8, 4.9, 2.0,
        7.7, 2.8, 6.7, 2.0,
        6.3, 2.7, 4.9, 1.8,
        6.7, 3.3, 5.7, 2.1,
        7.2, 3.2, 6.0, 1.8,
        6.2, 2.8, 4.8, 1.8,
        6.1, 3.0, 4.9, 1.8,
        6.4, 2.8, 5.6, 2.1,
        7.2, 3.0, 5.8, 1.6,
        7.4, 2.8, 6.1, 1.9,
        7.9, 3.8, 6.4, 2.0,
        6.4, 2.8, 5.6, 2.2,
        6.3, 2.8, 5.1, 1.5,
        6.1, 2.6, 5.6, 1.4,
        7.7, 3.0, 6.1, 2.3,
        6.3, 3.4, 5.6, 2.4,
        6.4, 3.1, 5.5, 1.8,
        6.0, 3.0, 4.8, 1.8,
        6.9, 3.1, 5.4, 2.1,
        6.7, 3.1, 5.6, 2.4,
        6.9, 3.1, 5.1, 2.3,
        5.8, 2.7, 5.1, 1.9,
        6.8, 3.2, 5.9, 2.3,
        6.7, 3.3, 5.7, 2.5,
        6.7, 3.0, 5.2, 2.3,
        6.3, 2.5, 5.0, 1.9,
        6.5, 3.0, 5.2, 2.0,
        6.2, 3.4, 5.4, 2.3,
        5.9, 3.0, 5.1, 1.8
    };
    std::vector<std::string> rows;
    for (std::size_t i = 1; i <= 150; ++i) rows.push_back(std::to_string(i));
    return DataMatrix(Matrix(150, 4, values), std::move(rows),
                      {"sepal_length", "sepal_width", "petal_length", "petal_width"});
}

/// I.i.d. uniform entries on [lo, hi), drawn row by row from Rng(seed).
inline DataMatrix uniform_matrix(std::size_t n, std::size_t m, double lo, double hi, std::uint64_t seed)
{
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw invalid_input("uniform: need lo < hi");
    Rng rng(seed);
    Matrix x(n, m);
    for (double& v : x.values()) v = rng.uniform(lo, hi);
    return DataMatrix(std::move(x));
}

struct GaussianSpec
{
    double row = 0.0; // centre, 0-based grid coordinates
    double col = 0.0;
    double fwhm = 1.0;
    double total = 1.0; // sum of this component over the grid
};

/// Full width at half maximum over standard deviation.
inline constexpr double fwhm_per_sigma = 2.35482;

/// Sum of isotropic 2-D Gaussians, each scaled so its grid sum equals its total.
inline DataMatrix gaussian_structure(std::size_t rows, std::size_t cols, const std::vector<GaussianSpec>& parts)
{
    if (rows == 0 || cols == 0) throw invalid_input("gaussian: empty grid");
    Matrix x(rows, cols);
    std::vector<double> gr(rows);
    std::vector<double> gc(cols);
    for (std::size_t p = 0; p < parts.size(); ++p) {
        const auto& g = parts[p];
        if (!(g.row >= 0.0 && g.row <= static_cast<double>(rows - 1) && g.col >= 0.0
              && g.col <= static_cast<double>(cols - 1))) {
            throw invalid_input("gaussian " + std::to_string(p + 1) + ": centre outside the grid");
        }
        if (!(g.fwhm > 0.0)) throw invalid_input("gaussian " + std::to_string(p + 1) + ": fwhm must be positive");
        const double sigma = g.fwhm / fwhm_per_sigma;
        const double k = -0.5 / (sigma * sigma);
        // separable: the grid sum is the product of the two axis sums
        double sr = 0.0;
        double sc = 0.0;
        for (std::size_t i = 0; i < rows; ++i) sr += gr[i] = std::exp(k * std::pow(static_cast<double>(i) - g.row, 2));
        for (std::size_t j = 0; j < cols; ++j) sc += gc[j] = std::exp(k * std::pow(static_cast<double>(j) - g.col, 2));
        const double scale = g.total / (sr * sc);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) x(i, j) += scale * gr[i] * gc[j];
        }
    }
    return DataMatrix(std::move(x));
}

/// The 1200 x 400 five-component layout, every component totalling 10.
inline std::vector<GaussianSpec> reference_gaussians()
{
    return {{300, 100, 20, 10}, {800, 300, 50, 10}, {1000, 200, 10, 10}, {500, 150, 100, 10}, {900, 150, 125, 10}};
}

/// The same layout shrunk by an integer factor for quick runs.
inline std::vector<GaussianSpec> scaled_gaussians(double factor)
{
    auto g = reference_gaussians();
    for (auto& p : g) {
        p.row /= factor;
        p.col /= factor;
        p.fwhm /= factor;
    }
    return g;
}

/// X plus i.i.d. uniform noise on [0, max(X) / divisor).
inline DataMatrix add_uniform_noise(const DataMatrix& x, double divisor, std::uint64_t seed)
{
    if (!(divisor > 0.0)) throw invalid_input("noise: divisor must be positive");
    const auto v = x.values.values();
    const double top = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    const double amp = std::max(top, 0.0) / divisor;
    DataMatrix out = x;
    if (amp == 0.0) return out;
    Rng rng(seed);
    for (double& e : out.values.values()) e += rng.uniform(0.0, amp);
    return out;
}

/// The Gaussian layout shrunk by `scale`, plus noise unless the divisor is 0.
inline DataMatrix gaussian_grid(double scale, double noise_divisor, std::uint64_t seed)
{
    if (!(scale >= 1.0)) throw invalid_input("gaussian: scale must be >= 1");
    const auto r = static_cast<std::size_t>(1200.0 / scale);
    const auto c = static_cast<std::size_t>(400.0 / scale);
    auto x = gaussian_structure(r, c, scaled_gaussians(scale));
    return noise_divisor == 0.0 ? x : add_uniform_noise(x, noise_divisor, seed);
}

/// Eight scalar observations used for the dyadic comparison.
inline DataMatrix scalar_demo()
{
    return DataMatrix(Matrix(8, 1, {64, 48, 16, 32, 56, 56, 48, 24}));
}

} // namespace hwt
#endif // HWT_DATASETS_HPP

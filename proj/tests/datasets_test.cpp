#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include <hwt/datasets.hpp>
#include <hwt/filtering.hpp>
#include <hwt/haar.hpp>

#include "test_support.hpp"

namespace
{

using namespace hwt;

double checksum(const Matrix& x)
{
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x.values()[k] * static_cast<double>(k % 97 + 1);
    return s;
}

TEST(Iris, ShapeAndKnownRows)
{
    const auto x = iris();
    ASSERT_EQ(x.rows(), 150u);
    ASSERT_EQ(x.cols(), 4u);
    const auto head = test::iris_head8();
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(x.values(i, j), head.values(i, j));
    }
    EXPECT_NEAR(energy(x), 15.8988, 5e-4);
    EXPECT_EQ(x.values(149, 0), 5.9);
    EXPECT_EQ(x.values(149, 3), 1.8);
}

TEST(Uniform, RangeAndDeterminism)
{
    const auto a = uniform_matrix(150, 4, 0.0, 7.9, 42);
    const auto b = uniform_matrix(150, 4, 0.0, 7.9, 42);
    const auto c = uniform_matrix(150, 4, 0.0, 7.9, 43);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, c.values);
    for (double v : a.values.values()) {
        EXPECT_GE(v, 0.0);
        EXPECT_LT(v, 7.9);
    }
    EXPECT_THROW(uniform_matrix(2, 2, 1.0, 1.0, 1), invalid_input);
}

TEST(Uniform, GoldenValues)
{
    // the first draws of mt19937_64 seeded with 5489 are fixed by the C++ standard
    Rng rng(5489);
    EXPECT_EQ(rng.next(), 14514284786278117030ull);
    const auto x = uniform_matrix(1, 1, 0.0, 1.0, 5489);
    EXPECT_EQ(x.values(0, 0), static_cast<double>(14514284786278117030ull >> 11) * 0x1.0p-53);
}

TEST(Gaussian, NormalisationAndHalfMaximum)
{
    const auto x = gaussian_structure(101, 81, {{50, 40, 20, 10}});
    double sum = 0.0;
    for (double v : x.values.values()) {
        EXPECT_GE(v, 0.0);
        sum += v;
    }
    EXPECT_NEAR(sum, 10.0, 1e-6);
    const double peak = x.values(50, 40);
    EXPECT_NEAR(x.values(60, 40) / peak, 0.5, 1e-6);
    EXPECT_NEAR(x.values(50, 30) / peak, 0.5, 1e-6);
}

TEST(Gaussian, SymmetricInComponentOrder)
{
    const GaussianSpec a{10, 10, 6, 3};
    const GaussianSpec b{30, 20, 12, 5};
    const auto x = gaussian_structure(40, 30, {a, b, a});
    const auto y = gaussian_structure(40, 30, {a, a, b});
    EXPECT_LE(max_abs_diff(x.values, y.values), 1e-15);
}

TEST(Gaussian, Rejections)
{
    EXPECT_THROW(gaussian_structure(10, 10, {{10, 5, 2, 1}}), invalid_input);
    EXPECT_THROW(gaussian_structure(10, 10, {{5, -1, 2, 1}}), invalid_input);
    EXPECT_THROW(gaussian_structure(10, 10, {{5, 5, 0, 1}}), invalid_input);
}

TEST(Gaussian, ReferenceLayoutShape)
{
    const auto g = reference_gaussians();
    ASSERT_EQ(g.size(), 5u);
    EXPECT_EQ(g[2].row, 1000);
    EXPECT_EQ(g[4].fwhm, 125);
    const auto x = gaussian_grid(4.0, 0.0, 1);
    EXPECT_EQ(x.rows(), 300u);
    EXPECT_EQ(x.cols(), 100u);
}

TEST(Noise, BoundsAndLimits)
{
    const auto g = gaussian_structure(60, 20, scaled_gaussians(20));
    const auto gv = g.values.values();
    const double top = *std::max_element(gv.begin(), gv.end());
    const auto x = add_uniform_noise(g, 10.0, 7);
    for (std::size_t k = 0; k < gv.size(); ++k) {
        const double e = x.values.values()[k] - gv[k];
        EXPECT_GE(e, 0.0);
        EXPECT_LE(e, top / 10.0);
    }
    EXPECT_LE(max_abs_diff(add_uniform_noise(g, 1e300, 7).values, g.values), 1e-200);
    EXPECT_THROW(add_uniform_noise(g, 0.0, 1), invalid_input);
}

TEST(Noise, GoldenChecksum)
{
    const auto x = gaussian_grid(10.0, 10.0, 2024);
    // frozen from the first build; changes mean the generator or the PRNG mapping changed
    EXPECT_NEAR(checksum(x.values), 95712.518310505271, 1e-7);
}

TEST(ScalarDemo, DyadicAndHierarchical)
{
    const auto x = scalar_demo();
    EXPECT_EQ(x.values, Matrix(8, 1, {64, 48, 16, 32, 56, 56, 48, 24}));
    const std::vector<double> v(x.values.values().begin(), x.values.values().end());
    EXPECT_EQ(test::dyadic_haar(v), (std::vector<double>{43, -3, 16, 10, 8, -8, 0, 12}));
}

} // namespace

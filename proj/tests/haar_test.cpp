#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include <hwt/haar.hpp>

#include "test_support.hpp"

namespace
{

using hwt::Criterion;
using hwt::DataMatrix;
using hwt::Matrix;
using hwt::NodeId;

const int branch_codes[8][7] = {
    {1, 1, 0, 0, 1, 0, 1},    {-1, 1, 0, 0, 1, 0, 1},  {0, -1, 0, 0, 1, 0, 1},  {0, 0, 1, 1, -1, 0, 1},
    {0, 0, -1, 1, -1, 0, 1},  {0, 0, 0, -1, -1, 0, 1}, {0, 0, 0, 0, 0, 1, -1},  {0, 0, 0, 0, 0, -1, -1},
};

hwt::HaarDecomposition identity_decomposition()
{
    hwt::HaarDecomposition h;
    h.dendrogram = hwt::test::ranked_tree8();
    h.details = Matrix(7, 8);
    for (std::size_t k = 0; k < 7; ++k)
        for (std::size_t j = 0; j < 8; ++j) h.details(k, j) = hwt::test::identity_details[k][j];
    h.final_smooth.assign(hwt::test::identity_details[7], hwt::test::identity_details[7] + 8);
    return h;
}

TEST(HaarForward, IdentityOnRankedTreeMatchesWorkedExample)
{
    const auto h = hwt::forward(DataMatrix(Matrix::identity(8)), hwt::test::ranked_tree8());
    for (std::size_t k = 0; k < 7; ++k)
        for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(h.details(k, j), hwt::test::identity_details[k][j]) << "d(q" << k + 1 << ")";
    for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(h.final_smooth[j], hwt::test::identity_details[7][j]);
}

TEST(HaarForward, IdentityInputDetailsHaveZeroSum)
{
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 2 + rng() % 40;
        const auto h = hwt::forward(DataMatrix(Matrix::identity(n)), hwt::test::random_tree(rng, n));
        for (std::size_t k = 0; k + 1 < n; ++k) {
            double s = 0.0;
            for (double v : h.details.row(k)) s += v;
            EXPECT_NEAR(s, 0.0, 1e-12);
        }
    }
}

TEST(HaarForward, EqualRowsGiveZeroDetails)
{
    std::mt19937_64 rng(1);
    Matrix x(9, 3);
    for (std::size_t i = 0; i < 9; ++i) x.row(i)[0] = 2.5, x.row(i)[1] = -1.0, x.row(i)[2] = 7.0;
    const auto h = hwt::forward(DataMatrix(x), hwt::test::random_tree(rng, 9));
    for (double v : h.details.values()) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(h.final_smooth, (std::vector<double>{2.5, -1.0, 7.0}));
}

TEST(HaarForward, IrisHeadTransformOnMedianTree)
{
    // The reference transform table comes from the median-method tree
    // (the Ward tree differs at q6/q7; see the acceptance suite).
    const auto x = hwt::test::iris_head8();
    const auto h = hwt::forward(x, hwt::build_hierarchy(x, Criterion::median));
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(h.final_smooth[j], hwt::test::iris_head8_root[j], 1e-12);
    for (std::size_t k = 0; k < 7; ++k) {
        // Up to a per-row sign.
        double sign = 0.0;
        for (std::size_t j = 0; j < 4 && sign == 0.0; ++j) {
            if (hwt::test::iris_head8_details[k][j] != 0.0) sign = (h.details(k, j) * hwt::test::iris_head8_details[k][j] > 0) ? 1.0 : -1.0;
        }
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(sign * h.details(k, j), hwt::test::iris_head8_details[k][j], 1e-6) << "d" << k + 1;
    }
}

TEST(HaarForward, RejectsDimensionMismatch)
{
    EXPECT_THROW(hwt::forward(DataMatrix(Matrix::identity(7)), hwt::test::ranked_tree8()), hwt::invalid_input);
}

TEST(HaarForward, IndependentOfLevelValues)
{
    std::mt19937_64 rng(9);
    const auto x = hwt::test::random_matrix(rng, 20, 3);
    auto d = hwt::build_hierarchy(x, Criterion::ward);
    const auto h1 = hwt::forward(x, d);
    for (auto& m : d.merges) m.level = std::sin(static_cast<double>(m.seq));
    const auto h2 = hwt::forward(x, d);
    EXPECT_EQ(h1.details, h2.details);
    EXPECT_EQ(h1.final_smooth, h2.final_smooth);
}

TEST(HaarForward, SwappingChildrenNegatesOneDetailRow)
{
    // Swap the members of one node by relabelling the data rows so that the
    // orientation rule flips only that node: terminals 7 and 8 under q6.
    const auto d = hwt::test::ranked_tree8();
    std::mt19937_64 rng(4);
    const auto x = hwt::test::random_matrix(rng, 8, 3);
    auto swapped = x;
    for (std::size_t j = 0; j < 3; ++j) std::swap(swapped.values(6, j), swapped.values(7, j));
    const auto a = hwt::forward(x, d);
    const auto b = hwt::forward(swapped, d);
    for (std::size_t k = 0; k < 7; ++k)
        for (std::size_t j = 0; j < 3; ++j) {
            if (k == 5) EXPECT_EQ(b.details(k, j), -a.details(k, j));
            else EXPECT_EQ(b.details(k, j), a.details(k, j));
        }
    EXPECT_EQ(a.final_smooth, b.final_smooth);
}

TEST(HaarInverse, RoundTripRandom)
{
    std::mt19937_64 rng(123);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + rng() % 63;
        const auto x = hwt::test::random_matrix(rng, n, 1 + rng() % 8);
        const auto d = (rep % 2) ? hwt::test::random_tree(rng, n) : hwt::build_hierarchy(x, Criterion::ward);
        const auto back = hwt::inverse(hwt::forward(x, d));
        EXPECT_LE(hwt::max_abs_diff(back.values, x.values), 1e-10);
        EXPECT_EQ(back.row_ids, x.row_ids);
    }
}

TEST(HaarInverse, BitExactForDyadicDataOnBalancedTree)
{
    using N = NodeId;
    hwt::Dendrogram d;
    d.n = 4;
    d.merges = {{1, N::terminal(1), N::terminal(2), 1},
                {2, N::terminal(3), N::terminal(4), 2},
                {3, N::internal(1), N::internal(2), 3}};
    const DataMatrix x(Matrix(4, 2, {0.5, 3.25, -1.75, 8, 2, 0.125, 6.5, -4}));
    EXPECT_EQ(hwt::inverse(hwt::forward(x, d)).values, x.values);
}

TEST(HaarInverse, WorkedExampleCoefficientsGiveIdentity)
{
    EXPECT_EQ(hwt::inverse(identity_decomposition()).values, Matrix::identity(8));
}

TEST(HaarInverse, ScalarDemoFromPublishedCoefficients)
{
    const DataMatrix x(Matrix(8, 1, {64, 48, 16, 32, 56, 56, 48, 24}));
    const auto d = hwt::build_hierarchy(x, Criterion::unweighted_average);
    auto h = hwt::forward(x, d);
    EXPECT_EQ(h.final_smooth[0], 40.0);
    // Published order lists details from the root downward: 14, 6, -6, -4, 4, 0, 0.
    std::multiset<double> mags;
    for (double v : h.details.values()) mags.insert(std::abs(v));
    EXPECT_EQ(mags, (std::multiset<double>{14, 6, 6, 4, 4, 0, 0}));
    EXPECT_EQ(hwt::inverse(h).values, x.values);
}

TEST(HaarInverse, RejectsShapeInconsistency)
{
    auto h = identity_decomposition();
    h.final_smooth.pop_back();
    EXPECT_THROW(hwt::inverse(h), hwt::invalid_input);
}

TEST(CharacteristicMatrix, RankedTree)
{
    const auto c = hwt::characteristic_matrix(hwt::test::ranked_tree8());
    ASSERT_EQ(c.rows(), 8u);
    ASSERT_EQ(c.cols(), 7u);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(c(i, j), branch_codes[i][j]) << i << "," << j;
}

TEST(CharacteristicMatrix, TwoTerminals)
{
    hwt::Dendrogram d;
    d.n = 2;
    d.merges = {{1, NodeId::terminal(2), NodeId::terminal(1), 0.0}};
    const auto c = hwt::characteristic_matrix(d);
    EXPECT_EQ(c(0, 0), 1);
    EXPECT_EQ(c(1, 0), -1);
}

TEST(CharacteristicMatrix, AbsoluteColumnsAreMembership)
{
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 2 + rng() % 30;
        const auto d = hwt::test::random_tree(rng, n);
        const auto c = hwt::characteristic_matrix(d);
        for (std::size_t k = 1; k < n; ++k) {
            const auto members = hwt::cluster_members(d, NodeId::internal(k));
            std::vector<std::size_t> support;
            for (std::size_t i = 0; i < n; ++i)
                if (c(i, k - 1) != 0) support.push_back(i + 1);
            EXPECT_EQ(support, members);
        }
        for (std::size_t i = 0; i < n; ++i) EXPECT_NE(c(i, n - 2), 0);
    }
}

TEST(MatrixForm, AgreesWithInverse)
{
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 2 + rng() % 63;
        const auto x = hwt::test::random_matrix(rng, n, 1 + rng() % 8);
        const auto h = hwt::forward(x, hwt::test::random_tree(rng, n));
        const auto c = hwt::characteristic_matrix(h.dendrogram);
        const auto a = hwt::reconstruct_matrix_form(c, h.details, h.final_smooth);
        EXPECT_LE(hwt::max_abs_diff(a, hwt::inverse(h).values), 1e-10);
    }
}

TEST(MatrixForm, ZeroDetailsGiveSmoothEverywhere)
{
    const auto c = hwt::characteristic_matrix(hwt::test::ranked_tree8());
    const std::vector<double> s{1.5, -2.0};
    const auto x = hwt::reconstruct_matrix_form(c, Matrix(7, 2), s);
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_EQ(x(i, 0), 1.5);
        EXPECT_EQ(x(i, 1), -2.0);
    }
}

TEST(MatrixForm, WorkedExampleGivesIdentity)
{
    const auto h = identity_decomposition();
    const auto c = hwt::characteristic_matrix(h.dendrogram);
    EXPECT_EQ(hwt::reconstruct_matrix_form(c, h.details, h.final_smooth), Matrix::identity(8));
}

TEST(MatrixForm, RejectsShapeMismatch)
{
    const auto c = hwt::characteristic_matrix(hwt::test::ranked_tree8());
    EXPECT_THROW(hwt::reconstruct_matrix_form(c, Matrix(6, 2), std::vector<double>{1, 2}), hwt::invalid_input);
    EXPECT_THROW(hwt::reconstruct_matrix_form(c, Matrix(7, 2), std::vector<double>{1}), hwt::invalid_input);
}

TEST(NodeSmooth, WorkedValues)
{
    const auto h = hwt::forward(DataMatrix(Matrix::identity(8)), hwt::test::ranked_tree8());
    EXPECT_EQ(hwt::node_smooth(h, h.dendrogram.root()), h.final_smooth);
    EXPECT_EQ(hwt::node_smooth(h, NodeId::internal(2)), (std::vector<double>{.25, .25, .5, 0, 0, 0, 0, 0}));
    EXPECT_EQ(hwt::node_smooth(h, NodeId::internal(6)), (std::vector<double>{0, 0, 0, 0, 0, 0, .5, .5}));
    EXPECT_EQ(hwt::node_smooth(h, NodeId::terminal(3)), (std::vector<double>{0, 0, 1, 0, 0, 0, 0, 0}));
    EXPECT_THROW(hwt::node_smooth(h, NodeId::internal(9)), hwt::not_found);
}

TEST(DecompositionIo, RoundTripIsLossless)
{
    std::mt19937_64 rng(8);
    const auto x = hwt::test::random_matrix(rng, 25, 4);
    auto h = hwt::forward(x, hwt::build_hierarchy(x, Criterion::median));
    h.col_ids[1] = "with space";
    const auto back = hwt::decomposition_from_string(hwt::decomposition_to_string(h));
    EXPECT_EQ(back, h);
}

TEST(DecompositionIo, RejectsTruncatedInput)
{
    const auto h = identity_decomposition();
    auto text = hwt::decomposition_to_string(h);
    text = text.substr(0, text.rfind("smooth"));
    EXPECT_THROW(hwt::decomposition_from_string(text), hwt::parse_error);
}

} // namespace

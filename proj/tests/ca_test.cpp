#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <hwt/ca.hpp>

namespace
{

using namespace hwt;

FrequencyTable table(std::size_t r, std::size_t c, std::vector<double> v)
{
    return FrequencyTable(DataMatrix(Matrix(r, c, std::move(v))));
}

FrequencyTable random_table(std::mt19937_64& rng, std::size_t r, std::size_t c)
{
    std::uniform_real_distribution<double> u(0.5, 20.0);
    Matrix m(r, c);
    for (double& v : m.values()) v = std::floor(u(rng));
    return FrequencyTable(DataMatrix(std::move(m)));
}

/// Chi-squared distance between row profiles, straight from the definition.
double chi2_distance(const FrequencyTable& f, std::size_t a, std::size_t b)
{
    double total = 0.0;
    std::vector<double> col(f.cols(), 0.0);
    std::vector<double> row(f.rows(), 0.0);
    for (std::size_t i = 0; i < f.rows(); ++i) {
        for (std::size_t j = 0; j < f.cols(); ++j) {
            total += f.counts(i, j);
            col[j] += f.counts(i, j);
            row[i] += f.counts(i, j);
        }
    }
    double d = 0.0;
    for (std::size_t j = 0; j < f.cols(); ++j) {
        const double diff = f.counts(a, j) / row[a] - f.counts(b, j) / row[b];
        d += diff * diff / (col[j] / total);
    }
    return std::sqrt(d);
}

double chi2_statistic(const FrequencyTable& f)
{
    double total = 0.0;
    std::vector<double> col(f.cols(), 0.0);
    std::vector<double> row(f.rows(), 0.0);
    for (std::size_t i = 0; i < f.rows(); ++i) {
        for (std::size_t j = 0; j < f.cols(); ++j) {
            total += f.counts(i, j);
            col[j] += f.counts(i, j);
            row[i] += f.counts(i, j);
        }
    }
    double s = 0.0;
    for (std::size_t i = 0; i < f.rows(); ++i) {
        for (std::size_t j = 0; j < f.cols(); ++j) {
            const double e = row[i] * col[j] / total;
            s += (f.counts(i, j) - e) * (f.counts(i, j) - e) / e;
        }
    }
    return s;
}

TEST(DoubleTable, WorkedExample)
{
    const auto d = double_table(table(2, 2, {1, 3, 2, 0}));
    EXPECT_EQ(d.counts, Matrix(2, 4, {1, 3, 2, 0, 2, 0, 1, 3}));
    EXPECT_EQ(d.col_ids, (std::vector<std::string>{"V1", "V2", "V1'", "V2'"}));
}

TEST(DoubleTable, ConstantRowMass)
{
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 20; ++rep) {
        const auto f = random_table(rng, 2 + rng() % 7, 2 + rng() % 7);
        const auto d = double_table(f);
        ASSERT_EQ(d.cols(), 2 * f.cols());
        const auto v = f.counts.values();
        const double top = *std::max_element(v.begin(), v.end());
        for (std::size_t i = 0; i < d.rows(); ++i) {
            double s = 0.0;
            for (double x : d.counts.row(i)) s += x;
            EXPECT_EQ(s, static_cast<double>(f.cols()) * top);
        }
    }
}

TEST(DoubleTable, ConstantTableStaysConstant)
{
    const auto d = double_table(table(2, 2, {4, 4, 4, 4}));
    EXPECT_EQ(d.counts, Matrix(2, 4, {4, 4, 0, 0, 4, 4, 0, 0}));
}

TEST(FrequencyTableTest, Rejections)
{
    EXPECT_THROW(table(2, 2, {0, 0, 0, 0}), invalid_input);
    EXPECT_THROW(table(2, 2, {1, -1, 0, 0}), invalid_input);
}

TEST(CorrespondenceAnalysis, IndependenceGivesNoFactors)
{
    // outer product of margins (1,2,3) and (2,1)
    const auto c = correspondence_analysis(table(3, 2, {2, 1, 4, 2, 6, 3}));
    EXPECT_EQ(c.coords.cols(), 0u);
    EXPECT_TRUE(c.inertias.empty());
}

TEST(CorrespondenceAnalysis, DiagonalTwoByTwo)
{
    const auto c = correspondence_analysis(table(2, 2, {10, 0, 0, 10}));
    ASSERT_EQ(c.coords.cols(), 1u);
    EXPECT_NEAR(c.inertias[0], 1.0, 1e-12);
    EXPECT_NEAR(c.coords(0, 0), -c.coords(1, 0), 1e-12);
    EXPECT_GT(c.coords(0, 0), 0.0);
    EXPECT_NEAR(c.coords(0, 0), 1.0, 1e-12);
}

TEST(CorrespondenceAnalysis, ChiSquaredIsometry)
{
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 30; ++rep) {
        const auto f = random_table(rng, 2 + rng() % 7, 2 + rng() % 7);
        const auto c = correspondence_analysis(f);
        EXPECT_LE(c.coords.cols(), std::min(f.rows(), f.cols()) - 1);
        for (std::size_t a = 0; a < f.rows(); ++a) {
            for (std::size_t b = a + 1; b < f.rows(); ++b) {
                EXPECT_NEAR(std::sqrt(squared_distance(c.coords.row(a), c.coords.row(b))), chi2_distance(f, a, b),
                            1e-9);
            }
        }
    }
}

TEST(CorrespondenceAnalysis, InertiaAndCentring)
{
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        const auto f = random_table(rng, 3 + rng() % 5, 3 + rng() % 5);
        const auto c = correspondence_analysis(f);
        double total = 0.0;
        for (double v : f.counts.values()) total += v;
        double sum = 0.0;
        for (std::size_t a = 0; a < c.inertias.size(); ++a) {
            EXPECT_GE(c.inertias[a], 0.0);
            if (a > 0) {
                EXPECT_LE(c.inertias[a], c.inertias[a - 1]);
            }
            sum += c.inertias[a];
        }
        EXPECT_NEAR(sum, chi2_statistic(f) / total, 1e-9);
        // mass-weighted mean of each axis is zero; first nonzero entry positive
        for (std::size_t a = 0; a < c.coords.cols(); ++a) {
            double m = 0.0;
            bool signed_ok = false;
            bool seen = false;
            for (std::size_t i = 0; i < f.rows(); ++i) {
                double ri = 0.0;
                for (double v : f.counts.row(i)) ri += v;
                m += ri / total * c.coords(i, a);
                if (!seen && std::abs(c.coords(i, a)) > 1e-12) {
                    seen = true;
                    signed_ok = c.coords(i, a) > 0.0;
                }
            }
            EXPECT_NEAR(m, 0.0, 1e-10);
            EXPECT_TRUE(signed_ok);
        }
    }
}

TEST(CorrespondenceAnalysis, ZeroMassNamesTheOffender)
{
    const FrequencyTable f(DataMatrix(Matrix(3, 2, {1, 2, 0, 0, 3, 1}), {"alpha", "beta", "gamma"}, {"a", "b"}));
    try {
        correspondence_analysis(f);
        FAIL() << "expected invalid_input";
    } catch (const invalid_input& e) {
        EXPECT_NE(std::string(e.what()).find("beta"), std::string::npos);
    }
    const FrequencyTable g(DataMatrix(Matrix(2, 2, {1, 0, 3, 0}), {"r1", "r2"}, {"kept", "empty"}));
    try {
        correspondence_analysis(g);
        FAIL() << "expected invalid_input";
    } catch (const invalid_input& e) {
        EXPECT_NE(std::string(e.what()).find("empty"), std::string::npos);
    }
}

TEST(TermFrequencies, CountsAndFolding)
{
    const auto t = term_frequency_matrix({{"man", "Man", "same"}, {"other"}}, {"man", "same", "absent"});
    EXPECT_EQ(t.values, Matrix(3, 2, {2, 0, 1, 0, 0, 0}));
    EXPECT_EQ(zero_mass_rows(t.values), (std::vector<std::size_t>{2}));
    const auto kept = drop_zero_margins(t);
    EXPECT_EQ(kept.row_ids, (std::vector<std::string>{"man", "same"}));
    EXPECT_EQ(kept.col_ids, (std::vector<std::string>{"chunk1"}));
    EXPECT_THROW(term_frequency_matrix({}, {"man"}), invalid_input);
    EXPECT_THROW(term_frequency_matrix({{"a"}}, {}), invalid_input);
}

TEST(TermFrequencies, Tokenizer)
{
    EXPECT_EQ(tokenize("The man's SAME-man, 2 men!"),
              (std::vector<std::string>{"the", "man", "s", "same", "man", "2", "men"}));
}

} // namespace

#ifndef HWT_MATRIX_HPP
#define HWT_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace hwt
{

/// Dense row-major grid of doubles.
class Matrix
{
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows)
        , cols_(cols)
        , data_(rows * cols, fill)
    {
    }

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows)
        , cols_(cols)
        , data_(std::move(values))
    {
        if (data_.size() != rows * cols) {
            throw invalid_input("matrix: value count does not match shape");
        }
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const
    {
        return {data_.data() + i * cols_, cols_};
    }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Largest absolute entrywise difference; shapes must agree.
inline double max_abs_diff(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw invalid_input("max_abs_diff: shape mismatch");
    }
    double worst = 0.0;
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) {
        worst = std::max(worst, std::abs(av[i] - bv[i]));
    }
    return worst;
}

inline double squared_distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

/// Observations (rows) by features (columns), with labels for both.
struct DataMatrix
{
    Matrix values;
    std::vector<std::string> row_ids;
    std::vector<std::string> col_ids;

    DataMatrix() = default;

    explicit DataMatrix(Matrix v)
        : values(std::move(v))
    {
        default_labels();
    }

    DataMatrix(Matrix v, std::vector<std::string> rows, std::vector<std::string> cols)
        : values(std::move(v))
        , row_ids(std::move(rows))
        , col_ids(std::move(cols))
    {
        if (row_ids.empty() && col_ids.empty()) default_labels();
        if (row_ids.size() != values.rows() || col_ids.size() != values.cols()) {
            throw invalid_input("data matrix: label count does not match shape");
        }
    }

    std::size_t rows() const noexcept { return values.rows(); }
    std::size_t cols() const noexcept { return values.cols(); }

    /// Throws unless n >= 2, m >= 1 and every value is finite.
    void validate() const
    {
        if (rows() < 2) throw invalid_input("data matrix needs at least 2 rows");
        if (cols() < 1) throw invalid_input("data matrix needs at least 1 column");
        for (std::size_t i = 0; i < rows(); ++i) {
            for (std::size_t j = 0; j < cols(); ++j) {
                if (!std::isfinite(values(i, j))) {
                    throw invalid_input("non-finite value at row " + std::to_string(i + 1)
                                        + ", column " + std::to_string(j + 1));
                }
            }
        }
    }

private:
    void default_labels()
    {
        row_ids.resize(values.rows());
        col_ids.resize(values.cols());
        for (std::size_t i = 0; i < row_ids.size(); ++i) row_ids[i] = std::to_string(i + 1);
        for (std::size_t j = 0; j < col_ids.size(); ++j) col_ids[j] = "V" + std::to_string(j + 1);
    }
};

} // namespace hwt
#endif // HWT_MATRIX_HPP

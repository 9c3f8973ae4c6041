#ifndef HWT_CA_HPP
#define HWT_CA_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "matrix.hpp"

namespace hwt
{

/// Nonnegative counts with a positive grand total.
struct FrequencyTable
{
    Matrix counts;
    std::vector<std::string> row_ids;
    std::vector<std::string> col_ids;

    FrequencyTable() = default;

    explicit FrequencyTable(const DataMatrix& x) : counts(x.values), row_ids(x.row_ids), col_ids(x.col_ids)
    {
        validate();
    }

    FrequencyTable(Matrix c, std::vector<std::string> rows, std::vector<std::string> cols)
        : counts(std::move(c)), row_ids(std::move(rows)), col_ids(std::move(cols))
    {
        validate();
    }

    std::size_t rows() const { return counts.rows(); }
    std::size_t cols() const { return counts.cols(); }

    DataMatrix to_data() const { return DataMatrix(counts, row_ids, col_ids); }

    void validate() const
    {
        if (row_ids.size() != counts.rows() || col_ids.size() != counts.cols()) {
            throw invalid_input("frequency table: label count does not match the shape");
        }
        double total = 0.0;
        for (double v : counts.values()) {
            if (!std::isfinite(v) || v < 0.0) throw invalid_input("frequency table: counts must be finite and >= 0");
            total += v;
        }
        if (!(total > 0.0)) throw invalid_input("frequency table: grand total is zero");
    }
};

/// Appends complement columns a' = max(a) - a so every row sums to c * max(a).
inline FrequencyTable double_table(const FrequencyTable& f)
{
    f.validate();
    const std::size_t r = f.rows();
    const std::size_t c = f.cols();
    const auto vals = f.counts.values();
    const double top = *std::max_element(vals.begin(), vals.end());
    Matrix out(r, 2 * c);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            out(i, j) = f.counts(i, j);
            out(i, c + j) = top - f.counts(i, j);
        }
    }
    auto cols = f.col_ids;
    for (std::size_t j = 0; j < c; ++j) cols.push_back(f.col_ids[j] + "'");
    return FrequencyTable(std::move(out), f.row_ids, std::move(cols));
}

/// Row principal coordinates, one column per retained factor.
struct FactorCoordinates
{
    Matrix coords;
    std::vector<double> inertias; // descending
    std::vector<std::string> row_ids;

    DataMatrix to_data() const
    {
        std::vector<std::string> cols;
        for (std::size_t j = 1; j <= coords.cols(); ++j) cols.push_back("F" + std::to_string(j));
        return DataMatrix(coords, row_ids, std::move(cols));
    }
};

/**
 *  Correspondence analysis by SVD of the standardized residuals
 *  diag(r)^-1/2 (P - r c') diag(c)^-1/2. Factors with inertia above 1e-12
 *  are kept; each axis is signed so its first nonzero coordinate is positive.
 */
inline FactorCoordinates correspondence_analysis(const FrequencyTable& f)
{
    f.validate();
    const std::size_t nr = f.rows();
    const std::size_t nc = f.cols();
    Eigen::MatrixXd p(nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) p(i, j) = f.counts(i, j);
    }
    p /= p.sum();
    const Eigen::VectorXd rm = p.rowwise().sum();
    const Eigen::VectorXd cm = p.colwise().sum().transpose();
    for (std::size_t i = 0; i < nr; ++i) {
        if (rm(i) <= 0.0) throw invalid_input("row '" + f.row_ids[i] + "' has zero mass");
    }
    for (std::size_t j = 0; j < nc; ++j) {
        if (cm(j) <= 0.0) throw invalid_input("column '" + f.col_ids[j] + "' has zero mass");
    }
    const Eigen::VectorXd rs = rm.cwiseSqrt().cwiseInverse();
    const Eigen::VectorXd cs = cm.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd s = rs.asDiagonal() * (p - rm * cm.transpose()) * cs.asDiagonal();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s, Eigen::ComputeThinU);
    const Eigen::VectorXd& sv = svd.singularValues();
    std::size_t f_count = 0;
    while (f_count < static_cast<std::size_t>(sv.size()) && sv(f_count) * sv(f_count) > 1e-12) ++f_count;

    FactorCoordinates out;
    out.coords = Matrix(nr, f_count);
    out.row_ids = f.row_ids;
    for (std::size_t a = 0; a < f_count; ++a) {
        out.inertias.push_back(sv(a) * sv(a));
        Eigen::VectorXd axis = rs.asDiagonal() * svd.matrixU().col(a) * sv(a);
        for (std::size_t i = 0; i < nr; ++i) {
            if (std::abs(axis(i)) > 1e-12) {
                if (axis(i) < 0.0) axis = -axis;
                break;
            }
        }
        for (std::size_t i = 0; i < nr; ++i) out.coords(i, a) = axis(i);
    }
    return out;
}

/// Lowercased alphanumeric runs.
inline std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        const auto u = static_cast<unsigned char>(ch);
        if (std::isalnum(u)) {
            cur.push_back(static_cast<char>(std::tolower(u)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

namespace detail
{

inline std::string fold_case(std::string s)
{
    for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

} // namespace detail

/**
 *  counts(i, j) = occurrences of vocab[i] in chunk j, compared case-folded.
 *  Terms absent everywhere give zero rows; drop them before analysis.
 */
inline DataMatrix term_frequency_matrix(const std::vector<std::vector<std::string>>& chunks,
                                        const std::vector<std::string>& vocab)
{
    if (chunks.empty()) throw invalid_input("term frequencies: no chunks");
    if (vocab.empty()) throw invalid_input("term frequencies: empty vocabulary");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        if (!index.emplace(detail::fold_case(vocab[i]), i).second) {
            throw invalid_input("term frequencies: duplicate term '" + vocab[i] + "'");
        }
    }
    Matrix counts(vocab.size(), chunks.size());
    for (std::size_t j = 0; j < chunks.size(); ++j) {
        for (const auto& tok : chunks[j]) {
            const auto it = index.find(detail::fold_case(tok));
            if (it != index.end()) counts(it->second, j) += 1.0;
        }
    }
    std::vector<std::string> cols;
    for (std::size_t j = 1; j <= chunks.size(); ++j) cols.push_back("chunk" + std::to_string(j));
    return DataMatrix(std::move(counts), vocab, std::move(cols));
}

/// Rows with zero total, 0-based.
inline std::vector<std::size_t> zero_mass_rows(const Matrix& counts)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < counts.rows(); ++i) {
        const auto r = counts.row(i);
        if (std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; })) out.push_back(i);
    }
    return out;
}

/// Copy without the rows and columns whose totals are zero.
inline DataMatrix drop_zero_margins(const DataMatrix& x)
{
    std::vector<std::size_t> keep_r;
    std::vector<std::size_t> keep_c;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < x.cols(); ++j) s += x.values(i, j);
        if (s != 0.0) keep_r.push_back(i);
    }
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) s += x.values(i, j);
        if (s != 0.0) keep_c.push_back(j);
    }
    Matrix v(keep_r.size(), keep_c.size());
    std::vector<std::string> rows;
    std::vector<std::string> cols;
    for (std::size_t a = 0; a < keep_r.size(); ++a) {
        rows.push_back(x.row_ids[keep_r[a]]);
        for (std::size_t b = 0; b < keep_c.size(); ++b) v(a, b) = x.values(keep_r[a], keep_c[b]);
    }
    for (std::size_t j : keep_c) cols.push_back(x.col_ids[j]);
    return DataMatrix(std::move(v), std::move(rows), std::move(cols));
}

} // namespace hwt
#endif // HWT_CA_HPP

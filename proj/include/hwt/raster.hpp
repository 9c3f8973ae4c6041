#ifndef HWT_RASTER_HPP
#define HWT_RASTER_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <zlib.h>

#include "error.hpp"
#include "filtering.hpp"
#include "haar.hpp"
#include "hierarchy.hpp"
#include "matrix.hpp"
#include "random.hpp"
#include "text_io.hpp"

namespace hwt
{

using Bytes = std::vector<unsigned char>;

/// "HWT1 <rows> <cols>\n" then row-major little-endian float32 values.
inline Bytes encode_raster(const Matrix& x)
{
    const std::string head = "HWT1 " + std::to_string(x.rows()) + " " + std::to_string(x.cols()) + "\n";
    Bytes out(head.begin(), head.end());
    out.reserve(head.size() + 4 * x.size());
    for (double v : x.values()) {
        auto u = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>(u >> (8 * b)));
    }
    return out;
}

inline Matrix decode_raster(const Bytes& in)
{
    const auto nl = std::find(in.begin(), in.end(), '\n');
    if (nl == in.end()) throw parse_error(1, "header", "missing raster header");
    const auto f = detail::split_ws(std::string(in.begin(), nl));
    if (f.size() != 3 || f[0] != "HWT1") throw parse_error(1, "header", "expected 'HWT1 <rows> <cols>'");
    const std::size_t r = detail::parse_count(f[1], 1, "rows");
    const std::size_t c = detail::parse_count(f[2], 1, "cols");
    const auto body = static_cast<std::size_t>(in.end() - nl - 1);
    if (body != 4 * r * c) {
        throw parse_error(1, "body", "expected " + std::to_string(4 * r * c) + " bytes, got " + std::to_string(body));
    }
    Matrix x(r, c);
    auto p = nl + 1;
    for (double& v : x.values()) {
        std::uint32_t u = 0;
        for (int b = 0; b < 4; ++b) u |= static_cast<std::uint32_t>(*p++) << (8 * b);
        v = std::bit_cast<float>(u);
    }
    return x;
}

inline constexpr int gzip_level = 6;

/// gzip (RFC 1952) member via zlib.
inline Bytes gzip_compress(const Bytes& in, int level = gzip_level)
{
    z_stream zs{};
    if (deflateInit2(&zs, level, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
        throw std::runtime_error("zlib: deflateInit2 failed");
    }
    Bytes out(deflateBound(&zs, static_cast<uLong>(in.size())) + 32);
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = deflate(&zs, Z_FINISH);
    const auto written = zs.total_out;
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw std::runtime_error("zlib: deflate did not finish");
    out.resize(written);
    return out;
}

inline Bytes gzip_decompress(const Bytes& in)
{
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) throw std::runtime_error("zlib: inflateInit2 failed");
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    Bytes out;
    unsigned char buf[1 << 15];
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = buf;
        zs.avail_out = sizeof buf;
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw invalid_input("gzip: corrupt or truncated stream");
        }
        out.insert(out.end(), buf, buf + (sizeof buf - zs.avail_out));
    }
    inflateEnd(&zs);
    return out;
}

/// Rows and columns shuffled with Rng(seed).
inline Matrix permute_rows_cols(const Matrix& x, std::uint64_t seed)
{
    Rng rng(seed);
    auto shuffle = [&](std::size_t n) {
        std::vector<std::size_t> p(n);
        std::iota(p.begin(), p.end(), 0);
        for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[static_cast<std::size_t>(rng.index(i))]);
        return p;
    };
    const auto pr = shuffle(x.rows());
    const auto pc = shuffle(x.cols());
    Matrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(pr[i], pc[j]);
    }
    return out;
}

struct CompressionRow
{
    std::string kind;      // raw, permuted, hwt (wavelet filtering) or direct (thresholding the data)
    double threshold = -1; // negative for raw and permuted
    std::size_t raw_bytes = 0;
    std::size_t gzip_bytes = 0;
    double mse = 0.0; // relative
};

/**
 *  Raster plus gzip sizes for the data, a shuffled copy, wavelet-filtered
 *  reconstructions and directly thresholded copies.
 */
inline std::vector<CompressionRow> compression_study(const DataMatrix& x, Criterion criterion,
                                                     const std::vector<double>& hwt_thresholds,
                                                     const std::vector<double>& direct_thresholds,
                                                     std::uint64_t seed)
{
    x.validate();
    std::vector<CompressionRow> rows;
    auto add = [&](std::string kind, double t, const Matrix& m, double err) {
        const auto raster = encode_raster(m);
        rows.push_back({std::move(kind), t, raster.size(), gzip_compress(raster).size(), err});
    };
    add("raw", -1, x.values, 0.0);
    add("permuted", -1, permute_rows_cols(x.values, seed), 0.0);
    if (!hwt_thresholds.empty()) {
        const auto h = forward(x, build_hierarchy(x, criterion));
        for (double t : hwt_thresholds) {
            const auto rec = inverse(hard_threshold(h, t).filtered);
            add("hwt", t, rec.values, mse(x.values, rec.values, MseMode::relative));
        }
    }
    for (double t : direct_thresholds) {
        if (!(t >= 0.0)) throw invalid_input("thresholds must be nonnegative");
        Matrix m = x.values;
        for (double& v : m.values()) {
            if (std::abs(v) <= t) v = 0.0;
        }
        add("direct", t, m, mse(x.values, m, MseMode::relative));
    }
    return rows;
}

inline void write_compression_tsv(std::ostream& out, const std::vector<CompressionRow>& rows)
{
    out << "# gzip level " << gzip_level << "\n";
    out << "kind\tthreshold\traw_bytes\tgzip_bytes\tmse\n";
    for (const auto& r : rows) {
        out << r.kind << '\t' << (r.threshold < 0 ? std::string("-") : format_real(r.threshold, 6)) << '\t'
            << r.raw_bytes << '\t' << r.gzip_bytes << '\t' << format_real(r.mse, 6) << '\n';
    }
}

} // namespace hwt
#endif // HWT_RASTER_HPP

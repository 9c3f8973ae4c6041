#ifndef HWT_RANDOM_HPP
#define HWT_RANDOM_HPP

#include <cstdint>
#include <random>

namespace hwt
{

/// Seeded stream over std::mt19937_64. The mappings to doubles and indices are
/// written out here because the standard distributions differ between libraries.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi)
    {
        const double v = lo + (hi - lo) * uniform01();
        return v < hi ? v : lo; // guard against rounding up to hi
    }

    /// Uniform on {0, ..., n-1} by rejection; n must be positive.
    std::uint64_t index(std::uint64_t n)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace hwt
#endif // HWT_RANDOM_HPP

#include "dqg/rng.hpp"

#include <cmath>
#include <numbers>

namespace dqg {

Rng Rng::for_case(std::uint64_t seed, std::string_view tag, std::initializer_list<int> ids)
{
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t byte) {
        h ^= byte;
        h *= 1099511628211ULL;
    };
    for (char ch : tag) mix(static_cast<unsigned char>(ch));
    for (int id : ids)
        for (int s = 0; s < 32; s += 8) mix((static_cast<std::uint32_t>(id) >> s) & 0xffU);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    Rng r(0);
    r.engine_.seed(seq);
    return r;
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

cplx Rng::cnormal()
{
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
}

Mat Rng::gaussian(int rows, int cols)
{
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = cnormal();
    return m;
}

Vec Rng::gaussian(int n)
{
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = cnormal();
    return v;
}

Element random_element(const BlockLayout& layout, const std::vector<BlockId>& blocks, Rng& rng)
{
    Element e;
    for (BlockId b : blocks) e.set(b, rng.gaussian(layout.dim(b), layout.dim(b)));
    return e;
}

Element random_element(const BlockLayout& layout, std::initializer_list<BlockId> blocks, Rng& rng)
{
    return random_element(layout, std::vector<BlockId>(blocks), rng);
}

}  // namespace dqg

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

#include "dqg/blockalg.hpp"

namespace dqg {

// Deterministic sampler. Uniforms and normals are derived from the raw
// engine output so streams agree across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent stream for one sampling case, so a case draws the same
    // values no matter which other cases run.
    static Rng for_case(std::uint64_t seed, std::string_view tag, std::initializer_list<int> ids);

    double uniform();
    double normal();
    cplx cnormal();
    Mat gaussian(int rows, int cols);
    Vec gaussian(int n);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

Element random_element(const BlockLayout& layout, std::initializer_list<BlockId> blocks, Rng& rng);
Element random_element(const BlockLayout& layout, const std::vector<BlockId>& blocks, Rng& rng);

}  // namespace dqg

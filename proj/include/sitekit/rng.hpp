#pragma once

#include <cstdint>

namespace sitekit {

/// splitmix64: tiny, stable across platforms, good enough for sampling and
/// corpus generation. Every report records the seed it was driven by.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n); n > 0.
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

    bool chance(int num, int den) { return below(den) < num; }

private:
    std::uint64_t state_;
};

}  // namespace sitekit

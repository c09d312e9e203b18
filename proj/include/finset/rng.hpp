#pragma once

#include <cstdint>

namespace finset {

// Deterministic, platform-independent generator (splitmix64 stream). The
// standard distributions are implementation-defined, so seeded outputs must
// not depend on them.
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t x = (state_ += 0x9E3779B97F4A7C15ULL);
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        SplitMix g(a ^ (b * 0xFF51AFD7ED558CCDULL + 0x2545F4914F6CDD1DULL));
        return g.next();
    }

private:
    std::uint64_t state_;
};

template <typename Vec>
void shuffle_inplace(Vec& v, SplitMix& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        using std::swap;
        swap(v[i - 1], v[j]);
    }
}

}  // namespace finset

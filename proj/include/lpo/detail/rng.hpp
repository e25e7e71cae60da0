#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace lpo::detail {

// SplitMix64. All sampling in the project goes through this generator so
// results are identical across platforms and standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        // rejection sampling keeps the draw unbiased
        std::uint64_t limit = ~0ull - (~0ull % bound);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

// Mixes salts into a seed so nested components get independent streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    Rng r(seed ^ (salt * 0x9e3779b97f4a7c15ull + 0x165667b19e3779f9ull));
    return r.next();
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view salt) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : salt) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return derive_seed(seed, h);
}

}  // namespace lpo::detail

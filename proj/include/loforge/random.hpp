#pragma once

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <cstdint>
#include <string_view>
#include <vector>

namespace loforge {

/// mt19937_64 with boost distributions, which give the same streams on every platform.
class Rng {
public:
    Rng(std::uint64_t seed, std::string_view stream = {}) : seed_(seed), engine_(mix(seed, stream)) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform integer in [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        return boost::random::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
    }

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(n) - 1)); }

    template <class T>
    const T& pick(const std::vector<T>& v) { return v[index(v.size())]; }

    /// c distinct entries of v, in draw order.
    template <class T>
    std::vector<T> sample_without_replacement(std::vector<T> v, std::size_t c) {
        for (std::size_t i = 0; i < c && i < v.size(); ++i) std::swap(v[i], v[i + index(v.size() - i)]);
        v.resize(std::min(c, v.size()));
        return v;
    }

    /// Independent child stream.
    Rng child(std::string_view stream) const { return Rng(seed_ ^ mix(0, stream), stream); }

private:
    static std::uint64_t mix(std::uint64_t seed, std::string_view stream) {
        // FNV-1a over the stream name, folded into the seed
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : stream) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return seed * 0x9e3779b97f4a7c15ull ^ h;
    }

    std::uint64_t seed_;
    boost::random::mt19937_64 engine_;
};

}  // namespace loforge

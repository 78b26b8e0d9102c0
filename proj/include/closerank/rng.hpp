#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

#include "closerank/error.hpp"

namespace closerank {

/// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the `stream`-th child of `seed`. Children of distinct streams are
/// decorrelated, and a child can be split again.
constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// Deterministic generator. The standard library's distributions are
/// implementation-defined, so bounded draws are done here by rejection to
/// keep streams identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % bound;
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// k distinct values drawn uniformly from [0, n), returned ascending
/// (Floyd's sampling algorithm, O(k) expected time).
inline std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k,
                                                             Rng& rng) {
    if (k > n) throw DomainError("sample size exceeds population");
    std::unordered_set<std::uint32_t> chosen;
    chosen.reserve(k);
    for (std::uint32_t j = n - k; j < n; ++j) {
        const auto t = static_cast<std::uint32_t>(rng.below(std::uint64_t{j} + 1));
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::uint32_t> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace closerank

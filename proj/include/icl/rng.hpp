#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "icl/error.hpp"

namespace icl {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seedable RNG with platform-stable sampling primitives. std::mt19937_64 is
/// bit-exact per the standard; the distribution mappings below are our own so
/// corpora are byte-identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform integer in [lo, hi], inclusive. Rejection-sampled, unbiased.
    int uniform_int(int lo, int hi) {
        require(lo <= hi, "uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return lo + static_cast<int>(r % span);
    }

    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform_int(0, static_cast<int>(n) - 1));
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Index sampled proportionally to nonnegative weights.
    int categorical(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        require(total > 0.0, "categorical: all weights zero");
        double u = uniform() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0) return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    /// k distinct values from {0, ..., n-1}, order random.
    std::vector<int> sample_distinct(int n, int k) {
        require(0 <= k && k <= n, "sample_distinct: k out of range");
        // Partial Fisher-Yates over an index table.
        std::vector<int> idx(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
        std::vector<int> out(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            int j = uniform_int(i, n - 1);
            std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
            out[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i)];
        }
        return out;
    }

    /// k distinct indices drawn sequentially with probability proportional to
    /// weights, removing each winner (weighted sampling without replacement).
    std::vector<int> weighted_sample_distinct(std::vector<double> weights, int k) {
        require(k >= 0 && k <= static_cast<int>(weights.size()),
                "weighted_sample_distinct: k out of range");
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(k));
        for (int draw = 0; draw < k; ++draw) {
            int i = categorical(weights);
            out.push_back(i);
            weights[static_cast<std::size_t>(i)] = 0.0;
        }
        return out;
    }

    /// Independent stream derived from this seed and a stream tag.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        return splitmix64(seed ^ splitmix64(stream + 0x51ed2701a9b3d1e5ULL));
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace icl

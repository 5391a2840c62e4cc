#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace rd {

/// Derives the seed of an independent stream from a master seed and a
/// stream index: stream(i) = splitmix64(splitmix64(master) ^ splitmix64(i + 1)).
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

/// Seeded random source. The engine is std::mt19937_64; every distribution
/// transform is implemented here so that outputs are bit-identical across
/// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng stream(std::uint64_t master, std::uint64_t index) {
        return Rng(split_seed(master, index));
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p) { return uniform() < p; }

    double normal();

    /// Gamma(shape, 1) via Marsaglia-Tsang.
    double gamma(double shape);

    /// Symmetric Dirichlet(alpha) of the given dimension.
    std::vector<double> dirichlet(std::size_t dim, double alpha);

    /// Samples an index from a discrete distribution given by probabilities.
    std::size_t categorical(std::span<const double> probs);

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace rd

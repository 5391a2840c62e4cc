#include "ruledistill/rng.hpp"

#include <cmath>

#include "ruledistill/errors.hpp"

namespace rd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 1));
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("Rng::below: n must be positive");
    // rejection keeps the draw unbiased
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    // Box-Muller, one value per call
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::gamma(double shape) {
    if (!(shape > 0.0)) throw InvalidArgument("Rng::gamma: shape must be positive");
    if (shape < 1.0) {
        // boost: G(a) = G(a + 1) * U^(1/a)
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::vector<double> Rng::dirichlet(std::size_t dim, double alpha) {
    if (!(alpha > 0.0)) throw InvalidArgument("dirichlet: alpha must be positive");
    std::vector<double> out(dim, 1.0);
    if (dim <= 1) return out;
    double total = 0.0;
    do {
        total = 0.0;
        for (auto& x : out) {
            x = gamma(alpha);
            total += x;
        }
    } while (total <= 0.0);
    for (auto& x : out) x /= total;
    return out;
}

std::size_t Rng::categorical(std::span<const double> probs) {
    if (probs.size() == 1) return 0;
    double u = uniform();
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        if (u < probs[i]) return i;
        u -= probs[i];
        last_positive = i;
    }
    // rounding left a sliver of mass past the end
    return last_positive;
}

} // namespace rd

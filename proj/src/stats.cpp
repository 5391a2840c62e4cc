#include "ruledistill/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ruledistill/errors.hpp"

namespace rd {

double mean(std::span<const double> x) {
    if (x.empty()) throw InvalidArgument("mean of an empty vector");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double median(std::vector<double> x) {
    if (x.empty()) throw InvalidArgument("median of an empty vector");
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw InvalidArgument("vectors of length " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
    if (x.size() < 3) throw InvalidArgument("correlation needs at least 3 values");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    // relative guard: constant vectors leave rounding-level residue
    const auto flat = [](double ss, double m, std::size_t n) {
        return ss <= 1e-24 * std::max(1.0, m * m) * static_cast<double>(n);
    };
    if (flat(sxx, mx, x.size()) || flat(syy, my, y.size()))
        throw UndefinedStatistic("correlation is undefined for a constant vector");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double r_squared(std::span<const double> x, std::span<const double> y) {
    const double r = pearson(x, y);
    return r * r;
}

std::optional<double> try_r_squared(std::span<const double> x, std::span<const double> y) {
    try {
        return r_squared(x, y);
    } catch (const UndefinedStatistic&) {
        return std::nullopt;
    }
}

double error_probability(std::span<const double> p_a, const std::vector<bool>& truth) {
    if (p_a.size() != truth.size()) throw InvalidArgument("predictions and labels differ in length");
    if (p_a.empty()) throw InvalidArgument("no labelled objects");
    double s = 0.0;
    for (std::size_t i = 0; i < p_a.size(); ++i) s += truth[i] ? 1.0 - p_a[i] : p_a[i];
    return s / static_cast<double>(p_a.size());
}

} // namespace rd

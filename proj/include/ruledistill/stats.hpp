#pragma once

#include <optional>
#include <span>
#include <vector>

namespace rd {

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1); zero for fewer than two values.
double stddev(std::span<const double> x);
double median(std::vector<double> x);

/// Pearson correlation. Throws UndefinedStatistic when either vector has
/// zero variance, InvalidArgument on length mismatch or fewer than 3 values.
double pearson(std::span<const double> x, std::span<const double> y);

/// Squared Pearson correlation.
double r_squared(std::span<const double> x, std::span<const double> y);

/// r_squared, or empty where it is undefined.
std::optional<double> try_r_squared(std::span<const double> x, std::span<const double> y);

/// Mean over objects of 1 - P(true label): 1 - p for category-A objects and
/// p for category-B objects, where p = P(A).
double error_probability(std::span<const double> p_a, const std::vector<bool>& truth);

} // namespace rd

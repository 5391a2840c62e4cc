#pragma once

#include <string>
#include <vector>

namespace rd {

struct Series {
    std::string name;
    std::vector<double> x, y;
    std::vector<std::string> labels; // optional per-point labels (scatter)
};

/// Scatter plot on the unit square with the identity line.
std::string svg_scatter(const std::string& title, const std::string& x_label, const std::string& y_label,
                        const std::vector<Series>& series);

/// Line chart, one polyline per series; the y range is [0, max(0.5, max y)].
std::string svg_lines(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series);

} // namespace rd

#include "ruledistill/plot.hpp"

#include <algorithm>
#include <cstdio>

namespace rd {

namespace {

constexpr double kWidth = 480, kHeight = 400;
constexpr double kLeft = 60, kRight = 130, kTop = 40, kBottom = 50;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

std::string header(const std::string& title, const std::string& x_label, const std::string& y_label, const Frame& f,
                   const std::vector<double>& x_ticks, const std::vector<double>& y_ticks) {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
                    num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(kWidth / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" + escape(title) +
         "</text>\n";
    s += "<line x1=\"" + num(f.px(f.x0)) + "\" y1=\"" + num(f.py(f.y0)) + "\" x2=\"" + num(f.px(f.x1)) + "\" y2=\"" +
         num(f.py(f.y0)) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(f.px(f.x0)) + "\" y1=\"" + num(f.py(f.y0)) + "\" x2=\"" + num(f.px(f.x0)) + "\" y2=\"" +
         num(f.py(f.y1)) + "\" stroke=\"black\"/>\n";
    for (double t : x_ticks)
        s += "<text x=\"" + num(f.px(t)) + "\" y=\"" + num(f.py(f.y0) + 15) + "\" text-anchor=\"middle\">" + num(t) +
             "</text>\n";
    for (double t : y_ticks)
        s += "<text x=\"" + num(f.px(f.x0) - 5) + "\" y=\"" + num(f.py(t) + 4) + "\" text-anchor=\"end\">" + num(t) +
             "</text>\n";
    s += "<text x=\"" + num(f.px((f.x0 + f.x1) / 2)) + "\" y=\"" + num(kHeight - 12) +
         "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
    s += "<text transform=\"translate(15," + num(f.py((f.y0 + f.y1) / 2)) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(y_label) + "</text>\n";
    return s;
}

std::string legend(const std::vector<Series>& series) {
    std::string s;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double y = kTop + 15.0 * static_cast<double>(i);
        s += "<rect x=\"" + num(kWidth - kRight + 15) + "\" y=\"" + num(y - 8) + "\" width=\"10\" height=\"10\" fill=\"" +
             kPalette[i % 8] + "\"/>\n";
        s += "<text x=\"" + num(kWidth - kRight + 30) + "\" y=\"" + num(y + 1) + "\">" + escape(series[i].name) +
             "</text>\n";
    }
    return s;
}

std::vector<double> ticks(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i <= n; ++i) out.push_back(lo + (hi - lo) * i / n);
    return out;
}

} // namespace

std::string svg_scatter(const std::string& title, const std::string& x_label, const std::string& y_label,
                        const std::vector<Series>& series) {
    const Frame f{0, 1, 0, 1};
    std::string s = header(title, x_label, y_label, f, ticks(0, 1, 5), ticks(0, 1, 5));
    s += "<line x1=\"" + num(f.px(0)) + "\" y1=\"" + num(f.py(0)) + "\" x2=\"" + num(f.px(1)) + "\" y2=\"" +
         num(f.py(1)) + "\" stroke=\"#aaa\" stroke-dasharray=\"4 3\"/>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& d = series[k];
        for (std::size_t i = 0; i < std::min(d.x.size(), d.y.size()); ++i) {
            s += "<circle cx=\"" + num(f.px(d.x[i])) + "\" cy=\"" + num(f.py(d.y[i])) + "\" r=\"3.5\" fill=\"" +
                 kPalette[k % 8] + "\"/>\n";
            if (i < d.labels.size())
                s += "<text x=\"" + num(f.px(d.x[i]) + 5) + "\" y=\"" + num(f.py(d.y[i]) - 4) +
                     "\" font-size=\"9\">" + escape(d.labels[i]) + "</text>\n";
        }
    }
    return s + legend(series) + "</svg>\n";
}

std::string svg_lines(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series) {
    double x0 = 0, x1 = 1, y1 = 0.5;
    bool first = true;
    for (const auto& d : series)
        for (std::size_t i = 0; i < d.x.size(); ++i) {
            if (first) x0 = x1 = d.x[i];
            first = false;
            x0 = std::min(x0, d.x[i]);
            x1 = std::max(x1, d.x[i]);
            if (i < d.y.size()) y1 = std::max(y1, d.y[i]);
        }
    if (x1 <= x0) x1 = x0 + 1;
    const Frame f{x0, x1, 0, y1};
    std::vector<double> xt;
    for (const auto& d : series)
        for (double x : d.x)
            if (std::find(xt.begin(), xt.end(), x) == xt.end()) xt.push_back(x);
    std::string s = header(title, x_label, y_label, f, xt, ticks(0, y1, 5));
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& d = series[k];
        std::string points;
        for (std::size_t i = 0; i < std::min(d.x.size(), d.y.size()); ++i) {
            points += num(f.px(d.x[i])) + "," + num(f.py(d.y[i])) + " ";
            s += "<circle cx=\"" + num(f.px(d.x[i])) + "\" cy=\"" + num(f.py(d.y[i])) + "\" r=\"2.5\" fill=\"" +
                 kPalette[k % 8] + "\"/>\n";
        }
        s += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[k % 8]) + "\" points=\"" + points + "\"/>\n";
    }
    return s + legend(series) + "</svg>\n";
}

} // namespace rd

#include "isodecay/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace isodecay {

namespace {

constexpr double width = 640.0;
constexpr double height = 420.0;
constexpr double left = 80.0;
constexpr double right = 20.0;
constexpr double top = 40.0;
constexpr double bottom = 50.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_log_plot(const std::vector<double>& t, const std::vector<double>& values,
                            const std::string& title, const std::string& y_label) {
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < t.size() && k < values.size(); ++k) {
        if (values[k] > 0.0 && std::isfinite(values[k])) {
            xs.push_back(t[k]);
            ys.push_back(std::log10(values[k]));
        }
    }
    double x0 = t.empty() ? 0.0 : *std::min_element(t.begin(), t.end());
    double x1 = t.empty() ? 1.0 : *std::max_element(t.begin(), t.end());
    if (!(x1 > x0)) x1 = x0 + 1.0;
    double y0 = ys.empty() ? 0.0 : std::floor(*std::min_element(ys.begin(), ys.end()));
    double y1 = ys.empty() ? 1.0 : std::ceil(*std::max_element(ys.begin(), ys.end()));
    if (!(y1 > y0)) y1 = y0 + 1.0;

    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
         "</text>\n";
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(left + pw) + "\" y2=\"" +
         num(top + ph) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
         num(top + ph) + "\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 5; ++k) {
        const double x = x0 + (x1 - x0) * k / 5.0;
        s += "<line x1=\"" + num(px(x)) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(px(x)) + "\" y2=\"" +
             num(top + ph + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(px(x)) + "\" y=\"" + num(top + ph + 20) + "\" text-anchor=\"middle\">" + num(x) +
             "</text>\n";
    }
    const int decades = static_cast<int>(y1 - y0);
    const int stride = std::max(1, decades / 8);
    for (int d = 0; d <= decades; d += stride) {
        const double y = y0 + d;
        s += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(py(y)) + "\" x2=\"" + num(left) + "\" y2=\"" +
             num(py(y)) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py(y) + 4) + "\" text-anchor=\"end\">1e" + num(y) +
             "</text>\n";
    }
    s += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(height - 10) + "\" text-anchor=\"middle\">t</text>\n";
    s += "<text x=\"16\" y=\"" + num(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(top + ph / 2) + ")\">" + escape(y_label) + "</text>\n";

    if (xs.size() >= 2) {
        s += "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < xs.size(); ++k) {
            if (k) s += ' ';
            s += num(px(xs[k])) + "," + num(py(ys[k]));
        }
        s += "\"/>\n";
    } else {
        s += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(top + ph / 2) +
             "\" text-anchor=\"middle\">no positive values to plot</text>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace isodecay

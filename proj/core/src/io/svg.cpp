#include "hysop/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hysop/error.hpp"

namespace hysop::io {

std::string to_string(PlotKind kind) {
    switch (kind) {
        case PlotKind::prediction: return "prediction";
        case PlotKind::loop: return "loop";
        case PlotKind::error: return "error";
    }
    return "prediction";
}

PlotKind plot_kind_from_string(const std::string& name) {
    if (name == "prediction") return PlotKind::prediction;
    if (name == "loop") return PlotKind::loop;
    if (name == "error") return PlotKind::error;
    throw ParameterError("unknown plot kind '" + name + "'");
}

namespace {

constexpr double width = 800, height = 500;
constexpr double left = 80, right = 150, top = 40, bottom = 60;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

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

// Roughly five ticks at 1, 2 or 5 times a power of ten.
std::vector<double> ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    std::vector<double> out;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step)
        out.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    return out;
}

void widen(double& lo, double& hi) {
    if (hi > lo) {
        const double pad = 0.03 * (hi - lo);
        lo -= pad;
        hi += pad;
    } else {
        const double pad = lo == 0.0 ? 1.0 : 0.1 * std::abs(lo);
        lo -= pad;
        hi += pad;
    }
}

}  // namespace

std::string render_svg(const Figure& fig) {
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    std::size_t points = 0;
    for (const auto& s : fig.series) {
        if (s.x.size() != s.y.size())
            throw ShapeError("series '" + s.label + "' has " + std::to_string(s.x.size()) + " x and " +
                             std::to_string(s.y.size()) + " y values");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
            ++points;
        }
    }
    if (points == 0) throw ParameterError("figure '" + fig.title + "' has no finite points");
    widen(x_lo, x_hi);
    widen(y_lo, y_hi);

    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\" "
           "font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(fig.title) + "</text>\n";
    svg += "<rect x=\"" + fmt("%.2f", left) + "\" y=\"" + fmt("%.2f", top) + "\" width=\"" + fmt("%.2f", pw) +
           "\" height=\"" + fmt("%.2f", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    svg += "<g stroke=\"#dddddd\">\n";
    const auto xt = ticks(x_lo, x_hi), yt = ticks(y_lo, y_hi);
    for (double v : xt)
        svg += "<line x1=\"" + fmt("%.2f", px(v)) + "\" y1=\"" + fmt("%.2f", top) + "\" x2=\"" + fmt("%.2f", px(v)) +
               "\" y2=\"" + fmt("%.2f", top + ph) + "\"/>\n";
    for (double v : yt)
        svg += "<line x1=\"" + fmt("%.2f", left) + "\" y1=\"" + fmt("%.2f", py(v)) + "\" x2=\"" +
               fmt("%.2f", left + pw) + "\" y2=\"" + fmt("%.2f", py(v)) + "\"/>\n";
    svg += "</g>\n";
    for (double v : xt)
        svg += "<text x=\"" + fmt("%.2f", px(v)) + "\" y=\"" + fmt("%.2f", top + ph + 16) +
               "\" text-anchor=\"middle\">" + fmt("%.4g", v) + "</text>\n";
    for (double v : yt)
        svg += "<text x=\"" + fmt("%.2f", left - 6) + "\" y=\"" + fmt("%.2f", py(v) + 4) +
               "\" text-anchor=\"end\">" + fmt("%.4g", v) + "</text>\n";
    svg += "<text x=\"" + fmt("%.2f", left + pw / 2) + "\" y=\"" + fmt("%.2f", height - 16) +
           "\" text-anchor=\"middle\">" + escape(fig.x_label) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt("%.2f", top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           fmt("%.2f", top + ph / 2) + ")\">" + escape(fig.y_label) + "</text>\n";

    std::size_t k = 0;
    for (const auto& s : fig.series) {
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (!pts.empty()) pts += ' ';
            pts += fmt("%.2f", px(s.x[i])) + "," + fmt("%.2f", py(s.y[i]));
        }
        const std::string color = s.color.empty() ? "black" : escape(s.color);
        svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        const double ly = top + 12 + 18 * static_cast<double>(k++);
        svg += "<line x1=\"" + fmt("%.2f", left + pw + 10) + "\" y1=\"" + fmt("%.2f", ly) + "\" x2=\"" +
               fmt("%.2f", left + pw + 30) + "\" y2=\"" + fmt("%.2f", ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", left + pw + 36) + "\" y=\"" + fmt("%.2f", ly + 4) + "\">" +
               escape(s.label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

Figure make_figure(PlotKind kind, std::span<const double> t, std::span<const double> h,
                   std::span<const double> reference, std::span<const double> prediction, const std::string& title) {
    if (t.size() != h.size() || t.size() != reference.size())
        throw ShapeError("plot inputs t, h and reference differ in length");
    if (!prediction.empty() && prediction.size() != reference.size())
        throw ShapeError("prediction has " + std::to_string(prediction.size()) + " points, reference has " +
                         std::to_string(reference.size()));
    auto vec = [](std::span<const double> s) { return std::vector<double>(s.begin(), s.end()); };
    Figure f;
    f.title = title;
    switch (kind) {
        case PlotKind::prediction:
            f.x_label = "t";
            f.y_label = "B (T)";
            f.series.push_back({"reference", "#1f77b4", vec(t), vec(reference)});
            if (!prediction.empty()) f.series.push_back({"prediction", "#d62728", vec(t), vec(prediction)});
            break;
        case PlotKind::loop:
            f.x_label = "H (A/m)";
            f.y_label = "B (T)";
            f.series.push_back({"reference", "#1f77b4", vec(h), vec(reference)});
            if (!prediction.empty()) f.series.push_back({"prediction", "#d62728", vec(h), vec(prediction)});
            break;
        case PlotKind::error: {
            if (prediction.empty()) throw ParameterError("an error plot needs a prediction");
            std::vector<double> e(reference.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::abs(prediction[i] - reference[i]);
            f.x_label = "t";
            f.y_label = "|B error| (T)";
            f.series.push_back({"abs error", "#2ca02c", vec(t), std::move(e)});
            break;
        }
    }
    return f;
}

}  // namespace hysop::io

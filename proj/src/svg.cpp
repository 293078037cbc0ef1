#include "bearform/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "bearform/errors.hpp"

namespace bearform {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// largest {1,2,5}*10^k not exceeding `raw`
double nice_step(double raw) {
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    if (r >= 5.0) return 5.0 * mag;
    if (r >= 2.0) return 2.0 * mag;
    return mag;
}

// drawing more than ~1500 points per curve only bloats the file
std::size_t draw_stride(std::size_t points) { return points / 1500 + 1; }

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

struct Frame {
    double x0, y0, x1, y1;  // plot area in pixels (y0 = top)
};

void open_svg(std::ostringstream& out, int w, int h, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    if (!title.empty())
        out << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << esc(title) << "</text>\n";
}

void legend(std::ostringstream& out, const Frame& f,
            const std::vector<std::pair<std::string, int>>& entries,
            const std::vector<bool>& dashed) {
    const double x = f.x1 - 150.0;
    double y = f.y0 + 14.0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const char* color = kPalette[entries[k].second % 8];
        out << "<line x1=\"" << px(x) << "\" y1=\"" << px(y - 4) << "\" x2=\"" << px(x + 26)
            << "\" y2=\"" << px(y - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"";
        if (dashed[k]) out << " stroke-dasharray=\"6 4\"";
        out << "/>\n";
        out << "<text x=\"" << px(x + 32) << "\" y=\"" << px(y) << "\" font-family=\"sans-serif\" "
            << "font-size=\"12\">" << esc(entries[k].first) << "</text>\n";
        y += 16.0;
    }
}

} // namespace

std::string render_line_chart(const std::vector<Series>& series, const PlotSpec& spec) {
    if (series.empty()) throw ValidationError("plot: no series selected");
    for (const Series& s : series) {
        if (s.t.size() != s.y.size()) throw ValidationError("plot: series size mismatch");
        if (s.t.size() < 2)
            throw ValidationError("plot: series '" + s.label + "' has fewer than two points");
        if (spec.log_y)
            for (double v : s.y)
                if (!(v > 0.0))
                    throw ValidationError("plot: log scale needs positive values (series '" +
                                          s.label + "')");
    }

    double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
    double ymin = tmin, ymax = -tmin;
    for (const Series& s : series)
        for (std::size_t k = 0; k < s.t.size(); ++k) {
            tmin = std::min(tmin, s.t[k]);
            tmax = std::max(tmax, s.t[k]);
            const double v = spec.log_y ? std::log10(s.y[k]) : s.y[k];
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (tmax <= tmin) tmax = tmin + 1.0;
    if (ymax <= ymin) {
        ymax += 0.5;
        ymin -= 0.5;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const Frame f{64.0, 40.0, spec.width - 20.0, spec.height - 46.0};
    auto sx = [&](double t) { return f.x0 + (t - tmin) / (tmax - tmin) * (f.x1 - f.x0); };
    auto sy = [&](double v) {
        const double w = spec.log_y ? std::log10(v) : v;
        return f.y1 - (w - ymin) / (ymax - ymin) * (f.y1 - f.y0);
    };

    std::ostringstream out;
    open_svg(out, spec.width, spec.height, spec.title);

    // axes box
    out << "<rect x=\"" << px(f.x0) << "\" y=\"" << px(f.y0) << "\" width=\"" << px(f.x1 - f.x0)
        << "\" height=\"" << px(f.y1 - f.y0) << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // x ticks
    const double xstep = nice_step((tmax - tmin) / 6.0);
    for (double t = std::ceil(tmin / xstep) * xstep; t <= tmax + 1e-9; t += xstep) {
        const double x = sx(t);
        out << "<line x1=\"" << px(x) << "\" y1=\"" << px(f.y1) << "\" x2=\"" << px(x) << "\" y2=\""
            << px(f.y1 + 5) << "\" stroke=\"#333\"/>\n";
        char lab[32];
        std::snprintf(lab, sizeof lab, "%g", t);
        out << "<text x=\"" << px(x) << "\" y=\"" << px(f.y1 + 18) << "\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"11\">" << lab << "</text>\n";
    }
    // y ticks
    if (spec.log_y) {
        for (double d = std::ceil(ymin); d <= std::floor(ymax) + 1e-9; d += 1.0) {
            const double y = f.y1 - (d - ymin) / (ymax - ymin) * (f.y1 - f.y0);
            out << "<line x1=\"" << px(f.x0 - 5) << "\" y1=\"" << px(y) << "\" x2=\"" << px(f.x0)
                << "\" y2=\"" << px(y) << "\" stroke=\"#333\"/>\n";
            char lab[32];
            std::snprintf(lab, sizeof lab, "1e%d", static_cast<int>(d));
            out << "<text x=\"" << px(f.x0 - 8) << "\" y=\"" << px(y + 4)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << lab
                << "</text>\n";
        }
    } else {
        const double ystep = nice_step((ymax - ymin) / 6.0);
        for (double v = std::ceil(ymin / ystep) * ystep; v <= ymax + 1e-9; v += ystep) {
            const double y = f.y1 - (v - ymin) / (ymax - ymin) * (f.y1 - f.y0);
            out << "<line x1=\"" << px(f.x0 - 5) << "\" y1=\"" << px(y) << "\" x2=\"" << px(f.x0)
                << "\" y2=\"" << px(y) << "\" stroke=\"#333\"/>\n";
            char lab[32];
            std::snprintf(lab, sizeof lab, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
            out << "<text x=\"" << px(f.x0 - 8) << "\" y=\"" << px(y + 4)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << lab
                << "</text>\n";
        }
    }

    // axis labels
    out << "<text x=\"" << px((f.x0 + f.x1) / 2) << "\" y=\"" << px(spec.height - 8.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << esc(spec.x_label) << "</text>\n";
    if (!spec.y_label.empty())
        out << "<text x=\"16\" y=\"" << px((f.y0 + f.y1) / 2) << "\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
            << px((f.y0 + f.y1) / 2) << ")\">" << esc(spec.y_label) << "</text>\n";

    // curves
    std::vector<std::pair<std::string, int>> entries;
    std::vector<bool> dashes;
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % 8];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
        if (series[s].dashed) out << " stroke-dasharray=\"6 4\"";
        out << " points=\"";
        const std::size_t n = series[s].t.size();
        const std::size_t stride = draw_stride(n);
        for (std::size_t k = 0; k < n; k += stride) {
            if (k) out << ' ';
            out << px(sx(series[s].t[k])) << ',' << px(sy(series[s].y[k]));
        }
        if ((n - 1) % stride != 0)
            out << ' ' << px(sx(series[s].t[n - 1])) << ',' << px(sy(series[s].y[n - 1]));
        out << "\"/>\n";
        entries.emplace_back(series[s].label, static_cast<int>(s));
        dashes.push_back(series[s].dashed);
    }
    legend(out, f, entries, dashes);
    out << "</svg>\n";
    return out.str();
}

std::string render_trajectories_3d(const std::vector<Path3>& paths, const Plot3Spec& spec) {
    if (paths.empty()) throw ValidationError("plot: no trajectories selected");
    for (const Path3& p : paths)
        if (p.points.size() < 2)
            throw ValidationError("plot: path '" + p.label + "' has fewer than two points");

    const double az = spec.azimuth_deg * M_PI / 180.0;
    const double el = spec.elevation_deg * M_PI / 180.0;
    auto project = [&](const Vec3& v) {
        const double u = -v.x * std::sin(az) + v.y * std::cos(az);
        const double w = -v.x * std::cos(az) * std::sin(el) - v.y * std::sin(az) * std::sin(el) +
                         v.z * std::cos(el);
        return std::pair<double, double>{u, w};
    };

    double umin = std::numeric_limits<double>::infinity(), umax = -umin;
    double wmin = umin, wmax = -umin;
    auto grow = [&](const Vec3& v) {
        auto [u, w] = project(v);
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        wmin = std::min(wmin, w);
        wmax = std::max(wmax, w);
    };
    for (const Path3& p : paths)
        for (const Vec3& v : p.points) grow(v);
    for (const auto& [a, b] : spec.links) {
        grow(a);
        grow(b);
    }
    const double du = std::max(umax - umin, 1e-9);
    const double dw = std::max(wmax - wmin, 1e-9);
    const double pad = 0.06 * std::max(du, dw);

    const Frame f{16.0, 40.0, spec.width - 16.0, spec.height - 16.0};
    const double scale =
        std::min((f.x1 - f.x0) / (du + 2 * pad), (f.y1 - f.y0) / (dw + 2 * pad));
    auto sx = [&](double u) { return (f.x0 + f.x1) / 2 + (u - (umin + umax) / 2) * scale; };
    auto sy = [&](double w) { return (f.y0 + f.y1) / 2 - (w - (wmin + wmax) / 2) * scale; };

    std::ostringstream out;
    open_svg(out, spec.width, spec.height, spec.title);

    for (const auto& [a, b] : spec.links) {
        auto [ua, wa] = project(a);
        auto [ub, wb] = project(b);
        out << "<line x1=\"" << px(sx(ua)) << "\" y1=\"" << px(sy(wa)) << "\" x2=\"" << px(sx(ub))
            << "\" y2=\"" << px(sy(wb)) << "\" stroke=\"black\" stroke-width=\"1.2\"/>\n";
    }

    std::vector<std::pair<std::string, int>> entries;
    std::vector<bool> dashes;
    for (std::size_t s = 0; s < paths.size(); ++s) {
        const char* color = kPalette[s % 8];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.4\"";
        if (paths[s].dashed) out << " stroke-dasharray=\"5 4\"";
        out << " points=\"";
        const std::size_t n = paths[s].points.size();
        const std::size_t stride = draw_stride(n);
        for (std::size_t k = 0; k < n; k += stride) {
            auto [u, w] = project(paths[s].points[k]);
            if (k) out << ' ';
            out << px(sx(u)) << ',' << px(sy(w));
        }
        if ((n - 1) % stride != 0) {
            auto [u, w] = project(paths[s].points[n - 1]);
            out << ' ' << px(sx(u)) << ',' << px(sy(w));
        }
        out << "\"/>\n";
        // marker at the final point
        auto [u, w] = project(paths[s].points.back());
        out << "<circle cx=\"" << px(sx(u)) << "\" cy=\"" << px(sy(w)) << "\" r=\"3\" fill=\""
            << color << "\"/>\n";
        entries.emplace_back(paths[s].label, static_cast<int>(s));
        dashes.push_back(paths[s].dashed);
    }
    legend(out, Frame{f.x0 + 24, f.y0, f.x1, f.y1}, entries, dashes);
    out << "</svg>\n";
    return out.str();
}

} // namespace bearform

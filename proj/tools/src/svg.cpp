#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cli {

namespace {

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

}  // namespace

std::string f1_svg(const codesign::F1Curve& curve, const std::vector<Marker>& markers, const std::string& title) {
    constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
    double x0 = 1.0, x1 = 10.0, y1 = curve.ceiling;
    for (const auto& [f, v] : curve.samples) {
        x1 = std::max(x1, f);
        y1 = std::max(y1, v);
    }
    for (const auto& m : markers) {
        x1 = std::max(x1, m.throughput_fps);
        y1 = std::max(y1, m.v_safe);
    }
    y1 = y1 > 0 ? y1 * 1.1 : 1.0;
    const double lx0 = std::log10(x0), lx1 = std::log10(x1);
    auto px = [&](double f) { return L + (std::log10(std::max(f, x0)) - lx0) / (lx1 - lx0) * (W - L - R); };
    auto py = [&](double v) { return H - B - v / y1 * (H - T - B); };

    std::ostringstream s;
    s.precision(5);
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title) << "</text>\n";
    s << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (double d = std::floor(lx0); d <= lx1; d += 1.0) {
        const double f = std::pow(10.0, d);
        if (f < x0) continue;
        s << "<text x=\"" << px(f) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << f << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double v = y1 * i / 4.0;
        s << "<text x=\"" << L - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << v << "</text>\n";
    }
    s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">action throughput (FPS)</text>\n";
    s << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (T + H - B) / 2 << ")\">safe velocity (m/s)</text>\n";

    s << "<line x1=\"" << L << "\" y1=\"" << py(curve.ceiling) << "\" x2=\"" << W - R << "\" y2=\"" << py(curve.ceiling)
      << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (const auto& [f, v] : curve.samples) s << px(f) << ',' << py(v) << ' ';
    s << "\"/>\n";
    const double kx = px(curve.knee.throughput_fps), ky = py(curve.knee.v_safe);
    s << "<circle cx=\"" << kx << "\" cy=\"" << ky << "\" r=\"4\" fill=\"firebrick\"/>\n";
    s << "<text x=\"" << kx + 6 << "\" y=\"" << ky + 16 << "\" fill=\"firebrick\">knee " << curve.knee.throughput_fps
      << " FPS</text>\n";
    for (const auto& m : markers) {
        const double mx = px(m.throughput_fps), my = py(m.v_safe);
        s << "<rect x=\"" << mx - 3 << "\" y=\"" << my - 3 << "\" width=\"6\" height=\"6\" fill=\"darkorange\"/>\n";
        s << "<text x=\"" << mx + 5 << "\" y=\"" << my - 5 << "\">" << escape(m.label) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace cli

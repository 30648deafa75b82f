#ifdef DICKE2_WITH_SVG

#include "dicke2/svg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace dicke2 {

namespace {

std::string basin_label(const AttractorVerdict& v) {
    if (v.kind == AttractorKind::FixedPointConvergence && v.fixed_point)
        return to_string(*v.fixed_point);
    if (v.kind == AttractorKind::LimitCycle) return v.sublabel;
    if (v.kind == AttractorKind::Localized) return "U0";
    return to_string(v.kind);
}

}  // namespace

std::string svg_label_color(const std::string& label) {
    static const std::map<std::string, std::string> palette = {
        {"NPdown", "#2061a9"}, {"NPup", "#8ec4e8"},
        {"SPplus", "#f28e2b"}, {"SPminus", "#c46210"},
        {"SP", "#f28e2b"},     {"Bdown", "#59a14f"},
        {"Bup", "#a6d49f"},    {"U0", "#8c510a"},
        {"Cdown", "#bf812d"},  {"Cup", "#dfc27d"},
        {"LC", "#9ecadb"},     {"LC_NP", "#74a9cf"},
        {"LC_SP", "#4d83b8"},  {"Chaos", "#ffd92f"},
        {"none", "#cccccc"},   {"Unresolved", "#eeeeee"},
        {"NPdown+NPup", "#6a51a3"}, {"Cdown+Cup", "#54278f"},
        {"error", "#ff00ff"},  {"Indeterminate", "#eeeeee"}};
    auto it = palette.find(label);
    return it != palette.end() ? it->second : "#999999";
}

namespace {

struct Frame {
    double width = 640, height = 480, margin = 60;

    double sx(double u) const {  // u in [0,1]
        return margin + u * (width - 2 * margin);
    }
    double sy(double v) const {  // v in [0,1], flipped
        return height - margin - v * (height - 2 * margin);
    }
};

void open_svg(std::ostringstream& os, const Frame& f) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width
       << "\" height=\"" << f.height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axis_labels(std::ostringstream& os, const Frame& f,
                 const std::string& xname, double x0, double x1,
                 const std::string& yname, double y0, double y1) {
    os << "<text x=\"" << f.width / 2 << "\" y=\"" << f.height - 15
       << "\" text-anchor=\"middle\" font-size=\"14\">" << xname
       << "</text>\n";
    os << "<text x=\"18\" y=\"" << f.height / 2
       << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 "
          "18 "
       << f.height / 2 << ")\">" << yname << "</text>\n";
    auto tick = [&](double frac, double value, bool xaxis) {
        std::ostringstream v;
        v.precision(3);
        v << value;
        if (xaxis)
            os << "<text x=\"" << f.sx(frac) << "\" y=\""
               << f.height - f.margin + 18
               << "\" text-anchor=\"middle\" font-size=\"11\">" << v.str()
               << "</text>\n";
        else
            os << "<text x=\"" << f.margin - 8 << "\" y=\""
               << f.sy(frac) + 4
               << "\" text-anchor=\"end\" font-size=\"11\">" << v.str()
               << "</text>\n";
    };
    for (double frac : {0.0, 0.5, 1.0}) {
        tick(frac, x0 + frac * (x1 - x0), true);
        tick(frac, y0 + frac * (y1 - y0), false);
    }
}

void legend(std::ostringstream& os, const Frame& f,
            const std::set<std::string>& labels) {
    double y = 16;
    for (const auto& label : labels) {
        os << "<rect x=\"" << f.width - 150 << "\" y=\"" << y
           << "\" width=\"12\" height=\"12\" fill=\""
           << svg_label_color(label) << "\" stroke=\"black\" "
           << "stroke-width=\"0.4\"/>\n";
        os << "<text x=\"" << f.width - 133 << "\" y=\"" << y + 10
           << "\" font-size=\"11\">" << label << "</text>\n";
        y += 16;
    }
}

}  // namespace

std::string svg_phase_diagram(const PhaseDiagram& pd) {
    Frame f;
    std::ostringstream os;
    open_svg(os, f);
    const size_t nx = pd.x.values.size(), ny = pd.y.values.size();
    std::set<std::string> labels;
    for (size_t iy = 0; iy < ny; ++iy)
        for (size_t ix = 0; ix < nx; ++ix) {
            const auto& c = pd.at(iy, ix);
            labels.insert(c.label);
            const double x = f.sx(double(ix) / nx);
            const double y = f.sy(double(iy + 1) / ny);
            const double w = (f.width - 2 * f.margin) / nx + 0.5;
            const double h = (f.height - 2 * f.margin) / ny + 0.5;
            os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w
               << "\" height=\"" << h << "\" fill=\""
               << svg_label_color(c.label) << "\"/>\n";
        }
    axis_labels(os, f, pd.x.name, pd.x.values.front(), pd.x.values.back(),
                pd.y.name, pd.y.values.front(), pd.y.values.back());
    legend(os, f, labels);
    os << "</svg>\n";
    return os.str();
}

std::string svg_basin_map(const BasinMap& map) {
    Frame f;
    std::ostringstream os;
    open_svg(os, f);
    const size_t nx = map.lon_deg.size(), ny = map.lat_deg.size();
    std::set<std::string> labels;
    for (size_t iy = 0; iy < ny; ++iy)
        for (size_t ix = 0; ix < nx; ++ix) {
            const std::string label = basin_label(map.at(iy, ix));
            labels.insert(label);
            const double x = f.sx(double(ix) / nx);
            const double y = f.sy(double(iy + 1) / ny);
            const double w = (f.width - 2 * f.margin) / nx + 0.5;
            const double h = (f.height - 2 * f.margin) / ny + 0.5;
            os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w
               << "\" height=\"" << h << "\" fill=\"" << svg_label_color(label)
               << "\"/>\n";
        }
    axis_labels(os, f, "longitude (deg)", map.lon_deg.front(),
                map.lon_deg.back(), "latitude (deg)", map.lat_deg.front(),
                map.lat_deg.back());
    legend(os, f, labels);
    os << "</svg>\n";
    return os.str();
}

std::string svg_timeseries(const Trajectory& traj, int component,
                           const std::string& label) {
    Frame f;
    std::ostringstream os;
    open_svg(os, f);
    if (traj.size() < 2) {
        os << "</svg>\n";
        return os.str();
    }
    double lo = 1e300, hi = -1e300;
    for (const auto& s : traj.states) {
        const double v = s.as_array()[component];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo < 1e-12) {
        hi += 1.0;
        lo -= 1.0;
    }
    os << "<polyline fill=\"none\" stroke=\"#2061a9\" stroke-width=\"1\" "
          "points=\"";
    const size_t stride = std::max<size_t>(1, traj.size() / 4000);
    for (size_t i = 0; i < traj.size(); i += stride) {
        const double u = traj.times[i] / traj.times.back();
        const double v =
            (traj.states[i].as_array()[component] - lo) / (hi - lo);
        os << f.sx(u) << ',' << f.sy(v) << ' ';
    }
    os << "\"/>\n";
    axis_labels(os, f, "t", 0.0, traj.times.back(), label, lo, hi);
    os << "</svg>\n";
    return os.str();
}

}  // namespace dicke2

#endif  // DICKE2_WITH_SVG

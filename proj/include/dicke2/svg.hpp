#ifndef DICKE2_SVG_HPP
#define DICKE2_SVG_HPP

#ifdef DICKE2_WITH_SVG

#include <string>

#include "dicke2/analysis.hpp"
#include "dicke2/integrator.hpp"

namespace dicke2 {

// Fixed label -> fill color legend shared by all heatmaps (documented in
// the README).
std::string svg_label_color(const std::string& label);

// Phase-diagram heatmap with axis ticks and a legend of the labels present.
std::string svg_phase_diagram(const PhaseDiagram& pd);

// Basin-of-attraction map in an equirectangular longitude/latitude frame.
std::string svg_basin_map(const BasinMap& map);

// Time series of one observable (state component index into
// (x, y, n, sx, sy, sz)).
std::string svg_timeseries(const Trajectory& traj, int component,
                           const std::string& label);

}  // namespace dicke2

#endif  // DICKE2_WITH_SVG
#endif

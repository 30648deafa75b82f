#ifndef DICKE2_IO_HPP
#define DICKE2_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "dicke2/analysis.hpp"
#include "dicke2/fixed_points.hpp"
#include "dicke2/integrator.hpp"
#include "dicke2/lindblad.hpp"

namespace dicke2 {

using json = nlohmann::json;

// Trajectory CSV: header `t,x,y,n,sx,sy,sz`, one row per sample, trailing
// `# terminal=...` comment line.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

// Master-equation series in the same schema plus `jx2,nad_jz` columns;
// spin expectations rescaled to Bloch components via 2/N.
void write_expectation_series_csv(std::ostream& os,
                                  const ExpectationSeries& series,
                                  int n_qubits);

void write_bifurcation_csv(std::ostream& os,
                           const std::vector<BifurcationPoint>& scan);

void write_psd_csv(std::ostream& os, const PowerSpectrum& ps);

void write_phase_diagram_csv(std::ostream& os, const PhaseDiagram& pd);

void write_basin_csv(std::ostream& os, const BasinMap& map);

// JSON records. Infinite boundary values serialize as the string "inf",
// undefined ones as null.
json boundaries_to_json(const PhaseBoundaries& b);
json fixed_point_to_json(const FixedPoint& fp);
json fixed_points_to_json(const std::vector<FixedPoint>& fps);
json params_to_json(const ModelParams& p);
json state_to_json(const MeanFieldState& s);
json verdict_to_json(const AttractorVerdict& v);
json phase_diagram_to_json(const PhaseDiagram& pd);
json basin_to_json(const BasinMap& map);
json deviation_report_to_json(const DeviationReport& rep);

std::string format_double(double v);

}  // namespace dicke2

#endif

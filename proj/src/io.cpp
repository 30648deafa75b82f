#include "dicke2/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace dicke2 {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

json optional_boundary(const std::optional<double>& v) {
    if (!v) return nullptr;
    if (std::isinf(*v)) return "inf";
    return *v;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,x,y,n,sx,sy,sz\n";
    for (size_t i = 0; i < traj.size(); ++i) {
        const auto& s = traj.states[i];
        os << format_double(traj.times[i]) << ',' << format_double(s.x) << ','
           << format_double(s.y) << ',' << format_double(s.n) << ','
           << format_double(s.sx) << ',' << format_double(s.sy) << ','
           << format_double(s.sz) << '\n';
    }
    if (traj.terminal == Terminal::Diverged)
        os << "# terminal=diverged t_div=" << format_double(traj.t_div)
           << '\n';
    else
        os << "# terminal=completed\n";
}

void write_expectation_series_csv(std::ostream& os,
                                  const ExpectationSeries& series,
                                  int n_qubits) {
    const double scale = 2.0 / n_qubits;
    os << "t,x,y,n,sx,sy,sz,jx2,nad_jz\n";
    for (const auto& s : series.samples) {
        os << format_double(s.t) << ',' << format_double(s.x) << ','
           << format_double(s.y) << ',' << format_double(s.n) << ','
           << format_double(scale * s.jx) << ','
           << format_double(scale * s.jy) << ','
           << format_double(scale * s.jz) << ',' << format_double(s.jx2)
           << ',' << format_double(s.n_jz) << '\n';
    }
    os << "# terminal=completed";
    if (series.stopped_stationary) os << " (stationary)";
    os << '\n';
    if (series.cutoff_suspect)
        os << "# warning=cutoff_suspect top2_population="
           << format_double(series.max_top2_population) << '\n';
}

void write_bifurcation_csv(std::ostream& os,
                           const std::vector<BifurcationPoint>& scan) {
    os << "g,localized,amplitude_count,lyapunov,amplitudes\n";
    for (const auto& pt : scan) {
        os << format_double(pt.g) << ',' << (pt.localized ? 1 : 0) << ','
           << pt.amplitudes.size() << ',';
        if (pt.lyapunov) os << format_double(*pt.lyapunov);
        os << ',';
        for (size_t i = 0; i < pt.amplitudes.size(); ++i) {
            if (i) os << ';';
            os << format_double(pt.amplitudes[i]);
        }
        os << '\n';
    }
}

void write_psd_csv(std::ostream& os, const PowerSpectrum& ps) {
    os << "omega,psd\n";
    for (size_t i = 0; i < ps.omega.size(); ++i)
        os << format_double(ps.omega[i]) << ',' << format_double(ps.psd[i])
           << '\n';
}

void write_phase_diagram_csv(std::ostream& os, const PhaseDiagram& pd) {
    os << pd.x.name << ',' << pd.y.name
       << ",label,lyapunov,dominant_frequency,amplitude_count,status\n";
    for (size_t iy = 0; iy < pd.y.values.size(); ++iy)
        for (size_t ix = 0; ix < pd.x.values.size(); ++ix) {
            const auto& c = pd.at(iy, ix);
            os << format_double(pd.x.values[ix]) << ','
               << format_double(pd.y.values[iy]) << ',' << c.label << ',';
            if (c.lyapunov) os << format_double(*c.lyapunov);
            os << ',';
            if (c.dominant_frequency)
                os << format_double(*c.dominant_frequency);
            os << ',' << c.amplitude_count << ',' << c.status << '\n';
        }
}

void write_basin_csv(std::ostream& os, const BasinMap& map) {
    os << "lon_deg,lat_deg,kind,label,lyapunov\n";
    for (size_t ilat = 0; ilat < map.lat_deg.size(); ++ilat)
        for (size_t ilon = 0; ilon < map.lon_deg.size(); ++ilon) {
            const auto& v = map.at(ilat, ilon);
            std::string label = to_string(v.kind);
            if (v.kind == AttractorKind::FixedPointConvergence &&
                v.fixed_point)
                label = to_string(*v.fixed_point);
            else if (v.kind == AttractorKind::LimitCycle)
                label = v.sublabel;
            os << format_double(map.lon_deg[ilon]) << ','
               << format_double(map.lat_deg[ilat]) << ','
               << to_string(v.kind) << ',' << label << ',';
            if (v.lyapunov) os << format_double(*v.lyapunov);
            os << '\n';
        }
}

json boundaries_to_json(const PhaseBoundaries& b) {
    json j;
    j["lambda_t"] = b.lambda_t;
    j["g_t1"] = optional_boundary(b.g_t1);
    j["g_t2"] = optional_boundary(b.g_t2);
    j["g_t3"] = optional_boundary(b.g_t3);
    j["g_t4"] = optional_boundary(b.g_t4);
    j["lambda_window"] = json::array(
        {b.lambda_lo, std::isinf(b.lambda_hi) ? json("inf") : json(b.lambda_hi)});
    return j;
}

json params_to_json(const ModelParams& p) {
    return json{{"omega0", p.omega0}, {"omega_q", p.omega_q},
                {"g", p.g},           {"lambda", p.lambda},
                {"kappa", p.kappa},   {"n_qubits", p.n_qubits},
                {"omega_z", p.omega_z()}};
}

json state_to_json(const MeanFieldState& s) {
    auto num = [](double v) -> json {
        if (std::isinf(v)) return "inf";
        return v;
    };
    return json{{"x", num(s.x)},   {"y", num(s.y)},   {"n", num(s.n)},
                {"sx", num(s.sx)}, {"sy", num(s.sy)}, {"sz", num(s.sz)}};
}

json fixed_point_to_json(const FixedPoint& fp) {
    json j;
    j["kind"] = to_string(fp.kind);
    j["state"] = state_to_json(fp.state);
    j["stability"] = to_string(fp.stability);
    json evs = json::array();
    for (const auto& ev : fp.leading_eigenvalues)
        evs.push_back(json::array({ev.real(), ev.imag()}));
    j["leading_eigenvalues"] = evs;
    return j;
}

json fixed_points_to_json(const std::vector<FixedPoint>& fps) {
    json arr = json::array();
    for (const auto& fp : fps) arr.push_back(fixed_point_to_json(fp));
    return arr;
}

json verdict_to_json(const AttractorVerdict& v) {
    json j;
    j["kind"] = to_string(v.kind);
    if (v.fixed_point) j["fixed_point"] = to_string(*v.fixed_point);
    if (v.lyapunov) j["lyapunov"] = *v.lyapunov;
    if (v.dominant_frequency) j["dominant_frequency"] = *v.dominant_frequency;
    j["amplitudes"] = v.extrema_amplitudes;
    j["support"] = {{"kind", to_string(v.support.kind)},
                    {"sign", v.support.sign},
                    {"transitions", v.support.transitions}};
    if (!v.sublabel.empty()) j["sublabel"] = v.sublabel;
    if (v.t_div) j["t_div"] = *v.t_div;
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

json phase_diagram_to_json(const PhaseDiagram& pd) {
    json j;
    j["mode"] = pd.mode;
    j["params"] = params_to_json(pd.base);
    j["axes"] = {{"x", {{"name", pd.x.name}, {"values", pd.x.values}}},
                 {"y", {{"name", pd.y.name}, {"values", pd.y.values}}}};
    if (pd.initial) j["initial"] = state_to_json(*pd.initial);
    json cells = json::array();
    for (size_t iy = 0; iy < pd.y.values.size(); ++iy)
        for (size_t ix = 0; ix < pd.x.values.size(); ++ix) {
            const auto& c = pd.at(iy, ix);
            json cj{{"ix", ix}, {"iy", iy}, {"label", c.label},
                    {"status", c.status}};
            if (c.lyapunov) cj["lyapunov"] = *c.lyapunov;
            if (c.dominant_frequency)
                cj["dominant_frequency"] = *c.dominant_frequency;
            cj["amplitude_count"] = c.amplitude_count;
            cells.push_back(std::move(cj));
        }
    j["cells"] = std::move(cells);
    j["resolved_fraction"] = pd.resolved_fraction();
    return j;
}

json basin_to_json(const BasinMap& map) {
    json j;
    j["lon_deg"] = map.lon_deg;
    j["lat_deg"] = map.lat_deg;
    json cells = json::array();
    for (size_t ilat = 0; ilat < map.lat_deg.size(); ++ilat)
        for (size_t ilon = 0; ilon < map.lon_deg.size(); ++ilon)
            cells.push_back(verdict_to_json(map.at(ilat, ilon)));
    j["cells"] = std::move(cells);
    return j;
}

json deviation_report_to_json(const DeviationReport& rep) {
    json j;
    j["n_qubits"] = rep.n_qubits;
    j["sup_deviation"] = {{"x", rep.sup_x},   {"y", rep.sup_y},
                          {"n", rep.sup_n},   {"sx", rep.sup_sx},
                          {"sy", rep.sup_sy}, {"sz", rep.sup_sz}};
    j["stationary"] = {{"me_n", rep.me_n_stationary},
                       {"me_sz", rep.me_sz_stationary},
                       {"me_jx2", rep.me_jx2_stationary},
                       {"me_n_jz", rep.me_njz_stationary},
                       {"mf_n", rep.mf_n_stationary},
                       {"mf_sz", rep.mf_sz_stationary},
                       {"mf_sx", rep.mf_sx_stationary}};
    j["cutoff_suspect"] = rep.cutoff_suspect;
    return j;
}

}  // namespace dicke2

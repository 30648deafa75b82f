#include "dicke2/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

#include <fftw3.h>

#include "dicke2/parallel.hpp"

namespace dicke2 {

std::string to_string(AttractorKind k) {
    switch (k) {
        case AttractorKind::FixedPointConvergence: return "FixedPoint";
        case AttractorKind::LimitCycle: return "LimitCycle";
        case AttractorKind::Chaos: return "Chaos";
        case AttractorKind::Localized: return "Localized";
        case AttractorKind::Unresolved: return "Unresolved";
    }
    return "?";
}

std::string to_string(SignSupport::Kind k) {
    switch (k) {
        case SignSupport::Kind::Isolated: return "Isolated";
        case SignSupport::Kind::Merged: return "Merged";
        case SignSupport::Kind::Indeterminate: return "Indeterminate";
    }
    return "?";
}

namespace {

const Vec6 kTangentSeed = (Vec6() << 1, 1, 1, 1, 1, 1).finished() / std::sqrt(6.0);

double rhs_norm(const MeanFieldState& s, const ModelParams& p) {
    return rhs(s, p).norm();
}

}  // namespace

std::optional<double> lyapunov_exponent(const MeanFieldState& initial,
                                        const ModelParams& p,
                                        const AnalysisConfig& cfg) {
    IntegratorConfig icfg = cfg.integrator;
    icfg.t_end = cfg.le_transient + cfg.le_span;
    auto [traj, record] =
        integrate_with_tangent(initial, kTangentSeed, p, icfg, cfg.renorm_dt);
    if (traj.diverged()) return std::nullopt;
    return record.mean_rate(cfg.le_transient);
}

std::vector<double> local_maxima(const std::vector<double>& v, double) {
    std::vector<double> out;
    for (size_t i = 1; i + 1 < v.size(); ++i) {
        if (!(v[i] > v[i - 1] && v[i] > v[i + 1])) continue;
        // Quadratic refinement through the three samples.
        const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
        double peak = v[i];
        if (denom < 0) {
            const double d = v[i - 1] - v[i + 1];
            peak = v[i] - d * d / (8.0 * denom);
        }
        out.push_back(peak);
    }
    return out;
}

std::vector<double> cluster_amplitudes(std::vector<double> maxima,
                                       double tol) {
    if (maxima.empty()) return {};
    std::sort(maxima.begin(), maxima.end());
    std::vector<double> out;
    double acc = maxima[0], lo = maxima[0];
    size_t count = 1;
    for (size_t i = 1; i < maxima.size(); ++i) {
        if (maxima[i] - lo <= tol) {
            acc += maxima[i];
            ++count;
        } else {
            out.push_back(acc / count);
            acc = lo = maxima[i];
            count = 1;
        }
    }
    out.push_back(acc / count);
    return out;
}

double PowerSpectrum::peak_to_floor_db(double omega_max) const {
    std::vector<double> band;
    for (size_t i = 0; i < omega.size(); ++i)
        if (omega[i] > 0 && omega[i] <= omega_max) band.push_back(psd[i]);
    if (band.size() < 8) return 0.0;
    const double peak = *std::max_element(band.begin(), band.end());
    std::nth_element(band.begin(), band.begin() + band.size() / 2, band.end());
    const double median = band[band.size() / 2];
    if (median <= 0) return 300.0;
    return 10.0 * std::log10(peak / median);
}

double PowerSpectrum::dominant_frequency() const {
    size_t best = 0;
    for (size_t i = 1; i < psd.size(); ++i)
        if (psd[i] > psd[best]) best = i;
    return omega[best];
}

namespace {

// |FFT|^2 of the mean-subtracted, Hann-windowed segment, accumulated into
// acc (padded length n >= segment size).
void periodogram_accumulate(const double* x, size_t seg, size_t n,
                            std::vector<double>& acc) {
    std::vector<double> buf(n, 0.0);
    double mean = 0;
    for (size_t k = 0; k < seg; ++k) mean += x[k];
    mean /= seg;
    for (size_t k = 0; k < seg; ++k) {
        const double w =
            0.5 * (1.0 - std::cos(2.0 * M_PI * k / (double)(seg - 1)));
        buf[k] = (x[k] - mean) * w;
    }
    std::vector<fftw_complex> out(n / 2 + 1);
    // The FFTW planner is not thread-safe; executions are.
    static std::mutex planner_mutex;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf.data(),
                                    out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(plan);
    }
    for (size_t j = 0; j <= n / 2; ++j)
        acc[j] += out[j][0] * out[j][0] + out[j][1] * out[j][1];
}

std::vector<double> observable_series(const Trajectory& traj, double t_skip,
                                      int index) {
    std::vector<double> x;
    for (size_t i = traj.index_at(t_skip); i < traj.size(); ++i)
        x.push_back(traj.states[i].as_array()[index]);
    return x;
}

}  // namespace

PowerSpectrum power_spectrum(const Trajectory& traj, double t_skip,
                             int observable_index) {
    const auto x = observable_series(traj, t_skip, observable_index);
    const size_t m = x.size();
    if (traj.size() < 2 || m < 4096)
        throw TooShort("power_spectrum needs >= 4096 post-transient samples, got " +
                       std::to_string(m));
    const double dt = traj.times[1] - traj.times[0];

    std::vector<double> acc(m / 2 + 1, 0.0);
    periodogram_accumulate(x.data(), m, m, acc);

    PowerSpectrum ps;
    ps.omega.reserve(m / 2);
    ps.psd.reserve(m / 2);
    for (size_t j = 1; j <= m / 2; ++j) {
        ps.omega.push_back(2.0 * M_PI * j / (m * dt));
        ps.psd.push_back(acc[j]);
    }
    return ps;
}

PowerSpectrum power_spectrum_welch(const Trajectory& traj, double t_skip,
                                   size_t segment_samples, int zero_pad,
                                   int observable_index) {
    const auto x = observable_series(traj, t_skip, observable_index);
    if (traj.size() < 2 || x.size() < segment_samples)
        throw TooShort("welch spectrum needs at least one full segment");
    const double dt = traj.times[1] - traj.times[0];
    const size_t n = segment_samples * std::max(1, zero_pad);
    const size_t hop = segment_samples / 2;

    std::vector<double> acc(n / 2 + 1, 0.0);
    size_t segments = 0;
    for (size_t s0 = 0; s0 + segment_samples <= x.size(); s0 += hop) {
        periodogram_accumulate(x.data() + s0, segment_samples, n, acc);
        ++segments;
    }

    PowerSpectrum ps;
    ps.omega.reserve(n / 2);
    ps.psd.reserve(n / 2);
    for (size_t j = 1; j <= n / 2; ++j) {
        ps.omega.push_back(2.0 * M_PI * j / (n * dt));
        ps.psd.push_back(acc[j] / segments);
    }
    return ps;
}

SignSupport attractor_support(const Trajectory& traj, double t_skip,
                              double dead_band) {
    SignSupport out{SignSupport::Kind::Indeterminate, 0, 0};
    int last = 0;
    for (size_t i = traj.index_at(t_skip); i < traj.size(); ++i) {
        const double x = traj.states[i].x;
        if (std::abs(x) < dead_band) continue;
        const int s = x > 0 ? 1 : -1;
        if (last != 0 && s != last) ++out.transitions;
        last = s;
    }
    if (last == 0) return out;
    out.kind = out.transitions > 0 ? SignSupport::Kind::Merged
                                   : SignSupport::Kind::Isolated;
    out.sign = out.transitions > 0 ? 0 : last;
    return out;
}

namespace {

struct OscillationStats {
    std::vector<double> amplitudes;  // clustered local maxima of n(t)
    bool persistent = false;
    double max_value = 0;
};

OscillationStats oscillation_stats(const Trajectory& traj, double t_skip,
                                   const AnalysisThresholds& th) {
    OscillationStats st;
    const size_t i0 = traj.index_at(t_skip);
    if (i0 + 8 > traj.size()) return st;
    std::vector<double> n(traj.size() - i0);
    for (size_t k = 0; k < n.size(); ++k) n[k] = traj.states[i0 + k].n;

    auto maxima = local_maxima(n, 0.0);
    if (!maxima.empty()) {
        const double top = *std::max_element(maxima.begin(), maxima.end());
        st.amplitudes =
            cluster_amplitudes(maxima, th.amp_cluster_rel * std::abs(top));
    }
    st.max_value = *std::max_element(n.begin(), n.end());

    // Oscillations persist when the swing in the trailing half has not
    // collapsed relative to the leading half.
    const size_t half = n.size() / 2;
    auto swing = [&](size_t a, size_t b) {
        double lo = n[a], hi = n[a];
        for (size_t k = a; k < b; ++k) {
            lo = std::min(lo, n[k]);
            hi = std::max(hi, n[k]);
        }
        return hi - lo;
    };
    const double first = swing(0, half), second = swing(half, n.size());
    size_t tail_maxima = 0;
    for (size_t k = half + 1; k + 1 < n.size(); ++k)
        if (n[k] > n[k - 1] && n[k] > n[k + 1]) ++tail_maxima;
    st.persistent = second > 0.25 * first &&
                    second > 1e-10 * std::max(1.0, st.max_value) &&
                    tail_maxima >= 3;
    return st;
}

std::pair<FpKind, double> nearest_fixed_point(const MeanFieldState& s,
                                              const ModelParams& p) {
    std::vector<FixedPoint> candidates{np_fixed_point(false),
                                       np_fixed_point(true)};
    for (auto& sp : sp_fixed_points(p)) candidates.push_back(sp);
    FpKind best = FpKind::NPdown;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& fp : candidates) {
        const double d = (s.as_vec() - fp.state.as_vec()).norm();
        if (d < best_d) {
            best_d = d;
            best = fp.kind;
        }
    }
    return {best, best_d};
}

std::string limit_cycle_sublabel(const Trajectory& traj, double t_skip,
                                 const ModelParams& p,
                                 const SignSupport& support) {
    // Cycles sweeping both signs of <X> enclose both superradiant lobes.
    if (support.kind == SignSupport::Kind::Merged) return "LC";
    const auto sps = sp_fixed_points(p);
    if (sps.empty()) return "LC_NP";
    const Vec6 np = np_fixed_point(false).state.as_vec();
    double d_np = 0, d_sp = 0;
    size_t count = 0;
    for (size_t i = traj.index_at(t_skip); i < traj.size(); ++i) {
        const Vec6 v = traj.states[i].as_vec();
        d_np += (v - np).norm();
        double best = std::numeric_limits<double>::infinity();
        for (const auto& sp : sps)
            best = std::min(best, (v - sp.state.as_vec()).norm());
        d_sp += best;
        ++count;
    }
    if (count == 0) return "LC";
    return d_sp < d_np ? "LC_SP" : "LC_NP";
}

}  // namespace

namespace {

AttractorVerdict classify_attractor_pass(const MeanFieldState& initial,
                                         const ModelParams& p,
                                         const AnalysisConfig& cfg,
                                         double t_end, bool can_extend) {
    AttractorVerdict v;
    const auto& th = cfg.thresholds;
    IntegratorConfig icfg = cfg.integrator;
    icfg.t_end = t_end;
    Trajectory traj = integrate(initial, p, icfg);
    if (traj.diverged()) {
        v.kind = AttractorKind::Localized;
        v.t_div = traj.t_div;
        return v;
    }

    const double t_skip = cfg.transient_frac * t_end;
    const size_t i0 = traj.index_at(t_skip);

    // Fixed-point convergence: derivative norm persistently below eps.
    const size_t tail = std::max<size_t>(10, (traj.size() - i0) / 100);
    bool at_fp = traj.size() > tail;
    for (size_t i = traj.size() - tail; at_fp && i < traj.size(); ++i)
        at_fp = rhs_norm(traj.states[i], p) < th.fp_rhs_eps * p.omega0;
    if (at_fp) {
        auto [kind, dist] = nearest_fixed_point(traj.states.back(), p);
        v.kind = AttractorKind::FixedPointConvergence;
        v.fixed_point = kind;
        if (dist > 1e-3)
            v.note = "nearest fixed point at distance " + std::to_string(dist);
        return v;
    }

    const auto osc = oscillation_stats(traj, t_skip, th);
    v.extrema_amplitudes = osc.amplitudes;
    v.support = attractor_support(traj, t_skip, th.sign_dead_band);
    if (traj.size() - i0 >= 4096) {
        try {
            v.dominant_frequency =
                power_spectrum(traj, t_skip).dominant_frequency();
        } catch (const TooShort&) {
        }
    }

    // Decaying oscillations on a slow spiral: no verdict can fire except
    // fixed-point convergence at a longer horizon, so skip the Lyapunov
    // run and defer.
    if (!osc.persistent && can_extend) {
        v.kind = AttractorKind::Unresolved;
        v.note = "oscillations not persistent at t_end=" +
                 std::to_string(t_end) + "; extending horizon";
        return v;
    }

    const auto le = lyapunov_exponent(initial, p, cfg);
    if (!le) {
        v.kind = AttractorKind::Localized;
        return v;
    }
    v.lyapunov = *le;

    if (std::abs(*le) <= th.lyapunov_zero_band * p.omega0 && osc.persistent) {
        v.kind = AttractorKind::LimitCycle;
        v.sublabel = limit_cycle_sublabel(traj, t_skip, p, v.support);
        return v;
    }
    if (*le > th.lyapunov_chaos * p.omega0) {
        v.kind = AttractorKind::Chaos;
        return v;
    }

    v.kind = AttractorKind::Unresolved;
    std::ostringstream note;
    note << "LE=" << *le << " persistent=" << osc.persistent
         << " rhs_norm=" << rhs_norm(traj.states.back(), p)
         << " t_end=" << t_end;
    v.note = note.str();
    return v;
}

}  // namespace

AttractorVerdict classify_attractor(const MeanFieldState& initial,
                                    const ModelParams& p,
                                    const AnalysisConfig& cfg) {
    double t_end = cfg.integrator.t_end;
    bool can_extend = t_end < cfg.max_classify_t_end;
    AttractorVerdict v =
        classify_attractor_pass(initial, p, cfg, t_end, can_extend);
    while (v.kind == AttractorKind::Unresolved && can_extend) {
        t_end = std::min(t_end * 4.0, cfg.max_classify_t_end);
        can_extend = t_end < cfg.max_classify_t_end;
        v = classify_attractor_pass(initial, p, cfg, t_end, can_extend);
    }
    return v;
}

std::vector<BifurcationPoint> bifurcation_scan(const ModelParams& base,
                                               const std::vector<double>& gs,
                                               const MeanFieldState& initial,
                                               const AnalysisConfig& cfg,
                                               bool with_lyapunov,
                                               int workers) {
    std::vector<BifurcationPoint> out(gs.size());
    parallel_for(gs.size(), workers, [&](size_t i) {
        ModelParams p = base;
        p.g = gs[i];
        BifurcationPoint& pt = out[i];
        pt.g = gs[i];
        Trajectory traj = integrate(initial, p, cfg.integrator);
        if (traj.diverged()) {
            pt.localized = true;
            return;
        }
        const double t_skip = cfg.transient_frac * cfg.integrator.t_end;
        pt.amplitudes =
            oscillation_stats(traj, t_skip, cfg.thresholds).amplitudes;
        if (with_lyapunov) pt.lyapunov = lyapunov_exponent(initial, p, cfg);
    });
    return out;
}

double BasinMap::area(
    const std::function<bool(const AttractorVerdict&)>& pred) const {
    const size_t n_lon = lon_deg.size();
    double total = 0;
    for (size_t ilat = 0; ilat < lat_deg.size(); ++ilat) {
        const double w_lat = std::cos(lat_deg[ilat] * M_PI / 180.0);
        for (size_t ilon = 0; ilon < n_lon; ++ilon) {
            if (!pred(at(ilat, ilon))) continue;
            double w = w_lat;
            if (ilon == 0 || ilon + 1 == n_lon) w *= 0.5;  // seam columns
            total += w;
        }
    }
    return total;
}

BasinMap basin_map(const ModelParams& p, int n_lon, int n_lat,
                   const MeanFieldState& cavity_initial,
                   const AnalysisConfig& cfg, int workers) {
    BasinMap map;
    for (int i = 0; i < n_lon; ++i)
        map.lon_deg.push_back(-180.0 + 360.0 * i / (n_lon - 1));
    for (int j = 0; j < n_lat; ++j)
        map.lat_deg.push_back(-90.0 + 180.0 * j / (n_lat - 1));
    map.cells.resize(static_cast<size_t>(n_lon) * n_lat);

    parallel_for(map.cells.size(), workers, [&](size_t idx) {
        const size_t ilat = idx / n_lon, ilon = idx % n_lon;
        const double lat = map.lat_deg[ilat] * M_PI / 180.0;
        const double lon = map.lon_deg[ilon] * M_PI / 180.0;
        const bool pole = std::abs(std::abs(map.lat_deg[ilat]) - 90.0) < 1e-12;
        if (pole && ilon != 0) return;  // poles are single cells, copied below
        double sx = std::cos(lat) * std::cos(lon);
        double sy = std::cos(lat) * std::sin(lon);
        double sz = std::sin(lat);
        if (pole) {
            sx = sy = 0.0;
            sz = map.lat_deg[ilat] > 0 ? 1.0 : -1.0;
        }
        MeanFieldState init =
            MeanFieldState::bloch(sx, sy, sz, cavity_initial.x,
                                  cavity_initial.y, cavity_initial.n);
        map.cells[idx] = classify_attractor(init, p, cfg);
    });
    // Replicate the single pole verdicts across the longitude row.
    for (size_t ilat : {size_t(0), map.lat_deg.size() - 1})
        for (size_t ilon = 1; ilon < map.lon_deg.size(); ++ilon)
            map.cells[ilat * n_lon + ilon] = map.cells[ilat * n_lon];
    return map;
}

namespace {

ModelParams apply_axis(ModelParams p, const std::string& name, double value) {
    if (name == "g")
        p.g = value;
    else if (name == "lambda")
        p.lambda = value;
    else if (name == "omega_z")
        p.omega_q = value / p.n_qubits;
    else if (name == "omega_q")
        p.omega_q = value;
    else if (name == "kappa")
        p.kappa = value;
    else if (name == "omega0")
        p.omega0 = value;
    else
        throw std::invalid_argument("unknown sweep axis: " + name);
    return p;
}

}  // namespace

double PhaseDiagram::resolved_fraction() const {
    if (cells.empty()) return 1.0;
    size_t ok = 0;
    for (const auto& c : cells)
        if (c.status == "ok") ++ok;
    return static_cast<double>(ok) / cells.size();
}

PhaseDiagram phase_sweep(const AxisSpec& x, const AxisSpec& y,
                         const ModelParams& base, SweepMode mode,
                         const std::optional<MeanFieldState>& initial,
                         const AnalysisConfig& cfg, int workers) {
    if (mode == SweepMode::Dynamics && !initial)
        throw std::invalid_argument("dynamics sweep requires an initial state");
    PhaseDiagram pd;
    pd.x = x;
    pd.y = y;
    pd.base = base;
    pd.initial = initial;
    pd.mode = mode == SweepMode::Dynamics ? "dynamics" : "analytic";
    pd.cells.resize(x.values.size() * y.values.size());

    parallel_for(pd.cells.size(), workers, [&](size_t idx) {
        const size_t ix = idx % x.values.size(), iy = idx / x.values.size();
        PhaseDiagramCell& cell = pd.cells[idx];
        try {
            ModelParams p = apply_axis(base, x.name, x.values[ix]);
            p = apply_axis(p, y.name, y.values[iy]);
            p.validate();
            if (mode == SweepMode::AnalyticFixedPoints) {
                cell.label = stable_phase(p).label;
            } else {
                const auto v = classify_attractor(*initial, p, cfg);
                switch (v.kind) {
                    case AttractorKind::Localized: cell.label = "U0"; break;
                    case AttractorKind::FixedPointConvergence:
                        cell.label = (v.fixed_point == FpKind::SPplus ||
                                      v.fixed_point == FpKind::SPminus)
                                         ? "SP"
                                         : to_string(*v.fixed_point);
                        break;
                    case AttractorKind::LimitCycle:
                        cell.label = v.sublabel;
                        break;
                    case AttractorKind::Chaos: cell.label = "Chaos"; break;
                    case AttractorKind::Unresolved:
                        cell.label = "Unresolved";
                        break;
                }
                if (v.lyapunov) cell.lyapunov = v.lyapunov;
                cell.dominant_frequency = v.dominant_frequency;
                cell.amplitude_count =
                    static_cast<int>(v.extrema_amplitudes.size());
            }
        } catch (const std::exception& e) {
            cell.label = "error";
            cell.status = e.what();
        }
    });
    return pd;
}

LinearFit linear_fit(const std::vector<double>& xs,
                     const std::vector<double>& ys) {
    const size_t n = xs.size();
    if (n < 2 || ys.size() != n)
        throw std::invalid_argument("linear_fit needs matched samples, n >= 2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    const double cov = sxy - sx * sy / n;
    LinearFit f;
    f.slope = cov / vx;
    f.intercept = (sy - f.slope * sx) / n;
    f.correlation = (vx > 0 && vy > 0) ? cov / std::sqrt(vx * vy) : 0.0;
    return f;
}

LinearFit loglog_fit(const std::vector<double>& xs,
                     const std::vector<double>& ys) {
    std::vector<double> lx, ly;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0) || !(ys[i] > 0))
            throw std::invalid_argument("loglog_fit needs positive data");
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    return linear_fit(lx, ly);
}

}  // namespace dicke2

#include "dicke2/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace dicke2 {

namespace {

// Dormand-Prince 5(4) tableau (FSAL).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                 a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// 5th-minus-4th order error coefficients.
constexpr double er1 = 71.0 / 57600, er3 = -71.0 / 16695, er4 = 71.0 / 1920,
                 er5 = -17253.0 / 339200, er6 = 22.0 / 525, er7 = -1.0 / 40;
// Dense-output coefficients (Hairer & Wanner continuous extension).
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

constexpr double kSafe = 0.9, kBeta = 0.04, kExpo1 = 0.2 - kBeta * 0.75;
constexpr double kFacc1 = 5.0, kFacc2 = 0.1;  // step growth clamps
constexpr double kUnderflowStep = 1e-14;

constexpr int kMaxDim = 12;

struct DenseStep {
    int dim;
    double t0, h;
    double r1[kMaxDim], r2[kMaxDim], r3[kMaxDim], r4[kMaxDim], r5[kMaxDim];

    void eval(double t, double* out) const {
        double th = (t - t0) / h;
        th = std::clamp(th, 0.0, 1.0);
        const double th1 = 1.0 - th;
        for (int i = 0; i < dim; ++i)
            out[i] = r1[i] +
                     th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
    }
};

}  // namespace

size_t Trajectory::index_at(double t0) const {
    auto it = std::lower_bound(times.begin(), times.end(), t0 - 1e-12);
    return static_cast<size_t>(it - times.begin());
}

double TangentRecord::mean_rate(double t_skip) const {
    double sum = 0.0;
    double t_prev = 0.0, t_start = -1.0, t_last = 0.0;
    for (size_t i = 0; i < times.size(); ++i) {
        if (t_prev >= t_skip - 1e-12) {
            if (t_start < 0) t_start = t_prev;
            sum += log_stretch[i];
            t_last = times[i];
        }
        t_prev = times[i];
    }
    if (t_start < 0 || t_last <= t_start) return 0.0;
    return sum / (t_last - t_start);
}

namespace {

// Core adaptive loop shared by integrate() and integrate_with_tangent().
// `dim` is 6 (plain flow) or 12 (flow + tangent).
Trajectory run_dopri5(const MeanFieldState& initial, const Vec6* tangent0,
                      const ModelParams& p, const IntegratorConfig& cfg,
                      double renorm_dt, TangentRecord* record) {
    p.validate();
    cfg.validate();
    const bool with_tangent = tangent0 != nullptr;
    const int dim = with_tangent ? 12 : 6;

    double y[kMaxDim], y1[kMaxDim], work[kMaxDim];
    double k1[kMaxDim], k2[kMaxDim], k3[kMaxDim], k4[kMaxDim], k5[kMaxDim],
        k6[kMaxDim], k7[kMaxDim];
    {
        const auto a = initial.as_array();
        std::memcpy(y, a.data(), 6 * sizeof(double));
        if (with_tangent)
            for (int i = 0; i < 6; ++i) y[6 + i] = (*tangent0)[i];
    }

    auto deriv = [&](const double* in, double* out) {
        rhs(in, p, out);
        if (with_tangent) jacobian_apply(in, p, in + 6, out + 6);
    };

    Trajectory traj;
    const size_t total_samples =
        static_cast<size_t>(std::floor(cfg.t_end / cfg.sample_dt + 1e-9)) + 1;
    auto emit = [&](double ts, const double* state) {
        traj.times.push_back(ts);
        traj.states.push_back(MeanFieldState{state[0], state[1], state[2],
                                             state[3], state[4], state[5]});
    };
    emit(0.0, y);

    // Growth guard for localized-phase capture: the crossing of n_max only
    // counts as divergence if the photon number has grown monotonically
    // through the last guard window and exceeded the floor.
    auto divergence_guard = [&]() {
        const size_t m = std::min<size_t>(cfg.divergence_guard_samples,
                                          traj.states.size());
        if (m < 2) return true;
        const size_t start = traj.states.size() - m;
        for (size_t i = start + 1; i < traj.states.size(); ++i)
            if (traj.states[i].n < traj.states[i - 1].n * (1.0 - 1e-12))
                return false;
        return traj.states.back().n > cfg.divergence_n_floor;
    };

    double t = 0.0;
    double h = std::min({cfg.max_step, cfg.sample_dt, cfg.t_end});
    double facold = 1e-4;
    size_t next_sample = 1;
    long next_renorm = 1;
    deriv(y, k1);

    while (next_sample < total_samples || t < cfg.t_end - 1e-12) {
        // Land exactly on renormalization times and on t_end.
        double barrier = cfg.t_end;
        if (with_tangent)
            barrier = std::min(barrier, next_renorm * renorm_dt);
        if (t + h >= barrier - 1e-14) h = barrier - t;
        if (h < kUnderflowStep)
            throw StepSizeUnderflow("adaptive step underflow at t = " +
                                    std::to_string(t));

        auto stage = [&](double* k, const double* coef, int nc) {
            for (int i = 0; i < dim; ++i) {
                double acc = 0.0;
                if (nc > 0) acc += coef[0] * k1[i];
                if (nc > 1) acc += coef[1] * k2[i];
                if (nc > 2) acc += coef[2] * k3[i];
                if (nc > 3) acc += coef[3] * k4[i];
                if (nc > 4) acc += coef[4] * k5[i];
                if (nc > 5) acc += coef[5] * k6[i];
                work[i] = y[i] + h * acc;
            }
            deriv(work, k);
        };
        {
            const double c2[] = {a21};
            const double c3[] = {a31, a32};
            const double c4[] = {a41, a42, a43};
            const double c5[] = {a51, a52, a53, a54};
            const double c6[] = {a61, a62, a63, a64, a65};
            stage(k2, c2, 1);
            stage(k3, c3, 2);
            stage(k4, c4, 3);
            stage(k5, c5, 4);
            stage(k6, c6, 5);
        }
        for (int i = 0; i < dim; ++i)
            y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                                a75 * k5[i] + a76 * k6[i]);
        deriv(y1, k7);

        double err = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double e = h * (er1 * k1[i] + er3 * k3[i] + er4 * k4[i] +
                                  er5 * k5[i] + er6 * k6[i] + er7 * k7[i]);
            const double sc =
                cfg.abs_tol +
                cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / dim);
        if (!std::isfinite(err)) err = 10.0;

        const double fac11 = std::pow(std::max(err, 1e-30), kExpo1);
        if (err <= 1.0) {
            // Accepted: dense output, sampling, events.
            DenseStep ds;
            ds.dim = dim;
            ds.t0 = t;
            ds.h = h;
            for (int i = 0; i < dim; ++i) {
                const double ydiff = y1[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                ds.r1[i] = y[i];
                ds.r2[i] = ydiff;
                ds.r3[i] = bspl;
                ds.r4[i] = ydiff - h * k7[i] - bspl;
                ds.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                                d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            const double t_new = t + h;
            while (next_sample < total_samples &&
                   next_sample * cfg.sample_dt <= t_new + 1e-12) {
                const double ts = next_sample * cfg.sample_dt;
                if (std::abs(ts - t_new) <= 1e-12)
                    emit(ts, y1);
                else {
                    ds.eval(ts, work);
                    emit(ts, work);
                }
                ++next_sample;
            }

            if (y1[2] > cfg.divergence_n_max && divergence_guard()) {
                // Locate the threshold crossing inside this step, then trim
                // samples past it.
                double lo = t, hi = t_new;
                if (y[2] <= cfg.divergence_n_max) {
                    for (int it = 0; it < 60; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        ds.eval(mid, work);
                        (work[2] > cfg.divergence_n_max ? hi : lo) = mid;
                    }
                }
                traj.t_div = (y[2] <= cfg.divergence_n_max) ? hi : t;
                while (!traj.times.empty() &&
                       traj.times.back() > traj.t_div + 1e-12) {
                    traj.times.pop_back();
                    traj.states.pop_back();
                }
                traj.terminal = Terminal::Diverged;
                return traj;
            }

            t = t_new;
            std::memcpy(y, y1, dim * sizeof(double));
            std::memcpy(k1, k7, dim * sizeof(double));

            if (with_tangent && std::abs(t - next_renorm * renorm_dt) < 1e-12) {
                double norm2 = 0.0;
                for (int i = 6; i < 12; ++i) norm2 += y[i] * y[i];
                const double norm = std::sqrt(norm2);
                if (record) {
                    record->times.push_back(t);
                    record->log_stretch.push_back(std::log(norm));
                }
                for (int i = 6; i < 12; ++i) y[i] /= norm;
                // Tangent derivative is linear in the tangent, so the FSAL
                // stage rescales exactly.
                for (int i = 6; i < 12; ++i) k1[i] /= norm;
                ++next_renorm;
            }

            facold = std::max(err, 1e-4);
            double fac = fac11 / std::pow(facold, kBeta);
            fac = std::max(kFacc2, std::min(kFacc1, fac / kSafe));
            h = std::min(h / fac, cfg.max_step);
        } else {
            // Rejected: shrink without growth.
            h = h / std::min(kFacc1, fac11 / kSafe);
        }
    }
    traj.terminal = Terminal::Completed;
    return traj;
}

}  // namespace

Trajectory integrate(const MeanFieldState& initial, const ModelParams& p,
                     const IntegratorConfig& cfg) {
    return run_dopri5(initial, nullptr, p, cfg, 0.0, nullptr);
}

std::pair<Trajectory, TangentRecord> integrate_with_tangent(
    const MeanFieldState& initial, const Vec6& tangent0, const ModelParams& p,
    const IntegratorConfig& cfg, double renorm_dt) {
    const double norm = tangent0.norm();
    if (!(std::abs(norm - 1.0) < 1e-8))
        throw std::invalid_argument("tangent0 must have unit norm");
    if (!(renorm_dt > 0))
        throw std::invalid_argument("renorm_dt must be > 0");
    TangentRecord record;
    Trajectory traj =
        run_dopri5(initial, &tangent0, p, cfg, renorm_dt, &record);
    return {std::move(traj), std::move(record)};
}

}  // namespace dicke2

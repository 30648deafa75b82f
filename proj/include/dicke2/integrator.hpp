#ifndef DICKE2_INTEGRATOR_HPP
#define DICKE2_INTEGRATOR_HPP

#include <stdexcept>
#include <vector>

#include "dicke2/model.hpp"

namespace dicke2 {

/// Adaptive integration settings. Defaults reproduce the library-wide
/// trajectory conventions (t in units of 1/omega0 when omega0 = 1).
struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    // Keeping steps at or below the sample spacing bounds the dense-output
    // interpolation error, which otherwise dominates the spin-norm drift.
    double max_step = 0.01;       // scaled by 1/omega0 at the call site
    double t_end = 400.0;
    double sample_dt = 0.01;      // uniform output spacing
    // Localized-phase capture. Oscillation frequencies on a diverging
    // branch grow with n, so the cost of reaching a threshold scales like
    // n^2 steps; the growth guard below makes 1e5 a safe detection point.
    double divergence_n_max = 1e5;
    double divergence_n_floor = 1e4;  // growth guard threshold
    int divergence_guard_samples = 50;

    void validate() const {
        if (!(rel_tol > 0) || !(abs_tol > 0))
            throw std::invalid_argument("tolerances must be > 0");
        if (!(sample_dt > 0))
            throw std::invalid_argument("sample_dt must be > 0");
        if (!(max_step > 0))
            throw std::invalid_argument("max_step must be > 0");
        if (!(t_end > 0)) throw std::invalid_argument("t_end must be > 0");
        if (!(divergence_n_max > 1))
            throw std::invalid_argument("divergence threshold must be > 1");
    }
};

enum class Terminal { Completed, Diverged };

/// Uniformly sampled solution of the mean-field flow.
struct Trajectory {
    std::vector<double> times;
    std::vector<MeanFieldState> states;
    Terminal terminal = Terminal::Completed;
    double t_div = 0.0;  // meaningful when terminal == Diverged

    size_t size() const { return times.size(); }
    bool diverged() const { return terminal == Terminal::Diverged; }
    // Index of the first sample with t >= t0.
    size_t index_at(double t0) const;
};

struct StepSizeUnderflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Log-stretch record of a co-integrated tangent vector: at each
/// renormalization time, ln|delta| accumulated since the previous one.
struct TangentRecord {
    std::vector<double> times;
    std::vector<double> log_stretch;

    // Average stretch rate over renormalization events with t > t_skip.
    double mean_rate(double t_skip) const;
};

// Integrate the mean-field flow from `initial` with a Dormand-Prince 4(5)
// embedded pair, PI step control and dense output on the uniform sample
// grid. Halts with Terminal::Diverged once the photon number passes the
// divergence threshold with sustained growth (localized-phase capture).
Trajectory integrate(const MeanFieldState& initial, const ModelParams& p,
                     const IntegratorConfig& cfg);

// Same flow with the variational (tangent) system co-integrated and
// renormalized every renorm_dt. `tangent0` must have unit norm.
std::pair<Trajectory, TangentRecord> integrate_with_tangent(
    const MeanFieldState& initial, const Vec6& tangent0, const ModelParams& p,
    const IntegratorConfig& cfg, double renorm_dt = 1.0);

}  // namespace dicke2

#endif

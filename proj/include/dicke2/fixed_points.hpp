#ifndef DICKE2_FIXED_POINTS_HPP
#define DICKE2_FIXED_POINTS_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dicke2/model.hpp"

namespace dicke2 {

enum class FpKind { NPdown, NPup, SPplus, SPminus, U0 };
enum class Stability { Stable, Unstable, Marginal, Unclassified };

std::string to_string(FpKind k);
std::string to_string(Stability s);

/// A stationary state of the mean-field flow. For U0 the state holds the
/// limit direction (sx = +-1, sy = sz = 0) with n set to +infinity.
struct FixedPoint {
    FpKind kind;
    MeanFieldState state;
    Stability stability = Stability::Unclassified;
    // Eigenvalues of the Jacobian at the fixed point, sorted by descending
    // real part, with the structural zero along the spin-norm direction
    // removed. Empty until classify_stability has run.
    std::vector<std::complex<double>> leading_eigenvalues;
};

/// Analytic stability/existence boundaries at fixed (omega0, omega_q, kappa,
/// lambda, N). Entries are nullopt where the defining square root turns
/// imaginary (anisotropy outside the lambda window); g_t3 is +infinity at
/// lambda = 1.
struct PhaseBoundaries {
    double lambda_t;
    std::optional<double> g_t1;
    std::optional<double> g_t2;
    std::optional<double> g_t3;
    std::optional<double> g_t4;
    double lambda_lo;  // open window in which superradiant solutions exist
    double lambda_hi;
};

// Pole-flip boundary between the two normal-phase fixed points.
double lambda_t(const ModelParams& p);

// Coupling thresholds; nullopt when not defined for these parameters.
std::optional<double> g_t1(const ModelParams& p);
std::optional<double> g_t2(const ModelParams& p);
std::optional<double> g_t3(const ModelParams& p);  // +inf at lambda = 1
std::optional<double> g_t4(const ModelParams& p);

// Open anisotropy window outside of which only normal-phase solutions exist.
std::pair<double, double> lambda_window(const ModelParams& p);

PhaseBoundaries phase_boundaries(const ModelParams& p);

// The two normal-phase fixed points (all spins down / up, empty cavity).
FixedPoint np_fixed_point(bool up);

// The localized fixed points reached past g_t1 (divergent photon number),
// represented by their limit direction.
std::vector<FixedPoint> u0_fixed_points();

// The parity pair of superradiant-like fixed points, or empty when the
// existence conditions fail. Each returned state satisfies |rhs| <= 1e-10.
std::vector<FixedPoint> sp_fixed_points(const ModelParams& p);

// Fills stability and leading_eigenvalues from the Jacobian spectrum. The
// structurally zero eigenvalue along the spin-norm constraint is identified
// by eigenvector overlap and excluded from the verdict.
// Throws SingularJacobian if the eigensolver fails to converge.
FixedPoint classify_stability(const FixedPoint& fp, const ModelParams& p);

struct SingularJacobian : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Result of the stable-fixed-point taxonomy at one parameter point.
struct StablePhase {
    std::vector<FixedPoint> fixed_points;  // all analytic FPs, classified
    std::vector<FpKind> stable_kinds;      // SP pair collapsed to SPplus
    bool u0_reachable = false;             // g > g_t1
    std::string label;  // NPdown/NPup/SP/Bdown/Bup/U0/Cdown/Cup/none
};

StablePhase stable_phase(const ModelParams& p);

}  // namespace dicke2

#endif

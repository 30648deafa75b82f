#ifndef DICKE2_MODEL_HPP
#define DICKE2_MODEL_HPP

#include <array>
#include <Eigen/Dense>

namespace dicke2 {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Physical parameters of the dissipative anisotropic two-photon Dicke model.
/// All rates and frequencies are in the same energy units (hbar = 1); the
/// collective spin frequency is omega_z = N * omega_q.
struct ModelParams {
    double omega0 = 1.0;   // bosonic mode frequency, > 0
    double omega_q = 0.0;  // single-qubit transition frequency
    double g = 0.0;        // two-photon coupling strength, >= 0
    double lambda = 1.0;   // rotating/counter-rotating imbalance, >= 0
    double kappa = 0.0;    // cavity decay rate, >= 0
    int n_qubits = 1;      // number of qubits N, >= 1

    double omega_z() const { return n_qubits * omega_q; }

    // Throws std::invalid_argument on violated bounds.
    void validate() const;

    static ModelParams from_omega_z(double omega0, double omega_z, double g,
                                    double lambda, double kappa, int n_qubits);
};

/// Mean-field state (x, y, n, sx, sy, sz):
///   x = <X>, y = <Y> bosonic quadratures built from a^2, a^dag^2,
///   n = <a^dag a>, and s = <2J>/N the rescaled collective spin.
/// The flow preserves sx^2+sy^2+sz^2 = 1; the checked constructor enforces
/// it at initialization and no renormalization happens afterwards.
struct MeanFieldState {
    double x = 0, y = 0, n = 0, sx = 0, sy = 0, sz = -1;

    // Checked construction: renormalizes the spin if |norm-1| < 1e-6,
    // rejects otherwise; rejects n < 0.
    static MeanFieldState make(double x, double y, double n, double sx,
                               double sy, double sz);

    // Bloch-sphere start with the cavity in a given (x, y, n) state.
    static MeanFieldState bloch(double sx, double sy, double sz, double x = 0,
                                double y = 0, double n = 0) {
        return make(x, y, n, sx, sy, sz);
    }

    std::array<double, 6> as_array() const { return {x, y, n, sx, sy, sz}; }
    static MeanFieldState from_array(const std::array<double, 6>& a) {
        return MeanFieldState{a[0], a[1], a[2], a[3], a[4], a[5]};
    }
    Vec6 as_vec() const {
        Vec6 v;
        v << x, y, n, sx, sy, sz;
        return v;
    }

    double spin_norm() const { return sx * sx + sy * sy + sz * sz; }
};

// Time derivative of the mean-field state. Pure function, thread-safe.
void rhs(const double* state, const ModelParams& p, double* deriv);
Vec6 rhs(const MeanFieldState& s, const ModelParams& p);

// Analytic Jacobian d(rhs)/d(state), rows/columns ordered (x,y,n,sx,sy,sz).
Mat6 jacobian(const MeanFieldState& s, const ModelParams& p);

// Jacobian-vector product J(state) * delta without forming the matrix.
void jacobian_apply(const double* state, const ModelParams& p,
                    const double* delta, double* out);

// Discrete symmetry (x,y,sx,sy) -> -(x,y,sx,sy); involutive, commutes with
// the flow.
MeanFieldState parity_transform(const MeanFieldState& s);

}  // namespace dicke2

#endif

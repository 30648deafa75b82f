#ifndef DICKE2_LINDBLAD_HPP
#define DICKE2_LINDBLAD_HPP

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "dicke2/integrator.hpp"
#include "dicke2/model.hpp"

namespace dicke2 {

using cplx = std::complex<double>;

/// Truncated Fock (x) collective-spin product space. Basis index
/// i = k * (N+1) + s with Fock level k major and spin projection
/// m = s - N/2 minor; the collective sector has total spin j = N/2.
struct HilbertConfig {
    int fock_cutoff = 40;  // number of Fock levels kept, >= 8
    int n_qubits = 2;
    int max_dim = 2048;

    int spin_dim() const { return n_qubits + 1; }
    int dim() const { return fock_cutoff * spin_dim(); }
    void validate() const {
        if (fock_cutoff < 8)
            throw std::invalid_argument("fock_cutoff must be >= 8");
        if (n_qubits < 1)
            throw std::invalid_argument("n_qubits must be >= 1");
        if (dim() > max_dim)
            throw std::invalid_argument("Hilbert dimension exceeds maximum");
    }
};

/// Sparse operator stored as diagonals: coef[i] multiplies |i><i+offset|.
struct BandedOp {
    int dim = 0;
    struct Band {
        int offset;  // column minus row; may be negative
        std::vector<cplx> coef;  // size dim - |offset|, indexed by min(row,col)
    };
    std::vector<Band> bands;

    Eigen::MatrixXcd to_dense() const;
    // tr(O rho)
    cplx expectation(const Eigen::MatrixXcd& rho) const;
};

struct TraceDrift : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Density matrix on the truncated space. Hermiticity and unit trace are
/// validated at construction; positivity (up to truncation error) is an
/// invariant checked in tests via min_eigenvalue().
struct DensityMatrix {
    Eigen::MatrixXcd mat;

    static DensityMatrix from_pure(const Eigen::VectorXcd& psi);
    static DensityMatrix from_matrix(Eigen::MatrixXcd m);

    double trace_error() const;       // |tr - 1|
    double hermiticity_error() const; // max |rho - rho^dag|
    double min_eigenvalue() const;
};

// H = omega0 a^dag a + omega_q J_z + (g/N)[(1+l) X J_x + (1-l) Y J_y] on the
// truncated space, with X = a^2 + a^dag2 and Y = i(a^2 - a^dag2).
BandedOp build_hamiltonian(const ModelParams& p, const HilbertConfig& h);

// Generalized parity: diagonal phases (-1)^N (-1)^(j-m) i^k.
std::vector<cplx> parity_phases(const HilbertConfig& h);
DensityMatrix parity_conjugate(const DensityMatrix& rho,
                               const HilbertConfig& h);

// Observables on the truncated space.
BandedOp op_number(const HilbertConfig& h);
BandedOp op_quadrature_x(const HilbertConfig& h);
BandedOp op_quadrature_y(const HilbertConfig& h);
BandedOp op_jx(const HilbertConfig& h);
BandedOp op_jy(const HilbertConfig& h);
BandedOp op_jz(const HilbertConfig& h);
BandedOp op_jx2(const HilbertConfig& h);
BandedOp op_number_jz(const HilbertConfig& h);

// Spin-coherent state |theta,phi> rotated from |j,-j>, matching the Bloch
// vector (sx, sy, sz), tensored with the cavity vacuum.
Eigen::VectorXcd spin_coherent_vacuum(const HilbertConfig& h, double sx,
                                      double sy, double sz);

/// Right-hand side of the master equation
///   drho/dt = -i[H, rho] + kappa (2 a rho a^dag - a^dag a rho - rho a^dag a)
/// evaluated with a banded kernel; preserves Hermiticity exactly.
class LindbladKernel {
  public:
    LindbladKernel(const ModelParams& p, const HilbertConfig& h);

    const HilbertConfig& hilbert() const { return hilbert_; }
    const ModelParams& params() const { return params_; }

    // out = L(rho); raw column-major arrays of dim x dim complex numbers.
    void apply(const cplx* rho, cplx* out) const;
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

    // Fast path on split real/imaginary planes (column-major, dim x dim).
    // Preserves Hermiticity exactly. Not safe for concurrent calls on one
    // instance (shared scratch); use one kernel per evolution.
    void apply_planes(const double* rho_re, const double* rho_im,
                      double* out_re, double* out_im) const;

  private:
    ModelParams params_;
    HilbertConfig hilbert_;
    int d_, S_;
    int off1_, off2_;
    // Real symmetric Hamiltonian: diagonal and two upper bands.
    std::vector<double> h_diag_, h_band1_, h_band2_;
    std::vector<double> jump_;   // sqrt(2 kappa) sqrt(k+1) per row
    std::vector<double> decay_;  // kappa * k per row
    mutable std::vector<double> scratch_;  // P and P^T planes
};

// Spec-level RHS wrapper; `H` must match the kernel's own Hamiltonian and is
// accepted for interface completeness (checked in debug builds).
DensityMatrix lindblad_rhs(const DensityMatrix& rho,
                           const LindbladKernel& kernel);

struct EvolveConfig {
    double dt = 1e-3;        // fixed RK4 step
    double t_end = 20.0;
    double dt_sample = 0.1;
    bool stop_when_stationary = false;
    double stationary_rel_tol = 1e-5;  // relative change over check window
    double stationary_window = 20.0;
    double trace_tol = 1e-8;
    double cutoff_pop_tol = 1e-6;
};

struct ExpectationSample {
    double t;
    double n, x, y, jx, jy, jz, jx2, n_jz;
    double trace_drift;
};

struct ExpectationSeries {
    std::vector<ExpectationSample> samples;
    bool cutoff_suspect = false;
    double max_trace_drift = 0;
    double max_top2_population = 0;
    bool stopped_stationary = false;

    const ExpectationSample& back() const { return samples.back(); }
};

// Fixed-step RK4 evolution of the master equation; records the observable
// battery at every sample, flags CutoffSuspect through max_top2_population,
// throws TraceDrift if |tr rho - 1| exceeds trace_tol.
ExpectationSeries evolve(const DensityMatrix& rho0, const ModelParams& p,
                         const HilbertConfig& h, const EvolveConfig& cfg,
                         DensityMatrix* rho_final = nullptr);

/// Mean-field vs master-equation comparison from matched initial conditions
/// (spin-coherent (x) vacuum against the same Bloch vector).
struct DeviationReport {
    int n_qubits;
    // sup-norm deviations over [0, t_end] for (x, y, n, sx, sy, sz)
    double sup_x, sup_y, sup_n, sup_sx, sup_sy, sup_sz;
    // stationary values (trailing-window means for the master equation)
    double me_n_stationary, me_sz_stationary, me_jx2_stationary,
        me_njz_stationary;
    double mf_n_stationary, mf_sz_stationary, mf_sx_stationary;
    bool cutoff_suspect = false;
};

DeviationReport compare_meanfield(const ModelParams& p,
                                  const HilbertConfig& h, double sx,
                                  double sy, double sz,
                                  const EvolveConfig& cfg);

}  // namespace dicke2

#endif

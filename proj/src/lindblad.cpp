#include "dicke2/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>

#include <Eigen/Eigenvalues>

namespace dicke2 {

namespace {

// Ladder coefficient connecting |j,m> and |j,m+1>.
double spin_c(double j, double m) {
    const double v = j * (j + 1) - m * (m + 1);
    return v > 0 ? std::sqrt(v) : 0.0;
}

double binom(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(n - k + 1.0));
}

}  // namespace

Eigen::MatrixXcd BandedOp::to_dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& b : bands) {
        const int o = std::abs(b.offset);
        for (int i = 0; i + o < dim; ++i) {
            if (b.offset >= 0)
                m(i, i + o) = b.coef[i];
            else
                m(i + o, i) = b.coef[i];
        }
    }
    return m;
}

cplx BandedOp::expectation(const Eigen::MatrixXcd& rho) const {
    cplx acc = 0;
    for (const auto& b : bands) {
        const int o = std::abs(b.offset);
        for (int i = 0; i + o < dim; ++i) {
            if (b.offset >= 0)
                acc += b.coef[i] * rho(i + o, i);  // O[i,i+o] rho[i+o,i]
            else
                acc += b.coef[i] * rho(i, i + o);
        }
    }
    return acc;
}

DensityMatrix DensityMatrix::from_pure(const Eigen::VectorXcd& psi) {
    Eigen::VectorXcd v = psi / psi.norm();
    DensityMatrix rho;
    rho.mat = v * v.adjoint();
    return rho;
}

DensityMatrix DensityMatrix::from_matrix(Eigen::MatrixXcd m) {
    DensityMatrix rho;
    rho.mat = std::move(m);
    if (rho.hermiticity_error() > 1e-12)
        throw std::invalid_argument("density matrix is not Hermitian");
    if (rho.trace_error() > 1e-10)
        throw std::invalid_argument("density matrix trace deviates from 1");
    return rho;
}

double DensityMatrix::trace_error() const {
    return std::abs(mat.trace() - cplx(1.0, 0.0));
}

double DensityMatrix::hermiticity_error() const {
    return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat);
    return es.eigenvalues().minCoeff();
}

BandedOp build_hamiltonian(const ModelParams& p, const HilbertConfig& h) {
    p.validate();
    h.validate();
    const int S = h.spin_dim(), K = h.fock_cutoff, d = h.dim();
    const double j = 0.5 * h.n_qubits;
    const double gN = p.g / h.n_qubits;

    BandedOp op;
    op.dim = d;
    BandedOp::Band diag{0, std::vector<cplx>(d)};
    BandedOp::Band b1{2 * S - 1, std::vector<cplx>(d - (2 * S - 1), 0.0)};
    BandedOp::Band b2{2 * S + 1, std::vector<cplx>(d - (2 * S + 1), 0.0)};
    for (int i = 0; i < d; ++i) {
        const int k = i / S, s = i % S;
        const double m = s - j;
        diag.coef[i] = p.omega0 * k + p.omega_q * m;
        const double qk = std::sqrt(double(k + 1) * (k + 2));
        // |k,m><k+2,m-1| sector: rotating two-photon exchange.
        if (s >= 1 && k <= K - 3 && i < (int)b1.coef.size())
            b1.coef[i] = gN * qk * spin_c(j, m - 1);
        // |k,m><k+2,m+1| sector: counter-rotating, weighted by lambda.
        if (s <= S - 2 && k <= K - 3 && i < (int)b2.coef.size())
            b2.coef[i] = p.lambda * gN * qk * spin_c(j, m);
    }
    BandedOp::Band b1m{-(2 * S - 1), b1.coef};
    BandedOp::Band b2m{-(2 * S + 1), b2.coef};
    op.bands = {std::move(diag), std::move(b1), std::move(b2), std::move(b1m),
                std::move(b2m)};
    return op;
}

std::vector<cplx> parity_phases(const HilbertConfig& h) {
    const int S = h.spin_dim(), d = h.dim();
    const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::vector<cplx> out(d);
    const double sign_n = (h.n_qubits % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < d; ++i) {
        const int k = i / S, s = i % S;
        const double spin = ((S - 1 - s) % 2 == 0) ? 1.0 : -1.0;  // (-1)^(j-m)
        out[i] = sign_n * spin * ipow[k % 4];
    }
    return out;
}

DensityMatrix parity_conjugate(const DensityMatrix& rho,
                               const HilbertConfig& h) {
    const auto ph = parity_phases(h);
    const int d = h.dim();
    DensityMatrix out;
    out.mat.resize(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i)
            out.mat(i, j) = std::conj(ph[i]) * rho.mat(i, j) * ph[j];
    return out;
}

namespace {

BandedOp diag_op(const HilbertConfig& h,
                 const std::function<double(int, int)>& f) {
    const int S = h.spin_dim(), d = h.dim();
    BandedOp op;
    op.dim = d;
    BandedOp::Band diag{0, std::vector<cplx>(d)};
    for (int i = 0; i < d; ++i) diag.coef[i] = f(i / S, i % S);
    op.bands = {std::move(diag)};
    return op;
}

// Hermitian operator with one positive-offset band plus its mirror.
BandedOp band_pair(const HilbertConfig& h, int offset,
                   const std::function<cplx(int, int)>& upper) {
    const int S = h.spin_dim(), d = h.dim();
    BandedOp op;
    op.dim = d;
    BandedOp::Band up{offset, std::vector<cplx>(d - offset)};
    BandedOp::Band down{-offset, std::vector<cplx>(d - offset)};
    for (int i = 0; i + offset < d; ++i) {
        up.coef[i] = upper(i / S, i % S);
        down.coef[i] = std::conj(up.coef[i]);
    }
    op.bands = {std::move(up), std::move(down)};
    return op;
}

}  // namespace

BandedOp op_number(const HilbertConfig& h) {
    return diag_op(h, [](int k, int) { return double(k); });
}

BandedOp op_quadrature_x(const HilbertConfig& h) {
    const int S = h.spin_dim(), K = h.fock_cutoff;
    return band_pair(h, 2 * S, [&](int k, int s) -> cplx {
        (void)s;
        if (k > K - 3) return 0.0;
        return std::sqrt(double(k + 1) * (k + 2));
    });
}

BandedOp op_quadrature_y(const HilbertConfig& h) {
    const int S = h.spin_dim(), K = h.fock_cutoff;
    return band_pair(h, 2 * S, [&](int k, int s) -> cplx {
        (void)s;
        if (k > K - 3) return 0.0;
        return cplx(0.0, std::sqrt(double(k + 1) * (k + 2)));
    });
}

BandedOp op_jx(const HilbertConfig& h) {
    const double j = 0.5 * h.n_qubits;
    const int S = h.spin_dim();
    return band_pair(h, 1, [&](int, int s) -> cplx {
        if (s >= S - 1) return 0.0;  // block edge: next index changes k
        return 0.5 * spin_c(j, s - j);
    });
}

BandedOp op_jy(const HilbertConfig& h) {
    const double j = 0.5 * h.n_qubits;
    const int S = h.spin_dim();
    return band_pair(h, 1, [&](int, int s) -> cplx {
        if (s >= S - 1) return 0.0;
        return cplx(0.0, 0.5 * spin_c(j, s - j));
    });
}

BandedOp op_jz(const HilbertConfig& h) {
    const double j = 0.5 * h.n_qubits;
    return diag_op(h, [j](int, int s) { return s - j; });
}

BandedOp op_jx2(const HilbertConfig& h) {
    const double j = 0.5 * h.n_qubits;
    const int S = h.spin_dim(), d = h.dim();
    BandedOp op;
    op.dim = d;
    BandedOp::Band diag{0, std::vector<cplx>(d)};
    for (int i = 0; i < d; ++i) {
        const double m = (i % S) - j;
        const double up = spin_c(j, m), down = spin_c(j, m - 1);
        diag.coef[i] = 0.25 * (up * up + down * down);
    }
    op.bands = {std::move(diag)};
    BandedOp two = band_pair(h, 2, [&](int, int s) -> cplx {
        if (s >= S - 2) return 0.0;
        const double m = s - j;
        return 0.25 * spin_c(j, m) * spin_c(j, m + 1);
    });
    for (auto& b : two.bands) op.bands.push_back(std::move(b));
    return op;
}

BandedOp op_number_jz(const HilbertConfig& h) {
    const double j = 0.5 * h.n_qubits;
    return diag_op(h, [j](int k, int s) { return k * (s - j); });
}

Eigen::VectorXcd spin_coherent_vacuum(const HilbertConfig& h, double sx,
                                      double sy, double sz) {
    const double norm = std::sqrt(sx * sx + sy * sy + sz * sz);
    if (std::abs(norm - 1.0) > 1e-6)
        throw std::invalid_argument("Bloch vector must be normalized");
    sx /= norm;
    sy /= norm;
    sz /= norm;
    const int N = h.n_qubits, S = h.spin_dim();
    const double theta = std::acos(std::clamp(sz, -1.0, 1.0));
    const double phi = std::atan2(sy, sx);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(h.dim());
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    for (int idx = 0; idx < S; ++idx) {
        // idx = j + m; amplitude of |j, m> in the rotated |j,-j> state
        const double mag = std::sqrt(binom(N, idx)) * std::pow(c, idx) *
                           std::pow(s, N - idx);
        const double ph = (N - idx) * phi;
        psi[idx] = mag * cplx(std::cos(ph), std::sin(ph));
    }
    psi /= psi.norm();
    return psi;
}

LindbladKernel::LindbladKernel(const ModelParams& p, const HilbertConfig& h)
    : params_(p), hilbert_(h) {
    p.validate();
    h.validate();
    const int S = h.spin_dim(), K = h.fock_cutoff;
    S_ = S;
    d_ = h.dim();
    off1_ = 2 * S - 1;
    off2_ = 2 * S + 1;
    const double j = 0.5 * h.n_qubits;
    const double gN = p.g / h.n_qubits;

    h_diag_.assign(d_, 0.0);
    h_band1_.assign(d_ - off1_, 0.0);
    h_band2_.assign(d_ - off2_, 0.0);
    jump_.assign(d_, 0.0);
    decay_.assign(d_, 0.0);
    for (int i = 0; i < d_; ++i) {
        const int k = i / S, s = i % S;
        const double m = s - j;
        h_diag_[i] = p.omega0 * k + p.omega_q * m;
        const double qk = std::sqrt(double(k + 1) * (k + 2));
        if (s >= 1 && k <= K - 3 && i < d_ - off1_)
            h_band1_[i] = gN * qk * spin_c(j, m - 1);
        if (s <= S - 2 && k <= K - 3 && i < d_ - off2_)
            h_band2_[i] = p.lambda * gN * qk * spin_c(j, m);
        if (k <= K - 2)
            jump_[i] = std::sqrt(2.0 * p.kappa) * std::sqrt(k + 1.0);
        decay_[i] = p.kappa * k;
    }
    scratch_.assign(4 * (size_t)d_ * d_, 0.0);
}

// Split-plane Liouvillian: P = H rho per plane, then
//   out = -i(P - P^dag) + kappa (2 a rho a^dag - N rho - rho N).
void LindbladKernel::apply_planes(const double* rho_re, const double* rho_im,
                                  double* out_re, double* out_im) const {
    const int d = d_, S = S_;
    const size_t dd = (size_t)d * d;
    double* P_re = scratch_.data();
    double* P_im = scratch_.data() + dd;
    double* PT_re = scratch_.data() + 2 * dd;
    double* PT_im = scratch_.data() + 3 * dd;

    // Pass 1: P = H rho, column by column, three real symmetric bands.
    auto hmul = [&](const double* rho, double* P) {
        const double* b1 = h_band1_.data();
        const double* b2 = h_band2_.data();
        const double* dg = h_diag_.data();
        const int n1 = d - off1_, n2 = d - off2_;
        for (int col = 0; col < d; ++col) {
            const double* r = rho + (size_t)col * d;
            double* p = P + (size_t)col * d;
            for (int i = 0; i < d; ++i) p[i] = dg[i] * r[i];
            for (int i = 0; i < n1; ++i) p[i] += b1[i] * r[i + off1_];
            for (int i = 0; i < n1; ++i) p[i + off1_] += b1[i] * r[i];
            for (int i = 0; i < n2; ++i) p[i] += b2[i] * r[i + off2_];
            for (int i = 0; i < n2; ++i) p[i + off2_] += b2[i] * r[i];
        }
    };
    hmul(rho_re, P_re);
    hmul(rho_im, P_im);

    // Pass 2: tiled transpose.
    constexpr int TB = 64;
    auto transpose = [&](const double* src, double* dst) {
        for (int j0 = 0; j0 < d; j0 += TB)
            for (int i0 = 0; i0 < d; i0 += TB) {
                const int jm = std::min(j0 + TB, d), im = std::min(i0 + TB, d);
                for (int jj = j0; jj < jm; ++jj)
                    for (int ii = i0; ii < im; ++ii)
                        dst[ii + (size_t)jj * d] = src[jj + (size_t)ii * d];
            }
    };
    transpose(P_re, PT_re);
    transpose(P_im, PT_im);

    // Pass 3: assemble the derivative per column.
    for (int col = 0; col < d; ++col) {
        const size_t c0 = (size_t)col * d;
        const double* pr = P_re + c0;
        const double* pi = P_im + c0;
        const double* qr = PT_re + c0;
        const double* qi = PT_im + c0;
        const double* rr = rho_re + c0;
        const double* ri = rho_im + c0;
        double* orr = out_re + c0;
        double* oii = out_im + c0;
        const double dec_col = decay_[col];
        for (int i = 0; i < d; ++i) {
            const double dec = decay_[i] + dec_col;
            orr[i] = pi[i] + qi[i] - dec * rr[i];
            oii[i] = qr[i] - pr[i] - dec * ri[i];
        }
        if (col < d - S) {
            const double fj = jump_[col];
            const double* fi = jump_.data();
            const double* sr = rho_re + (size_t)(col + S) * d + S;
            const double* si = rho_im + (size_t)(col + S) * d + S;
            const int nS = d - S;
            for (int i = 0; i < nS; ++i) {
                const double w = fj * fi[i];
                orr[i] += w * sr[i];
                oii[i] += w * si[i];
            }
        }
    }
}

void LindbladKernel::apply(const cplx* rho, cplx* out) const {
    const size_t dd = (size_t)d_ * d_;
    std::vector<double> re(dd), im(dd), ore(dd), oim(dd);
    for (size_t i = 0; i < dd; ++i) {
        re[i] = rho[i].real();
        im[i] = rho[i].imag();
    }
    apply_planes(re.data(), im.data(), ore.data(), oim.data());
    for (size_t i = 0; i < dd; ++i) out[i] = cplx(ore[i], oim[i]);
}

Eigen::MatrixXcd LindbladKernel::apply(const Eigen::MatrixXcd& rho) const {
    Eigen::MatrixXcd out(d_, d_);
    apply(rho.data(), out.data());
    return out;
}

DensityMatrix lindblad_rhs(const DensityMatrix& rho,
                           const LindbladKernel& kernel) {
    DensityMatrix out;
    out.mat = kernel.apply(rho.mat);
    return out;
}

namespace {

struct SplitState {
    std::vector<double> re, im;
    explicit SplitState(size_t dd) : re(dd, 0.0), im(dd, 0.0) {}
};

double diag_sum(const std::vector<double>& plane, int d,
                const std::function<double(int)>& w) {
    double acc = 0;
    for (int i = 0; i < d; ++i) acc += w(i) * plane[i + (size_t)i * d];
    return acc;
}

}  // namespace

ExpectationSeries evolve(const DensityMatrix& rho0, const ModelParams& p,
                         const HilbertConfig& h, const EvolveConfig& cfg,
                         DensityMatrix* rho_final) {
    p.validate();
    h.validate();
    if (!(cfg.dt > 0) || !(cfg.dt_sample > 0) || !(cfg.t_end > 0))
        throw std::invalid_argument("evolve: dt, dt_sample, t_end must be > 0");
    const int d = h.dim(), S = h.spin_dim(), K = h.fock_cutoff;
    if (rho0.mat.rows() != d || rho0.mat.cols() != d)
        throw std::invalid_argument("evolve: density matrix dimension mismatch");
    const size_t dd = (size_t)d * d;
    const double j = 0.5 * h.n_qubits;

    LindbladKernel kernel(p, h);
    SplitState y(dd), ytmp(dd), k(dd), acc(dd);
    for (int col = 0; col < d; ++col)
        for (int i = 0; i < d; ++i) {
            y.re[i + (size_t)col * d] = rho0.mat(i, col).real();
            y.im[i + (size_t)col * d] = rho0.mat(i, col).imag();
        }

    const int sub = std::max(1, (int)std::ceil(cfg.dt_sample / cfg.dt - 1e-9));
    const double dt = cfg.dt_sample / sub;
    const size_t n_samples =
        (size_t)std::floor(cfg.t_end / cfg.dt_sample + 1e-9) + 1;

    ExpectationSeries series;
    series.samples.reserve(n_samples);

    auto record = [&](double t) {
        ExpectationSample smp{};
        smp.t = t;
        smp.n = diag_sum(y.re, d, [&](int i) { return double(i / S); });
        smp.jz = diag_sum(y.re, d, [&](int i) { return (i % S) - j; });
        smp.n_jz =
            diag_sum(y.re, d, [&](int i) { return (i / S) * ((i % S) - j); });
        double jx2 = 0;
        for (int i = 0; i < d; ++i) {
            const double m = (i % S) - j;
            const double up = spin_c(j, m), down = spin_c(j, m - 1);
            jx2 += 0.25 * (up * up + down * down) * y.re[i + (size_t)i * d];
        }
        for (int i = 0; i + 2 < d; ++i) {
            const int s = i % S;
            if (s >= S - 2) continue;
            const double m = s - j;
            const double c2 = 0.25 * spin_c(j, m) * spin_c(j, m + 1);
            jx2 += 2.0 * c2 * y.re[(i + 2) + (size_t)i * d];
        }
        smp.jx2 = jx2;
        double x = 0, yy = 0;
        for (int i = 0; i + 2 * S < d; ++i) {
            const int kk = i / S;
            const double q = std::sqrt(double(kk + 1) * (kk + 2));
            x += 2.0 * q * y.re[(i + 2 * S) + (size_t)i * d];
            yy += -2.0 * q * y.im[(i + 2 * S) + (size_t)i * d];
        }
        smp.x = x;
        smp.y = yy;
        double jx = 0, jy = 0;
        for (int i = 0; i + 1 < d; ++i) {
            const int s = i % S;
            if (s >= S - 1) continue;
            const double c = spin_c(j, s - j);
            jx += c * y.re[(i + 1) + (size_t)i * d];
            jy += -c * y.im[(i + 1) + (size_t)i * d];
        }
        smp.jx = jx;
        smp.jy = jy;

        double trace = 0, top2 = 0;
        for (int i = 0; i < d; ++i) {
            const double v = y.re[i + (size_t)i * d];
            trace += v;
            if (i / S >= K - 2) top2 += v;
        }
        smp.trace_drift = std::abs(trace - 1.0);
        series.max_trace_drift =
            std::max(series.max_trace_drift, smp.trace_drift);
        series.max_top2_population =
            std::max(series.max_top2_population, top2);
        if (top2 > cfg.cutoff_pop_tol) series.cutoff_suspect = true;
        series.samples.push_back(smp);
        if (smp.trace_drift > cfg.trace_tol)
            throw TraceDrift("trace drift " + std::to_string(smp.trace_drift) +
                             " at t = " + std::to_string(t));
    };

    auto axpy = [&](std::vector<double>& dst, const std::vector<double>& a,
                    const std::vector<double>& b, double c) {
        const double* pa = a.data();
        const double* pb = b.data();
        double* pd = dst.data();
        for (size_t i = 0; i < dd; ++i) pd[i] = pa[i] + c * pb[i];
    };
    auto accum = [&](std::vector<double>& dst, const std::vector<double>& b,
                     double c) {
        const double* pb = b.data();
        double* pd = dst.data();
        for (size_t i = 0; i < dd; ++i) pd[i] += c * pb[i];
    };

    record(0.0);
    for (size_t smp = 1; smp < n_samples; ++smp) {
        for (int step = 0; step < sub; ++step) {
            kernel.apply_planes(y.re.data(), y.im.data(), k.re.data(),
                                k.im.data());
            axpy(acc.re, y.re, k.re, dt / 6.0);
            axpy(acc.im, y.im, k.im, dt / 6.0);
            axpy(ytmp.re, y.re, k.re, dt / 2.0);
            axpy(ytmp.im, y.im, k.im, dt / 2.0);
            kernel.apply_planes(ytmp.re.data(), ytmp.im.data(), k.re.data(),
                                k.im.data());
            accum(acc.re, k.re, dt / 3.0);
            accum(acc.im, k.im, dt / 3.0);
            axpy(ytmp.re, y.re, k.re, dt / 2.0);
            axpy(ytmp.im, y.im, k.im, dt / 2.0);
            kernel.apply_planes(ytmp.re.data(), ytmp.im.data(), k.re.data(),
                                k.im.data());
            accum(acc.re, k.re, dt / 3.0);
            accum(acc.im, k.im, dt / 3.0);
            axpy(ytmp.re, y.re, k.re, dt);
            axpy(ytmp.im, y.im, k.im, dt);
            kernel.apply_planes(ytmp.re.data(), ytmp.im.data(), k.re.data(),
                                k.im.data());
            axpy(y.re, acc.re, k.re, dt / 6.0);
            axpy(y.im, acc.im, k.im, dt / 6.0);
        }
        record(smp * cfg.dt_sample);

        if (cfg.stop_when_stationary &&
            smp * cfg.dt_sample >= 2.0 * cfg.stationary_window) {
            const size_t lag =
                (size_t)std::round(cfg.stationary_window / cfg.dt_sample);
            if (series.samples.size() > lag) {
                const auto& now = series.samples.back();
                const auto& then =
                    series.samples[series.samples.size() - 1 - lag];
                auto rel = [](double a, double b) {
                    return std::abs(a - b) /
                           std::max({std::abs(a), std::abs(b), 1e-6});
                };
                if (rel(now.n, then.n) < cfg.stationary_rel_tol &&
                    rel(now.jz, then.jz) < cfg.stationary_rel_tol &&
                    rel(now.jx2, then.jx2) < cfg.stationary_rel_tol) {
                    series.stopped_stationary = true;
                    break;
                }
            }
        }
    }

    if (rho_final) {
        rho_final->mat.resize(d, d);
        for (int col = 0; col < d; ++col)
            for (int i = 0; i < d; ++i)
                rho_final->mat(i, col) = cplx(y.re[i + (size_t)col * d],
                                              y.im[i + (size_t)col * d]);
    }
    return series;
}

DeviationReport compare_meanfield(const ModelParams& p,
                                  const HilbertConfig& h, double sx,
                                  double sy, double sz,
                                  const EvolveConfig& cfg) {
    const auto psi = spin_coherent_vacuum(h, sx, sy, sz);
    const auto rho0 = DensityMatrix::from_pure(psi);
    const auto series = evolve(rho0, p, h, cfg);

    IntegratorConfig icfg;
    icfg.t_end = series.samples.back().t;
    icfg.sample_dt = cfg.dt_sample;
    const auto mf =
        integrate(MeanFieldState::bloch(sx, sy, sz), p, icfg);

    DeviationReport rep{};
    rep.n_qubits = h.n_qubits;
    rep.cutoff_suspect = series.cutoff_suspect;
    const double N = h.n_qubits;
    const size_t m = std::min(series.samples.size(), mf.size());
    for (size_t i = 0; i < m; ++i) {
        const auto& me = series.samples[i];
        const auto& s = mf.states[i];
        rep.sup_x = std::max(rep.sup_x, std::abs(me.x - s.x));
        rep.sup_y = std::max(rep.sup_y, std::abs(me.y - s.y));
        rep.sup_n = std::max(rep.sup_n, std::abs(me.n - s.n));
        rep.sup_sx = std::max(rep.sup_sx, std::abs(2.0 * me.jx / N - s.sx));
        rep.sup_sy = std::max(rep.sup_sy, std::abs(2.0 * me.jy / N - s.sy));
        rep.sup_sz = std::max(rep.sup_sz, std::abs(2.0 * me.jz / N - s.sz));
    }

    // Stationary values: trailing 10% means for the master equation.
    const size_t tail = std::max<size_t>(1, series.samples.size() / 10);
    double n_acc = 0, jz_acc = 0, jx2_acc = 0, njz_acc = 0;
    for (size_t i = series.samples.size() - tail; i < series.samples.size();
         ++i) {
        n_acc += series.samples[i].n;
        jz_acc += series.samples[i].jz;
        jx2_acc += series.samples[i].jx2;
        njz_acc += series.samples[i].n_jz;
    }
    rep.me_n_stationary = n_acc / tail;
    rep.me_sz_stationary = 2.0 * (jz_acc / tail) / N;
    rep.me_jx2_stationary = jx2_acc / tail;
    rep.me_njz_stationary = njz_acc / tail;
    rep.mf_n_stationary = mf.states.back().n;
    rep.mf_sz_stationary = mf.states.back().sz;
    rep.mf_sx_stationary = mf.states.back().sx;
    return rep;
}

}  // namespace dicke2

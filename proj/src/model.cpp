#include "dicke2/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dicke2 {

void ModelParams::validate() const {
    if (!(omega0 > 0)) throw std::invalid_argument("omega0 must be > 0");
    if (!(kappa >= 0)) throw std::invalid_argument("kappa must be >= 0");
    if (!(g >= 0)) throw std::invalid_argument("g must be >= 0");
    if (!(lambda >= 0)) throw std::invalid_argument("lambda must be >= 0");
    if (n_qubits < 1) throw std::invalid_argument("n_qubits must be >= 1");
    if (!std::isfinite(omega0) || !std::isfinite(omega_q) ||
        !std::isfinite(g) || !std::isfinite(lambda) || !std::isfinite(kappa))
        throw std::invalid_argument("parameters must be finite");
}

ModelParams ModelParams::from_omega_z(double omega0, double omega_z, double g,
                                      double lambda, double kappa,
                                      int n_qubits) {
    ModelParams p{omega0, omega_z / n_qubits, g, lambda, kappa, n_qubits};
    p.validate();
    return p;
}

MeanFieldState MeanFieldState::make(double x, double y, double n, double sx,
                                    double sy, double sz) {
    if (!(n >= 0))
        throw std::invalid_argument("photon number must be >= 0 at init");
    const double norm = std::sqrt(sx * sx + sy * sy + sz * sz);
    if (std::abs(norm - 1.0) >= 1e-6)
        throw std::invalid_argument("spin norm deviates from 1 by " +
                                    std::to_string(std::abs(norm - 1.0)));
    return MeanFieldState{x, y, n, sx / norm, sy / norm, sz / norm};
}

void rhs(const double* s, const ModelParams& p, double* d) {
    const double x = s[0], y = s[1], n = s[2];
    const double sx = s[3], sy = s[4], sz = s[5];
    const double gm = p.g * (1.0 - p.lambda);  // couples Y <-> sx-spin block
    const double gp = p.g * (1.0 + p.lambda);
    const double wz = p.omega_z();
    const double invN = 1.0 / p.n_qubits;
    const double drive = 2.0 * n + 1.0;

    d[0] = -2.0 * p.kappa * x - 2.0 * p.omega0 * y - 2.0 * gm * drive * sy;
    d[1] = -2.0 * p.kappa * y + 2.0 * p.omega0 * x + 2.0 * gp * drive * sx;
    d[2] = -2.0 * p.kappa * n + gp * y * sx - gm * x * sy;
    d[3] = invN * (-wz * sy + gm * y * sz);
    d[4] = invN * (wz * sx - gp * x * sz);
    d[5] = invN * (gp * x * sy - gm * sx * y);
}

Vec6 rhs(const MeanFieldState& s, const ModelParams& p) {
    const auto a = s.as_array();
    std::array<double, 6> d;
    rhs(a.data(), p, d.data());
    Vec6 v;
    for (int i = 0; i < 6; ++i) v[i] = d[i];
    return v;
}

Mat6 jacobian(const MeanFieldState& s, const ModelParams& p) {
    const double x = s.x, y = s.y, n = s.n;
    const double sx = s.sx, sy = s.sy, sz = s.sz;
    const double gm = p.g * (1.0 - p.lambda);
    const double gp = p.g * (1.0 + p.lambda);
    const double wz = p.omega_z();
    const double invN = 1.0 / p.n_qubits;
    const double drive = 2.0 * n + 1.0;

    Mat6 J = Mat6::Zero();
    // d(dx/dt)
    J(0, 0) = -2.0 * p.kappa;
    J(0, 1) = -2.0 * p.omega0;
    J(0, 2) = -4.0 * gm * sy;
    J(0, 4) = -2.0 * gm * drive;
    // d(dy/dt)
    J(1, 0) = 2.0 * p.omega0;
    J(1, 1) = -2.0 * p.kappa;
    J(1, 2) = 4.0 * gp * sx;
    J(1, 3) = 2.0 * gp * drive;
    // d(dn/dt)
    J(2, 0) = -gm * sy;
    J(2, 1) = gp * sx;
    J(2, 2) = -2.0 * p.kappa;
    J(2, 3) = gp * y;
    J(2, 4) = -gm * x;
    // d(dsx/dt)
    J(3, 1) = invN * gm * sz;
    J(3, 4) = -invN * wz;
    J(3, 5) = invN * gm * y;
    // d(dsy/dt)
    J(4, 0) = -invN * gp * sz;
    J(4, 3) = invN * wz;
    J(4, 5) = -invN * gp * x;
    // d(dsz/dt)
    J(5, 0) = invN * gp * sy;
    J(5, 1) = -invN * gm * sx;
    J(5, 3) = -invN * gm * y;
    J(5, 4) = invN * gp * x;
    return J;
}

void jacobian_apply(const double* s, const ModelParams& p, const double* v,
                    double* out) {
    const double x = s[0], y = s[1], n = s[2];
    const double sx = s[3], sy = s[4], sz = s[5];
    const double gm = p.g * (1.0 - p.lambda);
    const double gp = p.g * (1.0 + p.lambda);
    const double wz = p.omega_z();
    const double invN = 1.0 / p.n_qubits;
    const double drive = 2.0 * n + 1.0;

    out[0] = -2.0 * p.kappa * v[0] - 2.0 * p.omega0 * v[1] -
             4.0 * gm * sy * v[2] - 2.0 * gm * drive * v[4];
    out[1] = 2.0 * p.omega0 * v[0] - 2.0 * p.kappa * v[1] +
             4.0 * gp * sx * v[2] + 2.0 * gp * drive * v[3];
    out[2] = -gm * sy * v[0] + gp * sx * v[1] - 2.0 * p.kappa * v[2] +
             gp * y * v[3] - gm * x * v[4];
    out[3] = invN * (gm * sz * v[1] - wz * v[4] + gm * y * v[5]);
    out[4] = invN * (-gp * sz * v[0] + wz * v[3] - gp * x * v[5]);
    out[5] = invN * (gp * sy * v[0] - gm * sx * v[1] - gm * y * v[3] +
                     gp * x * v[4]);
}

MeanFieldState parity_transform(const MeanFieldState& s) {
    return MeanFieldState{-s.x, -s.y, s.n, -s.sx, -s.sy, s.sz};
}

}  // namespace dicke2

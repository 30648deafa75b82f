#include "dicke2/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace dicke2 {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMarginalEps = 1e-9;
}  // namespace

std::string to_string(FpKind k) {
    switch (k) {
        case FpKind::NPdown: return "NPdown";
        case FpKind::NPup: return "NPup";
        case FpKind::SPplus: return "SPplus";
        case FpKind::SPminus: return "SPminus";
        case FpKind::U0: return "U0";
    }
    return "?";
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "Stable";
        case Stability::Unstable: return "Unstable";
        case Stability::Marginal: return "Marginal";
        case Stability::Unclassified: return "Unclassified";
    }
    return "?";
}

double lambda_t(const ModelParams& p) {
    const double k2 = 4.0 * p.kappa * p.kappa;
    const double a = 2.0 * p.omega0 + p.omega_q;
    const double b = 2.0 * p.omega0 - p.omega_q;
    return std::sqrt((k2 + a * a) / (k2 + b * b));
}

std::optional<double> g_t1(const ModelParams& p) {
    const double l = p.lambda;
    const double ratio = p.kappa / p.omega0;
    const double inner =
        4.0 * l * l - ratio * ratio * (1.0 - l * l) * (1.0 - l * l);
    if (inner < 0) return std::nullopt;
    const double denom = 1.0 + l * l + std::sqrt(inner);
    return std::sqrt((p.omega0 * p.omega0 + p.kappa * p.kappa) / denom);
}

std::optional<double> g_t2(const ModelParams& p) {
    const auto gt1 = g_t1(p);
    if (!gt1) return std::nullopt;
    return std::sqrt(p.omega_z() / p.omega0) * *gt1;
}

std::optional<double> g_t3(const ModelParams& p) {
    const auto gt1 = g_t1(p);
    if (!gt1) return std::nullopt;
    const double oneml2 = 1.0 - p.lambda * p.lambda;
    if (oneml2 == 0.0) return kInf;
    const double wz = p.omega_z();
    const double num = p.omega0 * wz * (p.omega0 * p.omega0 + p.kappa * p.kappa);
    return std::sqrt(num / (oneml2 * oneml2)) / *gt1;
}

std::optional<double> g_t4(const ModelParams& p) {
    const auto gt1 = g_t1(p);
    if (!gt1) return std::nullopt;
    const double wz = p.omega_z();
    if (wz <= p.omega0 / 2.0) return std::sqrt(wz / p.omega0) * *gt1;
    const double f = 4.0 * wz * wz / (4.0 * wz * wz + p.omega0 * p.omega0);
    return std::sqrt(f) * *gt1;
}

std::pair<double, double> lambda_window(const ModelParams& p) {
    if (p.kappa == 0.0) return {0.0, kInf};
    const double r = std::sqrt(p.omega0 * p.omega0 + p.kappa * p.kappa);
    return {(r - p.omega0) / p.kappa, (r + p.omega0) / p.kappa};
}

PhaseBoundaries phase_boundaries(const ModelParams& p) {
    const auto [lo, hi] = lambda_window(p);
    return PhaseBoundaries{lambda_t(p), g_t1(p), g_t2(p), g_t3(p), g_t4(p),
                           lo, hi};
}

FixedPoint np_fixed_point(bool up) {
    MeanFieldState s{0, 0, 0, 0, 0, up ? 1.0 : -1.0};
    return FixedPoint{up ? FpKind::NPup : FpKind::NPdown, s};
}

std::vector<FixedPoint> u0_fixed_points() {
    std::vector<FixedPoint> out;
    for (double sx : {1.0, -1.0}) {
        MeanFieldState s{0, 0, kInf, sx, 0, 0};
        out.push_back(FixedPoint{FpKind::U0, s});
    }
    return out;
}

std::vector<FixedPoint> sp_fixed_points(const ModelParams& p) {
    p.validate();
    std::vector<FixedPoint> out;
    const auto [lo, hi] = lambda_window(p);
    if (!(p.lambda > lo && p.lambda < hi)) return out;
    const auto gt1 = g_t1(p);
    const auto gt4 = g_t4(p);
    if (!gt1 || !gt4) return out;
    if (!(p.g > *gt4 && p.g < *gt1)) return out;

    const double wz = p.omega_z();
    const double c = p.omega0 / (2.0 * wz);
    const double r2 = (*gt1 / p.g) * (*gt1 / p.g);
    const double disc = c * c + 1.0 - r2;
    if (disc < 0) return out;  // excluded by the g_t4 gate, kept as a guard
    const double sz = -c + std::sqrt(disc);
    const double n = -0.5 * ((wz / p.omega0) * r2 / sz + 1.0);
    if (!(n > 0) || !(sz < 0)) return out;

    // Remaining coordinates from stationarity. With u = g(1+l)sz/wz and
    // v = g(1-l)sz/wz one has sx = u*x, sy = v*y, and the quadratures solve
    // kappa*x + A*y = 0, B*x - kappa*y = 0 with
    //   A = omega0 + g^2 (1-l)^2 (2n+1) sz/wz   (>= 0 here)
    //   B = omega0 + g^2 (1+l)^2 (2n+1) sz/wz   (<= 0 here)
    // and kappa^2 + A*B = 0 holds identically at the Eq.-level solution.
    const double gm = p.g * (1.0 - p.lambda);
    const double gp = p.g * (1.0 + p.lambda);
    const double drive = 2.0 * n + 1.0;
    const double A = p.omega0 + gm * gm * drive * sz / wz;
    const double B = p.omega0 + gp * gp * drive * sz / wz;
    const double scale = n * wz / (2.0 * p.lambda * p.g * p.g * sz);  // < 0
    const double x2 = -A * scale;
    const double y2 = B * scale;
    const double xm = x2 > 0 ? std::sqrt(x2) : 0.0;
    const double ym = y2 > 0 ? std::sqrt(y2) : 0.0;

    // SPplus is the branch with sx >= 0; sz < 0 makes that x <= 0, and the
    // product x*y = kappa*scale is non-positive, so y >= 0.
    const double x = -xm, y = ym;
    const double sx = gp * sz * x / wz;
    const double sy = gm * sz * y / wz;

    MeanFieldState plus{x, y, n, sx, sy, sz};
    out.push_back(FixedPoint{FpKind::SPplus, plus});
    out.push_back(FixedPoint{FpKind::SPminus, parity_transform(plus)});
    return out;
}

FixedPoint classify_stability(const FixedPoint& fp, const ModelParams& p) {
    if (fp.kind == FpKind::U0)
        throw std::invalid_argument(
            "U0 is classified by divergence detection, not linearization");
    FixedPoint out = fp;
    const Mat6 J = jacobian(fp.state, p);
    Eigen::EigenSolver<Mat6> solver(J, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw SingularJacobian("eigensolver failed to converge");

    const auto vals = solver.eigenvalues();
    const auto vecs = solver.eigenvectors();

    // The spin-norm constraint forces one zero eigenvalue whose eigenvector
    // points along (0,0,0,sx,sy,sz); drop the best-overlapping candidate.
    Eigen::Matrix<std::complex<double>, 6, 1> normal;
    normal << 0, 0, 0, fp.state.sx, fp.state.sy, fp.state.sz;
    int structural = -1;
    double best_overlap = -1.0;
    for (int i = 0; i < 6; ++i) {
        if (std::abs(vals[i].real()) >= kMarginalEps) continue;
        const double overlap =
            std::abs(normal.dot(vecs.col(i))) / vecs.col(i).norm();
        if (overlap > best_overlap) {
            best_overlap = overlap;
            structural = i;
        }
    }

    out.leading_eigenvalues.clear();
    for (int i = 0; i < 6; ++i)
        if (i != structural) out.leading_eigenvalues.push_back(vals[i]);
    std::sort(out.leading_eigenvalues.begin(), out.leading_eigenvalues.end(),
              [](const auto& a, const auto& b) { return a.real() > b.real(); });

    const double max_re = out.leading_eigenvalues.front().real();
    if (max_re > kMarginalEps)
        out.stability = Stability::Unstable;
    else if (max_re < -kMarginalEps) {
        // all real parts below -eps?
        bool all_neg = true;
        for (const auto& ev : out.leading_eigenvalues)
            all_neg = all_neg && ev.real() < -kMarginalEps;
        out.stability = all_neg ? Stability::Stable : Stability::Marginal;
    } else
        out.stability = Stability::Marginal;
    return out;
}

StablePhase stable_phase(const ModelParams& p) {
    p.validate();
    StablePhase out;
    out.fixed_points.push_back(classify_stability(np_fixed_point(false), p));
    out.fixed_points.push_back(classify_stability(np_fixed_point(true), p));
    for (const auto& sp : sp_fixed_points(p))
        out.fixed_points.push_back(classify_stability(sp, p));

    bool np_down = false, np_up = false, sp = false;
    for (const auto& fp : out.fixed_points) {
        if (fp.stability != Stability::Stable) continue;
        out.stable_kinds.push_back(fp.kind);
        if (fp.kind == FpKind::NPdown) np_down = true;
        if (fp.kind == FpKind::NPup) np_up = true;
        if (fp.kind == FpKind::SPplus || fp.kind == FpKind::SPminus) sp = true;
    }
    // SP pair counts once in the label logic.
    std::erase(out.stable_kinds, FpKind::SPminus);

    const auto gt1 = g_t1(p);
    out.u0_reachable = gt1 && p.g > *gt1;

    if (out.u0_reachable) {
        if (np_down && !np_up)
            out.label = "Cdown";
        else if (np_up && !np_down)
            out.label = "Cup";
        else if (!np_up && !np_down)
            out.label = "U0";
        else
            out.label = "Cdown+Cup";
    } else {
        if (sp && np_down)
            out.label = "Bdown";
        else if (sp && np_up)
            out.label = "Bup";
        else if (sp)
            out.label = "SP";
        else if (np_down && np_up)
            out.label = "NPdown+NPup";
        else if (np_down)
            out.label = "NPdown";
        else if (np_up)
            out.label = "NPup";
        else
            out.label = "none";
    }
    return out;
}

}  // namespace dicke2

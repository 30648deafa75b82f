#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "dicke2/model.hpp"

using namespace dicke2;

namespace {

ModelParams demo_params() {
    // omega0 = kappa = 1, omega_z = 0.2, g = 0.6, lambda = 0.5
    return ModelParams::from_omega_z(1.0, 0.2, 0.6, 0.5, 1.0, 4);
}

// Superradiant stationary state at demo_params(), frozen from closed-form
// substitution (sz and n from the stationarity quadratic, quadratures from
// the linear conditions).
const MeanFieldState kSpState{-0.4428940496904218, 0.5997886861305477,
                              0.19886011386104185, 0.8288757293171035,
                              -0.37416795657268953, -0.4158886457012959};

MeanFieldState random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    double sx = gauss(rng), sy = gauss(rng), sz = gauss(rng);
    const double norm = std::sqrt(sx * sx + sy * sy + sz * sz);
    std::uniform_real_distribution<double> un(0.0, 5.0);
    return MeanFieldState{uni(rng), uni(rng), un(rng),
                          sx / norm, sy / norm, sz / norm};
}

ModelParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    ModelParams p;
    p.omega0 = 0.5 + 1.5 * uni(rng);
    p.kappa = 2.0 * uni(rng);
    p.g = 2.0 * uni(rng);
    p.lambda = 2.5 * uni(rng);
    p.n_qubits = 1 + static_cast<int>(uni(rng) * 19);
    p.omega_q = (0.01 + 3.0 * uni(rng)) / p.n_qubits;
    return p;
}

Mat6 fd_jacobian(const MeanFieldState& s, const ModelParams& p,
                 double h = 1e-6) {
    Mat6 J;
    auto base = s.as_array();
    for (int col = 0; col < 6; ++col) {
        auto up = base, dn = base;
        up[col] += h;
        dn[col] -= h;
        std::array<double, 6> fu, fd;
        rhs(up.data(), p, fu.data());
        rhs(dn.data(), p, fd.data());
        for (int row = 0; row < 6; ++row)
            J(row, col) = (fu[row] - fd[row]) / (2.0 * h);
    }
    return J;
}

}  // namespace

TEST_CASE("parameter validation and omega_z accessor") {
    ModelParams p = demo_params();
    CHECK(p.omega_z() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(p.omega_q * p.n_qubits == p.omega_z());

    ModelParams bad = p;
    bad.omega0 = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.lambda = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.n_qubits = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.kappa = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("state construction enforces spin norm and photon positivity") {
    CHECK_THROWS_AS(MeanFieldState::make(0, 0, -0.1, 0, 0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(MeanFieldState::make(0, 0, 0, 0.5, 0.5, 0.5),
                    std::invalid_argument);
    // Slight deviation is renormalized.
    const auto s = MeanFieldState::make(0, 0, 0, 0, 0, 1.0 + 5e-7);
    CHECK(s.spin_norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("normal-phase states are exact fixed points") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        const ModelParams p = random_params(rng);
        for (double sz : {-1.0, 1.0}) {
            const MeanFieldState np{0, 0, 0, 0, 0, sz};
            CHECK(rhs(np, p).norm() == 0.0);
        }
    }
}

TEST_CASE("superradiant stationary state annihilates the flow") {
    const auto d = rhs(kSpState, demo_params());
    CHECK(d.norm() <= 1e-10);
    CHECK(kSpState.sz == doctest::Approx(-0.4159).epsilon(1e-4));
    CHECK(kSpState.n == doctest::Approx(0.1989).epsilon(1e-4));
}

TEST_CASE("jacobian at the empty normal phase with g = 0 is block diagonal") {
    ModelParams p = demo_params();
    p.g = 0.0;
    const MeanFieldState np{0, 0, 0, 0, 0, -1};
    const Mat6 J = jacobian(np, p);
    const Mat6 Jfd = fd_jacobian(np, p);
    CHECK((J - Jfd).cwiseAbs().maxCoeff() <= 1e-5);

    Eigen::EigenSolver<Mat6> es(J);
    std::vector<std::complex<double>> evs(es.eigenvalues().data(),
                                          es.eigenvalues().data() + 6);
    // Bosonic pair -2k +- 2i w0, photon decay -2k, spin 0 and +- i wz/N.
    auto has = [&](std::complex<double> target) {
        for (const auto& ev : evs)
            if (std::abs(ev - target) < 1e-9) return true;
        return false;
    };
    CHECK(has({-2.0, 2.0}));
    CHECK(has({-2.0, -2.0}));
    CHECK(has({0.0, 0.0}));
    CHECK(has({0.0, p.omega_z() / p.n_qubits}));
    CHECK(has({0.0, -p.omega_z() / p.n_qubits}));
}

TEST_CASE("analytic jacobian matches central finite differences") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 1000; ++i) {
        const ModelParams p = random_params(rng);
        const MeanFieldState s = random_state(rng);
        const Mat6 J = jacobian(s, p);
        const Mat6 Jfd = fd_jacobian(s, p);
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c) {
                const double scale = std::max(1.0, std::abs(J(r, c)));
                CHECK(std::abs(J(r, c) - Jfd(r, c)) / scale <= 1e-5);
            }
    }
}

TEST_CASE("jacobian-vector product agrees with the matrix") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const ModelParams p = random_params(rng);
        const MeanFieldState s = random_state(rng);
        const Mat6 J = jacobian(s, p);
        Vec6 v;
        std::normal_distribution<double> gauss;
        for (int k = 0; k < 6; ++k) v[k] = gauss(rng);
        std::array<double, 6> out;
        const auto sa = s.as_array();
        std::array<double, 6> va;
        for (int k = 0; k < 6; ++k) va[k] = v[k];
        jacobian_apply(sa.data(), p, va.data(), out.data());
        const Vec6 ref = J * v;
        for (int k = 0; k < 6; ++k)
            CHECK(out[k] == doctest::Approx(ref[k]).epsilon(1e-12));
    }
}

TEST_CASE("normal phase develops an unstable complex pair past the pole flip") {
    // omega0 = kappa = 1, omega_q = 0.15, N = 10, g = 0.63, lambda = 1.1
    ModelParams p{1.0, 0.15, 0.63, 1.1, 1.0, 10};
    const MeanFieldState np{0, 0, 0, 0, 0, -1};
    Eigen::EigenSolver<Mat6> es(jacobian(np, p));
    int unstable_complex = 0;
    for (int i = 0; i < 6; ++i) {
        const auto ev = es.eigenvalues()[i];
        if (ev.real() > 1e-6 && std::abs(ev.imag()) > 1e-6)
            ++unstable_complex;
    }
    CHECK(unstable_complex >= 2);
}

TEST_CASE("parity transform is the documented sign map and an involution") {
    const auto s = MeanFieldState::make(1, 2, 3, 0.6, 0, 0.8);
    const auto t = parity_transform(s);
    CHECK(t.x == -1.0);
    CHECK(t.y == -2.0);
    CHECK(t.n == 3.0);
    CHECK(t.sx == -0.6);
    CHECK(t.sy == 0.0);
    CHECK(t.sz == 0.8);
    const auto u = parity_transform(t);
    CHECK(u.x == s.x);
    CHECK(u.sx == s.sx);
    CHECK(u.sy == s.sy);
}

TEST_CASE("flow is parity equivariant") {
    std::mt19937_64 rng(11);
    const double sign[6] = {-1, -1, 1, -1, -1, 1};
    for (int i = 0; i < 100; ++i) {
        const ModelParams p = random_params(rng);
        const MeanFieldState s = random_state(rng);
        const Vec6 d = rhs(s, p);
        const Vec6 dp = rhs(parity_transform(s), p);
        for (int k = 0; k < 6; ++k)
            CHECK(dp[k] == doctest::Approx(sign[k] * d[k]).epsilon(1e-13));
    }
}

TEST_CASE("spin norm is conserved by the vector field algebraically") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const ModelParams p = random_params(rng);
        const MeanFieldState s = random_state(rng);
        const Vec6 d = rhs(s, p);
        const double ddt_norm =
            2.0 * (s.sx * d[3] + s.sy * d[4] + s.sz * d[5]);
        CHECK(std::abs(ddt_norm) <= 1e-12 * std::max(1.0, d.norm()));
    }
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "dicke2/fixed_points.hpp"
#include "dicke2/integrator.hpp"

using namespace dicke2;

namespace {

ModelParams demo_params(double g = 0.6) {
    return ModelParams::from_omega_z(1.0, 0.2, g, 0.5, 1.0, 4);
}

// Chaotic-regime parameters, the harshest case for conservation checks.
ModelParams chaos_params(double g = 1.1) {
    return ModelParams::from_omega_z(1.0, 1.5, g, 1.4, 1.0, 10);
}

MeanFieldState chaos_start() {
    const double sz = -0.99;
    return MeanFieldState::bloch(std::sqrt(1 - sz * sz), 0.0, sz);
}

}  // namespace

TEST_CASE("fixed point stays put") {
    IntegratorConfig cfg;
    cfg.t_end = 20.0;
    const MeanFieldState np{0, 0, 0, 0, 0, -1};
    const auto traj = integrate(np, demo_params(), cfg);
    CHECK(traj.terminal == Terminal::Completed);
    CHECK(traj.size() == 2001);
    for (const auto& s : traj.states) {
        CHECK(s.n == 0.0);
        CHECK(s.sz == -1.0);
        CHECK(s.x == 0.0);
    }
}

TEST_CASE("uniform sample grid and index lookup") {
    IntegratorConfig cfg;
    cfg.t_end = 3.0;
    cfg.sample_dt = 0.01;
    const auto traj = integrate(chaos_start(), chaos_params(0.9), cfg);
    REQUIRE(traj.size() == 301);
    for (size_t i = 0; i < traj.size(); ++i)
        CHECK(traj.times[i] == doctest::Approx(i * 0.01).epsilon(1e-12));
    CHECK(traj.index_at(1.0) == 100);
    CHECK(traj.index_at(0.0) == 0);
    CHECK(traj.index_at(2.999) == 300);
}

TEST_CASE("decoupled cavity decays exponentially with constant sz") {
    ModelParams p = demo_params(0.0);
    p.kappa = 0.7;
    IntegratorConfig cfg;
    cfg.t_end = 10.0;
    const auto s0 = MeanFieldState::make(0.8, -0.5, 2.0, 0.6, 0.0, 0.8);
    const auto traj = integrate(s0, p, cfg);
    for (size_t i = 0; i < traj.size(); ++i) {
        const double expected =
            2.0 * std::exp(-2.0 * p.kappa * traj.times[i]);
        CHECK(std::abs(traj.states[i].n - expected) <= 1e-8);
        CHECK(traj.states[i].sz == doctest::Approx(0.8).epsilon(1e-12));
    }
}

TEST_CASE("spin norm drift stays below 1e-8 over t = 400 in the chaotic regime") {
    IntegratorConfig cfg;  // defaults: t_end 400, tolerances 1e-9/1e-11
    const auto traj = integrate(chaos_start(), chaos_params(1.1), cfg);
    REQUIRE(traj.terminal == Terminal::Completed);
    double worst = 0;
    for (const auto& s : traj.states)
        worst = std::max(worst, std::abs(s.spin_norm() - 1.0));
    CHECK(worst <= 1e-8);
}

TEST_CASE("parity-related initial conditions stay exact mirror images") {
    IntegratorConfig cfg;
    cfg.t_end = 50.0;
    const auto a = chaos_start();
    const auto b = parity_transform(a);
    const auto ta = integrate(a, chaos_params(1.1), cfg);
    const auto tb = integrate(b, chaos_params(1.1), cfg);
    REQUIRE(ta.size() == tb.size());
    for (size_t i = 0; i < ta.size(); ++i) {
        const auto m = parity_transform(ta.states[i]);
        CHECK(tb.states[i].x == m.x);
        CHECK(tb.states[i].y == m.y);
        CHECK(tb.states[i].n == m.n);
        CHECK(tb.states[i].sx == m.sx);
        CHECK(tb.states[i].sy == m.sy);
        CHECK(tb.states[i].sz == m.sz);
    }
}

TEST_CASE("identical inputs give bit-identical trajectories") {
    IntegratorConfig cfg;
    cfg.t_end = 30.0;
    const auto t1 = integrate(chaos_start(), chaos_params(1.1), cfg);
    const auto t2 = integrate(chaos_start(), chaos_params(1.1), cfg);
    REQUIRE(t1.size() == t2.size());
    for (size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1.states[i].x == t2.states[i].x);
        CHECK(t1.states[i].n == t2.states[i].n);
        CHECK(t1.states[i].sz == t2.states[i].sz);
    }
}

TEST_CASE("localized capture: divergence event with growth guard") {
    // g = 1.3, lambda = 0.5, omega_z = 0.2, N = 1; cavity vacuum.
    const auto p = ModelParams::from_omega_z(1.0, 0.2, 1.3, 0.5, 1.0, 1);
    IntegratorConfig cfg;

    const double sz1 = -0.3;
    const auto diverging =
        MeanFieldState::bloch(std::sqrt(1 - sz1 * sz1), 0.0, sz1);
    const auto td = integrate(diverging, p, cfg);
    CHECK(td.terminal == Terminal::Diverged);
    CHECK(td.t_div > 0.0);
    CHECK(td.times.back() <= td.t_div + 1e-12);
    // No emitted sample is past the threshold.
    for (const auto& s : td.states) CHECK(s.n <= cfg.divergence_n_max);
    // The trailing window shows the guarded monotone growth.
    const auto& ns = td.states;
    REQUIRE(ns.size() > 50);
    for (size_t i = ns.size() - 50; i + 1 < ns.size(); ++i)
        CHECK(ns[i].n <= ns[i + 1].n * (1 + 1e-12));

    const double sz2 = -0.35;
    const auto converging =
        MeanFieldState::bloch(std::sqrt(1 - sz2 * sz2), 0.0, sz2);
    const auto tc = integrate(converging, p, cfg);
    CHECK(tc.terminal == Terminal::Completed);
    CHECK(rhs(tc.states.back(), p).norm() < 1e-6);
    CHECK(tc.states.back().sz == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("fifth-order convergence of the embedded pair at fixed step") {
    const auto p = demo_params(0.6);
    const auto s0 = MeanFieldState::bloch(1.0, 0.0, 0.0);

    IntegratorConfig ref_cfg;
    ref_cfg.t_end = 5.0;
    ref_cfg.rel_tol = 1e-13;
    ref_cfg.abs_tol = 1e-15;
    ref_cfg.max_step = 0.01;
    ref_cfg.sample_dt = 5.0;
    const auto ref = integrate(s0, p, ref_cfg);
    const Vec6 ref_end = ref.states.back().as_vec();

    auto endpoint_error = [&](double h) {
        IntegratorConfig cfg;
        cfg.t_end = 5.0;
        cfg.rel_tol = 1e30;  // force acceptance: pure fixed step h
        cfg.abs_tol = 1e30;
        cfg.max_step = h;
        cfg.sample_dt = 5.0;
        const auto traj = integrate(s0, p, cfg);
        return (traj.states.back().as_vec() - ref_end).norm();
    };
    const double e1 = endpoint_error(0.05);
    const double e2 = endpoint_error(0.025);
    const double e3 = endpoint_error(0.0125);
    // Order-5 halving ratio is 32; allow a generous band (higher-order
    // terms still contribute at the coarsest step).
    CHECK(e1 / e2 > 16.0);
    CHECK(e1 / e2 < 110.0);
    CHECK(e2 / e3 > 16.0);
    CHECK(e2 / e3 < 110.0);
}

TEST_CASE("dense output interpolation is high order") {
    const auto p = demo_params(0.6);
    const auto s0 = MeanFieldState::bloch(1.0, 0.0, 0.0);
    IntegratorConfig ref_cfg;
    ref_cfg.t_end = 2.0;
    ref_cfg.rel_tol = 1e-13;
    ref_cfg.abs_tol = 1e-15;
    ref_cfg.max_step = 0.005;
    ref_cfg.sample_dt = 0.01;
    const auto ref = integrate(s0, p, ref_cfg);

    auto midpoint_error = [&](double h) {
        IntegratorConfig cfg = ref_cfg;
        cfg.rel_tol = 1e30;
        cfg.abs_tol = 1e30;
        cfg.max_step = h;
        const auto traj = integrate(s0, p, cfg);
        double worst = 0;
        for (size_t i = 0; i < traj.size(); ++i)
            worst = std::max(worst, (traj.states[i].as_vec() -
                                     ref.states[i].as_vec())
                                        .norm());
        return worst;
    };
    const double e1 = midpoint_error(0.04);
    const double e2 = midpoint_error(0.02);
    // Continuous extension is at least 4th order: ratio ~ 16.
    CHECK(e1 / e2 > 8.0);
}

TEST_CASE("tolerance tightening reduces endpoint error monotonically") {
    const auto p = demo_params(0.7);
    const auto s0 = MeanFieldState::bloch(1.0, 0.0, 0.0);
    IntegratorConfig ref_cfg;
    ref_cfg.t_end = 20.0;
    ref_cfg.rel_tol = 1e-13;
    ref_cfg.abs_tol = 1e-15;
    ref_cfg.sample_dt = 20.0;
    const Vec6 ref_end = integrate(s0, p, ref_cfg).states.back().as_vec();
    double prev = 1e300;
    for (double tol : {1e-5, 1e-7, 1e-9}) {
        IntegratorConfig cfg = ref_cfg;
        cfg.rel_tol = tol;
        cfg.abs_tol = tol * 1e-2;
        const double err =
            (integrate(s0, p, cfg).states.back().as_vec() - ref_end).norm();
        // Below ~1e-12 both runs sit at the double-precision floor.
        CHECK(err < std::max(prev, 1e-12));
        prev = err;
    }
    CHECK(prev < 1e-7);
}

TEST_CASE("step size underflow reports stiffness pathology") {
    IntegratorConfig cfg;
    cfg.max_step = 1e-15;
    CHECK_THROWS_AS(integrate(chaos_start(), chaos_params(), cfg),
                    StepSizeUnderflow);
}

TEST_CASE("tangent integration decays at a stable fixed point") {
    // NP_down stable at g = 0.3: largest exponent equals the leading
    // Jacobian real part.
    const auto p = demo_params(0.3);
    const auto fp = classify_stability(np_fixed_point(false), p);
    const double leading = fp.leading_eigenvalues.front().real();
    REQUIRE(leading < 0.0);

    // Start slightly off the fixed point.
    const auto s0 = MeanFieldState::make(1e-3, 0, 0, 1e-3, 0,
                                         -std::sqrt(1.0 - 1e-6));
    IntegratorConfig cfg;
    cfg.t_end = 600.0;
    cfg.sample_dt = 0.1;
    Vec6 tangent0 = Vec6::Ones() / std::sqrt(6.0);
    const auto [traj, record] =
        integrate_with_tangent(s0, tangent0, p, cfg, 1.0);
    CHECK(traj.terminal == Terminal::Completed);
    const double le = record.mean_rate(200.0);
    CHECK(le < 0.0);
    CHECK(le == doctest::Approx(leading).epsilon(0.05));
    CHECK(le <= leading + 0.01);

    // Renormalization happened on the requested grid.
    REQUIRE(!record.times.empty());
    CHECK(record.times.front() == doctest::Approx(1.0));
    CHECK(record.times.back() == doctest::Approx(600.0));
    CHECK(record.times.size() == 600);
}

TEST_CASE("tangent seed must be normalized") {
    IntegratorConfig cfg;
    cfg.t_end = 1.0;
    Vec6 bad = Vec6::Ones();
    CHECK_THROWS_AS(
        integrate_with_tangent(chaos_start(), bad, chaos_params(), cfg, 1.0),
        std::invalid_argument);
}

TEST_CASE("config validation") {
    IntegratorConfig cfg;
    cfg.sample_dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = IntegratorConfig{};
    cfg.rel_tol = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

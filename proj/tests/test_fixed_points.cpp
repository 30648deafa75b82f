#include <doctest.h>

#include <cmath>
#include <random>

#include "dicke2/fixed_points.hpp"

using namespace dicke2;

namespace {

ModelParams demo_params(double g = 0.6) {
    return ModelParams::from_omega_z(1.0, 0.2, g, 0.5, 1.0, 4);
}

}  // namespace

TEST_CASE("pole-flip boundary lambda_t") {
    ModelParams p = demo_params();
    p.omega_q = 0.0;
    CHECK(lambda_t(p) == doctest::Approx(1.0).epsilon(1e-15));

    p = ModelParams{1.0, 0.15, 0.6, 0.5, 1.0, 10};
    CHECK(lambda_t(p) == doctest::Approx(1.077808237192648).epsilon(1e-12));
    CHECK(lambda_t(p) > 1.0);
}

TEST_CASE("lambda_t peaks at omega_q = 2 sqrt(omega0^2 + kappa^2)") {
    // Stationarity of the boundary formula in omega_q; approaches 2*omega0
    // in the weak-dissipation limit.
    for (double kappa : {1.0, 0.3, 0.01}) {
        ModelParams p{1.0, 0.1, 0.5, 1.0, kappa, 1};
        double best_w = 0, best = -1;
        for (double w = 0.05; w < 8.0; w += 1e-4) {
            p.omega_q = w;
            const double lt = lambda_t(p);
            if (lt > best) {
                best = lt;
                best_w = w;
            }
        }
        const double expected = 2.0 * std::sqrt(1.0 + kappa * kappa);
        CHECK(best_w == doctest::Approx(expected).epsilon(1e-3));
    }
}

TEST_CASE("coupling thresholds against frozen closed-form values") {
    const ModelParams p = demo_params();
    CHECK(*g_t1(p) == doctest::Approx(1.0229040769485474).epsilon(1e-12));
    CHECK(*g_t2(p) == doctest::Approx(0.4574566101037255).epsilon(1e-12));
    CHECK(*g_t3(p) == doctest::Approx(0.8243921025587866).epsilon(1e-12));
    CHECK(*g_t4(p) == doctest::Approx(*g_t2(p)).epsilon(1e-14));

    ModelParams iso = p;
    iso.lambda = 1.0;
    CHECK(*g_t1(iso) ==
          doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
    CHECK(std::isinf(*g_t3(iso)));

    ModelParams closed = iso;
    closed.kappa = 0.0;
    CHECK(*g_t1(closed) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("g_t1 is undefined outside the anisotropy window") {
    ModelParams p = demo_params();
    p.lambda = 0.05;  // below (sqrt(2)-1)
    CHECK(!g_t1(p));
    CHECK(!g_t2(p));
    CHECK(sp_fixed_points(p).empty());

    const auto [lo, hi] = lambda_window(demo_params());
    CHECK(lo == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-14));
    CHECK(hi == doctest::Approx(std::sqrt(2.0) + 1.0).epsilon(1e-14));
}

TEST_CASE("g_t4 branches are continuous at omega_z = omega0/2") {
    for (double eps : {-1e-9, 0.0, 1e-9}) {
        const auto p =
            ModelParams::from_omega_z(1.0, 0.5 + eps, 0.6, 0.5, 1.0, 2);
        CHECK(*g_t4(p) ==
              doctest::Approx(std::sqrt(0.5) * *g_t1(p)).epsilon(1e-6));
    }
}

TEST_CASE("boundary ordering invariant: g_t2 <= g_t1 iff omega_z <= omega0") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        ModelParams p;
        p.omega0 = 0.5 + uni(rng);
        p.kappa = 0.1 + 1.5 * uni(rng);
        const auto [lo, hi] = lambda_window(p);
        p.lambda = lo + (std::min(hi, 3.0) - lo) * uni(rng);
        p.n_qubits = 1 + int(uni(rng) * 9);
        p.omega_q = (0.05 + 2.5 * uni(rng)) / p.n_qubits;
        p.g = 0.5;
        if (!g_t1(p)) continue;
        if (p.omega_z() <= p.omega0)
            CHECK(*g_t2(p) <= *g_t1(p) + 1e-12);
        else
            CHECK(*g_t2(p) >= *g_t1(p) - 1e-12);
    }
}

TEST_CASE("superradiant pair: frozen values, exact stationarity, parity") {
    const auto sps = sp_fixed_points(demo_params());
    REQUIRE(sps.size() == 2);
    const auto& plus = sps[0];
    CHECK(plus.kind == FpKind::SPplus);
    CHECK(plus.state.sz == doctest::Approx(-0.4158886457012959).epsilon(1e-12));
    CHECK(plus.state.n == doctest::Approx(0.19886011386104185).epsilon(1e-12));
    CHECK(plus.state.x == doctest::Approx(-0.4428940496904218).epsilon(1e-12));
    CHECK(plus.state.y == doctest::Approx(0.5997886861305477).epsilon(1e-12));
    CHECK(plus.state.sx == doctest::Approx(0.8288757293171035).epsilon(1e-12));
    CHECK(plus.state.sy ==
          doctest::Approx(-0.37416795657268953).epsilon(1e-12));
    CHECK(plus.state.sx >= 0.0);

    for (const auto& fp : sps)
        CHECK(rhs(fp.state, demo_params()).norm() <= 1e-10);

    const auto mirror = parity_transform(plus.state);
    const auto& minus = sps[1];
    CHECK(minus.kind == FpKind::SPminus);
    CHECK(minus.state.x == mirror.x);
    CHECK(minus.state.y == mirror.y);
    CHECK(minus.state.sx == mirror.sx);
    CHECK(minus.state.sy == mirror.sy);
    CHECK(minus.state.sz == mirror.sz);
}

TEST_CASE("superradiant existence gates") {
    // Below g_t4 the list is empty.
    CHECK(sp_fixed_points(demo_params(0.45)).empty());
    CHECK(!sp_fixed_points(demo_params(0.46)).empty());
    // Above g_t1 the branch has escaped to the localized points.
    CHECK(sp_fixed_points(demo_params(1.03)).empty());
    // Outside the anisotropy window: empty for any g.
    for (double g = 0.05; g < 3.0; g += 0.05) {
        ModelParams p = demo_params(g);
        p.lambda = 2.5;  // above sqrt(2)+1
        CHECK(sp_fixed_points(p).empty());
    }
}

TEST_CASE("photon number diverges as g approaches g_t1 from below") {
    const ModelParams p = demo_params();
    const double gt1 = *g_t1(p);
    double prev_n = 0, prev_abs_sz = 1;
    for (double f : {0.9, 0.99, 0.999, 0.9999}) {
        ModelParams q = p;
        q.g = f * gt1;
        const auto sps = sp_fixed_points(q);
        REQUIRE(sps.size() == 2);
        CHECK(sps[0].state.n > prev_n);
        CHECK(std::abs(sps[0].state.sz) < prev_abs_sz);
        prev_n = sps[0].state.n;
        prev_abs_sz = std::abs(sps[0].state.sz);
    }
    CHECK(prev_n > 100.0);
    CHECK(prev_abs_sz < 0.01);
}

TEST_CASE("random superradiant points satisfy the flow to 1e-10") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    int found = 0;
    while (found < 500) {
        ModelParams p;
        p.omega0 = 1.0;
        p.kappa = 0.1 + 1.9 * uni(rng);
        const auto [lo, hi] = lambda_window(p);
        p.lambda = lo + (std::min(hi, 3.0) - lo) * uni(rng);
        p.n_qubits = 1 + int(uni(rng) * 9);
        p.omega_q = (0.05 + 2.95 * uni(rng)) / p.n_qubits;
        const auto lo_g = g_t4(p), hi_g = g_t1(p);
        if (!lo_g || !hi_g || !(*lo_g < *hi_g)) continue;
        p.g = *lo_g + (*hi_g - *lo_g) * uni(rng);
        const auto sps = sp_fixed_points(p);
        if (sps.empty()) continue;
        if (sps[0].state.n > 1e4) continue;  // residual floor ~ eps*kappa*n
        for (const auto& fp : sps) CHECK(rhs(fp.state, p).norm() <= 1e-10);
        ++found;
    }
}

TEST_CASE("stability classification at the normal phases") {
    // Stable below g_t2 and lambda_t.
    auto fp = classify_stability(np_fixed_point(false), demo_params(0.3));
    CHECK(fp.stability == Stability::Stable);
    CHECK(fp.leading_eigenvalues.size() == 5);

    // Instability window g_t2 < g < g_t3.
    fp = classify_stability(np_fixed_point(false), demo_params(0.6));
    CHECK(fp.stability == Stability::Unstable);

    // Restabilized past g_t3.
    fp = classify_stability(np_fixed_point(false), demo_params(1.3));
    CHECK(fp.stability == Stability::Stable);

    // Pole flip: NP_down unstable / NP_up stable above lambda_t.
    ModelParams p{1.0, 0.15, 0.3, 1.2, 1.0, 10};  // lambda_t ~ 1.0778
    CHECK(classify_stability(np_fixed_point(false), p).stability ==
          Stability::Unstable);
    CHECK(classify_stability(np_fixed_point(true), p).stability ==
          Stability::Stable);
    p.lambda = 0.9;
    CHECK(classify_stability(np_fixed_point(false), p).stability ==
          Stability::Stable);
    CHECK(classify_stability(np_fixed_point(true), p).stability ==
          Stability::Unstable);

    // Decoupled spin precession at g = 0 is marginal, not asymptotically
    // stable.
    ModelParams g0 = demo_params(0.0);
    CHECK(classify_stability(np_fixed_point(false), g0).stability ==
          Stability::Marginal);
}

TEST_CASE("classification flips within a tight window around the boundaries") {
    const ModelParams p = demo_params();
    for (auto [boundary, name] :
         {std::pair{*g_t2(p), "g_t2"}, std::pair{*g_t3(p), "g_t3"}}) {
        ModelParams lo = p, hi = p;
        lo.g = boundary - 1e-4;
        hi.g = boundary + 1e-4;
        const auto s_lo = classify_stability(np_fixed_point(false), lo);
        const auto s_hi = classify_stability(np_fixed_point(false), hi);
        INFO(name);
        CHECK(s_lo.stability != s_hi.stability);
    }
    // lambda_t window for the pole flip.
    ModelParams p2{1.0, 0.15, 0.3, 0.0, 1.0, 10};
    const double lt = lambda_t(p2);
    ModelParams lo = p2, hi = p2;
    lo.lambda = lt - 1e-4;
    hi.lambda = lt + 1e-4;
    CHECK(classify_stability(np_fixed_point(false), lo).stability ==
          Stability::Stable);
    CHECK(classify_stability(np_fixed_point(false), hi).stability ==
          Stability::Unstable);
}

TEST_CASE("superradiant Hopf signature between g = 0.579 and g = 0.64") {
    // N = 1, omega_z = 0.8, lambda = 1.2, omega0 = kappa = 1
    auto params = [](double g) {
        return ModelParams::from_omega_z(1.0, 0.8, g, 1.2, 1.0, 1);
    };
    auto sp_stable = [&](double g) {
        const auto sps = sp_fixed_points(params(g));
        REQUIRE(sps.size() == 2);
        return classify_stability(sps[0], params(g));
    };
    const auto before = sp_stable(0.579);
    CHECK(before.stability == Stability::Stable);
    const auto after = sp_stable(0.64);
    CHECK(after.stability == Stability::Unstable);
    CHECK(std::abs(after.leading_eigenvalues.front().imag()) > 1e-3);
}

TEST_CASE("superradiant branch merges into the normal phase at g_t2") {
    // Second-order (pitchfork) transition for omega_z < omega0/2.
    const ModelParams p = demo_params();
    ModelParams q = p;
    q.g = *g_t2(p) * (1.0 + 1e-6);
    const auto sps = sp_fixed_points(q);
    REQUIRE(sps.size() == 2);
    const Vec6 np = np_fixed_point(false).state.as_vec();
    CHECK((sps[0].state.as_vec() - np).norm() < 1e-2);

    ModelParams q2 = p;
    q2.g = *g_t2(p) * (1.0 + 1e-10);
    const auto sps2 = sp_fixed_points(q2);
    REQUIRE(sps2.size() == 2);
    CHECK((sps2[0].state.as_vec() - np).norm() <
          (sps[0].state.as_vec() - np).norm());
}

TEST_CASE("classify_stability rejects the localized points") {
    CHECK_THROWS_AS(
        classify_stability(u0_fixed_points()[0], demo_params()),
        std::invalid_argument);
}

TEST_CASE("stable phase taxonomy along the demo slice") {
    CHECK(stable_phase(demo_params(0.3)).label == "NPdown");
    CHECK(stable_phase(demo_params(0.6)).label == "SP");
    CHECK(stable_phase(demo_params(1.3)).label == "Cdown");

    // Bistable NP_down + SP at omega_z > omega0/2: g_t4 < g < g_t2.
    const auto p = ModelParams::from_omega_z(1.0, 0.8, 0.89, 0.5, 1.0, 2);
    REQUIRE(g_t4(p));
    CHECK(*g_t4(p) < p.g);
    CHECK(p.g < *g_t2(p));
    CHECK(stable_phase(p).label == "Bdown");

    // NP_up region and coexistence past g_t1.
    ModelParams up{1.0, 0.15, 0.3, 1.3, 1.0, 10};
    CHECK(stable_phase(up).label == "NPup");
    up.g = 1.1;  // above g_t1(lambda=1.3)
    REQUIRE(g_t1(up));
    CHECK(up.g > *g_t1(up));
    CHECK(stable_phase(up).label == "Cup");
}

TEST_CASE("phase boundaries record serializes the full set") {
    const auto b = phase_boundaries(demo_params());
    CHECK(b.lambda_t > 1.0);
    CHECK(b.g_t1);
    CHECK(b.g_t4);
    CHECK(b.lambda_lo < 0.5);
    CHECK(b.lambda_hi > 0.5);
}

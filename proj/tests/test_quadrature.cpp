// Quadrature engine checks: closed-form integrands (the honesty battery),
// tail bounds against the exact discarded mass, convergence orders of the
// fixed rules, failure statuses, and bit-level determinism across workers.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "abphase/charge.hpp"
#include "abphase/quadrature.hpp"
#include "abphase/solenoid.hpp"

#include "closed_forms.hpp"

using namespace abphase;

namespace {

constexpr double kPi = 3.14159265358979323846;

SolenoidSpec unit_sol() { return SolenoidSpec::from_field(1.0, 1.0); }

QuadratureConfig tight() {
    QuadratureConfig cfg;  // rel 1e-6 / abs 1e-12 defaults
    return cfg;
}

using testing::ClosedForm;
using testing::e_cross_zhat;
using testing::honesty_battery;

} // namespace

TEST_CASE("Gauss-Legendre rules: symmetry, weights, exactness") {
    for (int n : {1, 2, 3, 5, 8, 13, 21, 32}) {
        const GaussLegendreRule& r = gauss_legendre(n);
        REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));

        double wsum = 0.0;
        for (double w : r.weights) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

        // exact mirror symmetry, bit for bit
        for (int i = 0; i < n; ++i) {
            CHECK(r.nodes[i] == -r.nodes[n - 1 - i]);
            CHECK(r.weights[i] == r.weights[n - 1 - i]);
        }
        if (n % 2 == 1) CHECK(r.nodes[n / 2] == 0.0);

        // integrates x^(2n-2) exactly; x^(2n-1) vanishes by symmetry
        double even = 0.0, odd = 0.0;
        for (int i = 0; i < n; ++i) {
            even += r.weights[i] * std::pow(r.nodes[i], 2 * n - 2);
            odd += r.weights[i] * std::pow(r.nodes[i], 2 * n - 1);
        }
        CAPTURE(n);
        CHECK(even == doctest::Approx(2.0 / (2.0 * n - 1.0)).epsilon(1e-12));
        CHECK(std::abs(odd) < 1e-14);
    }
    CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_legendre(33), std::invalid_argument);
}

TEST_CASE("config validation") {
    QuadratureConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.abs_tol = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.points_per_axis = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.points_per_axis = 33;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.workers = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.fixed_z_half_extent = -2.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.max_cells = 4;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("honesty battery: ten closed forms, measured error within estimate") {
    SolenoidSpec sol = unit_sol();
    int honest = 0;
    for (const ClosedForm& c : honesty_battery()) {
        QuadratureConfig cfg = tight();
        cfg.fixed_z_half_extent = c.fixed_z;
        IntegralResult r = integrate_solenoid_volume(c.f, sol, cfg);
        CAPTURE(c.name);
        CHECK(r.converged());
        double true_err = std::abs(r.value - c.exact);
        // converged contract: the estimate meets the request
        CHECK(r.error_estimate <=
              std::max(cfg.rel_tol * std::abs(r.value), cfg.abs_tol) * (1.0 + 1e-12));
        // honesty: the true error is within the reported estimate, up to a
        // roundoff allowance for the polynomial-exact cases
        double slack = 1e-13 * std::max(1.0, std::abs(c.exact));
        CHECK(true_err <= r.error_estimate + slack);
        if (true_err <= r.error_estimate + slack) ++honest;
    }
    CHECK(honest >= 10);
}

TEST_CASE("tail bound matches the exact discarded mass of a z^-3 profile") {
    SolenoidSpec sol = unit_sol();
    // cross-section integral S(z) = 1/max(|z|,1)^3 exactly
    ScalarField f = [](const Vec3& p) {
        double az = std::max(std::abs(p.z), 1.0);
        return 1.0 / (kPi * az * az * az);
    };
    TailEstimate t = tail_estimate(f, sol, 10.0);
    CHECK(t.decaying);
    // true discarded mass per side: 1/(2 Z^2) = 0.005
    CHECK(t.lower == doctest::Approx(0.005).epsilon(1e-6));
    CHECK(t.upper == doctest::Approx(0.005).epsilon(1e-6));
    CHECK(t.lower >= 0.005 * (1.0 - 1e-9));  // bound, not underestimate

    // doubling the truncation cuts the bound by 4
    TailEstimate t2 = tail_estimate(f, sol, 20.0);
    CHECK(t.total() / t2.total() >= 3.9);

    // zero field: zero tail, still decaying
    TailEstimate t0 = tail_estimate(ScalarField([](const Vec3&) { return 0.0; }), sol,
                                    10.0);
    CHECK(t0.decaying);
    CHECK(t0.total() == 0.0);

    // flat field: refuses to extrapolate
    TailEstimate t1 = tail_estimate(ScalarField([](const Vec3&) { return 1.0; }), sol,
                                    10.0);
    CHECK(!t1.decaying);
    CHECK(std::isinf(t1.total()));
}

TEST_CASE("tail refusal surfaces as tail_not_decaying with an infinite error") {
    SolenoidSpec sol = unit_sol();
    QuadratureConfig cfg = tight();
    cfg.max_z_doublings = 2;
    IntegralResult r =
        integrate_solenoid_volume(ScalarField([](const Vec3&) { return 1.0; }), sol, cfg);
    CHECK(r.status == QuadratureStatus::tail_not_decaying);
    CHECK(!r.converged());
    CHECK(std::isinf(r.error_estimate));
    // two doublings from 16 R
    CHECK(r.z_extent_used == doctest::Approx(64.0));
    CHECK(std::isfinite(r.value));
}

TEST_CASE("budget exhaustion keeps the best value and an honest error") {
    SolenoidSpec sol = unit_sol();
    ScalarField sharp = [](const Vec3& p) {
        double dr = p.rho() - 0.5;
        return 1.0 / (1e-4 + dr * dr + p.z * p.z);
    };
    QuadratureConfig cfg = tight();
    cfg.rel_tol = 1e-12;
    cfg.fixed_z_half_extent = 2.0;
    cfg.max_cells = 150;
    IntegralResult r = integrate_solenoid_volume(sharp, sol, cfg);
    CHECK(r.status == QuadratureStatus::cell_budget_exhausted);
    CHECK(std::isfinite(r.value));
    CHECK(r.error_estimate > 0.0);

    QuadratureConfig shallow = tight();
    shallow.rel_tol = 1e-12;
    shallow.fixed_z_half_extent = 2.0;
    shallow.max_refinement_depth = 1;
    IntegralResult r2 = integrate_solenoid_volume(sharp, sol, shallow);
    CHECK(r2.status == QuadratureStatus::max_depth_reached);
    CHECK(r2.error_estimate > 0.0);
}

TEST_CASE("interference-momentum-type integrand hits its closed form") {
    SolenoidSpec sol = unit_sol();
    // charge at (2,0,0): integral of E x z-hat = 4 pi A(2,0,0) = (0, pi, 0)
    VectorIntegralResult r =
        integrate_solenoid_volume(e_cross_zhat(Vec3{2, 0, 0, Quantity::position}), sol,
                                  tight());
    CHECK(r.converged());
    CHECK(r.value.y == doctest::Approx(kPi).epsilon(1e-6));
    // odd components cancel at mirror-symmetry level, far below tolerance
    CHECK(std::abs(r.value.x) < 1e-9);
    CHECK(std::abs(r.value.z) < 1e-9);
    CHECK(r.error_estimate.y <= std::max(1e-6 * r.value.norm(), 1e-12) * (1 + 1e-12));
    // honesty on the real physics integrand
    CHECK(std::abs(r.value.y - kPi) <= r.error_estimate.y + 1e-13);
}

TEST_CASE("tighter tolerances buy smaller true error on the physics integrand") {
    SolenoidSpec sol = unit_sol();
    // scalar projection with known value: integral of -E_x = pi
    ScalarField f = [](const Vec3& p) {
        UnitSystem desk;
        PointCharge ch{1.0, Vec3{2, 0, 0, Quantity::position},
                       Vec3{0, 0, 0, Quantity::velocity}};
        return -coulomb_field(ch, p, desk).x;
    };
    std::size_t prev_evals = 0;
    double prev_err = 1.0;
    for (double tol : {1e-4, 1e-6, 1e-8}) {
        QuadratureConfig cfg = tight();
        cfg.rel_tol = tol;
        IntegralResult r = integrate_solenoid_volume(f, sol, cfg);
        CAPTURE(tol);
        CHECK(r.converged());
        CHECK(std::abs(r.value - kPi) <= r.error_estimate + 1e-12);
        CHECK(r.error_estimate <= tol * std::abs(r.value) * (1 + 1e-12));
        CHECK(r.evaluations > prev_evals);
        CHECK(r.error_estimate < prev_err);
        prev_evals = r.evaluations;
        prev_err = r.error_estimate;
    }
}

TEST_CASE("doubling the z truncation moves the result by less than the tail bound") {
    SolenoidSpec sol = unit_sol();
    VectorField f = e_cross_zhat(Vec3{2, 0, 0, Quantity::position});

    QuadratureConfig base = tight();
    base.rel_tol = 1e-8;  // drive the cell error below the tail difference
    base.fixed_z_half_extent = 32.0;
    VectorIntegralResult r1 = integrate_solenoid_volume(f, sol, base);
    base.fixed_z_half_extent = 64.0;
    VectorIntegralResult r2 = integrate_solenoid_volume(f, sol, base);
    TailEstimate t = tail_estimate(f, sol, 32.0);

    CHECK(t.decaying);
    CHECK((r2.value - r1.value).norm() <= t.total());
}

TEST_CASE("bit-identical results for 1 and 4 workers") {
    SolenoidSpec sol = unit_sol();
    VectorField f = e_cross_zhat(Vec3{2, 0, 0, Quantity::position});

    QuadratureConfig one = tight();
    one.workers = 1;
    QuadratureConfig four = tight();
    four.workers = 4;

    VectorIntegralResult a = integrate_solenoid_volume(f, sol, one);
    VectorIntegralResult b = integrate_solenoid_volume(f, sol, four);
    CHECK(a.value.x == b.value.x);
    CHECK(a.value.y == b.value.y);
    CHECK(a.value.z == b.value.z);
    CHECK(a.error_estimate.y == b.error_estimate.y);
    CHECK(a.evaluations == b.evaluations);
    CHECK(a.z_extent_used == b.z_extent_used);

    // and across repeated runs
    VectorIntegralResult c = integrate_solenoid_volume(f, sol, one);
    CHECK(a.value.y == c.value.y);
    CHECK(a.error_estimate.y == c.error_estimate.y);
}

TEST_CASE("off-center charge needs a recentered truncation window") {
    SolenoidSpec sol = unit_sol();
    // gaussian slab centered at z = 5
    ScalarField f = [](const Vec3& p) {
        double d = p.z - 5.0;
        return std::exp(-d * d);
    };
    double exact = std::pow(kPi, 1.5) * std::erf(3.0);

    QuadratureConfig cfg = tight();
    cfg.fixed_z_half_extent = 3.0;
    IntegralResult centered = integrate_solenoid_volume(f, sol, cfg, 5.0);
    CHECK(centered.converged());
    CHECK(centered.value == doctest::Approx(exact).epsilon(1e-6));

    // growth mode centered on the feature converges to the full-line value
    QuadratureConfig grow = tight();
    IntegralResult g = integrate_solenoid_volume(f, sol, grow, 5.0);
    CHECK(g.converged());
    CHECK(g.value == doctest::Approx(std::pow(kPi, 1.5)).epsilon(1e-6));
}

TEST_CASE("fixed cylinder rule converges at order 2p") {
    SolenoidSpec sol = unit_sol();
    ScalarField f = [](const Vec3& p) { return std::exp(0.5 * p.z); };
    double exact = 4.0 * kPi * std::sinh(1.0);

    // p = 2: z-error is the whole error, expect O(n^-4)
    double e2 = std::abs(integrate_cylinder_fixed(f, sol, 2.0, 1, 1, 2, 2) - exact);
    double e4 = std::abs(integrate_cylinder_fixed(f, sol, 2.0, 1, 1, 4, 2) - exact);
    double e8 = std::abs(integrate_cylinder_fixed(f, sol, 2.0, 1, 1, 8, 2) - exact);
    double s1 = std::log2(e2 / e4);
    double s2 = std::log2(e4 / e8);
    CAPTURE(e2); CAPTURE(e4); CAPTURE(e8);
    CHECK(s1 > 3.2);
    CHECK(s1 < 4.8);
    CHECK(s2 > 3.2);
    CHECK(s2 < 4.8);
}

TEST_CASE("loop rule: composite Gauss-Legendre at order 2p on the time axis") {
    CircularTrajectory traj;  // T = 400 pi
    double T = traj.total_time();
    double a = 2.37 * 2.0 * kPi / T;  // non-periodic over [0, T]
    LoopIntegrand g = [a](const Vec3&, const Vec3&, double t) { return std::cos(a * t); };
    double exact = std::sin(a * T) / a;

    auto err = [&](int panels) {
        return std::abs(integrate_loop_fixed(g, traj, panels, 3) - exact);
    };
    double s1 = std::log2(err(4) / err(8));
    double s2 = std::log2(err(8) / err(16));
    CAPTURE(err(4)); CAPTURE(err(8)); CAPTURE(err(16));
    CHECK(s1 > 5.0);
    CHECK(s1 < 7.0);
    CHECK(s2 > 5.0);
    CHECK(s2 < 7.0);
}

TEST_CASE("adaptive loop integral: Richardson estimate is honest") {
    CircularTrajectory traj;
    double T = traj.total_time();
    double a = 2.37 * 2.0 * kPi / T;
    LoopIntegrand g = [a](const Vec3&, const Vec3&, double t) { return std::cos(a * t); };
    double exact = std::sin(a * T) / a;

    QuadratureConfig cfg = tight();
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-14;
    IntegralResult r = integrate_loop(g, traj, cfg);
    CHECK(r.converged());
    CHECK(std::abs(r.value - exact) <= r.error_estimate + 1e-14);

    // constant integrand: exact after the first doubling, zero estimate
    IntegralResult c = integrate_loop(
        LoopIntegrand([](const Vec3&, const Vec3&, double) { return 1.0; }), traj, cfg);
    CHECK(c.value == doctest::Approx(T).epsilon(1e-15));
    CHECK(c.error_estimate == 0.0);

    // whole winding of a pure harmonic integrates to ~0
    LoopIntegrand h = [&](const Vec3& pos, const Vec3&, double) { return pos.y; };
    IntegralResult zero = integrate_loop(h, traj, cfg);
    CHECK(std::abs(zero.value) < 1e-9);

    // degenerate paths are rejected
    CircularTrajectory parked = traj;
    parked.speed = 0.0;
    CHECK_THROWS_AS(integrate_loop(g, parked, cfg), std::invalid_argument);
    CircularTrajectory no_turns = traj;
    no_turns.windings = 0;
    CHECK_THROWS_AS(integrate_loop(g, no_turns, cfg), std::invalid_argument);
}

TEST_CASE("loop integrand receives consistent kinematics") {
    CircularTrajectory traj;
    QuadratureConfig cfg = tight();
    // map position/velocity samples through the trajectory's own accessors
    LoopIntegrand g = [&](const Vec3& pos, const Vec3& vel, double t) {
        Vec3 dp = pos - traj.position(t);
        Vec3 dv = vel - traj.velocity(t);
        return dp.norm() + dv.norm();
    };
    IntegralResult r = integrate_loop(g, traj, cfg);
    CHECK(r.value == 0.0);
}

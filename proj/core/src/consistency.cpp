#include "abphase/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "abphase/phase.hpp"
#include "abphase/report_io.hpp"

namespace abphase {

namespace {

// Pinned suite tolerances. kPhaseTol matches the reference-phase acceptance
// bar; the FD and identity bars match the quadrature/step-size error floors
// they are checked against.
constexpr double kPhaseTol = 1e-3;       // absolute phase agreement, radians
constexpr double kIdentityTol = 1e-4;    // relative momentum-identity residual
constexpr double kPurityTol = 1e-4;      // off-azimuthal leakage of the integral
constexpr double kFdTol = 1e-6;          // force finite-difference residual
constexpr double kWindingTol = 3e-3;     // |phase(k) - k*phase(1)|, radians
constexpr double kLinearityRelTol = 1e-5;  // q/B scaling, relative
constexpr double kShieldZeroTol = 1e-9;  // phases of identically-zero integrands

std::string g9(double v) { return format_g9(v); }

std::string point_str(const Vec3& p) {
    return "(" + g9(p.x) + ", " + g9(p.y) + ", " + g9(p.z) + ")";
}

template <typename Fn>
void run_check(ConsistencyReport& rep, const std::string& name, Fn&& fn) {
    CheckResult r;
    r.name = name;
    try {
        fn(r);
    } catch (const std::exception& e) {
        r.status = CheckStatus::inconclusive;
        r.detail = std::string("aborted: ") + e.what();
    }
    rep.checks.push_back(std::move(r));
}

void mark_inconclusive(CheckResult& r, const std::string& why) {
    r.status = CheckStatus::inconclusive;
    r.detail = why;
}

bool need_converged(CheckResult& r, const PhaseReport& p) {
    if (p.converged()) return true;
    mark_inconclusive(r, std::string(phase_method_name(p.method)) +
                             " quadrature did not converge (" +
                             quadrature_status_name(p.status) + ")");
    return false;
}

} // namespace

const char* check_status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "PASS";
        case CheckStatus::fail: return "FAIL";
        case CheckStatus::inconclusive: return "INCONCLUSIVE";
        case CheckStatus::expected_discrepancy: return "EXPECTED-DISCREPANCY";
    }
    return "UNKNOWN";
}

bool ConsistencyReport::all_ok() const {
    for (const CheckResult& c : checks)
        if (c.status != CheckStatus::pass &&
            c.status != CheckStatus::expected_discrepancy)
            return false;
    return true;
}

bool ConsistencyReport::any_inconclusive() const {
    for (const CheckResult& c : checks)
        if (c.status == CheckStatus::inconclusive) return true;
    return false;
}

ConsistencyReport run_consistency_suite(const Scenario& sc) {
    sc.validate();
    ConsistencyReport rep;

    const UnitSystem& un = sc.units;
    const SolenoidSpec& sol = sc.solenoid;
    const CircularTrajectory& traj = sc.trajectory;
    const QuadratureConfig& cfg = sc.quadrature;
    const double q = sc.charge_q;
    const bool moving = traj.speed > 0.0;
    const char* kStatic = "static charge: loop phases undefined";

    const double expected_ab = q * un.q_unit * static_cast<double>(traj.windings) *
                               enclosed_flux(sol) / (un.c * un.hbar);

    PhaseReport ab{}, fm{}, en{};
    bool have_ab = false, have_fm = false, have_en = false;

    run_check(rep, "phase-ab-closed-form", [&](CheckResult& r) {
        if (!moving) return mark_inconclusive(r, kStatic);
        ab = phase_ab(traj, sol, cfg, un, q);
        have_ab = true;
        if (!need_converged(r, ab)) return;
        double diff = std::abs(ab.value - expected_ab);
        r.status = diff <= kPhaseTol ? CheckStatus::pass : CheckStatus::fail;
        r.detail = "loop integral " + g9(ab.value) + " vs q k Phi / (c hbar) = " +
                   g9(expected_ab) + ", |diff| = " + g9(diff);
    });

    // --- shielded scenarios: the reduced check set ---------------------
    if (sol.shielded) {
        for (std::size_t i = 0; i < sc.identity_points.size(); ++i) {
            run_check(rep, "momentum-identity[" + std::to_string(i) + "]",
                      [&, i](CheckResult& r) {
                PointCharge ch{q, sc.identity_points[i],
                               Vec3{0.0, 0.0, 0.0, Quantity::velocity}};
                MomentumIdentityResidual res = verify_momentum_identity(sol, ch, cfg, un);
                if (!res.converged()) {
                    return mark_inconclusive(
                        r, std::string("quadrature did not converge (") +
                               quadrature_status_name(res.integral.status) + ")");
                }
                double rhs_norm = res.rhs.norm();
                bool rhs_zero = rhs_norm <= 10.0 * cfg.abs_tol;
                if (res.lhs.norm() <= cfg.abs_tol) {
                    // no flux at all: nothing for the shield to suppress
                    r.status = rhs_zero ? CheckStatus::pass : CheckStatus::fail;
                    r.detail = "at " + point_str(res.point) +
                               ": both sides vanish (no flux), |rhs| = " + g9(rhs_norm);
                    return;
                }
                r.status = rhs_zero ? CheckStatus::expected_discrepancy
                                    : CheckStatus::fail;
                r.detail = "at " + point_str(res.point) +
                           ": shield zeroes the field overlap, volume integral |rhs| = " +
                           g9(rhs_norm) + " while |q A / c| = " + g9(res.lhs.norm()) +
                           " (documented shield limitation)";
            });
        }

        run_check(rep, "shielded-zero-momentum", [&](CheckResult& r) {
            if (!moving) return mark_inconclusive(r, kStatic);
            PhaseReport pfm = phase_field_momentum(traj, sol, cfg, un, q);
            PhaseReport pen = phase_interference_energy(traj, sol, cfg, un, q);
            PhaseReport phm = phase_hidden_momentum(traj, sol, cfg, un, q);
            if (!need_converged(r, pfm) || !need_converged(r, pen) ||
                !need_converged(r, phm))
                return;
            double worst = std::max({std::abs(pfm.value), std::abs(pen.value),
                                     std::abs(phm.value)});
            r.status = worst <= kShieldZeroTol ? CheckStatus::pass : CheckStatus::fail;
            r.detail = "field-overlap phases with the shield up: momentum " +
                       g9(pfm.value) + ", energy " + g9(pen.value) + ", hidden " +
                       g9(phm.value);
        });
    }

    // --- unshielded scenarios: the full cross-validation ---------------
    if (!sol.shielded) {
        run_check(rep, "phase-equivalence-field-momentum", [&](CheckResult& r) {
            if (!moving) return mark_inconclusive(r, kStatic);
            fm = phase_field_momentum(traj, sol, cfg, un, q);
            have_fm = true;
            if (!need_converged(r, fm)) return;
            if (!have_ab || !ab.converged())
                return mark_inconclusive(r, "reference AB phase unavailable");
            double diff = std::abs(fm.value - ab.value);
            r.status = diff <= kPhaseTol ? CheckStatus::pass : CheckStatus::fail;
            r.detail = "field-momentum loop " + g9(fm.value) + " vs vector-potential " +
                       g9(ab.value) + ", |diff| = " + g9(diff);
        });

        run_check(rep, "phase-interference-energy", [&](CheckResult& r) {
            if (!moving) return mark_inconclusive(r, kStatic);
            en = phase_interference_energy(traj, sol, cfg, un, q);
            have_en = true;
            if (!need_converged(r, en)) return;
            if (!have_ab || !ab.converged())
                return mark_inconclusive(r, "reference AB phase unavailable");
            double mag_diff = std::abs(std::abs(en.value) - std::abs(ab.value));
            r.status = mag_diff <= kPhaseTol ? CheckStatus::pass : CheckStatus::fail;
            const char* sign_note =
                en.value * ab.value >= 0.0
                    ? "energy phase carries the same sign as the AB phase"
                    : "energy phase carries the opposite sign to the AB phase";
            r.detail = "|energy phase| " + g9(std::abs(en.value)) + " vs |AB| " +
                       g9(std::abs(ab.value)) + ", |diff| = " + g9(mag_diff) + "; " +
                       sign_note + " (empirical sign recorded, not enforced)";
        });

        run_check(rep, "phase-hidden-momentum-sign", [&](CheckResult& r) {
            if (!moving) return mark_inconclusive(r, kStatic);
            PhaseReport hm = phase_hidden_momentum(traj, sol, cfg, un, q);
            if (!need_converged(r, hm)) return;
            if (!have_ab || !ab.converged() || !have_fm || !fm.converged())
                return mark_inconclusive(r, "reference phases unavailable");
            double cancel = std::abs(hm.value + fm.value);
            double cancel_tol =
                std::max(3.0 * (hm.error_estimate + fm.error_estimate), 1e-9);
            double vs_ab = std::abs(hm.value + ab.value);
            bool ok = cancel <= cancel_tol && vs_ab <= kPhaseTol;
            r.status = ok ? CheckStatus::pass : CheckStatus::fail;
            r.detail = "hidden " + g9(hm.value) + ": |hidden + field-momentum| = " +
                       g9(cancel) + " (tol " + g9(cancel_tol) +
                       "), |hidden + AB| = " + g9(vs_ab);
        });

        for (std::size_t i = 0; i < sc.identity_points.size(); ++i) {
            run_check(rep, "momentum-identity[" + std::to_string(i) + "]",
                      [&, i](CheckResult& r) {
                PointCharge ch{q, sc.identity_points[i],
                               Vec3{0.0, 0.0, 0.0, Quantity::velocity}};
                MomentumIdentityResidual res = verify_momentum_identity(sol, ch, cfg, un);
                if (!res.converged()) {
                    return mark_inconclusive(
                        r, std::string("quadrature did not converge (") +
                               quadrature_status_name(res.integral.status) + ")");
                }
                bool ok = res.residual <= kIdentityTol &&
                          res.azimuthal_purity_radial <= kPurityTol &&
                          res.azimuthal_purity_axial <= kPurityTol;
                r.status = ok ? CheckStatus::pass : CheckStatus::fail;
                r.detail = "at " + point_str(res.point) + ": residual " +
                           g9(res.residual) + ", off-azimuthal leakage rho " +
                           g9(res.azimuthal_purity_radial) + " / z " +
                           g9(res.azimuthal_purity_axial);
            });
        }
    }

    run_check(rep, "force-balance", [&](CheckResult& r) {
        if (sc.force_times.empty())
            return mark_inconclusive(r, "no force sample times in scenario");
        bool exact = true;
        double max_fd = 0.0, max_force = 0.0;
        for (double t : sc.force_times) {
            ForceSample fj = force_on_currents(traj, sol, t, un, q);
            ForceSample fh = hidden_force(traj, sol, t, un, q);
            Vec3 sum = fj.force + fh.force;
            if (sum.x != 0.0 || sum.y != 0.0 || sum.z != 0.0) exact = false;
            max_fd = std::max({max_fd, fj.fd_residual, fh.fd_residual});
            max_force = std::max(max_force, fj.force.norm());
        }
        bool ok = exact && max_fd <= kFdTol;
        r.status = ok ? CheckStatus::pass : CheckStatus::fail;
        r.detail = std::to_string(sc.force_times.size()) + " sample times: |F| up to " +
                   g9(max_force) + ", exact cancellation " +
                   (exact ? "held" : "BROKEN") + ", worst FD residual " + g9(max_fd);
    });

    if (!sol.shielded) {
        run_check(rep, "flux-only-dependence", [&](CheckResult& r) {
            if (!moving) return mark_inconclusive(r, kStatic);
            double lo = 0.0, hi = 0.0;
            bool first = true;
            auto fold = [&](double v) {
                lo = first ? v : std::min(lo, v);
                hi = first ? v : std::max(hi, v);
                first = false;
            };
            for (double m : {1.5, 2.0, 4.0}) {
                CircularTrajectory t = traj;
                t.rho0 = m * sol.radius;
                PhaseReport a = phase_ab(t, sol, cfg, un, q);
                PhaseReport p = phase_field_momentum(t, sol, cfg, un, q);
                if (!need_converged(r, a) || !need_converged(r, p)) return;
                fold(a.value);
                fold(p.value);
            }
            CircularTrajectory lifted = traj;
            lifted.z0 = traj.z0 + 0.7 * sol.radius;
            PhaseReport a = phase_ab(lifted, sol, cfg, un, q);
            PhaseReport p = phase_field_momentum(lifted, sol, cfg, un, q);
            if (!need_converged(r, a) || !need_converged(r, p)) return;
            fold(a.value);
            fold(p.value);
            double spread = hi - lo;
            r.status = spread <= kPhaseTol ? CheckStatus::pass : CheckStatus::fail;
            r.detail =
                "radii {1.5, 2, 4} R and a 0.7 R plane shift: phase spread " +
                g9(spread) + " (all routes read the same enclosed flux)";
        });

        run_check(rep, "winding-linearity", [&](CheckResult& r) {
            if (!moving) return mark_inconclusive(r, kStatic);
            CircularTrajectory base = traj;
            base.windings = 1;
            PhaseReport one = phase_ab(base, sol, cfg, un, q);
            if (!need_converged(r, one)) return;
            double worst = 0.0;
            for (int k : {-2, -1, 3}) {
                CircularTrajectory t = traj;
                t.windings = k;
                PhaseReport p = phase_ab(t, sol, cfg, un, q);
                if (!need_converged(r, p)) return;
                worst = std::max(worst, std::abs(p.value - k * one.value));
            }
            r.status = worst <= kWindingTol ? CheckStatus::pass : CheckStatus::fail;
            r.detail = "max |phase(k) - k phase(1)| = " + g9(worst) +
                       " over k in {-2, -1, 3}; volume routes inherit linearity "
                       "from the loop reduction";
        });

        run_check(rep, "speed-invariance", [&](CheckResult& r) {
            if (!moving) return mark_inconclusive(r, kStatic);
            if (!have_en || !en.converged())
                return mark_inconclusive(r, "reference energy phase unavailable");
            CircularTrajectory slow = traj;
            slow.speed = traj.speed / 2.0;
            PhaseReport en2 = phase_interference_energy(slow, sol, cfg, un, q);
            if (!need_converged(r, en2)) return;
            double diff = std::abs(en2.value - en.value);
            r.status = diff <= kPhaseTol ? CheckStatus::pass : CheckStatus::fail;
            r.detail = "halving the speed moves the energy phase by " + g9(diff) +
                       " (energy halves, duration doubles)";
        });

        run_check(rep, "source-linearity", [&](CheckResult& r) {
            if (!moving) return mark_inconclusive(r, kStatic);
            if (!have_fm || !fm.converged())
                return mark_inconclusive(r, "reference field-momentum phase unavailable");
            PhaseReport fm2q = phase_field_momentum(traj, sol, cfg, un, 2.0 * q);
            SolenoidSpec sol3 = sol;
            sol3.b_interior *= 3.0;
            PhaseReport fm3b = phase_field_momentum(traj, sol3, cfg, un, q);
            if (!need_converged(r, fm2q) || !need_converged(r, fm3b)) return;
            double rel_q = std::abs(fm2q.value - 2.0 * fm.value) /
                           std::max(std::abs(2.0 * fm.value), 1e-12);
            double rel_b = std::abs(fm3b.value - 3.0 * fm.value) /
                           std::max(std::abs(3.0 * fm.value), 1e-12);
            bool ok = rel_q <= kLinearityRelTol && rel_b <= kLinearityRelTol;
            r.status = ok ? CheckStatus::pass : CheckStatus::fail;
            r.detail = "doubling q: relative deviation " + g9(rel_q) +
                       "; tripling B: " + g9(rel_b);
        });

        run_check(rep, "shielded-contrast", [&](CheckResult& r) {
            if (!moving) return mark_inconclusive(r, kStatic);
            if (!have_ab || !ab.converged())
                return mark_inconclusive(r, "reference AB phase unavailable");
            SolenoidSpec shielded = sol;
            shielded.shielded = true;
            PhaseReport ab_s = phase_ab(traj, shielded, cfg, un, q);
            PhaseReport fm_s = phase_field_momentum(traj, shielded, cfg, un, q);
            if (!need_converged(r, ab_s) || !need_converged(r, fm_s)) return;
            bool ok = std::abs(ab_s.value - ab.value) <= 1e-12 &&
                      std::abs(fm_s.value) <= kShieldZeroTol;
            r.status = ok ? CheckStatus::pass : CheckStatus::fail;
            r.detail = "with the shield up the potential route still reads " +
                       g9(ab_s.value) + " while the field-overlap route reads " +
                       g9(fm_s.value);
        });
    }

    return rep;
}

} // namespace abphase

#include "abphase/phase.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace abphase {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFdStepFraction = 1e-4;   // FD step as a fraction of the period
constexpr double kFdWarnThreshold = 1e-6;

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

// The Coulomb singularity must stay off the integration domain: same
// clearance rule as trajectories, rejected rather than resolved.
void require_clearance(const SolenoidSpec& sol, const Vec3& pos) {
    if (pos.rho() < kClearanceFactor * sol.radius)
        throw std::invalid_argument(
            "field integral: source charge must stay outside the solenoid "
            "(rho >= 1.05 * R)");
}

Vec3 unit_phi(const Vec3& pos) {
    double rho = pos.rho();
    if (rho == 0.0) return {0.0, 0.0, 0.0};
    return {-pos.y / rho, pos.x / rho, 0.0};
}

// bound on |dot(err, phihat)| from per-component error bounds
double phi_component_error(const Vec3& err, const Vec3& phihat) {
    return std::abs(phihat.x) * std::abs(err.x) + std::abs(phihat.y) * std::abs(err.y);
}

// Loop phase of a momentum-like vector field that is purely azimuthal with
// magnitude set by rho alone (guaranteed here by the solenoid's symmetry):
//   integral of P . dr over k windings = k * 2 pi rho0 * P_phi(rho0).
// One volume integral at a representative path point replaces a volume
// integral per path sample.
PhaseReport reduced_loop_phase(PhaseMethod method, const CircularTrajectory& traj,
                               const VectorIntegralResult& p, const Vec3& rep_pos,
                               const UnitSystem& units,
                               std::chrono::steady_clock::time_point start) {
    Vec3 phihat = unit_phi(rep_pos);
    double p_phi = dot(p.value, phihat);
    double scale = static_cast<double>(traj.windings) * 2.0 * kPi * traj.rho0 / units.hbar;

    PhaseReport rep;
    rep.method = method;
    rep.value = scale * p_phi;
    rep.error_estimate = std::abs(scale) * phi_component_error(p.error_estimate, phihat);
    rep.evaluations = p.evaluations;
    rep.z_extent_used = p.z_extent_used;
    rep.status = p.status;
    rep.wall_time_seconds = elapsed_seconds(start);
    return rep;
}

} // namespace

const char* phase_method_name(PhaseMethod m) {
    switch (m) {
        case PhaseMethod::ab_vector_potential: return "ab_vector_potential";
        case PhaseMethod::field_momentum: return "field_momentum";
        case PhaseMethod::interference_energy: return "interference_energy";
        case PhaseMethod::hidden_momentum: return "hidden_momentum";
    }
    return "unknown";
}

PhaseReport phase_ab(const CircularTrajectory& traj, const SolenoidSpec& sol,
                     const QuadratureConfig& cfg, const UnitSystem& units,
                     double charge_q) {
    auto start = std::chrono::steady_clock::now();
    units.validate();
    sol.validate();
    cfg.validate();
    traj.validate(sol, units);

    auto integrand = [&](const Vec3& pos, const Vec3& vel, double) {
        return dot(vector_potential(sol, pos), vel);
    };
    IntegralResult loop = integrate_loop(integrand, traj, cfg);

    double scale = charge_q * units.q_unit / (units.c * units.hbar);
    PhaseReport rep;
    rep.method = PhaseMethod::ab_vector_potential;
    rep.value = scale * loop.value;
    rep.error_estimate = std::abs(scale) * loop.error_estimate;
    rep.evaluations = loop.evaluations;
    rep.z_extent_used = 0.0;
    rep.status = loop.status;
    rep.wall_time_seconds = elapsed_seconds(start);
    return rep;
}

VectorIntegralResult field_momentum(const SolenoidSpec& sol, const PointCharge& charge,
                                    const QuadratureConfig& cfg,
                                    const UnitSystem& units) {
    units.validate();
    sol.validate();
    cfg.validate();
    validate_charge(charge, units);
    require_clearance(sol, charge.position);

    double scale = 1.0 / (4.0 * kPi * units.c);
    auto integrand = [&](const Vec3& r_prime) {
        Vec3 e = coulomb_field(charge, r_prime, units, &sol);
        Vec3 b = interior_b_field(sol, r_prime);
        return (scale * cross(e, b)).with_tag(Quantity::momentum_density);
    };
    VectorIntegralResult r =
        integrate_solenoid_volume(integrand, sol, cfg, charge.position.z);
    r.value.tag = Quantity::momentum;
    return r;
}

MomentumIdentityResidual verify_momentum_identity(const SolenoidSpec& sol,
                                                  const PointCharge& charge,
                                                  const QuadratureConfig& cfg,
                                                  const UnitSystem& units) {
    MomentumIdentityResidual out;
    out.point = charge.position;
    out.integral = field_momentum(sol, charge, cfg, units);
    out.rhs = out.integral.value;

    double q_eff = charge.q * units.q_unit;
    out.lhs = (q_eff / units.c * vector_potential(sol, charge.position))
                  .with_tag(Quantity::momentum);

    double floor = cfg.abs_tol;
    out.residual = (out.lhs - out.rhs).norm() / std::max(out.lhs.norm(), floor);

    // purity: the off-azimuthal leakage of the numeric integral
    Vec3 rhohat{charge.position.x, charge.position.y, 0.0};
    double rho = rhohat.norm();
    if (rho > 0.0) rhohat = rhohat / rho;
    double denom = std::max(out.rhs.norm(), floor);
    out.azimuthal_purity_radial = std::abs(dot(out.rhs, rhohat)) / denom;
    out.azimuthal_purity_axial = std::abs(out.rhs.z) / denom;
    return out;
}

PhaseReport phase_field_momentum(const CircularTrajectory& traj, const SolenoidSpec& sol,
                                 const QuadratureConfig& cfg, const UnitSystem& units,
                                 double charge_q) {
    auto start = std::chrono::steady_clock::now();
    traj.validate(sol, units);
    PointCharge rep = traj.charge_at(0.0, charge_q);
    VectorIntegralResult p = field_momentum(sol, rep, cfg, units);
    return reduced_loop_phase(PhaseMethod::field_momentum, traj, p, rep.position, units,
                              start);
}

IntegralResult interference_energy(const SolenoidSpec& sol, const PointCharge& charge,
                                   const QuadratureConfig& cfg, const UnitSystem& units) {
    units.validate();
    sol.validate();
    cfg.validate();
    validate_charge(charge, units);
    require_clearance(sol, charge.position);

    double scale = 1.0 / (4.0 * kPi);
    auto integrand = [&](const Vec3& r_prime) {
        Vec3 b_el = electron_b_field(charge, r_prime, units, &sol);
        Vec3 b = interior_b_field(sol, r_prime);
        return scale * dot(b_el, b);
    };
    return integrate_solenoid_volume(integrand, sol, cfg, charge.position.z);
}

PhaseReport phase_interference_energy(const CircularTrajectory& traj,
                                      const SolenoidSpec& sol,
                                      const QuadratureConfig& cfg,
                                      const UnitSystem& units, double charge_q) {
    auto start = std::chrono::steady_clock::now();
    traj.validate(sol, units);

    // By symmetry U(t) is constant on the circle, so the time integral is
    // U * |k| * T from one representative sample.
    PointCharge rep = traj.charge_at(0.0, charge_q);
    IntegralResult u = interference_energy(sol, rep, cfg, units);
    double duration = traj.total_time();

    PhaseReport repr;
    repr.method = PhaseMethod::interference_energy;
    repr.value = u.value * duration / units.hbar;
    repr.error_estimate = u.error_estimate * duration / units.hbar;
    repr.evaluations = u.evaluations;
    repr.z_extent_used = u.z_extent_used;
    repr.status = u.status;
    repr.wall_time_seconds = elapsed_seconds(start);
    return repr;
}

VectorIntegralResult hidden_momentum_total(const SolenoidSpec& sol,
                                           const PointCharge& charge,
                                           const QuadratureConfig& cfg,
                                           const UnitSystem& units) {
    units.validate();
    sol.validate();
    cfg.validate();
    validate_charge(charge, units);
    require_clearance(sol, charge.position);

    double scale = 1.0 / units.c;
    auto integrand = [&](const Vec3& r_prime) {
        Vec3 m = magnetization_density(sol, r_prime);
        Vec3 e = coulomb_field(charge, r_prime, units, &sol);
        return (scale * cross(m, e)).with_tag(Quantity::momentum_density);
    };
    VectorIntegralResult r =
        integrate_solenoid_volume(integrand, sol, cfg, charge.position.z);
    r.value.tag = Quantity::momentum;
    return r;
}

PhaseReport phase_hidden_momentum(const CircularTrajectory& traj, const SolenoidSpec& sol,
                                  const QuadratureConfig& cfg, const UnitSystem& units,
                                  double charge_q) {
    auto start = std::chrono::steady_clock::now();
    traj.validate(sol, units);
    PointCharge rep = traj.charge_at(0.0, charge_q);
    VectorIntegralResult p = hidden_momentum_total(sol, rep, cfg, units);
    return reduced_loop_phase(PhaseMethod::hidden_momentum, traj, p, rep.position, units,
                              start);
}

namespace {

// Shared driver for the general-path routes: one full volume integral per
// path sample, loop quadrature on top. `sample` returns the loop integrand
// value plus an error bound for that sample.
struct DirectSample {
    double value = 0.0;
    double inner_error = 0.0;
    std::size_t evaluations = 0;
    double z_extent = 0.0;
    QuadratureStatus status = QuadratureStatus::converged;
};

template <typename SampleFn>
PhaseReport direct_loop_phase(PhaseMethod method, const CircularTrajectory& traj,
                              const QuadratureConfig& loop_cfg, const UnitSystem& units,
                              const SampleFn& sample) {
    auto start = std::chrono::steady_clock::now();

    std::size_t inner_evals = 0;
    double max_inner_err = 0.0;
    double z_extent = 0.0;
    QuadratureStatus worst_inner = QuadratureStatus::converged;

    auto g = [&](const Vec3& pos, const Vec3& vel, double t) {
        DirectSample s = sample(pos, vel, t);
        inner_evals += s.evaluations;
        max_inner_err = std::max(max_inner_err, s.inner_error);
        z_extent = std::max(z_extent, s.z_extent);
        if (s.status != QuadratureStatus::converged &&
            worst_inner == QuadratureStatus::converged)
            worst_inner = s.status;
        return s.value;
    };
    IntegralResult loop = integrate_loop(g, traj, loop_cfg);

    PhaseReport rep;
    rep.method = method;
    rep.value = loop.value / units.hbar;
    // loop estimate plus the inner quadrature noise accumulated over the path
    rep.error_estimate =
        (loop.error_estimate + max_inner_err * traj.total_time()) / units.hbar;
    rep.evaluations = loop.evaluations + inner_evals;
    rep.z_extent_used = z_extent;
    rep.status = loop.status != QuadratureStatus::converged ? loop.status : worst_inner;
    rep.wall_time_seconds = elapsed_seconds(start);
    return rep;
}

} // namespace

PhaseReport phase_field_momentum_direct(const CircularTrajectory& traj,
                                        const SolenoidSpec& sol,
                                        const QuadratureConfig& loop_cfg,
                                        const QuadratureConfig& volume_cfg,
                                        const UnitSystem& units, double charge_q) {
    traj.validate(sol, units);
    auto sample = [&](const Vec3& pos, const Vec3& vel, double) {
        PointCharge ch{charge_q, pos, vel};
        VectorIntegralResult p = field_momentum(sol, ch, volume_cfg, units);
        DirectSample s;
        s.value = dot(p.value, vel);
        s.inner_error = vel.norm() * p.error_estimate.norm();
        s.evaluations = p.evaluations;
        s.z_extent = p.z_extent_used;
        s.status = p.status;
        return s;
    };
    return direct_loop_phase(PhaseMethod::field_momentum, traj, loop_cfg, units,
                             sample);
}

PhaseReport phase_interference_energy_direct(const CircularTrajectory& traj,
                                             const SolenoidSpec& sol,
                                             const QuadratureConfig& loop_cfg,
                                             const QuadratureConfig& volume_cfg,
                                             const UnitSystem& units, double charge_q) {
    traj.validate(sol, units);
    auto sample = [&](const Vec3& pos, const Vec3& vel, double) {
        PointCharge ch{charge_q, pos, vel};
        IntegralResult u = interference_energy(sol, ch, volume_cfg, units);
        DirectSample s;
        s.value = u.value;
        s.inner_error = u.error_estimate;
        s.evaluations = u.evaluations;
        s.z_extent = u.z_extent_used;
        s.status = u.status;
        return s;
    };
    return direct_loop_phase(PhaseMethod::interference_energy, traj, loop_cfg, units,
                             sample);
}

PhaseReport phase_hidden_momentum_direct(const CircularTrajectory& traj,
                                         const SolenoidSpec& sol,
                                         const QuadratureConfig& loop_cfg,
                                         const QuadratureConfig& volume_cfg,
                                         const UnitSystem& units, double charge_q) {
    traj.validate(sol, units);
    auto sample = [&](const Vec3& pos, const Vec3& vel, double) {
        PointCharge ch{charge_q, pos, vel};
        VectorIntegralResult p = hidden_momentum_total(sol, ch, volume_cfg, units);
        DirectSample s;
        s.value = dot(p.value, vel);
        s.inner_error = vel.norm() * p.error_estimate.norm();
        s.evaluations = p.evaluations;
        s.z_extent = p.z_extent_used;
        s.status = p.status;
        return s;
    };
    return direct_loop_phase(PhaseMethod::hidden_momentum, traj, loop_cfg, units,
                             sample);
}

ForceSample force_on_currents(const CircularTrajectory& traj, const SolenoidSpec& sol,
                              double t, const UnitSystem& units, double charge_q) {
    units.validate();
    sol.validate();
    traj.validate(sol, units);

    double q_eff = charge_q * units.q_unit;
    double omega = traj.angular_velocity();
    Vec3 pos = traj.position(t);

    // F_j = -(q/c) dA/dt; on the circle A = A_phi(rho0) phihat(theta) with
    // theta' = omega, so dA/dt = -A_phi * omega * rhohat and
    // F_j = +(q/c) A_phi omega rhohat.
    double theta = omega * t + traj.phase0;
    Vec3 rhohat{std::cos(theta), std::sin(theta), 0.0};
    Vec3 phihat{-std::sin(theta), std::cos(theta), 0.0};
    double a_phi = dot(vector_potential(sol, pos), phihat);

    ForceSample s;
    s.force = (q_eff / units.c * a_phi * omega * rhohat).with_tag(Quantity::force);

    if (traj.speed == 0.0) {
        // static charge: no time dependence to difference, force is zero
        s.finite_difference = s.force;
        s.fd_residual = 0.0;
    } else {
        double h = kFdStepFraction * traj.period();
        Vec3 a_plus = vector_potential(sol, traj.position(t + h));
        Vec3 a_minus = vector_potential(sol, traj.position(t - h));
        s.finite_difference =
            (q_eff / units.c / (2.0 * h) * (a_minus - a_plus)).with_tag(Quantity::force);
        s.fd_residual = (s.force - s.finite_difference).norm() /
                        std::max(s.force.norm(), 1e-300);
    }
    s.warning = s.fd_residual > kFdWarnThreshold;
    return s;
}

ForceSample hidden_force(const CircularTrajectory& traj, const SolenoidSpec& sol,
                         double t, const UnitSystem& units, double charge_q) {
    // +(q/c) dA/dt: the componentwise negation of force_on_currents, so the
    // pair sums to exactly zero.
    ForceSample s = force_on_currents(traj, sol, t, units, charge_q);
    s.force = -s.force;
    s.finite_difference = -s.finite_difference;
    return s;
}

} // namespace abphase

#ifndef ABPHASE_PHASE_HPP
#define ABPHASE_PHASE_HPP

#include <cstddef>

#include "abphase/charge.hpp"
#include "abphase/quadrature.hpp"
#include "abphase/solenoid.hpp"
#include "abphase/trajectory.hpp"
#include "abphase/units.hpp"
#include "abphase/vec3.hpp"

namespace abphase {

// The four independent routes to the signed loop phase. Sign conventions:
// right-handed axes, B along +z, counterclockwise winding positive; reported
// phases are signed, never auto-absolute-valued.
enum class PhaseMethod {
    ab_vector_potential,   // (q/(c*hbar)) closed-loop integral of A . dr
    field_momentum,        // loop integral of the interference field momentum
    interference_energy,   // time integral of the interference energy
    hidden_momentum,       // loop integral of the moment-decomposition momentum
};

const char* phase_method_name(PhaseMethod m);

struct PhaseReport {
    PhaseMethod method = PhaseMethod::ab_vector_potential;
    double value = 0.0;           // signed phase, radians
    double error_estimate = 0.0;  // radians, nonnegative
    std::size_t evaluations = 0;
    double z_extent_used = 0.0;   // 0 when no volume integral is involved
    double wall_time_seconds = 0.0;
    QuadratureStatus status = QuadratureStatus::converged;

    bool converged() const { return status == QuadratureStatus::converged; }
};

// Residual of the identity (q/c) A(r) = (1/(4 pi c)) int E_el x B_sol d^3r'.
struct MomentumIdentityResidual {
    Vec3 point{};
    Vec3 lhs{};                          // (q/c) A(r)
    Vec3 rhs{};                          // numeric volume integral
    double residual = 0.0;               // |lhs - rhs| / max(|lhs|, floor)
    double azimuthal_purity_radial = 0.0;  // |rho-hat component| / max(|rhs|, floor)
    double azimuthal_purity_axial = 0.0;   // |z component| / max(|rhs|, floor)
    VectorIntegralResult integral{};     // full quadrature diagnostics

    bool converged() const { return integral.converged(); }
};

// Force value with its finite-difference cross-check. `force` is the analytic
// chain-rule value; the central-difference check uses a step of 1e-4 of the
// orbital period.
struct ForceSample {
    Vec3 force{};
    Vec3 finite_difference{};
    double fd_residual = 0.0;  // relative to |force|
    bool warning = false;      // residual above 1e-6
};

// Phase via the vector potential: (q/(c hbar)) closed-loop integral of A . dr
// over k windings. Equals (q/(c hbar)) k Phi.
PhaseReport phase_ab(const CircularTrajectory& traj, const SolenoidSpec& sol,
                     const QuadratureConfig& cfg, const UnitSystem& units,
                     double charge_q = 1.0);

// Interference momentum of the charge's Coulomb field with the solenoid
// field: (1/(4 pi c)) int E_el(r, r') x B_sol(r') d^3r' over the solenoid
// volume. Zero vector in shielded mode.
VectorIntegralResult field_momentum(const SolenoidSpec& sol, const PointCharge& charge,
                                    const QuadratureConfig& cfg, const UnitSystem& units);

MomentumIdentityResidual verify_momentum_identity(const SolenoidSpec& sol,
                                                  const PointCharge& charge,
                                                  const QuadratureConfig& cfg,
                                                  const UnitSystem& units);

// Loop phase of the field momentum. For a circular path the momentum vector
// at radius rho is purely azimuthal with magnitude depending on rho alone, so
// the loop integral reduces to one volume integral at a representative point
// (k * 2 pi rho0 * P_phi / hbar). The general-path route without this
// reduction is phase_field_momentum_direct.
PhaseReport phase_field_momentum(const CircularTrajectory& traj, const SolenoidSpec& sol,
                                 const QuadratureConfig& cfg, const UnitSystem& units,
                                 double charge_q = 1.0);

// Interference energy int B_el . B_sol / (4 pi) d^3r' for the charge's
// instantaneous position and velocity.
IntegralResult interference_energy(const SolenoidSpec& sol, const PointCharge& charge,
                                   const QuadratureConfig& cfg, const UnitSystem& units);

// (1/hbar) time integral of the interference energy over k windings
// (dr = v dt). Uses the same azimuthal-symmetry reduction.
PhaseReport phase_interference_energy(const CircularTrajectory& traj, const SolenoidSpec& sol,
                                      const QuadratureConfig& cfg, const UnitSystem& units,
                                      double charge_q = 1.0);

// Momentum of the solenoid's magnetization in the charge's electric field:
// (1/c) int M(r') x E_el(r, r') d^3r'. Pointwise opposite to the
// field-momentum integrand, so the total is -field_momentum.
VectorIntegralResult hidden_momentum_total(const SolenoidSpec& sol, const PointCharge& charge,
                                           const QuadratureConfig& cfg,
                                           const UnitSystem& units);

PhaseReport phase_hidden_momentum(const CircularTrajectory& traj, const SolenoidSpec& sol,
                                  const QuadratureConfig& cfg, const UnitSystem& units,
                                  double charge_q = 1.0);

// General-path loop integrals with a full volume integral per path sample;
// expensive, kept as the independent cross-check of the reduced routes.
// loop_cfg controls the path quadrature, volume_cfg the inner integrals
// (loop_cfg.rel_tol should be at least ~10x volume_cfg.rel_tol).
PhaseReport phase_field_momentum_direct(const CircularTrajectory& traj,
                                        const SolenoidSpec& sol,
                                        const QuadratureConfig& loop_cfg,
                                        const QuadratureConfig& volume_cfg,
                                        const UnitSystem& units, double charge_q = 1.0);
PhaseReport phase_interference_energy_direct(const CircularTrajectory& traj,
                                             const SolenoidSpec& sol,
                                             const QuadratureConfig& loop_cfg,
                                             const QuadratureConfig& volume_cfg,
                                             const UnitSystem& units, double charge_q = 1.0);
PhaseReport phase_hidden_momentum_direct(const CircularTrajectory& traj,
                                         const SolenoidSpec& sol,
                                         const QuadratureConfig& loop_cfg,
                                         const QuadratureConfig& volume_cfg,
                                         const UnitSystem& units, double charge_q = 1.0);

// Force the electron exerts on the solenoid currents,
//   F_j = -(d/dt)(q A(r(t)) / c),
// analytic chain rule on the circular path, cross-checked by central finite
// differences.
ForceSample force_on_currents(const CircularTrajectory& traj, const SolenoidSpec& sol,
                              double t, const UnitSystem& units, double charge_q = 1.0);

// Rate of change of the hidden momentum, +(d/dt)(q A / c): the exact negation
// of force_on_currents, so the two always sum to zero on the analytic path.
ForceSample hidden_force(const CircularTrajectory& traj, const SolenoidSpec& sol, double t,
                         const UnitSystem& units, double charge_q = 1.0);

} // namespace abphase

#endif

#ifndef ABPHASE_QUADRATURE_HPP
#define ABPHASE_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "abphase/solenoid.hpp"
#include "abphase/trajectory.hpp"
#include "abphase/vec3.hpp"

namespace abphase {

struct QuadratureConfig {
    double rel_tol = 1e-6;   // relative tolerance target
    double abs_tol = 1e-12;  // absolute floor

    // initial axial truncation Z0, in units of the solenoid radius
    double z_half_extent_in_radii = 16.0;
    // cap on tail-driven Z doublings before giving up
    int max_z_doublings = 40;
    // testing hook: absolute half-extent, disables tail growth entirely
    std::optional<double> fixed_z_half_extent;

    int max_refinement_depth = 24;
    int points_per_axis = 5;         // Gauss-Legendre points per cell axis
    std::size_t max_cells = 500000;  // hard safety cap on live cells
    int workers = 1;                 // cell evaluations may run concurrently

    void validate() const;
};

enum class QuadratureStatus {
    converged,
    max_depth_reached,
    cell_budget_exhausted,
    tail_not_decaying,
    panel_limit_reached,
};

const char* quadrature_status_name(QuadratureStatus s);

// On converged() results, error_estimate <= max(rel_tol*|value|, abs_tol).
// Non-converged results still carry the best value and the honestly achieved
// error estimate.
struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    double z_extent_used = 0.0;
    QuadratureStatus status = QuadratureStatus::converged;

    bool converged() const { return status == QuadratureStatus::converged; }
};

struct VectorIntegralResult {
    Vec3 value{};
    Vec3 error_estimate{};  // componentwise, nonnegative
    std::size_t evaluations = 0;
    double z_extent_used = 0.0;
    QuadratureStatus status = QuadratureStatus::converged;

    bool converged() const { return status == QuadratureStatus::converged; }
};

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

// Bound on the discarded |z - z_center| > Z contribution of a cylinder
// integral, from the decay model S(z) <= C/|z - z_center|^3 where S is the
// absolute cross-section integral of f at height z. C is fitted from samples
// at distances Z/2 and Z on each side; each side's bound is C/(2 Z^2).
// Non-decaying samples refuse the fit (decaying = false), which forces the
// caller to grow Z instead of trusting a bound.
struct TailEstimate {
    double lower = 0.0;  // bound for the z < z_center - Z tail
    double upper = 0.0;  // bound for the z > z_center + Z tail
    bool decaying = true;
    std::size_t evaluations = 0;

    double total() const { return lower + upper; }
};

TailEstimate tail_estimate(const ScalarField& f, const SolenoidSpec& sol,
                           double z_half_extent, double z_center = 0.0);
TailEstimate tail_estimate(const VectorField& f, const SolenoidSpec& sol,
                           double z_half_extent, double z_center = 0.0);

// Integral of f over the solenoid cylinder rho' in [0,R], phi' in [0,2pi),
// z' in (-inf,inf). The z domain is truncated at a half-extent grown until
// the tail bound is below 0.1 * the relative tolerance budget; cells are then
// refined adaptively (tensor Gauss-Legendre, two-level nested error
// estimate) until the combined quadrature + tail estimate meets tolerance.
// z_center positions the truncation window (normally the charge's z).
// Results are bit-identical for any cfg.workers.
IntegralResult integrate_solenoid_volume(const ScalarField& f, const SolenoidSpec& sol,
                                         const QuadratureConfig& cfg, double z_center = 0.0);
VectorIntegralResult integrate_solenoid_volume(const VectorField& f, const SolenoidSpec& sol,
                                               const QuadratureConfig& cfg,
                                               double z_center = 0.0);

// g(position, velocity, t) integrated dt over t in [0, |k|*T], i.e. over the
// full closed path of traj; direction of travel is carried by the velocity.
// Composite Gauss-Legendre panels in the time parameter, panel count doubled
// until the panel-to-panel Richardson estimate meets tolerance.
using LoopIntegrand = std::function<double(const Vec3&, const Vec3&, double)>;

IntegralResult integrate_loop(const LoopIntegrand& g, const CircularTrajectory& traj,
                              const QuadratureConfig& cfg);

// Fixed, non-adaptive evaluations used by convergence-order studies and
// closed-form checks.
double integrate_cylinder_fixed(const ScalarField& f, const SolenoidSpec& sol,
                                double z_half_extent, int n_rho, int n_phi, int n_z,
                                int points_per_axis, double z_center = 0.0);
Vec3 integrate_cylinder_fixed(const VectorField& f, const SolenoidSpec& sol,
                              double z_half_extent, int n_rho, int n_phi, int n_z,
                              int points_per_axis, double z_center = 0.0);
double integrate_loop_fixed(const LoopIntegrand& g, const CircularTrajectory& traj,
                            int panels, int points_per_axis);

// Gauss-Legendre nodes/weights on [-1, 1]; nodes are exactly symmetric about
// zero so mirrored cells produce exactly mirrored sums.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

} // namespace abphase

#endif

#include "abphase/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace abphase {

void CircularTrajectory::validate(const SolenoidSpec& sol, const UnitSystem& units) const {
    sol.validate();
    units.validate();
    if (windings == 0)
        throw std::invalid_argument("CircularTrajectory: windings must be nonzero");
    if (!(speed >= 0.0) || !std::isfinite(speed))
        throw std::invalid_argument("CircularTrajectory: speed must be finite and >= 0");
    if (!(speed / units.c < units.beta_ceiling))
        throw std::invalid_argument("CircularTrajectory: speed/c = " +
                                    std::to_string(speed / units.c) +
                                    " exceeds the first-order ceiling " +
                                    std::to_string(units.beta_ceiling));
    if (!(rho0 >= kClearanceFactor * sol.radius))
        throw std::invalid_argument("CircularTrajectory: rho0 = " + std::to_string(rho0) +
                                    " violates the clearance rule rho0 >= 1.05*R = " +
                                    std::to_string(kClearanceFactor * sol.radius));
    if (!std::isfinite(z0) || !std::isfinite(phase0))
        throw std::invalid_argument("CircularTrajectory: z0/phase0 must be finite");
}

double CircularTrajectory::angular_velocity() const {
    const double s = windings >= 0 ? 1.0 : -1.0;
    return s * speed / rho0;
}

double CircularTrajectory::period() const {
    return 2.0 * std::numbers::pi * rho0 / speed;
}

double CircularTrajectory::total_time() const {
    return std::abs(windings) * period();
}

Vec3 CircularTrajectory::position(double t) const {
    const double theta = angular_velocity() * t + phase0;
    return {rho0 * std::cos(theta), rho0 * std::sin(theta), z0, Quantity::position};
}

Vec3 CircularTrajectory::velocity(double t) const {
    const double omega = angular_velocity();
    const double theta = omega * t + phase0;
    return {-rho0 * omega * std::sin(theta), rho0 * omega * std::cos(theta), 0.0,
            Quantity::velocity};
}

PointCharge CircularTrajectory::charge_at(double t, double q) const {
    return PointCharge{q, position(t), velocity(t)};
}

} // namespace abphase

#ifndef ABPHASE_TRAJECTORY_HPP
#define ABPHASE_TRAJECTORY_HPP

#include "abphase/charge.hpp"
#include "abphase/solenoid.hpp"
#include "abphase/units.hpp"
#include "abphase/vec3.hpp"

namespace abphase {

// minimum rho0/R; near-grazing paths are rejected rather than resolved by
// singular quadrature
inline constexpr double kClearanceFactor = 1.05;

// Circular electron loop about the solenoid axis, in the plane z = z0.
// windings > 0 is counterclockwise about +z; the sign of windings sets the
// direction of travel.
struct CircularTrajectory {
    double rho0 = 2.0;     // loop radius
    double speed = 0.01;   // |v|
    double z0 = 0.0;       // plane height
    int windings = 1;      // k != 0, sign = orientation
    double phase0 = 0.0;   // angle at t = 0

    // throws when the clearance rule (rho0 >= 1.05*R) or the speed ceiling is
    // violated
    void validate(const SolenoidSpec& sol, const UnitSystem& units) const;

    double angular_velocity() const;           // omega = sign(k)*speed/rho0
    double period() const;                     // per winding, T = 2*pi*rho0/speed
    double total_time() const;                 // |k| * T

    Vec3 position(double t) const;
    Vec3 velocity(double t) const;

    // the charge as it stands at trajectory time t
    PointCharge charge_at(double t, double q) const;
};

} // namespace abphase

#endif

#ifndef ABPHASE_CHARGE_HPP
#define ABPHASE_CHARGE_HPP

#include "abphase/solenoid.hpp"
#include "abphase/units.hpp"
#include "abphase/vec3.hpp"

namespace abphase {

// Signed point charge. q is in units of UnitSystem::q_unit; the electron of
// the reference runs uses q = +1 (a physical electron q < 0 flips every
// signed output coherently).
struct PointCharge {
    double q = 1.0;
    Vec3 position{0.0, 0.0, 0.0, Quantity::position};
    Vec3 velocity{0.0, 0.0, 0.0, Quantity::velocity};
};

// throws if |v|/c exceeds the first-order ceiling or fields are not finite
void validate_charge(const PointCharge& charge, const UnitSystem& units);

// Unretarded Coulomb field of `charge` evaluated at r':
//   E(r') = q_eff * (r' - r) / |r' - r|^3,  q_eff = q * q_unit.
// With a shielded solenoid passed as `shield`, points inside the cylinder see
// zero field (the idealized E == 0 shield model).
// Coincident r' and charge position is a domain error.
Vec3 coulomb_field(const PointCharge& charge, const Vec3& r_prime,
                   const UnitSystem& units, const SolenoidSpec* shield = nullptr);

// Magnetic field of the moving charge to first order in v/c:
//   B = (v/c) x E(r, r').
Vec3 electron_b_field(const PointCharge& charge, const Vec3& r_prime,
                      const UnitSystem& units, const SolenoidSpec* shield = nullptr);

} // namespace abphase

#endif

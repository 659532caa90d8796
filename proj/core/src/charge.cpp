#include "abphase/charge.hpp"

#include <cmath>
#include <stdexcept>

namespace abphase {

void validate_charge(const PointCharge& charge, const UnitSystem& units) {
    units.validate();
    if (!std::isfinite(charge.q))
        throw std::invalid_argument("PointCharge: q must be finite");
    if (!charge.position.finite() || !charge.velocity.finite())
        throw std::invalid_argument("PointCharge: position/velocity must be finite");
    const double beta = charge.velocity.norm() / units.c;
    if (!(beta < units.beta_ceiling))
        throw std::invalid_argument("PointCharge: |v|/c = " + std::to_string(beta) +
                                    " exceeds the first-order ceiling " +
                                    std::to_string(units.beta_ceiling));
}

Vec3 coulomb_field(const PointCharge& charge, const Vec3& r_prime,
                   const UnitSystem& units, const SolenoidSpec* shield) {
    if (shield && shield->shielded && shield->inside(r_prime))
        return {0.0, 0.0, 0.0, Quantity::efield};

    const double dx = r_prime.x - charge.position.x;
    const double dy = r_prime.y - charge.position.y;
    const double dz = r_prime.z - charge.position.z;
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (d2 == 0.0)
        throw std::domain_error("coulomb_field: field point coincides with the charge");

    const double inv_d3 = 1.0 / (d2 * std::sqrt(d2));
    const double s = charge.q * units.q_unit * inv_d3;
    return {s * dx, s * dy, s * dz, Quantity::efield};
}

Vec3 electron_b_field(const PointCharge& charge, const Vec3& r_prime,
                      const UnitSystem& units, const SolenoidSpec* shield) {
    const Vec3 e = coulomb_field(charge, r_prime, units, shield);
    return cross(charge.velocity / units.c, e).with_tag(Quantity::bfield);
}

} // namespace abphase

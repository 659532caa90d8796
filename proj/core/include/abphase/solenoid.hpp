#ifndef ABPHASE_SOLENOID_HPP
#define ABPHASE_SOLENOID_HPP

#include "abphase/units.hpp"
#include "abphase/vec3.hpp"

namespace abphase {

// Ideal infinite solenoid, axis +z through the origin. The interior field is
// uniform B*zhat; the exterior is exactly field-free. Gaussian units, with B
// as the primary input (the (n, i) form is converted via B = 4*pi*n*i/c).
struct SolenoidSpec {
    double radius = 1.0;      // R > 0
    double b_interior = 1.0;  // axial field magnitude, may be 0
    bool shielded = false;    // idealized shield: electron's E == 0 inside

    static SolenoidSpec from_field(double radius, double b, bool shielded = false);
    static SolenoidSpec from_turns_and_current(double radius, double turns_per_length,
                                               double current, const UnitSystem& units,
                                               bool shielded = false);

    void validate() const;

    // rho' < R counts as inside; the rho' == R boundary is exterior
    // (measure zero, irrelevant to any integral).
    bool inside(const Vec3& r_prime) const { return r_prime.rho() < radius; }
};

// B*zhat inside, zero outside.
Vec3 interior_b_field(const SolenoidSpec& sol, const Vec3& r_prime);

// Azimuthal vector potential of the ideal solenoid:
//   A = B*rho/2 * phihat          (rho <  R)
//   A = Phi/(2*pi*rho) * phihat   (rho >= R)
// right-handed about +z, independent of z; zero on the axis.
Vec3 vector_potential(const SolenoidSpec& sol, const Vec3& r);

// Phi = B*pi*R^2, closed form.
double enclosed_flux(const SolenoidSpec& sol);

// Magnetic moment per unit volume: B/(4*pi)*zhat inside, zero outside.
// The 4*pi is the ideal-solenoid magnetization in Gaussian units (B = 4*pi*M);
// it is what makes the moment-decomposition momentum come out equal and
// opposite to the field momentum.
Vec3 magnetization_density(const SolenoidSpec& sol, const Vec3& r_prime);

} // namespace abphase

#endif

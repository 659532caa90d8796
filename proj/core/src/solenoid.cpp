#include "abphase/solenoid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace abphase {

SolenoidSpec SolenoidSpec::from_field(double radius, double b, bool shielded) {
    SolenoidSpec s;
    s.radius = radius;
    s.b_interior = b;
    s.shielded = shielded;
    s.validate();
    return s;
}

SolenoidSpec SolenoidSpec::from_turns_and_current(double radius, double turns_per_length,
                                                  double current, const UnitSystem& units,
                                                  bool shielded) {
    units.validate();
    // Gaussian ideal solenoid: B = 4*pi*n*i/c
    return from_field(radius, 4.0 * std::numbers::pi * turns_per_length * current / units.c,
                      shielded);
}

void SolenoidSpec::validate() const {
    if (!(radius > 0.0)) throw std::invalid_argument("SolenoidSpec: radius must be > 0");
    if (!std::isfinite(b_interior))
        throw std::invalid_argument("SolenoidSpec: b_interior must be finite");
}

Vec3 interior_b_field(const SolenoidSpec& sol, const Vec3& r_prime) {
    if (sol.inside(r_prime)) return {0.0, 0.0, sol.b_interior, Quantity::bfield};
    return {0.0, 0.0, 0.0, Quantity::bfield};
}

Vec3 vector_potential(const SolenoidSpec& sol, const Vec3& r) {
    const double rho = r.rho();
    if (rho == 0.0) return {0.0, 0.0, 0.0, Quantity::potential};

    double a_phi;
    if (rho < sol.radius) {
        a_phi = 0.5 * sol.b_interior * rho;
    } else {
        a_phi = enclosed_flux(sol) / (2.0 * std::numbers::pi * rho);
    }
    // phihat = (-y, x, 0)/rho
    const double s = a_phi / rho;
    return {-s * r.y, s * r.x, 0.0, Quantity::potential};
}

double enclosed_flux(const SolenoidSpec& sol) {
    return sol.b_interior * std::numbers::pi * sol.radius * sol.radius;
}

Vec3 magnetization_density(const SolenoidSpec& sol, const Vec3& r_prime) {
    if (sol.inside(r_prime))
        return {0.0, 0.0, sol.b_interior / (4.0 * std::numbers::pi), Quantity::magnetization};
    return {0.0, 0.0, 0.0, Quantity::magnetization};
}

const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::unspecified: return "unspecified";
        case Quantity::position: return "position";
        case Quantity::velocity: return "velocity";
        case Quantity::efield: return "efield";
        case Quantity::bfield: return "bfield";
        case Quantity::potential: return "potential";
        case Quantity::momentum: return "momentum";
        case Quantity::momentum_density: return "momentum_density";
        case Quantity::magnetization: return "magnetization";
        case Quantity::force: return "force";
    }
    return "?";
}

} // namespace abphase

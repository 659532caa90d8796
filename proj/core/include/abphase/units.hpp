#ifndef ABPHASE_UNITS_HPP
#define ABPHASE_UNITS_HPP

#include <stdexcept>

namespace abphase {

// Gaussian units. The defaults are "desk units" q = c = hbar = 1, which keep
// every reference computation at O(1) scale. All phases downstream scale as
// q*Phi/(c*hbar).
struct UnitSystem {
    double q_unit = 1.0;  // charge scale
    double c = 1.0;       // speed of light
    double hbar = 1.0;    // reduced Planck constant

    // first-order-in-v/c regime: |v|/c must stay below this
    double beta_ceiling = 0.1;

    void validate() const {
        if (!(q_unit > 0.0)) throw std::invalid_argument("UnitSystem: q_unit must be > 0");
        if (!(c > 0.0)) throw std::invalid_argument("UnitSystem: c must be > 0");
        if (!(hbar > 0.0)) throw std::invalid_argument("UnitSystem: hbar must be > 0");
        if (!(beta_ceiling > 0.0 && beta_ceiling < 1.0))
            throw std::invalid_argument("UnitSystem: beta_ceiling must be in (0,1)");
    }

    static UnitSystem desk() { return UnitSystem{}; }

    // CODATA-style Gaussian presets, handy for scale checks; acceptance runs
    // use desk units only.
    static UnitSystem gaussian_cgs() {
        UnitSystem u;
        u.q_unit = 4.80320425e-10;  // statC, elementary charge
        u.c = 2.99792458e10;        // cm/s
        u.hbar = 1.054571817e-27;   // erg*s
        return u;
    }
};

} // namespace abphase

#endif

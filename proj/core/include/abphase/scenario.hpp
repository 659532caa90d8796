#ifndef ABPHASE_SCENARIO_HPP
#define ABPHASE_SCENARIO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "abphase/quadrature.hpp"
#include "abphase/solenoid.hpp"
#include "abphase/trajectory.hpp"
#include "abphase/units.hpp"
#include "abphase/vec3.hpp"

namespace abphase {

// Parse or validation failure; the message carries the offending field path
// (or the parser's byte position for malformed JSON).
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A full run description: geometry, path, tolerances, and the sample sets
// used by the consistency suite. Every field has a desk-unit default, so the
// empty JSON object {} is the reference scenario.
struct Scenario {
    std::string name = "desk";
    UnitSystem units{};
    SolenoidSpec solenoid{};
    double charge_q = 1.0;
    CircularTrajectory trajectory{};
    QuadratureConfig quadrature{};

    // charge positions for the momentum-identity check
    std::vector<Vec3> identity_points{};
    // absolute times for the force-balance check
    std::vector<double> force_times{};

    // cross-field rules (clearance, speed ceiling, tolerance sanity);
    // throws ScenarioError naming the field
    void validate() const;
};

// the embedded reference scenario (R = 1, B = 1, rho0 = 2, v = 0.01, k = 1,
// 3 identity points on the x axis, 16 force times over one period)
Scenario default_scenario();

// Set one sweepable numeric field by dotted path (trajectory.rho0,
// trajectory.speed, trajectory.z0, trajectory.windings, trajectory.phase0,
// solenoid.radius, solenoid.b_interior, charge.q, quadrature.rel_tol).
// Unknown paths, or a fractional value for windings, throw ScenarioError.
// The changed scenario is NOT revalidated here; sweeps validate per value.
void set_scenario_param(Scenario& sc, const std::string& param, double value);

bool is_sweepable_param(const std::string& param);

// JSON I/O. Serialization is canonical (sorted keys, two-space indent, all
// fields materialized), so load -> save round-trips byte-identically.
Scenario parse_scenario(const std::string& json_text, const std::string& origin);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& sc);
void save_scenario(const Scenario& sc, const std::string& path);

} // namespace abphase

#endif

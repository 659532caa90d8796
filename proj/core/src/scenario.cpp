#include "abphase/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace abphase {

namespace {

using nlohmann::json;  // ordered by key (std::map), which keeps dumps canonical

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ScenarioError(path + ": " + what);
}

// strict object walker: unknown keys are typos, not extensions
void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known) fail(path + "." + it.key(), "unknown field");
    }
}

double get_number(const json& obj, const std::string& path, const char* key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) fail(path + "." + key, "must be finite");
    return d;
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(path + "." + key, "expected true or false");
    return v.get<bool>();
}

Vec3 get_point(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) fail(path, "expected [x, y, z]");
    for (const auto& c : v)
        if (!c.is_number()) fail(path, "expected [x, y, z] of numbers");
    return Vec3{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(),
                Quantity::position};
}

UnitSystem parse_units(const json& obj, const std::string& path) {
    check_keys(obj, path, {"q_unit", "c", "hbar", "beta_ceiling"});
    UnitSystem u;
    u.q_unit = get_number(obj, path, "q_unit", u.q_unit);
    u.c = get_number(obj, path, "c", u.c);
    u.hbar = get_number(obj, path, "hbar", u.hbar);
    u.beta_ceiling = get_number(obj, path, "beta_ceiling", u.beta_ceiling);
    return u;
}

SolenoidSpec parse_solenoid(const json& obj, const std::string& path,
                            const UnitSystem& units) {
    check_keys(obj, path,
               {"radius", "b_interior", "turns_per_length", "current", "shielded"});
    bool has_b = obj.contains("b_interior");
    bool has_ni = obj.contains("turns_per_length") || obj.contains("current");
    if (has_b && has_ni)
        fail(path, "give either b_interior or turns_per_length+current, not both");

    SolenoidSpec sol;
    sol.radius = get_number(obj, path, "radius", sol.radius);
    sol.shielded = get_bool(obj, path, "shielded", sol.shielded);
    if (has_ni) {
        if (!obj.contains("turns_per_length"))
            fail(path + ".turns_per_length", "required alongside current");
        if (!obj.contains("current"))
            fail(path + ".current", "required alongside turns_per_length");
        double n = get_number(obj, path, "turns_per_length", 0.0);
        double i = get_number(obj, path, "current", 0.0);
        sol.b_interior = 4.0 * kPi * n * i / units.c;  // B = 4 pi n I / c
    } else {
        sol.b_interior = get_number(obj, path, "b_interior", sol.b_interior);
    }
    return sol;
}

CircularTrajectory parse_trajectory(const json& obj, const std::string& path) {
    check_keys(obj, path, {"rho0", "speed", "z0", "windings", "phase0"});
    CircularTrajectory t;
    t.rho0 = get_number(obj, path, "rho0", t.rho0);
    t.speed = get_number(obj, path, "speed", t.speed);
    t.z0 = get_number(obj, path, "z0", t.z0);
    t.windings = get_int(obj, path, "windings", t.windings);
    t.phase0 = get_number(obj, path, "phase0", t.phase0);
    return t;
}

QuadratureConfig parse_quadrature(const json& obj, const std::string& path) {
    check_keys(obj, path,
               {"rel_tol", "abs_tol", "z_half_extent_in_radii", "max_z_doublings",
                "fixed_z_half_extent", "max_refinement_depth", "points_per_axis",
                "max_cells", "workers"});
    QuadratureConfig q;
    q.rel_tol = get_number(obj, path, "rel_tol", q.rel_tol);
    q.abs_tol = get_number(obj, path, "abs_tol", q.abs_tol);
    q.z_half_extent_in_radii =
        get_number(obj, path, "z_half_extent_in_radii", q.z_half_extent_in_radii);
    q.max_z_doublings = get_int(obj, path, "max_z_doublings", q.max_z_doublings);
    if (obj.contains("fixed_z_half_extent") && !obj.at("fixed_z_half_extent").is_null())
        q.fixed_z_half_extent = get_number(obj, path, "fixed_z_half_extent", 0.0);
    q.max_refinement_depth =
        get_int(obj, path, "max_refinement_depth", q.max_refinement_depth);
    q.points_per_axis = get_int(obj, path, "points_per_axis", q.points_per_axis);
    q.max_cells = static_cast<std::size_t>(
        get_int(obj, path, "max_cells", static_cast<int>(q.max_cells)));
    q.workers = get_int(obj, path, "workers", q.workers);
    return q;
}

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

} // namespace

void Scenario::validate() const {
    try {
        units.validate();
    } catch (const std::exception& e) {
        fail("units", e.what());
    }
    try {
        solenoid.validate();
    } catch (const std::exception& e) {
        fail("solenoid", e.what());
    }
    if (!std::isfinite(charge_q)) fail("charge.q", "must be finite");
    try {
        quadrature.validate();
    } catch (const std::exception& e) {
        fail("quadrature", e.what());
    }
    try {
        trajectory.validate(solenoid, units);
    } catch (const std::exception& e) {
        fail("trajectory", e.what());
    }
    for (std::size_t i = 0; i < identity_points.size(); ++i) {
        const Vec3& p = identity_points[i];
        if (!p.finite())
            fail("identity_points[" + std::to_string(i) + "]", "must be finite");
        if (p.rho() < kClearanceFactor * solenoid.radius)
            fail("identity_points[" + std::to_string(i) + "]",
                 "must stay outside the solenoid (rho >= 1.05 * R)");
    }
    for (std::size_t i = 0; i < force_times.size(); ++i)
        if (!std::isfinite(force_times[i]))
            fail("force_times[" + std::to_string(i) + "]", "must be finite");
}

Scenario default_scenario() {
    Scenario sc;
    for (double m : {1.5, 2.0, 4.0})
        sc.identity_points.push_back(
            Vec3{m * sc.solenoid.radius, 0.0, sc.trajectory.z0, Quantity::position});
    double period = sc.trajectory.period();
    for (int i = 0; i < 16; ++i) sc.force_times.push_back(period * i / 16.0);
    return sc;
}

bool is_sweepable_param(const std::string& param) {
    static const char* const kParams[] = {
        "trajectory.rho0",  "trajectory.speed",    "trajectory.z0",
        "trajectory.phase0", "trajectory.windings", "solenoid.radius",
        "solenoid.b_interior", "charge.q",          "quadrature.rel_tol"};
    for (const char* p : kParams)
        if (param == p) return true;
    return false;
}

void set_scenario_param(Scenario& sc, const std::string& param, double value) {
    if (!std::isfinite(value)) throw ScenarioError(param + ": value must be finite");
    if (param == "trajectory.rho0") { sc.trajectory.rho0 = value; return; }
    if (param == "trajectory.speed") { sc.trajectory.speed = value; return; }
    if (param == "trajectory.z0") { sc.trajectory.z0 = value; return; }
    if (param == "trajectory.phase0") { sc.trajectory.phase0 = value; return; }
    if (param == "trajectory.windings") {
        double rounded = std::nearbyint(value);
        if (rounded != value)
            throw ScenarioError("trajectory.windings: value must be an integer");
        sc.trajectory.windings = static_cast<int>(rounded);
        return;
    }
    if (param == "solenoid.radius") { sc.solenoid.radius = value; return; }
    if (param == "solenoid.b_interior") { sc.solenoid.b_interior = value; return; }
    if (param == "charge.q") { sc.charge_q = value; return; }
    if (param == "quadrature.rel_tol") { sc.quadrature.rel_tol = value; return; }
    throw ScenarioError(param + ": not a sweepable parameter");
}

Scenario parse_scenario(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(origin + ": " + e.what());
    }
    if (!root.is_object()) throw ScenarioError(origin + ": top level must be an object");
    check_keys(root, origin,
               {"name", "units", "solenoid", "charge", "trajectory", "quadrature",
                "identity_points", "force_times"});

    Scenario def = default_scenario();
    Scenario sc;
    if (root.contains("name")) {
        if (!root.at("name").is_string()) fail(origin + ".name", "expected a string");
        sc.name = root.at("name").get<std::string>();
    }
    sc.units = root.contains("units") ? parse_units(root.at("units"), "units")
                                      : def.units;
    sc.solenoid = root.contains("solenoid")
                      ? parse_solenoid(root.at("solenoid"), "solenoid", sc.units)
                      : def.solenoid;
    if (root.contains("charge")) {
        const json& ch = root.at("charge");
        check_keys(ch, "charge", {"q"});
        sc.charge_q = get_number(ch, "charge", "q", def.charge_q);
    } else {
        sc.charge_q = def.charge_q;
    }
    sc.trajectory = root.contains("trajectory")
                        ? parse_trajectory(root.at("trajectory"), "trajectory")
                        : def.trajectory;
    sc.quadrature = root.contains("quadrature")
                        ? parse_quadrature(root.at("quadrature"), "quadrature")
                        : def.quadrature;

    if (root.contains("identity_points")) {
        const json& pts = root.at("identity_points");
        if (!pts.is_array()) fail("identity_points", "expected an array of points");
        for (std::size_t i = 0; i < pts.size(); ++i)
            sc.identity_points.push_back(
                get_point(pts[i], "identity_points[" + std::to_string(i) + "]"));
    } else {
        // defaults scale with the geometry: the reference multiples of R on
        // the charge's orbit plane
        for (double m : {1.5, 2.0, 4.0})
            sc.identity_points.push_back(Vec3{m * sc.solenoid.radius, 0.0,
                                              sc.trajectory.z0, Quantity::position});
    }
    if (root.contains("force_times")) {
        const json& ts = root.at("force_times");
        if (!ts.is_array()) fail("force_times", "expected an array of times");
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (!ts[i].is_number())
                fail("force_times[" + std::to_string(i) + "]", "expected a number");
            sc.force_times.push_back(ts[i].get<double>());
        }
    } else if (sc.trajectory.speed > 0.0) {
        double period = sc.trajectory.period();
        for (int i = 0; i < 16; ++i) sc.force_times.push_back(period * i / 16.0);
    }

    sc.validate();
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path + ": cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

std::string scenario_to_json(const Scenario& sc) {
    json root;
    root["name"] = sc.name;
    root["units"] = {{"q_unit", sc.units.q_unit},
                     {"c", sc.units.c},
                     {"hbar", sc.units.hbar},
                     {"beta_ceiling", sc.units.beta_ceiling}};
    root["solenoid"] = {{"radius", sc.solenoid.radius},
                        {"b_interior", sc.solenoid.b_interior},
                        {"shielded", sc.solenoid.shielded}};
    root["charge"] = {{"q", sc.charge_q}};
    root["trajectory"] = {{"rho0", sc.trajectory.rho0},
                          {"speed", sc.trajectory.speed},
                          {"z0", sc.trajectory.z0},
                          {"windings", sc.trajectory.windings},
                          {"phase0", sc.trajectory.phase0}};
    json quad = {{"rel_tol", sc.quadrature.rel_tol},
                 {"abs_tol", sc.quadrature.abs_tol},
                 {"z_half_extent_in_radii", sc.quadrature.z_half_extent_in_radii},
                 {"max_z_doublings", sc.quadrature.max_z_doublings},
                 {"max_refinement_depth", sc.quadrature.max_refinement_depth},
                 {"points_per_axis", sc.quadrature.points_per_axis},
                 {"max_cells", static_cast<std::int64_t>(sc.quadrature.max_cells)},
                 {"workers", sc.quadrature.workers}};
    if (sc.quadrature.fixed_z_half_extent)
        quad["fixed_z_half_extent"] = *sc.quadrature.fixed_z_half_extent;
    else
        quad["fixed_z_half_extent"] = nullptr;
    root["quadrature"] = quad;
    json pts = json::array();
    for (const Vec3& p : sc.identity_points) pts.push_back(vec_to_json(p));
    root["identity_points"] = pts;
    root["force_times"] = sc.force_times;
    return root.dump(2) + "\n";
}

void save_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError(path + ": cannot open for writing");
    out << scenario_to_json(sc);
    if (!out) throw ScenarioError(path + ": write failed");
}

} // namespace abphase

#include "abphase/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

namespace abphase {

namespace {

constexpr double kPi = std::numbers::pi;

// cells refined per round; fixed so the refinement path does not depend on
// the worker count
constexpr std::size_t kRefineBatch = 16;

// --- deterministic parallel map ------------------------------------------
// fn(i) writes only to slot i of pre-sized output storage, so any chunking
// yields the same stores; the reduction that follows is always serial and in
// index order.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    const std::size_t w = std::min<std::size_t>(std::max(workers, 1), n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(w);
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        const std::size_t lo = n * t / w;
        const std::size_t hi = n * (t + 1) / w;
        threads.emplace_back([&, lo, hi, t] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// --- scalar / vector glue --------------------------------------------------

inline double vzero(const double*) { return 0.0; }
inline Vec3 vzero(const Vec3*) { return Vec3{}; }

inline void vacc(double& acc, double w, double v) { acc += w * v; }
inline void vacc(Vec3& acc, double w, const Vec3& v) { acc += w * v; }

inline double vabs_diff(double a, double b) { return std::abs(a - b); }
inline Vec3 vabs_diff(const Vec3& a, const Vec3& b) {
    return {std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)};
}

inline double vmax_comp(double e) { return e; }
inline double vmax_comp(const Vec3& e) { return std::max({e.x, e.y, e.z}); }

inline double vnorm(double v) { return std::abs(v); }
inline double vnorm(const Vec3& v) { return v.norm(); }

inline void vadd_err(double& acc, double e) { acc += e; }
inline void vadd_err(Vec3& acc, const Vec3& e) {
    acc.x += e.x;
    acc.y += e.y;
    acc.z += e.z;
}

inline double vwith_tail(double e, double tail) { return e + tail; }
inline Vec3 vwith_tail(const Vec3& e, double tail) {
    return {e.x + tail, e.y + tail, e.z + tail};
}

inline double vmagnitude_field(const ScalarField& f, const Vec3& p) { return std::abs(f(p)); }

// --- cells -----------------------------------------------------------------

struct Bounds {
    double rho0, rho1;
    double phi0, phi1;  // phi in [-pi, pi]
    double z0, z1;
};

template <class T>
struct Cell {
    Bounds b;
    int depth = 0;
    T value{};     // two-level (fine) estimate
    T err{};       // |fine - coarse| componentwise
    double priority = 0.0;
    bool alive = true;
};

template <class T, class F>
T tensor_rule(const F& f, const Bounds& b, int p, std::size_t& evals) {
    const GaussLegendreRule& gl = gauss_legendre(p);
    const double rm = 0.5 * (b.rho0 + b.rho1), rh = 0.5 * (b.rho1 - b.rho0);
    const double pm = 0.5 * (b.phi0 + b.phi1), ph = 0.5 * (b.phi1 - b.phi0);
    const double zm = 0.5 * (b.z0 + b.z1), zh = 0.5 * (b.z1 - b.z0);

    T sum = vzero(static_cast<T*>(nullptr));
    for (int i = 0; i < p; ++i) {
        const double rho = rm + rh * gl.nodes[i];
        const double wr = rh * gl.weights[i] * rho;  // cylindrical Jacobian
        for (int j = 0; j < p; ++j) {
            const double phi = pm + ph * gl.nodes[j];
            const double wrp = wr * ph * gl.weights[j];
            const double c = std::cos(phi), s = std::sin(phi);
            for (int k = 0; k < p; ++k) {
                const double z = zm + zh * gl.nodes[k];
                const double w = wrp * zh * gl.weights[k];
                vacc(sum, w, f(Vec3{rho * c, rho * s, z, Quantity::position}));
            }
        }
    }
    evals += static_cast<std::size_t>(p) * p * p;
    return sum;
}

// coarse = one tensor rule on the cell, fine = the same rule composited over
// the 2x2x2 octants; the difference is the (conservative) error estimate for
// the fine value we keep.
template <class T, class F>
void evaluate_cell(Cell<T>& cell, const F& f, int p, std::size_t& evals) {
    const Bounds& b = cell.b;
    const T coarse = tensor_rule<T>(f, b, p, evals);

    const double rm = 0.5 * (b.rho0 + b.rho1);
    const double pm = 0.5 * (b.phi0 + b.phi1);
    const double zm = 0.5 * (b.z0 + b.z1);

    T fine = vzero(static_cast<T*>(nullptr));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                Bounds sub{i == 0 ? b.rho0 : rm, i == 0 ? rm : b.rho1,
                           j == 0 ? b.phi0 : pm, j == 0 ? pm : b.phi1,
                           k == 0 ? b.z0 : zm,   k == 0 ? zm : b.z1};
                vacc(fine, 1.0, tensor_rule<T>(f, sub, p, evals));
            }

    cell.value = fine;
    cell.err = vabs_diff(fine, coarse);
    cell.priority = vmax_comp(cell.err);
}

// split along the longest physical extent (arc length for phi)
template <class T>
std::pair<Cell<T>, Cell<T>> split_cell(const Cell<T>& c) {
    const Bounds& b = c.b;
    const double len_r = b.rho1 - b.rho0;
    const double len_p = 0.5 * (b.rho0 + b.rho1) * (b.phi1 - b.phi0);
    const double len_z = b.z1 - b.z0;

    Cell<T> a, d;
    a.depth = d.depth = c.depth + 1;
    a.b = d.b = b;
    if (len_z >= len_p && len_z >= len_r) {
        const double m = 0.5 * (b.z0 + b.z1);
        a.b.z1 = m;
        d.b.z0 = m;
    } else if (len_p >= len_r) {
        const double m = 0.5 * (b.phi0 + b.phi1);
        a.b.phi1 = m;
        d.b.phi0 = m;
    } else {
        const double m = 0.5 * (b.rho0 + b.rho1);
        a.b.rho1 = m;
        d.b.rho0 = m;
    }
    return {a, d};
}

// geometric z cuts on one side of the window center: fine near the center
// (where the integrand peaks), doubling outward
std::vector<double> geometric_z_cuts(double z_half_extent, double radius) {
    std::vector<double> cuts{0.0};
    double cur = 0.5 * radius;
    while (cur < z_half_extent * (1.0 - 1e-12)) {
        cuts.push_back(cur);
        cur *= 2.0;
    }
    cuts.push_back(z_half_extent);
    return cuts;
}

template <class T, class F>
std::vector<Cell<T>> initial_mesh(const F&, const SolenoidSpec& sol, double z_half_extent,
                                  double z_center) {
    const double R = sol.radius;
    const std::vector<double> rho_cuts{0.0, 0.5 * R, R};
    const std::vector<double> phi_cuts{-kPi, -0.5 * kPi, 0.0, 0.5 * kPi, kPi};
    const std::vector<double> side = geometric_z_cuts(z_half_extent, R);

    std::vector<double> z_cuts;
    for (auto it = side.rbegin(); it != side.rend(); ++it) z_cuts.push_back(z_center - *it);
    for (std::size_t i = 1; i < side.size(); ++i) z_cuts.push_back(z_center + side[i]);

    std::vector<Cell<T>> cells;
    for (std::size_t i = 0; i + 1 < rho_cuts.size(); ++i)
        for (std::size_t j = 0; j + 1 < phi_cuts.size(); ++j)
            for (std::size_t k = 0; k + 1 < z_cuts.size(); ++k) {
                Cell<T> c;
                c.b = Bounds{rho_cuts[i], rho_cuts[i + 1], phi_cuts[j], phi_cuts[j + 1],
                             z_cuts[k], z_cuts[k + 1]};
                cells.push_back(c);
            }
    return cells;
}

// two fresh slabs appended when the truncation window doubles
template <class T>
std::vector<Cell<T>> growth_slabs(const SolenoidSpec& sol, double z_old, double z_new,
                                  double z_center) {
    std::vector<Cell<T>> cells;
    for (int side = 0; side < 2; ++side) {
        const double lo = side == 0 ? z_center - z_new : z_center + z_old;
        const double hi = side == 0 ? z_center - z_old : z_center + z_new;
        for (int j = 0; j < 2; ++j) {
            Cell<T> c;
            c.b = Bounds{0.0, sol.radius, j == 0 ? -kPi : 0.0, j == 0 ? 0.0 : kPi, lo, hi};
            cells.push_back(c);
        }
    }
    return cells;
}

template <class T, class F>
void evaluate_batch(std::vector<Cell<T>>& cells, std::size_t first, const F& f, int p,
                    int workers, std::size_t& evals) {
    const std::size_t n = cells.size() - first;
    std::vector<std::size_t> counts(n, 0);
    parallel_for(n, workers, [&](std::size_t i) {
        evaluate_cell(cells[first + i], f, p, counts[i]);
    });
    for (std::size_t i = 0; i < n; ++i) evals += counts[i];
}

template <class T>
struct AdaptiveResult {
    T value{};
    T error_estimate{};
    std::size_t evaluations = 0;
    double z_extent_used = 0.0;
    QuadratureStatus status = QuadratureStatus::converged;
};

template <class T, class F>
AdaptiveResult<T> integrate_cylinder_adaptive(const F& f, const SolenoidSpec& sol,
                                              const QuadratureConfig& cfg, double z_center) {
    cfg.validate();
    sol.validate();

    const bool grow = !cfg.fixed_z_half_extent.has_value();
    double z_extent = grow ? cfg.z_half_extent_in_radii * sol.radius
                           : *cfg.fixed_z_half_extent;

    std::vector<Cell<T>> cells = initial_mesh<T>(f, sol, z_extent, z_center);
    std::size_t evals = 0;
    evaluate_batch(cells, 0, f, cfg.points_per_axis, cfg.workers, evals);

    TailEstimate tail;  // zero in fixed-extent mode
    bool tail_fresh = false;
    int doublings = 0;
    QuadratureStatus status = QuadratureStatus::converged;

    T total = vzero(static_cast<T*>(nullptr));
    T err_sum = vzero(static_cast<T*>(nullptr));

    for (;;) {
        // fixed summation order: cells in creation order
        total = vzero(static_cast<T*>(nullptr));
        err_sum = vzero(static_cast<T*>(nullptr));
        for (const auto& c : cells) {
            if (!c.alive) continue;
            vacc(total, 1.0, c.value);
            vadd_err(err_sum, c.err);
        }

        const double target = std::max(cfg.rel_tol * vnorm(total), cfg.abs_tol);

        if (grow) {
            if (!tail_fresh) {
                tail = tail_estimate(f, sol, z_extent, z_center);
                evals += tail.evaluations;
                tail_fresh = true;
            }
            if (!tail.decaying || tail.total() > 0.1 * target) {
                if (doublings >= cfg.max_z_doublings) {
                    status = QuadratureStatus::tail_not_decaying;
                    break;
                }
                const std::size_t first = cells.size();
                auto slabs = growth_slabs<T>(sol, z_extent, 2.0 * z_extent, z_center);
                cells.insert(cells.end(), slabs.begin(), slabs.end());
                evaluate_batch(cells, first, f, cfg.points_per_axis, cfg.workers, evals);
                z_extent *= 2.0;
                ++doublings;
                tail_fresh = false;
                continue;
            }
        }

        if (vnorm(vwith_tail(err_sum, tail.total())) <= target) break;

        if (cells.size() >= cfg.max_cells) {
            status = QuadratureStatus::cell_budget_exhausted;
            break;
        }

        // worst cells first, index as the deterministic tie-break
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (cells[i].alive && cells[i].priority > 0.0 &&
                cells[i].depth < cfg.max_refinement_depth)
                candidates.push_back(i);
        if (candidates.empty()) {
            status = QuadratureStatus::max_depth_reached;
            break;
        }
        std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
            if (cells[a].priority != cells[b].priority)
                return cells[a].priority > cells[b].priority;
            return a < b;
        });
        if (candidates.size() > kRefineBatch) candidates.resize(kRefineBatch);

        const std::size_t first = cells.size();
        for (std::size_t idx : candidates) {
            auto [a, b] = split_cell(cells[idx]);
            cells[idx].alive = false;
            cells.push_back(a);
            cells.push_back(b);
        }
        evaluate_batch(cells, first, f, cfg.points_per_axis, cfg.workers, evals);
    }

    AdaptiveResult<T> res;
    res.value = total;
    res.error_estimate = vwith_tail(err_sum, tail.total());
    res.evaluations = evals;
    res.z_extent_used = z_extent;
    res.status = status;
    return res;
}

// --- tail estimate ---------------------------------------------------------

// absolute cross-section integral S(z) = int |f| rho drho dphi at fixed z
template <class F>
double cross_section_abs(const F& f, const SolenoidSpec& sol, double z, std::size_t& evals) {
    const GaussLegendreRule& gr = gauss_legendre(8);
    const GaussLegendreRule& gp = gauss_legendre(16);
    const double rh = 0.5 * sol.radius;
    double sum = 0.0;
    for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
        const double rho = rh + rh * gr.nodes[i];
        const double wr = rh * gr.weights[i] * rho;
        for (std::size_t j = 0; j < gp.nodes.size(); ++j) {
            const double phi = kPi * gp.nodes[j];
            const double w = wr * kPi * gp.weights[j];
            sum += w * vnorm(f(Vec3{rho * std::cos(phi), rho * std::sin(phi), z,
                                    Quantity::position}));
        }
    }
    evals += gr.nodes.size() * gp.nodes.size();
    return sum;
}

template <class F>
TailEstimate tail_estimate_impl(const F& f, const SolenoidSpec& sol, double z_half_extent,
                                double z_center) {
    if (!(z_half_extent > 0.0))
        throw std::invalid_argument("tail_estimate: z_half_extent must be > 0");
    sol.validate();

    TailEstimate t;
    for (int side = 0; side < 2; ++side) {
        const double sgn = side == 0 ? -1.0 : 1.0;
        const double s_half = cross_section_abs(f, sol, z_center + sgn * 0.5 * z_half_extent,
                                                t.evaluations);
        const double s_full = cross_section_abs(f, sol, z_center + sgn * z_half_extent,
                                                t.evaluations);
        double bound = 0.0;
        if (s_half == 0.0 && s_full == 0.0) {
            bound = 0.0;
        } else if (s_full >= s_half) {
            // no decay between the two probes: the discarded tail is unbounded
            // as far as we can tell
            t.decaying = false;
            bound = std::numeric_limits<double>::infinity();
        } else {
            // fit S(z) <= C / |z - z_center|^3 from both samples, keep the
            // larger C; the discarded tail per side is int_Z^inf C/z^3 dz
            const double c_fit = std::max(s_half * 0.125 * z_half_extent * z_half_extent *
                                              z_half_extent,
                                          s_full * z_half_extent * z_half_extent *
                                              z_half_extent);
            bound = c_fit / (2.0 * z_half_extent * z_half_extent);
        }
        (side == 0 ? t.lower : t.upper) = bound;
    }
    return t;
}

} // namespace

// --- public API -------------------------------------------------------------

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureConfig: rel_tol must be > 0");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureConfig: abs_tol must be > 0");
    if (!(z_half_extent_in_radii > 0.0))
        throw std::invalid_argument("QuadratureConfig: z_half_extent_in_radii must be > 0");
    if (fixed_z_half_extent && !(*fixed_z_half_extent > 0.0))
        throw std::invalid_argument("QuadratureConfig: fixed_z_half_extent must be > 0");
    if (max_refinement_depth < 1)
        throw std::invalid_argument("QuadratureConfig: max_refinement_depth must be >= 1");
    if (points_per_axis < 2 || points_per_axis > 32)
        throw std::invalid_argument("QuadratureConfig: points_per_axis must be in [2, 32]");
    if (workers < 1) throw std::invalid_argument("QuadratureConfig: workers must be >= 1");
    if (max_z_doublings < 0)
        throw std::invalid_argument("QuadratureConfig: max_z_doublings must be >= 0");
    if (max_cells < 16) throw std::invalid_argument("QuadratureConfig: max_cells too small");
}

const char* quadrature_status_name(QuadratureStatus s) {
    switch (s) {
        case QuadratureStatus::converged: return "converged";
        case QuadratureStatus::max_depth_reached: return "max_depth_reached";
        case QuadratureStatus::cell_budget_exhausted: return "cell_budget_exhausted";
        case QuadratureStatus::tail_not_decaying: return "tail_not_decaying";
        case QuadratureStatus::panel_limit_reached: return "panel_limit_reached";
    }
    return "?";
}

TailEstimate tail_estimate(const ScalarField& f, const SolenoidSpec& sol, double z_half_extent,
                           double z_center) {
    return tail_estimate_impl(f, sol, z_half_extent, z_center);
}

TailEstimate tail_estimate(const VectorField& f, const SolenoidSpec& sol, double z_half_extent,
                           double z_center) {
    return tail_estimate_impl(f, sol, z_half_extent, z_center);
}

IntegralResult integrate_solenoid_volume(const ScalarField& f, const SolenoidSpec& sol,
                                         const QuadratureConfig& cfg, double z_center) {
    const auto r = integrate_cylinder_adaptive<double>(f, sol, cfg, z_center);
    return IntegralResult{r.value, r.error_estimate, r.evaluations, r.z_extent_used, r.status};
}

VectorIntegralResult integrate_solenoid_volume(const VectorField& f, const SolenoidSpec& sol,
                                               const QuadratureConfig& cfg, double z_center) {
    const auto r = integrate_cylinder_adaptive<Vec3>(f, sol, cfg, z_center);
    return VectorIntegralResult{r.value, r.error_estimate, r.evaluations, r.z_extent_used,
                                r.status};
}

IntegralResult integrate_loop(const LoopIntegrand& g, const CircularTrajectory& traj,
                              const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(traj.speed > 0.0))
        throw std::invalid_argument("integrate_loop: trajectory speed must be > 0");
    if (traj.windings == 0)
        throw std::invalid_argument("integrate_loop: windings must be nonzero");

    constexpr int kMaxPanels = 1 << 20;
    std::size_t evals = 0;
    int panels = 4;
    double prev = integrate_loop_fixed(g, traj, panels, cfg.points_per_axis);
    evals += static_cast<std::size_t>(panels) * cfg.points_per_axis;

    while (panels < kMaxPanels) {
        panels *= 2;
        const double cur = integrate_loop_fixed(g, traj, panels, cfg.points_per_axis);
        evals += static_cast<std::size_t>(panels) * cfg.points_per_axis;
        const double err = std::abs(cur - prev);
        if (err <= std::max(cfg.rel_tol * std::abs(cur), cfg.abs_tol))
            return IntegralResult{cur, err, evals, 0.0, QuadratureStatus::converged};
        prev = cur;
    }
    return IntegralResult{prev, std::abs(prev), evals, 0.0,
                          QuadratureStatus::panel_limit_reached};
}

double integrate_cylinder_fixed(const ScalarField& f, const SolenoidSpec& sol,
                                double z_half_extent, int n_rho, int n_phi, int n_z,
                                int points_per_axis, double z_center) {
    sol.validate();
    std::size_t evals = 0;
    double sum = 0.0;
    for (int i = 0; i < n_rho; ++i)
        for (int j = 0; j < n_phi; ++j)
            for (int k = 0; k < n_z; ++k) {
                Bounds b{sol.radius * i / n_rho, sol.radius * (i + 1) / n_rho,
                         -kPi + 2.0 * kPi * j / n_phi, -kPi + 2.0 * kPi * (j + 1) / n_phi,
                         z_center - z_half_extent + 2.0 * z_half_extent * k / n_z,
                         z_center - z_half_extent + 2.0 * z_half_extent * (k + 1) / n_z};
                sum += tensor_rule<double>(f, b, points_per_axis, evals);
            }
    return sum;
}

Vec3 integrate_cylinder_fixed(const VectorField& f, const SolenoidSpec& sol,
                              double z_half_extent, int n_rho, int n_phi, int n_z,
                              int points_per_axis, double z_center) {
    sol.validate();
    std::size_t evals = 0;
    Vec3 sum{};
    for (int i = 0; i < n_rho; ++i)
        for (int j = 0; j < n_phi; ++j)
            for (int k = 0; k < n_z; ++k) {
                Bounds b{sol.radius * i / n_rho, sol.radius * (i + 1) / n_rho,
                         -kPi + 2.0 * kPi * j / n_phi, -kPi + 2.0 * kPi * (j + 1) / n_phi,
                         z_center - z_half_extent + 2.0 * z_half_extent * k / n_z,
                         z_center - z_half_extent + 2.0 * z_half_extent * (k + 1) / n_z};
                sum += tensor_rule<Vec3>(f, b, points_per_axis, evals);
            }
    return sum;
}

double integrate_loop_fixed(const LoopIntegrand& g, const CircularTrajectory& traj,
                            int panels, int points_per_axis) {
    if (panels < 1) throw std::invalid_argument("integrate_loop_fixed: panels must be >= 1");
    const GaussLegendreRule& gl = gauss_legendre(points_per_axis);
    const double t_total = traj.total_time();
    const double h = t_total / panels;
    double sum = 0.0;
    for (int m = 0; m < panels; ++m) {
        const double mid = (m + 0.5) * h;
        double panel = 0.0;
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
            const double t = mid + 0.5 * h * gl.nodes[j];
            panel += gl.weights[j] * g(traj.position(t), traj.velocity(t), t);
        }
        sum += 0.5 * h * panel;
    }
    return sum;
}

// --- Gauss-Legendre nodes ----------------------------------------------------

namespace {

GaussLegendreRule compute_gauss_legendre(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton from the Chebyshev-like initial guess
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // exact mirror symmetry
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

} // namespace

const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1 || n > 32) throw std::invalid_argument("gauss_legendre: order must be in [1, 32]");
    static std::once_flag flag;
    static std::vector<GaussLegendreRule> cache;
    std::call_once(flag, [] {
        cache.resize(33);
        for (int k = 1; k <= 32; ++k) cache[k] = compute_gauss_legendre(k);
    });
    return cache[n];
}

} // namespace abphase

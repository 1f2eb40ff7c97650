#pragma once

// Algebraic vs geometric Thomas-Wigner rotations: single comparisons and
// parallel validation campaigns.

#include "twr/lorentz.hpp"
#include "twr/transport.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace twr {

enum class ScenarioKind { triangle, precession };

inline const char* to_string(ScenarioKind k)
{
    return k == ScenarioKind::triangle ? "triangle" : "precession";
}

/// Deviations below this are attributed to rounding when judging whether a
/// disagreement is explained by the discretization estimate.
inline constexpr double kNoiseFloor = 1e-10;

/// Safety factor between the step-doubling estimate and an accepted deviation.
inline constexpr double kEstimateSafety = 10.0;

/// Below this angle the rotation axis is not meaningful.
inline constexpr double kAxisUndefinedAngle = 1e-9;

/// Default tolerance for 10^4-step campaigns.
inline constexpr double kDefaultCampaignTol = 1e-5;

struct ComparisonReport {
    std::string scenario_id;
    ScenarioKind kind = ScenarioKind::triangle;
    Vec3 v1 = Vec3::Zero();  // triangle only
    Vec3 v2 = Vec3::Zero();  // triangle only
    double speed = 0.0;      // precession only
    double mass = 1.0;
    int steps = 0;
    AngleAxis algebraic;
    AngleAxis geometric;
    double angle_difference = 0.0;
    double axis_deviation = 0.0;
    double discretization_estimate = 0.0;
    double tolerance = kDefaultCampaignTol;
    double noise_floor = kNoiseFloor;
    bool pass = false;

    /// The pass rule, from the report's own fields.
    bool recompute_pass() const
    {
        const double worst = std::max(angle_difference, axis_deviation);
        return angle_difference <= tolerance && axis_deviation <= tolerance
               && worst <= kEstimateSafety * discretization_estimate + noise_floor;
    }
};

/// Angle between rotation axes; axis and -axis are identified near angle pi.
inline double axis_deviation(const AngleAxis& a, const AngleAxis& b)
{
    if (a.angle < kAxisUndefinedAngle && b.angle < kAxisUndefinedAngle) {
        return 0.0;
    }
    auto between = [](const Vec3& x, const Vec3& y) { return std::atan2(x.cross(y).norm(), x.dot(y)); };
    double dev = between(a.axis, b.axis);
    if (a.angle > kPi - 1e-6 && b.angle > kPi - 1e-6) {
        dev = std::min(dev, between(a.axis, -b.axis));
    }
    return dev;
}

namespace detail {

inline void require_tolerance(double tol)
{
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw DomainError("tolerance must be positive");
    }
}

inline void finish(ComparisonReport& r, double estimate)
{
    r.angle_difference = std::abs(r.algebraic.angle - r.geometric.angle);
    r.axis_deviation = axis_deviation(r.algebraic, r.geometric);
    r.discretization_estimate = estimate;
    r.pass = r.recompute_pass();
}

} // namespace detail

/// twr_of_two_boosts against the holonomy of the boost triangle.
inline ComparisonReport compare_triangle(const Velocity3& v1, const Velocity3& v2, double m, int steps, double tol,
                                         std::string scenario_id = "triangle")
{
    detail::require_tolerance(tol);
    ComparisonReport r;
    r.scenario_id = std::move(scenario_id);
    r.kind = ScenarioKind::triangle;
    r.v1 = v1.vec();
    r.v2 = v2.vec();
    r.mass = m;
    r.steps = steps;
    r.tolerance = tol;
    r.algebraic = rotation_to_angle_axis(twr_of_two_boosts(v1, v2));
    const TriangleHolonomy geo = triangle_holonomy(v1, v2, m, steps);
    r.geometric = geo.holonomy.angle_axis;
    detail::finish(r, geo.holonomy.convergence);
    return r;
}

/// Path-ordered holonomy of the circle of speed V against the curvature-integral
/// closed form and against 2 pi (gamma - 1) about e_2.
inline ComparisonReport compare_precession(double v, double m, int steps, double tol,
                                           std::string scenario_id = "precession")
{
    detail::require_tolerance(tol);
    if (steps < 1) {
        throw DomainError("steps must be positive");
    }
    ComparisonReport r;
    r.scenario_id = std::move(scenario_id);
    r.kind = ScenarioKind::precession;
    r.speed = v;
    r.mass = m;
    r.steps = steps;
    r.tolerance = tol;
    const double rho0 = rho_of_speed(v, m);
    const HolonomyResult disk = holonomy_disk_circle(rho0, m);
    const AngleAxis formula = rotation_to_angle_axis(rodrigues({thomas_precession_angle(v), Vec3::UnitY()}));
    r.algebraic = disk.angle_axis;
    const HolonomyResult geo = holonomy_path_ordered(circle_loop(rho0, m, steps));
    r.geometric = geo.angle_axis;
    detail::finish(r, geo.convergence);
    // The two closed forms must agree with each other to rounding.
    const double formula_gap = std::max(std::abs(formula.angle - disk.angle_axis.angle), axis_deviation(formula, disk.angle_axis));
    if (formula_gap > 1e-12) {
        throw ConsistencyError("disk integral and 2 pi (gamma - 1) disagree by " + format_double(formula_gap));
    }
    return r;
}

//---------------------------------------------------------------------------//
// Campaigns
//---------------------------------------------------------------------------//

struct CampaignSpec {
    /// Perpendicular triangles v1 = s1 x, v2 = s2 y for all pairs, and one
    /// precession circle per speed.
    std::vector<double> speeds;
    double mass = 1.0;
    int steps = 10000;
    double tolerance = kDefaultCampaignTol;
    /// Additional triangles with random directions and speeds in [0.05, 0.95).
    int random_pairs = 0;
    std::uint64_t seed = 1;
    /// 0 uses the hardware concurrency.
    unsigned threads = 0;
};

struct CampaignSummary {
    std::size_t count = 0;
    std::size_t passed = 0;
    double max_angle_difference = 0.0;
    double mean_angle_difference = 0.0;
    double max_axis_deviation = 0.0;
    bool all_pass() const { return passed == count; }
};

namespace detail {

struct Scenario {
    std::string id;
    ScenarioKind kind;
    Vec3 v1 = Vec3::Zero();
    Vec3 v2 = Vec3::Zero();
    double speed = 0.0;
};

inline std::string scenario_id(const char* prefix, std::size_t index)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s-%04zu", prefix, index);
    return buf;
}

inline Vec3 random_velocity(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> speed(0.05, 0.95);
    Vec3 dir;
    do {
        dir = Vec3(unit(rng), unit(rng), unit(rng));
    } while (dir.norm() < 1e-3 || dir.norm() > 1.0);
    return speed(rng) * dir.normalized();
}

} // namespace detail

inline std::vector<ComparisonReport> run_campaign(const CampaignSpec& spec)
{
    if (spec.speeds.empty() && spec.random_pairs <= 0) {
        throw DomainError("campaign grid is empty");
    }
    detail::require_tolerance(spec.tolerance);
    detail::require_mass(spec.mass);
    if (spec.steps < 1) {
        throw DomainError("steps must be positive");
    }
    for (double s : spec.speeds) {
        gamma_of_speed(s);
    }

    std::vector<detail::Scenario> scenarios;
    std::size_t n_tri = 0;
    for (double s1 : spec.speeds) {
        for (double s2 : spec.speeds) {
            scenarios.push_back({detail::scenario_id("triangle", n_tri++), ScenarioKind::triangle, Vec3(s1, 0, 0), Vec3(0, s2, 0)});
        }
    }
    std::size_t n_prec = 0;
    for (double s : spec.speeds) {
        detail::Scenario sc{detail::scenario_id("precession", n_prec++), ScenarioKind::precession};
        sc.speed = s;
        scenarios.push_back(sc);
    }
    std::mt19937_64 rng(spec.seed);
    for (int k = 0; k < spec.random_pairs; ++k) {
        const Vec3 a = detail::random_velocity(rng);
        const Vec3 b = detail::random_velocity(rng);
        scenarios.push_back({detail::scenario_id("random", static_cast<std::size_t>(k)), ScenarioKind::triangle, a, b});
    }

    std::vector<ComparisonReport> reports(scenarios.size());
    std::vector<std::exception_ptr> errors(scenarios.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) {
            const auto& sc = scenarios[i];
            try {
                reports[i] = sc.kind == ScenarioKind::triangle
                             ? compare_triangle(Velocity3(sc.v1), Velocity3(sc.v2), spec.mass, spec.steps, spec.tolerance, sc.id)
                                 : compare_precession(sc.speed, spec.mass, spec.steps, spec.tolerance, sc.id);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned n_threads = spec.threads != 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(scenarios.size()));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::sort(reports.begin(), reports.end(),
              [](const ComparisonReport& a, const ComparisonReport& b) { return a.scenario_id < b.scenario_id; });
    return reports;
}

inline CampaignSummary summarize(const std::vector<ComparisonReport>& reports)
{
    CampaignSummary s;
    s.count = reports.size();
    double total = 0.0;
    for (const auto& r : reports) {
        s.passed += r.pass ? 1 : 0;
        s.max_angle_difference = std::max(s.max_angle_difference, r.angle_difference);
        s.max_axis_deviation = std::max(s.max_axis_deviation, r.axis_deviation);
        total += r.angle_difference;
    }
    s.mean_angle_difference = reports.empty() ? 0.0 : total / static_cast<double>(reports.size());
    return s;
}

} // namespace twr

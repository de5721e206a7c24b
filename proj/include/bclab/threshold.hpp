#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bclab/sim.hpp"

namespace bcl {

/// Shape of the default initial data: a clamped stream-function envelope
/// (1-y^2)^2 and a Dirichlet temperature envelope (1-y^2) on a band of
/// x-modes, with seeded random phases per mode.
struct InitialDataSpec {
    std::vector<double> band = {0.5, 1.0, 1.5, 2.0};
    std::uint64_t seed = 1;
};

/// Build initial data whose u and theta Sobolev budgets hit the targets
/// exactly by linear rescaling of the fixed-shape field:
///   sobolev(u, 2, 0) = target_u,
///   sobolev(theta, 1, 0) + sobolev(theta, 1, 1/3) = target_theta.
SimState make_initial_data(std::shared_ptr<const ChebGrid> grid, const XGrid& xg,
                           const InitialDataSpec& profile, double target_u, double target_theta);

/// u-budget and theta-budget of a state under the thresholds' norms.
std::pair<double, double> initial_data_budgets(const SimState& s);

enum class Verdict { stable, unstable };

const char* verdict_name(Verdict v);

/// Bootstrap-shaped criterion: a completed run is stable when the
/// accumulated E_total never exceeds k_boot times its initial value and the
/// instantaneous energy ends at or below its initial value. Any flagged
/// outcome (divergence, CFL stop) is unstable.
struct StabilityCriterion {
    double k_boot = 4.0;
};

Verdict classify_run(const RunRecord& rec, const StabilityCriterion& crit);

struct AmplitudeVerdict {
    double amplitude = 0.0;
    Verdict verdict = Verdict::stable;
};

/// True when every stable amplitude sits below every unstable one.
bool verdicts_monotone(const std::vector<AmplitudeVerdict>& verdicts);

struct ThresholdPoint {
    double nu = 0.0;
    double eps_star = 0.0;
    bool bracketed = false;           // false = bracket-failure outcome
    bool monotone = true;             // verdict ladder monotone in amplitude
    std::vector<AmplitudeVerdict> verdicts;
    int bisection_iters = 0;
};

struct BisectionConfig {
    double start = 1e-2;
    double amp_lo = 1e-8;
    double amp_hi = 1e6;
    double scan_factor = 4.0;
    double bracket_tol = 0.10;        // relative bracket width at convergence
    int max_runs = 64;
};

/// Amplitude bisection against an arbitrary verdict oracle (real runs or a
/// synthetic function in tests). Geometric scan to bracket, then geometric
/// bisection to the configured relative width.
ThresholdPoint bisect_threshold(double nu, const std::function<Verdict(double)>& probe,
                                const BisectionConfig& cfg);

struct ExponentFit {
    std::vector<ThresholdPoint> points;
    double slope = 0.0;
    double intercept = 0.0;           // log intercept
    double residual = 0.0;            // rms residual of the log-log fit
};

/// Least-squares slope of log(eps_star) against log(nu). Needs >= 3
/// bracketed points spanning at least one decade of nu.
ExponentFit fit_exponent(const std::vector<ThresholdPoint>& points);

/// How a sweep maps the scalar amplitude to the two data budgets.
enum class SweepMode {
    joint,        // (target_u, target_theta) = (a, a * nu^{1/3})
    theta_only,   // (eps0 * nu^{1/2}, a)
};

struct ThresholdExperiment {
    SimConfig base;                   // resolution, dt cap, scheme, box
    InitialDataSpec profile;
    SweepMode mode = SweepMode::joint;
    double eps0 = 0.1;                // velocity budget factor for theta_only
    double horizon_factor = 20.0;     // T = factor * nu^{-1/3}
    StabilityCriterion criterion;
    BisectionConfig bisection;
};

/// One full bisection at viscosity nu with real simulation runs.
ThresholdPoint threshold_point(const ThresholdExperiment& exp, double nu);

}  // namespace bcl

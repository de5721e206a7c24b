#include "bclab/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bclab/errors.hpp"

namespace bcl {

const char* verdict_name(Verdict v) { return v == Verdict::stable ? "stable" : "unstable"; }

SimState make_initial_data(std::shared_ptr<const ChebGrid> grid, const XGrid& xg,
                           const InitialDataSpec& profile, double target_u, double target_theta) {
    if (target_u < 0.0 || target_theta < 0.0)
        throw invalid_argument_error("make_initial_data: targets must be >= 0");

    SimState s;
    s.grid = std::move(grid);
    s.xgrid = xg;
    const int rows = s.grid->size();
    const int mh = xg.half();
    s.omega.setZero(rows, mh);
    s.theta.setZero(rows, mh);
    s.psi.setZero(rows, mh);
    s.mean_shear.setZero(rows);

    const ChebGrid& g = *s.grid;
    Eigen::VectorXd env_psi(rows), env_th(rows);
    for (int i = 0; i < rows; ++i) {
        const double y2 = g.nodes(i) * g.nodes(i);
        env_psi(i) = (1.0 - y2) * (1.0 - y2);
        env_th(i) = 1.0 - y2;
    }

    std::mt19937_64 rng(profile.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const int jcut = xg.m / 3;
    for (double k : profile.band) {
        const double jd = k / xg.dk();
        const int j = static_cast<int>(std::llround(jd));
        if (std::abs(jd - j) > 1e-9 || j < 1 || j > jcut)
            throw invalid_argument_error(
                "make_initial_data: band wavenumber not representable inside the dealiased band");
        const double pu = 2.0 * M_PI * uni(rng);
        const double pt = 2.0 * M_PI * uni(rng);
        const complex cu(std::cos(pu), std::sin(pu));
        const complex ct(std::cos(pt), std::sin(pt));
        s.psi.col(j) = cu * env_psi.cast<complex>();
        s.omega.col(j) = (g.d2 * s.psi.col(j)) - (k * k) * s.psi.col(j);
        s.theta.col(j) = ct * env_th.cast<complex>();
    }

    auto [u_budget, th_budget] = initial_data_budgets(s);
    if (target_u == 0.0) {
        s.psi.setZero();
        s.omega.setZero();
        s.mean_shear.setZero();
    } else {
        if (u_budget == 0.0)
            throw invalid_argument_error("make_initial_data: zero-shape profile with nonzero u target");
        const double c = target_u / u_budget;
        s.psi *= c;
        s.omega *= c;
        s.mean_shear *= c;
    }
    if (target_theta == 0.0) {
        s.theta.setZero();
    } else {
        if (th_budget == 0.0)
            throw invalid_argument_error(
                "make_initial_data: zero-shape profile with nonzero theta target");
        s.theta *= target_theta / th_budget;
    }
    return s;
}

std::pair<double, double> initial_data_budgets(const SimState& s) {
    const ChebGrid& g = *s.grid;
    const int mh = s.mode_count();
    std::vector<ModeField> u1m, u2m, thm;
    u1m.reserve(mh);
    u2m.reserve(mh);
    thm.reserve(mh);
    for (int j = 0; j < mh; ++j) {
        const double k = s.wavenumber(j);
        if (j == 0) {
            u1m.push_back({0.0, s.mean_shear.cast<complex>()});
            u2m.push_back({0.0, Eigen::VectorXcd::Zero(g.size())});
        } else {
            auto [u1, u2] = velocity_from_stream(ModeField{k, s.psi.col(j)}, g);
            u1m.push_back(std::move(u1));
            u2m.push_back(std::move(u2));
        }
        thm.push_back({k, s.theta.col(j)});
    }
    const double u_budget = sobolev_norm2(u1m, u2m, s.xgrid, g, 2, 0.0);
    const double th_budget = sobolev_norm(thm, s.xgrid, g, 1, 0.0) +
                             sobolev_norm(thm, s.xgrid, g, 1, 1.0 / 3.0);
    return {u_budget, th_budget};
}

Verdict classify_run(const RunRecord& rec, const StabilityCriterion& crit) {
    if (rec.outcome != RunOutcome::completed) return Verdict::unstable;
    if (rec.snapshots.empty()) throw state_error("classify_run: record has no snapshots");
    if (rec.peak_e_total > crit.k_boot * rec.initial_e_total) return Verdict::unstable;
    if (rec.final_inst_e_total > rec.initial_inst_e_total) return Verdict::unstable;
    return Verdict::stable;
}

bool verdicts_monotone(const std::vector<AmplitudeVerdict>& verdicts) {
    double max_stable = -1.0, min_unstable = std::numeric_limits<double>::infinity();
    for (const auto& v : verdicts) {
        if (v.verdict == Verdict::stable) max_stable = std::max(max_stable, v.amplitude);
        else min_unstable = std::min(min_unstable, v.amplitude);
    }
    return !(max_stable > min_unstable);
}

ThresholdPoint bisect_threshold(double nu, const std::function<Verdict(double)>& probe,
                                const BisectionConfig& cfg) {
    if (cfg.start <= 0.0 || cfg.scan_factor <= 1.0 || cfg.bracket_tol <= 0.0)
        throw invalid_argument_error("bisect_threshold: bad bisection config");

    ThresholdPoint pt;
    pt.nu = nu;
    int runs = 0;
    auto eval = [&](double a) {
        ++runs;
        const Verdict v = probe(a);
        pt.verdicts.push_back({a, v});
        return v;
    };

    double lo = 0.0, hi = 0.0;
    double a = cfg.start;
    Verdict v0 = eval(a);
    if (v0 == Verdict::stable) {
        lo = a;
        while (runs < cfg.max_runs) {
            a *= cfg.scan_factor;
            if (a > cfg.amp_hi) break;
            if (eval(a) == Verdict::unstable) {
                hi = a;
                break;
            }
            lo = a;
        }
    } else {
        hi = a;
        while (runs < cfg.max_runs) {
            a /= cfg.scan_factor;
            if (a < cfg.amp_lo) break;
            if (eval(a) == Verdict::stable) {
                lo = a;
                break;
            }
            hi = a;
        }
    }
    if (lo == 0.0 || hi == 0.0) {
        pt.monotone = verdicts_monotone(pt.verdicts);
        return pt;   // bracket-failure: reported, not fatal
    }

    while (hi / lo > 1.0 + cfg.bracket_tol && runs < cfg.max_runs) {
        const double mid = std::sqrt(lo * hi);
        if (eval(mid) == Verdict::stable) lo = mid;
        else hi = mid;
        ++pt.bisection_iters;
    }
    pt.bracketed = hi / lo <= 1.0 + cfg.bracket_tol;
    pt.eps_star = std::sqrt(lo * hi);
    pt.monotone = verdicts_monotone(pt.verdicts);
    return pt;
}

ExponentFit fit_exponent(const std::vector<ThresholdPoint>& points) {
    std::vector<double> lx, ly;
    for (const auto& p : points) {
        if (!p.bracketed) continue;
        lx.push_back(std::log(p.nu));
        ly.push_back(std::log(p.eps_star));
    }
    if (lx.size() < 3) throw invalid_argument_error("fit_exponent: need >= 3 bracketed points");
    const auto [mn, mx] = std::minmax_element(lx.begin(), lx.end());
    if (*mx - *mn < std::log(10.0) * (1.0 - 1e-12))
        throw invalid_argument_error("fit_exponent: points must span at least one decade of nu");

    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    ExponentFit fit;
    fit.points = points;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    double rss = 0.0;
    for (size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

ThresholdPoint threshold_point(const ThresholdExperiment& exp, double nu) {
    SimConfig cfg = exp.base;
    cfg.nu = nu;
    cfg.horizon = exp.horizon_factor * std::pow(nu, -1.0 / 3.0);

    auto probe = [&](double amplitude) {
        double target_u = amplitude, target_theta = amplitude * std::cbrt(nu);
        if (exp.mode == SweepMode::theta_only) {
            target_u = exp.eps0 * std::sqrt(nu);
            target_theta = amplitude;
        }
        SimConfig run_cfg = cfg;
        // pre-shrink dt against the CFL bound for this amplitude, with
        // headroom for transient growth
        {
            const XGrid xg = build_x_grid(run_cfg.box_length, run_cfg.m);
            auto grid = std::make_shared<const ChebGrid>(build_cheb_grid(run_cfg.n));
            const SimState data =
                make_initial_data(grid, xg, exp.profile, target_u, target_theta);
            const double u0 = state_max_speed(data);
            const double dx = run_cfg.box_length / run_cfg.m;
            const double cap = run_cfg.cfl_safety * dx / std::max(4.0 * u0, 1e-9);
            while (run_cfg.dt > cap) run_cfg.dt *= 0.5;
        }
        Simulator sim(run_cfg);
        const SimState data = make_initial_data(sim.grid_handle(), sim.xgrid(), exp.profile,
                                                target_u, target_theta);
        const RunRecord rec = sim.simulate(data);
        return classify_run(rec, exp.criterion);
    };
    return bisect_threshold(nu, probe, exp.bisection);
}

}  // namespace bcl

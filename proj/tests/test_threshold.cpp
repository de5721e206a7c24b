#include <doctest.h>

#include <cmath>

#include "bclab/errors.hpp"
#include "bclab/threshold.hpp"

using namespace bcl;

namespace {

std::pair<std::shared_ptr<const ChebGrid>, XGrid> small_grids() {
    return {std::make_shared<const ChebGrid>(build_cheb_grid(48)), build_x_grid(4.0 * M_PI, 32)};
}

}  // namespace

TEST_CASE("make_initial_data hits the targets exactly") {
    auto [g, xg] = small_grids();
    InitialDataSpec spec;

    SUBCASE("zero targets give the zero state") {
        const SimState s = make_initial_data(g, xg, spec, 0.0, 0.0);
        CHECK(s.omega.cwiseAbs().maxCoeff() == 0.0);
        CHECK(s.theta.cwiseAbs().maxCoeff() == 0.0);
        CHECK(s.psi.cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("norm targeting by rescaling") {
        const SimState s = make_initial_data(g, xg, spec, 3.0, 0.7);
        auto [u, th] = initial_data_budgets(s);
        CHECK(u == doctest::Approx(3.0).epsilon(1e-10));
        CHECK(th == doctest::Approx(0.7).epsilon(1e-10));
    }

    SUBCASE("deterministic in the seed") {
        const SimState a = make_initial_data(g, xg, spec, 1.0, 1.0);
        const SimState b = make_initial_data(g, xg, spec, 1.0, 1.0);
        CHECK((a.theta - b.theta).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.omega - b.omega).cwiseAbs().maxCoeff() == 0.0);
        InitialDataSpec other;
        other.seed = 2;
        const SimState c = make_initial_data(g, xg, other, 1.0, 1.0);
        CHECK((a.theta - c.theta).cwiseAbs().maxCoeff() > 0.0);
    }

    SUBCASE("fractional budget arithmetic at k=8") {
        // a theta profile concentrated at k=8 gets |dx|^{1/3} weight 2
        InitialDataSpec hi;
        hi.band = {8.0};
        XGrid wide = build_x_grid(4.0 * M_PI, 96);   // jcut = 32, k=8 is j=16
        const SimState s = make_initial_data(g, wide, hi, 0.0, 1.0);
        std::vector<ModeField> thm;
        for (int j = 0; j < s.mode_count(); ++j)
            thm.push_back({s.wavenumber(j), s.theta.col(j)});
        const ChebGrid& gg = *s.grid;
        const double plain = sobolev_norm(thm, wide, gg, 1, 0.0);
        const double frac = sobolev_norm(thm, wide, gg, 1, 1.0 / 3.0);
        CHECK(frac == doctest::Approx(2.0 * plain).epsilon(1e-12));
        CHECK(plain + frac == doctest::Approx(1.0).epsilon(1e-10));
    }

    SUBCASE("unrepresentable band is rejected") {
        InitialDataSpec bad;
        bad.band = {0.3};   // not a multiple of dk = 1/2
        CHECK_THROWS_AS(make_initial_data(g, xg, bad, 1.0, 1.0), invalid_argument_error);
    }
}

TEST_CASE("classify_run") {
    StabilityCriterion crit;   // k_boot = 4

    RunRecord rec;
    rec.outcome = RunOutcome::completed;
    rec.snapshots.resize(1);

    SUBCASE("zero-data run is stable") {
        CHECK(classify_run(rec, crit) == Verdict::stable);
    }

    SUBCASE("divergence is unstable") {
        rec.outcome = RunOutcome::divergence_detected;
        CHECK(classify_run(rec, crit) == Verdict::unstable);
    }

    SUBCASE("transient below the bootstrap constant stays stable") {
        rec.initial_e_total = 1.0;
        rec.peak_e_total = 3.9;
        rec.initial_inst_e_total = 1.0;
        rec.final_inst_e_total = 0.2;
        CHECK(classify_run(rec, crit) == Verdict::stable);
        rec.peak_e_total = 4.1;
        CHECK(classify_run(rec, crit) == Verdict::unstable);
    }

    SUBCASE("no final decay is unstable") {
        rec.initial_e_total = 1.0;
        rec.peak_e_total = 2.0;
        rec.initial_inst_e_total = 1.0;
        rec.final_inst_e_total = 1.5;
        CHECK(classify_run(rec, crit) == Verdict::unstable);
    }
}

TEST_CASE("bisection against a synthetic oracle") {
    BisectionConfig cfg;
    cfg.start = 1.0;

    SUBCASE("threshold at 0.37") {
        auto oracle = [](double a) { return a < 0.37 ? Verdict::stable : Verdict::unstable; };
        const ThresholdPoint pt = bisect_threshold(1e-3, oracle, cfg);
        CHECK(pt.bracketed);
        CHECK(pt.monotone);
        CHECK(pt.eps_star > 0.37 / 1.1);
        CHECK(pt.eps_star < 0.37 * 1.1);
        CHECK(pt.bisection_iters > 0);
    }

    SUBCASE("always stable gives bracket failure") {
        auto oracle = [](double) { return Verdict::stable; };
        const ThresholdPoint pt = bisect_threshold(1e-3, oracle, cfg);
        CHECK(!pt.bracketed);
        CHECK(pt.eps_star == 0.0);
    }

    SUBCASE("instability bubble still brackets, observed ladder stays consistent") {
        auto oracle = [](double a) {
            if (a > 2.0 && a < 6.0) return Verdict::unstable;   // bubble of instability
            return a < 40.0 ? Verdict::stable : Verdict::unstable;
        };
        const ThresholdPoint pt = bisect_threshold(1e-3, oracle, cfg);
        CHECK(pt.bracketed);
        // scan + bisection probes can only observe an order-consistent ladder
        CHECK(pt.monotone);
    }

    SUBCASE("the monotonicity flag fires on a contradictory ladder") {
        CHECK(verdicts_monotone({{0.1, Verdict::stable}, {1.0, Verdict::unstable}}));
        CHECK(!verdicts_monotone({{0.1, Verdict::unstable}, {1.0, Verdict::stable}}));
        CHECK(verdicts_monotone({}));
    }

    SUBCASE("determinism") {
        auto oracle = [](double a) { return a < 0.005 ? Verdict::stable : Verdict::unstable; };
        const ThresholdPoint a = bisect_threshold(1e-3, oracle, cfg);
        const ThresholdPoint b = bisect_threshold(1e-3, oracle, cfg);
        CHECK(a.eps_star == b.eps_star);
        CHECK(a.verdicts.size() == b.verdicts.size());
    }
}

TEST_CASE("fit_exponent recovers planted slopes") {
    auto planted = [](double c, double slope) {
        std::vector<ThresholdPoint> pts;
        for (double nu : {1e-2, 3e-3, 1e-3, 3e-4}) {
            ThresholdPoint p;
            p.nu = nu;
            p.eps_star = c * std::pow(nu, slope);
            p.bracketed = true;
            pts.push_back(p);
        }
        return pts;
    };

    const ExponentFit half = fit_exponent(planted(1.0, 0.5));
    CHECK(half.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(half.residual < 1e-12);

    const ExponentFit fs = fit_exponent(planted(2.0, 5.0 / 6.0));
    CHECK(fs.slope == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(fs.intercept == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    std::vector<ThresholdPoint> two = planted(1.0, 0.5);
    two.resize(2);
    CHECK_THROWS_AS(fit_exponent(two), invalid_argument_error);

    // narrow nu span is rejected
    std::vector<ThresholdPoint> narrow;
    for (double nu : {1e-3, 1.2e-3, 1.5e-3}) {
        ThresholdPoint p;
        p.nu = nu;
        p.eps_star = std::sqrt(nu);
        p.bracketed = true;
        narrow.push_back(p);
    }
    CHECK_THROWS_AS(fit_exponent(narrow), invalid_argument_error);
}

TEST_CASE("threshold point on a real desk-scale run") {
    // tiny resolution, short horizon: exercises the full pipeline end to end
    ThresholdExperiment exp;
    exp.base.nu = 1e-2;
    exp.base.m = 16;
    exp.base.n = 32;
    exp.base.dt = 0.05;
    exp.base.scheme = 1;
    exp.profile.band = {0.5, 1.0};
    exp.horizon_factor = 3.0;
    exp.criterion.k_boot = 2.0;
    exp.bisection.start = 0.05;
    exp.bisection.bracket_tol = 0.25;
    exp.bisection.max_runs = 24;

    const ThresholdPoint pt = threshold_point(exp, 1e-2);
    CHECK(!pt.verdicts.empty());
    // determinism: bit-identical reruns
    const ThresholdPoint pt2 = threshold_point(exp, 1e-2);
    CHECK(pt.eps_star == pt2.eps_star);
    CHECK(pt.bracketed == pt2.bracketed);
    REQUIRE(pt.verdicts.size() == pt2.verdicts.size());
    for (size_t i = 0; i < pt.verdicts.size(); ++i) {
        CHECK(pt.verdicts[i].amplitude == pt2.verdicts[i].amplitude);
        CHECK(pt.verdicts[i].verdict == pt2.verdicts[i].verdict);
    }
}

// bclab: numerical laboratory for shear-enhanced dissipation and stability
// thresholds of buoyancy-coupled channel flow.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bclab/config.hpp"
#include "bclab/energy.hpp"
#include "bclab/errors.hpp"
#include "bclab/io.hpp"
#include "bclab/parallel.hpp"
#include "bclab/resolvent.hpp"
#include "bclab/semigroup.hpp"
#include "bclab/sim.hpp"
#include "bclab/threshold.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bcl;

namespace {

constexpr const char* kVersion = "bclab 0.1.0";

struct CliContext {
    KeyValueConfig cfg;
    fs::path outdir;
    int workers = 1;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    fs::path out(const std::string& name) {
        outputs.push_back(name);
        return outdir / name;
    }
};

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(CliContext& ctx, const std::string& subcommand) {
    json j;
    j["tool"] = kVersion;
    j["subcommand"] = subcommand;
    j["config"] = json::object();
    for (const auto& [k, v] : ctx.cfg.entries()) j["config"][k] = v;
    j["config_hash"] = hash_hex(config_hash(ctx.cfg));
    j["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
    j["outputs"] = ctx.outputs;
    std::ofstream out(ctx.outdir / "manifest.json");
    out << j.dump(2) << "\n";
}

void emit_gnuplot(CliContext& ctx, const std::string& name, const std::string& body) {
    std::ofstream out(ctx.outdir / name);
    out << "# gnuplot script; run from this directory\n" << body;
    ctx.outputs.push_back(name);
}

SimConfig sim_config_from(const KeyValueConfig& cfg) {
    SimConfig sc;
    sc.nu = cfg.get_double("nu", sc.nu);
    sc.box_length = cfg.get_double("Lx", sc.box_length);
    sc.m = cfg.get_int("m", sc.m);
    sc.n = cfg.get_int("n", sc.n);
    sc.dt = cfg.get_double("dt", sc.dt);
    sc.horizon = cfg.get_double("T", sc.horizon);
    sc.seed = cfg.get_u64("seed", sc.seed);
    sc.amplitude_u = cfg.get_double("amplitude_u", sc.amplitude_u);
    sc.amplitude_theta = cfg.get_double("amplitude_theta", sc.amplitude_theta);
    sc.scheme = cfg.get_int("scheme", sc.scheme);
    sc.ceiling_factor = cfg.get_double("ceiling", sc.ceiling_factor);
    sc.cfl_safety = cfg.get_double("cfl_safety", sc.cfl_safety);
    sc.c_norm = cfg.get_double("c_norm", sc.c_norm);
    sc.snapshot_stride = cfg.get_int("snapshot_stride", sc.snapshot_stride);
    sc.nonlinear = cfg.get_bool("nonlinear", sc.nonlinear);
    sc.buoyancy = cfg.get_bool("buoyancy", sc.buoyancy);
    sc.threads = cfg.get_int("threads", sc.threads);
    return sc;
}

InitialDataSpec data_spec_from(const KeyValueConfig& cfg, std::uint64_t seed) {
    InitialDataSpec spec;
    spec.band = cfg.get_list("band", spec.band);
    spec.seed = seed;
    return spec;
}

// ---------------------------------------------------------------- resolvent

int run_resolvent(CliContext& ctx) {
    const auto nus = ctx.cfg.get_list("nus", {ctx.cfg.get_double("nu", 1e-3)});
    const auto ks = ctx.cfg.get_list("ks", {ctx.cfg.get_double("k", 1.0)});
    const int n = ctx.cfg.get_int("n", 128);
    const int lambda_points = ctx.cfg.get_int("lambda_points", 401);
    const int refine_rounds = ctx.cfg.get_int("refine_rounds", 3);
    const int refine_points = ctx.cfg.get_int("refine_points", 41);
    const bool prop22 = ctx.cfg.get_bool("prop22", false);
    const int prop22_samples = ctx.cfg.get_int("prop22_samples", 100);
    const auto prop22_lambdas = ctx.cfg.get_list("prop22_lambdas", {0.0});
    const std::uint64_t seed = ctx.cfg.get_u64("seed", 1);
    ctx.cfg.reject_unknown();

    const ChebGrid grid = build_cheb_grid(n);

    struct Item {
        double nu, k;
        ResolventSweep coarse, refined;
    };
    std::vector<Item> items;
    for (double nu : nus)
        for (double k : ks) items.push_back({nu, k, {}, {}});

    parallel_for(items.size(), ctx.workers, [&](std::size_t i) {
        const OperatorMatrix op = assemble_mode_operator(grid, items[i].nu, items[i].k);
        items[i].coarse = compute_phi(op, default_lambda_grid(items[i].k, lambda_points));
        items[i].refined = items[i].coarse;
        double spacing = items[i].coarse.lambda_grid(1) - items[i].coarse.lambda_grid(0);
        double phi = items[i].coarse.phi, lam = items[i].coarse.lambda_star;
        for (int r = 0; r < refine_rounds; ++r) {
            const Eigen::VectorXd local =
                Eigen::VectorXd::LinSpaced(refine_points, lam - spacing, lam + spacing);
            for (Eigen::Index q = 0; q < local.size(); ++q) {
                const double s = sigma_min_weighted(op, local(q));
                if (s < phi) {
                    phi = s;
                    lam = local(q);
                }
            }
            spacing = 2.0 * spacing / (refine_points - 1);
        }
        items[i].refined.phi = phi;
        items[i].refined.lambda_star = lam;
    });

    {
        CsvWriter sweep(ctx.out("phi_sweep.csv"), {"nu", "k", "lambda", "sigma_min"});
        for (const auto& it : items)
            for (Eigen::Index q = 0; q < it.coarse.lambda_grid.size(); ++q)
                sweep.row(std::vector<double>{it.nu, it.k, it.coarse.lambda_grid(q),
                                              it.coarse.sigma_min_values(q)});
    }
    {
        CsvWriter summary(ctx.out("phi_summary.csv"), {"nu", "k", "phi", "lambda_star"});
        for (const auto& it : items)
            summary.row(std::vector<double>{it.nu, it.k, it.refined.phi, it.refined.lambda_star});
    }

    json j;
    j["n"] = n;
    j["points"] = json::array();
    for (const auto& it : items) {
        j["points"].push_back({{"nu", it.nu},
                               {"k", it.k},
                               {"phi", it.refined.phi},
                               {"lambda_star", it.refined.lambda_star},
                               {"enhanced_scale", std::cbrt(it.nu * it.k * it.k) + it.nu}});
    }
    // log-log slopes across the sweep axes
    auto fit_slope = [](const std::vector<std::pair<double, double>>& xy) {
        const double n = static_cast<double>(xy.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : xy) {
            const double lx = std::log(x), ly = std::log(y);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    if (nus.size() >= 2) {
        json slopes = json::object();
        json monotone = json::object();
        for (double k : ks) {
            std::vector<std::pair<double, double>> xy;
            for (const auto& it : items)
                if (it.k == k) xy.emplace_back(it.nu, it.refined.phi);
            slopes["k=" + format_g17(k)] = fit_slope(xy);
            // diagnostic only: phi nondecreasing in nu at fixed k
            std::sort(xy.begin(), xy.end());
            bool mono = true;
            for (size_t q = 1; q < xy.size(); ++q)
                if (xy[q].second < xy[q - 1].second) mono = false;
            monotone["k=" + format_g17(k)] = mono;
        }
        j["slope_log_phi_vs_log_nu"] = slopes;
        j["phi_monotone_in_nu"] = monotone;
    }
    if (ks.size() >= 2) {
        json slopes = json::object();
        for (double nu : nus) {
            std::vector<std::pair<double, double>> xy;
            for (const auto& it : items)
                if (it.nu == nu) xy.emplace_back(std::abs(it.k), it.refined.phi);
            slopes["nu=" + format_g17(nu)] = fit_slope(xy);
        }
        j["slope_log_phi_vs_log_k"] = slopes;
    }

    if (prop22) {
        CsvWriter pc(ctx.out("prop22.csv"),
                     {"nu", "k", "lambda", "ratio_l2h2", "ratio_hm1h1", "samples"});
        json reports = json::array();
        for (double nu : nus)
            for (double k : ks)
                for (double lam : prop22_lambdas) {
                    const auto fam = make_forcing_family(grid, nu, k, lam, prop22_samples, seed);
                    const auto r1 = verify_prop22_l2h2(grid, nu, k, lam, fam);
                    const auto r2 = verify_prop22_hm1h1(grid, nu, k, lam, fam);
                    pc.row(std::vector<double>{nu, k, lam, r1.ratio_l2h2, r2.ratio_hm1h1,
                                               static_cast<double>(r1.sample_count)});
                    reports.push_back({{"nu", nu},
                                       {"k", k},
                                       {"lambda", lam},
                                       {"ratio_l2h2", r1.ratio_l2h2},
                                       {"ratio_hm1h1", r2.ratio_hm1h1}});
                }
        j["prop22"] = reports;
    }

    std::ofstream(ctx.out("summary.json")) << j.dump(2) << "\n";
    emit_gnuplot(ctx, "plot.gp",
                 "set logscale xy\nset xlabel 'nu'\nset ylabel 'phi'\n"
                 "plot 'phi_summary.csv' using 1:3 with linespoints title 'phi(nu)'\n");
    return 0;
}

// ---------------------------------------------------------------- semigroup

int run_semigroup(CliContext& ctx) {
    const auto nus = ctx.cfg.get_list("nus", {ctx.cfg.get_double("nu", 1e-3)});
    const auto ks = ctx.cfg.get_list("ks", {ctx.cfg.get_double("k", 1.0)});
    const int n = ctx.cfg.get_int("n", 128);
    const int points = ctx.cfg.get_int("points", 100);
    const double horizon_factor = ctx.cfg.get_double("horizon_factor", 5.0);
    ctx.cfg.reject_unknown();

    const ChebGrid grid = build_cheb_grid(n);

    struct Item {
        double nu, k, phi = 0, rate = 0, prefactor = 0, wei_margin = 0, rate_ratio = 0;
        DecayCurve curve;
    };
    std::vector<Item> items;
    for (double nu : nus)
        for (double k : ks) items.push_back({nu, k});

    parallel_for(items.size(), ctx.workers, [&](std::size_t i) {
        Item& it = items[i];
        const OperatorMatrix op = assemble_mode_operator(grid, it.nu, it.k);
        it.phi = compute_phi_refined(op).phi;
        const double T = horizon_factor / it.phi;
        it.curve = semigroup_curve(op, Eigen::VectorXd::LinSpaced(points, 0.0, T));
        auto [rate, pref] = fit_decay(it.curve, 0.1 * T, T);
        it.rate = rate;
        it.prefactor = pref;
        it.rate_ratio = rate / (std::cbrt(it.nu * it.k * it.k) + it.nu);
        double margin = 1e300;
        for (Eigen::Index q = 0; q < it.curve.times.size(); ++q)
            margin = std::min(margin, std::exp(M_PI / 2.0) * std::exp(-it.phi * it.curve.times(q)) -
                                          it.curve.norms(q));
        it.wei_margin = margin;
    });

    {
        CsvWriter csv(ctx.out("decay.csv"), {"nu", "k", "t", "norm"});
        for (const auto& it : items)
            for (Eigen::Index q = 0; q < it.curve.times.size(); ++q)
                csv.row(std::vector<double>{it.nu, it.k, it.curve.times(q), it.curve.norms(q)});
    }
    json j;
    j["n"] = n;
    double global_margin = 1e300;
    j["curves"] = json::array();
    for (const auto& it : items) {
        global_margin = std::min(global_margin, it.wei_margin);
        j["curves"].push_back({{"nu", it.nu},
                               {"k", it.k},
                               {"phi", it.phi},
                               {"fitted_rate", it.rate},
                               {"fitted_prefactor", it.prefactor},
                               {"rate_over_enhanced_scale", it.rate_ratio},
                               {"wei_margin_min", it.wei_margin}});
    }
    j["wei_margin_global_min"] = global_margin;
    std::ofstream(ctx.out("summary.json")) << j.dump(2) << "\n";
    emit_gnuplot(ctx, "plot.gp",
                 "set logscale y\nset xlabel 't'\nset ylabel '||exp(-At)||'\n"
                 "plot 'decay.csv' using 3:4 with lines title 'decay'\n");
    return 0;
}

// ----------------------------------------------------------- simulate/energy

void write_run_outputs(CliContext& ctx, const Simulator& sim, const RunRecord& rec,
                       bool energy_csv) {
    {
        CsvWriter csv(ctx.out("timeseries.csv"),
                      {"t", "e_omega", "e_theta", "e_total", "inst_e_total", "theta_l2",
                       "max_theta", "bres_theta", "bres_psi", "bres_dpsi", "div_residual",
                       "max_speed"});
        for (const auto& s : rec.snapshots)
            csv.row(std::vector<double>{s.t, s.e_omega, s.e_theta, s.e_total, s.inst_e_total,
                                        s.theta_l2xy, s.max_theta_phys, s.bres_theta, s.bres_psi,
                                        s.bres_dpsi, s.divergence_residual, s.max_speed});
    }
    if (energy_csv) {
        CsvWriter csv(ctx.out("energy_modes.csv"), {"t", "k", "regime", "E_omega_k", "E_theta_k"});
        for (size_t s = 0; s < rec.mode_energies.size(); ++s) {
            for (int j = 0; j < rec.ledger.mode_count(); ++j) {
                const double k = rec.ledger.wavenumber(j);
                csv.row({format_g17(rec.snapshots[s].t), format_g17(k),
                         regime_name(regime_of(k, sim.config().nu)),
                         format_g17(rec.mode_energies[s][j].first),
                         format_g17(rec.mode_energies[s][j].second)});
            }
        }
        CsvWriter lad(ctx.out("ladder_ratios.csv"),
                      {"k", "u1_sup", "u1_l2t", "th_sup", "th_l2t", "zero_energy"});
        for (int j = 0; j < rec.ledger.mode_count(); ++j) {
            const double k = rec.ledger.wavenumber(j);
            const LadderRatios r = ladder_ratios(rec.ledger.norms(j), sim.config().nu, k);
            lad.row(std::vector<double>{k, r.u1_sup, r.u1_l2t, r.th_sup, r.th_l2t,
                                        r.zero_energy ? 1.0 : 0.0});
        }
    }

    const Aggregates agg = rec.ledger.aggregate(sim.config().c_norm);
    json j;
    j["outcome"] = outcome_name(rec.outcome);
    j["steps"] = rec.steps;
    j["run_wall_seconds"] = rec.wall_seconds;
    j["initial_e_total"] = rec.initial_e_total;
    j["peak_e_total"] = rec.peak_e_total;
    j["final_e_total"] = agg.e_total;
    j["final_e_omega"] = agg.e_omega;
    j["final_e_theta"] = agg.e_theta;
    j["c_norm"] = agg.c_norm;
    j["initial_inst_e_total"] = rec.initial_inst_e_total;
    j["final_inst_e_total"] = rec.final_inst_e_total;
    j["max_boundary_residual_theta"] = rec.max_bres_theta;
    j["max_boundary_residual_psi"] = rec.max_bres_psi;
    j["max_boundary_residual_dpsi"] = rec.max_bres_dpsi;
    j["max_divergence_residual"] = rec.max_divergence_residual;
    j["theta_l2_monotone"] = rec.theta_l2_monotone;
    j["theta_max_monotone"] = rec.theta_max_monotone;
    if (energy_csv) {
        json series = json::array();
        for (const auto& s : rec.snapshots)
            series.push_back({{"t", s.t},
                              {"e_omega", s.e_omega},
                              {"e_theta", s.e_theta},
                              {"e_total", s.e_total}});
        j["aggregates"] = series;
    }
    std::ofstream(ctx.out("summary.json")) << j.dump(2) << "\n";
}

int run_simulate(CliContext& ctx, bool energy_csv) {
    SimConfig sc = sim_config_from(ctx.cfg);
    sc.mode_energy_series = energy_csv;
    const InitialDataSpec spec = data_spec_from(ctx.cfg, sc.seed);
    const std::string checkpoint = ctx.cfg.get_string("checkpoint", "");
    ctx.cfg.reject_unknown();

    Simulator sim(sc);
    const SimState init = make_initial_data(sim.grid_handle(), sim.xgrid(), spec, sc.amplitude_u,
                                            sc.amplitude_theta);
    const RunRecord rec = sim.simulate(init);
    write_run_outputs(ctx, sim, rec, energy_csv);
    if (!checkpoint.empty()) save_checkpoint(rec.final_state, sc.nu, ctx.out(checkpoint));
    emit_gnuplot(ctx, "plot.gp",
                 "set xlabel 't'\nset ylabel 'E_total'\n"
                 "plot 'timeseries.csv' using 1:4 with lines title 'accumulated', \\\n"
                 "     'timeseries.csv' using 1:5 with lines title 'instantaneous'\n");
    std::cout << "outcome: " << outcome_name(rec.outcome) << " after " << rec.steps << " steps\n";
    return 0;
}

// ---------------------------------------------------------------- threshold

int run_threshold(CliContext& ctx) {
    ThresholdExperiment exp;
    exp.base = sim_config_from(ctx.cfg);
    exp.profile = data_spec_from(ctx.cfg, exp.base.seed);
    const std::string mode = ctx.cfg.get_string("mode", "joint");
    if (mode == "joint") exp.mode = SweepMode::joint;
    else if (mode == "theta") exp.mode = SweepMode::theta_only;
    else throw config_error("threshold: mode must be 'joint' or 'theta'");
    exp.eps0 = ctx.cfg.get_double("eps0", exp.eps0);
    exp.horizon_factor = ctx.cfg.get_double("horizon_factor", exp.horizon_factor);
    exp.criterion.k_boot = ctx.cfg.get_double("k_boot", exp.criterion.k_boot);
    exp.bisection.start = ctx.cfg.get_double("start", exp.bisection.start);
    exp.bisection.amp_lo = ctx.cfg.get_double("amp_lo", exp.bisection.amp_lo);
    exp.bisection.amp_hi = ctx.cfg.get_double("amp_hi", exp.bisection.amp_hi);
    exp.bisection.scan_factor = ctx.cfg.get_double("scan_factor", exp.bisection.scan_factor);
    exp.bisection.bracket_tol = ctx.cfg.get_double("bracket_tol", exp.bisection.bracket_tol);
    exp.bisection.max_runs = ctx.cfg.get_int("max_runs", exp.bisection.max_runs);
    const auto nus = ctx.cfg.get_list("nus", {1e-2, 3e-3, 1e-3});
    ctx.cfg.reject_unknown();

    std::vector<ThresholdPoint> points(nus.size());
    parallel_for(nus.size(), ctx.workers,
                 [&](std::size_t i) { points[i] = threshold_point(exp, nus[i]); });

    {
        CsvWriter csv(ctx.out("thresholds.csv"), {"nu", "eps_star", "bracketed", "monotone"});
        for (const auto& p : points)
            csv.row(std::vector<double>{p.nu, p.eps_star, p.bracketed ? 1.0 : 0.0,
                                        p.monotone ? 1.0 : 0.0});
    }
    json j;
    j["mode"] = mode;
    j["k_boot"] = exp.criterion.k_boot;
    j["horizon_factor"] = exp.horizon_factor;
    j["points"] = json::array();
    for (const auto& p : points) {
        json vj = json::array();
        for (const auto& v : p.verdicts)
            vj.push_back({{"amplitude", v.amplitude}, {"verdict", verdict_name(v.verdict)}});
        j["points"].push_back({{"nu", p.nu},
                               {"eps_star", p.eps_star},
                               {"bracketed", p.bracketed},
                               {"monotone", p.monotone},
                               {"bisection_iters", p.bisection_iters},
                               {"verdicts", vj}});
    }
    try {
        const ExponentFit fit = fit_exponent(points);
        j["fit"] = {{"slope", fit.slope},
                    {"intercept", fit.intercept},
                    {"residual", fit.residual},
                    {"slope_minus_half", fit.slope - 0.5},
                    {"slope_minus_five_sixths", fit.slope - 5.0 / 6.0}};
    } catch (const invalid_argument_error& e) {
        j["fit"] = {{"error", e.what()}};
    }
    std::ofstream(ctx.out("points.json")) << j.dump(2) << "\n";
    emit_gnuplot(ctx, "plot.gp",
                 "set logscale xy\nset xlabel 'nu'\nset ylabel 'eps*'\n"
                 "plot 'thresholds.csv' using 1:2 with linespoints title 'threshold'\n");
    return 0;
}

// ----------------------------------------------------------------- selftest

int run_selftest(CliContext& ctx) {
    const std::int64_t samples = static_cast<std::int64_t>(ctx.cfg.get_double("samples", 1e6));
    const std::uint64_t seed = ctx.cfg.get_u64("seed", 1);
    ctx.cfg.reject_unknown();

    const FreqLemmaReport rep = check_freq_lemmas(samples, seed);
    bool ok = rep.violations_a2 == 0 && rep.violations_a3 == 0;

    // grid exactness: derivative of y^5 and quadrature of y^4 at several n
    double worst_d = 0.0, worst_q = 0.0;
    for (int n : {16, 64, 128}) {
        const ChebGrid g = build_cheb_grid(n);
        Eigen::VectorXd f(g.size()), df(g.size());
        double q = 0.0;
        for (int i = 0; i < g.size(); ++i) {
            const double y = g.nodes(i);
            f(i) = y * y * y * y * y;
            df(i) = 5.0 * y * y * y * y;
            q += g.weights(i) * y * y * y * y;
        }
        worst_d = std::max(worst_d, ((g.d1 * f) - df).cwiseAbs().maxCoeff());
        worst_q = std::max(worst_q, std::abs(q - 2.0 / 5.0));
    }
    ok = ok && worst_d < 1e-10 && worst_q < 1e-12;

    json j;
    j["samples"] = samples;
    j["band_comparability_violations"] = rep.violations_a2;
    j["exponent_splitting_violations"] = rep.violations_a3;
    j["max_derivative_error"] = worst_d;
    j["max_quadrature_error"] = worst_q;
    j["pass"] = ok;
    std::ofstream(ctx.out("selftest.json")) << j.dump(2) << "\n";
    std::cout << (ok ? "selftest: pass" : "selftest: FAIL") << "\n";
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for buoyancy-coupled Couette channel flow"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path, manifest_path, outdir_opt;
    std::vector<std::string> overrides;
    int workers = 1;
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--from-manifest", manifest_path, "take the config from a manifest.json");
    app.add_option("--set", overrides, "override a config key (key=value), repeatable");
    app.add_option("-o,--output-dir", outdir_opt, "output directory (default $BCLAB_OUTPUT_DIR or ./out)");
    app.add_option("--workers", workers, "worker threads for sweeps");

    for (const char* name : {"resolvent", "semigroup", "simulate", "threshold", "energy-report",
                             "selftest"})
        app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        CliContext ctx;
        if (!config_path.empty()) ctx.cfg = KeyValueConfig::from_file(config_path);
        if (!manifest_path.empty()) {
            std::ifstream in(manifest_path);
            if (!in) throw config_error("cannot open manifest: " + manifest_path);
            json mj = json::parse(in);
            for (const auto& [k, v] : mj.at("config").items())
                ctx.cfg.set(k, v.get<std::string>());
        }
        for (const auto& o : overrides) ctx.cfg.set(o);
        ctx.workers = workers;

        if (!outdir_opt.empty()) ctx.outdir = outdir_opt;
        else if (const char* env = std::getenv("BCLAB_OUTPUT_DIR")) ctx.outdir = env;
        else ctx.outdir = "out";
        fs::create_directories(ctx.outdir);

        int rc = 0;
        std::string sub;
        if (app.got_subcommand("resolvent")) rc = run_resolvent(ctx), sub = "resolvent";
        else if (app.got_subcommand("semigroup")) rc = run_semigroup(ctx), sub = "semigroup";
        else if (app.got_subcommand("simulate")) rc = run_simulate(ctx, false), sub = "simulate";
        else if (app.got_subcommand("energy-report")) rc = run_simulate(ctx, true), sub = "energy-report";
        else if (app.got_subcommand("threshold")) rc = run_threshold(ctx), sub = "threshold";
        else if (app.got_subcommand("selftest")) rc = run_selftest(ctx), sub = "selftest";
        write_manifest(ctx, sub);
        return rc;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const invalid_argument_error& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

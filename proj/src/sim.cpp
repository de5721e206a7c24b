#include "bclab/sim.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include "bclab/errors.hpp"
#include "bclab/parallel.hpp"

namespace bcl {

const char* outcome_name(RunOutcome o) {
    switch (o) {
        case RunOutcome::completed: return "completed";
        case RunOutcome::divergence_detected: return "divergence-detected";
        default: return "cfl-violation";
    }
}

Simulator::Simulator(const SimConfig& cfg) : cfg_(cfg) {
    if (cfg.nu <= 0.0) throw invalid_argument_error("Simulator: nu must be positive");
    if (cfg.dt <= 0.0) throw invalid_argument_error("Simulator: dt must be positive");
    if (cfg.horizon < 0.0) throw invalid_argument_error("Simulator: horizon must be >= 0");
    if (cfg.scheme != 1 && cfg.scheme != 2) throw invalid_argument_error("Simulator: scheme must be 1 or 2");

    grid_ = std::make_shared<const ChebGrid>(build_cheb_grid(cfg.n));
    xgrid_ = build_x_grid(cfg.box_length, cfg.m);
    jcut_ = cfg.m / 3;
    beta_ = cfg.scheme == 2 ? 0.5 : 1.0;
    if (cfg.threads > 0) threads_ = cfg.threads;
    else {
        // thread the per-mode solves only when the step is heavy enough
        const long work = static_cast<long>(cfg.n + 1) * (cfg.m / 2);
        threads_ = work >= 16000 ? std::min(4u, std::max(1u, std::thread::hardware_concurrency()))
                                 : 1;
    }

    const int n = cfg.n;
    const int mh = xgrid_.half();
    modes_.resize(mh);
    for (int j = 0; j < mh; ++j) {
        const double k = xgrid_.wavenumber(j);
        Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(n + 1, n + 1) +
                             (beta_ * cfg.dt) * full_mode_operator(*grid_, cfg.nu, k);
        b.row(0).setZero();
        b(0, 0) = 1.0;
        b.row(n).setZero();
        b(n, n) = 1.0;
        modes_[j].implicit_lu.compute(b);
        modes_[j].poisson = std::make_unique<PoissonSolver>(*grid_, k);
        if (j > 0)
            modes_[j].influence = std::make_unique<InfluenceMatrix>(
                influence_matrix(*grid_, cfg.nu, k, cfg.dt, beta_));
    }

    Eigen::MatrixXd bs = Eigen::MatrixXd::Identity(n + 1, n + 1) -
                         (beta_ * cfg.dt * cfg.nu) * grid_->d2;
    bs.row(0).setZero();
    bs(0, 0) = 1.0;
    bs.row(n).setZero();
    bs(n, n) = 1.0;
    shear_lu_.compute(bs);

    bwd_re_.resize(cfg.m, mh);
    bwd_im_.resize(cfg.m, mh);
    for (int p = 0; p < cfg.m; ++p) {
        const double x = cfg.box_length * p / cfg.m;
        for (int j = 0; j < mh; ++j) {
            const double phase = xgrid_.wavenumber(j) * x;
            bwd_re_(p, j) = std::cos(phase);
            bwd_im_(p, j) = std::sin(phase);
        }
    }
}

SimState Simulator::zero_state() const {
    SimState s;
    s.grid = grid_;
    s.xgrid = xgrid_;
    const int rows = cfg_.n + 1, cols = xgrid_.half();
    s.omega.setZero(rows, cols);
    s.theta.setZero(rows, cols);
    s.psi.setZero(rows, cols);
    s.mean_shear.setZero(rows);
    return s;
}

void Simulator::validate(const SimState& s) const {
    if (!s.grid || s.grid->n != cfg_.n || s.xgrid.m != cfg_.m ||
        s.xgrid.box_length != cfg_.box_length)
        throw state_error("Simulator: state grids do not match the configuration");
    if (!s.omega.allFinite() || !s.theta.allFinite() || !s.psi.allFinite() ||
        !s.mean_shear.allFinite())
        throw state_error("Simulator: non-finite state");
    // reality bookkeeping for the stored k = 0 columns
    if (s.theta.col(0).imag().cwiseAbs().maxCoeff() >
            1e-12 * std::max(1.0, s.theta.col(0).cwiseAbs().maxCoeff()) ||
        s.omega.col(0).imag().cwiseAbs().maxCoeff() >
            1e-12 * std::max(1.0, s.omega.col(0).cwiseAbs().maxCoeff()))
        throw state_error("Simulator: k = 0 mode must be real (reality symmetry)");
    if (s.psi.col(0).cwiseAbs().maxCoeff() != 0.0)
        throw state_error("Simulator: k = 0 stream function must be zero");
}

Eigen::MatrixXd Simulator::to_phys(const Eigen::MatrixXcd& modes) const {
    // f(x) = f_0 + 2 Re sum_{j>0} f_j e^{i k_j x}, with f_0 real
    Eigen::MatrixXd pre, pim;
    product_by_columns(modes.real(), bwd_re_.transpose(), pre, threads_);
    product_by_columns(modes.imag(), bwd_im_.transpose(), pim, threads_);
    Eigen::MatrixXd p = 2.0 * (pre - pim);
    p.colwise() -= modes.col(0).real();
    return p;
}

Eigen::MatrixXcd Simulator::to_modes(const Eigen::MatrixXd& phys) const {
    const double inv = 1.0 / cfg_.m;
    Eigen::MatrixXd re, im;
    product_by_columns(phys, bwd_re_, re, threads_);
    product_by_columns(phys, bwd_im_, im, threads_);
    Eigen::MatrixXcd out(phys.rows(), bwd_re_.cols());
    out.real() = inv * re;
    out.imag() = -inv * im;
    return out;
}

void Simulator::dealias_inplace(Eigen::MatrixXcd& modes) const {
    const int cols = static_cast<int>(modes.cols());
    for (int j = jcut_ + 1; j < cols; ++j) modes.col(j).setZero();
}

void Simulator::velocities(const SimState& s, Eigen::MatrixXcd& u1, Eigen::MatrixXcd& u2) const {
    product_by_columns(grid_->d1, s.psi, u1, threads_);
    u2 = s.psi;
    for (int j = 0; j < s.mode_count(); ++j) u2.col(j) *= complex(0.0, -s.wavenumber(j));
    u1.col(0) = s.mean_shear.cast<complex>();
    u2.col(0).setZero();
}

double Simulator::max_speed(const SimState& s) const {
    Eigen::MatrixXcd u1, u2;
    velocities(s, u1, u2);
    const Eigen::MatrixXd p1 = to_phys(u1);
    const Eigen::MatrixXd p2 = to_phys(u2);
    return std::sqrt((p1.array().square() + p2.array().square()).maxCoeff());
}

FluxSet Simulator::nonlinear_fluxes(const SimState& s) const {
    validate(s);
    Eigen::MatrixXcd u1, u2;
    velocities(s, u1, u2);
    const Eigen::MatrixXd pu1 = to_phys(u1);
    const Eigen::MatrixXd pu2 = to_phys(u2);
    const Eigen::MatrixXd pom = to_phys(s.omega);
    const Eigen::MatrixXd pth = to_phys(s.theta);

    FluxSet f;
    f.f1 = to_modes(pu1.cwiseProduct(pom));
    f.f2 = to_modes(pu2.cwiseProduct(pom));
    f.g1 = to_modes(pu1.cwiseProduct(pth));
    f.g2 = to_modes(pu2.cwiseProduct(pth));
    dealias_inplace(f.f1);
    dealias_inplace(f.f2);
    dealias_inplace(f.g1);
    dealias_inplace(f.g2);
    return f;
}

Eigen::VectorXcd Simulator::apply_mode_operator(const SimState& s, const Eigen::MatrixXcd& d2f,
                                                const Eigen::MatrixXcd& f, int j) const {
    const double k = s.wavenumber(j);
    Eigen::VectorXcd av = (-cfg_.nu) * d2f.col(j) + (cfg_.nu * k * k) * f.col(j);
    av.array() += complex(0.0, k) * grid_->nodes.array().cast<complex>() * f.col(j).array();
    return av;
}

SimState Simulator::step(const SimState& s) {
    validate(s);
    const int n = cfg_.n;
    const int mh = s.mode_count();
    const double dt = cfg_.dt;

    Eigen::MatrixXcd u1, u2;
    velocities(s, u1, u2);

    // explicit slot: dealiased fluxes plus the buoyancy term
    Eigen::MatrixXcd nom = Eigen::MatrixXcd::Zero(n + 1, mh);
    Eigen::MatrixXcd nth = Eigen::MatrixXcd::Zero(n + 1, mh);
    Eigen::VectorXd nshear = Eigen::VectorXd::Zero(n + 1);

    if (cfg_.nonlinear) {
        const Eigen::MatrixXd pu1 = to_phys(u1);
        const Eigen::MatrixXd pu2 = to_phys(u2);
        const double umax = std::sqrt((pu1.array().square() + pu2.array().square()).maxCoeff());
        const double dx = cfg_.box_length / cfg_.m;
        if (dt * umax > cfg_.cfl_safety * dx)
            throw step_size_error("imex step: CFL violation (dt * max|u| = " +
                                  std::to_string(dt * umax) + " > " +
                                  std::to_string(cfg_.cfl_safety * dx) + ")");

        const Eigen::MatrixXd pom = to_phys(s.omega);
        const Eigen::MatrixXd pth = to_phys(s.theta);

        Eigen::MatrixXcd f1 = to_modes(pu1.cwiseProduct(pom));
        Eigen::MatrixXcd f2 = to_modes(pu2.cwiseProduct(pom));
        Eigen::MatrixXcd g1 = to_modes(pu1.cwiseProduct(pth));
        Eigen::MatrixXcd g2 = to_modes(pu2.cwiseProduct(pth));
        dealias_inplace(f1);
        dealias_inplace(f2);
        dealias_inplace(g1);
        dealias_inplace(g2);

        Eigen::MatrixXcd df2, dg2;
        product_by_columns(grid_->d1, f2, df2, threads_);
        product_by_columns(grid_->d1, g2, dg2, threads_);
        for (int j = 0; j < mh; ++j) {
            const complex ik(0.0, s.wavenumber(j));
            nom.col(j) = -ik * f1.col(j) - df2.col(j);
            nth.col(j) = -ik * g1.col(j) - dg2.col(j);
        }
        // horizontal mean of u2*u1 drives the shear: du10/dt = nu d2 u10 - d_y (u2 u1)_0
        const Eigen::VectorXd h0 = pu2.cwiseProduct(pu1).rowwise().mean();
        nshear = -(grid_->d1 * h0);
    }
    if (cfg_.buoyancy) {
        for (int j = 1; j < mh; ++j)
            nom.col(j) -= complex(0.0, s.wavenumber(j)) * s.theta.col(j);
    }

    // Adams-Bashforth extrapolation of the explicit slot for the CN scheme
    Eigen::MatrixXcd xom = nom, xth = nth;
    Eigen::VectorXd xshear = nshear;
    if (cfg_.scheme == 2 && have_history_ &&
        std::abs(history_time_ - s.time) < 1e-12 * std::max(1.0, std::abs(s.time))) {
        xom = 1.5 * nom - 0.5 * prev_nom_;
        xth = 1.5 * nth - 0.5 * prev_nth_;
        xshear = 1.5 * nshear - 0.5 * prev_nshear_;
    }

    SimState out = s;
    out.time = s.time + dt;

    // rhs = v - (1-beta) dt A v + dt N, then the Dirichlet-row solve
    Eigen::MatrixXcd d2om, d2th;
    if (beta_ < 1.0) {
        product_by_columns(grid_->d2, s.omega, d2om, threads_);
        product_by_columns(grid_->d2, s.theta, d2th, threads_);
    }
    parallel_for(mh, threads_, [&](std::size_t j) {
        Eigen::VectorXcd rhs_th = s.theta.col(j) + dt * xth.col(j);
        if (beta_ < 1.0)
            rhs_th -= ((1.0 - beta_) * dt) * apply_mode_operator(s, d2th, s.theta, static_cast<int>(j));
        rhs_th(0) = 0.0;
        rhs_th(n) = 0.0;
        Eigen::VectorXcd th = modes_[j].implicit_lu.solve(rhs_th);
        if (j == 0) th = th.real().cast<complex>();
        th(0) = 0.0;
        th(n) = 0.0;
        out.theta.col(j) = th;
    });
    parallel_for(mh - 1, threads_, [&](std::size_t idx) {
        const int j = static_cast<int>(idx) + 1;
        Eigen::VectorXcd rhs_om = s.omega.col(j) + dt * xom.col(j);
        if (beta_ < 1.0) rhs_om -= ((1.0 - beta_) * dt) * apply_mode_operator(s, d2om, s.omega, j);
        rhs_om(0) = 0.0;
        rhs_om(n) = 0.0;
        const Eigen::VectorXcd om_prov = modes_[j].implicit_lu.solve(rhs_om);
        const Eigen::VectorXcd psi_prov =
            modes_[j].poisson->solve(ModeField{s.wavenumber(j), om_prov}).values;
        const InfluenceMatrix& inf = *modes_[j].influence;
        const Eigen::Vector2cd wall(grid_->d1.row(0).dot(psi_prov), grid_->d1.row(n).dot(psi_prov));
        const Eigen::Vector2cd c = -(inf.m_inv * wall);
        out.omega.col(j) = om_prov + c(0) * inf.omega_plus + c(1) * inf.omega_minus;
        out.psi.col(j) = psi_prov + c(0) * inf.psi_plus + c(1) * inf.psi_minus;
    });
    {
        Eigen::VectorXd rhs = s.mean_shear + dt * xshear;
        if (beta_ < 1.0) rhs += ((1.0 - beta_) * dt * cfg_.nu) * (grid_->d2 * s.mean_shear);
        rhs(0) = 0.0;
        rhs(n) = 0.0;
        out.mean_shear = shear_lu_.solve(rhs);
        out.omega.col(0) = (grid_->d1 * out.mean_shear).cast<complex>();
        out.psi.col(0).setZero();
    }

    prev_nom_ = std::move(nom);
    prev_nth_ = std::move(nth);
    prev_nshear_ = std::move(nshear);
    have_history_ = true;
    history_time_ = out.time;
    return out;
}

BoundaryResiduals boundary_residuals(const SimState& s) {
    const ChebGrid& g = *s.grid;
    const int n = g.n;
    // wall values are normalized by the field's norm scale (the largest mode
    // norm): modes at the rounding floor must not dominate the ratio
    double theta_scale = 0.0, psi_scale = 0.0;
    double theta_abs = 0.0, psi_abs = 0.0, dpsi_abs = 0.0;
    for (int j = 0; j < s.mode_count(); ++j) {
        theta_scale = std::max(theta_scale, weighted_l2(s.theta.col(j), g.weights));
        theta_abs = std::max({theta_abs, std::abs(s.theta(0, j)), std::abs(s.theta(n, j))});
        if (j == 0) continue;
        psi_scale = std::max(psi_scale, weighted_l2(s.psi.col(j), g.weights));
        psi_abs = std::max({psi_abs, std::abs(s.psi(0, j)), std::abs(s.psi(n, j))});
        const complex dtop = g.d1.row(0).dot(s.psi.col(j));
        const complex dbot = g.d1.row(n).dot(s.psi.col(j));
        dpsi_abs = std::max({dpsi_abs, std::abs(dtop), std::abs(dbot)});
    }
    BoundaryResiduals r;
    if (theta_scale > 0.0) r.theta = theta_abs / theta_scale;
    if (psi_scale > 0.0) {
        r.psi = psi_abs / psi_scale;
        r.dpsi = dpsi_abs / psi_scale;
    }
    return r;
}

double theta_l2xy(const SimState& s) {
    const ChebGrid& g = *s.grid;
    double tot = 0.0;
    for (int j = 0; j < s.mode_count(); ++j) {
        const double mult = j > 0 ? 2.0 : 1.0;
        const double t = weighted_l2(s.theta.col(j), g.weights);
        tot += mult * t * t;
    }
    return std::sqrt(s.xgrid.dk() * tot);
}

double state_max_speed(const SimState& s) {
    const ChebGrid& g = *s.grid;
    const int mh = s.mode_count();
    const int m = s.xgrid.m;
    double best = 0.0;
    Eigen::MatrixXcd u1 = g.d1 * s.psi;
    u1.col(0) = s.mean_shear.cast<complex>();
    for (int i = 0; i < g.size(); ++i) {
        for (int p = 0; p < m; ++p) {
            const double x = s.xgrid.box_length * p / m;
            double v1 = u1(i, 0).real(), v2 = 0.0;
            for (int j = 1; j < mh; ++j) {
                const double k = s.wavenumber(j);
                const complex e(std::cos(k * x), std::sin(k * x));
                v1 += 2.0 * (u1(i, j) * e).real();
                v2 += 2.0 * (complex(0.0, -k) * s.psi(i, j) * e).real();
            }
            best = std::max(best, v1 * v1 + v2 * v2);
        }
    }
    return std::sqrt(best);
}

ModeNorms instantaneous_norms(const SimState& s, const Eigen::MatrixXcd& u1,
                              const Eigen::MatrixXcd& u2, int j) {
    const ChebGrid& g = *s.grid;
    ModeNorms m;
    double om2 = 0, omw2 = 0, uu2 = 0, th2 = 0;
    for (int i = 0; i < g.size(); ++i) {
        const double w = g.weights(i);
        const double o2 = std::norm(s.omega(i, j));
        const double uu = std::norm(u1(i, j)) + std::norm(u2(i, j));
        om2 += w * o2;
        omw2 += w * (1.0 - std::abs(g.nodes(i))) * o2;
        uu2 += w * uu;
        th2 += w * std::norm(s.theta(i, j));
        m.u_linf = std::max(m.u_linf, uu);
        m.u1_linf = std::max(m.u1_linf, std::norm(u1(i, j)));
    }
    m.om_l2 = std::sqrt(om2);
    m.om_weighted = std::sqrt(omw2);
    m.u_l2 = std::sqrt(uu2);
    m.th_l2 = std::sqrt(th2);
    m.u_linf = std::sqrt(m.u_linf);
    m.u1_linf = std::sqrt(m.u1_linf);
    return m;
}

RunRecord Simulator::simulate(const SimState& initial) {
    validate(initial);
    const auto t_start = std::chrono::steady_clock::now();
    const int mh = xgrid_.half();

    std::vector<double> ks(mh);
    for (int j = 0; j < mh; ++j) ks[j] = xgrid_.wavenumber(j);

    RunRecord rec;
    rec.ledger = EnergyLedger(ks, cfg_.nu, xgrid_.dk());
    have_history_ = false;

    SimState s = initial;
    double prev_theta_l2 = 0.0, prev_theta_max = 0.0;

    // ledger, instantaneous energies, boundary residuals, and the theta-L2
    // monitor run every step; physical-space maxima and the divergence
    // identity are sampled at snapshot times
    auto observe = [&](const SimState& st, double dt_weight, bool snapshot_due) {
        Eigen::MatrixXcd u1, u2;
        velocities(st, u1, u2);
        double inst_eo = 0.0, inst_et = 0.0;
        for (int j = 0; j < mh; ++j) {
            const ModeNorms inst = rec.ledger.update(j, st.omega.col(j), u1.col(j), u2.col(j),
                                                     st.theta.col(j), *grid_, dt_weight);
            const double mult = j > 0 ? 2.0 : 1.0;
            inst_eo += mult * xgrid_.dk() * mode_energy_omega(inst, cfg_.nu, ks[j]);
            inst_et += mult * xgrid_.dk() * mode_energy_theta(inst, cfg_.nu, ks[j]);
        }
        const Aggregates agg = rec.ledger.aggregate(cfg_.c_norm);
        const double inst_total =
            inst_eo + 2.0 * cfg_.c_norm * std::pow(cfg_.nu, -1.0 / 3.0) * inst_et;

        const BoundaryResiduals br = boundary_residuals(st);
        const double th_l2 = theta_l2xy(st);

        rec.peak_e_total = std::max(rec.peak_e_total, agg.e_total);
        rec.max_bres_theta = std::max(rec.max_bres_theta, br.theta);
        rec.max_bres_psi = std::max(rec.max_bres_psi, br.psi);
        rec.max_bres_dpsi = std::max(rec.max_bres_dpsi, br.dpsi);
        if (dt_weight > 0.0 && th_l2 > prev_theta_l2 * (1.0 + 1e-10))
            rec.theta_l2_monotone = false;
        prev_theta_l2 = th_l2;
        rec.final_inst_e_total = inst_total;

        if (snapshot_due) {
            // divergence identity i k u1 + d_y u2 = 0
            Eigen::MatrixXcd du2;
            product_by_columns(grid_->d1, u2, du2, threads_);
            double dres = 0.0, uscale = 0.0;
            for (int j = 0; j < mh; ++j) {
                const complex ik(0.0, ks[j]);
                dres = std::max(dres, (ik * u1.col(j) + du2.col(j)).cwiseAbs().maxCoeff());
                uscale = std::max(
                    {uscale, u1.col(j).cwiseAbs().maxCoeff(), u2.col(j).cwiseAbs().maxCoeff()});
            }
            const double div_rel = uscale > 0.0 ? dres / uscale : 0.0;
            const Eigen::MatrixXd pu1 = to_phys(u1);
            const Eigen::MatrixXd pu2 = to_phys(u2);
            const double th_max = to_phys(st.theta).cwiseAbs().maxCoeff();

            Snapshot snap;
            snap.t = st.time;
            snap.e_omega = agg.e_omega;
            snap.e_theta = agg.e_theta;
            snap.e_total = agg.e_total;
            snap.inst_e_total = inst_total;
            snap.theta_l2xy = th_l2;
            snap.max_theta_phys = th_max;
            snap.bres_theta = br.theta;
            snap.bres_psi = br.psi;
            snap.bres_dpsi = br.dpsi;
            snap.divergence_residual = div_rel;
            snap.max_speed = std::sqrt((pu1.array().square() + pu2.array().square()).maxCoeff());

            rec.max_divergence_residual = std::max(rec.max_divergence_residual, div_rel);
            if (dt_weight > 0.0 && th_max > prev_theta_max * (1.0 + 1e-8))
                rec.theta_max_monotone = false;
            prev_theta_max = th_max;

            rec.snapshots.push_back(snap);
            if (cfg_.mode_energy_series) {
                std::vector<std::pair<double, double>> row(mh);
                for (int j = 0; j < mh; ++j)
                    row[j] = {rec.ledger.mode_energy_omega(j), rec.ledger.mode_energy_theta(j)};
                rec.mode_energies.push_back(std::move(row));
            }
        }
        return agg.e_total;
    };

    rec.initial_e_total = observe(s, 0.0, true);
    rec.initial_inst_e_total = rec.final_inst_e_total;

    const int nsteps = static_cast<int>(std::round(cfg_.horizon / cfg_.dt));
    for (int i = 0; i < nsteps; ++i) {
        try {
            s = step(s);
        } catch (const step_size_error&) {
            rec.outcome = RunOutcome::cfl_violation;
            break;
        }
        ++rec.steps;
        if (!s.omega.allFinite() || !s.theta.allFinite() || !s.psi.allFinite()) {
            rec.outcome = RunOutcome::divergence_detected;
            break;
        }
        const bool snapshot_due = (i + 1 == nsteps) || (rec.steps % cfg_.snapshot_stride == 0);
        const double etot = observe(s, cfg_.dt, snapshot_due);
        if (!std::isfinite(etot) ||
            (rec.initial_e_total > 0.0 && etot > cfg_.ceiling_factor * rec.initial_e_total)) {
            rec.outcome = RunOutcome::divergence_detected;
            break;
        }
    }

    rec.final_state = std::move(s);
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rec;
}

}  // namespace bcl

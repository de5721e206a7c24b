#include "bclab/resolvent.hpp"

#include <cmath>
#include <random>

#include "bclab/errors.hpp"

namespace bcl {

double sigma_min_weighted(const OperatorMatrix& a, double lambda) {
    if (!std::isfinite(lambda)) throw invalid_argument_error("sigma_min_weighted: lambda must be finite");
    const int m = a.size();
    const Eigen::VectorXd ws = a.wi.array().sqrt();
    Eigen::MatrixXcd b = a.entries;
    b.diagonal().array() -= complex(0.0, lambda);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) b(i, j) *= ws(i) / ws(j);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(b);
    if (svd.info() != Eigen::Success) throw numerical_error("sigma_min_weighted: SVD failed");
    return svd.singularValues()(m - 1);
}

Eigen::VectorXd default_lambda_grid(double k, int points) {
    const double span = std::max(2.0, 1.5 * std::abs(k));
    int np = std::max(points, static_cast<int>(std::ceil(2.0 * span / 0.25)) + 1);
    return Eigen::VectorXd::LinSpaced(np, -span, span);
}

ResolventSweep compute_phi(const OperatorMatrix& a, const Eigen::VectorXd& lambda_grid) {
    if (lambda_grid.size() == 0) throw invalid_argument_error("compute_phi: empty lambda grid");
    const double span = 1.5 * std::abs(a.k);
    if (lambda_grid.maxCoeff() < span || lambda_grid.minCoeff() > -span)
        throw invalid_argument_error("compute_phi: grid must cover [-1.5|k|, 1.5|k|]");
    ResolventSweep sweep;
    sweep.nu = a.nu;
    sweep.k = a.k;
    sweep.lambda_grid = lambda_grid;
    sweep.sigma_min_values.resize(lambda_grid.size());
    int best = 0;
    for (Eigen::Index i = 0; i < lambda_grid.size(); ++i) {
        sweep.sigma_min_values(i) = sigma_min_weighted(a, lambda_grid(i));
        if (sweep.sigma_min_values(i) < sweep.sigma_min_values(best)) best = static_cast<int>(i);
    }
    sweep.phi = sweep.sigma_min_values(best);
    sweep.lambda_star = lambda_grid(best);
    return sweep;
}

ResolventSweep compute_phi_refined(const OperatorMatrix& a, int refine_rounds, int refine_points) {
    ResolventSweep sweep = compute_phi(a, default_lambda_grid(a.k));
    double spacing = sweep.lambda_grid(1) - sweep.lambda_grid(0);
    double phi = sweep.phi;
    double lam = sweep.lambda_star;
    for (int r = 0; r < refine_rounds; ++r) {
        const Eigen::VectorXd local =
            Eigen::VectorXd::LinSpaced(refine_points, lam - spacing, lam + spacing);
        for (Eigen::Index i = 0; i < local.size(); ++i) {
            const double s = sigma_min_weighted(a, local(i));
            if (s < phi) {
                phi = s;
                lam = local(i);
            }
        }
        spacing = 2.0 * spacing / (refine_points - 1);
    }
    sweep.phi = phi;
    sweep.lambda_star = lam;
    return sweep;
}

std::vector<Eigen::VectorXcd> make_forcing_family(const ChebGrid& g, double nu, double k,
                                                  double lambda, int count, std::uint64_t seed) {
    if (count < 13) throw invalid_argument_error("make_forcing_family: need count >= 13");
    const int n = g.n;
    std::vector<Eigen::VectorXcd> out;
    out.reserve(count);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;

    const int n_random = count - 12;
    for (int s = 0; s < n_random; ++s) {
        Eigen::VectorXcd f = Eigen::VectorXcd::Zero(n + 1);
        for (int m = 1; m <= 12; ++m) {
            const complex c(gauss(rng), gauss(rng));
            for (int j = 0; j <= n; ++j) f(j) += c * std::sin(m * M_PI * (g.nodes(j) + 1.0) / 2.0);
        }
        out.push_back(std::move(f));
    }
    // wall-layer profiles, widths around nu^{1/2}
    const double bl = std::sqrt(nu);
    for (double c : {1.0, 2.0, 4.0}) {
        Eigen::VectorXcd f(n + 1), h(n + 1);
        for (int j = 0; j <= n; ++j) {
            const double d = (1.0 - std::abs(g.nodes(j))) / (c * bl);
            f(j) = std::exp(-d);
            h(j) = d * std::exp(-d);
        }
        out.push_back(std::move(f));
        out.push_back(std::move(h));
    }
    // critical-layer bumps at y = lambda, widths around (nu/|k|)^{1/3}
    const double cl = std::cbrt(nu / std::max(std::abs(k), 1e-12));
    const double yc = std::clamp(lambda, -1.0, 1.0);
    for (double c : {0.5, 1.0, 2.0}) {
        Eigen::VectorXcd f(n + 1), h(n + 1);
        for (int j = 0; j <= n; ++j) {
            const double z = (g.nodes(j) - yc) / (c * cl);
            const double envelope = 1.0 - g.nodes(j) * g.nodes(j);
            f(j) = envelope * std::exp(-0.5 * z * z);
            h(j) = complex(0.0, 1.0) * envelope * z * std::exp(-0.5 * z * z);
        }
        out.push_back(std::move(f));
        out.push_back(std::move(h));
    }
    return out;
}

namespace {

Eigen::MatrixXcd critical_layer_operator(const ChebGrid& g, double nu, double k, double lambda,
                                         double eps_shift) {
    // -nu (d2 - k^2) + i k (y - lambda) - eps nu^{1/3} |k|^{2/3}
    Eigen::MatrixXcd a = full_mode_operator(g, nu, k);
    a.diagonal().array() -= complex(0.0, k * lambda);
    a.diagonal().array() -= eps_shift * std::cbrt(nu) * std::pow(std::abs(k), 2.0 / 3.0);
    return a;
}

}  // namespace

ResolventConstantReport verify_prop22_l2h2(const ChebGrid& g, double nu, double k, double lambda,
                                           std::span<const Eigen::VectorXcd> forcings,
                                           double eps_shift) {
    const int n = g.n;
    const Eigen::MatrixXcd a = critical_layer_operator(g, nu, k, lambda, eps_shift);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a.block(1, 1, n - 1, n - 1));
    const Eigen::VectorXd wi = g.interior_weights();

    ResolventConstantReport rep{nu, k, lambda};
    for (const auto& F : forcings) {
        if (F.size() != g.size()) throw dimension_error("verify_prop22_l2h2: bad forcing length");
        const double fn = weighted_l2(F.segment(1, n - 1), wi);
        if (fn == 0.0) throw invalid_argument_error("verify_prop22_l2h2: zero forcing sample");
        Eigen::VectorXcd f = Eigen::VectorXcd::Zero(n + 1);
        f.segment(1, n - 1) = lu.solve(F.segment(1, n - 1));
        if (!f.allFinite()) throw numerical_error("verify_prop22_l2h2: solve failed");
        const Eigen::VectorXcd dyf = g.d1 * f;
        const Eigen::VectorXcd yf = (g.nodes.array() - lambda).cast<complex>().array() * f.array();
        const double lhs = std::pow(nu, 2.0 / 3.0) * std::pow(std::abs(k), 1.0 / 3.0) *
                               weighted_l2(dyf, g.weights) +
                           std::cbrt(nu * k * k) * weighted_l2(f, g.weights) +
                           std::abs(k) * weighted_l2(yf, g.weights);
        rep.ratio_l2h2 = std::max(rep.ratio_l2h2, lhs / fn);
        ++rep.sample_count;
    }
    return rep;
}

ResolventConstantReport verify_prop22_hm1h1(const ChebGrid& g, double nu, double k, double lambda,
                                            std::span<const Eigen::VectorXcd> g_profiles,
                                            double eps_shift) {
    const int n = g.n;
    const Eigen::MatrixXcd a = critical_layer_operator(g, nu, k, lambda, eps_shift);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a.block(1, 1, n - 1, n - 1));

    ResolventConstantReport rep{nu, k, lambda};
    for (const auto& G : g_profiles) {
        if (G.size() != g.size()) throw dimension_error("verify_prop22_hm1h1: bad profile length");
        const Eigen::VectorXcd F = g.d1 * G;
        // a constant profile differentiates to rounding noise; reject it
        if (weighted_l2(F, g.weights) <= 1e-12 * std::max(1.0, weighted_l2(G, g.weights)))
            throw invalid_argument_error("verify_prop22_hm1h1: profile gives zero forcing");
        const double fm = h_minus1_norm(ModeField{k, F}, g);
        if (fm == 0.0) throw invalid_argument_error("verify_prop22_hm1h1: profile gives zero forcing");
        Eigen::VectorXcd f = Eigen::VectorXcd::Zero(n + 1);
        f.segment(1, n - 1) = lu.solve(F.segment(1, n - 1));
        if (!f.allFinite()) throw numerical_error("verify_prop22_hm1h1: solve failed");
        const Eigen::VectorXcd dyf = g.d1 * f;
        const double lhs = nu * weighted_l2(dyf, g.weights) +
                           std::pow(nu, 2.0 / 3.0) * std::pow(std::abs(k), 1.0 / 3.0) *
                               weighted_l2(f, g.weights);
        rep.ratio_hm1h1 = std::max(rep.ratio_hm1h1, lhs / fm);
        ++rep.sample_count;
    }
    return rep;
}

InhomogeneousRateReport inhomogeneous_rate_check(const ChebGrid& g, double nu, double k,
                                                 const ForcingSeries& f, double horizon,
                                                 double dt, double slack) {
    if (dt <= 0.0 || horizon <= 0.0)
        throw invalid_argument_error("inhomogeneous_rate_check: need positive dt and horizon");
    const int n = g.n;
    const Eigen::MatrixXcd a = full_mode_operator(g, nu, k).block(1, 1, n - 1, n - 1);
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n - 1, n - 1);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(eye + (0.5 * dt) * a);
    const Eigen::MatrixXcd rhs_op = eye - (0.5 * dt) * a;
    const Eigen::VectorXd wi = g.interior_weights();

    Eigen::VectorXcd theta = Eigen::VectorXcd::Zero(n - 1);
    double sup_theta = 0.0, int_theta = 0.0, int_g1 = 0.0, int_g2 = 0.0;
    const int steps = static_cast<int>(std::round(horizon / dt));
    for (int s = 0; s < steps; ++s) {
        const double tm = (s + 0.5) * dt;
        const Eigen::VectorXcd g1 = f.g1(tm);
        const Eigen::VectorXcd g2 = f.g2(tm);
        if (g1.size() != g.size() || g2.size() != g.size())
            throw dimension_error("inhomogeneous_rate_check: forcing length mismatch");
        Eigen::VectorXcd force = complex(0.0, -k) * g1 - g.d1 * g2;
        theta = lu.solve((rhs_op * theta + dt * force.segment(1, n - 1)).eval());
        if (!theta.allFinite()) throw step_size_error("inhomogeneous_rate_check: unstable step");
        const double tn = weighted_l2(theta, wi);
        sup_theta = std::max(sup_theta, tn);
        int_theta += dt * tn * tn;
        const double g1n = weighted_l2(g1, g.weights);
        const double g2n = weighted_l2(g2, g.weights);
        int_g1 += dt * g1n * g1n;
        int_g2 += dt * g2n * g2n;
    }

    InhomogeneousRateReport rep;
    rep.nu = nu;
    rep.k = k;
    rep.low_frequency_branch = std::abs(k) < 10.0 * nu;
    const double l2t_weight = rep.low_frequency_branch ? std::sqrt(nu)
                                                       : std::pow(nu * k * k, 1.0 / 6.0);
    rep.lhs = sup_theta + l2t_weight * std::sqrt(int_theta);
    rep.rhs = std::pow(nu, -1.0 / 6.0) * std::pow(std::abs(k), 2.0 / 3.0) * std::sqrt(int_g1) +
              std::pow(nu, -0.5) * std::sqrt(int_g2);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    rep.violation = rep.ratio > slack;
    return rep;
}

}  // namespace bcl

#include "bclab/semigroup.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "bclab/errors.hpp"

namespace bcl {

namespace {

double weighted_opnorm(const Eigen::MatrixXcd& m, const Eigen::VectorXd& wi) {
    const Eigen::VectorXd ws = wi.array().sqrt();
    Eigen::MatrixXcd b = m;
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) *= ws(i) / ws(j);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(b);
    if (svd.info() != Eigen::Success) throw numerical_error("weighted_opnorm: SVD failed");
    return svd.singularValues()(0);
}

/// Spectral factorization of -A with a conditioning check; empty optional
/// when the eigenbasis is too ill-conditioned to trust.
struct EigenFactors {
    Eigen::MatrixXcd v, v_inv;
    Eigen::VectorXcd eigs;   // of A
    bool usable = false;
};

EigenFactors eigen_factors(const OperatorMatrix& a, double cond_limit = 1e8) {
    EigenFactors f;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a.entries);
    if (es.info() != Eigen::Success) return f;
    f.v = es.eigenvectors();
    f.eigs = es.eigenvalues();
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(f.v);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= 0.0 || s(0) / s(s.size() - 1) > cond_limit) return f;
    f.v_inv = f.v.partialPivLu().inverse();
    f.usable = true;
    return f;
}

Eigen::MatrixXcd exp_from_factors(const EigenFactors& f, double t) {
    Eigen::VectorXcd d(f.eigs.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::exp(-f.eigs(i) * t);
    return f.v * d.asDiagonal() * f.v_inv;
}

}  // namespace

double semigroup_norm(const OperatorMatrix& a, double t) {
    if (t < 0.0) throw invalid_argument_error("semigroup_norm: t must be >= 0");
    if (t == 0.0) return 1.0;
    const EigenFactors f = eigen_factors(a);
    Eigen::MatrixXcd e;
    if (f.usable) {
        e = exp_from_factors(f, t);
    } else {
        e = ((-t) * a.entries).exp();
    }
    if (!e.allFinite()) throw numerical_error("semigroup_norm: exponential overflow");
    return weighted_opnorm(e, a.wi);
}

DecayCurve semigroup_curve(const OperatorMatrix& a, const Eigen::VectorXd& times) {
    if (times.size() < 2 || times(0) != 0.0)
        throw invalid_argument_error("semigroup_curve: grid must start at 0 with >= 2 points");
    const double dt = times(1) - times(0);
    for (Eigen::Index i = 1; i < times.size(); ++i)
        if (std::abs(times(i) - times(i - 1) - dt) > 1e-12 * std::max(1.0, dt))
            throw invalid_argument_error("semigroup_curve: grid must be uniform");

    DecayCurve curve;
    curve.nu = a.nu;
    curve.k = a.k;
    curve.times = times;
    curve.norms.resize(times.size());
    curve.norms(0) = 1.0;

    const EigenFactors f = eigen_factors(a);
    if (f.usable) {
        for (Eigen::Index i = 1; i < times.size(); ++i)
            curve.norms(i) = weighted_opnorm(exp_from_factors(f, times(i)), a.wi);
    } else {
        const Eigen::MatrixXcd estep = ((-dt) * a.entries).exp();
        Eigen::MatrixXcd acc = estep;
        for (Eigen::Index i = 1; i < times.size(); ++i) {
            if (!acc.allFinite()) throw numerical_error("semigroup_curve: exponential overflow");
            curve.norms(i) = weighted_opnorm(acc, a.wi);
            if (i + 1 < times.size()) acc = (acc * estep).eval();
        }
    }
    return curve;
}

std::vector<ModeField> evolve_homogeneous(const OperatorMatrix& a, const ModeField& theta_in,
                                          const Eigen::VectorXd& t_grid, double dt) {
    if (dt <= 0.0) throw step_size_error("evolve_homogeneous: dt must be positive");
    const ChebGrid& g = *a.grid;
    if (theta_in.values.size() != g.size())
        throw dimension_error("evolve_homogeneous: field/grid length mismatch");
    const double nrm = l2_norm(theta_in, g);
    if (std::abs(theta_in.values(0)) > 1e-10 * std::max(nrm, 1e-300) ||
        std::abs(theta_in.values(g.n)) > 1e-10 * std::max(nrm, 1e-300))
        throw invalid_argument_error("evolve_homogeneous: initial data violates Dirichlet condition");

    const int m = a.size();
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m, m);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(eye + (0.5 * dt) * a.entries);
    const Eigen::MatrixXcd rhs_op = eye - (0.5 * dt) * a.entries;

    std::vector<ModeField> out;
    out.reserve(t_grid.size());
    Eigen::VectorXcd theta = theta_in.values.segment(1, m);
    double prev_norm = weighted_l2(theta, a.wi);
    int step = 0;
    for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid(i);
        if (t < 0.0) throw invalid_argument_error("evolve_homogeneous: negative grid time");
        const double nsteps_d = t / dt;
        const int nsteps = static_cast<int>(std::round(nsteps_d));
        if (std::abs(nsteps_d - nsteps) > 1e-8)
            throw invalid_argument_error("evolve_homogeneous: grid times must be multiples of dt");
        for (; step < nsteps; ++step) {
            theta = lu.solve((rhs_op * theta).eval());
            const double cur = weighted_l2(theta, a.wi);
            if (cur > prev_norm * (1.0 + 1e-12))
                throw step_size_error("evolve_homogeneous: norm grew, dt too large");
            prev_norm = cur;
        }
        ModeField snap{a.k, Eigen::VectorXcd::Zero(g.size())};
        snap.values.segment(1, m) = theta;
        out.push_back(std::move(snap));
    }
    return out;
}

std::pair<double, double> fit_decay(DecayCurve& curve, double t0, double t1) {
    std::vector<double> ts, ls;
    for (Eigen::Index i = 0; i < curve.times.size(); ++i) {
        const double t = curve.times(i);
        if (t < t0 || t > t1) continue;
        if (curve.norms(i) <= 0.0)
            throw invalid_argument_error("fit_decay: nonpositive norm in window");
        ts.push_back(t);
        ls.push_back(std::log(curve.norms(i)));
    }
    if (ts.size() < 3) throw invalid_argument_error("fit_decay: fewer than 3 points in window");
    double st = 0, sl = 0, stt = 0, stl = 0;
    const double n = static_cast<double>(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sl += ls[i];
        stt += ts[i] * ts[i];
        stl += ts[i] * ls[i];
    }
    const double slope = (n * stl - st * sl) / (n * stt - st * st);
    const double intercept = (sl - slope * st) / n;
    curve.fitted_rate = -slope;
    curve.fitted_prefactor = std::exp(intercept);
    return {curve.fitted_rate, curve.fitted_prefactor};
}

}  // namespace bcl

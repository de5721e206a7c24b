#include "bclab/operators.hpp"

#include <cmath>

#include "bclab/errors.hpp"

namespace bcl {

Eigen::MatrixXcd full_mode_operator(const ChebGrid& g, double nu, double k) {
    if (nu <= 0.0) throw invalid_argument_error("mode operator: nu must be positive");
    const int n = g.n;
    Eigen::MatrixXcd a = (-nu) * g.d2.cast<complex>();
    a.diagonal().array() += nu * k * k;
    for (int i = 0; i <= n; ++i) a(i, i) += complex(0.0, k * g.nodes(i));
    return a;
}

OperatorMatrix assemble_mode_operator(const ChebGrid& g, double nu, double k) {
    const Eigen::MatrixXcd a = full_mode_operator(g, nu, k);
    OperatorMatrix op;
    op.entries = a.block(1, 1, g.n - 1, g.n - 1);
    op.nu = nu;
    op.k = k;
    op.grid = &g;
    op.wi = g.interior_weights();
    return op;
}

PoissonSolver::PoissonSolver(const ChebGrid& g, double k) : grid_(&g), k_(k) {
    const int n = g.n;
    Eigen::MatrixXcd p = g.d2.cast<complex>();
    p.diagonal().array() -= k * k;
    p.row(0).setZero();
    p(0, 0) = 1.0;
    p.row(n).setZero();
    p(n, n) = 1.0;
    lu_.compute(p);
}

ModeField PoissonSolver::solve(const ModeField& omega) const {
    if (omega.values.size() != grid_->size())
        throw dimension_error("PoissonSolver::solve: field/grid length mismatch");
    Eigen::VectorXcd rhs = omega.values;
    rhs(0) = 0.0;
    rhs(grid_->n) = 0.0;
    Eigen::VectorXcd psi = lu_.solve(rhs);
    // the boundary rows are identities; pin the imposed values exactly
    psi(0) = 0.0;
    psi(grid_->n) = 0.0;
    return ModeField{omega.k, std::move(psi)};
}

std::pair<ModeField, ModeField> velocity_from_stream(const ModeField& psi, const ChebGrid& g) {
    if (psi.values.size() != g.size())
        throw dimension_error("velocity_from_stream: field/grid length mismatch");
    ModeField u1{psi.k, g.d1 * psi.values};
    ModeField u2{psi.k, complex(0.0, -psi.k) * psi.values};
    return {std::move(u1), std::move(u2)};
}

InfluenceMatrix influence_matrix(const ChebGrid& g, double nu, double k, double dt,
                                 double implicit_weight) {
    if (k == 0.0) throw invalid_argument_error("influence_matrix: k = 0 has no stream-function closure");
    if (dt <= 0.0) throw invalid_argument_error("influence_matrix: dt must be positive");
    const int n = g.n;

    Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(n + 1, n + 1) +
                         (implicit_weight * dt) * full_mode_operator(g, nu, k);
    b.row(0).setZero();
    b(0, 0) = 1.0;
    b.row(n).setZero();
    b(n, n) = 1.0;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(b);

    PoissonSolver poisson(g, k);

    InfluenceMatrix inf;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n + 1);
    rhs(0) = 1.0;
    inf.omega_plus = lu.solve(rhs);
    rhs(0) = 0.0;
    rhs(n) = 1.0;
    inf.omega_minus = lu.solve(rhs);

    inf.psi_plus = poisson.solve(ModeField{k, inf.omega_plus}).values;
    inf.psi_minus = poisson.solve(ModeField{k, inf.omega_minus}).values;

    const Eigen::VectorXcd dpp = g.d1 * inf.psi_plus;
    const Eigen::VectorXcd dpm = g.d1 * inf.psi_minus;
    inf.m << dpp(0), dpm(0), dpp(n), dpm(n);

    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(inf.m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues()(1);
    const double smax = svd.singularValues()(0);
    inf.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!std::isfinite(inf.condition) || smin == 0.0)
        throw numerical_error("influence_matrix: singular 2x2 closure (cond = " +
                              std::to_string(inf.condition) + ")");
    inf.m_inv = inf.m.inverse();
    return inf;
}

}  // namespace bcl

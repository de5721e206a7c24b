#pragma once

#include <Eigen/Dense>

#include "bclab/cheb.hpp"
#include "bclab/spectral.hpp"

namespace bcl {

/// Interior discretization of A = -nu*(d_y^2 - k^2) + i*k*y with the
/// Dirichlet rows at y = +-1 eliminated. Norms of interior vectors are
/// measured against the interior Clenshaw-Curtis weights of `grid`.
struct OperatorMatrix {
    Eigen::MatrixXcd entries;   // (n-1) x (n-1)
    double nu = 0.0;
    double k = 0.0;
    const ChebGrid* grid = nullptr;   // weight_ref
    Eigen::VectorXd wi;               // interior quadrature weights

    int size() const { return static_cast<int>(entries.rows()); }
};

OperatorMatrix assemble_mode_operator(const ChebGrid& g, double nu, double k);

/// Full (n+1)-size operator without boundary treatment (all rows).
Eigen::MatrixXcd full_mode_operator(const ChebGrid& g, double nu, double k);

/// Factored Dirichlet solver for (d_y^2 - k^2) psi = omega, psi(+-1) = 0.
class PoissonSolver {
  public:
    PoissonSolver(const ChebGrid& g, double k);
    /// psi with (d_y^2 - k^2) psi = omega at interior nodes, psi(+-1) = 0.
    ModeField solve(const ModeField& omega) const;
    double k() const { return k_; }

  private:
    const ChebGrid* grid_;
    double k_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

/// u = (d_y psi, -i k psi). The discrete divergence i k u1 + d_y u2
/// cancels to rounding by construction.
std::pair<ModeField, ModeField> velocity_from_stream(const ModeField& psi, const ChebGrid& g);

/// No-slip closure for one implicit step (I + beta*dt*A) omega = rhs.
///
/// The two response columns are the homogeneous solutions with trial
/// boundary vorticity (1,0) and (0,1); m maps trial boundary values
/// (omega(+1), omega(-1)) to the resulting (d_y psi(+1), d_y psi(-1)).
/// Adding m_inv-weighted responses to a provisional solution zeroes the
/// wall values of d_y psi exactly.
struct InfluenceMatrix {
    Eigen::Matrix2cd m;
    Eigen::Matrix2cd m_inv;
    double condition = 0.0;
    Eigen::VectorXcd omega_plus, omega_minus;   // responses, full length n+1
    Eigen::VectorXcd psi_plus, psi_minus;
};

InfluenceMatrix influence_matrix(const ChebGrid& g, double nu, double k, double dt,
                                 double implicit_weight = 1.0);

}  // namespace bcl

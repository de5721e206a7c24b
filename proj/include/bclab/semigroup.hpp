#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bclab/operators.hpp"

namespace bcl {

/// ||e^{-At}|| in the weighted norm, sampled on a time grid.
struct DecayCurve {
    double nu = 0.0, k = 0.0;
    Eigen::VectorXd times;
    Eigen::VectorXd norms;
    double fitted_rate = 0.0;
    double fitted_prefactor = 0.0;
};

/// Largest weighted singular value of e^{-At}. Uses eigendecomposition when
/// the eigenbasis is well conditioned (< 1e8), scaling-and-squaring otherwise.
double semigroup_norm(const OperatorMatrix& a, double t);

/// Norm curve on a uniform, increasing time grid starting at 0.
DecayCurve semigroup_curve(const OperatorMatrix& a, const Eigen::VectorXd& times);

/// Crank-Nicolson trajectory of the homogeneous mode equation; the initial
/// field must satisfy the Dirichlet condition. Returns the state at each
/// requested grid time (grid times must be multiples of dt).
std::vector<ModeField> evolve_homogeneous(const OperatorMatrix& a, const ModeField& theta_in,
                                          const Eigen::VectorXd& t_grid, double dt);

/// Least-squares fit of log(norm) over [t0, t1]; fills the curve's fitted
/// fields and returns (rate, prefactor). Needs at least 3 points in window.
std::pair<double, double> fit_decay(DecayCurve& curve, double t0, double t1);

}  // namespace bcl

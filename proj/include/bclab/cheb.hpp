#pragma once

#include <Eigen/Dense>

namespace bcl {

/// Chebyshev-Gauss-Lobatto collocation on [-1,1].
///
/// nodes[j] = cos(j*pi/n), so nodes[0] = 1 and nodes[n] = -1 (descending).
/// d1 is the standard collocation differentiation matrix with the
/// negated-row-sum diagonal; d2 = d1*d1. weights are Clenshaw-Curtis,
/// sharing the nodes so that collocation and quadrature live on one grid.
struct ChebGrid {
    int n = 0;                 // polynomial degree; n+1 nodes
    Eigen::VectorXd nodes;     // length n+1
    Eigen::MatrixXd d1;        // (n+1) x (n+1)
    Eigen::MatrixXd d2;
    Eigen::VectorXd weights;   // nonnegative, sums to 2

    int size() const { return n + 1; }
    /// Quadrature weights restricted to interior nodes 1..n-1.
    Eigen::VectorXd interior_weights() const { return weights.segment(1, n - 1); }
};

/// Build the collocation grid. Requires n >= 4.
ChebGrid build_cheb_grid(int n);

}  // namespace bcl

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bclab/cheb.hpp"

namespace bcl {

using complex = std::complex<double>;

/// One horizontal Fourier mode: samples of a complex function of y at the
/// collocation nodes, tagged with its wavenumber.
struct ModeField {
    double k = 0.0;
    Eigen::VectorXcd values;
};

/// Truncated horizontal wavenumber grid for a periodic box of length Lx:
/// k_j = 2*pi*j/Lx for j in [-m/2, m/2). m must be even.
struct XGrid {
    double box_length = 0.0;
    int m = 0;

    double dk() const { return 2.0 * M_PI / box_length; }
    int half() const { return m / 2; }
    double wavenumber(int j) const { return dk() * j; }
    /// All wavenumbers, j = -m/2 .. m/2-1.
    std::vector<double> wavenumbers() const;
};

XGrid build_x_grid(double box_length, int m);

/// Quadrature L2 norm sqrt(sum_j w_j |f_j|^2).
double l2_norm(const ModeField& f, const ChebGrid& g);
double weighted_l2(const Eigen::VectorXcd& v, const Eigen::VectorXd& w);

/// Dual H^{-1} norm on [-1,1]: solve (1 - d_y^2) u = f with u(+-1) = 0 and
/// return sqrt(Re<f, u>_w). Contracts the L2 norm.
double h_minus1_norm(const ModeField& f, const ChebGrid& g);

/// |k|^s multiplier for fractional horizontal derivatives; 1 when s = 0.
double frac_x_weight(double k, double s);

// Convention for x-aggregated norms (fixed here once, tested for Parseval
// consistency): the wavenumber measure is dk, i.e.
//   ||F||^2 = dk * sum_k mult(k) * ||f_k||^2_{L2_y},
// where modes are stored for k >= 0 only and mult = 2 for k > 0 (reality).
// The matching physical-space integral over one period is scaled by dk/Lx.

/// Discrete H^{y_order} norm with optional |k|^{x_frac} multiplier:
/// each x-derivative contributes |k|, each y-derivative applies d1,
/// all mixed derivatives of total order <= y_order are summed.
/// `modes` holds the k >= 0 representatives.
double sobolev_norm(std::span<const ModeField> modes, const XGrid& xg, const ChebGrid& g,
                    int y_order, double x_frac);

/// Same norm for a two-component (vector) field.
double sobolev_norm2(std::span<const ModeField> comp1, std::span<const ModeField> comp2,
                     const XGrid& xg, const ChebGrid& g, int y_order, double x_frac);

}  // namespace bcl

#include "bclab/spectral.hpp"

#include <cmath>

#include "bclab/errors.hpp"

namespace bcl {

XGrid build_x_grid(double box_length, int m) {
    if (box_length <= 0.0) throw invalid_argument_error("build_x_grid: box_length must be positive");
    if (m < 2 || m % 2 != 0) throw invalid_argument_error("build_x_grid: m must be even and >= 2");
    return XGrid{box_length, m};
}

std::vector<double> XGrid::wavenumbers() const {
    std::vector<double> ks(m);
    for (int j = 0; j < m; ++j) ks[j] = dk() * (j - m / 2);
    return ks;
}

double weighted_l2(const Eigen::VectorXcd& v, const Eigen::VectorXd& w) {
    if (v.size() != w.size()) throw dimension_error("weighted_l2: length mismatch");
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += w(i) * std::norm(v(i));
    return std::sqrt(s);
}

double l2_norm(const ModeField& f, const ChebGrid& g) {
    if (f.values.size() != g.size()) throw dimension_error("l2_norm: field/grid length mismatch");
    return weighted_l2(f.values, g.weights);
}

double h_minus1_norm(const ModeField& f, const ChebGrid& g) {
    if (f.values.size() != g.size()) throw dimension_error("h_minus1_norm: field/grid length mismatch");
    const int n = g.n;
    // (1 - d2) with Dirichlet rows; interior solve is enough since u(+-1)=0
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n - 1, n - 1) - g.d2.block(1, 1, n - 1, n - 1);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(H);
    if (lu.determinant() == 0.0) throw numerical_error("h_minus1_norm: singular Helmholtz solve");
    Eigen::VectorXcd ui = lu.solve(f.values.segment(1, n - 1));
    double s = 0.0;
    for (int i = 0; i < n - 1; ++i) s += g.weights(i + 1) * (std::conj(f.values(i + 1)) * ui(i)).real();
    return std::sqrt(std::max(s, 0.0));
}

double frac_x_weight(double k, double s) {
    if (s < 0.0) throw invalid_argument_error("frac_x_weight: s must be >= 0");
    if (s == 0.0) return 1.0;
    return std::pow(std::abs(k), s);
}

namespace {

double sobolev_sq_one(const ModeField& f, const ChebGrid& g, int y_order, double x_frac) {
    const double kf = frac_x_weight(f.k, x_frac);
    double s = 0.0;
    Eigen::VectorXcd dy = f.values;
    for (int b = 0; b <= y_order; ++b) {
        if (b > 0) dy = (g.d1 * dy).eval();
        double t = weighted_l2(dy, g.weights);
        t *= t;
        // x-derivatives of remaining order a = 0 .. y_order - b
        double kpow = 1.0;
        for (int a = 0; a <= y_order - b; ++a) {
            s += kpow * t;
            kpow *= f.k * f.k;
        }
    }
    return kf * kf * s;
}

}  // namespace

double sobolev_norm(std::span<const ModeField> modes, const XGrid& xg, const ChebGrid& g,
                    int y_order, double x_frac) {
    if (y_order < 0 || y_order > 2) throw invalid_argument_error("sobolev_norm: y_order must be 0, 1, or 2");
    if (x_frac < 0.0) throw invalid_argument_error("sobolev_norm: x_frac must be >= 0");
    double total = 0.0;
    for (const auto& f : modes) {
        if (f.k < 0.0) throw invalid_argument_error("sobolev_norm: modes must be the k >= 0 representatives");
        const double mult = f.k > 0.0 ? 2.0 : 1.0;
        total += mult * sobolev_sq_one(f, g, y_order, x_frac);
    }
    return std::sqrt(xg.dk() * total);
}

double sobolev_norm2(std::span<const ModeField> comp1, std::span<const ModeField> comp2,
                     const XGrid& xg, const ChebGrid& g, int y_order, double x_frac) {
    const double a = sobolev_norm(comp1, xg, g, y_order, x_frac);
    const double b = sobolev_norm(comp2, xg, g, y_order, x_frac);
    return std::sqrt(a * a + b * b);
}

}  // namespace bcl

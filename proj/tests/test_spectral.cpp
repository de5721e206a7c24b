#include <doctest.h>

#include <cmath>
#include <random>

#include "bclab/cheb.hpp"
#include "bclab/errors.hpp"
#include "bclab/spectral.hpp"

using namespace bcl;

TEST_CASE("cheb grid nodes and weights") {
    const ChebGrid g = build_cheb_grid(4);
    CHECK(g.nodes(0) == 1.0);
    CHECK(g.nodes(4) == -1.0);
    CHECK(g.nodes(2) == 0.0);
    CHECK(g.nodes(1) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
    CHECK(g.nodes(3) == doctest::Approx(-std::sqrt(2.0) / 2.0).epsilon(1e-15));
    for (int j = 0; j < 4; ++j) CHECK(g.nodes(j) > g.nodes(j + 1));

    const ChebGrid g8 = build_cheb_grid(8);
    CHECK(g8.weights.sum() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g8.weights.minCoeff() > 0.0);

    CHECK_THROWS_AS(build_cheb_grid(3), invalid_argument_error);
}

TEST_CASE("differentiation is exact on polynomials") {
    const ChebGrid g = build_cheb_grid(8);
    // y^3 -> 3y^2
    Eigen::VectorXd f(g.size()), df_exact(g.size());
    for (int i = 0; i < g.size(); ++i) {
        const double y = g.nodes(i);
        f(i) = y * y * y;
        df_exact(i) = 3.0 * y * y;
    }
    const Eigen::VectorXd df = g.d1 * f;
    CHECK((df - df_exact).cwiseAbs().maxCoeff() < 1e-12);

    // random polynomials up to degree n, first and second derivatives
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 20; ++trial) {
        const ChebGrid gg = build_cheb_grid(16 + 8 * (trial % 3));
        const int deg = gg.n;
        Eigen::VectorXd coef(deg + 1);
        for (int c = 0; c <= deg; ++c) coef(c) = gauss(rng);
        Eigen::VectorXd p(gg.size()), p1(gg.size()), p2(gg.size());
        for (int i = 0; i < gg.size(); ++i) {
            const double y = gg.nodes(i);
            double v = 0, d1v = 0, d2v = 0;
            for (int c = deg; c >= 0; --c) {
                // Horner for p, p', p''
                d2v = d2v * y + 2.0 * d1v;
                d1v = d1v * y + v;
                v = v * y + coef(c);
            }
            p(i) = v;
            p1(i) = d1v;
            p2(i) = d2v;
        }
        const double s1 = std::max(1.0, p1.cwiseAbs().maxCoeff());
        const double s2 = std::max(1.0, p2.cwiseAbs().maxCoeff());
        CHECK(((gg.d1 * p) - p1).cwiseAbs().maxCoeff() / s1 < 1e-10);
        CHECK(((gg.d2 * p) - p2).cwiseAbs().maxCoeff() / s2 < 1e-10);
    }
}

TEST_CASE("quadrature integrates polynomials exactly") {
    const ChebGrid g = build_cheb_grid(12);
    for (int deg = 0; deg <= 12; deg += 2) {
        double q = 0.0;
        for (int i = 0; i < g.size(); ++i) q += g.weights(i) * std::pow(g.nodes(i), deg);
        const double exact = 2.0 / (deg + 1);
        CHECK(q == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("l2 norm") {
    const ChebGrid g = build_cheb_grid(32);
    ModeField zero{1.0, Eigen::VectorXcd::Zero(g.size())};
    CHECK(l2_norm(zero, g) == 0.0);

    ModeField one{0.0, Eigen::VectorXcd::Ones(g.size())};
    CHECK(l2_norm(one, g) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

    ModeField s{1.0, Eigen::VectorXcd(g.size())};
    for (int i = 0; i < g.size(); ++i) s.values(i) = std::sin(M_PI * g.nodes(i));
    CHECK(l2_norm(s, g) == doctest::Approx(1.0).epsilon(1e-10));

    // homogeneity
    ModeField cs = s;
    cs.values *= complex(3.0, -4.0);
    CHECK(l2_norm(cs, g) == doctest::Approx(5.0 * l2_norm(s, g)).epsilon(1e-14));

    ModeField bad{1.0, Eigen::VectorXcd::Zero(g.size() - 1)};
    CHECK_THROWS_AS(l2_norm(bad, g), dimension_error);
}

TEST_CASE("h^-1 norm: eigenfunction value and contraction") {
    const ChebGrid g = build_cheb_grid(64);
    ModeField zero{0.0, Eigen::VectorXcd::Zero(g.size())};
    CHECK(h_minus1_norm(zero, g) == 0.0);

    // sin(pi y) is a Dirichlet eigenfunction of (1 - d_y^2) with eigenvalue 1 + pi^2
    ModeField s{0.0, Eigen::VectorXcd(g.size())};
    for (int i = 0; i < g.size(); ++i) s.values(i) = std::sin(M_PI * g.nodes(i));
    const double expected = l2_norm(s, g) / std::sqrt(1.0 + M_PI * M_PI);
    CHECK(h_minus1_norm(s, g) == doctest::Approx(expected).epsilon(1e-8));

    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 25; ++trial) {
        ModeField f{0.0, Eigen::VectorXcd(g.size())};
        for (int m = 1; m <= 10; ++m) {
            const complex c(gauss(rng), gauss(rng));
            for (int i = 0; i < g.size(); ++i)
                f.values(i) += c * std::sin(m * M_PI * (g.nodes(i) + 1.0) / 2.0);
        }
        CHECK(h_minus1_norm(f, g) <= l2_norm(f, g) * (1.0 + 1e-12));
    }
}

TEST_CASE("fractional weight") {
    CHECK(frac_x_weight(0.0, 1.0 / 3.0) == 0.0);
    CHECK(frac_x_weight(1.0, 1.0 / 3.0) == 1.0);
    CHECK(frac_x_weight(8.0, 1.0 / 3.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(frac_x_weight(-8.0, 1.0 / 3.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(frac_x_weight(5.0, 0.0) == 1.0);
    CHECK_THROWS_AS(frac_x_weight(1.0, -0.5), invalid_argument_error);
}

TEST_CASE("sobolev norm basics") {
    const ChebGrid g = build_cheb_grid(48);
    const XGrid xg = build_x_grid(4.0 * M_PI, 32);

    CHECK(sobolev_norm(std::vector<ModeField>{}, xg, g, 0, 0.0) == 0.0);

    // single mode k=0, constant c: H^0 norm = |c| sqrt(2 dk)
    const complex c(0.7, 0.0);
    std::vector<ModeField> modes{{0.0, Eigen::VectorXcd::Constant(g.size(), c)}};
    const double expected = std::abs(c) * std::sqrt(2.0 * xg.dk());
    CHECK(sobolev_norm(modes, xg, g, 0, 0.0) == doctest::Approx(expected).epsilon(1e-13));

    // single mode k=2, f = 1 - y^2: H1/H0 >= |k| = 2
    std::vector<ModeField> m2{{2.0, Eigen::VectorXcd(g.size())}};
    for (int i = 0; i < g.size(); ++i) m2[0].values(i) = 1.0 - g.nodes(i) * g.nodes(i);
    const double h0 = sobolev_norm(m2, xg, g, 0, 0.0);
    const double h1 = sobolev_norm(m2, xg, g, 1, 0.0);
    CHECK(h1 / h0 >= 2.0);

    CHECK_THROWS_AS(sobolev_norm(m2, xg, g, 3, 0.0), invalid_argument_error);
}

TEST_CASE("parseval consistency with direct 2-D quadrature") {
    const ChebGrid g = build_cheb_grid(32);
    const XGrid xg = build_x_grid(4.0 * M_PI, 16);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;

    std::vector<ModeField> modes;
    modes.push_back({0.0, Eigen::VectorXcd(g.size())});
    for (int i = 0; i < g.size(); ++i) modes[0].values(i) = gauss(rng);   // k=0 mode is real
    for (int j = 1; j <= 4; ++j) {
        ModeField f{xg.wavenumber(j), Eigen::VectorXcd(g.size())};
        for (int i = 0; i < g.size(); ++i) f.values(i) = complex(gauss(rng), gauss(rng));
        modes.push_back(std::move(f));
    }
    const double norm_modes = sobolev_norm(modes, xg, g, 0, 0.0);

    // reconstruct on an x grid and integrate |F|^2 with (dk/Lx) * trapezoid-in-x
    const int np = 64;
    double total = 0.0;
    for (int p = 0; p < np; ++p) {
        const double x = xg.box_length * p / np;
        for (int i = 0; i < g.size(); ++i) {
            double v = modes[0].values(i).real();
            for (size_t q = 1; q < modes.size(); ++q) {
                const double k = modes[q].k;
                const complex e(std::cos(k * x), std::sin(k * x));
                v += 2.0 * (modes[q].values(i) * e).real();
            }
            total += g.weights(i) * v * v;
        }
    }
    total *= xg.box_length / np;          // integral over one period
    total *= xg.dk() / xg.box_length;     // the dk convention
    CHECK(std::sqrt(total) == doctest::Approx(norm_modes).epsilon(1e-8));
}

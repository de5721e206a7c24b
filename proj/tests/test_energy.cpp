#include <doctest.h>

#include <cmath>
#include <random>

#include "bclab/energy.hpp"
#include "bclab/errors.hpp"

using namespace bcl;

TEST_CASE("regime partition") {
    CHECK(regime_of(0.05, 1e-2) == Regime::I1);
    CHECK(regime_of(0.5, 1e-2) == Regime::I2);
    CHECK(regime_of(5.0, 1e-2) == Regime::I4);   // nu^{-1/2} = 10
    CHECK(regime_of(50.0, 1e-2) == Regime::I5);
    // boundary points go to the lower-index regime, bitwise
    CHECK(regime_of(0.1, 1e-2) == Regime::I1);
    CHECK(regime_of(1.0, 1e-2) == Regime::I2);
    CHECK(regime_of(10.0, 1e-2) == Regime::I4);
    CHECK(regime_of(-0.5, 1e-2) == Regime::I2);

    // partition exactness over a million random (k, nu)
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    int mismatches = 0;
    for (int t = 0; t < 1000000; ++t) {
        const double nu = std::pow(10.0, -4.0 + 3.0 * uni(rng));
        const double k = (uni(rng) - 0.5) * 2.0 * std::pow(10.0, 3.0 * uni(rng) - 1.0);
        const Regime r = regime_of(k, nu);
        const double a = std::abs(k);
        Regime want;
        if (a <= 10.0 * nu) want = Regime::I1;
        else if (a <= 1.0) want = Regime::I2;
        else if (a <= 1.0 / std::sqrt(nu)) want = Regime::I4;
        else want = Regime::I5;
        if (r != want) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("mode energies on closed-form constant trajectories") {
    // constant-in-time norms: sup slots equal the value, integral slots
    // accumulate value^2 * T exactly with right-Riemann updates
    const ChebGrid g = build_cheb_grid(16);
    const double T = 1.0, dt = 0.125;

    auto run_ledger = [&](double nu, double k, double om_amp, double th_amp) {
        EnergyLedger led({k}, nu, 1.0);
        Eigen::VectorXcd om = Eigen::VectorXcd::Zero(g.size());
        Eigen::VectorXcd th = Eigen::VectorXcd::Zero(g.size());
        // flat interior values hit by the quadrature normalization sqrt(2)
        om.array() += om_amp / std::sqrt(2.0);
        th.array() += th_amp / std::sqrt(2.0);
        const Eigen::VectorXcd u = Eigen::VectorXcd::Zero(g.size());
        led.update(0, om, u, u, th, g, 0.0);
        for (int s = 1; s * dt <= T + 1e-12; ++s) led.update(0, om, u, u, th, g, dt);
        return led;
    };

    SUBCASE("I2 omega formula") {
        const double nu = 1e-2, k = 0.5;
        const EnergyLedger led = run_ledger(nu, k, 1.0, 0.0);
        // ||omega|| = 1 for all t in [0,1], u = 0:
        // E = ||w^{1/2} omega||_sup + nu^{1/4} k^{-1/4} * 1 + nu^{1/4} k^{1/4} * 1
        const ModeNorms& m = led.norms(0);
        const double expected = m.om_weighted + std::pow(nu, 0.25) * std::pow(k, -0.25) +
                                std::pow(nu, 0.25) * std::pow(k, 0.25);
        CHECK(led.mode_energy_omega(0) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(m.om_l2 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m.om_l2_t == doctest::Approx(1.0).epsilon(1e-12));   // sqrt(1^2 * T)
    }

    SUBCASE("I1 theta formula") {
        const double nu = 1e-2, k = 0.05;
        const EnergyLedger led = run_ledger(nu, k, 0.0, 1.0);
        const double expected = 1.0 + std::sqrt(nu) * 1.0;
        CHECK(led.mode_energy_theta(0) == doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("I3 prefactors at k=8") {
        const double nu = 1e-3, k = 8.0;
        const EnergyLedger led = run_ledger(nu, k, 0.0, 1.0);
        // |k|^{1/3} = 2 and |k|^{2/3} = 4
        const double expected = 2.0 * 1.0 + std::pow(nu, 1.0 / 6.0) * 4.0 * 1.0;
        CHECK(led.mode_energy_theta(0) == doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("zero trajectory") {
        const EnergyLedger led = run_ledger(1e-2, 0.5, 0.0, 0.0);
        CHECK(led.mode_energy_omega(0) == 0.0);
        CHECK(led.mode_energy_theta(0) == 0.0);
    }
}

TEST_CASE("aggregates") {
    const ChebGrid g = build_cheb_grid(16);
    const double nu = 1e-3, dk = 0.5;
    EnergyLedger led({0.0, 0.5, 1.0}, nu, dk);
    const Eigen::VectorXcd z = Eigen::VectorXcd::Zero(g.size());

    SUBCASE("all zero") {
        const Aggregates a = led.aggregate();
        CHECK(a.e_omega == 0.0);
        CHECK(a.e_theta == 0.0);
        CHECK(a.e_total == 0.0);
    }

    SUBCASE("single active mode and the nu^{-1/3} combination") {
        Eigen::VectorXcd th = Eigen::VectorXcd::Ones(g.size());
        led.update(1, z, z, z, th, g, 0.0);
        const double ek = led.mode_energy_theta(1);
        const Aggregates a = led.aggregate(1.0);
        CHECK(a.e_theta == doctest::Approx(2.0 * dk * ek).epsilon(1e-14));   // k>0 counts twice
        // nu = 1e-3: nu^{-1/3} = 10
        CHECK(a.e_total == doctest::Approx(a.e_omega + 2.0 * 10.0 * a.e_theta).epsilon(1e-12));
    }

    SUBCASE("positive homogeneity") {
        std::mt19937_64 rng(53);
        std::normal_distribution<double> gauss;
        Eigen::VectorXcd om(g.size()), u1(g.size()), u2(g.size()), th(g.size());
        for (int i = 0; i < g.size(); ++i) {
            om(i) = complex(gauss(rng), gauss(rng));
            u1(i) = complex(gauss(rng), gauss(rng));
            u2(i) = complex(gauss(rng), gauss(rng));
            th(i) = complex(gauss(rng), gauss(rng));
        }
        EnergyLedger l1({0.5}, 1e-2, 1.0), l2({0.5}, 1e-2, 1.0);
        const double c = 3.5;
        l1.update(0, om, u1, u2, th, g, 0.0);
        l1.update(0, om, u1, u2, th, g, 0.25);
        l2.update(0, (c * om).eval(), (c * u1).eval(), (c * u2).eval(), (c * th).eval(), g, 0.0);
        l2.update(0, (c * om).eval(), (c * u1).eval(), (c * u2).eval(), (c * th).eval(), g, 0.25);
        CHECK(l2.aggregate().e_omega == doctest::Approx(c * l1.aggregate().e_omega).epsilon(1e-12));
        CHECK(l2.aggregate().e_theta == doctest::Approx(c * l1.aggregate().e_theta).epsilon(1e-12));
    }
}

TEST_CASE("ledger accumulators never decrease") {
    const ChebGrid g = build_cheb_grid(24);
    EnergyLedger led({1.0}, 1e-2, 1.0);
    std::mt19937_64 rng(59);
    std::normal_distribution<double> gauss;
    double prev_eo = 0.0, prev_et = 0.0;
    for (int s = 0; s < 30; ++s) {
        Eigen::VectorXcd om(g.size()), u1(g.size()), u2(g.size()), th(g.size());
        const double decay = std::exp(-0.2 * s);
        for (int i = 0; i < g.size(); ++i) {
            om(i) = decay * complex(gauss(rng), gauss(rng));
            u1(i) = decay * complex(gauss(rng), gauss(rng));
            u2(i) = decay * complex(gauss(rng), gauss(rng));
            th(i) = decay * complex(gauss(rng), gauss(rng));
        }
        led.update(0, om, u1, u2, th, g, s == 0 ? 0.0 : 0.1);
        CHECK(led.mode_energy_omega(0) >= prev_eo);
        CHECK(led.mode_energy_theta(0) >= prev_et);
        prev_eo = led.mode_energy_omega(0);
        prev_et = led.mode_energy_theta(0);
    }
}

TEST_CASE("ladder ratios") {
    SUBCASE("zero mode is flagged") {
        const LadderRatios r = ladder_ratios(ModeNorms{}, 1e-2, 0.5);
        CHECK(r.zero_energy);
        CHECK(r.u1_sup == 0.0);
        CHECK(r.th_l2t == 0.0);
    }

    SUBCASE("finite ratios with the I2 theta factor") {
        ModeNorms m;
        m.th_l2 = 1.0;
        m.th_l2_t = 2.0;
        const double nu = 1e-2, k = 0.5;
        const LadderRatios r = ladder_ratios(m, nu, k);
        const double et = mode_energy_theta(m, nu, k);
        // (3.2) I2 branch: ||theta||_{Lt2} vs nu^{-1/6} |k|^{-1/3} E
        const double expected = m.th_l2_t / (std::pow(nu, -1.0 / 6.0) * std::pow(k, -1.0 / 3.0) * et);
        CHECK(r.th_l2t == doctest::Approx(expected).epsilon(1e-14));
        CHECK(std::isfinite(r.th_sup));
        CHECK(!r.zero_energy);
    }
}

TEST_CASE("frequency lemma suites (unit-scale sample counts)") {
    const FreqLemmaReport rep = check_freq_lemmas(100000, 61);
    CHECK(rep.samples_a2 == 100000);
    CHECK(rep.samples_a3 == 100000);
    CHECK(rep.violations_a2 == 0);
    CHECK(rep.violations_a3 == 0);
    CHECK_THROWS_AS(check_freq_lemmas(10, 61), invalid_argument_error);
}

TEST_CASE("frequency lemma spot checks") {
    // nu=1e-2, k=0.05, l=0.5: |k-l| = 0.45 inside [|l|/2, 2|l|] = [0.25, 1.0]
    CHECK(std::abs(0.05 - 0.5) >= 0.5 * 0.5 - 1e-15);
    CHECK(std::abs(0.05 - 0.5) <= 2.0 * 0.5);
    // k=3, l=1, alpha=1, m=n=1/3: 3 <= 2^{2/3} (3^{1/3} 2^{2/3} + 3^{1/3} 1^{2/3})
    const double lhs = 3.0;
    const double rhs = std::pow(2.0, 2.0 / 3.0) *
                       (std::cbrt(3.0) * std::pow(2.0, 2.0 / 3.0) + std::cbrt(3.0));
    CHECK(lhs <= rhs);
}

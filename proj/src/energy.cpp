#include "bclab/energy.hpp"

#include <cmath>
#include <random>

#include "bclab/errors.hpp"

namespace bcl {

Regime regime_of(double k, double nu) {
    if (nu <= 0.0) throw invalid_argument_error("regime_of: nu must be positive");
    const double a = std::abs(k);
    if (a <= 10.0 * nu) return Regime::I1;
    if (a <= 1.0) return Regime::I2;
    if (a <= 1.0 / std::sqrt(nu)) return Regime::I4;
    return Regime::I5;
}

int regime_band(Regime r) {
    switch (r) {
        case Regime::I1: return 1;
        case Regime::I2: return 2;
        default: return 3;
    }
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::I1: return "I1";
        case Regime::I2: return "I2";
        case Regime::I4: return "I4";
        default: return "I5";
    }
}

double mode_energy_omega(const ModeNorms& m, double nu, double k) {
    const double a = std::abs(k);
    switch (regime_band(regime_of(k, nu))) {
        case 1:
            return m.om_l2 + std::sqrt(nu) * m.om_l2_t + m.u_linf + std::sqrt(nu) * m.u_l2_t;
        case 2:
            return m.om_weighted + std::pow(nu, 0.25) * std::pow(a, -0.25) * m.om_l2 +
                   std::pow(nu, 0.25) * std::pow(a, 0.25) * m.om_l2_t + m.u_linf +
                   std::sqrt(a) * m.u_l2_t;
        default:
            return m.om_weighted + std::pow(nu, 0.25) * std::sqrt(a) * m.om_l2_t +
                   std::sqrt(a) * m.u_linf + a * m.u_l2_t;
    }
}

double mode_energy_theta(const ModeNorms& m, double nu, double k) {
    const double a = std::abs(k);
    switch (regime_band(regime_of(k, nu))) {
        case 1:
            return m.th_l2 + std::sqrt(nu) * m.th_l2_t;
        case 2:
            return m.th_l2 + std::pow(nu, 1.0 / 6.0) * std::cbrt(a) * m.th_l2_t;
        default:
            return std::cbrt(a) * m.th_l2 + std::pow(nu, 1.0 / 6.0) * std::pow(a, 2.0 / 3.0) * m.th_l2_t;
    }
}

EnergyLedger::EnergyLedger(std::vector<double> wavenumbers, double nu, double dk)
    : ks_(std::move(wavenumbers)), nu_(nu), dk_(dk) {
    if (nu_ <= 0.0 || dk_ <= 0.0) throw invalid_argument_error("EnergyLedger: need nu, dk > 0");
    norms_.resize(ks_.size());
    sq_.resize(ks_.size());
}

ModeNorms EnergyLedger::update(int j, const Eigen::VectorXcd& omega, const Eigen::VectorXcd& u1,
                               const Eigen::VectorXcd& u2, const Eigen::VectorXcd& theta,
                               const ChebGrid& g, double dt) {
    if (!initialized()) throw state_error("EnergyLedger: not initialized");
    ModeNorms& m = norms_.at(j);
    ModeNorms& s = sq_.at(j);

    ModeNorms inst;
    double om_l2 = 0.0, om_w = 0.0, u_l2 = 0.0, th_l2 = 0.0;
    double u_linf = 0.0, u1_linf = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double w = g.weights(i);
        const double wallw = 1.0 - std::abs(g.nodes(i));
        const double o2 = std::norm(omega(i));
        const double uu = std::norm(u1(i)) + std::norm(u2(i));
        om_l2 += w * o2;
        om_w += w * wallw * o2;
        u_l2 += w * uu;
        th_l2 += w * std::norm(theta(i));
        u_linf = std::max(u_linf, uu);
        u1_linf = std::max(u1_linf, std::norm(u1(i)));
    }
    inst.om_l2 = std::sqrt(om_l2);
    inst.om_weighted = std::sqrt(om_w);
    inst.u_l2 = std::sqrt(u_l2);
    inst.th_l2 = std::sqrt(th_l2);
    inst.u_linf = std::sqrt(u_linf);
    inst.u1_linf = std::sqrt(u1_linf);

    m.om_l2 = std::max(m.om_l2, inst.om_l2);
    m.om_weighted = std::max(m.om_weighted, inst.om_weighted);
    m.u_l2 = std::max(m.u_l2, inst.u_l2);
    m.u_linf = std::max(m.u_linf, inst.u_linf);
    m.u1_linf = std::max(m.u1_linf, inst.u1_linf);
    m.th_l2 = std::max(m.th_l2, inst.th_l2);

    s.om_l2_t += dt * inst.om_l2 * inst.om_l2;
    s.u_l2_t += dt * inst.u_l2 * inst.u_l2;
    s.u1_linf_t += dt * inst.u1_linf * inst.u1_linf;
    s.th_l2_t += dt * inst.th_l2 * inst.th_l2;
    m.om_l2_t = std::sqrt(s.om_l2_t);
    m.u_l2_t = std::sqrt(s.u_l2_t);
    m.u1_linf_t = std::sqrt(s.u1_linf_t);
    m.th_l2_t = std::sqrt(s.th_l2_t);
    return inst;
}

double EnergyLedger::mode_energy_omega(int j) const {
    if (!initialized()) throw state_error("EnergyLedger: not initialized");
    return bcl::mode_energy_omega(norms_.at(j), nu_, ks_.at(j));
}

double EnergyLedger::mode_energy_theta(int j) const {
    if (!initialized()) throw state_error("EnergyLedger: not initialized");
    return bcl::mode_energy_theta(norms_.at(j), nu_, ks_.at(j));
}

Aggregates EnergyLedger::aggregate(double c_norm) const {
    if (c_norm <= 0.0) throw invalid_argument_error("aggregate: c_norm must be positive");
    Aggregates agg;
    agg.c_norm = c_norm;
    for (int j = 0; j < mode_count(); ++j) {
        const double mult = ks_[j] > 0.0 ? 2.0 : 1.0;
        agg.e_omega += mult * dk_ * mode_energy_omega(j);
        agg.e_theta += mult * dk_ * mode_energy_theta(j);
    }
    agg.e_total = agg.e_omega + 2.0 * c_norm * std::pow(nu_, -1.0 / 3.0) * agg.e_theta;
    return agg;
}

LadderRatios ladder_ratios(const ModeNorms& m, double nu, double k) {
    LadderRatios r;
    const double eo = mode_energy_omega(m, nu, k);
    const double et = mode_energy_theta(m, nu, k);
    if (eo == 0.0 && et == 0.0) {
        r.zero_energy = true;
        return r;
    }
    const double a = std::abs(k);
    const int band = regime_band(regime_of(k, nu));
    if (eo > 0.0) {
        r.u1_sup = m.u1_linf / (std::min(1.0, a > 0.0 ? std::pow(a, -0.5) : 1.0) * eo);
        double f = 0.0;
        if (band == 1) f = std::pow(nu, -0.5);
        else if (band == 2) f = std::pow(nu, -1.0 / 8.0) * std::pow(a, -3.0 / 8.0);
        else f = std::pow(nu, -1.0 / 8.0) * std::pow(a, -3.0 / 4.0);
        r.u1_l2t = m.u1_linf_t / (f * eo);
    }
    if (et > 0.0) {
        r.th_sup = m.th_l2 / ((band == 3 ? std::pow(a, -1.0 / 3.0) : 1.0) * et);
        double f = 0.0;
        if (band == 1) f = std::pow(nu, -0.5);
        else if (band == 2) f = std::pow(nu, -1.0 / 6.0) * std::pow(a, -1.0 / 3.0);
        else f = std::pow(nu, -1.0 / 6.0) * std::pow(a, -2.0 / 3.0);
        r.th_l2t = m.th_l2_t / (f * et);
    }
    return r;
}

FreqLemmaReport check_freq_lemmas(std::int64_t sample_count, std::uint64_t seed) {
    if (sample_count < 1000) throw invalid_argument_error("check_freq_lemmas: need >= 1000 samples");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    FreqLemmaReport rep;

    // band comparability: |k| <= 10 nu, 10 nu <= |l| <= 1, 10 nu <= |k-l| <= 2
    // implies |l|/2 <= |k-l| <= 2|l|
    while (rep.samples_a2 < sample_count) {
        const double nu = std::pow(10.0, -4.0 + uni(rng) * (std::log10(0.05) + 4.0));
        const double k = (2.0 * uni(rng) - 1.0) * 10.0 * nu;
        double l = 10.0 * nu + uni(rng) * (1.0 - 10.0 * nu);
        if (uni(rng) < 0.5) l = -l;
        const double d = std::abs(k - l);
        if (d < 10.0 * nu || d > 2.0) continue;
        ++rep.samples_a2;
        if (!(d >= 0.5 * std::abs(l) && d <= 2.0 * std::abs(l))) ++rep.violations_a2;
    }

    // exponent splitting: |k|,|l| >= 1, |k-l| >= 1 implies
    // |k|^a <= 2^{max(a-m, a-n)} (|k|^m |k-l|^{a-m} + |k|^n |l|^{a-n})
    while (rep.samples_a3 < sample_count) {
        const double alpha = 4.0 * uni(rng);
        const double mm = alpha * uni(rng);
        const double nn = alpha * uni(rng);
        double k = std::pow(100.0, uni(rng));
        double l = std::pow(100.0, uni(rng));
        if (uni(rng) < 0.5) k = -k;
        if (uni(rng) < 0.5) l = -l;
        if (std::abs(k - l) < 1.0) continue;
        ++rep.samples_a3;
        const double ak = std::abs(k), al = std::abs(l), ad = std::abs(k - l);
        const double lhs = std::pow(ak, alpha);
        const double c = std::pow(2.0, std::max(alpha - mm, alpha - nn));
        const double rhs = c * (std::pow(ak, mm) * std::pow(ad, alpha - mm) +
                                std::pow(ak, nn) * std::pow(al, alpha - nn));
        if (lhs > rhs) ++rep.violations_a3;
    }
    return rep;
}

}  // namespace bcl

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bclab/cheb.hpp"
#include "bclab/spectral.hpp"

namespace bcl {

/// Frequency regimes. Boundaries are |k| = 10 nu, |k| = 1, |k| = nu^{-1/2};
/// boundary points belong to the lower-index regime. I4 and I5 subdivide
/// the high band and share the high-band energy formulas.
enum class Regime { I1, I2, I4, I5 };

Regime regime_of(double k, double nu);

/// 1, 2 or 3 (I4 and I5 both map to band 3).
int regime_band(Regime r);

const char* regime_name(Regime r);

/// Norm bundle of a single mode. The plain slots realize L_t^inf norms, the
/// *_t slots realize L_t^2 norms (they hold sqrt of the running integrals).
/// An instantaneous bundle is the same struct with the *_t slots zeroed.
struct ModeNorms {
    double om_l2 = 0.0;        // ||omega_k||_{L2_y}
    double om_weighted = 0.0;  // ||(1-|y|)^{1/2} omega_k||
    double u_l2 = 0.0;         // ||u_k||_{L2_y}, both components
    double u_linf = 0.0;       // ||u_k||_{Linf_y}
    double u1_linf = 0.0;      // ||u1_k||_{Linf_y}
    double th_l2 = 0.0;        // ||theta_k||
    double om_l2_t = 0.0;
    double u_l2_t = 0.0;
    double u1_linf_t = 0.0;
    double th_l2_t = 0.0;
};

/// Piecewise energy functionals of the per-mode norms.
double mode_energy_omega(const ModeNorms& m, double nu, double k);
double mode_energy_theta(const ModeNorms& m, double nu, double k);

struct Aggregates {
    double e_omega = 0.0;
    double e_theta = 0.0;
    double e_total = 0.0;
    double c_norm = 1.0;
};

/// Running sup / square-integral accumulators per mode (k >= 0
/// representatives; k > 0 counts twice in aggregates).
class EnergyLedger {
  public:
    EnergyLedger() = default;
    EnergyLedger(std::vector<double> wavenumbers, double nu, double dk);

    /// Fold one snapshot of mode j into the accumulators; `dt` is the time
    /// weight for the square-integral slots (0 for the initial snapshot).
    /// Returns the instantaneous norm bundle of this snapshot (time slots 0).
    ModeNorms update(int j, const Eigen::VectorXcd& omega, const Eigen::VectorXcd& u1,
                     const Eigen::VectorXcd& u2, const Eigen::VectorXcd& theta, const ChebGrid& g,
                     double dt);

    const ModeNorms& norms(int j) const { return norms_.at(j); }
    double wavenumber(int j) const { return ks_.at(j); }
    int mode_count() const { return static_cast<int>(ks_.size()); }
    double nu() const { return nu_; }
    double dk() const { return dk_; }
    bool initialized() const { return !ks_.empty(); }

    double mode_energy_omega(int j) const;
    double mode_energy_theta(int j) const;

    /// dk-weighted L1 sums over the symmetric wavenumber grid and the
    /// combined functional e_omega + 2*C*nu^{-1/3}*e_theta.
    Aggregates aggregate(double c_norm = 1.0) const;

  private:
    std::vector<double> ks_;
    std::vector<ModeNorms> norms_;
    std::vector<ModeNorms> sq_;   // running integrals (squares) in the *_t slots
    double nu_ = 0.0;
    double dk_ = 0.0;
};

/// Left sides of the ladder bounds divided by their right sides; expected
/// O(1). A zero mode energy gives zero ratios with the flag set.
struct LadderRatios {
    double u1_sup = 0.0;     // ||u1||_{LtInf LyInf} vs min(1,|k|^-1/2) E_k[omega]
    double u1_l2t = 0.0;     // ||u1||_{Lt2 LyInf} vs regime factor * E_k[omega]
    double th_sup = 0.0;     // ||theta||_{LtInf Ly2} vs regime factor * E_k[theta]
    double th_l2t = 0.0;     // ||theta||_{Lt2 Ly2} vs regime factor * E_k[theta]
    bool zero_energy = false;
};

LadderRatios ladder_ratios(const ModeNorms& m, double nu, double k);

struct FreqLemmaReport {
    std::int64_t samples_a2 = 0;
    std::int64_t violations_a2 = 0;
    std::int64_t samples_a3 = 0;
    std::int64_t violations_a3 = 0;
};

/// Property suites for the two frequency-splitting inequalities, with the
/// explicit constants 1/2, 2 (band comparability) and 2^{max(a-m, a-n)}
/// (exponent splitting). Requires sample_count >= 1000.
FreqLemmaReport check_freq_lemmas(std::int64_t sample_count, std::uint64_t seed);

}  // namespace bcl

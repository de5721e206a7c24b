#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "bclab/energy.hpp"
#include "bclab/operators.hpp"
#include "bclab/spectral.hpp"

namespace bcl {

struct SimConfig {
    double nu = 1e-2;
    double box_length = 4.0 * M_PI;
    int m = 128;                 // x modes
    int n = 128;                 // y polynomial degree
    double dt = 0.02;
    double horizon = 0.0;        // T; 0 records only the initial snapshot
    std::uint64_t seed = 1;
    double amplitude_u = 0.0;    // Sobolev targets for the default initial data
    double amplitude_theta = 0.0;
    int scheme = 1;              // 1: backward Euler + explicit; 2: CN + AB2
    double ceiling_factor = 1e3; // divergence when E_total exceeds this times initial
    double cfl_safety = 0.5;
    double c_norm = 1.0;
    int snapshot_stride = 1;
    bool nonlinear = true;
    bool buoyancy = true;
    bool mode_energy_series = false;   // record per-mode energies at snapshots
    int threads = 0;                   // per-mode solve workers; 0 = auto
};

/// Per-mode fields for the k >= 0 representatives (column j holds the mode
/// with wavenumber 2*pi*j/Lx); negative-k modes are the complex conjugates.
/// The j = 0 columns are real-valued: omega//0 = d_y(mean_shear), psi//0 = 0.
struct SimState {
    double time = 0.0;
    std::shared_ptr<const ChebGrid> grid;
    XGrid xgrid;
    Eigen::MatrixXcd omega;      // (n+1) x m/2
    Eigen::MatrixXcd theta;
    Eigen::MatrixXcd psi;
    Eigen::VectorXd mean_shear;  // u1 at k = 0

    int mode_count() const { return xgrid.half(); }
    double wavenumber(int j) const { return xgrid.dk() * j; }
};

/// Nonlinear flux pairs: -(u . grad omega)_k = -i k f1_k - d_y f2_k and
/// -(u . grad theta)_k = -i k g1_k - d_y g2_k, with f1 = u1 omega,
/// f2 = u2 omega, g1 = u1 theta, g2 = u2 theta.
struct FluxSet {
    Eigen::MatrixXcd f1, f2, g1, g2;
};

struct BoundaryResiduals {
    double theta = 0.0;     // max_k |theta_k(+-1)| / ||theta_k||
    double psi = 0.0;       // max_k |psi_k(+-1)| / ||psi_k||
    double dpsi = 0.0;      // max_k |d_y psi_k(+-1)| / ||psi_k||
};

enum class RunOutcome { completed, divergence_detected, cfl_violation };

const char* outcome_name(RunOutcome o);

struct Snapshot {
    double t = 0.0;
    double e_omega = 0.0, e_theta = 0.0, e_total = 0.0;   // accumulated aggregates
    double inst_e_total = 0.0;                            // instantaneous functional
    double theta_l2xy = 0.0;
    double max_theta_phys = 0.0;
    double bres_theta = 0.0, bres_psi = 0.0, bres_dpsi = 0.0;
    double divergence_residual = 0.0;
    double max_speed = 0.0;
};

struct RunRecord {
    RunOutcome outcome = RunOutcome::completed;
    std::vector<Snapshot> snapshots;
    /// per snapshot, per mode (E_omega_k, E_theta_k); filled when
    /// SimConfig::mode_energy_series is set
    std::vector<std::vector<std::pair<double, double>>> mode_energies;
    EnergyLedger ledger;
    SimState final_state;
    int steps = 0;
    double wall_seconds = 0.0;
    double initial_e_total = 0.0;
    double peak_e_total = 0.0;         // max over every step, not just snapshots
    double initial_inst_e_total = 0.0;
    double final_inst_e_total = 0.0;
    double max_bres_theta = 0.0, max_bres_psi = 0.0, max_bres_dpsi = 0.0;
    double max_divergence_residual = 0.0;
    bool theta_l2_monotone = true;     // per-step, 1e-10 relative slack
    bool theta_max_monotone = true;    // per-step, 1e-8 relative slack
};

/// IMEX pseudo-spectral solver: the mode operator A is implicit, the
/// dealiased nonlinear fluxes and the buoyancy term are explicit, no-slip
/// is closed with the influence matrix, and the k = 0 shear evolves by its
/// heat equation.
class Simulator {
  public:
    explicit Simulator(const SimConfig& cfg);

    const SimConfig& config() const { return cfg_; }
    const ChebGrid& grid() const { return *grid_; }
    const XGrid& xgrid() const { return xgrid_; }
    std::shared_ptr<const ChebGrid> grid_handle() const { return grid_; }

    SimState zero_state() const;

    FluxSet nonlinear_fluxes(const SimState& s) const;

    /// One IMEX step at the configured dt. Throws step_size_error on CFL
    /// violation. Resets the multistep history when `s.time` does not
    /// continue the previous call.
    SimState step(const SimState& s);

    RunRecord simulate(const SimState& initial);

    /// Max physical advection speed (CFL monitor).
    double max_speed(const SimState& s) const;

    int dealias_cutoff_index() const { return jcut_; }

  private:
    struct ModeSolve {
        Eigen::PartialPivLU<Eigen::MatrixXcd> implicit_lu;   // Dirichlet rows
        std::unique_ptr<PoissonSolver> poisson;
        std::unique_ptr<InfluenceMatrix> influence;          // j >= 1 only
    };

    void validate(const SimState& s) const;
    Eigen::MatrixXd to_phys(const Eigen::MatrixXcd& modes) const;
    Eigen::MatrixXcd to_modes(const Eigen::MatrixXd& phys) const;
    void dealias_inplace(Eigen::MatrixXcd& modes) const;
    /// velocity columns for every mode (j = 0 column from the mean shear)
    void velocities(const SimState& s, Eigen::MatrixXcd& u1, Eigen::MatrixXcd& u2) const;
    Eigen::VectorXcd apply_mode_operator(const SimState& s, const Eigen::MatrixXcd& d2f,
                                         const Eigen::MatrixXcd& f, int j) const;

    SimConfig cfg_;
    std::shared_ptr<const ChebGrid> grid_;
    XGrid xgrid_;
    int jcut_ = 0;
    int threads_ = 1;
    double beta_ = 1.0;            // implicit weight: 1 for BE, 1/2 for CN
    std::vector<ModeSolve> modes_;
    Eigen::PartialPivLU<Eigen::MatrixXd> shear_lu_;
    Eigen::MatrixXd bwd_re_, bwd_im_;   // modes -> phys twiddles, m x (m/2)
    // AB2 history
    bool have_history_ = false;
    double history_time_ = 0.0;
    Eigen::MatrixXcd prev_nom_, prev_nth_;
    Eigen::VectorXd prev_nshear_;
};

BoundaryResiduals boundary_residuals(const SimState& s);

/// theta L2 norm over the whole channel in the dk convention.
double theta_l2xy(const SimState& s);

/// Max physical speed of a state, reconstructed by direct mode summation
/// (setup-time helper; the Simulator has a faster path).
double state_max_speed(const SimState& s);

/// Instantaneous per-mode norm bundle (time-integral slots zeroed).
ModeNorms instantaneous_norms(const SimState& s, const Eigen::MatrixXcd& u1,
                              const Eigen::MatrixXcd& u2, int j);

}  // namespace bcl

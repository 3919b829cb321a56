#pragma once

// Exact state-vector numerics for the mixed-field Ising chain with an
// all-to-all ZZ coupling: H = -J sum Z_i Z_{i+1} - h_x sum X_i
// - h_z sum Z_i - (g/sqrt(N)) sum_{i<j} Z_i Z_j. Provides a matrix-free
// Hamiltonian, a Lanczos propagator, out-of-time-order correlators in
// Haar-random states, half-cut entanglement growth, and symmetry-resolved
// level statistics.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace scramble {

enum class Boundary { open, periodic };

struct ChainHamiltonianParams {
    int n_sites = 0;
    double ising_j = 1.0;
    double field_x = 1.05;
    double field_z = 0.0;
    double global_g = 0.0;
    Boundary boundary = Boundary::open;
};

// Computational Z basis; site i (1-based) reads bit i-1, so site 1 is the
// least significant bit. Z|0> = +|0>.
struct SpinChainState {
    int n_sites = 0;
    Eigen::VectorXcd amplitudes;

    double norm() const { return amplitudes.norm(); }
};

SpinChainState haar_random_state(int n_sites, std::mt19937_64& rng);
// Product state with every spin along +y: ((|0> + i|1>)/sqrt 2)^N.
SpinChainState plus_y_product_state(int n_sites);
void apply_z(SpinChainState& state, int site);

// Precomputes the diagonal (all Z terms, with the global coupling evaluated
// through the magnetization identity sum_{i<j} z_i z_j = (m^2 - N)/2) so a
// Hamiltonian application costs O(N 2^N).
class ChainHamiltonian {
  public:
    explicit ChainHamiltonian(const ChainHamiltonianParams& params);

    const ChainHamiltonianParams& params() const { return params_; }
    const Eigen::VectorXd& diagonal() const { return diagonal_; }
    // Infinity-norm bound max|diag| + N|h_x|, used for propagator step sizing.
    double norm_bound() const { return norm_bound_; }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;

  private:
    ChainHamiltonianParams params_;
    Eigen::VectorXd diagonal_;
    double norm_bound_ = 0.0;
};

SpinChainState apply_hamiltonian(const SpinChainState& state,
                                 const ChainHamiltonianParams& params);

struct EvolveOptions {
    int krylov_dim = 30;
    double tolerance = 1e-10;  // local error per accepted substep
    double initial_dt = 0.0;   // 0 picks krylov_dim / (2 * norm bound)
};

// |psi(t)> = exp(-i H t) |psi> via Lanczos with full reorthogonalization and
// adaptive substeps; t may be negative.
void evolve_in_place(SpinChainState& state, const ChainHamiltonian& h, double t,
                     const EvolveOptions& opts = {});
SpinChainState evolve_state(const SpinChainState& state,
                            const ChainHamiltonianParams& params, double t,
                            const EvolveOptions& opts = {});

struct OtocSeries {
    int probe_site = 0;
    std::vector<double> times;
    // Re F(r,t) with F = <Z_1(t) Z_r Z_1(t) Z_r>, averaged over the sampled
    // states; imag_error tracks |Im F| as a typicality diagnostic.
    std::vector<double> values;
    std::vector<double> imag_error;
};

// Haar-state estimator of the OTOC; typicality error is O(2^{-N/2}) per
// state, reduced by averaging n_states independent draws.
OtocSeries otoc(const ChainHamiltonianParams& params, int r,
                const std::vector<double>& times, std::uint64_t seed,
                int n_states = 1, const EvolveOptions& opts = {});

struct EntropyPoint {
    double time = 0.0;
    double entropy = 0.0;
};

// Half-cut von Neumann entropy (natural log) along a quench from the +y
// product state; `times` must be ascending.
std::vector<EntropyPoint> entanglement_entropy_quench(
    const ChainHamiltonianParams& params, const std::vector<double>& times,
    const EvolveOptions& opts = {});

struct SectorStatistics {
    int momentum = 0;
    int spinflip_parity = 1;
    int dimension = 0;
    int n_gap_ratios = 0;
    double mean_r = 0.0;
    // Norm of H|phi> leaking out of the sector, per basis column; a genuine
    // symmetry block keeps this at rounding level.
    double max_offblock = 0.0;
    std::vector<double> eigenvalues;
};

struct LevelStatistics {
    std::vector<SectorStatistics> sectors;
    double pooled_mean_r = 0.0;
    double bootstrap_error = 0.0;
    int n_pooled = 0;
    int min_sector_dim = 0;
};

// Adjacent-gap ratios r_n = min(d_n/d_{n-1}, d_{n-1}/d_n) of a spectrum;
// pairs containing a numerically zero gap are skipped.
std::vector<double> gap_ratios(const std::vector<double>& eigenvalues);

// Dense diagonalization in simultaneous (momentum, global spin flip) blocks.
// Requires periodic boundary and h_z = 0; sectors below min_sector_dim are
// diagonalized but excluded from the pooled mean.
LevelStatistics level_statistics(const ChainHamiltonianParams& params,
                                 int min_sector_dim = 50,
                                 std::uint64_t bootstrap_seed = 0x5eed);

// Independent dense construction for cross-checks; guarded to n_sites <= 12.
Eigen::MatrixXd dense_hamiltonian(const ChainHamiltonianParams& params);

}  // namespace scramble

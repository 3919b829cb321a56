#pragma once

// Brute-force circuit simulation for small N: Heisenberg-evolve a Pauli
// operator through alternating layers of independent single-site Haar
// unitaries and the global diagonal coupling exp(-i g'/2 sum_{i<j} Z_i Z_j),
// extract Pauli-string coefficients, and Monte-Carlo average. Serves as the
// from-first-principles oracle for the weight master equation.

#include "scramblesim/weight_markov.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace scramble {

// Dense Heisenberg operator on n_sites qubits. Site i (1-based) acts on bit
// i-1 of the basis index.
struct PauliOperatorState {
    int n_sites = 0;
    Eigen::MatrixXcd matrix;

    // axis: 1 = X, 2 = Y, 3 = Z.
    static PauliOperatorState single_site_pauli(int n_sites, int site, int axis);
    // code: base-4 digits, one per site (digit k = site k+1), 0=I,1=X,2=Y,3=Z.
    static PauliOperatorState from_string_code(int n_sites, std::uint64_t code);
    static PauliOperatorState identity(int n_sites);
};

struct HaarLayer {
    std::vector<Eigen::Matrix2cd> site_unitaries;
};

// Haar-distributed 2x2 unitary: Gram-Schmidt of a complex Gaussian matrix
// with real positive normalization (QR with positive R diagonal).
Eigen::Matrix2cd haar_unitary(std::mt19937_64& rng);
HaarLayer sample_haar_layer(int n_sites, std::mt19937_64& rng);

// O <- U_II^dag O U_II with the diagonal phase operator applied elementwise.
void apply_global_coupling(PauliOperatorState& op, const CircuitParams& params);
// O <- U_I^dag O U_I, one 2x2 conjugation per site.
void apply_site_layer(PauliOperatorState& op, const HaarLayer& layer);
// One circuit step U = U_II U_I acting on states; on operators this
// conjugates by U_II first, then by the fresh single-site layer.
void apply_circuit_step(PauliOperatorState& op, const HaarLayer& layer,
                        const CircuitParams& params);

// Coefficients a_S = 2^{-N} tr(S O) for all 4^N string codes (base-4 digit
// order as in from_string_code), via a per-site radix-4 transform. Imaginary
// parts (zero for Hermitian O) are dropped.
std::vector<double> pauli_coefficients(const PauliOperatorState& op);

// Squared coefficients binned by (total weight, weight on site 1).
WeightDistribution pauli_spectrum(const PauliOperatorState& op);

struct MonteCarloResult {
    CircuitParams params;
    int n_realizations = 0;
    // One entry per time step t = 0..steps, packed like WeightDistribution.
    std::vector<WeightDistribution> mean;
    std::vector<Eigen::VectorXd> sem;
    // Squared-commutator functional evaluated per realization, then averaged.
    std::vector<double> commutator_mean;
    std::vector<double> commutator_sem;
};

// Ensemble average of pauli_spectrum over independent circuit realizations.
// Each realization starts from a uniformly random Pauli axis on site 1
// (the single-site twirl that makes string classes equiprobable, matching
// the master equation's weight-class description). Deterministic for a
// given seed; realization i draws from an independent stream keyed (seed, i).
MonteCarloResult monte_carlo_weight_distribution(const CircuitParams& params,
                                                 int steps, int n_realizations,
                                                 std::uint64_t seed);

struct CommutatorEstimate {
    double mean = 0.0;
    double sem = 0.0;
};

// C(r,t) = -(1/2) tr(rho_inf [O(t), Y_r]^2) computed exactly per realization
// and averaged. t = 0 is the unevolved operator X_1 (so r=1 gives exactly 2);
// for t >= 1 the initial axis is randomized as in the ensemble above.
CommutatorEstimate direct_squared_commutator(const CircuitParams& params, int r,
                                             int t, int n_realizations,
                                             std::uint64_t seed);

}  // namespace scramble

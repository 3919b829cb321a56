// Exact weight-space Markov chain for operator spreading in a Haar + global-ZZ
// brick circuit: transition elements W(w,w',v), the reduced 2N x 2N column-
// stochastic matrix over (weight, site-1 occupation), and derived observables.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace scramble {

struct CircuitParams {
    int n_sites = 0;          // N
    double coupling = 0.0;    // g
    double coupling_exponent = 0.5;  // a in g' = g / N^a

    double g_prime() const { return coupling / std::pow(static_cast<double>(n_sites), coupling_exponent); }
};

// Distribution h(w, w1): w = total Pauli weight, w1 in {0,1} = weight on site 1.
// Valid support: w1 = 0 -> w in [0, N-1]; w1 = 1 -> w in [1, N]. Stored packed
// as [w1=0 block | w1=1 block], each of length N, row index w1*N + (w - w1).
struct WeightDistribution {
    int n_sites = 0;
    int time_step = 0;
    Eigen::VectorXd h;

    static int packed_index(int n_sites, int w, int w1);
    static WeightDistribution zero(int n_sites);
    // Point mass at (w,w1) = (1,1): a single-site operator on site 1.
    static WeightDistribution initial(int n_sites);

    double at(int w, int w1) const;
    double& at(int w, int w1);
    // Weight marginal h(w): h(0,0) at w=0, h(N,1) at w=N, else the sector sum.
    double marginal(int w) const;
    double sum() const { return h.sum(); }
    double mean_weight() const;
};

// Exact transition element W(w, w', v) for total weights w, w' and support
// overlap v, evaluated by log-sum-exp over the double sum; the diagonal
// k = 2l channel enters through an explicit delta term so no 0^0 shortcut
// is taken. Symmetric in w <-> w'.
double w_matrix_element(const CircuitParams& p, int w, int wp, int v);

// Leading O(g'^2) expansion of w_matrix_element; channels |w + w' - 2v| >= 2
// are O(g'^4) and return 0.
double w_matrix_element_small_g(const CircuitParams& p, int w, int wp, int v);

struct TransitionMatrix {
    CircuitParams params;
    Eigen::MatrixXd r;  // 2N x 2N, column-stochastic; column = source (w',w1')
};

// Dense one-step matrix R[(w,w1),(w',w1')] obtained by resumming string
// multiplicities over W. Entries are assembled fully in log space.
TransitionMatrix build_transition_matrix(const CircuitParams& p);

void step(const TransitionMatrix& m, WeightDistribution& dist);

struct EvolveRecord {
    int time_step = 0;
    double mean_weight = 0.0;
    double mean_commutator = 0.0;
};

struct EvolveResult {
    std::vector<EvolveRecord> records;                 // one per step, 0..steps
    std::vector<WeightDistribution> checkpoints;       // full h at requested steps
};

// Evolves the packed distribution for `steps` applications of R, recording
// observables each step; optionally stores full distributions at the listed
// time steps.
EvolveResult evolve(const TransitionMatrix& m, int steps,
                    const std::vector<int>& checkpoint_steps = {});

// Ensemble-averaged squared commutator of the tracked single-site operator
// with a single-site probe on another site, exact at finite N:
//   <C> = 4 / (3(N-1)) * sum_w [ (w-1) h(w) + h(w,0) ].
double mean_commutator(const WeightDistribution& dist);

// Large-N limit (4/3) <w> / N of the same quantity.
double mean_commutator_large_n(const WeightDistribution& dist);

// First time step at which <C> crosses `threshold`, linearly interpolated
// between integer steps. Returns nullopt if not reached within max_steps.
std::optional<double> scrambling_time(const CircuitParams& p, double threshold = 0.5,
                                      int max_steps = 1 << 20);

// Closed-form one-step distribution from the initial point mass:
// h1(w,0) = 0, h1(w,1) = (1/3) C(N-1,w-1) [ d_{w,1} + 2 c^{N-w} s^{w-1} ]
// with c = cos^2 g', s = sin^2 g'.
WeightDistribution one_step_distribution_analytic(const CircuitParams& p);

// Mean weight of the analytic one-step distribution,
// 1/3 + (2/3) cos^2 g' + (2/3) N sin^2 g'.
double one_step_mean_weight_analytic(const CircuitParams& p);

// h(w,w1) proportional to the number of Pauli strings in each class, i.e. a
// uniform distribution over all non-identity strings (the ergodic end state).
WeightDistribution uniform_string_distribution(int n_sites);

// log of the number of Pauli strings with total weight w and site-1 weight w1:
// 3^w * C(N-1, w-w1).
double log_string_class_size(int n_sites, int w, int w1);

}  // namespace scramble

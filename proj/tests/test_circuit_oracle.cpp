#include "doctest.h"

#include "scramblesim/circuit_oracle.hpp"
#include "scramblesim/common.hpp"
#include "scramblesim/weight_markov.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

using namespace scramble;
using cd = std::complex<double>;

namespace {

Eigen::Matrix2cd pauli_matrix(int axis) {
    Eigen::Matrix2cd p;
    switch (axis) {
        case 0: p << 1, 0, 0, 1; break;
        case 1: p << 0, 1, 1, 0; break;
        case 2: p << 0, cd(0, -1), cd(0, 1), 0; break;
        default: p << 1, 0, 0, -1; break;
    }
    return p;
}

// Tensor product accumulated low-site-first; each new factor lands on the
// high bit, so site k ends up on bit k.
Eigen::MatrixXcd naive_string_matrix(int n_sites, std::uint64_t code) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Ones(1, 1);
    for (int k = 0; k < n_sites; ++k) {
        const Eigen::Matrix2cd p = pauli_matrix(static_cast<int>((code >> (2 * k)) & 3));
        Eigen::MatrixXcd next(2 * m.rows(), 2 * m.cols());
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                next.block(i * m.rows(), j * m.cols(), m.rows(), m.cols()) = p(i, j) * m;
        m = std::move(next);
    }
    return m;
}

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("haar unitaries are unitary with the right low moments") {
    std::mt19937_64 rng = make_rng(11, 0);
    const int n_draws = 20000;
    double mean_p = 0.0, mean_p2 = 0.0;
    for (int i = 0; i < n_draws; ++i) {
        const Eigen::Matrix2cd u = haar_unitary(rng);
        if (i < 200) {
            const Eigen::Matrix2cd gram = u.adjoint() * u;
            CHECK(max_abs_diff(gram, Eigen::Matrix2cd::Identity()) < 1e-12);
            CHECK(std::abs(std::abs(u.determinant()) - 1.0) < 1e-12);
        }
        const double p = std::norm(u(0, 0));
        mean_p += p;
        mean_p2 += p * p;
    }
    mean_p /= n_draws;
    mean_p2 /= n_draws;
    // |u00|^2 is uniform on [0,1] for Haar on U(2).
    CHECK(mean_p == doctest::Approx(0.5).epsilon(0.02));
    CHECK(mean_p2 == doctest::Approx(1.0 / 3.0).epsilon(0.03));
}

TEST_CASE("string matrices and the coefficient transform invert each other") {
    const int n = 3;
    const int n_codes = 64;
    for (std::uint64_t code = 0; code < n_codes; ++code) {
        const PauliOperatorState op = PauliOperatorState::from_string_code(n, code);
        CHECK(max_abs_diff(op.matrix, naive_string_matrix(n, code)) < 1e-14);
    }

    // A fixed linear combination must come back coefficient for coefficient.
    std::mt19937_64 rng = make_rng(12, 0);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<double> want(n_codes, 0.0);
    PauliOperatorState op{n, Eigen::MatrixXcd::Zero(8, 8)};
    for (std::uint64_t code = 0; code < n_codes; ++code) {
        want[code] = coef(rng);
        op.matrix += want[code] * naive_string_matrix(n, code);
    }
    const std::vector<double> got = pauli_coefficients(op);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("spectra of single strings land in single bins") {
    const auto x1 = pauli_spectrum(PauliOperatorState::single_site_pauli(4, 1, 1));
    CHECK(x1.at(1, 1) == doctest::Approx(1.0));
    CHECK(x1.sum() == doctest::Approx(1.0));

    // X1 X2: weight 2, one unit on site 1.
    const auto x1x2 = pauli_spectrum(PauliOperatorState::from_string_code(3, 0b0101));
    CHECK(x1x2.at(2, 1) == doctest::Approx(1.0));

    // Z2 Y3: weight 2 away from site 1.
    const auto z2y3 = pauli_spectrum(PauliOperatorState::from_string_code(3, 0b101100));
    CHECK(z2y3.at(2, 0) == doctest::Approx(1.0));

    const auto id = pauli_spectrum(PauliOperatorState::identity(3));
    CHECK(id.at(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("decoupled circuits preserve weight and the identity is inert") {
    CircuitParams p;
    p.n_sites = 4;
    p.coupling = 0.0;

    std::mt19937_64 rng = make_rng(13, 0);
    PauliOperatorState op = PauliOperatorState::single_site_pauli(4, 1, 1);
    for (int t = 0; t < 4; ++t) {
        apply_circuit_step(op, sample_haar_layer(4, rng), p);
        const WeightDistribution spec = pauli_spectrum(op);
        CHECK(spec.at(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(spec.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }

    p.coupling = 0.8;
    PauliOperatorState id = PauliOperatorState::identity(4);
    apply_circuit_step(id, sample_haar_layer(4, rng), p);
    CHECK(pauli_spectrum(id).at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

    // Any conjugation keeps the total squared coefficient at one.
    PauliOperatorState probe = PauliOperatorState::single_site_pauli(4, 1, 2);
    for (int t = 0; t < 3; ++t)
        apply_circuit_step(probe, sample_haar_layer(4, rng), p);
    CHECK(pauli_spectrum(probe).sum() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("the coupling layer alone dresses X1 with an exact binomial") {
    const int n = 5;
    CircuitParams p;
    p.n_sites = n;
    p.coupling = 0.7 * std::sqrt(5.0);  // g' = 0.7
    REQUIRE(p.g_prime() == doctest::Approx(0.7));

    PauliOperatorState op = PauliOperatorState::single_site_pauli(n, 1, 1);
    apply_global_coupling(op, p);
    const WeightDistribution spec = pauli_spectrum(op);

    const double c = std::pow(std::cos(0.7), 2);
    const double s = std::pow(std::sin(0.7), 2);
    LogFactorialTable table(n);
    for (int k = 0; k <= n - 1; ++k) {
        const double want =
            std::exp(table.log_binom(n - 1, k)) * std::pow(c, n - 1 - k) * std::pow(s, k);
        CHECK(spec.at(1 + k, 1) == doctest::Approx(want).epsilon(1e-12));
    }
    for (int w = 1; w < n; ++w) CHECK(spec.at(w, 0) == doctest::Approx(0.0));

    // Per string: X1 (k even) or Y1 (k odd) times k Z's picks up c^(n-1-k) s^k.
    const std::vector<double> coeffs = pauli_coefficients(op);
    for (std::uint64_t sites = 0; sites < 16; ++sites) {  // Z-pattern on sites 2..5
        std::uint64_t code = 0;
        int k = 0;
        for (int j = 0; j < 4; ++j)
            if (sites & (1u << j)) {
                code |= std::uint64_t(3) << (2 * (j + 1));
                ++k;
            }
        code |= (k % 2 == 0) ? 1 : 2;  // site-1 axis alternates X, Y
        const double want = std::pow(c, (n - 1 - k) / 2.0) * std::pow(s, k / 2.0);
        CHECK(std::abs(coeffs[code]) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("one ensemble step reproduces the closed-form distribution") {
    CircuitParams p;
    p.n_sites = 4;
    p.coupling = 0.5;
    const int n_real = 100000;
    const MonteCarloResult mc = monte_carlo_weight_distribution(p, 1, n_real, 21);

    CHECK(mc.mean[0].at(1, 1) == doctest::Approx(1.0));
    CHECK(mc.commutator_mean[0] == doctest::Approx(0.0));

    const WeightDistribution analytic = one_step_distribution_analytic(p);
    for (int w = 0; w <= 4; ++w)
        for (int w1 = 0; w1 <= 1; ++w1) {
            if ((w == 4 && w1 == 0) || (w == 0 && w1 == 1)) continue;
            const int idx = WeightDistribution::packed_index(4, w, w1);
            const double sem = mc.sem[1][idx];
            const double diff = std::abs(mc.mean[1].h[idx] - analytic.h[idx]);
            if (sem > 1e-12)
                CHECK(diff < 3.5 * sem);
            else
                CHECK(diff < 1e-9);
        }

    // The delta piece of the (1,1) bin separates a randomized initial axis
    // from a bare X1 start: 1/3 + (2/3) c^3 here versus c^3 alone.
    const double c3 = std::pow(std::cos(p.g_prime()), 6);
    CHECK(analytic.at(1, 1) == doctest::Approx(1.0 / 3.0 + 2.0 / 3.0 * c3));
    CHECK(std::abs(mc.mean[1].at(1, 1) - analytic.at(1, 1)) <
          3.5 * mc.sem[1][WeightDistribution::packed_index(4, 1, 1)]);
    CHECK(std::abs(mc.mean[1].at(1, 1) - c3) > 0.5 * (analytic.at(1, 1) - c3));

    CHECK(mc.mean[1].mean_weight() ==
          doctest::Approx(one_step_mean_weight_analytic(p)).epsilon(0.01));
    CHECK(std::abs(mc.commutator_mean[1] - mean_commutator(analytic)) <
          3.5 * mc.commutator_sem[1] + 1e-12);
}

TEST_CASE("the ensemble follows the transition matrix over several steps") {
    CircuitParams p;
    p.n_sites = 5;
    p.coupling = 0.4;
    const int steps = 3;
    const int n_real = 4000;
    const MonteCarloResult mc = monte_carlo_weight_distribution(p, steps, n_real, 33);

    const TransitionMatrix tm = build_transition_matrix(p);
    const EvolveResult master = evolve(tm, steps, {});
    WeightDistribution h = WeightDistribution::initial(p.n_sites);
    for (int t = 1; t <= steps; ++t) {
        step(tm, h);
        CHECK(mc.mean[t].mean_weight() ==
              doctest::Approx(master.records[t].mean_weight).epsilon(0.03));
        for (int i = 0; i < 2 * p.n_sites; ++i) {
            const double sem = mc.sem[t][i];
            const double diff = std::abs(mc.mean[t].h[i] - h.h[i]);
            if (sem > 1e-12)
                CHECK(diff < 3.5 * sem);
            else
                CHECK(diff < 1e-9);
        }
        CHECK(std::abs(mc.commutator_mean[t] - master.records[t].mean_commutator) <
              3.5 * mc.commutator_sem[t] + 1e-12);
    }
}

TEST_CASE("an extra trailing layer per step changes nothing observable") {
    // U_I' (U_II U_I) collapses to the same ensemble because a product of two
    // independent Haar layers is a Haar layer and a final single-site layer
    // preserves every string's support.
    CircuitParams p;
    p.n_sites = 4;
    p.coupling = 0.6;
    const int steps = 2;
    const int n_real = 3000;

    const MonteCarloResult plain = monte_carlo_weight_distribution(p, steps, n_real, 41);

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(8), sumsq = Eigen::VectorXd::Zero(8);
    for (int i = 0; i < n_real; ++i) {
        std::mt19937_64 rng = make_rng(42, i);
        const int axis = std::uniform_int_distribution<int>(1, 3)(rng);
        PauliOperatorState op = PauliOperatorState::single_site_pauli(4, 1, axis);
        for (int t = 0; t < steps; ++t) {
            apply_site_layer(op, sample_haar_layer(4, rng));
            apply_global_coupling(op, p);
            apply_site_layer(op, sample_haar_layer(4, rng));
        }
        const WeightDistribution spec = pauli_spectrum(op);
        sum += spec.h;
        sumsq += spec.h.cwiseProduct(spec.h);
    }
    const Eigen::VectorXd mean = sum / n_real;
    const Eigen::VectorXd sem =
        ((sumsq / n_real - mean.cwiseProduct(mean)).cwiseMax(0.0) / (n_real - 1.0))
            .cwiseSqrt();

    for (int i = 0; i < 8; ++i) {
        const double tol = 4.0 * std::hypot(sem[i], plain.sem[steps][i]);
        CHECK(std::abs(mean[i] - plain.mean[steps].h[i]) < tol + 1e-9);
    }
}

TEST_CASE("direct squared commutators agree with string counting") {
    CircuitParams p;
    p.n_sites = 4;
    p.coupling = 0.6;

    CHECK(direct_squared_commutator(p, 1, 0, 2, 7).mean == doctest::Approx(2.0));
    CHECK(direct_squared_commutator(p, 3, 0, 2, 7).mean == doctest::Approx(0.0));

    // Replaying the same streams, C(r,t) must equal 2 sum_{S: S_r in {X,Z}} a_S^2
    // realization for realization.
    const int t = 2, n_real = 6, r = 3;
    const CommutatorEstimate direct = direct_squared_commutator(p, r, t, n_real, 55);
    double manual = 0.0;
    for (int i = 0; i < n_real; ++i) {
        std::mt19937_64 rng = make_rng(55, i);
        const int axis = std::uniform_int_distribution<int>(1, 3)(rng);
        PauliOperatorState op = PauliOperatorState::single_site_pauli(4, 1, axis);
        for (int s = 0; s < t; ++s)
            apply_circuit_step(op, sample_haar_layer(4, rng), p);
        const std::vector<double> coeffs = pauli_coefficients(op);
        double c = 0.0;
        for (std::size_t code = 0; code < coeffs.size(); ++code) {
            const int digit = static_cast<int>((code >> (2 * (r - 1))) & 3);
            if (digit == 1 || digit == 3) c += 2.0 * coeffs[code] * coeffs[code];
        }
        manual += c;
    }
    manual /= n_real;
    CHECK(direct.mean == doctest::Approx(manual).epsilon(1e-10));
}

TEST_CASE("commutator growth is site independent and tracks the class functional") {
    CircuitParams p;
    p.n_sites = 5;
    p.coupling = 0.8;
    const int n_real = 2000;

    const CommutatorEstimate c2 = direct_squared_commutator(p, 2, 2, n_real, 71);
    const CommutatorEstimate c4 = direct_squared_commutator(p, 4, 2, n_real, 71);
    CHECK(std::abs(c2.mean - c4.mean) < 4.0 * std::hypot(c2.sem, c4.sem));

    const MonteCarloResult mc = monte_carlo_weight_distribution(p, 2, n_real, 71);
    CHECK(std::abs(c2.mean - mc.commutator_mean[2]) <
          4.0 * std::hypot(c2.sem, mc.commutator_sem[2]));

    const CommutatorEstimate c1 = direct_squared_commutator(p, 2, 1, n_real, 72);
    CHECK(c2.mean > c1.mean);
    CHECK(c1.mean > 0.0);
}

#include "doctest.h"

#include "scramblesim/common.hpp"
#include "scramblesim/oscillators.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

using namespace scramble;

TEST_CASE("forces match hand values and the energy gradient") {
    OscillatorParams p;
    p.n_osc = 2;
    p.omega1 = 1.0;
    p.omega2 = 0.0;
    p.omega3 = 0.0;

    CHECK(forces(Eigen::VectorXd::Zero(2), p).norm() == 0.0);

    Eigen::VectorXd q(2);
    q << 1.0, -1.0;
    const Eigen::VectorXd f = forces(q, p);
    CHECK(f[0] == doctest::Approx(-2.0));
    CHECK(f[1] == doctest::Approx(2.0));

    // A uniform displacement feels only the global spring: qdd = -sqrt(N) O2^2 q.
    OscillatorParams up;
    up.n_osc = 5;
    up.omega1 = 0.0;
    up.omega2 = 1.4;
    up.omega3 = 0.0;
    const Eigen::VectorXd fu = forces(Eigen::VectorXd::Constant(5, 0.3), up);
    for (int r = 0; r < 5; ++r)
        CHECK(fu[r] == doctest::Approx(-std::sqrt(5.0) * 1.4 * 1.4 * 0.3));

    // Full model: force = -dH/dq by central differences.
    for (const bool periodic : {false, true}) {
        OscillatorParams fp;
        fp.n_osc = 7;
        fp.omega1 = 0.9;
        fp.omega2 = 1.2;
        fp.omega3 = 1.7;
        fp.periodic = periodic;
        std::mt19937_64 rng = make_rng(301, periodic ? 1 : 0);
        std::uniform_real_distribution<double> amp(-1.0, 1.0);
        OscillatorConfiguration c{0.0, Eigen::VectorXd(7), Eigen::VectorXd::Zero(7)};
        for (int r = 0; r < 7; ++r) c.q[r] = amp(rng);
        const Eigen::VectorXd f7 = forces(c.q, fp);
        const double h = 1e-6;
        for (int r = 0; r < 7; ++r) {
            OscillatorConfiguration plus = c, minus = c;
            plus.q[r] += h;
            minus.q[r] -= h;
            const double grad =
                (total_energy(plus, fp) - total_energy(minus, fp)) / (2 * h);
            CHECK(f7[r] == doctest::Approx(-grad).epsilon(1e-6));
        }
    }
}

TEST_CASE("a single oscillator reproduces the harmonic closed form") {
    OscillatorParams p;
    p.n_osc = 1;
    p.omega1 = 0.0;
    p.omega2 = 1.0;  // H = p^2/2 + q^2/2 at N = 1
    p.omega3 = 0.0;

    OscillatorConfiguration c{0.0, Eigen::VectorXd(1), Eigen::VectorXd(1)};
    c.q[0] = 0.7;
    c.p[0] = -0.4;
    const double t = 2.0;
    const auto traj = integrate(c, p, t, 2e-4);
    const double want_q = 0.7 * std::cos(t) - 0.4 * std::sin(t);
    const double want_p = -0.7 * std::sin(t) - 0.4 * std::cos(t);
    CHECK(std::abs(traj.q.back()[0] - want_q) < 1e-8);
    CHECK(std::abs(traj.p.back()[0] - want_p) < 1e-8);
}

TEST_CASE("the quadratic chain follows its normal modes") {
    const int n = 6;
    OscillatorParams p;
    p.n_osc = n;
    p.omega1 = 0.9;
    p.omega2 = 1.1;
    p.omega3 = 0.0;

    // Stiffness matrix of V2: O1^2 L + (O2^2/sqrt N) J.
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r + 1 < n; ++r) {
        lap(r, r) += 1;
        lap(r + 1, r + 1) += 1;
        lap(r, r + 1) -= 1;
        lap(r + 1, r) -= 1;
    }
    const Eigen::MatrixXd stiffness =
        p.omega1 * p.omega1 * lap +
        p.omega2 * p.omega2 / std::sqrt(double(n)) * Eigen::MatrixXd::Ones(n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(stiffness);

    std::mt19937_64 rng = make_rng(302, 0);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    OscillatorConfiguration c{0.0, Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (int r = 0; r < n; ++r) {
        c.q[r] = amp(rng);
        c.p[r] = amp(rng);
    }

    const double t = 3.0;
    const auto traj = integrate(c, p, t, 5e-4);

    const Eigen::VectorXd a = es.eigenvectors().transpose() * c.q;
    const Eigen::VectorXd b = es.eigenvectors().transpose() * c.p;
    Eigen::VectorXd qa(n);
    for (int m = 0; m < n; ++m) {
        const double w = std::sqrt(std::max(es.eigenvalues()[m], 0.0));
        qa[m] = w > 1e-12 ? a[m] * std::cos(w * t) + b[m] / w * std::sin(w * t)
                          : a[m] + b[m] * t;
    }
    const Eigen::VectorXd want = es.eigenvectors() * qa;
    CHECK((traj.q.back() - want).norm() < 1e-6);
}

TEST_CASE("the integrator conserves energy and catches blow-ups") {
    OscillatorParams p;
    p.n_osc = 20;
    p.omega1 = 1.0;
    p.omega2 = 1.0;
    p.omega3 = 2.0;

    std::mt19937_64 rng = make_rng(303, 0);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    OscillatorConfiguration c{0.0, Eigen::VectorXd(20), Eigen::VectorXd::Zero(20)};
    for (int r = 0; r < 20; ++r) c.q[r] = amp(rng);

    const double e0 = total_energy(c, p);
    const auto traj = integrate(c, p, 25.0, reference_dt(p), 50);
    double max_drift = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const OscillatorConfiguration snap{traj.times[i], traj.q[i], traj.p[i]};
        max_drift = std::max(max_drift,
                             std::abs(total_energy(snap, p) - e0) / std::abs(e0));
    }
    CHECK(max_drift < 1e-6);

    OscillatorConfiguration wild{0.0, Eigen::VectorXd(20), Eigen::VectorXd::Zero(20)};
    wild.q.setConstant(1e4);
    CHECK_THROWS_AS(integrate(wild, p, 5.0, 0.01), std::runtime_error);
}

TEST_CASE("linear dynamics spread the perturbation through the uniform mode") {
    OscillatorParams p;
    p.n_osc = 16;
    p.omega1 = 1.0;
    p.omega2 = 1.0;
    p.omega3 = 0.0;
    p.epsilon = 1e-5;

    // With a quadratic Hamiltonian the difference trajectory is autonomous,
    // so one member represents the whole ensemble.
    const GrowthGrid grid = perturbation_growth(p, 4.0, 1, 9, 0.0, 9);

    // t = 0: the perturbation sits on site 1 only.
    CHECK(grid.mean_abs_dq(0, 0) == doctest::Approx(p.epsilon));
    CHECK(grid.mean_abs_dq.col(0).tail(15).maxCoeff() == 0.0);

    // Far site before the ballistic front arrives: (eps/N)(1 - cos(N^{1/4} t)).
    const double w0 = std::pow(16.0, 0.25);
    for (int i = 1; i <= 5; ++i) {
        const double t = grid.times[i];
        const double want = p.epsilon / 16.0 * (1.0 - std::cos(w0 * t));
        CHECK(grid.mean_abs_dq(15, i) == doctest::Approx(want).epsilon(0.05));
    }

    // Doubling epsilon doubles the whole grid.
    OscillatorParams p2 = p;
    p2.epsilon = 2e-5;
    const GrowthGrid grid2 = perturbation_growth(p2, 4.0, 1, 9, 0.0, 9);
    CHECK((grid2.mean_abs_dq - 2.0 * grid.mean_abs_dq).cwiseAbs().maxCoeff() <
          1e-9 * p.epsilon);

    // Purely linear growth never reaches the exponential window.
    const LyapunovEstimate est = lyapunov_estimate(grid);
    CHECK(est.fitted_sites.empty());
    CHECK(est.pooled == 0.0);
}

TEST_CASE("the uniform mode oscillates at the fourth-root frequency") {
    OscillatorParams p;
    p.n_osc = 9;
    p.omega1 = 0.0;
    p.omega2 = 1.3;
    p.omega3 = 0.0;

    std::mt19937_64 rng = make_rng(304, 0);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    OscillatorConfiguration c{0.0, Eigen::VectorXd(9), Eigen::VectorXd::Zero(9)};
    for (int r = 0; r < 9; ++r) c.q[r] = amp(rng);

    const auto traj = integrate(c, p, 50.0, reference_dt(p), 15);
    std::vector<double> qbar(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) qbar[i] = traj.q[i].mean();

    // Discrete Fourier transform on the sampled mean coordinate.
    const double period = traj.times.back();
    double best_w = 0.0, best_mag = -1.0;
    for (int k = 1; k <= 200; ++k) {
        const double w = 2.0 * M_PI * k / period;
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < qbar.size(); ++i) {
            re += qbar[i] * std::cos(w * traj.times[i]);
            im += qbar[i] * std::sin(w * traj.times[i]);
        }
        const double mag = re * re + im * im;
        if (mag > best_mag) {
            best_mag = mag;
            best_w = w;
        }
    }
    const double want = std::pow(9.0, 0.25) * p.omega2;
    CHECK(std::abs(best_w - want) <= 2.0 * M_PI / period + 1e-12);
}

TEST_CASE("the chaotic chain grows perturbations uniformly across sites") {
    OscillatorParams p;
    p.n_osc = 20;
    p.omega1 = 1.0;
    p.omega2 = 1.0;
    p.omega3 = 2.0;
    p.epsilon = 1e-5;

    const GrowthGrid small = perturbation_growth(p, 5.0, 8, 42, 0.0, 11);
    const GrowthGrid again = perturbation_growth(p, 5.0, 8, 42, 0.0, 11);
    CHECK((small.mean_abs_dq - again.mean_abs_dq).cwiseAbs().maxCoeff() == 0.0);

    // The perturbation leaves the 10 eps floor near t = 30 and hits 0.1 near
    // t = 70, so the fit window needs the long horizon.
    const GrowthGrid grid = perturbation_growth(p, 70.0, 300, 42);
    const LyapunovEstimate est = lyapunov_estimate(grid);
    CHECK(est.fitted_sites.size() == 20);
    CHECK(est.pooled > 0.05);
    CHECK(est.pooled < 1.0);
    CHECK(est.max_relative_spread < 0.35);
    for (const double r2 : est.r_squared) CHECK(r2 > 0.9);
}

#include "scramblesim/oscillators.hpp"

#include "scramblesim/common.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace scramble {

namespace {

void check_params(const OscillatorParams& params) {
    if (params.n_osc < 1) throw std::invalid_argument("need at least one oscillator");
    if (params.omega1 < 0 || params.omega2 < 0 || params.omega3 < 0)
        throw std::invalid_argument("frequencies must be nonnegative");
    if (params.epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
}

}  // namespace

Eigen::VectorXd forces(const Eigen::VectorXd& q, const OscillatorParams& params) {
    const int n = params.n_osc;
    const double o1sq = params.omega1 * params.omega1;
    const double o3sq = params.omega3 * params.omega3;
    const double global = params.omega2 * params.omega2 / std::sqrt(double(n));

    Eigen::VectorXd f(n);
    const double qsum = q.sum();
    for (int r = 0; r < n; ++r) {
        double lap = 0.0;
        if (r > 0) lap += q[r - 1] - q[r];
        if (r + 1 < n) lap += q[r + 1] - q[r];
        if (params.periodic && n > 1) {
            if (r == 0) lap += q[n - 1] - q[0];
            if (r == n - 1) lap += q[0] - q[n - 1];
        }
        f[r] = o1sq * lap - global * qsum - o3sq * q[r] * q[r] * q[r];
    }
    return f;
}

double total_energy(const OscillatorConfiguration& config,
                    const OscillatorParams& params) {
    const int n = params.n_osc;
    const double o1sq = params.omega1 * params.omega1;
    double energy = 0.5 * config.p.squaredNorm();
    for (int r = 0; r + 1 < n; ++r) {
        const double d = config.q[r + 1] - config.q[r];
        energy += 0.5 * o1sq * d * d;
    }
    if (params.periodic && n > 1) {
        const double d = config.q[0] - config.q[n - 1];
        energy += 0.5 * o1sq * d * d;
    }
    const double qsum = config.q.sum();
    energy += 0.5 * params.omega2 * params.omega2 / std::sqrt(double(n)) * qsum * qsum;
    energy += 0.25 * params.omega3 * params.omega3 * config.q.array().pow(4).sum();
    return energy;
}

namespace {

double fastest_scale(const OscillatorParams& params) {
    const double uniform_mode = std::pow(double(params.n_osc), 0.25) * params.omega2;
    return std::max(
        {params.omega1, params.omega2, params.omega3, uniform_mode, 1e-12});
}

}  // namespace

double reference_dt(const OscillatorParams& params) {
    return 0.001 / fastest_scale(params);
}

double growth_dt(const OscillatorParams& params) {
    return 0.01 / fastest_scale(params);
}

OscillatorTrajectory integrate(OscillatorConfiguration config,
                               const OscillatorParams& params, double t_final,
                               double dt, int sample_every) {
    check_params(params);
    if (config.q.size() != params.n_osc || config.p.size() != params.n_osc)
        throw std::invalid_argument("configuration size does not match parameters");
    if (dt <= 0 || t_final < 0 || sample_every < 1)
        throw std::invalid_argument("integration needs dt > 0 and t_final >= 0");

    const long n_steps = std::lround(std::ceil(t_final / dt - 1e-12));
    const double step = n_steps > 0 ? t_final / double(n_steps) : dt;

    OscillatorTrajectory traj;
    traj.times.push_back(config.time);
    traj.q.push_back(config.q);
    traj.p.push_back(config.p);

    Eigen::VectorXd f = forces(config.q, params);
    for (long s = 1; s <= n_steps; ++s) {
        config.p += 0.5 * step * f;
        config.q += step * config.p;
        f = forces(config.q, params);
        config.p += 0.5 * step * f;
        config.time += step;
        if (config.q.cwiseAbs().maxCoeff() > 1e6)
            throw std::runtime_error("oscillator amplitude blew up at t = " +
                                     std::to_string(config.time));
        if (s % sample_every == 0 || s == n_steps) {
            traj.times.push_back(config.time);
            traj.q.push_back(config.q);
            traj.p.push_back(config.p);
        }
    }
    return traj;
}

GrowthGrid perturbation_growth(const OscillatorParams& params, double t_final,
                               int n_ensemble, std::uint64_t seed, double dt,
                               int n_samples) {
    check_params(params);
    if (n_ensemble < 1) throw std::invalid_argument("need at least one member");
    if (n_samples < 2) throw std::invalid_argument("need at least two samples");
    if (dt <= 0) dt = growth_dt(params);

    const int n = params.n_osc;
    // Snap the step so samples land exactly on the uniform grid of times.
    const double sample_dt = t_final / (n_samples - 1);
    const long steps_per_sample = std::max(1L, std::lround(std::ceil(sample_dt / dt - 1e-12)));
    const double step = sample_dt / double(steps_per_sample);

    GrowthGrid grid;
    grid.params = params;
    grid.n_ensemble = n_ensemble;
    grid.dt_used = step;
    grid.times.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) grid.times[i] = i * sample_dt;
    grid.mean_abs_dq = Eigen::MatrixXd::Zero(n, n_samples);

    for (int member = 0; member < n_ensemble; ++member) {
        std::mt19937_64 rng = make_rng(seed, static_cast<std::uint64_t>(member));
        std::uniform_real_distribution<double> amp(-1.0, 1.0);
        OscillatorConfiguration one{0.0, Eigen::VectorXd(n), Eigen::VectorXd::Zero(n)};
        for (int r = 0; r < n; ++r) one.q[r] = amp(rng);
        OscillatorConfiguration two = one;
        two.q[0] += params.epsilon;

        grid.mean_abs_dq.col(0) += (two.q - one.q).cwiseAbs();
        Eigen::VectorXd f1 = forces(one.q, params);
        Eigen::VectorXd f2 = forces(two.q, params);
        for (int sample = 1; sample < n_samples; ++sample) {
            for (long s = 0; s < steps_per_sample; ++s) {
                one.p += 0.5 * step * f1;
                one.q += step * one.p;
                f1 = forces(one.q, params);
                one.p += 0.5 * step * f1;

                two.p += 0.5 * step * f2;
                two.q += step * two.p;
                f2 = forces(two.q, params);
                two.p += 0.5 * step * f2;
            }
            if (one.q.cwiseAbs().maxCoeff() > 1e6 ||
                two.q.cwiseAbs().maxCoeff() > 1e6)
                throw std::runtime_error("oscillator amplitude blew up at t = " +
                                         std::to_string(sample * sample_dt));
            grid.mean_abs_dq.col(sample) += (two.q - one.q).cwiseAbs();
        }
    }
    grid.mean_abs_dq /= double(n_ensemble);
    return grid;
}

LyapunovEstimate lyapunov_estimate(const GrowthGrid& grid, double lo_factor,
                                   double hi, int min_points) {
    LyapunovEstimate est;
    est.window_lo = lo_factor * grid.params.epsilon;
    est.window_hi = hi;
    if (est.window_lo >= est.window_hi)
        throw std::invalid_argument("empty growth window");

    const int n = grid.params.n_osc;
    double min_slope = 0.0, max_slope = 0.0, sum_slope = 0.0;
    for (int r = 0; r < n; ++r) {
        std::vector<double> ts, logs;
        for (std::size_t i = 0; i < grid.times.size(); ++i) {
            const double v = grid.mean_abs_dq(r, i);
            if (v >= est.window_lo && v <= est.window_hi) {
                ts.push_back(grid.times[i]);
                logs.push_back(std::log(v));
            }
        }
        if (static_cast<int>(ts.size()) < min_points) continue;
        const LinearFit fit = linear_fit(ts, logs);
        est.per_site.push_back(fit.slope);
        est.r_squared.push_back(fit.r_squared);
        est.fitted_sites.push_back(r);
        if (est.fitted_sites.size() == 1) {
            min_slope = max_slope = fit.slope;
        } else {
            min_slope = std::min(min_slope, fit.slope);
            max_slope = std::max(max_slope, fit.slope);
        }
        sum_slope += fit.slope;
    }
    if (!est.per_site.empty()) {
        est.pooled = sum_slope / double(est.per_site.size());
        if (est.pooled != 0.0)
            est.max_relative_spread = (max_slope - min_slope) / std::abs(est.pooled);
    }
    return est;
}

}  // namespace scramble

#include "scramblesim/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace scramble {

namespace {

constexpr double kLog3 = 1.0986122886681098;

double minmod(double a, double b) {
    if (a > 0.0 && b > 0.0) return std::min(a, b);
    if (a < 0.0 && b < 0.0) return std::max(a, b);
    return 0.0;
}

void check_grid(const FPGrid& g) {
    if (g.n_points < 2) throw std::invalid_argument("grid needs at least two nodes");
    if (!(g.w_max > g.w_min)) throw std::invalid_argument("grid range is empty");
    if (g.n_sites < 1) throw std::invalid_argument("n_sites must be positive");
}

}  // namespace

double drift_coefficient(double w, int n_sites, CoefficientForm form) {
    const double n = static_cast<double>(n_sites);
    switch (form) {
        case CoefficientForm::truncated:
            return (2.0 / 3.0) * (w - 4.0 * w * w / (3.0 * n));
        case CoefficientForm::full:
            return 2.0 * (4.0 + w + 3.0 * n * w - 4.0 * w * w) / (9.0 * n);
    }
    throw std::invalid_argument("unknown coefficient form");
}

double diffusion_coefficient(double w, int n_sites, CoefficientForm form) {
    const double n = static_cast<double>(n_sites);
    switch (form) {
        case CoefficientForm::truncated:
            return w / 3.0 - 2.0 * w * w / (9.0 * n);
        case CoefficientForm::full:
            return (-3.0 + 3.0 * n * (w - 1.0) + 7.0 * w - 2.0 * w * w) / (9.0 * n);
    }
    throw std::invalid_argument("unknown coefficient form");
}

FPGrid FPGrid::full_domain(int n_sites, int n_points) {
    return over_range(n_sites, 0.0, static_cast<double>(n_sites), n_points);
}

FPGrid FPGrid::over_range(int n_sites, double w_min, double w_max, int n_points) {
    if (n_points < 64) throw std::invalid_argument("grid needs at least 64 nodes");
    FPGrid g{n_points, w_min, w_max, n_sites};
    check_grid(g);
    return g;
}

double FPDensity::mass() const {
    const double dx = grid.spacing();
    const int n = grid.n_points;
    double s = 0.5 * (values[0] + values[n - 1]);
    for (int i = 1; i < n - 1; ++i) s += values[i];
    return s * dx;
}

double FPDensity::mean_weight() const {
    const int n = grid.n_points;
    double s = 0.5 * (values[0] * grid.node(0) + values[n - 1] * grid.node(n - 1));
    double m = 0.5 * (values[0] + values[n - 1]);
    for (int i = 1; i < n - 1; ++i) {
        s += values[i] * grid.node(i);
        m += values[i];
    }
    return s / m;
}

void FPDensity::normalize() {
    const double m = mass();
    if (!(m > 0.0)) throw std::runtime_error("cannot normalize a massless density");
    values /= m;
}

double l1_distance(const FPDensity& a, const FPDensity& b) {
    if (a.grid.n_points != b.grid.n_points)
        throw std::invalid_argument("densities live on different grids");
    const int n = a.grid.n_points;
    const double dx = a.grid.spacing();
    double s = 0.5 * (std::abs(a.values[0] - b.values[0]) +
                      std::abs(a.values[n - 1] - b.values[n - 1]));
    for (int i = 1; i < n - 1; ++i) s += std::abs(a.values[i] - b.values[i]);
    return s * dx;
}

FPDensity gaussian_bump(const FPGrid& grid, double center, double width) {
    check_grid(grid);
    if (!(width > 0.0)) throw std::invalid_argument("bump width must be positive");
    FPDensity d{grid, 0.0, Eigen::VectorXd(grid.n_points)};
    for (int i = 0; i < grid.n_points; ++i) {
        const double z = (grid.node(i) - center) / width;
        d.values[i] = std::exp(-0.5 * z * z);
    }
    d.normalize();
    return d;
}

FPCoefficients FPCoefficients::weight_model(int n_sites, CoefficientForm form) {
    FPCoefficients c;
    c.drift = [n_sites, form](double w) { return drift_coefficient(w, n_sites, form); };
    c.diffusion = [n_sites, form](double w) {
        return std::max(0.0, diffusion_coefficient(w, n_sites, form));
    };
    return c;
}

FPResult integrate_fp(const FPDensity& initial, const FPCoefficients& coeffs,
                      double tau_final, const FPOptions& opts) {
    check_grid(initial.grid);
    if (!coeffs.drift || !coeffs.diffusion)
        throw std::invalid_argument("coefficient callables are required");
    if (tau_final < 0.0) throw std::invalid_argument("tau_final must be nonnegative");

    const FPGrid& grid = initial.grid;
    const int n = grid.n_points;
    const double dx = grid.spacing();

    // Coefficients are time independent: diffusion at nodes, drift at faces.
    Eigen::VectorXd d2(n);
    for (int i = 0; i < n; ++i) d2[i] = coeffs.diffusion(grid.node(i));
    Eigen::VectorXd d1f(n - 1);
    for (int i = 0; i + 1 < n; ++i) d1f[i] = coeffs.drift(grid.node(i) + 0.5 * dx);

    const double max_d2 = d2.cwiseAbs().maxCoeff();
    const double max_d1 = d1f.cwiseAbs().maxCoeff();
    const double rate = 2.0 * max_d2 / (dx * dx) + 2.0 * max_d1 / dx;

    FPResult result;
    double dt;
    if (rate > 0.0) {
        const double dt_bound = opts.stability_safety / rate;
        if (opts.dt > 0.0) {
            dt = opts.dt;
            while (dt > dt_bound) {
                dt *= 0.5;
                result.dt_was_reduced = true;
            }
        } else {
            dt = dt_bound;
        }
    } else {
        dt = (opts.dt > 0.0) ? opts.dt : tau_final;
    }

    long long n_steps = 0;
    if (tau_final > 0.0) {
        if (!(dt > 0.0)) dt = tau_final;
        n_steps = static_cast<long long>(std::ceil(tau_final / dt - 1e-12));
        if (n_steps < 1) n_steps = 1;
        dt = tau_final / static_cast<double>(n_steps);
    }
    result.dt_used = dt;
    result.n_steps = n_steps;

    // Requested sample times snap to whole steps.
    std::vector<long long> sample_steps(opts.sample_taus.size());
    for (size_t k = 0; k < opts.sample_taus.size(); ++k) {
        long long s = (dt > 0.0) ? std::llround(opts.sample_taus[k] / dt) : 0;
        sample_steps[k] = std::clamp<long long>(s, 0, n_steps);
    }

    Eigen::VectorXd h = initial.values;
    Eigen::VectorXd hn(n);
    Eigen::VectorXd flux(n - 1);

    const bool limited = opts.drift_scheme == DriftScheme::limited_upwind;
    size_t sample_ptr = 0;
    auto emit_samples = [&](long long step) {
        while (sample_ptr < sample_steps.size() && sample_steps[sample_ptr] == step) {
            FPDensity snap{grid, initial.tau + dt * step, h};
            result.samples.push_back({snap.tau, snap.mean_weight(), snap.mass()});
            if (opts.store_checkpoints) result.checkpoints.push_back(std::move(snap));
            ++sample_ptr;
        }
    };
    emit_samples(0);

    const double* d2p = d2.data();
    const double* d1p = d1f.data();
    for (long long step = 1; step <= n_steps; ++step) {
        double* hp = h.data();
        double* fp = flux.data();
        for (int i = 0; i + 1 < n; ++i) {
            const double d1 = d1p[i];
            double up = 0.0;
            if (d1 > 0.0) {
                up = hp[i];
                if (limited && i > 0)
                    up += 0.5 * minmod(hp[i] - hp[i - 1], hp[i + 1] - hp[i]);
            } else if (d1 < 0.0) {
                up = hp[i + 1];
                if (limited && i + 2 < n)
                    up -= 0.5 * minmod(hp[i + 1] - hp[i], hp[i + 2] - hp[i + 1]);
            }
            fp[i] = d1 * up - (d2p[i + 1] * hp[i + 1] - d2p[i] * hp[i]) / dx;
        }

        double* hnp = hn.data();
        double min_val = std::numeric_limits<double>::infinity();
        hnp[0] = hp[0] - fp[0] * (2.0 * dt / dx);
        min_val = std::min(min_val, hnp[0]);
        for (int i = 1; i + 1 < n; ++i) {
            hnp[i] = hp[i] + (fp[i - 1] - fp[i]) * (dt / dx);
            min_val = std::min(min_val, hnp[i]);
        }
        hnp[n - 1] = hp[n - 1] + fp[n - 2] * (2.0 * dt / dx);
        min_val = std::min(min_val, hnp[n - 1]);

        if (min_val < -opts.negative_tolerance) {
            int where = 0;
            for (int i = 0; i < n; ++i)
                if (hnp[i] == min_val) { where = i; break; }
            std::ostringstream msg;
            msg << "negative density " << min_val << " at w=" << grid.node(where)
                << ", tau=" << initial.tau + dt * step;
            throw std::runtime_error(msg.str());
        }

        h.swap(hn);
        emit_samples(step);
    }

    result.final_density = FPDensity{grid, initial.tau + dt * n_steps, std::move(h)};
    return result;
}

namespace {

FPDensity evaluate_log_profile(int n_sites, const FPGrid& grid,
                               const std::function<double(double)>& log_shape) {
    check_grid(grid);
    const int n = grid.n_points;
    Eigen::VectorXd logh(n);
    for (int i = 0; i < n; ++i) logh[i] = log_shape(grid.node(i) / n_sites);
    const double peak = logh.maxCoeff();
    FPDensity d{grid, 0.0, (logh.array() - peak).exp().matrix()};
    d.normalize();
    return d;
}

}  // namespace

FPDensity stationary_density(int n_sites, const FPGrid& grid) {
    const double nd = static_cast<double>(n_sites);
    return evaluate_log_profile(n_sites, grid, [nd](double phi) {
        if (phi < 1e-300)  // limit (1 - e^{-2 N phi}) / phi -> 2N
            return 3.0 * nd * kLog3 + std::log(2.0 * nd / 3.0);
        const double action = 4.0 * phi + 3.0 * std::log(3.0 - 2.0 * phi);
        return nd * action - std::log(3.0 - 2.0 * phi) - std::log(phi) +
               std::log1p(-std::exp(-2.0 * nd * phi));
    });
}

FPDensity stationary_density_gaussian(int n_sites, const FPGrid& grid) {
    const double nd = static_cast<double>(n_sites);
    return evaluate_log_profile(n_sites, grid, [nd](double phi) {
        const double dev = phi - 0.75;
        const double expo = -(8.0 * nd / 3.0) * dev * dev;
        if (phi < 1e-300)
            return expo + std::log(2.0 * nd / 3.0);
        return expo - std::log(3.0 - 2.0 * phi) - std::log(phi) +
               std::log1p(-std::exp(-2.0 * nd * phi));
    });
}

}  // namespace scramble

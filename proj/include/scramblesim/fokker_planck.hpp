#pragma once

// Continuum drift-diffusion description of operator weight spreading.
//
// The weight distribution h(w, tau) with rescaled time tau = g^2 t obeys
//   d_tau h = -d_w(D1 h) + d_w^2(D2 h)
// on w in [0, N] with zero-flux walls. Two polynomial coefficient sets are
// provided: a truncated form keeping the leading large-N terms and the full
// form including subleading pieces.

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <vector>

namespace scramble {

enum class CoefficientForm {
    truncated,  // D1 = (2/3)(w - 4w^2/3N), D2 = w/3 - 2w^2/9N
    full,       // D1 = 2(4 + w + 3Nw - 4w^2)/9N, D2 = (-3 + 3N(w-1) + 7w - 2w^2)/9N
};

double drift_coefficient(double w, int n_sites,
                         CoefficientForm form = CoefficientForm::truncated);
double diffusion_coefficient(double w, int n_sites,
                             CoefficientForm form = CoefficientForm::truncated);

// Uniform node grid over [w_min, w_max], boundaries included.
struct FPGrid {
    int n_points = 0;
    double w_min = 0.0;
    double w_max = 0.0;
    int n_sites = 0;

    double spacing() const { return (w_max - w_min) / (n_points - 1); }
    double node(int i) const { return w_min + spacing() * i; }

    static FPGrid full_domain(int n_sites, int n_points);
    static FPGrid over_range(int n_sites, double w_min, double w_max, int n_points);
};

struct FPDensity {
    FPGrid grid;
    double tau = 0.0;
    Eigen::VectorXd values;

    double mass() const;         // trapezoidal integral over w
    double mean_weight() const;  // first moment / mass
    void normalize();            // rescale so mass() == 1
};

// Trapezoidal integral of |a - b| over the shared grid.
double l1_distance(const FPDensity& a, const FPDensity& b);

// Normalized Gaussian bump; a width of one grid spacing stands in for a
// point mass that the node grid cannot represent.
FPDensity gaussian_bump(const FPGrid& grid, double center, double width);

// Time-independent coefficient fields, evaluated once per grid at setup.
struct FPCoefficients {
    std::function<double(double)> drift;
    std::function<double(double)> diffusion;

    // The full-form D2 dips below zero for w slightly under 1, outside the
    // validity of the continuum expansion; the model clamps it at 0 there so
    // the forward integration stays well posed.
    static FPCoefficients weight_model(int n_sites,
                                       CoefficientForm form = CoefficientForm::truncated);
};

enum class DriftScheme {
    upwind,        // first-order donor cell
    limited_upwind // second-order reconstruction with a minmod limiter
};

struct FPOptions {
    double dt = 0.0;                  // 0 selects the stability-limited step
    double stability_safety = 0.9;    // fraction of the explicit stability bound
    std::vector<double> sample_taus;  // ascending; sampled at the nearest step
    bool store_checkpoints = false;   // keep full densities at sample times
    double negative_tolerance = 1e-8; // abort if any value drops below -tol
    DriftScheme drift_scheme = DriftScheme::limited_upwind;
};

struct FPSample {
    double tau = 0.0;
    double mean_weight = 0.0;
    double mass = 0.0;
};

struct FPResult {
    std::vector<FPSample> samples;
    std::vector<FPDensity> checkpoints;
    FPDensity final_density;
    double dt_used = 0.0;
    bool dt_was_reduced = false;  // requested step violated the stability bound
    long long n_steps = 0;
};

// Conservative finite-volume march: upwind drift flux, centered diffusion
// flux, zero flux through both walls, explicit Euler in time. Boundary nodes
// own half cells so the trapezoidal mass is conserved exactly.
FPResult integrate_fp(const FPDensity& initial, const FPCoefficients& coeffs,
                      double tau_final, const FPOptions& opts = {});

// Late-time profile h ~ e^{N S(phi)} / ((3 - 2 phi) phi) * [1 - e^{-2 N phi}]
// with S(phi) = 4 phi + 3 log(3 - 2 phi), phi = w/N, normalized on the grid.
FPDensity stationary_density(int n_sites, const FPGrid& grid);

// Gaussian approximation around the peak phi0 = 3/4:
// exp(-(8N/3)(phi - 3/4)^2) / ((3 - 2 phi) phi) * [1 - e^{-2 N phi}].
FPDensity stationary_density_gaussian(int n_sites, const FPGrid& grid);

}  // namespace scramble

#include "scramblesim/spin_chain.hpp"

#include "scramblesim/common.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace scramble {

namespace {

using cd = std::complex<double>;

void check_sites(int n_sites, int max_sites) {
    if (n_sites < 1 || n_sites > max_sites)
        throw std::invalid_argument("site count out of the dense-vector range");
}

int rotate_left(int b, int n_sites) {
    const int mask = (1 << n_sites) - 1;
    return ((b << 1) | (b >> (n_sites - 1))) & mask;
}

}  // namespace

SpinChainState haar_random_state(int n_sites, std::mt19937_64& rng) {
    check_sites(n_sites, 26);
    const int dim = 1 << n_sites;
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpinChainState state{n_sites, Eigen::VectorXcd(dim)};
    for (int b = 0; b < dim; ++b) state.amplitudes[b] = cd{gauss(rng), gauss(rng)};
    state.amplitudes /= state.amplitudes.norm();
    return state;
}

SpinChainState plus_y_product_state(int n_sites) {
    check_sites(n_sites, 26);
    const int dim = 1 << n_sites;
    const double scale = std::pow(2.0, -0.5 * n_sites);
    static const cd i_power[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    SpinChainState state{n_sites, Eigen::VectorXcd(dim)};
    for (int b = 0; b < dim; ++b)
        state.amplitudes[b] =
            scale * i_power[__builtin_popcount(static_cast<unsigned>(b)) & 3];
    return state;
}

void apply_z(SpinChainState& state, int site) {
    if (site < 1 || site > state.n_sites)
        throw std::invalid_argument("site out of range");
    const int bit = 1 << (site - 1);
    const int dim = static_cast<int>(state.amplitudes.size());
    for (int b = 0; b < dim; ++b)
        if (b & bit) state.amplitudes[b] = -state.amplitudes[b];
}

ChainHamiltonian::ChainHamiltonian(const ChainHamiltonianParams& params)
    : params_(params) {
    check_sites(params.n_sites, 26);
    const int n = params.n_sites;
    const int dim = 1 << n;
    const int open_mask = (1 << (n - 1)) - 1;
    const double g_over = n > 0 ? params.global_g / (2.0 * std::sqrt(double(n))) : 0.0;

    diagonal_.resize(dim);
    for (int b = 0; b < dim; ++b) {
        int zz;
        if (params.boundary == Boundary::open) {
            zz = (n - 1) - 2 * __builtin_popcount(static_cast<unsigned>((b ^ (b >> 1)) & open_mask));
        } else {
            zz = n - 2 * __builtin_popcount(static_cast<unsigned>(b ^ rotate_left(b, n)));
        }
        const double m = n - 2 * __builtin_popcount(static_cast<unsigned>(b));
        diagonal_[b] = -params.ising_j * zz - params.field_z * m - g_over * (m * m - n);
    }
    norm_bound_ = diagonal_.cwiseAbs().maxCoeff() + n * std::abs(params.field_x);
}

Eigen::VectorXcd ChainHamiltonian::apply(const Eigen::VectorXcd& x) const {
    const int n = params_.n_sites;
    const int dim = 1 << n;
    Eigen::VectorXcd y(dim);
    for (int b = 0; b < dim; ++b) y[b] = diagonal_[b] * x[b];
    const double hx = params_.field_x;
    if (hx != 0.0) {
        for (int i = 0; i < n; ++i) {
            const int bit = 1 << i;
            for (int b = 0; b < dim; ++b) {
                if (b & bit) continue;
                y[b] -= hx * x[b | bit];
                y[b | bit] -= hx * x[b];
            }
        }
    }
    return y;
}

SpinChainState apply_hamiltonian(const SpinChainState& state,
                                 const ChainHamiltonianParams& params) {
    if (state.n_sites != params.n_sites)
        throw std::invalid_argument("state size does not match the parameters");
    const ChainHamiltonian h(params);
    return {state.n_sites, h.apply(state.amplitudes)};
}

namespace {

struct LanczosBasis {
    Eigen::MatrixXcd v;        // orthonormal Krylov vectors, one per column
    Eigen::VectorXd ritz;      // eigenvalues of the tridiagonal projection
    Eigen::MatrixXd ritz_vec;  // its eigenvectors
    double residual_beta = 0.0;
    double input_norm = 0.0;
    int dim_used = 0;
};

LanczosBasis build_lanczos(const ChainHamiltonian& h, const Eigen::VectorXcd& x,
                           int m) {
    LanczosBasis basis;
    basis.input_norm = x.norm();
    const auto dim = x.size();
    if (basis.input_norm == 0.0) {
        basis.dim_used = 0;
        return basis;
    }

    Eigen::MatrixXcd v(dim, m);
    Eigen::VectorXd alpha(m), beta(m);
    v.col(0) = x / basis.input_norm;
    int used = m;
    double residual = 0.0;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXcd w = h.apply(v.col(j));
        alpha[j] = v.col(j).dot(w).real();
        w -= alpha[j] * v.col(j);
        if (j > 0) w -= beta[j - 1] * v.col(j - 1);
        // One full extra orthogonalization pass keeps the basis clean enough
        // for the 1e-10 step tolerance.
        for (int i = 0; i <= j; ++i) w -= v.col(i).dot(w) * v.col(i);
        const double b = w.norm();
        if (b < 1e-13 * std::max(1.0, h.norm_bound())) {
            used = j + 1;
            residual = 0.0;  // invariant subspace, projection is exact
            break;
        }
        beta[j] = b;
        residual = b;
        if (j + 1 < m) v.col(j + 1) = w / b;
    }

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
    for (int j = 0; j < used; ++j) {
        t(j, j) = alpha[j];
        if (j + 1 < used) t(j, j + 1) = t(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    basis.v = v.leftCols(used);
    basis.ritz = es.eigenvalues();
    basis.ritz_vec = es.eigenvectors();
    basis.residual_beta = residual;
    basis.dim_used = used;
    return basis;
}

// exp(-i T dt) e_1 scaled by the input norm, in the Lanczos coordinates.
Eigen::VectorXcd propagate_coefficients(const LanczosBasis& basis, double dt) {
    const int m = basis.dim_used;
    Eigen::VectorXcd phases(m);
    for (int i = 0; i < m; ++i)
        phases[i] = std::polar(basis.input_norm, -basis.ritz[i] * dt) *
                    basis.ritz_vec(0, i);
    return basis.ritz_vec.cast<cd>() * phases;
}

}  // namespace

void evolve_in_place(SpinChainState& state, const ChainHamiltonian& h, double t,
                     const EvolveOptions& opts) {
    if (state.n_sites != h.params().n_sites)
        throw std::invalid_argument("state size does not match the Hamiltonian");
    if (opts.krylov_dim < 2) throw std::invalid_argument("krylov_dim must be >= 2");
    if (t == 0.0) return;

    const double total = std::abs(t);
    const double sign = t > 0.0 ? 1.0 : -1.0;
    double remaining = total;
    double dt = opts.initial_dt > 0.0
                    ? opts.initial_dt
                    : opts.krylov_dim / (2.0 * std::max(h.norm_bound(), 1e-30));
    dt = std::min(dt, remaining);

    while (remaining > 0.0) {
        const LanczosBasis basis = build_lanczos(h, state.amplitudes, opts.krylov_dim);
        if (basis.dim_used == 0) return;  // zero vector stays zero
        Eigen::VectorXcd coeff;
        for (;;) {
            coeff = propagate_coefficients(basis, sign * dt);
            const double err =
                basis.residual_beta * std::abs(coeff[basis.dim_used - 1]);
            if (err <= opts.tolerance * std::max(basis.input_norm, 1e-30)) break;
            dt *= 0.5;
            if (dt < 1e-15 * total)
                throw std::runtime_error("propagator step size collapsed");
        }
        state.amplitudes = basis.v * coeff;
        remaining -= dt;
        dt = std::min(dt * 1.5, remaining);
    }
}

SpinChainState evolve_state(const SpinChainState& state,
                            const ChainHamiltonianParams& params, double t,
                            const EvolveOptions& opts) {
    const ChainHamiltonian h(params);
    SpinChainState out = state;
    evolve_in_place(out, h, t, opts);
    return out;
}

OtocSeries otoc(const ChainHamiltonianParams& params, int r,
                const std::vector<double>& times, std::uint64_t seed,
                int n_states, const EvolveOptions& opts) {
    check_sites(params.n_sites, 26);
    if (r < 1 || r > params.n_sites)
        throw std::invalid_argument("probe site out of range");
    if (n_states < 1) throw std::invalid_argument("need at least one state");
    if (!std::is_sorted(times.begin(), times.end()) ||
        (!times.empty() && times.front() < 0.0))
        throw std::invalid_argument("times must be ascending and nonnegative");

    const ChainHamiltonian h(params);
    OtocSeries series;
    series.probe_site = r;
    series.times = times;
    series.values.assign(times.size(), 0.0);
    series.imag_error.assign(times.size(), 0.0);

    for (int s = 0; s < n_states; ++s) {
        std::mt19937_64 rng = make_rng(seed, static_cast<std::uint64_t>(s));
        const SpinChainState psi = haar_random_state(params.n_sites, rng);
        SpinChainState fwd_psi = psi;   // U(t) |psi>
        SpinChainState fwd_zr = psi;    // U(t) Z_r |psi>
        apply_z(fwd_zr, r);
        double t_cur = 0.0;
        for (std::size_t idx = 0; idx < times.size(); ++idx) {
            const double t = times[idx];
            evolve_in_place(fwd_psi, h, t - t_cur, opts);
            evolve_in_place(fwd_zr, h, t - t_cur, opts);
            t_cur = t;

            // F = < Z_1 U psi | U Z_r U^dag Z_1 U Z_r psi >
            SpinChainState x = fwd_zr;
            apply_z(x, 1);
            evolve_in_place(x, h, -t, opts);
            apply_z(x, r);
            evolve_in_place(x, h, t, opts);
            SpinChainState l = fwd_psi;
            apply_z(l, 1);
            const cd f = l.amplitudes.dot(x.amplitudes);
            series.values[idx] += f.real();
            series.imag_error[idx] += std::abs(f.imag());
        }
    }
    for (std::size_t idx = 0; idx < times.size(); ++idx) {
        series.values[idx] /= n_states;
        series.imag_error[idx] /= n_states;
    }
    return series;
}

std::vector<EntropyPoint> entanglement_entropy_quench(
    const ChainHamiltonianParams& params, const std::vector<double>& times,
    const EvolveOptions& opts) {
    check_sites(params.n_sites, 26);
    if (!std::is_sorted(times.begin(), times.end()) ||
        (!times.empty() && times.front() < 0.0))
        throw std::invalid_argument("times must be ascending and nonnegative");

    const ChainHamiltonian h(params);
    const int n_left = params.n_sites / 2;
    const int rows = 1 << n_left;
    const int cols = 1 << (params.n_sites - n_left);

    SpinChainState state = plus_y_product_state(params.n_sites);
    std::vector<EntropyPoint> out;
    out.reserve(times.size());
    double t_cur = 0.0;
    for (const double t : times) {
        evolve_in_place(state, h, t - t_cur, opts);
        t_cur = t;
        // Column-major map: the left cut holds the low bits.
        Eigen::Map<const Eigen::MatrixXcd> m(state.amplitudes.data(), rows, cols);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        double entropy = 0.0;
        for (int i = 0; i < svd.singularValues().size(); ++i) {
            const double p = svd.singularValues()[i] * svd.singularValues()[i];
            if (p > 1e-300) entropy -= p * std::log(p);
        }
        out.push_back({t, entropy});
    }
    return out;
}

std::vector<double> gap_ratios(const std::vector<double>& eigenvalues) {
    std::vector<double> sorted = eigenvalues;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> ratios;
    if (sorted.size() < 3) return ratios;
    const double spread = sorted.back() - sorted.front();
    const double tiny = 1e-12 * std::max(1.0, spread);
    for (std::size_t i = 2; i < sorted.size(); ++i) {
        const double prev = sorted[i - 1] - sorted[i - 2];
        const double cur = sorted[i] - sorted[i - 1];
        if (prev <= tiny && cur <= tiny) continue;  // degenerate pair, undefined
        if (prev <= tiny || cur <= tiny) {
            ratios.push_back(0.0);
        } else {
            ratios.push_back(std::min(cur / prev, prev / cur));
        }
    }
    return ratios;
}

namespace {

struct SymmetryOrbit {
    int representative = 0;
    // Image of the representative under spin flip s then j translations,
    // indexed g = s * n_sites + j.
    std::vector<int> image;
};

std::vector<SymmetryOrbit> build_orbits(int n_sites) {
    const int dim = 1 << n_sites;
    const int mask = dim - 1;
    std::vector<bool> visited(dim, false);
    std::vector<SymmetryOrbit> orbits;
    for (int b0 = 0; b0 < dim; ++b0) {
        if (visited[b0]) continue;
        SymmetryOrbit orbit;
        orbit.representative = b0;
        orbit.image.resize(2 * n_sites);
        for (int s = 0; s < 2; ++s) {
            int b = s == 0 ? b0 : (~b0 & mask);
            for (int j = 0; j < n_sites; ++j) {
                orbit.image[s * n_sites + j] = b;
                visited[b] = true;
                b = rotate_left(b, n_sites);
            }
        }
        orbits.push_back(std::move(orbit));
    }
    return orbits;
}

using SparseVec = std::vector<std::pair<int, cd>>;

// Character-projected orbit state for momentum k and spin-flip parity p;
// empty when the character is nontrivial on the orbit stabilizer.
SparseVec project_orbit(const SymmetryOrbit& orbit, int n_sites, int k, int parity) {
    std::unordered_map<int, cd> amp;
    for (int s = 0; s < 2; ++s)
        for (int j = 0; j < n_sites; ++j) {
            const cd chi_conj =
                std::polar(1.0, -2.0 * M_PI * k * j / n_sites) *
                (s == 1 && parity < 0 ? -1.0 : 1.0);
            amp[orbit.image[s * n_sites + j]] += chi_conj;
        }
    double norm2 = 0.0;
    for (const auto& [b, a] : amp) norm2 += std::norm(a);
    SparseVec vec;
    if (norm2 < 1.0) return vec;  // genuine norms are at least the group order
    const double inv = 1.0 / std::sqrt(norm2);
    vec.reserve(amp.size());
    for (const auto& [b, a] : amp)
        if (std::norm(a) > 1e-20) vec.emplace_back(b, a * inv);
    std::sort(vec.begin(), vec.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return vec;
}

}  // namespace

LevelStatistics level_statistics(const ChainHamiltonianParams& params,
                                 int min_sector_dim,
                                 std::uint64_t bootstrap_seed) {
    check_sites(params.n_sites, 16);
    if (params.boundary != Boundary::periodic)
        throw std::invalid_argument("momentum resolution needs a periodic chain");
    if (params.field_z != 0.0)
        throw std::invalid_argument("the global spin flip requires h_z = 0");

    const int n = params.n_sites;
    const int dim = 1 << n;
    const ChainHamiltonian h(params);
    const std::vector<SymmetryOrbit> orbits = build_orbits(n);

    LevelStatistics stats;
    stats.min_sector_dim = min_sector_dim;
    std::vector<double> pooled;
    int dim_total = 0;

    for (int k = 0; k < n; ++k) {
        for (int parity = 1; parity >= -1; parity -= 2) {
            std::vector<SparseVec> basis;
            for (const SymmetryOrbit& orbit : orbits) {
                SparseVec vec = project_orbit(orbit, n, k, parity);
                if (!vec.empty()) basis.push_back(std::move(vec));
            }
            const int d = static_cast<int>(basis.size());
            dim_total += d;
            SectorStatistics sector;
            sector.momentum = k;
            sector.spinflip_parity = parity;
            sector.dimension = d;
            if (d == 0) {
                stats.sectors.push_back(std::move(sector));
                continue;
            }

            Eigen::MatrixXcd block(d, d);
            double max_offblock = 0.0;
            Eigen::VectorXcd x(dim), y;
            for (int j = 0; j < d; ++j) {
                x.setZero();
                for (const auto& [b, a] : basis[j]) x[b] = a;
                y = h.apply(x);
                for (int i = 0; i < d; ++i) {
                    cd m = 0.0;
                    for (const auto& [b, a] : basis[i]) m += std::conj(a) * y[b];
                    block(i, j) = m;
                }
                // Subtract the in-block part explicitly; the remainder is
                // coupling out of the sector and must vanish.
                for (int i = 0; i < d; ++i)
                    for (const auto& [b, a] : basis[i]) y[b] -= block(i, j) * a;
                max_offblock = std::max(max_offblock, y.norm());
            }
            sector.max_offblock = max_offblock;

            const double asym = (block - block.adjoint()).cwiseAbs().maxCoeff();
            if (asym > 1e-10 * std::max(1.0, block.cwiseAbs().maxCoeff()))
                throw std::runtime_error("projected block is not Hermitian");
            block = ((block + block.adjoint()) / 2.0).eval();

            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block,
                                                               Eigen::EigenvaluesOnly);
            sector.eigenvalues.assign(es.eigenvalues().data(),
                                      es.eigenvalues().data() + d);
            const std::vector<double> ratios = gap_ratios(sector.eigenvalues);
            sector.n_gap_ratios = static_cast<int>(ratios.size());
            sector.mean_r = ratios.empty() ? 0.0 : mean_of(ratios);
            if (d >= min_sector_dim)
                pooled.insert(pooled.end(), ratios.begin(), ratios.end());
            stats.sectors.push_back(std::move(sector));
        }
    }

    if (dim_total != dim)
        throw std::runtime_error("symmetry sectors do not partition the space");

    stats.n_pooled = static_cast<int>(pooled.size());
    if (!pooled.empty()) {
        stats.pooled_mean_r = mean_of(pooled);
        std::mt19937_64 rng = make_rng(bootstrap_seed, 0);
        std::uniform_int_distribution<std::size_t> pick(0, pooled.size() - 1);
        const int n_boot = 200;
        std::vector<double> means(n_boot);
        for (int b = 0; b < n_boot; ++b) {
            double sum = 0.0;
            for (std::size_t i = 0; i < pooled.size(); ++i) sum += pooled[pick(rng)];
            means[b] = sum / pooled.size();
        }
        stats.bootstrap_error = stddev_of(means);
    }
    return stats;
}

Eigen::MatrixXd dense_hamiltonian(const ChainHamiltonianParams& params) {
    check_sites(params.n_sites, 12);
    const ChainHamiltonian h(params);
    const int dim = 1 << params.n_sites;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (int b = 0; b < dim; ++b) m(b, b) = h.diagonal()[b];
    for (int i = 0; i < params.n_sites; ++i) {
        const int bit = 1 << i;
        for (int b = 0; b < dim; ++b) {
            if (b & bit) continue;
            m(b, b | bit) -= params.field_x;
            m(b | bit, b) -= params.field_x;
        }
    }
    return m;
}

}  // namespace scramble

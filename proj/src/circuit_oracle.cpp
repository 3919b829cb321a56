#include "scramblesim/circuit_oracle.hpp"

#include "scramblesim/common.hpp"

#include <cmath>
#include <stdexcept>

namespace scramble {

namespace {

using cd = std::complex<double>;

void check_dense_size(int n_sites) {
    if (n_sites < 1 || n_sites > 10)
        throw std::invalid_argument("dense circuit simulation supports 1..10 sites");
}

// Single-site Pauli element connecting row bit rb to column bit rb^flip.
cd pauli_element(int axis, int rb) {
    switch (axis) {
        case 0: return {1.0, 0.0};                       // I, diagonal
        case 1: return {1.0, 0.0};                       // X, off-diagonal
        case 2: return rb ? cd{0.0, 1.0} : cd{0.0, -1.0}; // Y(1,0)=i, Y(0,1)=-i
        case 3: return rb ? cd{-1.0, 0.0} : cd{1.0, 0.0}; // Z, diagonal
    }
    throw std::invalid_argument("pauli axis must be in 0..3");
}

}  // namespace

PauliOperatorState PauliOperatorState::from_string_code(int n_sites,
                                                        std::uint64_t code) {
    check_dense_size(n_sites);
    const int dim = 1 << n_sites;
    int flip = 0;
    std::vector<int> axes(n_sites);
    std::uint64_t c = code;
    for (int k = 0; k < n_sites; ++k, c >>= 2) {
        axes[k] = static_cast<int>(c & 3);
        if (axes[k] == 1 || axes[k] == 2) flip |= 1 << k;
    }
    if (c != 0) throw std::invalid_argument("string code has digits beyond n_sites");

    PauliOperatorState op{n_sites, Eigen::MatrixXcd::Zero(dim, dim)};
    for (int r = 0; r < dim; ++r) {
        cd val{1.0, 0.0};
        for (int k = 0; k < n_sites; ++k) val *= pauli_element(axes[k], (r >> k) & 1);
        op.matrix(r, r ^ flip) = val;
    }
    return op;
}

PauliOperatorState PauliOperatorState::single_site_pauli(int n_sites, int site,
                                                         int axis) {
    if (site < 1 || site > n_sites) throw std::invalid_argument("site out of range");
    if (axis < 1 || axis > 3) throw std::invalid_argument("axis must be 1..3");
    return from_string_code(n_sites, static_cast<std::uint64_t>(axis)
                                         << (2 * (site - 1)));
}

PauliOperatorState PauliOperatorState::identity(int n_sites) {
    return from_string_code(n_sites, 0);
}

Eigen::Matrix2cd haar_unitary(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto g = [&] { return cd{gauss(rng), gauss(rng)}; };
    Eigen::Vector2cd a{g(), g()}, b{g(), g()};
    a /= a.norm();
    b -= a.dot(b) * a;  // Eigen's dot conjugates the first argument
    b /= b.norm();
    Eigen::Matrix2cd u;
    u.col(0) = a;
    u.col(1) = b;
    return u;
}

HaarLayer sample_haar_layer(int n_sites, std::mt19937_64& rng) {
    HaarLayer layer;
    layer.site_unitaries.reserve(n_sites);
    for (int k = 0; k < n_sites; ++k) layer.site_unitaries.push_back(haar_unitary(rng));
    return layer;
}

void apply_global_coupling(PauliOperatorState& op, const CircuitParams& params) {
    check_dense_size(op.n_sites);
    const int n = op.n_sites;
    const int dim = 1 << n;
    const double quarter = params.g_prime() / 4.0;
    std::vector<cd> phase(dim);
    for (int b = 0; b < dim; ++b) {
        const int m = n - 2 * __builtin_popcount(static_cast<unsigned>(b));
        const double arg = -quarter * (static_cast<double>(m) * m - n);
        phase[b] = std::polar(1.0, arg);
    }
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r)
            op.matrix(r, c) *= std::conj(phase[r]) * phase[c];
}

void apply_site_layer(PauliOperatorState& op, const HaarLayer& layer) {
    const int n = op.n_sites;
    if (static_cast<int>(layer.site_unitaries.size()) != n)
        throw std::invalid_argument("layer size does not match operator");
    const int dim = 1 << n;
    Eigen::MatrixXcd& m = op.matrix;
    for (int k = 0; k < n; ++k) {
        const Eigen::Matrix2cd& u = layer.site_unitaries[k];
        const int bit = 1 << k;
        const cd u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
        // Rows pick up u^dag from the left.
        for (int c = 0; c < dim; ++c)
            for (int r0 = 0; r0 < dim; ++r0) {
                if (r0 & bit) continue;
                const int r1 = r0 | bit;
                const cd a = m(r0, c), b = m(r1, c);
                m(r0, c) = std::conj(u00) * a + std::conj(u10) * b;
                m(r1, c) = std::conj(u01) * a + std::conj(u11) * b;
            }
        // Columns pick up u from the right.
        for (int c0 = 0; c0 < dim; ++c0) {
            if (c0 & bit) continue;
            const int c1 = c0 | bit;
            for (int r = 0; r < dim; ++r) {
                const cd a = m(r, c0), b = m(r, c1);
                m(r, c0) = a * u00 + b * u10;
                m(r, c1) = a * u01 + b * u11;
            }
        }
    }
}

void apply_circuit_step(PauliOperatorState& op, const HaarLayer& layer,
                        const CircuitParams& params) {
    apply_global_coupling(op, params);
    apply_site_layer(op, layer);
}

namespace {

// Radix-4 butterfly per site over the flattened matrix (row bits high,
// column bits low); afterwards slot bits (rbit, cbit) encode the Pauli digit
// 2*rbit + cbit, i.e. 0=I, 1=X, 2=Y, 3=Z.
std::vector<cd> string_transform(const PauliOperatorState& op) {
    check_dense_size(op.n_sites);
    const int n = op.n_sites;
    const int dim = 1 << n;
    const std::size_t total = std::size_t(1) << (2 * n);
    std::vector<cd> buf(total);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            buf[(static_cast<std::size_t>(r) << n) | static_cast<unsigned>(c)] =
                op.matrix(r, c);

    const cd half{0.5, 0.0}, half_i{0.0, 0.5};
    for (int k = 0; k < n; ++k) {
        const std::size_t cbit = std::size_t(1) << k;
        const std::size_t rbit = std::size_t(1) << (n + k);
        for (std::size_t idx = 0; idx < total; ++idx) {
            if (idx & (cbit | rbit)) continue;
            const cd m00 = buf[idx], m01 = buf[idx | cbit];
            const cd m10 = buf[idx | rbit], m11 = buf[idx | cbit | rbit];
            buf[idx] = half * (m00 + m11);                 // I
            buf[idx | cbit] = half * (m01 + m10);          // X
            buf[idx | rbit] = half_i * (m01 - m10);        // Y
            buf[idx | cbit | rbit] = half * (m00 - m11);   // Z
        }
    }
    return buf;
}

}  // namespace

std::vector<double> pauli_coefficients(const PauliOperatorState& op) {
    const int n = op.n_sites;
    const std::vector<cd> buf = string_transform(op);
    std::vector<double> out(buf.size());
    for (std::size_t idx = 0; idx < buf.size(); ++idx) {
        std::size_t code = 0;
        for (int k = 0; k < n; ++k) {
            const std::size_t digit =
                ((idx >> k) & 1) | (((idx >> (n + k)) & 1) << 1);
            code |= digit << (2 * k);
        }
        out[code] = buf[idx].real();
    }
    return out;
}

WeightDistribution pauli_spectrum(const PauliOperatorState& op) {
    const int n = op.n_sites;
    const std::vector<cd> buf = string_transform(op);
    WeightDistribution dist = WeightDistribution::zero(n);
    const std::size_t low_mask = (std::size_t(1) << n) - 1;
    for (std::size_t idx = 0; idx < buf.size(); ++idx) {
        const double p = std::norm(buf[idx]);
        if (p == 0.0) continue;
        const std::size_t support = (idx & low_mask) | (idx >> n);
        const int w = __builtin_popcountll(support);
        const int w1 = static_cast<int>(support & 1);
        dist.h[WeightDistribution::packed_index(n, w, w1)] += p;
    }
    return dist;
}

MonteCarloResult monte_carlo_weight_distribution(const CircuitParams& params,
                                                 int steps, int n_realizations,
                                                 std::uint64_t seed) {
    check_dense_size(params.n_sites);
    if (steps < 0) throw std::invalid_argument("steps must be nonnegative");
    if (n_realizations < 2)
        throw std::invalid_argument("need at least two realizations for errors");

    const int n = params.n_sites;
    const int bins = 2 * n;
    std::vector<Eigen::VectorXd> sum(steps + 1, Eigen::VectorXd::Zero(bins));
    std::vector<Eigen::VectorXd> sumsq(steps + 1, Eigen::VectorXd::Zero(bins));
    std::vector<double> csum(steps + 1, 0.0), csumsq(steps + 1, 0.0);

    for (int i = 0; i < n_realizations; ++i) {
        std::mt19937_64 rng = make_rng(seed, static_cast<std::uint64_t>(i));
        const int axis = std::uniform_int_distribution<int>(1, 3)(rng);
        PauliOperatorState op = PauliOperatorState::single_site_pauli(n, 1, axis);
        for (int t = 0; t <= steps; ++t) {
            if (t > 0) apply_circuit_step(op, sample_haar_layer(n, rng), params);
            const WeightDistribution spec = pauli_spectrum(op);
            sum[t] += spec.h;
            sumsq[t] += spec.h.cwiseProduct(spec.h);
            const double c = mean_commutator(spec);
            csum[t] += c;
            csumsq[t] += c * c;
        }
    }

    MonteCarloResult result;
    result.params = params;
    result.n_realizations = n_realizations;
    const double nr = static_cast<double>(n_realizations);
    for (int t = 0; t <= steps; ++t) {
        WeightDistribution mean = WeightDistribution::zero(n);
        mean.time_step = t;
        mean.h = sum[t] / nr;
        Eigen::VectorXd variance =
            (sumsq[t] / nr - mean.h.cwiseProduct(mean.h)).cwiseMax(0.0);
        result.sem.push_back((variance / (nr - 1.0)).cwiseSqrt());
        result.mean.push_back(std::move(mean));
        const double cmean = csum[t] / nr;
        const double cvar = std::max(0.0, csumsq[t] / nr - cmean * cmean);
        result.commutator_mean.push_back(cmean);
        result.commutator_sem.push_back(std::sqrt(cvar / (nr - 1.0)));
    }
    return result;
}

CommutatorEstimate direct_squared_commutator(const CircuitParams& params, int r,
                                             int t, int n_realizations,
                                             std::uint64_t seed) {
    check_dense_size(params.n_sites);
    const int n = params.n_sites;
    if (r < 1 || r > n) throw std::invalid_argument("probe site out of range");
    if (t < 0) throw std::invalid_argument("time step must be nonnegative");
    if (t == 0) return {r == 1 ? 2.0 : 0.0, 0.0};
    if (n_realizations < 2)
        throw std::invalid_argument("need at least two realizations for errors");

    const int dim = 1 << n;
    const int bit = 1 << (r - 1);
    double csum = 0.0, csumsq = 0.0;
    for (int i = 0; i < n_realizations; ++i) {
        std::mt19937_64 rng = make_rng(seed, static_cast<std::uint64_t>(i));
        const int axis = std::uniform_int_distribution<int>(1, 3)(rng);
        PauliOperatorState op = PauliOperatorState::single_site_pauli(n, 1, axis);
        for (int s = 0; s < t; ++s)
            apply_circuit_step(op, sample_haar_layer(n, rng), params);

        // C = ||[O, Y_r]||_F^2 / 2^{N+1}; the commutator of Hermitian
        // operators is anti-Hermitian, so -tr(K^2) is its Frobenius norm.
        double frob = 0.0;
        for (int b = 0; b < dim; ++b)
            for (int a = 0; a < dim; ++a) {
                const cd left = ((a & bit) ? cd{0.0, 1.0} : cd{0.0, -1.0}) *
                                op.matrix(a ^ bit, b);
                const cd right = ((b & bit) ? cd{0.0, -1.0} : cd{0.0, 1.0}) *
                                 op.matrix(a, b ^ bit);
                frob += std::norm(left - right);
            }
        const double c = frob / (2.0 * dim);
        csum += c;
        csumsq += c * c;
    }
    const double nr = static_cast<double>(n_realizations);
    const double mean = csum / nr;
    const double var = std::max(0.0, csumsq / nr - mean * mean);
    return {mean, std::sqrt(var / (nr - 1.0))};
}

}  // namespace scramble

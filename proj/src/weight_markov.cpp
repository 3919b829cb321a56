#include "scramblesim/weight_markov.hpp"

#include "scramblesim/common.hpp"

#include <stdexcept>

namespace scramble {

namespace {

const double kLog3 = std::log(3.0);

void check_params(const CircuitParams& p) {
    if (p.n_sites < 1) throw std::invalid_argument("CircuitParams: n_sites must be >= 1");
    if (!(p.coupling_exponent >= 0.0))
        throw std::invalid_argument("CircuitParams: coupling_exponent must be >= 0");
}

void check_wwv(const CircuitParams& p, int w, int wp, int v) {
    const int n = p.n_sites;
    if (w < 0 || wp < 0 || w > n || wp > n)
        throw std::invalid_argument("w_matrix_element: weights must lie in [0, N]");
    if (v < 0 || v > std::min(w, wp))
        throw std::invalid_argument("w_matrix_element: overlap must lie in [0, min(w,w')]");
    if (w + wp - v > n)
        throw std::invalid_argument("w_matrix_element: union of supports exceeds N");
}

// Inner sum over the magnetization channel: depends only on (k, delta) where
// delta = w + w' - 2v. The 2l = k diagonal is excluded from the trig sum and
// reinstated as an explicit Kronecker term in the delta = 0 channel, so the
// sin^0 ambiguity never arises.
double log_inner_sum(int n, double g_prime, int k, int delta, const LogFactorialTable& lf) {
    LogSumAcc acc;
    for (int l = 0; l <= k; ++l) {
        if (2 * l == k) continue;
        const double theta = static_cast<double>(2 * l - k) * g_prime;
        const double c2 = std::cos(theta) * std::cos(theta);
        const double s2 = std::sin(theta) * std::sin(theta);
        const double lt = lf.log_binom(k, l) + log_pow(c2, n - k - delta) + log_pow(s2, delta);
        acc.add(lt);
    }
    if (delta == 0 && k % 2 == 0) acc.add(lf.log_binom(k, k / 2));
    return acc.log_value();
}

}  // namespace

int WeightDistribution::packed_index(int n_sites, int w, int w1) {
    if (w1 != 0 && w1 != 1) throw std::invalid_argument("WeightDistribution: w1 must be 0 or 1");
    if (w < w1 || w > n_sites - 1 + w1)
        throw std::invalid_argument("WeightDistribution: w out of range for this w1 sector");
    return w1 * n_sites + (w - w1);
}

WeightDistribution WeightDistribution::zero(int n_sites) {
    if (n_sites < 1) throw std::invalid_argument("WeightDistribution: n_sites must be >= 1");
    WeightDistribution d;
    d.n_sites = n_sites;
    d.h = Eigen::VectorXd::Zero(2 * n_sites);
    return d;
}

WeightDistribution WeightDistribution::initial(int n_sites) {
    WeightDistribution d = zero(n_sites);
    d.at(1, 1) = 1.0;
    return d;
}

double WeightDistribution::at(int w, int w1) const { return h[packed_index(n_sites, w, w1)]; }
double& WeightDistribution::at(int w, int w1) { return h[packed_index(n_sites, w, w1)]; }

double WeightDistribution::marginal(int w) const {
    if (w == 0) return at(0, 0);
    if (w == n_sites) return at(n_sites, 1);
    return at(w, 0) + at(w, 1);
}

double WeightDistribution::mean_weight() const {
    double m = 0.0;
    for (int w1 = 0; w1 <= 1; ++w1)
        for (int w = w1; w <= n_sites - 1 + w1; ++w) m += static_cast<double>(w) * at(w, w1);
    return m;
}

double w_matrix_element(const CircuitParams& p, int w, int wp, int v) {
    check_params(p);
    check_wwv(p, w, wp, v);
    const int n = p.n_sites;
    const int delta = w + wp - 2 * v;
    const double gp = p.g_prime();
    LogFactorialTable lf(n + 1);
    LogSumAcc acc;
    for (int k = 0; k <= v; ++k) {
        const double inner = log_inner_sum(n, gp, k, delta, lf);
        if (inner == kNegInf) continue;
        acc.add(lf.log_binom(v, k) + inner);
    }
    if (acc.empty()) return 0.0;
    return std::exp(acc.log_value() - static_cast<double>(w + wp) * kLog3);
}

double w_matrix_element_small_g(const CircuitParams& p, int w, int wp, int v) {
    check_params(p);
    check_wwv(p, w, wp, v);
    const int n = p.n_sites;
    const int delta = w + wp - 2 * v;
    if (delta >= 2) return 0.0;  // higher channels open only at O(g'^4)
    const double gp2 = p.g_prime() * p.g_prime();
    const double base = std::pow(1.0 / 3.0, w + wp - v);
    if (delta == 0)
        return base * (1.0 + gp2 * (2.0 * v / 9.0) * (1.0 - 3.0 * n + 2.0 * v));
    return base * gp2 * (2.0 * v / 3.0);
}

TransitionMatrix build_transition_matrix(const CircuitParams& p) {
    check_params(p);
    const int n = p.n_sites;
    const double gp = p.g_prime();
    if (std::sin(gp) == 0.0) {
        // The coupling gate is a global phase: nothing moves. Building the
        // identity directly keeps this case exact instead of ~1e-12 close.
        TransitionMatrix id;
        id.params = p;
        id.r = Eigen::MatrixXd::Identity(2 * n, 2 * n);
        return id;
    }
    LogFactorialTable lf(n + 1);

    // Stage 1: inner channel sums, indexed by (k, delta) with delta <= N - k.
    std::vector<std::vector<double>> log_t(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        log_t[static_cast<size_t>(k)].resize(static_cast<size_t>(n - k) + 1);
        for (int delta = 0; delta <= n - k; ++delta)
            log_t[static_cast<size_t>(k)][static_cast<size_t>(delta)] = log_inner_sum(n, gp, k, delta, lf);
    }

    // Stage 2: binomial transform over k, indexed by (v, delta) with
    // delta <= N - v; W(w,w',v) = 3^{-(w+w')} exp(log_s[v][w+w'-2v]).
    std::vector<std::vector<double>> log_s(static_cast<size_t>(n) + 1);
    for (int v = 0; v <= n; ++v) {
        log_s[static_cast<size_t>(v)].resize(static_cast<size_t>(n - v) + 1);
        for (int delta = 0; delta <= n - v; ++delta) {
            LogSumAcc acc;
            for (int k = 0; k <= v; ++k) {
                const double lt = log_t[static_cast<size_t>(k)][static_cast<size_t>(delta)];
                if (lt == kNegInf) continue;
                acc.add(lf.log_binom(v, k) + lt);
            }
            log_s[static_cast<size_t>(v)][static_cast<size_t>(delta)] = acc.log_value();
        }
    }

    // Stage 3: resum string multiplicities. The prefactors 3^w (1/3)^{w+w'}
    // collapse to 3^{-w'}, applied at exponentiation time.
    TransitionMatrix m;
    m.params = p;
    m.r = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int w1p = 0; w1p <= 1; ++w1p) {
        for (int wp = w1p; wp <= n - 1 + w1p; ++wp) {
            const int col = WeightDistribution::packed_index(n, wp, w1p);
            for (int w1 = 0; w1 <= 1; ++w1) {
                for (int w = w1; w <= n - 1 + w1; ++w) {
                    const int lo = std::max(0, w + wp - n + 1 - w1 - w1p);
                    const int hi = std::min(w - w1, wp - w1p);
                    if (hi < lo) continue;
                    LogSumAcc acc;
                    for (int mm = lo; mm <= hi; ++mm) {
                        const int v = mm + w1 * w1p;
                        const int delta = w + wp - 2 * v;
                        const double ls = log_s[static_cast<size_t>(v)][static_cast<size_t>(delta)];
                        if (ls == kNegInf) continue;
                        acc.add(lf.log_binom(wp - w1p, mm) +
                                lf.log_binom(n - 1 - wp + w1p, w - w1 - mm) + ls);
                    }
                    if (acc.empty()) continue;
                    const int row = WeightDistribution::packed_index(n, w, w1);
                    m.r(row, col) = std::exp(acc.log_value() - static_cast<double>(wp) * kLog3);
                }
            }
        }
    }
    return m;
}

void step(const TransitionMatrix& m, WeightDistribution& dist) {
    if (dist.n_sites != m.params.n_sites)
        throw std::invalid_argument("step: distribution and matrix size mismatch");
    dist.h = m.r * dist.h;
    ++dist.time_step;
}

EvolveResult evolve(const TransitionMatrix& m, int steps, const std::vector<int>& checkpoint_steps) {
    EvolveResult out;
    WeightDistribution d = WeightDistribution::initial(m.params.n_sites);
    auto record = [&](const WeightDistribution& cur) {
        out.records.push_back({cur.time_step, cur.mean_weight(), mean_commutator(cur)});
        for (int c : checkpoint_steps)
            if (c == cur.time_step) out.checkpoints.push_back(cur);
    };
    record(d);
    for (int t = 0; t < steps; ++t) {
        step(m, d);
        record(d);
    }
    return out;
}

double mean_commutator(const WeightDistribution& dist) {
    const int n = dist.n_sites;
    if (n < 2) throw std::invalid_argument("mean_commutator: needs N >= 2");
    double acc = 0.0;
    for (int w = 1; w <= n; ++w) acc += static_cast<double>(w - 1) * dist.marginal(w);
    for (int w = 1; w <= n - 1; ++w) acc += dist.at(w, 0);
    return 4.0 / (3.0 * (n - 1)) * acc;
}

double mean_commutator_large_n(const WeightDistribution& dist) {
    return 4.0 / 3.0 * dist.mean_weight() / static_cast<double>(dist.n_sites);
}

std::optional<double> scrambling_time(const CircuitParams& p, double threshold, int max_steps) {
    TransitionMatrix m = build_transition_matrix(p);
    WeightDistribution d = WeightDistribution::initial(p.n_sites);
    double prev = mean_commutator(d);
    if (prev >= threshold) return 0.0;
    for (int t = 1; t <= max_steps; ++t) {
        step(m, d);
        const double cur = mean_commutator(d);
        if (cur >= threshold)
            return static_cast<double>(t - 1) + (threshold - prev) / (cur - prev);
        prev = cur;
    }
    return std::nullopt;
}

WeightDistribution one_step_distribution_analytic(const CircuitParams& p) {
    check_params(p);
    const int n = p.n_sites;
    const double gp = p.g_prime();
    const double c2 = std::cos(gp) * std::cos(gp);
    const double s2 = std::sin(gp) * std::sin(gp);
    LogFactorialTable lf(n);
    WeightDistribution d = WeightDistribution::zero(n);
    d.time_step = 1;
    for (int w = 1; w <= n; ++w) {
        const double lt = lf.log_binom(n - 1, w - 1) + log_pow(c2, n - w) + log_pow(s2, w - 1);
        double val = (lt == kNegInf) ? 0.0 : 2.0 * std::exp(lt);
        if (w == 1) val += 1.0;
        d.at(w, 1) = val / 3.0;
    }
    return d;
}

double one_step_mean_weight_analytic(const CircuitParams& p) {
    check_params(p);
    const double gp = p.g_prime();
    const double c2 = std::cos(gp) * std::cos(gp);
    const double s2 = std::sin(gp) * std::sin(gp);
    return 1.0 / 3.0 + 2.0 / 3.0 * c2 + 2.0 / 3.0 * p.n_sites * s2;
}

double log_string_class_size(int n_sites, int w, int w1) {
    LogFactorialTable lf(n_sites);
    return static_cast<double>(w) * kLog3 + lf.log_binom(n_sites - 1, w - w1);
}

WeightDistribution uniform_string_distribution(int n_sites) {
    WeightDistribution d = WeightDistribution::zero(n_sites);
    // log(4^N - 1), stable for any N
    const double log_total = n_sites * std::log(4.0) + std::log1p(-std::pow(4.0, -n_sites));
    for (int w1 = 0; w1 <= 1; ++w1)
        for (int w = w1; w <= n_sites - 1 + w1; ++w) {
            if (w == 0) continue;  // identity string excluded
            d.at(w, w1) = std::exp(log_string_class_size(n_sites, w, w1) - log_total);
        }
    return d;
}

}  // namespace scramble

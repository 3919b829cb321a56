// Independent reference implementations used only by tests: direct extended-
// precision summations and brute-force string enumeration, no log-space tricks
// and no code shared with the library paths they check.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

// Binomial coefficient by multiplicative recurrence in long double.
inline long double binom_ld(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0.0L;
    k = std::min(k, n - k);
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    return r;
}

// Direct summation of the weight-transition element: outer sum over the
// overlap subset size k, inner sum over the channel index l, diagonal channel
// reinstated as an explicit delta term.
inline long double w_element_naive(int n, long double g_prime, int w, int wp, int v) {
    const int delta = w + wp - 2 * v;
    if (n - v - delta < 0) throw std::invalid_argument("w_element_naive: invalid (w,w',v)");
    long double outer = 0.0L;
    for (int k = 0; k <= v; ++k) {
        long double inner = 0.0L;
        for (int l = 0; l <= k; ++l) {
            if (2 * l == k) continue;
            const long double th = static_cast<long double>(2 * l - k) * g_prime;
            const long double c2 = cosl(th) * cosl(th);
            const long double s2 = sinl(th) * sinl(th);
            inner += binom_ld(k, l) * powl(c2, n - k - delta) * powl(s2, delta);
        }
        if (delta == 0 && k % 2 == 0) inner += binom_ld(k, k / 2);
        outer += binom_ld(v, k) * inner;
    }
    return outer * powl(1.0L / 3.0L, w + wp);
}

// Pauli strings for small N encoded base-4, digit per site: 0=I,1=X,2=Y,3=Z.
inline int string_weight(int code, int n) {
    int w = 0;
    for (int i = 0; i < n; ++i) {
        if (code % 4 != 0) ++w;
        code /= 4;
    }
    return w;
}

inline int string_site1(int code) { return code % 4 != 0 ? 1 : 0; }

inline int string_overlap(int a, int b, int n) {
    int v = 0;
    for (int i = 0; i < n; ++i) {
        if (a % 4 != 0 && b % 4 != 0) ++v;
        a /= 4;
        b /= 4;
    }
    return v;
}

// Brute-force reduced transition matrix for small N: pick one source string
// per (w',w1') class, sum string-level elements over each target class.
// Layout matches the library: row/col = w1*N + (w - w1).
inline std::vector<std::vector<long double>> reduced_matrix_brute(int n, long double g_prime,
                                                                  int source_choice = 0) {
    const int dim = 2 * n;
    const int n_strings = 1 << (2 * n);
    std::vector<std::vector<long double>> r(dim, std::vector<long double>(dim, 0.0L));
    for (int w1p = 0; w1p <= 1; ++w1p) {
        for (int wp = w1p; wp <= n - 1 + w1p; ++wp) {
            // representative source string: source_choice cycles through the class
            int class_size = 0;
            for (int s = 0; s < n_strings; ++s)
                if (string_weight(s, n) == wp && string_site1(s) == w1p) ++class_size;
            int rep = -1, seen = 0;
            const int want = source_choice % class_size;
            for (int s = 0; s < n_strings; ++s) {
                if (string_weight(s, n) == wp && string_site1(s) == w1p) {
                    if (seen++ == want) {
                        rep = s;
                        break;
                    }
                }
            }
            if (rep < 0) throw std::runtime_error("reduced_matrix_brute: no representative");
            const int col = w1p * n + (wp - w1p);
            for (int s = 0; s < n_strings; ++s) {
                const int w = string_weight(s, n);
                const int w1 = string_site1(s);
                const int row = w1 * n + (w - w1);
                r[row][col] += w_element_naive(n, g_prime, w, wp, string_overlap(s, rep, n));
            }
        }
    }
    return r;
}

}  // namespace oracle

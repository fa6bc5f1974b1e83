// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace cyla {

namespace detail {

// Ascending power series. Safe for x <= ~9 at any order (terms decay before
// cancellation bites) and for any x when n >= x. The leading term is computed
// in log space so large orders underflow to zero instead of tripping the
// factorial overflow at 171!.
inline double bessel_series(int n, double x) {
    const double half_x = 0.5 * x;
    const double log_t0 = n * std::log(half_x) - std::lgamma(n + 1.0);
    if (log_t0 < -745.0) return 0.0;
    double term = std::exp(log_t0);
    double sum = term;
    const double q = half_x * half_x;
    for (int m = 0; m < 300; ++m) {
        term *= -q / ((m + 1.0) * (n + m + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

// Miller's backward recurrence with the J_0 + 2*sum J_2k = 1 normalization.
// Fills out[0..n_max] in one downward pass.
inline void bessel_backward(int n_max, double x, std::vector<double>& out) {
    const int top = std::max(n_max, static_cast<int>(x)) + 1;
    int start = top + static_cast<int>(std::sqrt(40.0 * top)) + 2;
    if (start % 2 != 0) ++start;

    out.assign(static_cast<size_t>(n_max) + 1, 0.0);
    double fp1 = 0.0;          // J_{m+1} (unnormalized)
    double f = 1e-30;          // J_m
    double norm = 0.0;
    for (int m = start; m >= 1; --m) {
        const double fm1 = (2.0 * m / x) * f - fp1;
        fp1 = f;
        f = fm1;
        if (std::abs(f) > 1e250) {
            f *= 1e-250;
            fp1 *= 1e-250;
            norm *= 1e-250;
            for (double& v : out) v *= 1e-250;
        }
        const int order = m - 1;
        if (order <= n_max) out[static_cast<size_t>(order)] = f;
        if (order > 0 && order % 2 == 0) norm += 2.0 * f;
    }
    norm += f;  // J_0 term
    for (double& v : out) v /= norm;
}

}  // namespace detail

/// Bessel function of the first kind of integer order. Uses the ascending
/// series where it is cancellation-free and Miller's normalized backward
/// recurrence elsewhere. J_{-p}(x) = (-1)^p J_p(x).
inline double bessel_j(int p, double x) {
    double sign = 1.0;
    if (p < 0) {
        p = -p;
        if (p % 2 != 0) sign = -sign;
    }
    if (x < 0.0) {
        x = -x;
        if (p % 2 != 0) sign = -sign;
    }
    if (x == 0.0) return p == 0 ? 1.0 : 0.0;
    if (x <= 9.0 || p >= x) return sign * detail::bessel_series(p, x);
    std::vector<double> seq;
    detail::bessel_backward(p, x, seq);
    return sign * seq[static_cast<size_t>(p)];
}

/// J_0(x) .. J_{n_max}(x) in one call (x >= 0).
inline std::vector<double> bessel_j_sequence(int n_max, double x) {
    if (n_max < 0) throw std::invalid_argument("bessel_j_sequence: n_max must be >= 0");
    if (x < 0.0) throw std::invalid_argument("bessel_j_sequence: x must be >= 0");
    std::vector<double> seq(static_cast<size_t>(n_max) + 1, 0.0);
    if (x == 0.0) {
        seq[0] = 1.0;
        return seq;
    }
    if (x <= 9.0) {
        for (int n = 0; n <= n_max; ++n) seq[static_cast<size_t>(n)] = detail::bessel_series(n, x);
        return seq;
    }
    detail::bessel_backward(n_max, x, seq);
    return seq;
}

}  // namespace cyla

#pragma once

// Test-only reference implementations, kept deliberately independent of the
// library code paths they are used to check.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracles {

using CLD = std::complex<long double>;
inline constexpr long double pi_l = 3.14159265358979323846264338327950288L;
inline constexpr long double gamma_l = 0.57721566490153286060651209008240243L;

// Ascending power series for J_p, extended precision.
inline CLD bessel_j_series(int p, CLD z, int terms = 60) {
    CLD term = 1.0L;
    for (int m = 1; m <= p; ++m) term *= z * 0.5L / static_cast<long double>(m);
    CLD sum = term;
    const CLD ratio = -z * z * 0.25L;
    for (int m = 1; m <= terms; ++m) {
        term *= ratio / static_cast<long double>(m) / static_cast<long double>(m + p);
        sum += term;
    }
    return sum;
}

// Y_0 via the power-series-with-log form.
inline CLD bessel_y0_series(CLD z, int terms = 60) {
    const CLD j0 = bessel_j_series(0, z, terms);
    CLD term = 1.0L, sum = 0.0L;
    long double h = 0.0L;
    for (int m = 1; m <= terms; ++m) {
        term *= -(z * z * 0.25L) / static_cast<long double>(m) / static_cast<long double>(m);
        h += 1.0L / m;
        sum += -term * h;
    }
    return (2.0L / pi_l) * ((std::log(z * 0.5L) + gamma_l) * j0 + sum);
}

inline CLD bessel_y1_series(CLD z, int terms = 60) {
    const CLD j1 = bessel_j_series(1, z, terms);
    CLD t = z * 0.5L;
    CLD sum = t * (1.0L - 2.0L * gamma_l);
    long double hm = 0.0L, hm1 = 1.0L;
    for (int m = 1; m <= terms; ++m) {
        t *= -(z * z * 0.25L) / static_cast<long double>(m) / static_cast<long double>(m + 1);
        hm += 1.0L / m;
        hm1 += 1.0L / (m + 1);
        sum += t * (hm + hm1 - 2.0L * gamma_l);
    }
    return (2.0L / pi_l) * std::log(z * 0.5L) * j1 - 2.0L / (pi_l * z) - sum / pi_l;
}

// H^(1)_p by upward recurrence from the series values; valid while |z| stays
// small enough for the series (about |z| <= 20 in long double).
inline CLD hankel1_series(int p, CLD z, int terms = 80) {
    const CLD i(0.0L, 1.0L);
    CLD h0 = bessel_j_series(0, z, terms) + i * bessel_y0_series(z, terms);
    CLD h1 = bessel_j_series(1, z, terms) + i * bessel_y1_series(z, terms);
    if (p == 0) return h0;
    for (int m = 1; m < p; ++m) {
        const CLD h2 = (2.0L * m / z) * h1 - h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

// Adaptive Simpson on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 30) {
    const auto simpson = [&](double lo, double hi) {
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
    };
    std::function<double(double, double, double, int)> rec = [&](double lo, double hi, double whole,
                                                                 int d) -> double {
        const double mid = 0.5 * (lo + hi);
        const double left = simpson(lo, mid), right = simpson(mid, hi);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol) return left + right;
        return rec(lo, mid, left, d - 1) + rec(mid, hi, right, d - 1);
    };
    return rec(a, b, simpson(a, b), depth);
}

}  // namespace oracles

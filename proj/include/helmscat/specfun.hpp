#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "helmscat/common.hpp"

// Integer-order Bessel J_p and Hankel H^(1)_p for complex arguments.
//
// Algorithm split by |z|:
//   |z| <= 6   ascending series for J_p (long-double accumulation) and the
//              logarithmic series for Y_0, Y_1 with upward recurrence,
//              H^(1) = J + iY.
//   6 < |z| < 35   J_p by backward (Miller) recurrence normalized with the
//              Jacobi-Anger sum e^{-iz} = J_0 + 2 sum (-i)^m J_m (conjugate
//              form in the lower half plane, so the normalization series has
//              the same magnitude as the largest ladder entry). H^(1)_0 from
//              the continued fraction for H'/H combined with the Wronskian
//              J_0 H' - J_0' H = 2i/(pi z); upward recurrence for higher
//              orders, which is stable because H grows with the order.
//   |z| >= 35  Hankel asymptotic expansion for H^(1)_0, H^(1)_1; J_p still
//              by Miller.
//
// Supported envelope: 0 <= p <= 64, |z| <= 1e3, and Im z >= -64 for H^(1).
// Everything outside raises unsupported_domain rather than degrading quietly.

namespace helmscat::specfun {

inline constexpr int max_order = 64;
inline constexpr double max_abs_arg = 1.0e3;
inline constexpr double min_im_hankel = -64.0;

namespace detail {

using CLD = std::complex<long double>;

inline void check_j_envelope(int p, Complex z) {
    if (p < 0 || p > max_order)
        throw unsupported_domain("bessel order " + std::to_string(p) + " outside [0, 64]");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw unsupported_domain("non-finite bessel argument");
    if (std::abs(z) > max_abs_arg) throw unsupported_domain("|z| exceeds the supported envelope");
}

// Ascending series, |z| small. Terms alternate; long-double accumulation
// keeps the cancellation below 1e-16 relative for |z| <= 6.
inline CLD j_series(int p, CLD z) {
    CLD term = 1.0L;
    const CLD half = z * 0.5L;
    for (int m = 1; m <= p; ++m) term *= half / static_cast<long double>(m);
    const CLD ratio = -half * half;
    CLD sum = term;
    for (int m = 1; m < 400; ++m) {
        term *= ratio / static_cast<long double>(m) / static_cast<long double>(m + p);
        sum += term;
        if (std::abs(term) < 1e-24L * std::abs(sum) + 1e-320L) break;
    }
    return sum;
}

// Y_0 and Y_1 via the log series (principal branch of log z).
inline void y01_series(CLD z, CLD& y0, CLD& y1) {
    const long double pil = 3.14159265358979323846264338327950288L;
    const long double gammal = 0.57721566490153286060651209008240243L;
    const CLD lg = std::log(z * 0.5L);
    const CLD j0 = j_series(0, z);
    const CLD j1 = j_series(1, z);
    const CLD w = -z * z * 0.25L;  // (-z^2/4)

    // sum_{m>=1} (-1)^{m+1} H_m (z^2/4)^m / (m!)^2  ==  -sum_{m>=1} H_m w^m/(m!)^2
    CLD term = 1.0L;
    CLD s0 = 0.0L;
    long double harmonic = 0.0L;
    for (int m = 1; m < 400; ++m) {
        term *= w / static_cast<long double>(m) / static_cast<long double>(m);
        harmonic += 1.0L / m;
        const CLD add = -term * harmonic;
        s0 += add;
        if (std::abs(add) < 1e-24L * (std::abs(s0) + 1.0e-300L) && m > 4) break;
    }
    y0 = (2.0L / pil) * ((lg + gammal) * j0 + s0);

    // Y_1 = (2/pi) ln(z/2) J_1 - 2/(pi z)
    //       - (1/pi) sum_{m>=0} [psi(m+1)+psi(m+2)] (-1)^m (z/2)^{2m+1}/(m!(m+1)!)
    CLD t = z * 0.5L;
    CLD s1 = t * (-2.0L * gammal + 1.0L);  // m=0: psi(1)+psi(2) = -2g + 1
    long double hm = 0.0L, hm1 = 1.0L;
    for (int m = 1; m < 400; ++m) {
        t *= -(z * z * 0.25L) / static_cast<long double>(m) / static_cast<long double>(m + 1);
        hm += 1.0L / m;
        hm1 += 1.0L / (m + 1);
        const CLD add = t * (-2.0L * gammal + hm + hm1);
        s1 += add;
        if (std::abs(add) < 1e-24L * (std::abs(s1) + 1.0e-300L) && m > 4) break;
    }
    y1 = (2.0L / pil) * lg * j1 - 2.0L / (pil * z) - s1 / pil;
}

// Backward recurrence for J_0..J_{pmax}.
inline std::vector<Complex> miller_ladder(int pmax, Complex z) {
    const double az = std::abs(z);
    // Start high enough that the minimal solution has decayed by ~1e-22
    // relative to the orders we keep.
    int start = std::max(pmax, static_cast<int>(std::ceil(az)));
    double decay = 0.0;
    while (decay < 52.0 && start < 100000) {
        ++start;
        const double g = std::log(2.0 * start / az);
        if (g > 0.0) decay += g;
    }
    start += 2;

    const bool upper = z.imag() >= 0.0;
    const Complex two_over_z = 2.0 / z;
    Complex fp1 = 0.0, f = 1e-30;
    std::vector<Complex> ladder(pmax + 1, Complex(0.0));
    // Normalization sum: S = f_0 + 2 sum_{m>=1} (mp i)^m f_m with the sign
    // chosen so the target e^{-+ iz} is as large as the biggest ladder entry.
    Complex phase = upper ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
    Complex s = 0.0;
    Complex powp = 1.0;  // phase^m, maintained downward from m=start
    for (int m = 0; m < start; ++m) powp *= phase;
    for (int m = start; m >= 1; --m) {
        const Complex fm1 = static_cast<double>(m) * two_over_z * f - fp1;
        fp1 = f;
        f = fm1;
        powp /= phase;  // phase^(m-1)
        if (m - 1 <= pmax) ladder[m - 1] = f;
        if (m - 1 >= 1)
            s += 2.0 * powp * f;
        else
            s += f;  // the m=0 term enters once, without the factor 2
        if (std::abs(f.real()) > 1e250 || std::abs(f.imag()) > 1e250) {
            const double scale = 1e-250;
            f *= scale;
            fp1 *= scale;
            s *= scale;
            for (auto& l : ladder) l *= scale;
        }
    }
    const Complex target = std::exp((upper ? -iu : iu) * z);
    const Complex norm = target / s;
    for (auto& l : ladder) l *= norm;
    return ladder;
}

// Continued fraction for H^(1)_0'(z)/H^(1)_0(z):
//   i - 1/(2z) + (i/z) * K, K = ((1/2)^2)/(2(z+i) + ((3/2)^2)/(2(z+2i) + ...))
// evaluated by modified Lentz.
inline Complex hankel_ratio_cf(Complex z) {
    const Complex tiny(1e-290, 0.0);
    Complex f = tiny, c = f, d = 0.0;
    for (int k = 1; k < 20000; ++k) {
        const double ak = (k - 0.5) * (k - 0.5);
        const Complex bk = 2.0 * (z + Complex(0.0, static_cast<double>(k)));
        d = bk + ak * d;
        if (d == Complex(0.0)) d = tiny;
        c = bk + ak / c;
        if (c == Complex(0.0)) c = tiny;
        d = 1.0 / d;
        const Complex delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            return iu - 0.5 / z + (iu / z) * f;
        }
    }
    throw unsupported_domain("hankel ratio continued fraction did not converge");
}

// Hankel asymptotic expansion for order 0 or 1, |z| large.
inline Complex hankel_asymptotic(int p, Complex z) {
    const double fournu2 = 4.0 * p * p;
    Complex term = 1.0, sum = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= Complex(0.0, 1.0) * ((fournu2 - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k)) / z;
        const double mag = std::abs(term);
        if (mag > prev) break;  // past the optimal truncation point
        sum += term;
        prev = mag;
        if (mag < 1e-18 * std::abs(sum)) break;
    }
    const Complex omega = z - (0.5 * p + 0.25) * pi;
    return std::sqrt(2.0 / (pi * z)) * std::exp(iu * omega) * sum;
}

inline std::vector<Complex> j_ladder_impl(int pmax, Complex z) {
    if (std::abs(z) <= 6.0) {
        std::vector<Complex> ladder(pmax + 1);
        const CLD zl(z.real(), z.imag());
        for (int p = 0; p <= pmax; ++p) {
            const CLD v = j_series(p, zl);
            ladder[p] = Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
        }
        return ladder;
    }
    return miller_ladder(pmax, z);
}

// Ladder for Im z >= 0, where |H^(1)_p| grows with the order and the upward
// recurrence tracks the dominant solution.
inline std::vector<Complex> h1_ladder_upper(int pmax, Complex z) {
    const double az = std::abs(z);
    std::vector<Complex> ladder(pmax + 1);
    Complex h0, h1;
    if (az <= 6.0) {
        const CLD zl(z.real(), z.imag());
        CLD y0, y1;
        y01_series(zl, y0, y1);
        const CLD ih0 = j_series(0, zl) + CLD(0.0L, 1.0L) * y0;
        const CLD ih1 = j_series(1, zl) + CLD(0.0L, 1.0L) * y1;
        h0 = Complex(static_cast<double>(ih0.real()), static_cast<double>(ih0.imag()));
        h1 = Complex(static_cast<double>(ih1.real()), static_cast<double>(ih1.imag()));
    } else if (az < 35.0) {
        const auto j = miller_ladder(1, z);
        const Complex ratio = hankel_ratio_cf(z);
        h0 = (2.0 * iu / (pi * z)) / (j[0] * ratio + j[1]);
        h1 = -ratio * h0;
    } else {
        h0 = hankel_asymptotic(0, z);
        h1 = hankel_asymptotic(1, z);
    }
    ladder[0] = h0;
    if (pmax >= 1) ladder[1] = h1;
    for (int m = 1; m < pmax; ++m)
        ladder[m + 1] = (2.0 * m / z) * ladder[m] - ladder[m - 1];
    return ladder;
}

inline std::vector<Complex> h1_ladder_impl(int pmax, Complex z) {
    std::vector<Complex> ladder;
    if (z.imag() >= 0.0 || std::abs(z) <= 6.0) {
        // Small |z| below the axis is safe too: the recurrence amplification
        // is bounded by e^{2|Im z|} <= e^12 against long-double seeds.
        ladder = h1_ladder_upper(pmax, z);
    } else {
        // Below the axis |H^(1)_p| dips before the Y-type growth takes over
        // and the upward recurrence turns unstable. Reflect instead:
        // H^(1)(z) = 2J(z) - conj(H^(1)(conj z)), with every piece computed
        // where it is the dominant solution.
        const auto hu = h1_ladder_upper(pmax, std::conj(z));
        const auto j = miller_ladder(pmax, z);
        ladder.resize(pmax + 1);
        for (int p = 0; p <= pmax; ++p) ladder[p] = 2.0 * j[p] - std::conj(hu[p]);
    }
    for (const auto& v : ladder)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw unsupported_domain("hankel1 overflow inside the requested ladder");
    return ladder;
}

}  // namespace detail

// J_0..J_pmax at once (the mode sums of the solvers want the whole ladder).
inline std::vector<Complex> bessel_j_ladder(int pmax, Complex z) {
    detail::check_j_envelope(std::min(pmax, max_order), z);
    if (pmax < 0 || pmax > max_order + 2) throw unsupported_domain("ladder order out of range");
    return detail::j_ladder_impl(pmax, z);
}

inline std::vector<Complex> hankel1_ladder(int pmax, Complex z) {
    detail::check_j_envelope(std::min(pmax, max_order), z);
    if (pmax < 0 || pmax > max_order + 2) throw unsupported_domain("ladder order out of range");
    if (z == Complex(0.0)) throw singular_argument("hankel1 is singular at z = 0");
    if (z.imag() < min_im_hankel) throw unsupported_domain("Im z below the supported hankel1 envelope");
    return detail::h1_ladder_impl(pmax, z);
}

inline Complex bessel_j(int p, Complex z) {
    detail::check_j_envelope(p, z);
    return detail::j_ladder_impl(p, z)[p];
}

inline Complex hankel1(int p, Complex z) {
    detail::check_j_envelope(p, z);
    if (z == Complex(0.0)) throw singular_argument("hankel1 is singular at z = 0");
    if (z.imag() < min_im_hankel) throw unsupported_domain("Im z below the supported hankel1 envelope");
    return detail::h1_ladder_impl(p, z)[p];
}

// C_p' = (C_{p-1} - C_{p+1})/2, C_0' = -C_1.
inline Complex bessel_j_deriv(int p, Complex z) {
    detail::check_j_envelope(p, z);
    const auto j = detail::j_ladder_impl(p + 1, z);
    if (p == 0) return -j[1];
    return 0.5 * (j[p - 1] - j[p + 1]);
}

inline Complex hankel1_deriv(int p, Complex z) {
    detail::check_j_envelope(p, z);
    if (z == Complex(0.0)) throw singular_argument("hankel1 is singular at z = 0");
    if (z.imag() < min_im_hankel) throw unsupported_domain("Im z below the supported hankel1 envelope");
    const auto h = detail::h1_ladder_impl(p + 1, z);
    if (p == 0) return -h[1];
    return 0.5 * (h[p - 1] - h[p + 1]);
}

// Convenience for real arguments (the imaging kernels).
inline double bessel_j0(double x) { return bessel_j(0, Complex(x, 0.0)).real(); }
inline double bessel_j1(double x) { return bessel_j(1, Complex(x, 0.0)).real(); }

}  // namespace helmscat::specfun

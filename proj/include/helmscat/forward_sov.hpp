#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "helmscat/common.hpp"
#include "helmscat/geometry.hpp"
#include "helmscat/specfun.hpp"

// Exact-series forward solver for a disk centered at the origin: the incident
// plane wave is expanded with Jacobi-Anger, each angular mode couples the
// exterior Hankel ansatz to the interior Bessel ansatz through the
// transmission conditions, and the resulting 2x2 systems give the Cauchy data
// on the measurement circle and the far field.

namespace helmscat {

struct ScattererConfig {
    double k = 1.0;
    Complex n{1.0, 0.0};
    Complex mu{0.0, 0.0};
    Complex gamma{0.0, 0.0};
    BoundaryCurve curve = BoundaryCurve::circle(0.0, 0.0, 1.0);
    bool enforce_signs = true;

    void validate() const {
        if (!(k > 0.0)) throw validation_error("wavenumber must be positive");
        if (enforce_signs) {
            if (n.imag() < 0.0) throw validation_error("Im(n) must be nonnegative");
            if (!(gamma.real() > 0.0)) throw validation_error("Re(gamma) must be positive");
            if (!(mu.real() > 0.0)) throw validation_error("Re(mu) must be positive");
        }
    }
};

struct MeasurementSetup {
    double radius_omega = 1.0;
    int directions = 32;  // J incident directions = observation points

    double angle(int j) const { return 2.0 * pi * j / directions; }
    Vec2 observation_point(int j) const {
        return {radius_omega * std::cos(angle(j)), radius_omega * std::sin(angle(j))};
    }
    Vec2 incident_direction(int j) const { return {std::cos(angle(j)), std::sin(angle(j))}; }
};

struct CauchyData {
    Eigen::MatrixXcd us;   // [u^s(x_i, yhat_j)]
    Eigen::MatrixXcd dus;  // [d_r u^s(x_i, yhat_j)]
    MeasurementSetup setup;
    double k = 0.0;
};

struct ModeCoefficients {
    Complex us;  // exterior (Hankel) coefficient
    Complex u;   // interior (Bessel) coefficient
};

namespace detail_sov {

inline void require_origin_disk(const ScattererConfig& cfg, const char* who) {
    if (!cfg.curve.is_origin_circle())
        throw wrong_solver(std::string(who) + " requires a disk centered at the origin; use the "
                                              "boundary-integral solver for general curves");
}

struct ModeTables {
    std::vector<Complex> jk, jkd;    // J_p(kR), J_p'(kR)
    std::vector<Complex> jn, jnd;    // J_p(k sqrt(n) R), J_p'(...)
    std::vector<Complex> hk, hkd;    // H_p(kR), H_p'(kR)
    Complex ksqn;
};

inline ModeTables mode_tables(const ScattererConfig& cfg, int pmax) {
    const double radius = cfg.curve.circle_radius();
    ModeTables t;
    t.ksqn = cfg.k * std::sqrt(cfg.n);
    const auto j1 = specfun::bessel_j_ladder(pmax + 1, Complex(cfg.k * radius, 0.0));
    const auto j2 = specfun::bessel_j_ladder(pmax + 1, t.ksqn * radius);
    const auto h1 = specfun::hankel1_ladder(pmax + 1, Complex(cfg.k * radius, 0.0));
    t.jk.resize(pmax + 1);
    t.jkd.resize(pmax + 1);
    t.jn.resize(pmax + 1);
    t.jnd.resize(pmax + 1);
    t.hk.resize(pmax + 1);
    t.hkd.resize(pmax + 1);
    for (int p = 0; p <= pmax; ++p) {
        t.jk[p] = j1[p];
        t.jn[p] = j2[p];
        t.hk[p] = h1[p];
        if (p == 0) {
            t.jkd[p] = -j1[1];
            t.jnd[p] = -j2[1];
            t.hkd[p] = -h1[1];
        } else {
            t.jkd[p] = 0.5 * (j1[p - 1] - j1[p + 1]);
            t.jnd[p] = 0.5 * (j2[p - 1] - j2[p + 1]);
            t.hkd[p] = 0.5 * (h1[p - 1] - h1[p + 1]);
        }
    }
    return t;
}

inline ModeCoefficients solve_mode(const ScattererConfig& cfg, const ModeTables& t, int p) {
    const double radius = cfg.curve.circle_radius();
    const Complex a11 = t.hk[p];
    const Complex a12 = -t.jn[p];
    const Complex a21 = cfg.k * t.hkd[p];
    const Complex a22 = -t.ksqn * t.jnd[p] -
                        (cfg.mu * static_cast<double>(p) * static_cast<double>(p) / (radius * radius) +
                         cfg.gamma) *
                            t.jn[p];
    const Complex b1 = -t.jk[p];
    const Complex b2 = -cfg.k * t.jkd[p];

    const double scale = std::max(std::abs(a11), std::abs(a21)) * std::max(std::abs(a12), std::abs(a22));
    const Complex det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-13 * scale)
        throw near_resonance("sov mode system nearly singular at p=" + std::to_string(p) +
                             ", k=" + std::to_string(cfg.k));
    ModeCoefficients m;
    m.us = (b1 * a22 - a12 * b2) / det;
    m.u = (a11 * b2 - b1 * a21) / det;
    // residual verification of the Cramer solve
    const double r1 = std::abs(a11 * m.us + a12 * m.u - b1);
    const double r2 = std::abs(a21 * m.us + a22 * m.u - b2);
    const double rs = std::abs(a11 * m.us) + std::abs(a12 * m.u) + std::abs(b1) +
                      std::abs(a21 * m.us) + std::abs(a22 * m.u) + std::abs(b2) + 1e-300;
    if ((r1 + r2) / rs > 1e-9)
        throw near_resonance("sov mode solve failed the residual check at p=" + std::to_string(p));
    return m;
}

}  // namespace detail_sov

inline ModeCoefficients sov_mode_coefficients(int p, const ScattererConfig& cfg) {
    detail_sov::require_origin_disk(cfg, "sov_mode_coefficients");
    cfg.validate();
    const auto t = detail_sov::mode_tables(cfg, p);
    return detail_sov::solve_mode(cfg, t, p);
}

// All mode coefficient pairs for |p| <= truncation, extending the truncation
// until the trailing measured mode drops below `tail_tol` relative to the
// largest one (capped by the specfun order envelope). When measure_radius > 0
// the tail is weighted by the Hankel factor actually summed at the
// measurement circle; otherwise the bare coefficient is used (far field).
inline std::vector<ModeCoefficients> sov_mode_ladder(const ScattererConfig& cfg, int& truncation,
                                                     double measure_radius,
                                                     double tail_tol = 1e-10) {
    detail_sov::require_origin_disk(cfg, "sov_mode_ladder");
    cfg.validate();
    int pmax = truncation;
    for (;;) {
        const auto t = detail_sov::mode_tables(cfg, pmax);
        std::vector<Complex> weight(pmax + 1, Complex(1.0, 0.0));
        if (measure_radius > 0.0)
            weight = specfun::hankel1_ladder(pmax, Complex(cfg.k * measure_radius, 0.0));
        std::vector<ModeCoefficients> modes(pmax + 1);
        double biggest = 0.0;
        for (int p = 0; p <= pmax; ++p) {
            modes[p] = detail_sov::solve_mode(cfg, t, p);
            biggest = std::max(biggest, std::abs(modes[p].us * weight[p]));
        }
        const double tail = std::abs(modes[pmax].us * weight[pmax]);
        if (biggest == 0.0 || tail <= tail_tol * biggest || pmax >= specfun::max_order - 1) {
            truncation = pmax;
            return modes;
        }
        pmax = std::min(specfun::max_order - 1, pmax + 5);
    }
}

inline CauchyData sov_cauchy_data(const ScattererConfig& cfg, const MeasurementSetup& setup,
                                  int truncation = 15) {
    detail_sov::require_origin_disk(cfg, "sov_cauchy_data");
    const double radius = cfg.curve.circle_radius();
    if (!(setup.radius_omega > radius))
        throw invalid_geometry("measurement circle must strictly contain the scatterer");

    int pmax = truncation;
    const auto modes = sov_mode_ladder(cfg, pmax, setup.radius_omega);
    const auto h = specfun::hankel1_ladder(pmax + 1, Complex(cfg.k * setup.radius_omega, 0.0));

    const int J = setup.directions;
    CauchyData data;
    data.setup = setup;
    data.k = cfg.k;
    data.us.resize(J, J);
    data.dus.resize(J, J);

    // The centered disk makes the data circulant: entry (i, j) only depends on
    // theta_i - phi_j, so fill one period and index by (i - j) mod J. This
    // keeps the rotation covariance exact.
    std::vector<Complex> us_row(J), dus_row(J);
    for (int l = 0; l < J; ++l) {
        const double delta = 2.0 * pi * l / J;
        Complex su = modes[0].us * h[0];
        Complex sd = modes[0].us * (-h[1]);
        Complex ip{1.0, 0.0};
        for (int p = 1; p <= pmax; ++p) {
            ip *= iu;
            const Complex hd = 0.5 * (h[p - 1] - h[p + 1]);
            const double c = 2.0 * std::cos(p * delta);
            su += ip * modes[p].us * h[p] * c;
            sd += ip * modes[p].us * hd * c;
        }
        us_row[l] = su;
        dus_row[l] = cfg.k * sd;
    }
    for (int i = 0; i < J; ++i)
        for (int j = 0; j < J; ++j) {
            const int l = (i - j + J) % J;
            data.us(i, j) = us_row[l];
            data.dus(i, j) = dus_row[l];
        }
    return data;
}

// Far-field matrix (4/i) sum us_p e^{ip(theta_i - phi_j)}, consistent with the
// kernel-weighted far-field functional of the boundary-integral solver.
inline Eigen::MatrixXcd sov_farfield(const ScattererConfig& cfg, int directions, int truncation = 15) {
    detail_sov::require_origin_disk(cfg, "sov_farfield");
    int pmax = truncation;
    // tail controlled by the coefficients themselves in the far field
    const auto modes = sov_mode_ladder(cfg, pmax, -1.0);

    std::vector<Complex> row(directions);
    for (int l = 0; l < directions; ++l) {
        const double delta = 2.0 * pi * l / directions;
        Complex s = modes[0].us;
        for (int p = 1; p <= pmax; ++p) s += 2.0 * std::cos(p * delta) * modes[p].us;
        row[l] = (4.0 / iu) * s;
    }
    Eigen::MatrixXcd f(directions, directions);
    for (int i = 0; i < directions; ++i)
        for (int j = 0; j < directions; ++j) f(i, j) = row[(i - j + directions) % directions];
    return f;
}

}  // namespace helmscat

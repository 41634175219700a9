#pragma once

#include <Eigen/Dense>
#include <vector>

#include "helmscat/common.hpp"
#include "helmscat/forward_sov.hpp"
#include "helmscat/quadrature.hpp"
#include "helmscat/specfun.hpp"

// Born-approximation data for unions of small disks: the scattered field is
// approximated by the Lippmann-Schwinger representation with the incident
// field in place of the total field,
//   u^s(x) ~ sum_j [ int_{D_j} k^2 (n-1) Phi(x,w) u^i(w) dw
//                    - oint_{dD_j} Phi(x,w) B(u^i)(w) ds(w) ],
// where B is the second-order boundary operator. The boundary term applies B
// to the plane wave analytically.

namespace helmscat {

struct SmallRegionSet {
    std::vector<Vec2> centers;
    double r0 = 0.1;
    Complex n{1.0, 0.0};
    Complex mu{0.0, 0.0};
    Complex gamma{0.0, 0.0};

    void validate() const {
        if (!(r0 > 0.0)) throw invalid_geometry("region radius must be positive");
        for (size_t a = 0; a < centers.size(); ++a)
            for (size_t b = a + 1; b < centers.size(); ++b)
                if (dist(centers[a], centers[b]) <= 2.0 * r0)
                    throw invalid_geometry("small regions must be pairwise disjoint");
    }
};

inline Complex green2d(const Vec2& x, const Vec2& y, double k) {
    const double r = dist(x, y);
    if (r == 0.0) throw singular_argument("green2d is singular at coincident points");
    return 0.25 * iu * specfun::hankel1(0, Complex(k * r, 0.0));
}

// radial derivative of Phi(x, y) in x, projected on the unit vector e
inline Complex green2d_dir_deriv(const Vec2& x, const Vec2& y, double k, const Vec2& e) {
    const double r = dist(x, y);
    if (r == 0.0) throw singular_argument("green2d is singular at coincident points");
    const Complex h1 = specfun::hankel1(1, Complex(k * r, 0.0));
    return -0.25 * iu * k * h1 * (e.dot(x - y) / r);
}

// B(u^i) at the boundary point w(t) = center + r0 (cos t, sin t):
//   -mu/r0^2 d^2/dt^2 e^{ik w(t).yhat} + gamma e^{ik w(t).yhat}
// with the analytic second derivative of the phase.
inline Complex lb_plane_wave(const Vec2& center, double r0, double t, const Vec2& yhat, double k,
                             Complex mu, Complex gamma) {
    const Vec2 w{center.x + r0 * std::cos(t), center.y + r0 * std::sin(t)};
    const Vec2 tau{-std::sin(t), std::cos(t)};
    const Vec2 dtau{-std::cos(t), -std::sin(t)};
    const Complex phase = std::exp(iu * k * w.dot(yhat));
    const Complex d1 = iu * k * r0 * tau.dot(yhat);
    const Complex d2 = d1 * d1 + iu * k * r0 * dtau.dot(yhat);
    return -mu / (r0 * r0) * d2 * phase + gamma * phase;
}

inline CauchyData born_cauchy_data(const SmallRegionSet& regions, const MeasurementSetup& setup,
                                   double k, int radial_nodes = 16, int angular_nodes = 32,
                                   int boundary_nodes = 64) {
    regions.validate();
    for (const auto& c : regions.centers)
        if (c.norm() + regions.r0 >= setup.radius_omega)
            throw invalid_geometry("small region overlaps the measurement circle");

    const int J = setup.directions;
    CauchyData data;
    data.setup = setup;
    data.k = k;
    data.us = Eigen::MatrixXcd::Zero(J, J);
    data.dus = Eigen::MatrixXcd::Zero(J, J);

    const auto radial = gauss_legendre(radial_nodes, 0.0, regions.r0);
    const Complex vol_factor = k * k * (regions.n - 1.0);

    for (const auto& center : regions.centers) {
        // volume nodes (polar rule) and boundary nodes on this disk
        std::vector<Vec2> vol_pts;
        std::vector<double> vol_w;
        for (int ir = 0; ir < radial_nodes; ++ir)
            for (int ia = 0; ia < angular_nodes; ++ia) {
                const double rho = radial.nodes[ir];
                const double alpha = 2.0 * pi * ia / angular_nodes;
                vol_pts.push_back({center.x + rho * std::cos(alpha), center.y + rho * std::sin(alpha)});
                vol_w.push_back(radial.weights[ir] * (2.0 * pi / angular_nodes) * rho);
            }
        std::vector<double> bnd_t(boundary_nodes);
        std::vector<Vec2> bnd_pts(boundary_nodes);
        const double bnd_w = (2.0 * pi / boundary_nodes) * regions.r0;
        for (int m = 0; m < boundary_nodes; ++m) {
            bnd_t[m] = 2.0 * pi * m / boundary_nodes;
            bnd_pts[m] = {center.x + regions.r0 * std::cos(bnd_t[m]),
                          center.y + regions.r0 * std::sin(bnd_t[m])};
        }

        const int nv = static_cast<int>(vol_pts.size());
        Eigen::MatrixXcd gv(J, nv), dgv(J, nv), gb(J, boundary_nodes), dgb(J, boundary_nodes);
        for (int i = 0; i < J; ++i) {
            const Vec2 x = setup.observation_point(i);
            const Vec2 xhat = x.normalized();
            for (int q = 0; q < nv; ++q) {
                gv(i, q) = green2d(x, vol_pts[q], k) * vol_w[q];
                dgv(i, q) = green2d_dir_deriv(x, vol_pts[q], k, xhat) * vol_w[q];
            }
            for (int m = 0; m < boundary_nodes; ++m) {
                gb(i, m) = green2d(x, bnd_pts[m], k) * bnd_w;
                dgb(i, m) = green2d_dir_deriv(x, bnd_pts[m], k, xhat) * bnd_w;
            }
        }
        Eigen::MatrixXcd ev(nv, J), bb(boundary_nodes, J);
        for (int l = 0; l < J; ++l) {
            const Vec2 yhat = setup.incident_direction(l);
            for (int q = 0; q < nv; ++q)
                ev(q, l) = std::exp(iu * k * vol_pts[q].dot(yhat));
            for (int m = 0; m < boundary_nodes; ++m)
                bb(m, l) = lb_plane_wave(center, regions.r0, bnd_t[m], yhat, k, regions.mu, regions.gamma);
        }
        data.us += vol_factor * (gv * ev) - gb * bb;
        data.dus += vol_factor * (dgv * ev) - dgb * bb;
    }
    return data;
}

}  // namespace helmscat

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "helmscat/common.hpp"
#include "helmscat/detail/parallel.hpp"
#include "helmscat/forward_sov.hpp"
#include "helmscat/quadrature.hpp"

// Direct sampling: the indicator
//   W(z) = sum_j | sum_i w_i [ us(i,j) d_nu ImPhi(x_i,z)
//                              - dus(i,j) ImPhi(x_i,z) ] |,
// with ImPhi(x,z) = J_0(k|x-z|)/4 and Riemann weights w_i = 2 pi R_omega / J,
// peaks on the scatterer and decays like dist(z,D)^{-1/2} away from it.

namespace helmscat {

struct GridSpec {
    double xmin = -1.0, xmax = 1.0;
    double ymin = -1.0, ymax = 1.0;
    int nx = 150, ny = 150;

    double x(int ix) const { return nx == 1 ? xmin : xmin + (xmax - xmin) * ix / (nx - 1.0); }
    double y(int iy) const { return ny == 1 ? ymin : ymin + (ymax - ymin) * iy / (ny - 1.0); }
};

struct IndicatorGrid {
    std::vector<double> xs, ys;
    Eigen::MatrixXd values;      // values(iy, ix) = W(x_ix, y_iy)
    Eigen::MatrixXd normalized;  // (W / max W)^rho
    double rho = 1.0;
};

struct NoiseModel {
    double delta = 0.0;
    std::uint64_t seed = 0;
    enum class Norm { frobenius, spectral } norm_kind = Norm::frobenius;
};

inline double im_phi(const Vec2& x, const Vec2& z, double k) {
    return 0.25 * specfun::bessel_j0(k * dist(x, z));
}

inline double im_phi_normal_deriv(const Vec2& x, const Vec2& z, double k, const Vec2& nu) {
    const double r = dist(x, z);
    if (r == 0.0) return 0.0;
    return -0.25 * k * specfun::bessel_j1(k * r) * ((x - z).dot(nu) / r);
}

namespace detail_imaging {

// per-observation kernel weights for one sampling point
inline void kernel_vectors(const MeasurementSetup& setup, const Vec2& z, double k,
                           Eigen::VectorXd& phi, Eigen::VectorXd& dphi) {
    const int J = setup.directions;
    phi.resize(J);
    dphi.resize(J);
    for (int i = 0; i < J; ++i) {
        const Vec2 x = setup.observation_point(i);
        const Vec2 nu = x / setup.radius_omega;  // radial normal on the circle
        phi[i] = im_phi(x, z, k);
        dphi[i] = im_phi_normal_deriv(x, z, k, nu);
    }
}

template <typename PointFn>
IndicatorGrid fill_grid(const GridSpec& grid, PointFn&& value_at) {
    if (grid.nx < 1 || grid.ny < 1) throw validation_error("indicator grid must be nonempty");
    IndicatorGrid out;
    out.xs.resize(grid.nx);
    out.ys.resize(grid.ny);
    for (int ix = 0; ix < grid.nx; ++ix) out.xs[ix] = grid.x(ix);
    for (int iy = 0; iy < grid.ny; ++iy) out.ys[iy] = grid.y(iy);
    out.values.resize(grid.ny, grid.nx);
    detail::parallel_for(grid.ny, [&](int iy) {
        for (int ix = 0; ix < grid.nx; ++ix)
            out.values(iy, ix) = value_at(Vec2{out.xs[ix], out.ys[iy]});
    });
    out.normalized = out.values;
    out.rho = 1.0;
    return out;
}

}  // namespace detail_imaging

// W(z) at a single sampling point.
inline double dsm_value(const CauchyData& data, const Vec2& z, double k) {
    const int J = data.setup.directions;
    const double w = 2.0 * pi * data.setup.radius_omega / J;
    Eigen::VectorXd phi, dphi;
    detail_imaging::kernel_vectors(data.setup, z, k, phi, dphi);
    const Eigen::VectorXcd t =
        data.us.transpose() * dphi.cast<Complex>() - data.dus.transpose() * phi.cast<Complex>();
    return w * t.cwiseAbs().sum();
}

// Far-measurement variant: d_nu u^s is replaced by ik u^s, so only us enters.
inline double dsm_far_value(const CauchyData& data, const Vec2& z, double k) {
    const int J = data.setup.directions;
    const double w = 2.0 * pi * data.setup.radius_omega / J;
    Eigen::VectorXd phi, dphi;
    detail_imaging::kernel_vectors(data.setup, z, k, phi, dphi);
    const Eigen::VectorXcd kernel = dphi.cast<Complex>() - iu * k * phi.cast<Complex>();
    const Eigen::VectorXcd t = data.us.transpose() * kernel;
    return w * t.cwiseAbs().sum();
}

inline IndicatorGrid dsm_indicator(const CauchyData& data, const GridSpec& grid, double k) {
    return detail_imaging::fill_grid(grid, [&](const Vec2& z) { return dsm_value(data, z, k); });
}

inline IndicatorGrid dsm_indicator_far(const CauchyData& data, const GridSpec& grid, double k) {
    return detail_imaging::fill_grid(grid, [&](const Vec2& z) { return dsm_far_value(data, z, k); });
}

// Interior form of the indicator for the disk (volume + boundary integrals of
// the total field): the cross-check identity behind the data-side formula.
inline IndicatorGrid dsm_indicator_interior_form(const ScattererConfig& cfg, const GridSpec& grid,
                                                 const MeasurementSetup& setup, int radial_nodes = 24,
                                                 int angular_nodes = 64, int boundary_nodes = 64) {
    if (!cfg.curve.is_origin_circle())
        throw wrong_solver("the interior-form indicator is a disk-only cross-check");
    const double radius = cfg.curve.circle_radius();
    const int J = setup.directions;
    int pmax = 15;
    const auto modes = sov_mode_ladder(cfg, pmax, setup.radius_omega);
    const Complex ksqn = cfg.k * std::sqrt(cfg.n);

    // volume nodes (polar) with the total field per incident direction
    const auto radial = gauss_legendre(radial_nodes, 0.0, radius);
    const int nq = radial_nodes * angular_nodes;
    std::vector<Vec2> qpts(nq);
    std::vector<double> qw(nq);
    Eigen::MatrixXcd u_vol(nq, J);
    for (int ir = 0; ir < radial_nodes; ++ir) {
        const double rho = radial.nodes[ir];
        const auto jn = specfun::bessel_j_ladder(pmax, ksqn * rho);
        for (int ia = 0; ia < angular_nodes; ++ia) {
            const int q = ir * angular_nodes + ia;
            const double th = 2.0 * pi * ia / angular_nodes;
            qpts[q] = {rho * std::cos(th), rho * std::sin(th)};
            qw[q] = radial.weights[ir] * (2.0 * pi / angular_nodes) * rho;
            for (int j = 0; j < J; ++j) {
                const double phi_j = setup.angle(j);
                Complex s = modes[0].u * jn[0];
                Complex ip{1, 0};
                for (int p = 1; p <= pmax; ++p) {
                    ip *= iu;
                    s += 2.0 * ip * modes[p].u * jn[p] * std::cos(p * (th - phi_j));
                }
                u_vol(q, j) = s;
            }
        }
    }
    // boundary nodes with B(u); the tangential second derivative acts as
    // -p^2/R^2 on each angular mode
    const auto jnR = specfun::bessel_j_ladder(pmax, ksqn * radius);
    std::vector<Vec2> bpts(boundary_nodes);
    const double bw = (2.0 * pi / boundary_nodes) * radius;
    Eigen::MatrixXcd bu(boundary_nodes, J);
    for (int m = 0; m < boundary_nodes; ++m) {
        const double t = 2.0 * pi * m / boundary_nodes;
        bpts[m] = {radius * std::cos(t), radius * std::sin(t)};
        for (int j = 0; j < J; ++j) {
            const double phi_j = setup.angle(j);
            Complex s = cfg.gamma * modes[0].u * jnR[0];
            Complex ip{1, 0};
            for (int p = 1; p <= pmax; ++p) {
                ip *= iu;
                const Complex coeff = cfg.mu * double(p) * double(p) / (radius * radius) + cfg.gamma;
                s += 2.0 * ip * coeff * modes[p].u * jnR[p] * std::cos(p * (t - phi_j));
            }
            bu(m, j) = s;
        }
    }

    const Complex vol_factor = cfg.k * cfg.k * (cfg.n - 1.0);
    return detail_imaging::fill_grid(grid, [&](const Vec2& z) {
        Eigen::VectorX<Complex> f(nq);
        for (int q = 0; q < nq; ++q) f[q] = qw[q] * im_phi(qpts[q], z, cfg.k);
        Eigen::VectorX<Complex> g(boundary_nodes);
        for (int m = 0; m < boundary_nodes; ++m) g[m] = bw * im_phi(bpts[m], z, cfg.k);
        const Eigen::VectorXcd t = vol_factor * (u_vol.transpose() * f) - bu.transpose() * g;
        return t.cwiseAbs().sum();
    });
}

inline IndicatorGrid normalize(IndicatorGrid grid, double rho) {
    const double peak = grid.values.maxCoeff();
    if (!(peak > 0.0)) throw validation_error("cannot normalize an all-zero indicator");
    grid.normalized = (grid.values / peak).array().pow(rho).matrix();
    grid.rho = rho;
    return grid;
}

// E has re/im parts uniform on [-1,1], then unit Frobenius or spectral norm;
// data entries become data_ij (1 + delta E_ij).
inline Eigen::MatrixXcd add_noise(const Eigen::MatrixXcd& m, double delta, NoiseModel::Norm norm_kind,
                                  std::mt19937_64& rng) {
    if (delta == 0.0) return m;
    if (!(delta > 0.0 && delta < 1.0)) throw validation_error("noise level must lie in (0,1)");
    const auto uniform_pm1 = [&rng]() {
        return 2.0 * ((rng() >> 11) * (1.0 / 9007199254740992.0)) - 1.0;
    };
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double re = uniform_pm1();
            const double im = uniform_pm1();
            e(i, j) = Complex(re, im);
        }
    double norm = 0.0;
    if (norm_kind == NoiseModel::Norm::frobenius) {
        norm = e.norm();
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(e);
        norm = svd.singularValues()(0);
    }
    e /= norm;
    return m.cwiseProduct(Eigen::MatrixXcd::Constant(m.rows(), m.cols(), 1.0) + delta * e);
}

inline CauchyData add_noise(const CauchyData& data, const NoiseModel& model) {
    if (model.delta == 0.0) return data;
    std::mt19937_64 rng(model.seed);
    CauchyData out = data;
    out.us = add_noise(data.us, model.delta, model.norm_kind, rng);
    out.dus = add_noise(data.dus, model.delta, model.norm_kind, rng);
    return out;
}

// --- reconstruction summaries -----------------------------------------------

struct IndicatorSummary {
    Vec2 argmax{0, 0};
    double peak = 0.0;
    double mean_normalized_outside = 0.0;  // outside the dilated reference curve
    bool argmax_inside_reference = false;
    bool has_reference = false;
};

// even-odd ray test against a fine polygonal sampling of the curve, dilated
// by `scale` about the curve centroid
inline bool point_in_curve(const BoundaryCurve& curve, const Vec2& z, double scale = 1.0,
                           int samples = 2048) {
    const Vec2 c = curve.centroid();
    const Vec2 q = (z - c) / scale + c;
    bool inside = false;
    Vec2 prev = curve.point(2.0 * pi * (samples - 1) / samples);
    for (int i = 0; i < samples; ++i) {
        const Vec2 cur = curve.point(2.0 * pi * i / samples);
        if ((cur.y > q.y) != (prev.y > q.y)) {
            const double xcross = cur.x + (q.y - cur.y) * (prev.x - cur.x) / (prev.y - cur.y);
            if (q.x < xcross) inside = !inside;
        }
        prev = cur;
    }
    return inside;
}

inline IndicatorSummary summarize(const IndicatorGrid& grid, const BoundaryCurve* reference = nullptr,
                                  double dilation = 1.5) {
    IndicatorSummary s;
    Eigen::Index iy = 0, ix = 0;
    s.peak = grid.values.maxCoeff(&iy, &ix);
    s.argmax = {grid.xs[static_cast<size_t>(ix)], grid.ys[static_cast<size_t>(iy)]};
    if (reference) {
        s.has_reference = true;
        s.argmax_inside_reference = point_in_curve(*reference, s.argmax);
        double sum = 0.0;
        int count = 0;
        for (Eigen::Index r = 0; r < grid.normalized.rows(); ++r)
            for (Eigen::Index c = 0; c < grid.normalized.cols(); ++c) {
                const Vec2 z{grid.xs[static_cast<size_t>(c)], grid.ys[static_cast<size_t>(r)]};
                if (!point_in_curve(*reference, z, dilation)) {
                    sum += grid.normalized(r, c);
                    ++count;
                }
            }
        s.mean_normalized_outside = count > 0 ? sum / count : 0.0;
    }
    return s;
}

}  // namespace helmscat

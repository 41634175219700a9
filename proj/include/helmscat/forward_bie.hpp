#pragma once

#include <Eigen/Dense>
#include <vector>

#include "helmscat/common.hpp"
#include "helmscat/forward_sov.hpp"
#include "helmscat/geometry.hpp"
#include "helmscat/specfun.hpp"

// Boundary-integral forward solver. Fields are represented by single-layer
// potentials at wavenumbers k (exterior) and k sqrt(n) (interior); the
// transmission conditions give a 2x2 block system in the two densities.
//
// The single layer and its normal derivative are discretized with the global
// trigonometric rule on equispaced parameter nodes: the logarithmic part of
// each kernel is split against ln(4 sin^2((t-s)/2)) and integrated with the
// exact log-weights, the remainder with the trapezoid rule. The tangential
// second-derivative operator follows the centered finite-difference
// construction in the parameter (default step h = 0.01), evaluating the
// single layer at the shifted boundary points z(t +- h) with the same
// quadrature.

namespace helmscat {

struct LayerDensities {
    Eigen::VectorXcd phi;  // exterior density
    Eigen::VectorXcd psi;  // interior density
    std::vector<double> nodes;
    double residual = 0.0;
    double condition_estimate = 0.0;
    bool near_resonance_warning = false;
};

namespace detail_bie {

struct CurveTables {
    std::vector<double> t;
    std::vector<Vec2> z;
    std::vector<Vec2> dz;
    std::vector<Vec2> ddz;
    std::vector<double> speed;
    std::vector<Vec2> normal;
};

inline CurveTables curve_tables(const BoundaryCurve& curve, int n, double shift = 0.0) {
    CurveTables tab;
    tab.t.resize(n);
    tab.z.resize(n);
    tab.dz.resize(n);
    tab.ddz.resize(n);
    tab.speed.resize(n);
    tab.normal.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * pi * i / n + shift;
        tab.t[i] = t;
        tab.z[i] = curve.point(t);
        tab.dz[i] = curve.derivative(t);
        tab.ddz[i] = curve.second_derivative(t);
        tab.speed[i] = tab.dz[i].norm();
        tab.normal[i] = Vec2{tab.dz[i].y, -tab.dz[i].x} / tab.speed[i];
    }
    return tab;
}

// Log-quadrature weights R_l for collocation points offset by `shift` from
// the source grid: R(t) = -(2pi/n) sum_{m<n} cos(m(t - s_j))/m
//                         - (pi/n^2) cos(n(t - s_j)),  N = 2n nodes.
inline std::vector<double> kress_weights(int N, double shift) {
    if (N < 8 || N % 2 != 0) throw invalid_discretization("log quadrature needs an even node count >= 8");
    const int n = N / 2;
    std::vector<double> w(N);
    for (int l = 0; l < N; ++l) {
        const double angle = 2.0 * pi * l / N + shift;
        if (shift != 0.0 && std::abs(std::sin(0.5 * angle)) < 1e-8)
            throw invalid_discretization("finite-difference step collides with the collocation grid");
        double s = 0.0;
        for (int m = 1; m < n; ++m) s += std::cos(m * angle) / m;
        w[l] = -(2.0 * pi / n) * s - (pi / (n * n)) * std::cos(n * angle);
    }
    return w;
}

inline Complex log_ln_term(double angle) {
    const double s = 2.0 * std::sin(0.5 * angle);
    return Complex(std::log(s * s), 0.0);  // ln(4 sin^2(angle/2))
}

}  // namespace detail_bie

// Nystrom matrix of the single-layer operator S_tau on n_nodes equispaced
// collocation points, optionally evaluated at parameter-shifted collocation
// points z(t_i + shift) (used by the tangential FD operator).
inline Eigen::MatrixXcd assemble_single_layer(const BoundaryCurve& curve, Complex tau, int n_nodes,
                                              double shift = 0.0) {
    if (tau == Complex(0.0)) throw unsupported_domain("single layer needs a nonzero wavenumber");
    using namespace detail_bie;
    const int N = n_nodes;
    const auto src = curve_tables(curve, N);
    const auto eval = (shift == 0.0) ? src : curve_tables(curve, N, shift);
    const auto w_log = kress_weights(N, shift);
    const double w_trap = 2.0 * pi / N;

    Eigen::MatrixXcd a(N, N);
    const Complex diag_const = 0.25 * iu - euler_gamma / (2.0 * pi);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const int l = ((i - j) % N + N) % N;
            if (shift == 0.0 && i == j) {
                const Complex k2 =
                    (diag_const - std::log(tau * src.speed[i] / 2.0) / (2.0 * pi)) * src.speed[i];
                const Complex k1 = -src.speed[i] / (4.0 * pi);
                a(i, j) = w_log[l] * k1 + w_trap * k2;
                continue;
            }
            const double r = dist(eval.z[i], src.z[j]);
            const Complex arg = tau * r;
            const Complex j0 = specfun::bessel_j(0, arg);
            const Complex h0 = specfun::hankel1(0, arg);
            const Complex kfull = 0.25 * iu * h0 * src.speed[j];
            const Complex k1 = -j0 * src.speed[j] / (4.0 * pi);
            const Complex k2 = kfull - k1 * log_ln_term(2.0 * pi * l / N + shift);
            a(i, j) = w_log[l] * k1 + w_trap * k2;
        }
    }
    return a;
}

// Nystrom matrix of D^T_tau, the normal derivative of the single layer taken
// at the collocation points (without the +-I/2 jump term).
inline Eigen::MatrixXcd assemble_normal_derivative(const BoundaryCurve& curve, Complex tau,
                                                   int n_nodes) {
    if (tau == Complex(0.0)) throw unsupported_domain("operator needs a nonzero wavenumber");
    using namespace detail_bie;
    const int N = n_nodes;
    const auto tab = curve_tables(curve, N);
    const auto w_log = kress_weights(N, 0.0);
    const double w_trap = 2.0 * pi / N;

    Eigen::MatrixXcd a(N, N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (i == j) {
                // remainder kernel limit: nu.z'' / (4 pi |z'|)
                const Complex k2 = tab.normal[i].dot(tab.ddz[i]) / (4.0 * pi * tab.speed[i]);
                a(i, j) = w_trap * k2;  // the log coefficient vanishes on the diagonal
                continue;
            }
            const int l = ((i - j) % N + N) % N;
            const double r = dist(tab.z[i], tab.z[j]);
            const double g = tab.normal[i].dot(tab.z[i] - tab.z[j]) / r;
            const Complex arg = tau * r;
            const Complex j1 = specfun::bessel_j(1, arg);
            const Complex h1 = specfun::hankel1(1, arg);
            const Complex kfull = -0.25 * iu * tau * h1 * g * tab.speed[j];
            const Complex k1 = tau * j1 * g * tab.speed[j] / (4.0 * pi);
            const Complex k2 = kfull - k1 * log_ln_term(2.0 * pi * l / N);
            a(i, j) = w_log[l] * k1 + w_trap * k2;
        }
    }
    return a;
}

// T_tau = (1/|z'|) d/dt ( (1/|z'|) d/dt S_tau ), with centered second-order
// finite differences in the parameter for both derivatives.
inline Eigen::MatrixXcd tangential_second_derivative(const BoundaryCurve& curve, Complex tau,
                                                     int n_nodes, double h,
                                                     const Eigen::MatrixXcd* base = nullptr) {
    if (!(h > 0.0)) throw invalid_discretization("finite-difference step must be positive");
    const Eigen::MatrixXcd sp = assemble_single_layer(curve, tau, n_nodes, +h);
    const Eigen::MatrixXcd sm = assemble_single_layer(curve, tau, n_nodes, -h);
    Eigen::MatrixXcd s0;
    if (!base) s0 = assemble_single_layer(curve, tau, n_nodes);
    const Eigen::MatrixXcd& s = base ? *base : s0;

    const auto tab = detail_bie::curve_tables(curve, n_nodes);
    Eigen::MatrixXcd t(n_nodes, n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double sp2 = tab.speed[i] * tab.speed[i];
        const double a = 1.0 / sp2;                                            // (1/|z'|)^2 d^2/dt^2
        const double b = -tab.dz[i].dot(tab.ddz[i]) / (sp2 * sp2);             // (1/|z'|) d(1/|z'|)/dt
        t.row(i) = a * (sp.row(i) - 2.0 * s.row(i) + sm.row(i)) / (h * h) +
                   b * (sp.row(i) - sm.row(i)) / (2.0 * h);
    }
    return t;
}

// Full transmission block matrix
//   [ S_k,              -S_{k sqrt n}                                  ]
//   [ jump I/2 + D^T_k, -( I/2 + D^T_{k sqrt n} + gamma S - mu T )     ]
// with jump = -1/2 for the exterior scattering problem and +1/2 for the
// interior eigenvalue problem.
inline Eigen::MatrixXcd assemble_transmission_matrix(const BoundaryCurve& curve, Complex k, Complex n,
                                                     Complex mu, Complex gamma, int n_nodes, double h,
                                                     bool interior_jump) {
    const Complex kn = k * std::sqrt(n);
    const Eigen::MatrixXcd sk = assemble_single_layer(curve, k, n_nodes);
    const Eigen::MatrixXcd skn = assemble_single_layer(curve, kn, n_nodes);
    const Eigen::MatrixXcd dk = assemble_normal_derivative(curve, k, n_nodes);
    const Eigen::MatrixXcd dkn = assemble_normal_derivative(curve, kn, n_nodes);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n_nodes, n_nodes);

    Eigen::MatrixXcd m(2 * n_nodes, 2 * n_nodes);
    m.topLeftCorner(n_nodes, n_nodes) = sk;
    m.topRightCorner(n_nodes, n_nodes) = -skn;
    m.bottomLeftCorner(n_nodes, n_nodes) = (interior_jump ? 0.5 : -0.5) * id + dk;
    Eigen::MatrixXcd lower_right = 0.5 * id + dkn + gamma * skn;
    if (mu != Complex(0.0))
        lower_right -= mu * tangential_second_derivative(curve, kn, n_nodes, h, &skn);
    m.bottomRightCorner(n_nodes, n_nodes) = -lower_right;
    return m;
}

namespace detail_bie {

// Hager/Higham style 1-norm estimate of ||A^{-1}||, a few solves only.
inline double inverse_norm1_estimate(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu, int n) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Constant(n, Complex(1.0 / n, 0.0));
    double est = 0.0;
    for (int it = 0; it < 5; ++it) {
        const Eigen::VectorXcd y = lu.solve(x);
        const double norm1 = y.lpNorm<1>();
        if (norm1 <= est) break;
        est = norm1;
        Eigen::VectorXcd xi(n);
        for (int i = 0; i < n; ++i) {
            const double a = std::abs(y[i]);
            xi[i] = a > 0 ? y[i] / a : Complex(1.0, 0.0);
        }
        const Eigen::VectorXcd zv = lu.adjoint().solve(xi);
        int jmax = 0;
        zv.cwiseAbs().maxCoeff(&jmax);
        x.setZero();
        x[jmax] = 1.0;
    }
    return est;
}

}  // namespace detail_bie

// Factored forward system for one scatterer configuration; the factorization
// is shared across all incident directions.
class BieSystem {
public:
    BieSystem(const ScattererConfig& cfg, int n_faces, double h)
        : cfg_(cfg), n_nodes_(3 * n_faces), h_(h) {
        cfg.validate();
        if (n_faces < 3) throw invalid_discretization("need at least 3 faces");
        tab_ = detail_bie::curve_tables(cfg.curve, n_nodes_);
        m_ = assemble_transmission_matrix(cfg.curve, Complex(cfg.k, 0.0), cfg.n, cfg.mu, cfg.gamma,
                                          n_nodes_, h, /*interior_jump=*/false);
        lu_.compute(m_);
        condition_ = detail_bie::inverse_norm1_estimate(lu_, 2 * n_nodes_) *
                     m_.cwiseAbs().colwise().sum().maxCoeff();
    }

    int node_count() const { return n_nodes_; }
    double condition_estimate() const { return condition_; }
    const detail_bie::CurveTables& tables() const { return tab_; }
    const ScattererConfig& config() const { return cfg_; }

    LayerDensities solve(const Vec2& yhat) const {
        const int N = n_nodes_;
        Eigen::VectorXcd rhs(2 * N);
        for (int i = 0; i < N; ++i) {
            const Complex ui = std::exp(iu * cfg_.k * tab_.z[i].dot(yhat));
            rhs[i] = -ui;
            rhs[N + i] = -iu * cfg_.k * tab_.normal[i].dot(yhat) * ui;
        }
        Eigen::VectorXcd x = lu_.solve(rhs);
        x += lu_.solve(rhs - m_ * x);  // one refinement step
        LayerDensities d;
        d.phi = x.head(N);
        d.psi = x.tail(N);
        d.nodes = tab_.t;
        d.residual = (m_ * x - rhs).norm() / rhs.norm();
        d.condition_estimate = condition_;
        d.near_resonance_warning = condition_ > 1e12;
        return d;
    }

private:
    ScattererConfig cfg_;
    int n_nodes_;
    double h_;
    detail_bie::CurveTables tab_;
    Eigen::MatrixXcd m_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    double condition_ = 0.0;
};

inline LayerDensities solve_bie(const ScattererConfig& cfg, int n_faces, double h, const Vec2& yhat) {
    return BieSystem(cfg, n_faces, h).solve(yhat);
}

// Single-layer potential of a nodal density at an off-boundary point; with
// upsample > 1 the density is first trigonometrically interpolated onto a
// finer grid (needed close to the boundary, where the plain rule degrades).
inline Complex evaluate_single_layer(const BoundaryCurve& curve, Complex tau,
                                     const Eigen::VectorXcd& density, const Vec2& x,
                                     int upsample = 1) {
    const int N = static_cast<int>(density.size());
    Eigen::VectorXcd dens = density;
    int M = N;
    if (upsample > 1) {
        M = N * upsample;
        Eigen::VectorXcd modes(N);
        for (int m = 0; m < N; ++m) {
            Complex s = 0.0;
            for (int j = 0; j < N; ++j)
                s += density[j] * std::exp(-iu * (2.0 * pi * m * j / N));
            modes[m] = s / static_cast<double>(N);
        }
        dens.resize(M);
        for (int j = 0; j < M; ++j) {
            const double t = 2.0 * pi * j / M;
            Complex s = modes[0];
            for (int m = 1; m < N / 2; ++m)
                s += modes[m] * std::exp(iu * (m * t)) + modes[N - m] * std::exp(-iu * (m * t));
            s += modes[N / 2] * std::cos(N / 2 * t);
            dens[j] = s;
        }
    }
    Complex out = 0.0;
    for (int j = 0; j < M; ++j) {
        const double t = 2.0 * pi * j / M;
        const Vec2 y = curve.point(t);
        const double w = (2.0 * pi / M) * curve.derivative(t).norm();
        out += 0.25 * iu * specfun::hankel1(0, tau * dist(x, y)) * dens[j] * w;
    }
    return out;
}

// Cauchy data on the measurement circle from the solved densities: the
// scattered field is SL_k phi evaluated off the boundary, its radial
// derivative comes from the analytic gradient of the kernel.
inline CauchyData bie_cauchy_data(const ScattererConfig& cfg, const MeasurementSetup& setup,
                                  int n_faces, double h = 0.01) {
    if (cfg.curve.max_radius() >= setup.radius_omega)
        throw invalid_geometry("measurement circle must strictly contain the scatterer");
    const BieSystem sys(cfg, n_faces, h);
    const auto& tab = sys.tables();
    const int N = sys.node_count();
    const int J = setup.directions;

    // direction-independent kernel matrices from boundary nodes to x_i
    Eigen::MatrixXcd g(J, N), dg(J, N);
    for (int i = 0; i < J; ++i) {
        const Vec2 x = setup.observation_point(i);
        const Vec2 xhat = x.normalized();
        for (int j = 0; j < N; ++j) {
            const double r = dist(x, tab.z[j]);
            const double w = (2.0 * pi / N) * tab.speed[j];
            const Complex arg(cfg.k * r, 0.0);
            g(i, j) = 0.25 * iu * specfun::hankel1(0, arg) * w;
            dg(i, j) = -0.25 * iu * cfg.k * specfun::hankel1(1, arg) *
                       (xhat.dot(x - tab.z[j]) / r) * w;
        }
    }
    Eigen::MatrixXcd phis(N, J);
    for (int l = 0; l < J; ++l) phis.col(l) = sys.solve(setup.incident_direction(l)).phi;

    CauchyData data;
    data.setup = setup;
    data.k = cfg.k;
    data.us = g * phis;
    data.dus = dg * phis;
    return data;
}

// Far-field functional S^inf phi(xhat) = oint e^{-ik xhat.y} phi(y) ds(y).
inline Eigen::VectorXcd bie_farfield(const LayerDensities& densities, const BoundaryCurve& curve,
                                     double k, int directions) {
    const int N = static_cast<int>(densities.phi.size());
    const auto tab = detail_bie::curve_tables(curve, N);
    Eigen::VectorXcd f(directions);
    for (int i = 0; i < directions; ++i) {
        const Vec2 xhat{std::cos(2.0 * pi * i / directions), std::sin(2.0 * pi * i / directions)};
        Complex s = 0.0;
        for (int j = 0; j < N; ++j)
            s += std::exp(-iu * k * xhat.dot(tab.z[j])) * densities.phi[j] * (2.0 * pi / N) *
                 tab.speed[j];
        f[i] = s;
    }
    return f;
}

// Far-field matrix over equispaced observation x incident directions.
inline Eigen::MatrixXcd bie_farfield_matrix(const ScattererConfig& cfg, int directions, int n_faces,
                                            double h = 0.01) {
    const BieSystem sys(cfg, n_faces, h);
    Eigen::MatrixXcd f(directions, directions);
    for (int l = 0; l < directions; ++l) {
        const Vec2 yhat{std::cos(2.0 * pi * l / directions), std::sin(2.0 * pi * l / directions)};
        f.col(l) = bie_farfield(sys.solve(yhat), cfg.curve, cfg.k, directions);
    }
    return f;
}

inline double farfield_error(const Eigen::MatrixXcd& f_ref, const Eigen::MatrixXcd& f_bie) {
    if (f_ref.rows() != f_bie.rows() || f_ref.cols() != f_bie.cols())
        throw validation_error("far-field matrices have mismatched shapes");
    return (f_ref - f_bie).cwiseAbs().maxCoeff();
}

}  // namespace helmscat

#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "helmscat/common.hpp"

namespace helmscat {

// Smooth closed curves z(t), t in [0, 2pi), with analytic derivatives up to
// third order. Geometry never differentiates numerically; the only finite
// differences in the library live in the tangential boundary operator.
class BoundaryCurve {
public:
    enum class Kind { circle, ellipse, kite, custom };

    using Evaluator = std::function<Vec2(double)>;

    static BoundaryCurve circle(double cx, double cy, double radius) {
        if (!(radius > 0.0)) throw invalid_geometry("circle radius must be positive");
        BoundaryCurve c;
        c.kind_ = Kind::circle;
        c.params_ = {cx, cy, radius};
        return c;
    }

    static BoundaryCurve ellipse(double a, double b) {
        if (!(a > 0.0) || !(b > 0.0)) throw invalid_geometry("ellipse semi-axes must be positive");
        BoundaryCurve c;
        c.kind_ = Kind::ellipse;
        c.params_ = {a, b};
        return c;
    }

    // (-1.5 sin t, cos t + 0.65 cos 2t - 0.65), counterclockwise.
    static BoundaryCurve kite() {
        BoundaryCurve c;
        c.kind_ = Kind::kite;
        return c;
    }

    static BoundaryCurve custom(Evaluator z, Evaluator dz, Evaluator ddz, Evaluator dddz) {
        BoundaryCurve c;
        c.kind_ = Kind::custom;
        c.f_ = {std::move(z), std::move(dz), std::move(ddz), std::move(dddz)};
        return c;
    }

    Kind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }

    bool is_origin_circle() const {
        return kind_ == Kind::circle && params_[0] == 0.0 && params_[1] == 0.0;
    }
    double circle_radius() const { return params_[2]; }

    Vec2 point(double t) const {
        switch (kind_) {
            case Kind::circle:
                return {params_[0] + params_[2] * std::cos(t), params_[1] + params_[2] * std::sin(t)};
            case Kind::ellipse:
                return {params_[0] * std::cos(t), params_[1] * std::sin(t)};
            case Kind::kite:
                return {-1.5 * std::sin(t), std::cos(t) + 0.65 * std::cos(2.0 * t) - 0.65};
            case Kind::custom:
                return f_[0](t);
        }
        throw error("unreachable");
    }

    Vec2 derivative(double t) const {
        switch (kind_) {
            case Kind::circle:
                return {-params_[2] * std::sin(t), params_[2] * std::cos(t)};
            case Kind::ellipse:
                return {-params_[0] * std::sin(t), params_[1] * std::cos(t)};
            case Kind::kite:
                return {-1.5 * std::cos(t), -std::sin(t) - 1.3 * std::sin(2.0 * t)};
            case Kind::custom:
                return f_[1](t);
        }
        throw error("unreachable");
    }

    Vec2 second_derivative(double t) const {
        switch (kind_) {
            case Kind::circle:
                return {-params_[2] * std::cos(t), -params_[2] * std::sin(t)};
            case Kind::ellipse:
                return {-params_[0] * std::cos(t), -params_[1] * std::sin(t)};
            case Kind::kite:
                return {1.5 * std::sin(t), -std::cos(t) - 2.6 * std::cos(2.0 * t)};
            case Kind::custom:
                return f_[2](t);
        }
        throw error("unreachable");
    }

    Vec2 third_derivative(double t) const {
        switch (kind_) {
            case Kind::circle:
                return {params_[2] * std::sin(t), -params_[2] * std::cos(t)};
            case Kind::ellipse:
                return {params_[0] * std::sin(t), -params_[1] * std::cos(t)};
            case Kind::kite:
                return {1.5 * std::cos(t), std::sin(t) + 5.2 * std::sin(2.0 * t)};
            case Kind::custom:
                return f_[3](t);
        }
        throw error("unreachable");
    }

    // Largest |z(t)| over the curve; used to confirm a scatterer sits inside
    // the measurement circle.
    double max_radius(int samples = 720) const {
        double m = 0.0;
        for (int i = 0; i < samples; ++i) m = std::max(m, point(2.0 * pi * i / samples).norm());
        return m;
    }

    Vec2 centroid(int samples = 720) const {
        // Area centroid via Green's theorem: A = (1/2)oint(x dy - y dx),
        // Cx = (1/2A) oint x^2 dy, Cy = -(1/2A) oint y^2 dx.
        double a = 0.0, cx = 0.0, cy = 0.0;
        const double dt = 2.0 * pi / samples;
        for (int i = 0; i < samples; ++i) {
            const Vec2 z = point(i * dt);
            const Vec2 dz = derivative(i * dt);
            a += 0.5 * (z.x * dz.y - z.y * dz.x) * dt;
            cx += 0.5 * z.x * z.x * dz.y * dt;
            cy += -0.5 * z.y * z.y * dz.x * dt;
        }
        return {cx / a, cy / a};
    }

private:
    Kind kind_ = Kind::circle;
    std::vector<double> params_;
    std::array<Evaluator, 4> f_{};
};

struct CurveFrame {
    Vec2 point;
    Vec2 tangent;  // unit
    Vec2 normal;   // unit, outward for the counterclockwise built-ins
    double speed = 0.0;
};

inline BoundaryCurve make_curve(const std::string& kind, const std::vector<double>& params) {
    if (kind == "circle") {
        if (params.size() == 1) return BoundaryCurve::circle(0.0, 0.0, params[0]);
        if (params.size() == 3) return BoundaryCurve::circle(params[0], params[1], params[2]);
        throw invalid_geometry("circle expects params {R} or {cx, cy, R}");
    }
    if (kind == "ellipse") {
        if (params.size() != 2) throw invalid_geometry("ellipse expects params {a, b}");
        return BoundaryCurve::ellipse(params[0], params[1]);
    }
    if (kind == "kite") {
        if (!params.empty()) throw invalid_geometry("kite takes no params");
        return BoundaryCurve::kite();
    }
    throw invalid_geometry("unknown curve kind: " + kind);
}

inline CurveFrame curve_frame(const BoundaryCurve& curve, double t) {
    CurveFrame f;
    f.point = curve.point(t);
    const Vec2 dz = curve.derivative(t);
    f.speed = dz.norm();
    f.tangent = dz / f.speed;
    f.normal = {f.tangent.y, -f.tangent.x};
    return f;
}

// Equispaced parameter nodes with arc-length weights; the composite trapezoid
// rule is spectrally accurate for smooth periodic integrands, so
// sum_i w_i f(z(t_i)) converges fast to the line integral of f ds.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;  // include the speed factor |z'(t_i)|
};

inline QuadratureRule periodic_quadrature(const BoundaryCurve& curve, int n) {
    if (n < 4) throw invalid_discretization("periodic quadrature needs at least 4 nodes");
    QuadratureRule q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const double dt = 2.0 * pi / n;
    for (int i = 0; i < n; ++i) {
        q.nodes[i] = dt * i;
        q.weights[i] = dt * curve.derivative(q.nodes[i]).norm();
    }
    return q;
}

}  // namespace helmscat

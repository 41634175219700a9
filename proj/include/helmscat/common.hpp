#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace helmscat {

using Complex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;
inline constexpr Complex iu{0.0, 1.0};

// Error hierarchy. Every throwing path in the library uses one of these so
// callers (CLI, tests) can distinguish bad input from numerical breakdown.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct invalid_geometry : error {
    using error::error;
};
struct invalid_discretization : error {
    using error::error;
};
struct unsupported_domain : error {
    using error::error;
};
struct singular_argument : error {
    using error::error;
};
struct near_resonance : error {
    using error::error;
};
struct wrong_solver : error {
    using error::error;
};
struct validation_error : error {
    using error::error;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const {
        const double n = norm();
        return {x / n, y / n};
    }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

}  // namespace helmscat

#pragma once

#include <cmath>
#include <vector>

#include "helmscat/common.hpp"

namespace helmscat {

struct Quadrature1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]; Newton iteration on the Legendre recurrence.
inline Quadrature1D gauss_legendre(int n) {
    if (n < 1) throw invalid_discretization("gauss_legendre needs n >= 1");
    Quadrature1D q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = -x;
        q.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    return q;
}

inline Quadrature1D gauss_legendre(int n, double a, double b) {
    Quadrature1D q = gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
        q.nodes[i] = 0.5 * (b - a) * q.nodes[i] + 0.5 * (a + b);
        q.weights[i] *= 0.5 * (b - a);
    }
    return q;
}

}  // namespace helmscat

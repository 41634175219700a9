#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helmscat/imaging.hpp"

using namespace helmscat;

namespace {

ScattererConfig example_disk(double k) {
    ScattererConfig cfg;
    cfg.k = k;
    cfg.n = {5, 0};
    cfg.mu = {1.5, 0};
    cfg.gamma = {2, 0};
    cfg.curve = BoundaryCurve::circle(0, 0, 0.5);
    return cfg;
}

}  // namespace

TEST_CASE("imaging kernel values") {
    const Vec2 z{0.2, -0.4};
    CHECK(im_phi(z, z, 3.0) == 0.25);

    // first zero of J_0
    const double j0zero = 2.404825557695772768;
    const Vec2 x{z.x + j0zero / 3.0, z.y};
    CHECK(std::abs(im_phi(x, z, 3.0)) < 1e-12);

    // gradient bound |d_nu ImPhi| <= (k/4)|J_1|
    for (double k : {1.0, 4.0}) {
        for (double ang : {0.0, 0.9, 2.2}) {
            const Vec2 xx{1.2 * std::cos(ang), 1.2 * std::sin(ang)};
            const Vec2 nu{std::cos(ang), std::sin(ang)};
            const double bound = 0.25 * k * std::abs(specfun::bessel_j1(k * dist(xx, z)));
            CHECK(std::abs(im_phi_normal_deriv(xx, z, k, nu)) <= bound + 1e-15);
        }
    }
    CHECK(im_phi_normal_deriv(z, z, 3.0, {1, 0}) == 0.0);
}

TEST_CASE("zero data gives a zero indicator") {
    CauchyData data;
    data.setup = {1.0, 16};
    data.k = 2.0;
    data.us = Eigen::MatrixXcd::Zero(16, 16);
    data.dus = Eigen::MatrixXcd::Zero(16, 16);
    const auto grid = dsm_indicator(data, {-1, 1, -1, 1, 21, 21}, 2.0);
    CHECK(grid.values.maxCoeff() == 0.0);
    CHECK(dsm_far_value(data, {0.3, 0.3}, 2.0) == 0.0);
}

TEST_CASE("indicator peaks on the scatterer") {
    // The boundary term dominates for these coefficients, so the indicator
    // forms a ring with its maximum near (and inside) the boundary circle;
    // cross-checked against the interior-form identity above.
    const auto cfg = example_disk(5.0 * pi);
    const MeasurementSetup setup{1.0, 32};
    const auto data = sov_cauchy_data(cfg, setup);
    const auto grid = dsm_indicator(data, {-1, 1, -1, 1, 75, 75}, cfg.k);
    const auto s = summarize(grid, &cfg.curve);
    CHECK(s.argmax.norm() < 0.5);
    CHECK(s.argmax_inside_reference);
    // and values far outside are well below the peak
    CHECK(dsm_value(data, {0.95, 0.95}, cfg.k) < 0.5 * s.peak);
}

TEST_CASE("indicator is invariant under per-direction phase changes") {
    const auto cfg = example_disk(1.5 * pi);
    const auto data = sov_cauchy_data(cfg, {1.0, 32});
    CauchyData shifted = data;
    for (int j = 0; j < 32; ++j) {
        const Complex ph = std::exp(iu * (0.31 * j + 0.7));
        shifted.us.col(j) *= ph;
        shifted.dus.col(j) *= ph;
    }
    for (const Vec2& z : {Vec2{0.1, 0.2}, Vec2{-0.6, 0.4}}) {
        const double a = dsm_value(data, z, cfg.k);
        const double b = dsm_value(shifted, z, cfg.k);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
    }
}

TEST_CASE("centered-disk indicator has the discrete rotational symmetry") {
    const auto cfg = example_disk(1.5 * pi);
    const auto data = sov_cauchy_data(cfg, {1.0, 32});
    const double rot = 2.0 * pi / 32;
    for (const Vec2& z : {Vec2{0.33, 0.18}, Vec2{-0.5, 0.62}}) {
        const Vec2 zr{z.x * std::cos(rot) - z.y * std::sin(rot),
                      z.x * std::sin(rot) + z.y * std::cos(rot)};
        const double a = dsm_value(data, z, cfg.k);
        const double b = dsm_value(data, zr, cfg.k);
        CHECK(std::abs(a - b) <= 1e-6 * std::max(1.0, a));
    }
}

TEST_CASE("data-side and interior-form indicators agree") {
    const auto cfg = example_disk(1.5 * pi);
    const MeasurementSetup setup{1.0, 32};
    const auto data = sov_cauchy_data(cfg, setup);
    const GridSpec grid{-1, 1, -1, 1, 41, 41};
    const auto w_data = dsm_indicator(data, grid, cfg.k);
    const auto w_int = dsm_indicator_interior_form(cfg, grid, setup);
    const double scale = w_data.values.maxCoeff();
    CHECK((w_data.values - w_int.values).cwiseAbs().maxCoeff() < 1e-4 * scale);
}

TEST_CASE("interior form vanishes without contrast and rejects non-disks") {
    auto cfg = example_disk(2.0);
    cfg.n = {1, 0};
    cfg.mu = {0, 0};
    cfg.gamma = {0, 0};
    cfg.enforce_signs = false;
    const auto w = dsm_indicator_interior_form(cfg, {-1, 1, -1, 1, 11, 11}, {1.0, 8});
    CHECK(w.values.maxCoeff() < 1e-12);

    cfg.curve = BoundaryCurve::kite();
    CHECK_THROWS_AS(dsm_indicator_interior_form(cfg, {-1, 1, -1, 1, 5, 5}, {3.0, 8}), wrong_solver);
}

TEST_CASE("indicator decays like the inverse square root of the distance") {
    const auto cfg = example_disk(1.5 * pi);
    const auto data = sov_cauchy_data(cfg, {1.0, 32});
    for (double ang : {0.13, 1.07, 2.61}) {
        const Vec2 dir{std::cos(ang), std::sin(ang)};
        const double w20 = dsm_value(data, dir * 20.0, cfg.k) * std::sqrt(20.0 - 0.5);
        const double w40 = dsm_value(data, dir * 40.0, cfg.k) * std::sqrt(40.0 - 0.5);
        CHECK(std::abs(w20 / w40 - 1.0) < 0.25);
    }
}

TEST_CASE("far-field variant tracks the full indicator at large measurement radius") {
    ScattererConfig cfg;
    cfg.k = 2.0 * pi;
    cfg.n = {2, 0};
    cfg.mu = {0.8, 0};
    cfg.gamma = {1.1, 0};
    cfg.curve = BoundaryCurve::circle(0, 0, 0.4);
    const auto data = sov_cauchy_data(cfg, {10.0, 32});
    const GridSpec grid{-1, 1, -1, 1, 41, 41};
    const auto w = dsm_indicator(data, grid, cfg.k);
    const auto wf = dsm_indicator_far(data, grid, cfg.k);
    const double scale = w.values.maxCoeff();
    CHECK((w.values - wf.values).cwiseAbs().maxCoeff() <= 0.05 * scale);

    const auto s = summarize(wf, &cfg.curve);
    CHECK(s.argmax_inside_reference);
}

TEST_CASE("normalization") {
    IndicatorGrid g;
    g.xs = {0, 1};
    g.ys = {0, 1};
    g.values = Eigen::MatrixXd::Constant(2, 2, 3.7);
    const auto n1 = normalize(g, 1.0);
    CHECK(n1.normalized.minCoeff() == 1.0);
    CHECK(n1.normalized.maxCoeff() == 1.0);

    g.values << 1.0, 2.0, 3.0, 4.0;
    const auto n4 = normalize(g, 4.0);
    CHECK(n4.normalized(1, 1) == 1.0);
    CHECK(n4.normalized(0, 0) == Catch::Approx(std::pow(0.25, 4.0)));

    g.values.setZero();
    CHECK_THROWS_AS(normalize(g, 2.0), validation_error);
}

TEST_CASE("noise model basics") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(8, 8);
    std::mt19937_64 rng(7);
    CHECK(add_noise(m, 0.0, NoiseModel::Norm::frobenius, rng) == m);

    // determinism with the same seed, difference with another
    CauchyData d;
    d.setup = {1.0, 8};
    d.k = 1.0;
    d.us = m;
    d.dus = 2.0 * m;
    NoiseModel model{0.05, 42, NoiseModel::Norm::frobenius};
    const auto a = add_noise(d, model);
    const auto b = add_noise(d, model);
    CHECK(a.us == b.us);
    CHECK(a.dus == b.dus);
    model.seed = 43;
    CHECK((add_noise(d, model).us - a.us).cwiseAbs().maxCoeff() > 0.0);

    // relative size of the perturbation matches delta within the norm choice
    const double rel = (a.us - d.us).norm() / d.us.norm();
    CHECK(rel < 0.05 * 1.5);
    CHECK(rel > 0.0);

    CHECK_THROWS_AS(add_noise(m, 1.5, NoiseModel::Norm::frobenius, rng), validation_error);
}

TEST_CASE("argmax is stable under 5 percent noise") {
    // The clean indicator is a ring (see above), so noise moves the argmax
    // along the ring; the stable coordinate is its radius.
    const auto cfg = example_disk(5.0 * pi);
    const auto clean = sov_cauchy_data(cfg, {1.0, 32});
    const auto noisy = add_noise(clean, {0.05, 11, NoiseModel::Norm::frobenius});
    const GridSpec grid{-1, 1, -1, 1, 75, 75};
    const auto w0 = dsm_indicator(clean, grid, cfg.k);
    const auto w1 = dsm_indicator(noisy, grid, cfg.k);
    const auto s0 = summarize(w0);
    const auto s1 = summarize(w1);
    const double cell = 2.0 / 74.0;
    CHECK(std::abs(s0.argmax.norm() - s1.argmax.norm()) <= 2.0 * cell);
    // and the field itself moves by O(delta)
    CHECK((w0.values - w1.values).cwiseAbs().maxCoeff() < 0.15 * w0.values.maxCoeff());
}

TEST_CASE("noise response is linear in the noise level") {
    const auto cfg = example_disk(1.5 * pi);
    const auto clean = sov_cauchy_data(cfg, {1.0, 32});
    const GridSpec grid{-1, 1, -1, 1, 31, 31};
    const auto w0 = dsm_indicator(clean, grid, cfg.k);
    const auto w1 =
        dsm_indicator(add_noise(clean, {0.01, 5, NoiseModel::Norm::frobenius}), grid, cfg.k);
    const auto w2 =
        dsm_indicator(add_noise(clean, {0.02, 5, NoiseModel::Norm::frobenius}), grid, cfg.k);
    const double d1 = (w1.values - w0.values).cwiseAbs().maxCoeff();
    const double d2 = (w2.values - w0.values).cwiseAbs().maxCoeff();
    CHECK(d2 <= 2.5 * d1);
}

TEST_CASE("point-in-curve classification") {
    const auto kite = BoundaryCurve::kite();
    CHECK(point_in_curve(kite, {0.0, 0.0}));
    CHECK(point_in_curve(kite, {0.0, 0.9}));
    CHECK_FALSE(point_in_curve(kite, {1.6, 0.0}));
    CHECK_FALSE(point_in_curve(kite, {0.0, 1.1}));
    // dilation widens the region
    CHECK(point_in_curve(kite, {0.0, 1.1}, 1.5));

    const auto disk = BoundaryCurve::circle(0, 0, 0.5);
    CHECK(point_in_curve(disk, {0.3, 0.3}));
    CHECK_FALSE(point_in_curve(disk, {0.45, 0.45}));
    CHECK(point_in_curve(disk, {0.45, 0.45}, 1.5));
}

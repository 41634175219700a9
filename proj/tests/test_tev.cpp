#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helmscat/tev.hpp"

using namespace helmscat;

namespace {

// reference eigenvalues for the disk R=2, n=4, mu=2, gamma=1 inside
// |z - 1.25| <= 0.35 (15-digit series values)
constexpr double kRootP2 = 1.081995004204943;
constexpr double kRootP3 = 1.444057126606098;
constexpr double kRootP1 = 1.567008428331221;
const Complex kRootP0{1.223227533499797, 0.236035304541013};

ContourSpec reference_contour() {
    ContourSpec c;
    c.center = {1.25, 0.0};
    c.radius = 0.35;
    return c;
}

int test_winding(const std::function<Complex(Complex)>& f, Complex center, double radius) {
    const int m = 4096;
    double total = 0.0;
    Complex prev = f(center + radius);
    for (int j = 1; j <= m; ++j) {
        const Complex cur = f(center + radius * std::exp(iu * (2.0 * pi * j / m)));
        total += std::arg(cur / prev);
        prev = cur;
    }
    return static_cast<int>(std::lround(total / (2.0 * pi)));
}

}  // namespace

TEST_CASE("disk determinant is conjugate symmetric for real coefficients") {
    for (Complex k : {Complex(1.1, 0.2), Complex(0.7, -0.3), Complex(2.4, 0.05)}) {
        for (int p : {0, 1, 3}) {
            const Complex a = disk_determinant(std::conj(k), p, 2.0, 4.0, 2.0, 1.0);
            const Complex b = std::conj(disk_determinant(k, p, 2.0, 4.0, 2.0, 1.0));
            CHECK(std::abs(a - b) < 1e-14 * std::max(1.0, std::abs(b)));
        }
    }
}

TEST_CASE("disk determinant vanishes at the reference eigenvalues") {
    CHECK(std::abs(disk_determinant({kRootP2, 0.0}, 2, 2.0, 4.0, 2.0, 1.0)) < 1e-10);
    CHECK(std::abs(disk_determinant(kRootP0, 0, 2.0, 4.0, 2.0, 1.0)) < 1e-9);
}

TEST_CASE("radially symmetric modes ignore mu") {
    for (Complex k : {Complex(1.2, 0.1), Complex(0.9, -0.2)}) {
        const Complex with_mu = disk_determinant(k, 0, 2.0, 4.0, 2.0, 1.0);
        const Complex without = disk_determinant(k, 0, 2.0, 4.0, 0.0, 1.0);
        CHECK(with_mu == without);
    }
}

TEST_CASE("determinant roots in the reference region") {
    const auto result = find_disk_tevs(2.0, 4.0, 2.0, 1.0, reference_contour(), 3);
    REQUIRE(result.eigenvalues.size() == 5);

    const auto& e = result.eigenvalues;  // sorted by (Re, Im)
    CHECK(std::abs(e[0].k - Complex(kRootP2, 0.0)) < 1e-9);
    CHECK(e[0].multiplicity == 2);
    CHECK(e[0].mode == 2);
    // conjugate pair: match as a set, the real parts tie to rounding
    for (const Complex want : {kRootP0, std::conj(kRootP0)}) {
        CHECK(std::min(std::abs(e[1].k - want), std::abs(e[2].k - want)) < 1e-9);
    }
    CHECK(e[1].multiplicity == 1);
    CHECK(std::abs(e[3].k - Complex(kRootP3, 0.0)) < 1e-9);
    CHECK(e[3].multiplicity == 2);
    CHECK(std::abs(e[4].k - Complex(kRootP1, 0.0)) < 1e-9);
    CHECK(e[4].mode == 1);

    int total_mult = 0;
    for (const auto& ev : e) total_mult += ev.multiplicity;
    CHECK(total_mult == 8);
    for (const auto& ev : e) CHECK(ev.residual < 1e-10);
}

TEST_CASE("root count matches an independent winding count per mode") {
    const auto contour = reference_contour();
    const auto result = find_disk_tevs(2.0, 4.0, 2.0, 1.0, contour, 3);
    for (int p = 0; p <= 3; ++p) {
        const int wind = test_winding(
            [&](Complex z) { return disk_determinant(z, p, 2.0, 4.0, 2.0, 1.0); }, contour.center,
            contour.radius);
        int found = 0;
        for (const auto& ev : result.eigenvalues)
            if (ev.mode == p) ++found;
        CHECK(found == wind);
    }
}

TEST_CASE("region without eigenvalues returns nothing") {
    ContourSpec tiny;
    tiny.center = {0.2, 0.0};
    tiny.radius = 0.05;
    const auto result = find_disk_tevs(2.0, 4.0, 2.0, 1.0, tiny, 3);
    CHECK(result.eigenvalues.empty());
    // dense scan: the determinant stays away from zero on this region
    double smallest = 1e300;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            const Complex z = tiny.center + Complex(tiny.radius * (i / 9.5 - 1.0),
                                                    tiny.radius * (j / 9.5 - 1.0));
            for (int p = 0; p <= 3; ++p)
                smallest = std::min(smallest, std::abs(disk_determinant(z, p, 2.0, 4.0, 2.0, 1.0)));
        }
    CHECK(smallest > 1e-3);
}

TEST_CASE("beyn recovers the spectrum of a linear pencil") {
    // M(k) = A - k I with known eigenvalues, densified by a fixed similarity
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
    d.diagonal() << Complex(0.3, 0.0), Complex(0.9, 0.2), Complex(1.4, 0.0), Complex(3.0, 0.0);
    Eigen::MatrixXcd p(4, 4);
    p << 1, 2, 0, 1, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 2, 1;
    const Eigen::MatrixXcd a = p * d * p.inverse();

    ContourSpec contour;
    contour.center = {1.0, 0.0};
    contour.radius = 0.8;
    contour.probes = 4;
    // the eigenvalue at 3.0 outside the contour aliases in like Q^{-N};
    // 32 nodes push that below 1e-10
    contour.quadrature_nodes = 32;
    const auto family = [&](Complex k) {
        return Eigen::MatrixXcd(a - k * Eigen::MatrixXcd::Identity(4, 4));
    };
    const auto result = beyn_solve(family, 4, contour, TevMethod::beyn_det);
    REQUIRE(result.eigenvalues.size() == 3);
    CHECK(std::abs(result.eigenvalues[0].k - Complex(0.3, 0.0)) < 1e-10);
    CHECK(std::abs(result.eigenvalues[1].k - Complex(0.9, 0.2)) < 1e-10);
    CHECK(std::abs(result.eigenvalues[2].k - Complex(1.4, 0.0)) < 1e-10);
}

TEST_CASE("beyn reports an overfull probe space") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(6, 6);
    d.diagonal() << Complex(0.6, 0), Complex(0.8, 0), Complex(1.0, 0), Complex(1.2, 0),
        Complex(1.4, 0), Complex(1.6, 0);
    ContourSpec contour;
    contour.center = {1.1, 0.0};
    contour.radius = 0.7;
    contour.probes = 4;  // fewer probes than enclosed eigenvalues
    const auto family = [&](Complex k) {
        return Eigen::MatrixXcd(d - k * Eigen::MatrixXcd::Identity(6, 6));
    };
    CHECK_THROWS_AS(beyn_solve(family, 6, contour, TevMethod::beyn_det), error);
}

TEST_CASE("beyn on the 2x2 disk mode family matches the determinant roots") {
    ContourSpec contour = reference_contour();
    contour.probes = 2;
    // exterior determinant zeros alias like Q^{-N}; 32 nodes reach 1e-6 here
    contour.quadrature_nodes = 32;
    const auto res = tev_beyn_disk_mode(0, 2.0, 4.0, 2.0, 1.0, contour);
    REQUIRE(res.eigenvalues.size() == 2);
    // match each member of the pair to its nearest reference (the real parts
    // tie, so the sort order between them is not meaningful)
    for (const Complex want : {kRootP0, std::conj(kRootP0)}) {
        double best = 1e300;
        for (const auto& e : res.eigenvalues) best = std::min(best, std::abs(e.k - want));
        CHECK(best < 1e-6);
    }
    // conjugate pairing on a conjugation-symmetric contour
    CHECK(std::abs(res.eigenvalues[0].k - std::conj(res.eigenvalues[1].k)) < 1e-6);
}

TEST_CASE("transmission matrix is near-singular exactly at eigenvalues") {
    TevProblem problem;
    problem.curve = BoundaryCurve::circle(0, 0, 2.0);
    problem.n = 4.0;
    problem.mu = 2.0;
    problem.gamma = 1.0;
    problem.collocation = 60;

    const auto at = [&](Complex k) { return smallest_singular_ratio(assemble_tev_bie(k, problem)); };
    // away from the spectrum the ratio reflects only the natural spread of
    // the operator blocks (the tangential operator is unbounded)
    CHECK(at({0.5, 0.0}) > 1e-3);
    // near the first reference eigenvalue the matrix is nearly rank deficient
    CHECK(at({kRootP2, 0.0}) < 1e-2 * at({0.5, 0.0}));
    CHECK(at({kRootP2, 0.0}) < 1e-3);
}

TEST_CASE("beyn on the boundary-integral family finds the degenerate pair") {
    TevProblem problem;
    problem.curve = BoundaryCurve::circle(0, 0, 2.0);
    problem.n = 4.0;
    problem.mu = 2.0;
    problem.gamma = 1.0;
    problem.collocation = 40;

    ContourSpec contour;
    contour.center = {1.082, 0.0};
    contour.radius = 0.05;
    contour.quadrature_nodes = 16;
    contour.probes = 6;
    const auto res = tev_beyn_bie(problem, contour);
    REQUIRE(res.eigenvalues.size() == 2);
    for (const auto& e : res.eigenvalues) {
        CHECK(std::abs(e.k - Complex(kRootP2, 0.0)) < 5e-3);
        CHECK(e.multiplicity == 2);
        CHECK(smallest_singular_ratio(assemble_tev_bie(e.k, problem)) < 1e-6);
    }
}

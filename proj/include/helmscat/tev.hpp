#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "helmscat/common.hpp"
#include "helmscat/detail/parallel.hpp"
#include "helmscat/forward_bie.hpp"
#include "helmscat/specfun.hpp"

// Transmission eigenvalues. Two routes:
//  - disk: zeros of the per-mode 2x2 determinant, located by argument-principle
//    counting on a contour followed by complex Newton refinement;
//  - general curves: the boundary-integral family M(k) z = 0 (interior jump
//    signs) handed to the Beyn contour-integral eigensolver.

namespace helmscat {

struct TevProblem {
    BoundaryCurve curve = BoundaryCurve::circle(0, 0, 1.0);
    double n = 4.0;  // the eigenvalue solvers use real coefficients with n > 1
    double mu = 2.0;
    double gamma = 1.0;
    int collocation = 60;  // N_c
    double fd_step = 0.01;

    void validate() const {
        if (!(n > 1.0)) throw validation_error("eigenvalue solver expects n > 1");
        if (collocation % 2 != 0) throw invalid_discretization("collocation count must be even");
    }
};

struct ContourSpec {
    Complex center{1.25, 0.0};
    double radius = 0.35;
    int quadrature_nodes = 24;  // trapezoid nodes on the circle
    int probes = 20;            // random probe columns
    double rank_tol = 1e-8;
    std::uint64_t seed = 20240901;

    bool contains(Complex z, double slack = 1e-10) const {
        return std::abs(z - center) <= radius * (1.0 + slack);
    }
};

enum class TevMethod { series_det, beyn_bie, beyn_det };

struct TevEigenpair {
    Complex k;
    double residual = 0.0;  // |det| (det route) or ||M(k)z|| / ||z|| (Beyn)
    int multiplicity = 1;
    int mode = -1;  // angular order for the disk determinant route
};

struct TevResult {
    std::vector<TevEigenpair> eigenvalues;
    TevMethod method = TevMethod::series_det;
};

// Column-rescaled determinant of the disk mode system; the rescaling keeps
// magnitudes O(1) without moving the zeros.
inline Complex disk_determinant(Complex k, int p, double radius, double n, double mu, double gamma) {
    const double sqn = std::sqrt(n);
    const Complex a11 = specfun::bessel_j(p, k * radius);
    const Complex a21 = k * specfun::bessel_j_deriv(p, k * radius);
    const Complex jn = specfun::bessel_j(p, k * sqn * radius);
    const Complex jnd = specfun::bessel_j_deriv(p, k * sqn * radius);
    const Complex a12 = -jn;
    const Complex a22 = -(k * sqn * jnd + (gamma + mu * double(p) * double(p) / (radius * radius)) * jn);
    const double c1 = std::max(std::abs(a11), std::abs(a21));
    const double c2 = std::max(std::abs(a12), std::abs(a22));
    if (c1 == 0.0 || c2 == 0.0) return 0.0;
    return (a11 / c1) * (a22 / c2) - (a12 / c2) * (a21 / c1);
}

namespace detail_tev {

// winding number of f along the contour circle, refining until the sampled
// phase increments are unambiguous
inline int winding_count(const std::function<Complex(Complex)>& f, const ContourSpec& region) {
    int m = 128;
    for (int attempt = 0; attempt < 6; ++attempt, m *= 2) {
        double total = 0.0;
        bool ok = true;
        Complex prev = f(region.center + region.radius);
        for (int j = 1; j <= m; ++j) {
            const double th = 2.0 * pi * j / m;
            const Complex cur = f(region.center + region.radius * std::exp(iu * th));
            const double dphase = std::arg(cur / prev);
            if (std::abs(dphase) > 0.5 * pi || cur == Complex(0.0)) {
                ok = false;
                break;
            }
            total += dphase;
            prev = cur;
        }
        if (ok) return static_cast<int>(std::lround(total / (2.0 * pi)));
    }
    throw error("argument-principle winding did not stabilize on the contour");
}

inline std::vector<Complex> newton_roots(const std::function<Complex(Complex)>& f,
                                         const ContourSpec& region, int expected) {
    std::vector<Complex> roots;
    const double fd = 1e-6;
    const auto try_seed = [&](Complex z) {
        for (int it = 0; it < 50; ++it) {
            const Complex fz = f(z);
            const Complex dfz = (f(z + fd) - f(z - fd)) / (2.0 * fd);
            if (dfz == Complex(0.0)) return;
            const Complex step = fz / dfz;
            z -= step;
            if (std::abs(step) <= 1e-12) {
                if (!region.contains(z, 1e-6)) return;
                for (const Complex& r : roots)
                    if (std::abs(r - z) < 1e-8) return;
                if (std::abs(f(z)) < 1e-8) roots.push_back(z);
                return;
            }
        }
    };
    for (double fr : {0.0, 0.25, 0.5, 0.75, 0.92}) {
        for (int ia = 0; ia < 8; ++ia) {
            const double th = 2.0 * pi * ia / 8.0 + 0.3;
            try_seed(region.center + fr * region.radius * std::exp(iu * th));
            if (static_cast<int>(roots.size()) == expected) return roots;
        }
        if (fr == 0.0) continue;
    }
    return roots;
}

// roots of f inside the region; mismatches against the winding count trigger
// a subdivision into four overlapping half-radius disks
inline void roots_in_region(const std::function<Complex(Complex)>& f, const ContourSpec& region,
                            std::vector<Complex>& out, int depth = 0) {
    const int count = winding_count(f, region);
    if (count == 0) return;
    auto found = newton_roots(f, region, count);
    if (static_cast<int>(found.size()) != count && depth < 6) {
        // four overlapping subdisks covering the region (radius >= 0.73 r is
        // enough at offset 0.55 r); grown slightly on retry in case a root
        // sits on a subdisk boundary
        for (int q = 0; q < 4; ++q) {
            ContourSpec sub = region;
            sub.center = region.center +
                         0.55 * region.radius * std::exp(iu * (0.25 * pi + 0.5 * pi * q));
            std::vector<Complex> sub_roots;
            for (double fac : {0.75, 0.77, 0.80}) {
                sub.radius = fac * region.radius;
                sub_roots.clear();
                try {
                    roots_in_region(f, sub, sub_roots, depth + 1);
                    break;
                } catch (const error&) {
                    if (fac == 0.80) throw;
                }
            }
            for (const Complex& z : sub_roots) {
                if (!region.contains(z, 1e-6)) continue;
                bool dup = false;
                for (const Complex& r2 : found)
                    if (std::abs(r2 - z) < 1e-8) dup = true;
                if (!dup) found.push_back(z);
            }
        }
    }
    if (static_cast<int>(found.size()) != count)
        throw error("root search disagrees with the argument-principle count");
    for (const Complex& z : found) {
        bool dup = false;
        for (const Complex& r2 : out)
            if (std::abs(r2 - z) < 1e-8) dup = true;
        if (!dup) out.push_back(z);
    }
}

}  // namespace detail_tev

inline TevResult find_disk_tevs(double radius, double n, double mu, double gamma,
                                const ContourSpec& region, int p_max) {
    if (p_max < 0) throw validation_error("p_max must be nonnegative");
    TevResult result;
    result.method = TevMethod::series_det;
    for (int p = 0; p <= p_max; ++p) {
        const auto det = [&](Complex k) { return disk_determinant(k, p, radius, n, mu, gamma); };
        std::vector<Complex> roots;
        detail_tev::roots_in_region(det, region, roots);
        for (const Complex& k : roots) {
            TevEigenpair e;
            e.k = k;
            e.residual = std::abs(det(k));
            e.multiplicity = (p == 0) ? 1 : 2;  // the +-p mode degeneracy
            e.mode = p;
            result.eigenvalues.push_back(e);
        }
    }
    std::sort(result.eigenvalues.begin(), result.eigenvalues.end(),
              [](const TevEigenpair& a, const TevEigenpair& b) {
                  return a.k.real() != b.k.real() ? a.k.real() < b.k.real() : a.k.imag() < b.k.imag();
              });
    return result;
}

// Interior transmission block matrix M(k) for the Beyn route.
inline Eigen::MatrixXcd assemble_tev_bie(Complex k, const TevProblem& problem) {
    problem.validate();
    return assemble_transmission_matrix(problem.curve, k, Complex(problem.n, 0.0),
                                        Complex(problem.mu, 0.0), Complex(problem.gamma, 0.0),
                                        problem.collocation, problem.fd_step,
                                        /*interior_jump=*/true);
}

inline double smallest_singular_ratio(const Eigen::MatrixXcd& m) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    return s(s.size() - 1) / s(0);
}

// Beyn's contour-integral method (two moments, rank-revealing SVD).
inline TevResult beyn_solve(const std::function<Eigen::MatrixXcd(Complex)>& family, int dim,
                            const ContourSpec& contour, TevMethod method = TevMethod::beyn_bie) {
    const int ell = std::min(contour.probes, dim);
    std::mt19937_64 rng(contour.seed);
    const auto uniform = [&rng]() { return (rng() >> 11) * (1.0 / 9007199254740992.0); };
    Eigen::MatrixXcd probe(dim, ell);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < ell; ++j) {
            // Box-Muller, fully deterministic across platforms
            const double u1 = std::max(uniform(), 1e-300), u2 = uniform();
            const double u3 = std::max(uniform(), 1e-300), u4 = uniform();
            probe(i, j) = Complex(std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2),
                                  std::sqrt(-2.0 * std::log(u3)) * std::cos(2.0 * pi * u4));
        }

    const int nq = contour.quadrature_nodes;
    std::vector<Eigen::MatrixXcd> node_a0(nq), node_a1(nq);
    detail::parallel_for(nq, [&](int j) {
        double theta = 2.0 * pi * j / nq;
        for (int attempt = 0;; ++attempt) {
            const Complex zj = contour.center + contour.radius * std::exp(iu * theta);
            const Eigen::MatrixXcd mj = family(zj);
            const Eigen::MatrixXcd sol = Eigen::PartialPivLU<Eigen::MatrixXcd>(mj).solve(probe);
            if (sol.allFinite()) {
                const Complex w = contour.radius * std::exp(iu * theta) / static_cast<double>(nq);
                node_a0[j] = w * sol;
                node_a1[j] = zj * w * sol;
                return;
            }
            if (attempt >= 3) throw error("beyn quadrature hit a singular node repeatedly");
            theta += 1e-4;  // nudge off the singular point and retry
        }
    });
    Eigen::MatrixXcd a0 = Eigen::MatrixXcd::Zero(dim, ell), a1 = Eigen::MatrixXcd::Zero(dim, ell);
    for (int j = 0; j < nq; ++j) {
        a0 += node_a0[j];
        a1 += node_a1[j];
    }

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a0, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    int rank = 0;
    while (rank < sigma.size() && sigma(rank) > contour.rank_tol * sigma(0)) ++rank;
    if (rank == 0) return TevResult{{}, method};
    if (rank == ell && ell < dim)
        throw error("beyn probe count is too small: the moment matrix has full numerical rank");

    const Eigen::MatrixXcd v0 = svd.matrixU().leftCols(rank);
    const Eigen::MatrixXcd w0 = svd.matrixV().leftCols(rank);
    const Eigen::VectorXd s0 = sigma.head(rank);
    Eigen::MatrixXcd b = v0.adjoint() * a1 * w0;
    for (int c = 0; c < rank; ++c) b.col(c) /= s0(c);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(b);
    TevResult result;
    result.method = method;
    std::vector<TevEigenpair> found;
    for (int i = 0; i < rank; ++i) {
        const Complex lambda = eig.eigenvalues()(i);
        if (!contour.contains(lambda, 1e-8)) continue;
        const Eigen::VectorXcd v = v0 * eig.eigenvectors().col(i);
        const Eigen::MatrixXcd mk = family(lambda);
        TevEigenpair e;
        e.k = lambda;
        e.residual = (mk * v).norm() / v.norm() / mk.cwiseAbs().maxCoeff();
        found.push_back(e);
    }
    // multiplicity tags from clustering
    std::sort(found.begin(), found.end(), [](const TevEigenpair& a, const TevEigenpair& b) {
        return a.k.real() != b.k.real() ? a.k.real() < b.k.real() : a.k.imag() < b.k.imag();
    });
    for (size_t i = 0; i < found.size(); ++i) {
        int mult = 1;
        for (size_t j = 0; j < found.size(); ++j)
            if (j != i && std::abs(found[j].k - found[i].k) < 1e-6) ++mult;
        found[i].multiplicity = mult;
    }
    result.eigenvalues = std::move(found);
    return result;
}

inline TevResult tev_beyn_bie(const TevProblem& problem, const ContourSpec& contour) {
    const int dim = 2 * problem.collocation;
    return beyn_solve([&](Complex k) { return assemble_tev_bie(k, problem); }, dim, contour,
                      TevMethod::beyn_bie);
}

// Beyn applied to the 2x2 determinant system of one disk mode (cross-check of
// the two routes on the same operator family).
inline TevResult tev_beyn_disk_mode(int p, double radius, double n, double mu, double gamma,
                                    const ContourSpec& contour) {
    const double sqn = std::sqrt(n);
    const auto family = [&](Complex k) {
        Eigen::MatrixXcd m(2, 2);
        const Complex jn = specfun::bessel_j(p, k * sqn * radius);
        m(0, 0) = specfun::bessel_j(p, k * radius);
        m(0, 1) = -jn;
        m(1, 0) = k * specfun::bessel_j_deriv(p, k * radius);
        m(1, 1) = -(k * sqn * specfun::bessel_j_deriv(p, k * sqn * radius) +
                    (gamma + mu * double(p) * double(p) / (radius * radius)) * jn);
        return m;
    };
    return beyn_solve(family, 2, contour, TevMethod::beyn_det);
}

struct TevSurveyRow {
    std::string label;
    std::vector<TevEigenpair> eigenvalues;  // sorted by real part
};

// Eigenvalues over [0.5, 2.95] x [-0.2, 0.2] for each curve: a chain of small
// overlapping Beyn contours hugging the real axis (where the survey
// eigenvalues live); each eigenvalue is only accepted from the inner 80% of a
// contour, so every point of the band lies in some trusted core.
inline std::vector<TevSurveyRow> tev_survey(double n, double mu, double gamma,
                                            const std::vector<std::pair<std::string, BoundaryCurve>>& curves,
                                            int collocation = 120, double fd_step = 0.01,
                                            double residual_tol = 1e-6) {
    std::vector<TevSurveyRow> rows;
    for (const auto& [label, curve] : curves) {
        TevProblem problem;
        problem.curve = curve;
        problem.n = n;
        problem.mu = mu;
        problem.gamma = gamma;
        problem.collocation = collocation;
        problem.fd_step = fd_step;

        // accepted entries tagged by the contour that produced them
        std::vector<std::pair<int, TevEigenpair>> accepted;
        int contour_index = 0;
        for (double center : {0.7, 1.1, 1.5, 1.9, 2.3, 2.7}) {
            ContourSpec contour;
            contour.center = Complex(center, 0.0);
            contour.radius = 0.25;
            contour.quadrature_nodes = 24;
            contour.probes = 16;
            const auto res = tev_beyn_bie(problem, contour);
            for (const auto& e : res.eigenvalues) {
                if (std::abs(e.k - contour.center) > 0.8 * contour.radius) continue;
                if (!(smallest_singular_ratio(assemble_tev_bie(e.k, problem)) <= residual_tol))
                    continue;
                accepted.emplace_back(contour_index, e);
            }
            ++contour_index;
        }
        // Merge across contours without collapsing genuine degeneracies:
        // within a 1e-6 cluster, the physical count is the largest number of
        // copies any single contour reported (degenerate pairs arrive twice
        // from one contour; overlap duplicates arrive once from each).
        std::vector<TevEigenpair> all;
        std::vector<bool> used(accepted.size(), false);
        for (size_t i = 0; i < accepted.size(); ++i) {
            if (used[i]) continue;
            std::vector<size_t> cluster;
            for (size_t j = i; j < accepted.size(); ++j)
                if (!used[j] && std::abs(accepted[j].second.k - accepted[i].second.k) < 1e-6) {
                    cluster.push_back(j);
                    used[j] = true;
                }
            std::vector<int> per_contour(contour_index, 0);
            size_t best = cluster.front();
            for (size_t j : cluster) {
                ++per_contour[accepted[j].first];
                if (accepted[j].second.residual < accepted[best].second.residual) best = j;
            }
            const int copies = *std::max_element(per_contour.begin(), per_contour.end());
            TevEigenpair rep = accepted[best].second;
            rep.multiplicity = copies;
            for (int c = 0; c < copies; ++c) all.push_back(rep);
        }
        std::sort(all.begin(), all.end(), [](const TevEigenpair& a, const TevEigenpair& b) {
            return a.k.real() != b.k.real() ? a.k.real() < b.k.real() : a.k.imag() < b.k.imag();
        });
        rows.push_back({label, std::move(all)});
    }
    return rows;
}

}  // namespace helmscat

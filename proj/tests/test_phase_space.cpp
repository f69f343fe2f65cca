#include <cmath>

#include "akmeter/phase_space.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace akmeter;

namespace {

const double kPi = M_PI;

// Analytic Wigner function of a coherent state.
double coherent_wigner(double x, double p, double mu_x, double mu_p, double lambda,
                       double hbar) {
    const double l2 = lambda * lambda;
    return std::exp(-(x - mu_x) * (x - mu_x) / l2 -
                    l2 * (p - mu_p) * (p - mu_p) / (hbar * hbar)) /
           (kPi * hbar);
}

PhaseSpaceDist analytic_gaussian_dist(const GridSpec1D& xg, const GridSpec1D& pg,
                                      double mx, double mp, double vx, double vp,
                                      double mass_total) {
    PhaseSpaceDist d;
    d.x_axis = xg;
    d.p_axis = pg;
    d.values.resize(xg.n * pg.n);
    const double norm = mass_total / (2.0 * kPi * std::sqrt(vx * vp));
    for (std::size_t i = 0; i < xg.n; ++i) {
        for (std::size_t k = 0; k < pg.n; ++k) {
            const double dx = xg.x(i) - mx;
            const double dp = pg.x(k) - mp;
            d.at(i, k) = norm * std::exp(-0.5 * dx * dx / vx - 0.5 * dp * dp / vp);
        }
    }
    return d;
}

}  // namespace

TEST_CASE("coherent_wavefunction: normalization, moments, momentum shift") {
    const GridSpec1D g = GridSpec1D::centered(10.0, 128, 1.0);
    const WaveFunction1D c0 = coherent_wavefunction({0.0, 0.0, 1.0}, g);
    CHECK(std::abs(norm_squared(c0) - 1.0) < 1e-9);
    for (const auto& a : c0.amps) CHECK(std::abs(a.imag()) < 1e-15);  // real even

    const WaveFunction1D c2 = coherent_wavefunction({2.0, 0.0, 1.0}, g);
    CHECK(expect_multiplicative(c2, [](double x) { return x; }) ==
          doctest::Approx(2.0).epsilon(1e-6));
    std::size_t peak = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        if (std::abs(c2.amps[i]) > std::abs(c2.amps[peak])) peak = i;
    }
    CHECK(std::abs(g.x(peak) - 2.0) <= g.dx);

    const WaveFunction1D cp = coherent_wavefunction({0.0, 3.0, 1.0}, g);
    const WaveFunction1D cp_mom = to_momentum_rep(cp);
    CHECK(expect_multiplicative(cp_mom, [](double p) { return p; }) ==
          doctest::Approx(3.0).epsilon(1e-6));
    // Fourier-shift oracle: |psi~(p)| equals the undisplaced transform at p-3.
    for (std::size_t r : {std::size_t(50), std::size_t(64), std::size_t(80)}) {
        const double want = std::abs(oracle::fourier_quadrature(c0, cp_mom.grid.x(r) - 3.0));
        CHECK(std::abs(std::abs(cp_mom.amps[r]) - want) < 1e-10);
    }

    const GridSpec1D tight = GridSpec1D::centered(4.0, 64, 1.0);
    CHECK_THROWS_AS(coherent_wavefunction({3.5, 0.0, 1.0}, tight), BoundaryLeak);
}

TEST_CASE("wigner_of_pure: coherent peak, displacement, marginals, bound, purity") {
    const GridSpec1D g = GridSpec1D::centered(10.0, 128, 1.0);
    const WaveFunction1D c0 = coherent_wavefunction({0.0, 0.0, 1.0}, g);
    const PhaseSpaceDist w = wigner_of_pure(c0);

    // Peak value 1/(pi hbar) at the origin; cross-checked below by quadrature.
    CHECK(w.at(g.n / 2, g.n / 2) == doctest::Approx(1.0 / kPi).epsilon(1e-4));
    auto psi_fn = [](double x) { return std::pow(kPi, -0.25) * std::exp(-0.5 * x * x); };
    for (auto [i, k] : std::vector<std::pair<std::size_t, std::size_t>>{
             {64, 64}, {70, 64}, {64, 70}, {58, 61}}) {
        const double want =
            oracle::wigner_quadrature(psi_fn, g.x(i), w.p_axis.x(k), 1.0, 10.0, 4000);
        CHECK(w.at(i, k) == doctest::Approx(want).epsilon(1e-6));
    }
    CHECK(mass(w) == doctest::Approx(1.0).epsilon(1e-6));

    // Displaced state peaks at (2,3).
    const PhaseSpaceDist wd = wigner_of_pure(coherent_wavefunction({2.0, 3.0, 1.0}, g));
    std::size_t bi = 0, bk = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t k = 0; k < g.n; ++k) {
            if (wd.at(i, k) > best) {
                best = wd.at(i, k);
                bi = i;
                bk = k;
            }
        }
    }
    CHECK(std::abs(wd.x_axis.x(bi) - 2.0) <= wd.x_axis.dx);
    CHECK(std::abs(wd.p_axis.x(bk) - 3.0) <= wd.p_axis.dx);

    // Marginals against |psi|^2 and |psi~|^2 in L1.
    const WaveFunction1D mom = to_momentum_rep(c0);
    const std::vector<double> mx = marginal_x(w);
    const std::vector<double> mp = marginal_p(w);
    double l1x = 0.0, l1p = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        l1x += std::abs(mx[i] - std::norm(c0.amps[i])) * g.dx;
        l1p += std::abs(mp[i] - std::norm(mom.amps[i])) * w.p_axis.dx;
    }
    CHECK(l1x < 1e-6);
    CHECK(l1p < 1e-6);

    // |W| bound and pure-state phase-space purity.
    CHECK(max_abs_value(w) <= 1.0 / (kPi * g.hbar) + 1e-6);
    double w2 = 0.0;
    for (double v : w.values) w2 += v * v;
    w2 *= w.x_axis.dx * w.p_axis.dx * g.h();
    CHECK(w2 == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("wigner_of_pure: cat-state interference fringes with negative minima") {
    const GridSpec1D g = GridSpec1D::centered(12.0, 256, 1.0);
    const double a = 2.5;
    WaveFunction1D cat;
    cat.grid = g;
    cat.amps.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        cat.amps[i] = std::exp(-0.5 * (x - a) * (x - a)) + std::exp(-0.5 * (x + a) * (x + a));
    }
    cat = normalize(std::move(cat));
    const PhaseSpaceDist w = wigner_of_pure(cat);

    // Fringes along p at x = 0, negative minima; desk-scale quadrature oracle.
    const double cat_norm = std::sqrt(2.0 * std::sqrt(kPi) * (1.0 + std::exp(-a * a)));
    auto cat_fn = [&](double x) {
        return (std::exp(-0.5 * (x - a) * (x - a)) + std::exp(-0.5 * (x + a) * (x + a))) /
               cat_norm;
    };
    const std::size_t ix0 = g.n / 2;
    double min_val = 0.0;
    for (std::size_t k = 0; k < g.n; ++k) min_val = std::min(min_val, w.at(ix0, k));
    CHECK(min_val < -0.1);  // strong negativity at the midpoint
    for (std::size_t k : {std::size_t(124), std::size_t(128), std::size_t(131)}) {
        const double want =
            oracle::wigner_quadrature(cat_fn, 0.0, w.p_axis.x(k), 1.0, 12.0, 6000);
        CHECK(w.at(ix0, k) == doctest::Approx(want).epsilon(1e-6));
    }
    CHECK(max_abs_value(w) <= 1.0 / kPi + 1e-6);
}

TEST_CASE("wigner_of_density: purity consistency, mixtures, convolution oracle") {
    const GridSpec1D g = GridSpec1D::centered(10.0, 128, 1.0);
    const WaveFunction1D c0 = coherent_wavefunction({1.0, -0.5, 1.0}, g);
    const PhaseSpaceDist via_rho = wigner_of_density(pure_density(c0));
    const PhaseSpaceDist via_psi = wigner_of_pure(c0);
    double gap = 0.0;
    for (std::size_t i = 0; i < via_rho.values.size(); ++i) {
        gap = std::max(gap, std::abs(via_rho.values[i] - via_psi.values[i]));
    }
    CHECK(gap < 1e-8);

    // Equal incoherent mixture of displaced packets: two humps, no fringes.
    const WaveFunction1D cp = coherent_wavefunction({2.5, 0.0, 1.0}, g);
    const WaveFunction1D cm = coherent_wavefunction({-2.5, 0.0, 1.0}, g);
    DensityMatrix1D mix;
    mix.grid = g;
    mix.elems.resize(g.n * g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        for (std::size_t k = 0; k < g.n; ++k) {
            mix.at(j, k) = 0.5 * (cp.amps[j] * std::conj(cp.amps[k]) +
                                  cm.amps[j] * std::conj(cm.amps[k]));
        }
    }
    const PhaseSpaceDist wm = wigner_of_density(mix);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t k = 0; k < g.n; ++k) {
            const double want = 0.5 * coherent_wigner(g.x(i), wm.p_axis.x(k), 2.5, 0, 1, 1) +
                                0.5 * coherent_wigner(g.x(i), wm.p_axis.x(k), -2.5, 0, 1, 1);
            worst = std::max(worst, std::abs(wm.at(i, k) - want));
        }
    }
    CHECK(worst < 1e-6);
    CHECK(min_value(wm) > -1e-9);  // no interference: mixture stays nonnegative

    // Thermal-like mixture of coherent projectors: x-variance adds exactly.
    DensityMatrix1D th;
    th.grid = g;
    th.elems.assign(g.n * g.n, cdouble{});
    double wsum = 0.0, cmean = 0.0, cvar = 0.0;
    const double s = 0.9;
    std::vector<std::pair<double, double>> comps;
    for (int m = -10; m <= 10; ++m) {
        const double c = 0.35 * m;
        comps.emplace_back(c, std::exp(-0.5 * c * c / (s * s)));
        wsum += comps.back().second;
    }
    for (auto& [c, weight] : comps) {
        weight /= wsum;
        cmean += weight * c;
        const WaveFunction1D cc = coherent_wavefunction({c, 0.0, 1.0}, g);
        for (std::size_t j = 0; j < g.n; ++j) {
            for (std::size_t k = 0; k < g.n; ++k) {
                th.at(j, k) += weight * cc.amps[j] * std::conj(cc.amps[k]);
            }
        }
    }
    for (const auto& [c, weight] : comps) cvar += weight * (c - cmean) * (c - cmean);
    const PhaseSpaceDist wt = wigner_of_density(th);
    const PhaseSpaceMoments mo = moments(wt);
    CHECK(mo.var_x == doctest::Approx(0.5 + cvar).epsilon(1e-6));
    CHECK(mo.var_p == doctest::Approx(0.5).epsilon(1e-6));

    DensityMatrix1D broken = mix;
    broken.at(2, 9) += cdouble{0.0, 0.3};
    CHECK_THROWS_AS(wigner_of_density(broken), NotHermitian);
}

TEST_CASE("husimi: Gaussian variances, positivity, overlap duality, narrow kernel") {
    const GridSpec1D g = GridSpec1D::centered(10.0, 128, 1.0);
    const WaveFunction1D c0 = coherent_wavefunction({0.5, -1.0, 1.0}, g);

    const PhaseSpaceDist q = husimi(c0, 1.0);
    CHECK(mass(q) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(min_value(q) > -1e-9);
    const PhaseSpaceMoments mo = moments(q);
    CHECK(mo.var_x == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(mo.var_p == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(mo.mean_x == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(mo.mean_p == doctest::Approx(-1.0).epsilon(1e-6));

    // Dual route |<coherent|psi>|^2/h agrees in L-infinity.
    const GridSpec1D wide = GridSpec1D::centered(13.0, 128, 1.0);
    for (std::uint64_t seed : {5ULL, 21ULL}) {
        const WaveFunction1D psi = oracle::random_smooth_state_1d(wide, seed);
        const PhaseSpaceDist qa = husimi(psi, 1.0);
        const PhaseSpaceDist qb = husimi_overlap(psi, 1.0);
        double linf = 0.0;
        for (std::size_t i = 0; i < qa.values.size(); ++i) {
            linf = std::max(linf, std::abs(qa.values[i] - qb.values[i]));
        }
        CHECK(linf < 1e-6);
        CHECK(min_value(qa) > -1e-9);
    }

    // Narrow kernel: the x-marginal of Q approaches |psi(x)|^2.
    WaveFunction1D cat;
    cat.grid = g;
    cat.amps.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        cat.amps[i] = std::exp(-0.5 * (x - 2) * (x - 2)) + std::exp(-0.5 * (x + 2) * (x + 2));
    }
    cat = normalize(std::move(cat));
    double gap_half = 0.0, gap_quarter = 0.0;
    for (double li : {0.5, 0.25}) {
        const std::vector<double> mq = marginal_x(husimi(cat, li));
        double l1 = 0.0;
        for (std::size_t i = 0; i < g.n; ++i) {
            l1 += std::abs(mq[i] - std::norm(cat.amps[i])) * g.dx;
        }
        (li == 0.5 ? gap_half : gap_quarter) = l1;
    }
    CHECK(gap_quarter < gap_half);
    CHECK(gap_quarter < 0.05);
}

TEST_CASE("smeared_wigner: Husimi limit, cosh-eta broadening, monotone variance") {
    const GridSpec1D g = GridSpec1D::centered(10.0, 128, 1.0);
    const WaveFunction1D c0 = coherent_wavefunction({0.0, 0.0, 1.0}, g);

    const PhaseSpaceDist s0 = smeared_wigner(c0, 1.0, 0.0);
    const PhaseSpaceDist q = husimi(c0, 1.0);
    CHECK(l1_distance(s0, q) < 1e-8);

    const double eta = std::log(2.0);
    const PhaseSpaceDist s1 = smeared_wigner(c0, 1.0, eta);
    CHECK(mass(s1) == doctest::Approx(1.0).epsilon(1e-6));
    const PhaseSpaceMoments mo = moments(s1);
    CHECK(mo.var_x == doctest::Approx(0.5 * (1.0 + std::cosh(eta))).epsilon(1e-6));
    CHECK(mo.var_p == doctest::Approx(0.5 * (1.0 + std::cosh(eta))).epsilon(1e-6));

    double prev = moments(s0).var_x;
    for (double e : {0.4, 0.9, 1.4}) {
        const double v = moments(smeared_wigner(c0, 1.0, e)).var_x;
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("convolve2d: identity kernel, Gaussian variance addition, Fubini mass") {
    const GridSpec1D xg = GridSpec1D::centered(10.0, 128, 1.0);
    const GridSpec1D pg = xg.conjugate();

    // Near-delta kernel: one cell of mass one.
    PhaseSpaceDist delta;
    delta.x_axis = xg;
    delta.p_axis = pg;
    delta.values.assign(xg.n * pg.n, 0.0);
    delta.at(xg.n / 2, pg.n / 2) = 1.0 / (xg.dx * pg.dx);
    const PhaseSpaceDist a = analytic_gaussian_dist(xg, pg, 0.4, -0.2, 0.7, 1.1, 1.0);
    const PhaseSpaceDist ident = convolve2d(a, delta);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        worst = std::max(worst, std::abs(ident.values[i] - a.values[i]));
    }
    CHECK(worst < 1e-4);

    // Gaussian (*) Gaussian: covariances add.
    const PhaseSpaceDist b = analytic_gaussian_dist(xg, pg, -0.3, 0.5, 0.4, 0.9, 1.0);
    const PhaseSpaceDist ab = convolve2d(a, b);
    const PhaseSpaceDist want = analytic_gaussian_dist(xg, pg, 0.1, 0.3, 1.1, 2.0, 1.0);
    CHECK(l1_distance(ab, want) < 1e-5);

    // Fubini: output mass is the product of input masses.
    const PhaseSpaceDist c = analytic_gaussian_dist(xg, pg, 0.2, 0.1, 0.5, 0.8, 0.37);
    const PhaseSpaceDist d = analytic_gaussian_dist(xg, pg, -0.4, 0.3, 0.9, 0.6, 2.13);
    CHECK(mass(convolve2d(c, d)) == doctest::Approx(mass(c) * mass(d)).epsilon(1e-6));

    // Same property on random decaying inputs (signed values allowed).
    for (std::uint64_t seed : {3ULL, 9ULL, 27ULL}) {
        PhaseSpaceDist ra, rb;
        ra.x_axis = rb.x_axis = xg;
        ra.p_axis = rb.p_axis = pg;
        ra.values.resize(xg.n * pg.n);
        rb.values.resize(xg.n * pg.n);
        for (std::size_t i = 0; i < xg.n; ++i) {
            const double x = xg.x(i);
            for (std::size_t k = 0; k < pg.n; ++k) {
                const double p = pg.x(k);
                const double env = std::exp(-0.8 * x * x - 0.7 * p * p);
                ra.at(i, k) = env * (oracle::uniform01(seed, i * pg.n + k) - 0.3);
                rb.at(i, k) = env * (oracle::uniform01(seed + 100, i * pg.n + k) - 0.6);
            }
        }
        CHECK(mass(convolve2d(ra, rb)) ==
              doctest::Approx(mass(ra) * mass(rb)).epsilon(1e-6));
    }

    PhaseSpaceDist other = a;
    other.x_axis = GridSpec1D::centered(9.0, 128, 1.0);
    CHECK_THROWS_AS(convolve2d(a, other), GridMismatch);

    // Mass parked against the window edge must be flagged, not wrapped.
    const PhaseSpaceDist edge = analytic_gaussian_dist(xg, pg, 8.0, 0.0, 0.7, 1.0, 1.0);
    const PhaseSpaceDist edge2 = analytic_gaussian_dist(xg, pg, 4.0, 0.0, 0.7, 1.0, 1.0);
    CHECK_THROWS_AS(convolve2d(edge, edge2), AliasingDetected);
}

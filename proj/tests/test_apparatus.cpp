#include <cmath>
#include <cstring>

#include "akmeter/apparatus.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace akmeter;

namespace {

const double kSqrt2 = std::sqrt(2.0);

WaveFunction1D bimodal(const GridSpec1D& g, double sep, double width) {
    WaveFunction1D w;
    w.grid = g;
    w.amps.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        w.amps[i] = std::exp(-0.5 * (x - 0.5 * sep) * (x - 0.5 * sep) / (width * width)) +
                    0.6 * std::exp(-0.5 * (x + 0.5 * sep) * (x + 0.5 * sep) / (width * width));
    }
    return normalize(std::move(w));
}

// Second moments straight off the amplitude arrays (coordinate side) and via
// 4th-order finite differences (momentum side); no FFT involved.
struct DirectMoments {
    double ei2, ef2, eief, dpi2, dpf2, ddp2;
};

DirectMoments direct_moments(const WaveFunction2D& w) {
    DirectMoments m{};
    const GridSpec1D& g1 = w.grid.axis1;
    const GridSpec1D& g2 = w.grid.axis2;
    const double cell = g1.dx * g2.dx;
    for (std::size_t i = 0; i < g1.n; ++i) {
        for (std::size_t f = 0; f < g2.n; ++f) {
            const double p = std::norm(w.at(i, f)) * cell;
            m.ei2 += g1.x(i) * g1.x(i) * p;
            m.ef2 += g2.x(f) * g2.x(f) * p;
            m.eief += g1.x(i) * g2.x(f) * p;
        }
    }
    // <eps_Pi^2> = hbar^2 ||d phi/d ei||^2, similarly for ef and the sum.
    const double h2 = g1.hbar * g1.hbar;
    auto amp = [&](long i, long f) -> cdouble {
        if (i < 0 || f < 0 || i >= long(g1.n) || f >= long(g2.n)) return {0.0, 0.0};
        return w.at(std::size_t(i), std::size_t(f));
    };
    for (long i = 0; i < long(g1.n); ++i) {
        for (long f = 0; f < long(g2.n); ++f) {
            const cdouble di = (-amp(i + 2, f) + 8.0 * amp(i + 1, f) - 8.0 * amp(i - 1, f) +
                                amp(i - 2, f)) /
                               (12.0 * g1.dx);
            const cdouble df = (-amp(i, f + 2) + 8.0 * amp(i, f + 1) - 8.0 * amp(i, f - 1) +
                                amp(i, f - 2)) /
                               (12.0 * g2.dx);
            m.dpi2 += std::norm(di) * cell * h2;
            m.dpf2 += std::norm(df) * cell * h2;
            m.ddp2 += std::norm(di + df) * cell * h2;
        }
    }
    return m;
}

}  // namespace

TEST_CASE("retrodictively optimal: resolution split and phi_f independence") {
    const GridSpec1D g = GridSpec1D::centered(14.0, 128, 1.0);

    const ApparatusState a1 = make_retrodictively_optimal(1.0, gaussian_packet(g, 0.0, 1.0));
    const ErrorReport r1 = error_report(a1);
    CHECK(r1.dei_x * r1.dei_p == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r1.dei_x == doctest::Approx(1.0 / kSqrt2).epsilon(1e-9));

    const ApparatusState a2 = make_retrodictively_optimal(2.0, gaussian_packet(g, 0.0, 1.0));
    const ErrorReport r2 = error_report(a2);
    CHECK(r2.dei_x == doctest::Approx(kSqrt2).epsilon(1e-9));
    CHECK(r2.dei_p == doctest::Approx(1.0 / (2.0 * kSqrt2)).epsilon(1e-9));

    // Wildly non-Gaussian predictive factor leaves the retrodictive product pinned.
    const ApparatusState a3 = make_retrodictively_optimal(1.0, bimodal(g, 5.0, 0.9));
    const ErrorReport r3 = error_report(a3);
    CHECK(r3.dei_x * r3.dei_p == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(r3.def_x * r3.def_p > 0.5 + 1e-3);

    // Disturbance decomposition for retrodictively optimal states.
    CHECK(r3.dd_x * r3.dd_x ==
          doctest::Approx(0.5 + r3.def_x * r3.def_x).epsilon(1e-6));
    CHECK(r3.dd_p * r3.dd_p ==
          doctest::Approx(0.5 + r3.def_p * r3.def_p).epsilon(1e-6));
}

TEST_CASE("predictively optimal: mirror figures, lambda_f independence") {
    const GridSpec1D g = GridSpec1D::centered(14.0, 128, 1.0);
    const ErrorReport r1 = error_report(make_predictively_optimal(1.0, gaussian_packet(g, 0.0, 1.0)));
    CHECK(r1.def_x * r1.def_p == doctest::Approx(0.5).epsilon(1e-9));

    const ErrorReport r2 = error_report(make_predictively_optimal(0.5, gaussian_packet(g, 0.0, 1.0)));
    CHECK(r2.def_x == doctest::Approx(0.5 / kSqrt2).epsilon(1e-9));

    // Retrodictive figures depend only on phi_i.
    const WaveFunction1D phi_i = bimodal(g, 4.0, 1.1);
    const ErrorReport ra = error_report(make_predictively_optimal(0.7, phi_i));
    const ErrorReport rb = error_report(make_predictively_optimal(1.9, phi_i));
    CHECK(ra.dei_x == doctest::Approx(rb.dei_x).epsilon(1e-10));
    CHECK(ra.dei_p == doctest::Approx(rb.dei_p).epsilon(1e-10));
}

TEST_CASE("completely optimal: saturation, disturbance product, AK pointer Gaussian") {
    const GridSpec1D g = GridSpec1D::centered(14.0, 128, 1.0);
    const ErrorReport r11 = error_report(make_completely_optimal(1.0, 1.0, g));
    CHECK(r11.dei_x == doctest::Approx(1.0 / kSqrt2).epsilon(1e-9));
    CHECK(r11.dei_p == doctest::Approx(1.0 / kSqrt2).epsilon(1e-9));
    CHECK(r11.def_x == doctest::Approx(1.0 / kSqrt2).epsilon(1e-9));
    CHECK(r11.def_p == doctest::Approx(1.0 / kSqrt2).epsilon(1e-9));
    CHECK(r11.dd_x == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r11.dd_p == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r11.dd_x * r11.dd_p == doctest::Approx(1.0).epsilon(1e-6));

    const ErrorReport r12 = error_report(make_completely_optimal(1.0, 2.0, g));
    CHECK(r12.dei_x * r12.dei_p == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r12.def_x * r12.def_p == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r12.dd_x * r12.dd_p == doctest::Approx(0.5 * 2.5).epsilon(1e-6));

    // lambda_i = lambda_f: pointer representation is the Arthurs-Kelly Gaussian.
    const double lambda = 1.2;
    const ApparatusState ap = make_completely_optimal(lambda, lambda, g);
    const WaveFunction2D pr = to_pointer_rep(ap);
    const double h = g.h();
    double worst = 0.0;
    for (std::size_t j = 0; j < pr.grid.axis1.n; ++j) {
        const double mux = pr.grid.axis1.x(j);
        for (std::size_t k = 0; k < pr.grid.axis2.n; ++k) {
            const double mup = pr.grid.axis2.x(k);
            const double want = 2.0 / std::sqrt(h) *
                                std::exp(-mux * mux / (lambda * lambda) -
                                         lambda * lambda * mup * mup);
            worst = std::max(worst, std::abs(pr.at(j, k) - cdouble{want, 0.0}));
        }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("minimally disturbing: eta trade-off figures and eta=0 reduction") {
    const GridSpec1D g = GridSpec1D::centered(14.0, 128, 1.0);

    const ApparatusState a0 = make_minimally_disturbing(1.0, 0.0, g);
    const ApparatusState copt = make_completely_optimal(1.0, 1.0, g);
    double l2 = 0.0;
    for (std::size_t i = 0; i < a0.wf.amps.size(); ++i) {
        l2 += std::norm(a0.wf.amps[i] - copt.wf.amps[i]);
    }
    l2 = std::sqrt(l2 * g.dx * g.dx);
    CHECK(l2 < 1e-8);

    const double eta = std::log(2.0);
    const ErrorReport r = error_report(make_minimally_disturbing(1.0, eta, g));
    CHECK(r.dei_x * r.dei_p == doctest::Approx(0.625).epsilon(1e-6));   // (1/2) cosh(ln 2)
    CHECK(r.def_x * r.def_p == doctest::Approx(0.625).epsilon(1e-6));
    CHECK(r.dd_x * r.dd_p == doctest::Approx(0.5).epsilon(1e-6));       // e^(-ln 2)
    CHECK(r.dei_x == doctest::Approx(r.def_x).epsilon(1e-10));
    CHECK(r.dei_p == doctest::Approx(r.def_p).epsilon(1e-10));

    const ErrorReport r1 = error_report(make_minimally_disturbing(1.0, 1.0, g));
    CHECK(std::abs(r1.cross_term_x) < 1e-8);
    CHECK(r1.dd_x * r1.dd_p == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    CHECK(r1.dei_x * r1.dei_p == doctest::Approx(0.5 * std::cosh(1.0)).epsilon(1e-6));

    // Large eta on a too-small grid must refuse, not silently enlarge.
    const GridSpec1D small = GridSpec1D::centered(6.0, 64, 1.0);
    CHECK_THROWS_AS(make_minimally_disturbing(1.0, 2.5, small), BoundaryLeak);
}

TEST_CASE("error_report: direct-moment oracle and inequality floor on random states") {
    const GridSpec1D g = GridSpec1D::centered(13.0, 128, 1.0);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const WaveFunction2D w = oracle::random_smooth_state_2d(g, seed);
        ApparatusState ap{w};
        const ErrorReport r = error_report(ap);
        CHECK(r.dei_x * r.dei_p >= 0.5 - 1e-9);
        CHECK(r.def_x * r.def_p >= 0.5 - 1e-9);
        CHECK(r.dei_x * r.dd_p >= 0.5 - 1e-9);
        CHECK(r.def_x * r.dd_p >= 0.5 - 1e-9);
        CHECK(r.dei_p * r.dd_x >= 0.5 - 1e-9);
        CHECK(r.def_p * r.dd_x >= 0.5 - 1e-9);
    }

    // Finite-difference oracle for the momentum moments on a gentle state.
    const GridSpec1D fine = GridSpec1D::centered(13.0, 256, 1.0);
    const oracle::PacketRanges gentle{1.5, 1.1, 1.6, 0.7};
    const WaveFunction2D w = oracle::random_smooth_state_2d(fine, 33, gentle);
    const DirectMoments dm = direct_moments(w);
    const ErrorReport r = error_report(ApparatusState{w});
    CHECK(r.dei_x == doctest::Approx(std::sqrt(dm.ei2)).epsilon(1e-10));
    CHECK(r.def_x == doctest::Approx(std::sqrt(dm.ef2)).epsilon(1e-10));
    CHECK(r.dd_x ==
          doctest::Approx(std::sqrt(dm.ei2 + dm.ef2 - 2.0 * dm.eief)).epsilon(1e-10));
    CHECK(r.dei_p == doctest::Approx(std::sqrt(dm.dpi2)).epsilon(1e-4));
    CHECK(r.def_p == doctest::Approx(std::sqrt(dm.dpf2)).epsilon(1e-4));
    CHECK(r.dd_p == doctest::Approx(std::sqrt(dm.ddp2)).epsilon(1e-4));
}

TEST_CASE("error_report: variance decomposition and bit-identical repeats") {
    const GridSpec1D g = GridSpec1D::centered(13.0, 128, 1.0);
    const WaveFunction2D w = oracle::random_smooth_state_2d(g, 44);
    const ApparatusState ap{w};

    // dei_x^2 = <epsX^2> + (1/4)<dX^2> + <epsX dX>, def_x^2 with the minus sign,
    // each term from an independent operator application.
    const WaveFunction2D ex = apply_error_operator(w, ErrorOp::EpsX);
    const WaveFunction2D dx = apply_error_operator(w, ErrorOp::DeltaX);
    const double ex2 = braket(ex, ex).real();
    const double dx2 = braket(dx, dx).real();
    const double cross = braket(ex, dx).real();
    const ErrorReport r = error_report(ap);
    CHECK(r.dei_x * r.dei_x == doctest::Approx(ex2 + 0.25 * dx2 + cross).epsilon(1e-8));
    CHECK(r.def_x * r.def_x == doctest::Approx(ex2 + 0.25 * dx2 - cross).epsilon(1e-8));
    CHECK(r.cross_term_x == doctest::Approx(cross).epsilon(1e-8));

    // Momentum-side decomposition through the Fourier-diagonal applications.
    const WaveFunction2D ep = apply_error_operator(w, ErrorOp::EpsP);
    const WaveFunction2D dp = apply_error_operator(w, ErrorOp::DeltaP);
    CHECK(r.dei_p * r.dei_p ==
          doctest::Approx(braket(ep, ep).real() + 0.25 * braket(dp, dp).real() +
                          braket(ep, dp).real())
              .epsilon(1e-8));

    const ErrorReport again = error_report(ap);
    CHECK(std::memcmp(&r, &again, sizeof(ErrorReport)) == 0);
}

TEST_CASE("error operators: full commutator table on random smooth states") {
    const GridSpec1D g = GridSpec1D::centered(13.0, 128, 1.0);
    using Op = ErrorOp;
    struct Entry {
        Op a, b;
        double coeff;  // [a,b] = coeff * (-i hbar)
    };
    const Entry table[] = {
        {Op::EpsXi, Op::EpsPi, 1.0},  {Op::EpsXf, Op::EpsPf, -1.0},
        {Op::EpsXi, Op::EpsPf, 0.0},  {Op::EpsXf, Op::EpsPi, 0.0},
        {Op::EpsXi, Op::EpsXf, 0.0},  {Op::EpsPi, Op::EpsPf, 0.0},
        {Op::EpsXi, Op::DeltaP, 1.0}, {Op::EpsXf, Op::DeltaP, 1.0},
        {Op::DeltaX, Op::EpsPi, 1.0}, {Op::DeltaX, Op::EpsPf, 1.0},
        {Op::EpsXi, Op::DeltaX, 0.0}, {Op::EpsPi, Op::DeltaP, 0.0},
        {Op::EpsXf, Op::DeltaX, 0.0}, {Op::EpsPf, Op::DeltaP, 0.0},
        {Op::DeltaX, Op::DeltaP, 0.0},
        {Op::EpsX, Op::DeltaP, 1.0},  {Op::DeltaX, Op::EpsP, 1.0},
        {Op::EpsX, Op::EpsP, 0.0},    {Op::EpsX, Op::DeltaX, 0.0},
        {Op::EpsP, Op::DeltaP, 0.0},
    };
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const WaveFunction2D w = oracle::random_smooth_state_2d(g, seed);
        for (const Entry& e : table) {
            const WaveFunction2D ab = apply_error_operator(apply_error_operator(w, e.b), e.a);
            const WaveFunction2D ba = apply_error_operator(apply_error_operator(w, e.a), e.b);
            cdouble comm{0.0, 0.0};
            WaveFunction2D diff = ab;
            for (std::size_t i = 0; i < diff.amps.size(); ++i) diff.amps[i] -= ba.amps[i];
            comm = braket(w, diff);
            const cdouble want{0.0, -e.coeff * g.hbar};
            CHECK(std::abs(comm - want) < 1e-8);
        }
    }
}

TEST_CASE("to_muX_piP_rep: norm preservation and linear-change-of-variables oracle") {
    const GridSpec1D g = GridSpec1D::centered(14.0, 128, 1.0);
    const ApparatusState ap = make_completely_optimal(0.9, 1.7, g);
    const WaveFunction2D t = to_muX_piP_rep(ap);
    CHECK(std::abs(norm_squared(t) - 1.0) < 1e-8);
    CHECK(t.grid.axis2.dx == doctest::Approx(2.0 * g.dx));

    // Direct substitution oracle: value at (muX, piP) equals the separable
    // Gaussian at (muX + piP/2, muX - piP/2).
    const double li2 = 0.9 * 0.9, lf2 = 1.7 * 1.7;
    const double amp = std::pow(M_PI * M_PI * li2 * lf2, -0.25);
    double worst = 0.0;
    for (std::size_t j = 0; j < t.grid.axis1.n; ++j) {
        const double mux = t.grid.axis1.x(j);
        for (std::size_t k = 0; k < t.grid.axis2.n; ++k) {
            const double pip = t.grid.axis2.x(k);
            const double ei = mux + 0.5 * pip;
            const double ef = mux - 0.5 * pip;
            if (std::abs(ei) > 13.0 || std::abs(ef) > 13.0) continue;
            const double want =
                amp * std::exp(-0.5 * ei * ei / li2 - 0.5 * ef * ef / lf2);
            worst = std::max(worst, std::abs(t.at(j, k) - cdouble{want, 0.0}));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("apparatus_factors: product states split, correlated states refuse") {
    const GridSpec1D g = GridSpec1D::centered(14.0, 128, 1.0);
    const ApparatusState prod = make_retrodictively_optimal(1.3, bimodal(g, 4.0, 1.0));
    const auto [phi_i, phi_f] = apparatus_factors(prod);
    double resid = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t f = 0; f < g.n; ++f) {
            resid = std::max(resid,
                             std::abs(prod.wf.at(i, f) - phi_i.amps[i] * phi_f.amps[f]));
        }
    }
    CHECK(resid < 1e-8);

    const ApparatusState corr = make_minimally_disturbing(1.0, 0.8, g);
    CHECK_THROWS_AS(apparatus_factors(corr), NotFactorized);
}

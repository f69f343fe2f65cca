#include "akmeter/verify.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "akmeter/kernel_analysis.hpp"
#include "akmeter/parallel.hpp"
#include "akmeter/report.hpp"

namespace akmeter {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t idx) {
    return double(splitmix64(seed * 0x9e3779b97f4a7c15ULL + idx) >> 11) * 0x1.0p-53;
}

// Random mixture of displaced Gaussian packets, the randomized apparatus
// family of the error-relation criterion.
WaveFunction2D random_apparatus_state(const GridSpec1D& grid, std::uint64_t seed) {
    WaveFunction2D w;
    w.grid = GridSpec2D{grid, grid, "eps_xi", "eps_xf"};
    w.amps.assign(grid.n * grid.n, cdouble{});
    const int packets = 2 + int(uniform01(seed, 1) * 3.0);
    for (int k = 0; k < packets; ++k) {
        const double c1 = -2.2 + 4.4 * uniform01(seed, 20 + 11 * std::uint64_t(k));
        const double c2 = -2.2 + 4.4 * uniform01(seed, 21 + 11 * std::uint64_t(k));
        const double w1 = 0.8 + 0.8 * uniform01(seed, 22 + 11 * std::uint64_t(k));
        const double w2 = 0.8 + 0.8 * uniform01(seed, 23 + 11 * std::uint64_t(k));
        const double m1 = -1.2 + 2.4 * uniform01(seed, 24 + 11 * std::uint64_t(k));
        const double m2 = -1.2 + 2.4 * uniform01(seed, 25 + 11 * std::uint64_t(k));
        const cdouble coef{-1.0 + 2.0 * uniform01(seed, 26 + 11 * std::uint64_t(k)),
                           -1.0 + 2.0 * uniform01(seed, 27 + 11 * std::uint64_t(k))};
        for (std::size_t i1 = 0; i1 < grid.n; ++i1) {
            const double e1 = grid.x(i1);
            const double g1 = std::exp(-0.5 * (e1 - c1) * (e1 - c1) / (w1 * w1));
            for (std::size_t i2 = 0; i2 < grid.n; ++i2) {
                const double e2 = grid.x(i2);
                const double g2 = std::exp(-0.5 * (e2 - c2) * (e2 - c2) / (w2 * w2));
                w.amps[i1 * grid.n + i2] +=
                    coef * std::polar(g1 * g2, (m1 * e1 + m2 * e2));
            }
        }
    }
    return normalize(std::move(w));
}

// The five-state system corpus used across the distribution criteria.
std::vector<WaveFunction1D> system_corpus(const GridSpec1D& g) {
    std::vector<WaveFunction1D> out;
    out.push_back(coherent_wavefunction({0.0, 0.0, 1.0}, g));
    out.push_back(coherent_wavefunction({0.4, 0.3, 2.0}, g));
    out.push_back(coherent_wavefunction({-0.3, 0.5, 0.5}, g));
    {
        WaveFunction1D cat;
        cat.grid = g;
        cat.amps.resize(g.n);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.x(i);
            cat.amps[i] = std::exp(-0.5 * (x - 2.5) * (x - 2.5)) +
                          std::exp(-0.5 * (x + 2.5) * (x + 2.5));
        }
        out.push_back(normalize(std::move(cat)));
    }
    {
        WaveFunction1D cubic;
        cubic.grid = g;
        cubic.amps.resize(g.n);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.x(i);
            cubic.amps[i] = std::polar(std::exp(-0.5 * x * x), 0.08 * x * x * x);
        }
        out.push_back(normalize(std::move(cubic)));
    }
    return out;
}

std::vector<ApparatusState> apparatus_corpus(const GridSpec1D& g) {
    std::vector<ApparatusState> out;
    out.push_back(make_retrodictively_optimal(1.0, gaussian_packet(g, 0.0, 1.0)));
    out.push_back(make_predictively_optimal(1.0, gaussian_packet(g, 0.0, 1.0)));
    out.push_back(make_completely_optimal(1.0, 1.0, g));
    out.push_back(make_minimally_disturbing(1.0, std::log(2.0), g));
    return out;
}

WaveFunction1D bimodal_factor(const GridSpec1D& g) {
    WaveFunction1D w;
    w.grid = g;
    w.amps.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        w.amps[i] = std::exp(-0.5 * (x - 1.5) * (x - 1.5) / 0.81) +
                    0.6 * std::exp(-0.5 * (x + 1.5) * (x + 1.5) / 0.81);
    }
    return normalize(std::move(w));
}

double nearest_cell(const GridSpec1D& g, double v) {
    const long i = std::lround((v - g.x_min) / g.dx);
    return g.x(std::size_t(std::clamp<long>(i, 0, long(g.n) - 1)));
}

struct Gate {
    bool pass = true;
    std::ostringstream detail;
    double worst = 0.0;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << (detail.str().empty() ? "" : "; ") << what;
        }
    }
    void track(double v) { worst = std::max(worst, v); }
};

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(3);
    ss << std::scientific << v;
    return ss.str();
}

// Wilson-Hilferty upper quantile of chi-square.
double chi_square_critical(double dof, double z_upper) {
    const double t = 2.0 / (9.0 * dof);
    const double c = 1.0 - t + z_upper * std::sqrt(t);
    return dof * c * c * c;
}

CriterionResult criterion_error_relations() {
    Gate gate;
    const GridSpec1D g = GridSpec1D::centered(13.0, 128, 1.0);
    double worst_margin = 1e9;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const ErrorReport r = error_report(ApparatusState{random_apparatus_state(g, seed)});
        const double margins[6] = {
            r.dei_x * r.dei_p - 0.5, r.def_x * r.def_p - 0.5, r.dei_x * r.dd_p - 0.5,
            r.def_x * r.dd_p - 0.5,  r.dei_p * r.dd_x - 0.5,  r.def_p * r.dd_x - 0.5};
        for (double m : margins) worst_margin = std::min(worst_margin, m);
    }
    gate.require(worst_margin >= -1e-9, "error/disturbance margin below -1e-9");

    const ErrorReport retro =
        error_report(make_retrodictively_optimal(1.0, bimodal_factor(g)));
    const double sat = std::abs(retro.dei_x * retro.dei_p - 0.5);
    gate.require(sat <= 1e-6, "retrodictive product off hbar/2 by " + fmt(sat));

    CriterionResult res{1, "error-relation suite (50 random apparatus states)", gate.pass,
                        "worst margin " + fmt(worst_margin) + ", retro saturation gap " +
                            fmt(sat)};
    if (!gate.pass) res.detail += "; " + gate.detail.str();
    return res;
}

CriterionResult criterion_husimi_theorem() {
    Gate gate;
    const GridSpec1D g = GridSpec1D::centered(13.0, 256, 1.0);
    const std::vector<WaveFunction1D> states = system_corpus(g);
    double worst = 0.0, worst_swap = 0.0;
    for (const WaveFunction1D& psi : states) {
        for (double li : {0.7, 1.0, 1.6}) {
            const ApparatusState ap_g =
                make_retrodictively_optimal(li, gaussian_packet(g, 0.0, 1.0));
            const PhaseSpaceDist rho = outcome_distribution_convolution(psi, ap_g);
            worst = std::max(worst, l1_distance(rho, husimi(psi, li)));
            const ApparatusState ap_b = make_retrodictively_optimal(li, bimodal_factor(g));
            worst_swap = std::max(
                worst_swap, l1_distance(rho, outcome_distribution_convolution(psi, ap_b)));
        }
    }
    gate.require(worst <= 1e-6, "rho vs Husimi L1 " + fmt(worst));
    gate.require(worst_swap <= 1e-8, "phi_f swap moved rho by " + fmt(worst_swap));
    CriterionResult res{2, "Husimi identity for retrodictively optimal measurements",
                        gate.pass,
                        "max L1 " + fmt(worst) + ", phi_f swap " + fmt(worst_swap)};
    if (!gate.pass) res.detail += "; " + gate.detail.str();
    return res;
}

CriterionResult criterion_dual_route() {
    Gate gate;
    const GridSpec1D g = GridSpec1D::centered(13.0, 256, 1.0);
    const std::vector<WaveFunction1D> states = system_corpus(g);
    const std::vector<ApparatusState> apps = apparatus_corpus(g);
    double worst = 0.0;
    for (const auto& psi : states) {
        for (const auto& ap : apps) {
            worst = std::max(worst, l1_distance(outcome_distribution_direct(psi, ap),
                                                outcome_distribution_convolution(psi, ap)));
        }
    }
    gate.require(worst <= 1e-6, "dual-route L1 " + fmt(worst));
    CriterionResult res{3, "dual-route outcome distribution over the 5x4 corpus", gate.pass,
                        "max L1 " + fmt(worst)};
    if (!gate.pass) res.detail += "; " + gate.detail.str();
    return res;
}

CriterionResult criterion_pointer_bound() {
    Gate gate;
    const GridSpec1D g = GridSpec1D::centered(13.0, 256, 1.0);
    const std::vector<WaveFunction1D> states = system_corpus(g);
    const std::vector<ApparatusState> apps = apparatus_corpus(g);
    double worst_margin = 1e9;
    for (const auto& psi : states) {
        for (const auto& ap : apps) {
            const PointerSpreads ps =
                pointer_variances(outcome_distribution_convolution(psi, ap));
            worst_margin = std::min(worst_margin, ps.dmu_x * ps.dmu_p - 1.0);
        }
    }
    gate.require(worst_margin >= -1e-6, "pointer product below hbar");

    const PointerSpreads sat = pointer_variances(outcome_distribution_convolution(
        coherent_wavefunction({0.0, 0.0, 1.0}, g), make_completely_optimal(1.0, 1.0, g)));
    const double gap = std::abs(sat.dmu_x * sat.dmu_p - 1.0);
    gate.require(gap < 1e-4, "saturation gap " + fmt(gap));
    CriterionResult res{4, "Arthurs-Kelly pointer bound and its saturation", gate.pass,
                        "worst margin " + fmt(worst_margin) + ", saturation gap " + fmt(gap)};
    if (!gate.pass) res.detail += "; " + gate.detail.str();
    return res;
}

CriterionResult criterion_disturbance_formula() {
    Gate gate;
    const GridSpec1D g = GridSpec1D::centered(16.0, 256, 1.0);
    double worst = 0.0;
    double at_equal = 0.0, at_unequal = 1e9;
    for (auto [li, lf] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {0.5, 1.0}}) {
        const ErrorReport r = error_report(make_completely_optimal(li, lf, g));
        const double ratio = lf / li;
        const double want = 0.5 * std::sqrt(2.0 + ratio * ratio + 1.0 / (ratio * ratio));
        worst = std::max(worst, std::abs(r.dd_x * r.dd_p - want));
        if (li == lf) {
            at_equal = r.dd_x * r.dd_p;
        } else {
            at_unequal = std::min(at_unequal, r.dd_x * r.dd_p);
        }
    }
    gate.require(worst <= 1e-6, "formula gap " + fmt(worst));
    gate.require(std::abs(at_equal - 1.0) <= 1e-6, "minimum is not hbar at equal widths");
    gate.require(at_unequal > at_equal, "unequal widths did not raise the product");
    CriterionResult res{5, "disturbance product formula for completely optimal states",
                        gate.pass, "max formula gap " + fmt(worst)};
    if (!gate.pass) res.detail += "; " + gate.detail.str();
    return res;
}

CriterionResult criterion_tradeoff() {
    Gate gate;
    const GridSpec1D g = GridSpec1D::centered(14.0, 256, 1.0);
    const WaveFunction1D psi = coherent_wavefunction({0.0, 0.0, 1.0}, g);
    double worst_dd = 0.0, worst_err = 0.0, worst_cross = 0.0, worst_l1 = 0.0;
    for (double eta : {0.0, 0.5, std::log(2.0), 1.0}) {
        const ApparatusState ap = make_minimally_disturbing(1.0, eta, g);
        const ErrorReport r = error_report(ap);
        worst_dd = std::max(worst_dd, std::abs(r.dd_x * r.dd_p - std::exp(-eta)));
        worst_err =
            std::max({worst_err, std::abs(r.dei_x * r.dei_p - 0.5 * std::cosh(eta)),
                      std::abs(r.def_x * r.def_p - 0.5 * std::cosh(eta))});
        worst_cross = std::max(worst_cross, std::abs(r.cross_term_x));
        worst_l1 = std::max(worst_l1,
                            l1_distance(outcome_distribution_convolution(psi, ap),
                                        smeared_wigner(psi, 1.0, eta)));
    }
    gate.require(worst_dd <= 1e-6, "disturbance product gap " + fmt(worst_dd));
    gate.require(worst_err <= 1e-6, "cosh floor gap " + fmt(worst_err));
    gate.require(worst_cross <= 1e-8, "cross term " + fmt(worst_cross));
    gate.require(worst_l1 <= 1e-6, "Cartwright L1 " + fmt(worst_l1));
    CriterionResult res{6, "minimal-disturbance trade-off across eta", gate.pass,
                        "dd gap " + fmt(worst_dd) + ", error gap " + fmt(worst_err) +
                            ", cross " + fmt(worst_cross) + ", L1 " + fmt(worst_l1)};
    if (!gate.pass) res.detail += "; " + gate.detail.str();
    return res;
}

CriterionResult criterion_preparation() {
    Gate gate;
    const GridSpec1D g = GridSpec1D::centered(8.0, 512, 1.0);
    const GridSpec1D pg = g.conjugate();
    const WaveFunction1D psi = coherent_wavefunction({0.0, 0.0, 1.0}, g);
    const WaveFunction1D phi_i = gaussian_packet(g, 0.0, 1.0);
    const WaveFunction1D phi_f = gaussian_packet(g, 0.0, 1.0);
    const ApparatusState ap = make_predictively_optimal(1.0, phi_i);
    const ErrorReport rep = error_report(ap);
    const PhaseSpaceDist rho = outcome_distribution_convolution(psi, ap);

    double worst_fid = 1.0, worst_dist = 0.0;
    const std::pair<double, double> targets[3] = {{1.0, -1.0}, {-0.8, 0.5}, {0.3, 1.2}};
    for (const auto& [tx, tp] : targets) {
        // 0.05 x 0.05 box centered on the outcome-lattice cell nearest the target.
        const double cx = nearest_cell(g, tx);
        const double cp = nearest_cell(pg, tp);
        const OutcomeRegion box{cx - 0.025, cx + 0.025, cp - 0.025, cp + 0.025};
        const DensityMatrix1D cond = conditional_state_factorized(psi, phi_i, phi_f, box);
        worst_fid = std::min(
            worst_fid, fidelity_with_pure(cond, coherent_wavefunction({cx, cp, 1.0}, g)));
        const PhaseSpaceDist p_fn = anti_husimi_on_region(rho, box, rep);
        worst_dist = std::max(
            worst_dist,
            trace_distance(density_from_coherent_mixture(p_fn, 1.0, g), cond));
    }
    gate.require(worst_fid >= 0.99, "fidelity " + fmt(worst_fid));
    gate.require(worst_dist <= 1e-5, "reconstruction trace distance " + fmt(worst_dist));
    CriterionResult res{7, "small-region coherent-state preparation", gate.pass,
                        "min fidelity " + fmt(worst_fid) + ", reconstruction distance " +
                            fmt(worst_dist)};
    if (!gate.pass) res.detail += "; " + gate.detail.str();
    return res;
}

CriterionResult criterion_kernel_closure() {
    Gate gate;
    const GridSpec1D g = GridSpec1D::centered(10.0, 32, 1.0);
    std::vector<ApparatusState> families;
    families.push_back(make_retrodictively_optimal(1.0, gaussian_packet(g, 0.0, 1.0)));
    families.push_back(make_predictively_optimal(1.0, gaussian_packet(g, 0.0, 1.0)));
    families.push_back(make_completely_optimal(1.0, 1.0, g));
    families.push_back(make_minimally_disturbing(1.0, 0.5, g));

    const WaveFunction1D psi_a = coherent_wavefunction({0.3, -0.2, 1.2}, g);
    const WaveFunction1D psi_b = coherent_wavefunction({-0.5, 0.4, 1.3}, g);

    double worst_unit = 0.0, worst_resid = 0.0, worst_sigma = 0.0, worst_rms = 0.0,
           worst_indep = 0.0;
    for (const ApparatusState& ap : families) {
        const ErrorReport rep = error_report(ap);
        const MeasurementKernel k = extract_kernel_ak(ap, g);
        const UnitarityResidue u = kernel_unitarity_residue(k);
        worst_unit = std::max({worst_unit, u.max_offdiag, u.max_diag_dev});
        const auto [fx, fp] = marginal_kernels(k);
        const ConvolutionForm cx = detect_convolution_form(fx);
        const ConvolutionForm cp = detect_convolution_form(fp);
        worst_resid = std::max({worst_resid, cx.residual, cp.residual});
        const auto [sx, sp] = prugovecki_sigmas(cx, cp);
        worst_sigma =
            std::max({worst_sigma, std::abs(sx - rep.dei_x), std::abs(sp - rep.dei_p)});
        const double ra = rms_from_marginal(fx, psi_a);
        const double rb = rms_from_marginal(fx, psi_b);
        worst_rms = std::max({worst_rms, std::abs(ra - rep.dei_x),
                              std::abs(rms_from_marginal(fp, to_momentum_rep(psi_a)) -
                                       rep.dei_p)});
        worst_indep = std::max(worst_indep, std::abs(ra - rb));
    }
    gate.require(worst_unit < 1e-4, "unitarity residue " + fmt(worst_unit));
    gate.require(worst_resid < 1e-6, "convolution-form residual " + fmt(worst_resid));
    gate.require(worst_sigma <= 1e-6, "sigma vs rms gap " + fmt(worst_sigma));
    gate.require(worst_rms <= 1e-4, "marginal-route rms gap " + fmt(worst_rms));
    gate.require(worst_indep <= 1e-6, "psi dependence " + fmt(worst_indep));
    CriterionResult res{8, "Appendix kernel closure for all four families", gate.pass,
                        "unitarity " + fmt(worst_unit) + ", residual " + fmt(worst_resid) +
                            ", sigma gap " + fmt(worst_sigma) + ", rms gap " +
                            fmt(worst_rms)};
    if (!gate.pass) res.detail += "; " + gate.detail.str();
    return res;
}

CriterionResult criterion_numerics_hygiene() {
    Gate gate;
    const GridSpec1D g = GridSpec1D::centered(13.0, 256, 1.0);
    const std::vector<WaveFunction1D> states = system_corpus(g);
    double worst_parseval = 0.0, worst_marg = 0.0, worst_bound = 0.0;
    for (const auto& psi : states) {
        const WaveFunction1D mom = to_momentum_rep(psi);
        worst_parseval =
            std::max(worst_parseval, std::abs(norm_squared(mom) - norm_squared(psi)));
        const PhaseSpaceDist w = wigner_of_pure(psi);
        const std::vector<double> mx = marginal_x(w);
        const std::vector<double> mp = marginal_p(w);
        double l1x = 0.0, l1p = 0.0;
        for (std::size_t i = 0; i < g.n; ++i) {
            l1x += std::abs(mx[i] - std::norm(psi.amps[i])) * g.dx;
            l1p += std::abs(mp[i] - std::norm(mom.amps[i])) * w.p_axis.dx;
        }
        worst_marg = std::max({worst_marg, l1x, l1p});
        worst_bound =
            std::max(worst_bound, max_abs_value(w) - 1.0 / (std::numbers::pi * g.hbar));
    }
    gate.require(worst_parseval <= 1e-10, "Parseval defect " + fmt(worst_parseval));
    gate.require(worst_marg <= 1e-6, "Wigner marginal L1 " + fmt(worst_marg));
    gate.require(worst_bound <= 1e-6, "Wigner bound excess " + fmt(worst_bound));

    // FFT derivative against 4th-order finite differences on a smooth 2-D state.
    const GridSpec1D fine = GridSpec1D::centered(13.0, 256, 1.0);
    WaveFunction2D smooth;
    smooth.grid = GridSpec2D{fine, fine, "eps_xi", "eps_xf"};
    smooth.amps.resize(fine.n * fine.n);
    for (std::size_t i1 = 0; i1 < fine.n; ++i1) {
        const double e1 = fine.x(i1);
        for (std::size_t i2 = 0; i2 < fine.n; ++i2) {
            const double e2 = fine.x(i2);
            smooth.amps[i1 * fine.n + i2] =
                std::polar(std::exp(-0.35 * (e1 - 0.4) * (e1 - 0.4) -
                                    0.45 * (e2 + 0.6) * (e2 + 0.6)),
                           0.5 * e1 - 0.3 * e2);
        }
    }
    smooth = normalize(std::move(smooth));
    double worst_fd = 0.0;
    for (int axis : {0, 1}) {
        for (int order : {1, 2}) {
            const double via_fft = partial_derivative_expectation(smooth, axis, order);
            // Interior 4th-order stencil.
            const std::size_t n1 = fine.n, n2 = fine.n;
            const double d = fine.dx;
            auto amp = [&](long i, long j) -> cdouble {
                if (i < 0 || j < 0 || i >= long(n1) || j >= long(n2)) return {0.0, 0.0};
                return smooth.amps[std::size_t(i) * n2 + std::size_t(j)];
            };
            cdouble acc{0.0, 0.0};
            for (long i = 0; i < long(n1); ++i) {
                for (long j = 0; j < long(n2); ++j) {
                    const long di = (axis == 0) ? 1 : 0;
                    const long dj = (axis == 0) ? 0 : 1;
                    cdouble der;
                    if (order == 1) {
                        der = (-amp(i + 2 * di, j + 2 * dj) + 8.0 * amp(i + di, j + dj) -
                               8.0 * amp(i - di, j - dj) + amp(i - 2 * di, j - 2 * dj)) /
                              (12.0 * d);
                        der *= cdouble(0.0, -1.0);
                    } else {
                        der = (-amp(i + 2 * di, j + 2 * dj) + 16.0 * amp(i + di, j + dj) -
                               30.0 * amp(i, j) + 16.0 * amp(i - di, j - dj) -
                               amp(i - 2 * di, j - 2 * dj)) /
                              (12.0 * d * d);
                        der *= -1.0;
                    }
                    acc += std::conj(amp(i, j)) * der;
                }
            }
            const double via_fd = (acc * (d * d)).real();
            const double scale = std::max({std::abs(via_fft), std::abs(via_fd), 1.0});
            worst_fd = std::max(worst_fd, std::abs(via_fft - via_fd) / scale);
        }
    }
    gate.require(worst_fd < 1e-5, "FFT vs finite-difference deviation " + fmt(worst_fd));
    CriterionResult res{9, "numerics hygiene (Parseval, marginals, bound, derivatives)",
                        gate.pass,
                        "Parseval " + fmt(worst_parseval) + ", marginals " +
                            fmt(worst_marg) + ", bound excess " + fmt(worst_bound) +
                            ", derivative " + fmt(worst_fd)};
    if (!gate.pass) res.detail += "; " + gate.detail.str();
    return res;
}

CriterionResult criterion_sampling() {
    Gate gate;
    const GridSpec1D g = GridSpec1D::centered(10.0, 128, 1.0);
    const PhaseSpaceDist rho = outcome_distribution_convolution(
        coherent_wavefunction({0.0, 0.0, 1.0}, g), make_completely_optimal(1.0, 1.0, g));
    const std::size_t count = 100000;
    const auto samples = sample_outcomes(rho, count, 42);
    const auto rerun = sample_outcomes(rho, count, 42);
    gate.require(samples_to_csv(samples) == samples_to_csv(rerun),
                 "rerun is not byte-identical");

    const std::size_t coarse = 16;
    const std::size_t fold = g.n / coarse;
    std::vector<double> expected(coarse * coarse, 0.0);
    double total = 0.0;
    for (std::size_t a = 0; a < g.n; ++a) {
        for (std::size_t r = 0; r < g.n; ++r) {
            const double m = std::max(0.0, rho.at(a, r));
            expected[(a / fold) * coarse + r / fold] += m;
            total += m;
        }
    }
    std::vector<double> observed(coarse * coarse, 0.0);
    for (const auto& s : samples) {
        const long a = std::lround((s.mu_x - g.x_min) / g.dx);
        const long r = std::lround((s.mu_p - rho.p_axis.x_min) / rho.p_axis.dx);
        const std::size_t ca = std::size_t(std::clamp<long>(a, 0, long(g.n) - 1)) / fold;
        const std::size_t cr = std::size_t(std::clamp<long>(r, 0, long(g.n) - 1)) / fold;
        observed[ca * coarse + cr] += 1.0;
    }
    double chi2 = 0.0;
    std::size_t dof = 0;
    for (std::size_t bgn = 0; bgn < expected.size(); ++bgn) {
        const double e = expected[bgn] / total * double(count);
        if (e < 5.0) continue;
        chi2 += (observed[bgn] - e) * (observed[bgn] - e) / e;
        ++dof;
    }
    const double crit = chi_square_critical(double(dof - 1), 3.0902323061678136);
    gate.require(dof > 10, "too few populated bins");
    gate.require(chi2 < crit, "chi-square " + fmt(chi2) + " above " + fmt(crit));
    CriterionResult res{10, "inverse-CDF sampling: determinism and chi-square fit",
                        gate.pass,
                        "chi2 " + fmt(chi2) + " < " + fmt(crit) + " at dof " +
                            std::to_string(dof - 1)};
    if (!gate.pass) res.detail += "; " + gate.detail.str();
    return res;
}

}  // namespace

std::vector<CriterionResult> run_verification_suite() {
    using Fn = std::function<CriterionResult()>;
    const std::vector<Fn> criteria = {
        criterion_error_relations,    criterion_husimi_theorem,
        criterion_dual_route,         criterion_pointer_bound,
        criterion_disturbance_formula, criterion_tradeoff,
        criterion_preparation,        criterion_kernel_closure,
        criterion_numerics_hygiene,   criterion_sampling,
    };
    std::vector<CriterionResult> out(criteria.size());
    parallel_for(0, criteria.size(), [&](std::size_t i) { out[i] = criteria[i](); });
    return out;
}

}  // namespace akmeter

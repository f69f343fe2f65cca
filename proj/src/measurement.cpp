#include "akmeter/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "akmeter/parallel.hpp"

namespace akmeter {

namespace {

// Index offset turning pointer/system index differences into epsilon-lattice
// indices: eps = mu_X(a) - x(b) lands at eps_grid index (a - b + off).
long epsilon_offset(const GridSpec1D& pointer, const GridSpec1D& sys,
                    const GridSpec1D& eps, const char* where) {
    if (!same_spacing(pointer, sys) || !same_spacing(sys, eps)) {
        throw GridMismatch(std::string(where) + ": lattices disagree on dx or hbar");
    }
    const double off = (pointer.x_min - sys.x_min - eps.x_min) / eps.dx;
    if (std::abs(off - std::round(off)) > 1e-6) {
        throw GridMismatch(std::string(where) + ": lattice offsets misaligned");
    }
    return long(std::llround(off));
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t z = splitmix64(splitmix64(seed) + 0x9e3779b97f4a7c15ULL * (counter + 1));
    return double(z >> 11) * 0x1.0p-53;
}

// Cells of `rho` whose centers fall in the region, with their probability mass.
struct RegionCells {
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    double p_r = 0.0;
};

RegionCells collect_region(const PhaseSpaceDist& rho, const OutcomeRegion& region) {
    region.validate();
    RegionCells rc;
    const double cell = rho.x_axis.dx * rho.p_axis.dx;
    for (std::size_t a = 0; a < rho.x_axis.n; ++a) {
        const double mu_x = rho.x_axis.x(a);
        if (mu_x < region.x_lo || mu_x > region.x_hi) continue;
        for (std::size_t r = 0; r < rho.p_axis.n; ++r) {
            if (!region.contains(mu_x, rho.p_axis.x(r))) continue;
            rc.cells.emplace_back(a, r);
            rc.p_r += rho.at(a, r) * cell;
        }
    }
    if (rc.p_r < 1e-12) {
        throw EmptyRegion("region probability below 1e-12");
    }
    return rc;
}

}  // namespace

void OutcomeRegion::validate() const {
    if (!(x_lo < x_hi) || !(p_lo < p_hi)) {
        throw std::invalid_argument("OutcomeRegion: bounds must satisfy lo < hi");
    }
}

double joint_norm_squared(const JointFinalState& j) {
    double s = 0.0;
    for (const auto& v : j.amps) s += std::norm(v);
    return s * j.x_grid.dx * j.mux_grid.dx * j.mup_grid.dx;
}

JointFinalState joint_final_state(const WaveFunction1D& psi, const ApparatusState& ap) {
    require_boundary_decay(psi, "joint_final_state");
    require_boundary_decay(ap.wf, "joint_final_state");
    const GridSpec1D& sys = psi.grid;
    const std::size_t n = sys.n;
    const long off_i = epsilon_offset(sys, sys, ap.wf.grid.axis1, "joint_final_state");
    const long off_f = epsilon_offset(sys, sys, ap.wf.grid.axis2, "joint_final_state");
    const long n_ei = long(ap.wf.grid.axis1.n);
    const long n_ef = long(ap.wf.grid.axis2.n);

    JointFinalState out;
    out.x_grid = sys;
    out.mux_grid = sys;
    out.mup_grid = sys.conjugate();
    out.amps.assign(n * n * n, cdouble{});
    const double hbar = sys.hbar;

    parallel_for(0, n, [&](std::size_t a) {
        std::vector<cdouble> g(n), t(n);
        for (std::size_t c = 0; c < n; ++c) {
            const long mf = long(a) - long(c) + off_f;  // eps_Xf = muX - x
            if (mf < 0 || mf >= n_ef) continue;
            bool any = false;
            for (std::size_t b = 0; b < n; ++b) {
                const long mi = long(a) - long(b) + off_i;  // eps_Xi = muX - x'
                if (mi < 0 || mi >= n_ei) {
                    g[b] = cdouble{};
                    continue;
                }
                g[b] = ap.wf.at(std::size_t(mi), std::size_t(mf)) * psi.amps[b];
                any = any || (g[b] != cdouble{});
            }
            if (!any) continue;
            lattice_fourier(sys, g, t, false);
            for (std::size_t r = 0; r < n; ++r) {
                const double phase = out.mup_grid.x(r) * sys.x(c) / hbar;
                out.at(c, a, r) = std::polar(1.0, phase) * t[r];
            }
        }
    });
    return out;
}

DensityMatrix1D reduced_epsilon_density(const ApparatusState& ap) {
    const WaveFunction2D& w = ap.wf;
    const std::size_t n1 = w.grid.axis1.n;
    const std::size_t n2 = w.grid.axis2.n;
    DensityMatrix1D rho;
    rho.grid = w.grid.axis1;
    rho.elems.assign(n1 * n1, cdouble{});
    parallel_for(0, n1, [&](std::size_t a) {
        for (std::size_t b = 0; b < n1; ++b) {
            cdouble s{0.0, 0.0};
            const cdouble* ra = &w.amps[a * n2];
            const cdouble* rb = &w.amps[b * n2];
            for (std::size_t f = 0; f < n2; ++f) s += ra[f] * std::conj(rb[f]);
            rho.elems[a * n1 + b] = s * w.grid.axis2.dx;
        }
    });
    return rho;
}

PhaseSpaceDist retrodictive_error_wigner(const ApparatusState& ap) {
    DensityMatrix1D rho = reduced_epsilon_density(ap);
    // The conjugate momentum of eps_Xi is -eps_Pi, so this Wigner function is
    // the standard transform of the complex conjugate matrix.
    for (auto& v : rho.elems) v = std::conj(v);
    return wigner_of_density(rho);
}

PhaseSpaceDist outcome_distribution_direct(const WaveFunction1D& psi,
                                           const ApparatusState& ap) {
    require_boundary_decay(psi, "outcome_distribution_direct");
    const GridSpec1D& sys = psi.grid;
    const std::size_t n = sys.n;
    const long off = epsilon_offset(sys, sys, ap.wf.grid.axis1, "outcome_distribution_direct");
    const long n_ei = long(ap.wf.grid.axis1.n);
    const DensityMatrix1D eps = reduced_epsilon_density(ap);

    PhaseSpaceDist rho;
    rho.x_axis = sys;
    rho.p_axis = sys.conjugate();
    rho.values.assign(n * n, 0.0);
    const double scale = sys.dx * sys.dx / sys.h();

    parallel_for(0, n, [&](std::size_t a) {
        // T(s) = sum_b eps(m(b), m(c)) psi_b psi*_c over c - b = s, folded
        // modulo n with the (-1)^s phase; one inverse FFT yields the muP row.
        std::vector<cdouble> g(n, cdouble{});
        for (std::size_t b = 0; b < n; ++b) {
            const long mb = long(a) - long(b) + off;
            if (mb < 0 || mb >= n_ei || psi.amps[b] == cdouble{}) continue;
            const cdouble* row = &eps.elems[std::size_t(mb) * n_ei];
            const cdouble pb = psi.amps[b];
            for (std::size_t c = 0; c < n; ++c) {
                const long mc = long(a) - long(c) + off;
                if (mc < 0 || mc >= n_ei) continue;
                const cdouble term = row[std::size_t(mc)] * pb * std::conj(psi.amps[c]);
                const long s = long(c) - long(b);
                const std::size_t t = std::size_t(s < 0 ? s + long(n) : s);
                g[t] += (s & 1) ? -term : term;
            }
        }
        fft_inverse(g);
        for (std::size_t r = 0; r < n; ++r) rho.at(a, r) = scale * g[r].real();
    });
    return rho;
}

PhaseSpaceDist outcome_distribution_convolution(const WaveFunction1D& psi,
                                                const ApparatusState& ap) {
    const PhaseSpaceDist w_sys = wigner_of_pure(psi);
    const PhaseSpaceDist w_eps = retrodictive_error_wigner(ap);
    if (!same_grid(w_sys.x_axis, w_eps.x_axis)) {
        throw GridMismatch("outcome_distribution_convolution: lattices differ");
    }
    return convolve2d(w_sys, w_eps);
}

PointerSpreads pointer_variances(const PhaseSpaceDist& rho) {
    const PhaseSpaceMoments m = moments(rho);
    return {std::sqrt(std::max(0.0, m.var_x)), std::sqrt(std::max(0.0, m.var_p))};
}

double region_probability(const PhaseSpaceDist& rho, const OutcomeRegion& region) {
    region.validate();
    double s = 0.0;
    for (std::size_t a = 0; a < rho.x_axis.n; ++a) {
        for (std::size_t r = 0; r < rho.p_axis.n; ++r) {
            if (region.contains(rho.x_axis.x(a), rho.p_axis.x(r))) s += rho.at(a, r);
        }
    }
    return s * rho.x_axis.dx * rho.p_axis.dx;
}

DensityMatrix1D conditional_state_factorized(const WaveFunction1D& psi,
                                             const WaveFunction1D& phi_i,
                                             const WaveFunction1D& phi_f,
                                             const OutcomeRegion& region) {
    const GridSpec1D& sys = psi.grid;
    const std::size_t n = sys.n;
    const ApparatusState ap = [&] {
        ApparatusState a;
        a.wf.grid = GridSpec2D{phi_i.grid, phi_f.grid, "eps_xi", "eps_xf"};
        a.wf.amps.resize(phi_i.grid.n * phi_f.grid.n);
        for (std::size_t i = 0; i < phi_i.grid.n; ++i) {
            for (std::size_t f = 0; f < phi_f.grid.n; ++f) {
                a.wf.amps[i * phi_f.grid.n + f] = phi_i.amps[i] * phi_f.amps[f];
            }
        }
        a.wf = normalize(std::move(a.wf));
        return a;
    }();
    const PhaseSpaceDist rho = outcome_distribution_direct(psi, ap);
    const long off = epsilon_offset(sys, sys, phi_f.grid, "conditional_state_factorized");
    const long n_ef = long(phi_f.grid.n);
    const RegionCells rc = collect_region(rho, region);

    DensityMatrix1D out;
    out.grid = sys;
    out.elems.assign(n * n, cdouble{});
    const double cell = rho.x_axis.dx * rho.p_axis.dx;
    const double hbar = sys.hbar;

    auto phi_f_at = [&](long a, long b) -> cdouble {
        const long m = a - b + off;
        return (m >= 0 && m < n_ef) ? phi_f.amps[std::size_t(m)] : cdouble{};
    };

    if (rc.cells.size() <= 4096) {
        for (const auto& [a, r] : rc.cells) {
            const double weight = rho.at(a, r) * cell;
            if (weight == 0.0) continue;
            const double mu_p = rho.p_axis.x(r);
            std::vector<cdouble> u(n);
            for (std::size_t b = 0; b < n; ++b) {
                u[b] = std::polar(1.0, mu_p * sys.x(b) / hbar) * phi_f_at(long(a), long(b));
            }
            for (std::size_t b = 0; b < n; ++b) {
                if (u[b] == cdouble{}) continue;
                const cdouble left = weight * u[b];
                for (std::size_t c = 0; c < n; ++c) {
                    out.elems[b * n + c] += left * std::conj(u[c]);
                }
            }
        }
    } else {
        // Large regions: collapse the muP sum first. G_a(s) with s = b - c is
        // periodic modulo n on the conjugate lattice, so one inverse FFT per
        // muX row covers every (b, c) pair exactly.
        std::vector<std::uint8_t> mask(n * n, 0);
        for (const auto& [a, r] : rc.cells) mask[a * n + r] = 1;
        std::vector<cdouble> G(n * n, cdouble{});
        parallel_for(0, n, [&](std::size_t a) {
            std::vector<cdouble> g(n, cdouble{});
            bool any = false;
            for (std::size_t r = 0; r < n; ++r) {
                if (mask[a * n + r]) {
                    g[r] = rho.at(a, r);
                    any = true;
                }
            }
            if (!any) return;
            fft_inverse(g);  // sum_r rho e^{+2 pi i r s / n}
            for (std::size_t s = 0; s < n; ++s) {
                G[a * n + s] = ((s & 1) ? -g[s] : g[s]) * rho.p_axis.dx;
            }
        });
        parallel_for(0, n, [&](std::size_t b) {
            for (std::size_t c = 0; c < n; ++c) {
                const long s = long(b) - long(c);
                const std::size_t sm = std::size_t(s < 0 ? s + long(n) : s);
                cdouble acc{0.0, 0.0};
                for (std::size_t a = 0; a < n; ++a) {
                    const cdouble fl = phi_f_at(long(a), long(b));
                    if (fl == cdouble{}) continue;
                    const cdouble fr = phi_f_at(long(a), long(c));
                    if (fr == cdouble{}) continue;
                    acc += fl * std::conj(fr) * G[a * n + sm];
                }
                out.elems[b * n + c] = acc * rho.x_axis.dx;
            }
        });
    }
    const double inv = 1.0 / rc.p_r;
    for (auto& v : out.elems) v *= inv;
    return out;
}

DensityMatrix1D conditional_state_general(const JointFinalState& joint,
                                          const OutcomeRegion& region) {
    region.validate();
    const std::size_t n = joint.x_grid.n;
    const double cell = joint.mux_grid.dx * joint.mup_grid.dx;
    DensityMatrix1D out;
    out.grid = joint.x_grid;
    out.elems.assign(n * n, cdouble{});
    double p_r = 0.0;
    for (std::size_t a = 0; a < joint.mux_grid.n; ++a) {
        const double mu_x = joint.mux_grid.x(a);
        for (std::size_t r = 0; r < joint.mup_grid.n; ++r) {
            if (!region.contains(mu_x, joint.mup_grid.x(r))) continue;
            double col_norm = 0.0;
            for (std::size_t b = 0; b < n; ++b) col_norm += std::norm(joint.at(b, a, r));
            p_r += col_norm * joint.x_grid.dx * cell;
            for (std::size_t b = 0; b < n; ++b) {
                const cdouble left = joint.at(b, a, r) * cell;
                if (left == cdouble{}) continue;
                for (std::size_t c = 0; c < n; ++c) {
                    out.elems[b * n + c] += left * std::conj(joint.at(c, a, r));
                }
            }
        }
    }
    if (p_r < 1e-12) throw EmptyRegion("conditional_state_general: p_R below 1e-12");
    const double inv = 1.0 / p_r;
    for (auto& v : out.elems) v *= inv;
    return out;
}

PhaseSpaceDist final_wigner_from_outcomes(const PhaseSpaceDist& rho,
                                          const WaveFunction1D& phi_f,
                                          const OutcomeRegion& region) {
    const RegionCells rc = collect_region(rho, region);
    PhaseSpaceDist masked;
    masked.x_axis = rho.x_axis;
    masked.p_axis = rho.p_axis;
    masked.values.assign(rho.values.size(), 0.0);
    for (const auto& [a, r] : rc.cells) masked.at(a, r) = rho.at(a, r) / rc.p_r;

    const PhaseSpaceDist w_eps = wigner_of_pure(phi_f);
    if (!same_grid(w_eps.x_axis, rho.x_axis)) {
        throw GridMismatch("final_wigner_from_outcomes: phi_f lattice differs");
    }
    // Correlation: reflect the kernel, then convolve. The lone extreme sample
    // of the centered lattice has no mirror partner and is dropped (it is
    // below the decay threshold by construction).
    PhaseSpaceDist refl = w_eps;
    std::fill(refl.values.begin(), refl.values.end(), 0.0);
    const std::size_t nx = w_eps.x_axis.n, np = w_eps.p_axis.n;
    for (std::size_t i = 1; i < nx; ++i) {
        for (std::size_t k = 1; k < np; ++k) {
            refl.at(i, k) = w_eps.at(nx - i, np - k);
        }
    }
    return convolve2d(masked, refl);
}

PhaseSpaceDist anti_husimi_on_region(const PhaseSpaceDist& rho, const OutcomeRegion& region,
                                     const ErrorReport& report) {
    if (std::abs(report.def_x * report.def_p - 0.5 * report.hbar) > 1e-6 * report.hbar) {
        throw NotPredictivelyOptimal(
            "anti_husimi_on_region: predictive error product is not hbar/2");
    }
    const RegionCells rc = collect_region(rho, region);
    PhaseSpaceDist p;
    p.x_axis = rho.x_axis;
    p.p_axis = rho.p_axis;
    p.values.assign(rho.values.size(), 0.0);
    // Clipped probability density: roundoff-negative cells go to zero.
    for (const auto& [a, r] : rc.cells) p.at(a, r) = std::max(0.0, rho.at(a, r) / rc.p_r);
    return p;
}

DensityMatrix1D density_from_coherent_mixture(const PhaseSpaceDist& p_dist, double lambda_f,
                                              const GridSpec1D& grid) {
    DensityMatrix1D out;
    out.grid = grid;
    out.elems.assign(grid.n * grid.n, cdouble{});
    const double cell = p_dist.x_axis.dx * p_dist.p_axis.dx;
    double wmax = 0.0;
    for (double v : p_dist.values) wmax = std::max(wmax, v);
    // Cells carrying no meaningful weight are skipped: FFT noise at the far
    // corners sits around 1e-16 of the peak and may fall where the coherent
    // state cannot be represented. The skipped mass is below every tolerance
    // this object feeds into.
    const double w_floor = 1e-12 * wmax * cell;
    for (std::size_t a = 0; a < p_dist.x_axis.n; ++a) {
        for (std::size_t r = 0; r < p_dist.p_axis.n; ++r) {
            const double weight = p_dist.at(a, r) * cell;
            if (weight <= w_floor) continue;
            const WaveFunction1D c = coherent_wavefunction(
                {p_dist.x_axis.x(a), p_dist.p_axis.x(r), lambda_f}, grid);
            for (std::size_t b = 0; b < grid.n; ++b) {
                const cdouble left = weight * c.amps[b];
                for (std::size_t d = 0; d < grid.n; ++d) {
                    out.elems[b * grid.n + d] += left * std::conj(c.amps[d]);
                }
            }
        }
    }
    return out;
}

std::vector<MeasurementOutcomeSample> sample_outcomes(const PhaseSpaceDist& rho,
                                                      std::size_t count,
                                                      std::uint64_t seed) {
    const std::size_t total = rho.values.size();
    std::vector<double> cum(total);
    double acc = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        acc += std::max(0.0, rho.values[i]);
        cum[i] = acc;
    }
    if (!(acc > 0.0)) throw std::invalid_argument("sample_outcomes: empty distribution");
    const double inv = 1.0 / acc;
    for (auto& v : cum) v *= inv;

    const std::size_t np = rho.p_axis.n;
    std::vector<MeasurementOutcomeSample> out(count);
    parallel_for(0, count, [&](std::size_t i) {
        const double u = uniform01(seed, 3 * i);
        const auto it = std::lower_bound(cum.begin(), cum.end(), u);
        const std::size_t flat = std::min<std::size_t>(std::size_t(it - cum.begin()), total - 1);
        const std::size_t a = flat / np;
        const std::size_t r = flat % np;
        const double jx = uniform01(seed, 3 * i + 1) - 0.5;
        const double jp = uniform01(seed, 3 * i + 2) - 0.5;
        out[i] = MeasurementOutcomeSample{rho.x_axis.x(a) + jx * rho.x_axis.dx,
                                          rho.p_axis.x(r) + jp * rho.p_axis.dx, seed, i};
    });
    return out;
}

}  // namespace akmeter

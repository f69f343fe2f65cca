#include "akmeter/kernel_analysis.hpp"

#include <cmath>

#include "akmeter/parallel.hpp"

namespace akmeter {

namespace {

// h^(-1/2) dx sum_m exp(+i p_r x_m / hbar) g_m  (conjugate-sign forward pass).
void lattice_fourier_plus(const GridSpec1D& grid, std::span<const cdouble> in,
                          std::span<cdouble> out) {
    std::vector<cdouble> tmp(in.begin(), in.end());
    for (auto& v : tmp) v = std::conj(v);
    lattice_fourier(grid, tmp, tmp, false);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::conj(tmp[i]);
}

}  // namespace

MeasurementKernel extract_kernel_ak(const ApparatusState& ap, const GridSpec1D& grid) {
    grid.validate();
    if (grid.n > 32) {
        throw std::invalid_argument("extract_kernel_ak: coarse lattices only (n <= 32)");
    }
    if (!grid.is_centered()) {
        throw GridMismatch("extract_kernel_ak: centered lattice required");
    }
    if (!same_grid(ap.wf.grid.axis1, grid) || !same_grid(ap.wf.grid.axis2, grid)) {
        throw GridMismatch("extract_kernel_ak: apparatus must live on the kernel lattice");
    }
    require_boundary_decay(ap.wf, "extract_kernel_ak");
    // Discrete-torus convention: the epsilon arguments muX - x' and muX - x
    // wrap around the window, so every column carries the full apparatus mass
    // and the lattice unitarity and marginal identities hold to roundoff.
    // Ghost images sit a full period away and are suppressed by state decay.
    const std::size_t n = grid.n;
    const long off = long(n) / 2;

    MeasurementKernel k;
    k.x_grid = grid;
    k.mux_grid = grid;
    k.mup_grid = grid.conjugate();
    k.xp_grid = grid;
    k.values.assign(n * n * n * n, cdouble{});
    const double inv_sqrt_h = 1.0 / std::sqrt(grid.h());
    const double hbar = grid.hbar;
    auto wrap = [&](long m) -> std::size_t {
        m %= long(n);
        if (m < 0) m += long(n);
        return std::size_t(m);
    };

    parallel_for(0, n, [&](std::size_t c) {  // x index
        const double x = grid.x(c);
        for (std::size_t a = 0; a < n; ++a) {
            const std::size_t mf = wrap(long(a) - long(c) + off);
            for (std::size_t b = 0; b < n; ++b) {  // x' index
                const std::size_t mi = wrap(long(a) - long(b) + off);
                const cdouble phi = ap.wf.at(mi, mf);
                if (phi == cdouble{}) continue;
                const double dxx = x - grid.x(b);
                for (std::size_t r = 0; r < n; ++r) {
                    k.at(c, a, r, b) =
                        inv_sqrt_h * std::polar(1.0, k.mup_grid.x(r) * dxx / hbar) * phi;
                }
            }
        }
    });
    return k;
}

UnitarityResidue kernel_unitarity_residue(const MeasurementKernel& k) {
    const std::size_t n = k.xp_grid.n;
    const double cell = k.x_grid.dx * k.mux_grid.dx * k.mup_grid.dx;
    UnitarityResidue res{0.0, 0.0};
    std::vector<double> offdiag(n, 0.0), diagdev(n, 0.0);
    parallel_for(0, n, [&](std::size_t b1) {
        for (std::size_t b2 = 0; b2 <= b1; ++b2) {
            cdouble s{0.0, 0.0};
            for (std::size_t c = 0; c < k.x_grid.n; ++c) {
                for (std::size_t a = 0; a < k.mux_grid.n; ++a) {
                    for (std::size_t r = 0; r < k.mup_grid.n; ++r) {
                        s += k.at(c, a, r, b1) * std::conj(k.at(c, a, r, b2));
                    }
                }
            }
            const double v = std::abs(s) * cell * k.xp_grid.dx;
            if (b1 == b2) {
                diagdev[b1] = std::max(diagdev[b1], std::abs(v - 1.0));
            } else {
                offdiag[b1] = std::max(offdiag[b1], v);
            }
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        res.max_offdiag = std::max(res.max_offdiag, offdiag[i]);
        res.max_diag_dev = std::max(res.max_diag_dev, diagdev[i]);
    }
    return res;
}

JointFinalState apply_kernel(const MeasurementKernel& k, const WaveFunction1D& psi) {
    if (!same_grid(psi.grid, k.xp_grid)) {
        throw GridMismatch("apply_kernel: psi lattice differs from the kernel's");
    }
    JointFinalState out;
    out.x_grid = k.x_grid;
    out.mux_grid = k.mux_grid;
    out.mup_grid = k.mup_grid;
    out.amps.assign(k.x_grid.n * k.mux_grid.n * k.mup_grid.n, cdouble{});
    for (std::size_t c = 0; c < k.x_grid.n; ++c) {
        for (std::size_t a = 0; a < k.mux_grid.n; ++a) {
            for (std::size_t r = 0; r < k.mup_grid.n; ++r) {
                cdouble s{0.0, 0.0};
                for (std::size_t b = 0; b < k.xp_grid.n; ++b) {
                    s += k.at(c, a, r, b) * psi.amps[b];
                }
                out.at(c, a, r) = s * k.xp_grid.dx;
            }
        }
    }
    return out;
}

std::pair<MarginalKernel, MarginalKernel> marginal_kernels(const MeasurementKernel& k) {
    const std::size_t n = k.xp_grid.n;

    MarginalKernel fx;
    fx.mu_grid = k.mux_grid;
    fx.arg_grid = k.xp_grid;
    fx.f.assign(k.mux_grid.n * n * n, cdouble{});
    parallel_for(0, k.mux_grid.n, [&](std::size_t a) {
        for (std::size_t b1 = 0; b1 < n; ++b1) {
            for (std::size_t b2 = 0; b2 < n; ++b2) {
                cdouble s{0.0, 0.0};
                for (std::size_t c = 0; c < k.x_grid.n; ++c) {
                    for (std::size_t r = 0; r < k.mup_grid.n; ++r) {
                        s += k.at(c, a, r, b1) * std::conj(k.at(c, a, r, b2));
                    }
                }
                fx.at(a, b1, b2) = s * k.x_grid.dx * k.mup_grid.dx;
            }
        }
    });

    // K~(p, muX, muP; p') = (1/h) Int dx dx' exp[i(p'x' - px)/hbar] K.
    const GridSpec1D pg = k.x_grid.conjugate();
    const GridSpec1D ppg = k.xp_grid.conjugate();
    std::vector<cdouble> kt(k.values.size());
    const std::size_t nx = k.x_grid.n;
    parallel_for(0, k.mux_grid.n, [&](std::size_t a) {
        std::vector<cdouble> col(nx), tcol(nx), row(n), trow(n);
        for (std::size_t r = 0; r < k.mup_grid.n; ++r) {
            for (std::size_t b = 0; b < n; ++b) {
                for (std::size_t c = 0; c < nx; ++c) col[c] = k.at(c, a, r, b);
                lattice_fourier(k.x_grid, col, tcol, false);
                for (std::size_t c = 0; c < nx; ++c) {
                    kt[((c * k.mux_grid.n + a) * k.mup_grid.n + r) * n + b] = tcol[c];
                }
            }
            for (std::size_t c = 0; c < nx; ++c) {
                for (std::size_t b = 0; b < n; ++b) {
                    row[b] = kt[((c * k.mux_grid.n + a) * k.mup_grid.n + r) * n + b];
                }
                lattice_fourier_plus(k.xp_grid, row, trow);
                for (std::size_t b = 0; b < n; ++b) {
                    kt[((c * k.mux_grid.n + a) * k.mup_grid.n + r) * n + b] = trow[b];
                }
            }
        }
    });

    MarginalKernel fp;
    fp.mu_grid = k.mup_grid;
    fp.arg_grid = ppg;
    fp.f.assign(k.mup_grid.n * n * n, cdouble{});
    parallel_for(0, k.mup_grid.n, [&](std::size_t r) {
        for (std::size_t b1 = 0; b1 < n; ++b1) {
            for (std::size_t b2 = 0; b2 < n; ++b2) {
                cdouble s{0.0, 0.0};
                for (std::size_t c = 0; c < nx; ++c) {
                    for (std::size_t a = 0; a < k.mux_grid.n; ++a) {
                        s += kt[((c * k.mux_grid.n + a) * k.mup_grid.n + r) * n + b1] *
                             std::conj(
                                 kt[((c * k.mux_grid.n + a) * k.mup_grid.n + r) * n + b2]);
                    }
                }
                fp.at(r, b1, b2) = s * pg.dx * k.mux_grid.dx;
            }
        }
    });
    return {std::move(fx), std::move(fp)};
}

UnitarityResidue marginal_delta_residue(const MarginalKernel& f) {
    const std::size_t n = f.arg_grid.n;
    UnitarityResidue res{0.0, 0.0};
    for (std::size_t b1 = 0; b1 < n; ++b1) {
        for (std::size_t b2 = 0; b2 < n; ++b2) {
            cdouble s{0.0, 0.0};
            for (std::size_t a = 0; a < f.mu_grid.n; ++a) s += f.at(a, b1, b2);
            const double v = std::abs(s) * f.mu_grid.dx * f.arg_grid.dx;
            if (b1 == b2) {
                res.max_diag_dev = std::max(res.max_diag_dev, std::abs(v - 1.0));
            } else {
                res.max_offdiag = std::max(res.max_offdiag, v);
            }
        }
    }
    return res;
}

ConvolutionForm detect_convolution_form(const MarginalKernel& f) {
    // Displacements mu - arg live on the mu lattice provided the argument
    // spacing is an integer multiple of it.
    const double ratio = f.arg_grid.dx / f.mu_grid.dx;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0) {
        throw GridMismatch("detect_convolution_form: incompatible lattice spacings");
    }
    const std::size_t na = f.mu_grid.n;
    const std::size_t nb = f.arg_grid.n;
    const double d = f.arg_grid.dx;

    // Displacements are taken within half a torus period; entries beyond that
    // are ghost images of the wrap-around and are excluded.
    const double window = 0.5 * f.mu_grid.dx * double(na);
    ConvolutionForm out;
    out.ds = f.mu_grid.dx;
    out.s_min = -window;
    const std::size_t bins = na + 1;
    out.chi0.assign(bins, 0.0);
    std::vector<double> counts(bins, 0.0);

    double diag_mass = 0.0, off_mass = 0.0;
    for (std::size_t a = 0; a < na; ++a) {
        const double mu = f.mu_grid.x(a);
        for (std::size_t b1 = 0; b1 < nb; ++b1) {
            const double s = mu - f.arg_grid.x(b1);
            const double tf = (s - out.s_min) / out.ds;
            const long t = long(std::llround(tf));
            const bool in_window = t >= 0 && t < long(bins) &&
                                   std::abs(tf - double(t)) < 1e-6;
            for (std::size_t b2 = 0; b2 < nb; ++b2) {
                const double mag = std::abs(f.at(a, b1, b2));
                if (b1 == b2) {
                    if (!in_window) continue;
                    diag_mass += mag * f.mu_grid.dx * d;
                    out.chi0[std::size_t(t)] += f.at(a, b1, b1).real() * d;
                    counts[std::size_t(t)] += 1.0;
                } else {
                    off_mass += mag * f.mu_grid.dx * d * d;
                }
            }
        }
    }
    for (std::size_t t = 0; t < out.chi0.size(); ++t) {
        if (counts[t] > 0.0) out.chi0[t] /= counts[t];
    }
    out.residual = (diag_mass + off_mass) > 0.0 ? off_mass / (diag_mass + off_mass) : 0.0;
    return out;
}

double chi_mass(const ConvolutionForm& c) {
    double s = 0.0;
    for (double v : c.chi0) s += v;
    return s * c.ds;
}

std::pair<double, double> prugovecki_sigmas(const ConvolutionForm& cx,
                                            const ConvolutionForm& cp) {
    if (cx.residual > 1e-3 || cp.residual > 1e-3) {
        throw FormViolation("prugovecki_sigmas: convolution-form residual above 1e-3");
    }
    auto sigma = [](const ConvolutionForm& c) {
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t t = 0; t < c.chi0.size(); ++t) {
            m1 += c.s(t) * c.chi0[t];
            m2 += c.s(t) * c.s(t) * c.chi0[t];
        }
        m1 *= c.ds;
        m2 *= c.ds;
        return std::sqrt(std::max(0.0, m2 - m1 * m1));
    };
    return {sigma(cx), sigma(cp)};
}

double rms_from_marginal(const MarginalKernel& f, const WaveFunction1D& psi) {
    if (!same_grid(psi.grid, f.arg_grid)) {
        throw GridMismatch("rms_from_marginal: psi lattice differs from the kernel's");
    }
    const std::size_t na = f.mu_grid.n;
    const std::size_t nb = f.arg_grid.n;
    cdouble acc{0.0, 0.0};
    for (std::size_t a = 0; a < na; ++a) {
        const double mu = f.mu_grid.x(a);
        for (std::size_t b1 = 0; b1 < nb; ++b1) {
            const cdouble left = (mu - f.arg_grid.x(b1)) * psi.amps[b1];
            if (left == cdouble{}) continue;
            for (std::size_t b2 = 0; b2 < nb; ++b2) {
                acc += left * (mu - f.arg_grid.x(b2)) * f.at(a, b1, b2) *
                       std::conj(psi.amps[b2]);
            }
        }
    }
    const double val = (acc * (f.mu_grid.dx * f.arg_grid.dx * f.arg_grid.dx)).real();
    return std::sqrt(std::max(0.0, val));
}

}  // namespace akmeter

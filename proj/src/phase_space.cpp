#include "akmeter/phase_space.hpp"

#include <cmath>
#include <numbers>

#include "akmeter/parallel.hpp"

namespace akmeter {

namespace {

constexpr double kPi = std::numbers::pi;

// Folded inverse DFT evaluating  (dy/h) sum_{s=-n}^{n-1} c(s) e^{i p_r s dy / hbar}
// on the conjugate lattice p_r = (r - n/2) dp. The phase splits as
// e^{i p_r s dy/hbar} = (-1)^s e^{2 pi i r s / n}, so the two s values mapping to
// each residue class are folded first and a single length-n inverse FFT finishes.
void correlation_row_to_wigner(std::span<const cdouble> c_pos,  // c(s), s = 0..n-1
                               std::span<const cdouble> c_neg,  // c(s-n), s = 0..n-1
                               double dy, double h, std::span<double> out) {
    const std::size_t n = c_pos.size();
    std::vector<cdouble> g(n);
    for (std::size_t s = 0; s < n; ++s) {
        const cdouble sum = c_pos[s] + c_neg[s];
        g[s] = (s & 1) ? -sum : sum;
    }
    fft_inverse(g);
    const double scale = dy / h;
    for (std::size_t r = 0; r < n; ++r) out[r] = scale * g[r].real();
}

// Quasi-probability magnitude bound |W| <= 1/(pi hbar) for unit-trace states.
void assert_wigner_bound(const PhaseSpaceDist& w, const char* where) {
    const double bound = 1.0 / (kPi * w.x_axis.hbar) + 1e-6;
    for (double v : w.values) {
        if (std::abs(v) > bound) {
            throw Error(std::string(where) + ": Wigner bound 1/(pi hbar) exceeded");
        }
    }
}

}  // namespace

WaveFunction1D coherent_wavefunction(const CoherentStateParams& params,
                                     const GridSpec1D& grid) {
    if (!(params.lambda > 0.0)) {
        throw std::invalid_argument("coherent_wavefunction: lambda must be positive");
    }
    const double l2 = params.lambda * params.lambda;
    const double amp = std::pow(kPi * l2, -0.25);
    const double phase0 = -0.5 * params.mu_p * params.mu_x / grid.hbar;
    WaveFunction1D w;
    w.grid = grid;
    w.amps.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        const double d = x - params.mu_x;
        const double mag = amp * std::exp(-0.5 * d * d / l2);
        w.amps[i] = std::polar(mag, params.mu_p * x / grid.hbar + phase0);
    }
    require_boundary_decay(w, "coherent_wavefunction");
    return w;
}

PhaseSpaceDist wigner_of_pure(const WaveFunction1D& psi) {
    require_boundary_decay(psi, "wigner_of_pure");
    if (std::abs(norm_squared(psi) - 1.0) > 1e-6) {
        throw std::invalid_argument("wigner_of_pure: state not normalized");
    }
    const std::size_t n = psi.grid.n;
    const std::vector<cdouble> fine = upsample2x(psi.amps);  // spacing dx/2, 2n points
    PhaseSpaceDist w;
    w.x_axis = psi.grid;
    w.p_axis = psi.grid.conjugate();
    w.values.resize(n * n);
    const double h = psi.grid.h();
    const double dx = psi.grid.dx;
    parallel_for(0, n, [&](std::size_t j) {
        std::vector<cdouble> c_pos(n), c_neg(n);
        const long base = 2 * long(j);
        for (std::size_t s = 0; s < n; ++s) {
            // psi(x_j - y/2) psi*(x_j + y/2) at y = s*dx and y = (s-n)*dx
            const long sp = long(s);
            const long sm = sp - long(n);
            auto sample = [&](long q) -> cdouble {
                return (q >= 0 && q < 2 * long(n)) ? fine[std::size_t(q)] : cdouble{0.0, 0.0};
            };
            c_pos[s] = sample(base - sp) * std::conj(sample(base + sp));
            c_neg[s] = sample(base - sm) * std::conj(sample(base + sm));
        }
        correlation_row_to_wigner(c_pos, c_neg, dx, h,
                                  std::span(w.values).subspan(j * n, n));
    });
    assert_wigner_bound(w, "wigner_of_pure");
    return w;
}

PhaseSpaceDist wigner_of_density(const DensityMatrix1D& rho) {
    const std::size_t n = rho.grid.n;
    const double peak_tol = 1e-9;
    {
        double peak = 0.0;
        for (const auto& v : rho.elems) peak = std::max(peak, std::abs(v));
        if (dm_hermiticity_defect(rho) > peak_tol * std::max(peak, 1.0)) {
            throw NotHermitian("wigner_of_density: input not Hermitian");
        }
        // Edge decay on the two outermost frames (periodic upsampling safety).
        double edge = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k : {std::size_t{0}, std::size_t{1}, n - 2, n - 1}) {
                edge = std::max({edge, std::abs(rho.at(j, k)), std::abs(rho.at(k, j))});
            }
        }
        if (peak > 0.0 && edge >= kBoundaryDecayThreshold * peak) {
            throw BoundaryLeak("wigner_of_density: matrix reaches the grid edge");
        }
    }
    // Band-limited 2x upsampling of both indices.
    std::vector<cdouble> tmp(2 * n * n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::vector<cdouble> row =
            upsample2x(std::span(rho.elems).subspan(j * n, n));
        std::copy(row.begin(), row.end(), tmp.begin() + long(j * 2 * n));
    }
    std::vector<cdouble> fine(2 * n * 2 * n);
    std::vector<cdouble> col(n);
    for (std::size_t k = 0; k < 2 * n; ++k) {
        for (std::size_t j = 0; j < n; ++j) col[j] = tmp[j * 2 * n + k];
        const std::vector<cdouble> up = upsample2x(col);
        for (std::size_t j = 0; j < 2 * n; ++j) fine[j * 2 * n + k] = up[j];
    }
    PhaseSpaceDist w;
    w.x_axis = rho.grid;
    w.p_axis = rho.grid.conjugate();
    w.values.resize(n * n);
    const double h = rho.grid.h();
    const double dx = rho.grid.dx;
    parallel_for(0, n, [&](std::size_t j) {
        std::vector<cdouble> c_pos(n), c_neg(n);
        const long base = 2 * long(j);
        auto sample = [&](long a, long b) -> cdouble {
            if (a < 0 || b < 0 || a >= 2 * long(n) || b >= 2 * long(n)) return {0.0, 0.0};
            return fine[std::size_t(a) * 2 * n + std::size_t(b)];
        };
        for (std::size_t s = 0; s < n; ++s) {
            const long sp = long(s);
            const long sm = sp - long(n);
            c_pos[s] = sample(base - sp, base + sp);
            c_neg[s] = sample(base - sm, base + sm);
        }
        correlation_row_to_wigner(c_pos, c_neg, dx, h,
                                  std::span(w.values).subspan(j * n, n));
    });
    assert_wigner_bound(w, "wigner_of_density");
    return w;
}

PhaseSpaceDist gaussian_phase_kernel(const GridSpec1D& x_axis, const GridSpec1D& p_axis,
                                     double lambda, double eta) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("gaussian_phase_kernel: lambda must be positive");
    }
    if (eta < 0.0) throw std::invalid_argument("gaussian_phase_kernel: eta must be >= 0");
    const double c = std::cosh(eta);
    const double hbar = x_axis.hbar;
    const double h = x_axis.h();
    const double l2 = lambda * lambda;
    PhaseSpaceDist k;
    k.x_axis = x_axis;
    k.p_axis = p_axis;
    k.values.resize(x_axis.n * p_axis.n);
    for (std::size_t ix = 0; ix < x_axis.n; ++ix) {
        const double x = x_axis.x(ix);
        const double ex = x * x / l2;
        for (std::size_t ip = 0; ip < p_axis.n; ++ip) {
            const double p = p_axis.x(ip);
            k.at(ix, ip) = (2.0 / (h * c)) *
                           std::exp(-(ex + l2 * p * p / (hbar * hbar)) / c);
        }
    }
    return k;
}

PhaseSpaceDist convolve2d(const PhaseSpaceDist& a, const PhaseSpaceDist& b) {
    if (!same_grid(a.x_axis, b.x_axis) || !same_grid(a.p_axis, b.p_axis)) {
        throw GridMismatch("convolve2d: operands on different lattices");
    }
    const std::size_t nx = a.x_axis.n;
    const std::size_t np = a.p_axis.n;
    // Kernel's zero must sit on the lattice so shifts are pure index offsets.
    const double fx = -b.x_axis.x_min / b.x_axis.dx;
    const double fp = -b.p_axis.x_min / b.p_axis.dx;
    const auto near_int = [](double v) { return std::abs(v - std::round(v)) < 1e-6; };
    if (!near_int(fx) || !near_int(fp)) {
        throw GridMismatch("convolve2d: kernel origin off lattice");
    }
    const long ix0 = long(std::llround(fx));
    const long ip0 = long(std::llround(fp));
    const std::size_t Nx = 2 * nx, Np = 2 * np;
    std::vector<cdouble> fa(Nx * Np, cdouble{}), fb(Nx * Np, cdouble{});
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t k = 0; k < np; ++k) {
            fa[i * Np + k] = a.at(i, k);
            fb[i * Np + k] = b.at(i, k);
        }
    }
    auto fft2 = [&](std::vector<cdouble>& m, bool inv) {
        for (std::size_t i = 0; i < Nx; ++i) {
            auto row = std::span(m).subspan(i * Np, Np);
            inv ? fft_inverse(row) : fft_forward(row);
        }
        std::vector<cdouble> col(Nx);
        for (std::size_t k = 0; k < Np; ++k) {
            for (std::size_t i = 0; i < Nx; ++i) col[i] = m[i * Np + k];
            inv ? fft_inverse(col) : fft_forward(col);
            for (std::size_t i = 0; i < Nx; ++i) m[i * Np + k] = col[i];
        }
    };
    fft2(fa, false);
    fft2(fb, false);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    fft2(fa, true);
    const double cell = a.x_axis.dx * a.p_axis.dx;
    const double scale = cell / double(Nx * Np);
    // Retained window u = q + ix0 (q in [0,nx)); everything else is mass the
    // original lattice cannot represent.
    double kept = 0.0, total = 0.0;
    PhaseSpaceDist out;
    out.x_axis = a.x_axis;
    out.p_axis = a.p_axis;
    out.values.assign(nx * np, 0.0);
    for (std::size_t u = 0; u < Nx; ++u) {
        for (std::size_t v = 0; v < Np; ++v) {
            const double val = fa[u * Np + v].real() * scale;
            total += std::abs(val);
            const long q = long(u) - ix0;
            const long r = long(v) - ip0;
            if (q >= 0 && q < long(nx) && r >= 0 && r < long(np)) {
                out.values[std::size_t(q) * np + std::size_t(r)] = val;
                kept += std::abs(val);
            }
        }
    }
    if (total > 0.0 && (total - kept) > 1e-8 * total) {
        throw AliasingDetected("convolve2d: significant mass outside the output window");
    }
    return out;
}

PhaseSpaceDist husimi(const WaveFunction1D& psi, double lambda_i) {
    const PhaseSpaceDist w = wigner_of_pure(psi);
    return convolve2d(w, gaussian_phase_kernel(w.x_axis, w.p_axis, lambda_i, 0.0));
}

PhaseSpaceDist smeared_wigner(const WaveFunction1D& psi, double lambda, double eta) {
    const PhaseSpaceDist w = wigner_of_pure(psi);
    return convolve2d(w, gaussian_phase_kernel(w.x_axis, w.p_axis, lambda, eta));
}

PhaseSpaceDist husimi_overlap(const WaveFunction1D& psi, double lambda_i) {
    require_boundary_decay(psi, "husimi_overlap");
    if (!(lambda_i > 0.0)) {
        throw std::invalid_argument("husimi_overlap: lambda must be positive");
    }
    const std::size_t n = psi.grid.n;
    PhaseSpaceDist q;
    q.x_axis = psi.grid;
    q.p_axis = psi.grid.conjugate();
    q.values.resize(n * n);
    const double l2 = lambda_i * lambda_i;
    const double norm = 1.0 / std::sqrt(kPi * l2);
    parallel_for(0, n, [&](std::size_t a) {
        const double mu_x = psi.grid.x(a);
        std::vector<cdouble> g(n), t(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = psi.grid.x(i) - mu_x;
            g[i] = psi.amps[i] * std::exp(-0.5 * d * d / l2);
        }
        lattice_fourier(psi.grid, g, t, false);
        for (std::size_t r = 0; r < n; ++r) q.at(a, r) = norm * std::norm(t[r]);
    });
    return q;
}

// --- diagnostics ----------------------------------------------------------------

double mass(const PhaseSpaceDist& d) {
    double s = 0.0;
    for (double v : d.values) s += v;
    return s * d.x_axis.dx * d.p_axis.dx;
}

std::vector<double> marginal_x(const PhaseSpaceDist& d) {
    std::vector<double> m(d.x_axis.n, 0.0);
    for (std::size_t i = 0; i < d.x_axis.n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < d.p_axis.n; ++k) s += d.at(i, k);
        m[i] = s * d.p_axis.dx;
    }
    return m;
}

std::vector<double> marginal_p(const PhaseSpaceDist& d) {
    std::vector<double> m(d.p_axis.n, 0.0);
    for (std::size_t k = 0; k < d.p_axis.n; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < d.x_axis.n; ++i) s += d.at(i, k);
        m[k] = s * d.x_axis.dx;
    }
    return m;
}

double min_value(const PhaseSpaceDist& d) {
    double m = d.values.empty() ? 0.0 : d.values.front();
    for (double v : d.values) m = std::min(m, v);
    return m;
}

double max_abs_value(const PhaseSpaceDist& d) {
    double m = 0.0;
    for (double v : d.values) m = std::max(m, std::abs(v));
    return m;
}

double l1_distance(const PhaseSpaceDist& a, const PhaseSpaceDist& b) {
    if (!same_grid(a.x_axis, b.x_axis) || !same_grid(a.p_axis, b.p_axis)) {
        throw GridMismatch("l1_distance: lattices differ");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        s += std::abs(a.values[i] - b.values[i]);
    }
    return s * a.x_axis.dx * a.p_axis.dx;
}

PhaseSpaceMoments moments(const PhaseSpaceDist& d) {
    const std::vector<double> mx = marginal_x(d);
    const std::vector<double> mp = marginal_p(d);
    double m0 = 0.0, sx = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        const double x = d.x_axis.x(i);
        m0 += mx[i];
        sx += x * mx[i];
        sxx += x * x * mx[i];
    }
    m0 *= d.x_axis.dx;
    sx *= d.x_axis.dx;
    sxx *= d.x_axis.dx;
    double sp = 0.0, spp = 0.0;
    for (std::size_t k = 0; k < mp.size(); ++k) {
        const double p = d.p_axis.x(k);
        sp += p * mp[k];
        spp += p * p * mp[k];
    }
    sp *= d.p_axis.dx;
    spp *= d.p_axis.dx;
    PhaseSpaceMoments out;
    out.mean_x = sx / m0;
    out.var_x = sxx / m0 - out.mean_x * out.mean_x;
    out.mean_p = sp / m0;
    out.var_p = spp / m0 - out.mean_p * out.mean_p;
    return out;
}

}  // namespace akmeter

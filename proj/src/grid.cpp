#include "akmeter/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "akmeter/linalg.hpp"

namespace akmeter {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_abs(std::span<const cdouble> a) {
    double peak = 0.0;
    for (const auto& v : a) peak = std::max(peak, std::abs(v));
    return peak;
}
}  // namespace

GridSpec1D GridSpec1D::centered(double half_width, std::size_t n, double hbar) {
    GridSpec1D g;
    g.n = n;
    g.dx = 2.0 * half_width / double(n);
    g.x_min = -half_width;
    g.hbar = hbar;
    g.validate();
    return g;
}

double GridSpec1D::h() const { return kTwoPi * hbar; }
double GridSpec1D::dp() const { return kTwoPi * hbar / (dx * double(n)); }

GridSpec1D GridSpec1D::conjugate() const {
    GridSpec1D g;
    g.n = n;
    g.dx = dp();
    g.x_min = p_min();
    g.hbar = hbar;
    return g;
}

bool GridSpec1D::is_centered(double tol) const {
    return std::abs(x_min + 0.5 * double(n) * dx) <= tol * dx;
}

std::vector<double> GridSpec1D::axis() const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x(i);
    return out;
}

void GridSpec1D::validate() const {
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("GridSpec1D: n must be a power of two");
    }
    if (!(dx > 0.0)) throw std::invalid_argument("GridSpec1D: dx must be positive");
    if (!(hbar > 0.0)) throw std::invalid_argument("GridSpec1D: hbar must be positive");
}

bool same_grid(const GridSpec1D& a, const GridSpec1D& b, double tol) {
    return a.n == b.n && std::abs(a.dx - b.dx) <= tol * a.dx &&
           std::abs(a.x_min - b.x_min) <= tol * (std::abs(a.x_min) + a.dx) &&
           std::abs(a.hbar - b.hbar) <= tol * a.hbar;
}

bool same_spacing(const GridSpec1D& a, const GridSpec1D& b, double tol) {
    return std::abs(a.dx - b.dx) <= tol * a.dx && std::abs(a.hbar - b.hbar) <= tol * a.hbar;
}

void GridSpec2D::validate() const {
    axis1.validate();
    axis2.validate();
    if (axis1.hbar != axis2.hbar) {
        throw std::invalid_argument("GridSpec2D: axes disagree on hbar");
    }
}

// --- norms --------------------------------------------------------------------

double norm_squared(const WaveFunction1D& w) {
    double s = 0.0;
    for (const auto& v : w.amps) s += std::norm(v);
    return s * w.grid.dx;
}

double norm_squared(const WaveFunction2D& w) {
    double s = 0.0;
    for (const auto& v : w.amps) s += std::norm(v);
    return s * w.grid.axis1.dx * w.grid.axis2.dx;
}

namespace {
template <typename W>
W normalize_impl(W w) {
    const double n2 = norm_squared(w);
    const double n = std::sqrt(n2);
    if (!(n >= 1e-300)) throw ZeroNorm("normalize: state has vanishing norm");
    const double s = 1.0 / n;
    for (auto& v : w.amps) v *= s;
    return w;
}
}  // namespace

WaveFunction1D normalize(WaveFunction1D w) { return normalize_impl(std::move(w)); }
WaveFunction2D normalize(WaveFunction2D w) { return normalize_impl(std::move(w)); }

bool boundary_decay_ok(const WaveFunction1D& w, double threshold) {
    const double peak = max_abs(w.amps);
    if (peak == 0.0) return true;
    const std::size_t n = w.grid.n;
    if (n < 4) return false;
    const double lim = threshold * peak;
    return std::abs(w.amps[0]) < lim && std::abs(w.amps[1]) < lim &&
           std::abs(w.amps[n - 1]) < lim && std::abs(w.amps[n - 2]) < lim;
}

bool boundary_decay_ok(const WaveFunction2D& w, double threshold) {
    const double peak = max_abs(w.amps);
    if (peak == 0.0) return true;
    const std::size_t n1 = w.grid.axis1.n;
    const std::size_t n2 = w.grid.axis2.n;
    if (n1 < 4 || n2 < 4) return false;
    const double lim = threshold * peak;
    for (std::size_t i2 = 0; i2 < n2; ++i2) {
        if (std::abs(w.at(0, i2)) >= lim || std::abs(w.at(1, i2)) >= lim ||
            std::abs(w.at(n1 - 1, i2)) >= lim || std::abs(w.at(n1 - 2, i2)) >= lim) {
            return false;
        }
    }
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
        if (std::abs(w.at(i1, 0)) >= lim || std::abs(w.at(i1, 1)) >= lim ||
            std::abs(w.at(i1, n2 - 1)) >= lim || std::abs(w.at(i1, n2 - 2)) >= lim) {
            return false;
        }
    }
    return true;
}

void require_boundary_decay(const WaveFunction1D& w, const char* where) {
    if (!boundary_decay_ok(w)) {
        throw BoundaryLeak(std::string(where) + ": amplitude at the grid edge; enlarge the grid");
    }
}

void require_boundary_decay(const WaveFunction2D& w, const char* where) {
    if (!boundary_decay_ok(w)) {
        throw BoundaryLeak(std::string(where) + ": amplitude at the grid edge; enlarge the grid");
    }
}

// --- Fourier transforms -------------------------------------------------------

void lattice_fourier(const GridSpec1D& grid, std::span<const cdouble> in,
                     std::span<cdouble> out, bool inverse) {
    const std::size_t n = grid.n;
    if (in.size() != n || out.size() != n) {
        throw GridMismatch("lattice_fourier: buffer length mismatch");
    }
    const double dp = grid.dp();
    const double p_min = grid.p_min();
    const double inv_sqrt_h = 1.0 / std::sqrt(grid.h());
    // Phases follow from p_r x_m = p_min x_min + m (p_min dx) + r (dp x_min)
    // + r m dp dx, with p_min dx / hbar = -pi and dp dx / hbar = 2 pi / n.
    const double theta0 = p_min * grid.x_min / grid.hbar;
    const double theta_r = dp * grid.x_min / grid.hbar;
    std::vector<cdouble> buf(n);
    if (!inverse) {
        for (std::size_t m = 0; m < n; ++m) {
            buf[m] = (m & 1) ? -in[m] : in[m];
        }
        fft_forward(buf);
        const double scale = inv_sqrt_h * grid.dx;
        for (std::size_t r = 0; r < n; ++r) {
            const cdouble phase = std::polar(1.0, -(theta0 + theta_r * double(r)));
            out[r] = scale * phase * buf[r];
        }
    } else {
        for (std::size_t r = 0; r < n; ++r) {
            buf[r] = std::polar(1.0, theta_r * double(r)) * in[r];
        }
        fft_inverse(buf);
        const double scale = inv_sqrt_h * dp;
        const cdouble c0 = std::polar(1.0, theta0);
        for (std::size_t m = 0; m < n; ++m) {
            const cdouble v = scale * c0 * buf[m];
            out[m] = (m & 1) ? -v : v;
        }
    }
}

WaveFunction1D to_momentum_rep(const WaveFunction1D& w) {
    require_boundary_decay(w, "to_momentum_rep");
    WaveFunction1D out;
    out.grid = w.grid.conjugate();
    out.amps.resize(w.grid.n);
    lattice_fourier(w.grid, w.amps, out.amps, false);
    return out;
}

WaveFunction1D to_position_rep(const WaveFunction1D& w) {
    require_boundary_decay(w, "to_position_rep");
    WaveFunction1D out;
    out.grid = w.grid.conjugate();
    out.amps.resize(w.grid.n);
    lattice_fourier(out.grid, w.amps, out.amps, true);
    return out;
}

namespace {
WaveFunction2D transform_axis(const WaveFunction2D& w, int axis, bool inverse) {
    if (axis != 0 && axis != 1) {
        throw std::invalid_argument("transform_axis: axis must be 0 or 1");
    }
    const std::size_t n1 = w.grid.axis1.n;
    const std::size_t n2 = w.grid.axis2.n;
    WaveFunction2D out;
    out.grid = w.grid;
    out.amps.resize(w.amps.size());
    if (axis == 1) {
        const GridSpec1D pos = inverse ? w.grid.axis2.conjugate() : w.grid.axis2;
        out.grid.axis2 = inverse ? pos : w.grid.axis2.conjugate();
        for (std::size_t i1 = 0; i1 < n1; ++i1) {
            lattice_fourier(pos, std::span(w.amps).subspan(i1 * n2, n2),
                            std::span(out.amps).subspan(i1 * n2, n2), inverse);
        }
    } else {
        const GridSpec1D pos = inverse ? w.grid.axis1.conjugate() : w.grid.axis1;
        out.grid.axis1 = inverse ? pos : w.grid.axis1.conjugate();
        std::vector<cdouble> col(n1), res(n1);
        for (std::size_t i2 = 0; i2 < n2; ++i2) {
            for (std::size_t i1 = 0; i1 < n1; ++i1) col[i1] = w.at(i1, i2);
            lattice_fourier(pos, col, res, inverse);
            for (std::size_t i1 = 0; i1 < n1; ++i1) out.at(i1, i2) = res[i1];
        }
    }
    return out;
}
}  // namespace

WaveFunction2D to_momentum_rep_axis(const WaveFunction2D& w, int axis) {
    return transform_axis(w, axis, false);
}

WaveFunction2D to_position_rep_axis(const WaveFunction2D& w, int axis) {
    return transform_axis(w, axis, true);
}

// --- quadrature ---------------------------------------------------------------

double expect_multiplicative(const WaveFunction1D& w, std::span<const double> f) {
    if (f.size() != w.grid.n) throw GridMismatch("expect_multiplicative: sample count");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::norm(w.amps[i]);
    return s * w.grid.dx;
}

double expect_multiplicative(const WaveFunction1D& w, const std::function<double(double)>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.grid.n; ++i) s += f(w.grid.x(i)) * std::norm(w.amps[i]);
    return s * w.grid.dx;
}

double expect_multiplicative(const WaveFunction2D& w,
                             const std::function<double(double, double)>& f) {
    double s = 0.0;
    for (std::size_t i1 = 0; i1 < w.grid.axis1.n; ++i1) {
        const double x1 = w.grid.axis1.x(i1);
        for (std::size_t i2 = 0; i2 < w.grid.axis2.n; ++i2) {
            s += f(x1, w.grid.axis2.x(i2)) * std::norm(w.at(i1, i2));
        }
    }
    return s * w.grid.axis1.dx * w.grid.axis2.dx;
}

double partial_derivative_expectation(const WaveFunction2D& w, int axis, int order) {
    if (order != 1 && order != 2) {
        throw std::invalid_argument("partial_derivative_expectation: order must be 1 or 2");
    }
    require_boundary_decay(w, "partial_derivative_expectation");
    const WaveFunction2D t = to_momentum_rep_axis(w, axis);
    const GridSpec1D& kg = (axis == 0) ? t.grid.axis1 : t.grid.axis2;
    double s = 0.0;
    for (std::size_t i1 = 0; i1 < t.grid.axis1.n; ++i1) {
        for (std::size_t i2 = 0; i2 < t.grid.axis2.n; ++i2) {
            const double k = kg.x(axis == 0 ? i1 : i2);
            const double f = (order == 1) ? k : k * k;
            s += f * std::norm(t.at(i1, i2));
        }
    }
    return s * t.grid.axis1.dx * t.grid.axis2.dx;
}

// --- density matrices ---------------------------------------------------------

DensityMatrix1D pure_density(const WaveFunction1D& psi) {
    DensityMatrix1D rho;
    rho.grid = psi.grid;
    const std::size_t n = psi.grid.n;
    rho.elems.resize(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            rho.elems[j * n + k] = psi.amps[j] * std::conj(psi.amps[k]);
        }
    }
    return rho;
}

double dm_trace(const DensityMatrix1D& rho) {
    double s = 0.0;
    for (std::size_t j = 0; j < rho.grid.n; ++j) s += rho.at(j, j).real();
    return s * rho.grid.dx;
}

double dm_purity(const DensityMatrix1D& rho) {
    double s = 0.0;
    for (const auto& v : rho.elems) s += std::norm(v);
    return s * rho.grid.dx * rho.grid.dx;
}

double dm_hermiticity_defect(const DensityMatrix1D& rho) {
    double d = 0.0;
    const std::size_t n = rho.grid.n;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j; k < n; ++k) {
            d = std::max(d, std::abs(rho.at(j, k) - std::conj(rho.at(k, j))));
        }
    }
    return d;
}

std::vector<double> dm_eigenvalues(const DensityMatrix1D& rho) {
    std::vector<double> ev = hermitian_eigenvalues(rho.elems, rho.grid.n);
    for (auto& v : ev) v *= rho.grid.dx;
    return ev;
}

void check_density_matrix(const DensityMatrix1D& rho, bool with_spectrum) {
    if (rho.elems.size() != rho.grid.n * rho.grid.n) {
        throw std::invalid_argument("DensityMatrix1D: element count mismatch");
    }
    const double peak = max_abs(rho.elems);
    if (dm_hermiticity_defect(rho) > 1e-9 * std::max(peak, 1.0)) {
        throw NotHermitian("DensityMatrix1D: hermiticity defect above 1e-9");
    }
    if (std::abs(dm_trace(rho) - 1.0) > 1e-6) {
        throw std::invalid_argument("DensityMatrix1D: trace deviates from 1 beyond 1e-6");
    }
    if (with_spectrum) {
        const std::vector<double> ev = dm_eigenvalues(rho);
        if (!ev.empty() && ev.front() < -1e-8) {
            throw std::invalid_argument("DensityMatrix1D: negative eigenvalue below -1e-8");
        }
    }
}

double fidelity_with_pure(const DensityMatrix1D& rho, const WaveFunction1D& psi) {
    if (!same_grid(rho.grid, psi.grid)) throw GridMismatch("fidelity_with_pure");
    const std::size_t n = rho.grid.n;
    cdouble s{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        cdouble row{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) row += rho.at(j, k) * psi.amps[k];
        s += std::conj(psi.amps[j]) * row;
    }
    return s.real() * rho.grid.dx * rho.grid.dx;
}

double trace_distance(const DensityMatrix1D& a, const DensityMatrix1D& b) {
    if (!same_grid(a.grid, b.grid)) throw GridMismatch("trace_distance");
    std::vector<cdouble> diff(a.elems.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.elems[i] - b.elems[i];
    const std::vector<double> ev = hermitian_eigenvalues(diff, a.grid.n);
    double s = 0.0;
    for (double v : ev) s += std::abs(v);
    return 0.5 * s * a.grid.dx;
}

}  // namespace akmeter

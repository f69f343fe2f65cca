#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "akmeter/errors.hpp"
#include "akmeter/fft.hpp"

namespace akmeter {

inline constexpr double kBoundaryDecayThreshold = 1e-8;

// Uniform sampling lattice for a position-like coordinate. The conjugate
// momentum lattice is induced: dp = 2*pi*hbar/(n*dx), n points, centered.
struct GridSpec1D {
    double x_min = 0.0;
    std::size_t n = 0;
    double dx = 0.0;
    double hbar = 1.0;

    static GridSpec1D centered(double half_width, std::size_t n, double hbar = 1.0);

    double x(std::size_t i) const { return x_min + dx * double(i); }
    double length() const { return dx * double(n); }
    double h() const;                       // Planck constant 2*pi*hbar
    double dp() const;                      // conjugate lattice spacing
    double p_min() const { return -0.5 * double(n) * dp(); }
    double p(std::size_t i) const { return p_min() + dp() * double(i); }
    GridSpec1D conjugate() const;           // the induced momentum lattice
    bool is_centered(double tol = 1e-9) const;
    std::vector<double> axis() const;       // monotone sample positions
    void validate() const;                  // throws std::invalid_argument
};

bool same_grid(const GridSpec1D& a, const GridSpec1D& b, double tol = 1e-9);
bool same_spacing(const GridSpec1D& a, const GridSpec1D& b, double tol = 1e-9);

struct GridSpec2D {
    GridSpec1D axis1;
    GridSpec1D axis2;
    std::string name1;  // metadata only, e.g. "eps_xi"
    std::string name2;

    std::size_t size() const { return axis1.n * axis2.n; }
    void validate() const;
};

struct WaveFunction1D {
    GridSpec1D grid;
    std::vector<cdouble> amps;  // units length^(-1/2) in position representation
};

// Row major: amps[i1 * axis2.n + i2].
struct WaveFunction2D {
    GridSpec2D grid;
    std::vector<cdouble> amps;

    cdouble& at(std::size_t i1, std::size_t i2) { return amps[i1 * grid.axis2.n + i2]; }
    const cdouble& at(std::size_t i1, std::size_t i2) const {
        return amps[i1 * grid.axis2.n + i2];
    }
};

// <x_j| rho |x_k> sampled on the grid, row major elems[j*n + k].
struct DensityMatrix1D {
    GridSpec1D grid;
    std::vector<cdouble> elems;

    cdouble& at(std::size_t j, std::size_t k) { return elems[j * grid.n + k]; }
    const cdouble& at(std::size_t j, std::size_t k) const { return elems[j * grid.n + k]; }
};

// --- norms and normalization -------------------------------------------------

double norm_squared(const WaveFunction1D& w);
double norm_squared(const WaveFunction2D& w);

WaveFunction1D normalize(WaveFunction1D w);  // throws ZeroNorm
WaveFunction2D normalize(WaveFunction2D w);

// Decay of |amps| at the outermost two samples relative to the peak.
bool boundary_decay_ok(const WaveFunction1D& w, double threshold = kBoundaryDecayThreshold);
bool boundary_decay_ok(const WaveFunction2D& w, double threshold = kBoundaryDecayThreshold);
void require_boundary_decay(const WaveFunction1D& w, const char* where);
void require_boundary_decay(const WaveFunction2D& w, const char* where);

// --- Fourier transforms between conjugate representations --------------------

// psi~(p) = h^(-1/2) Integral dx exp(-i p x / hbar) psi(x), evaluated on the
// conjugate lattice in monotone order. Unitary on the lattice.
WaveFunction1D to_momentum_rep(const WaveFunction1D& w);
// Inverse convention, exp(+i p x / hbar). Round trip is the identity.
WaveFunction1D to_position_rep(const WaveFunction1D& w);

// Same transforms applied along one axis of a 2-D state (0 or 1).
WaveFunction2D to_momentum_rep_axis(const WaveFunction2D& w, int axis);
WaveFunction2D to_position_rep_axis(const WaveFunction2D& w, int axis);

// Raw lattice transform used by the wavefunction wrappers and the kernel
// machinery: out[r] = h^(-1/2) dx sum_m exp(-+ i p_r x_m / hbar) in[m].
void lattice_fourier(const GridSpec1D& grid, std::span<const cdouble> in,
                     std::span<cdouble> out, bool inverse);

// --- quadrature ---------------------------------------------------------------

// Riemann sum  sum f_k |w_k|^2 dV  for a multiplicative observable.
double expect_multiplicative(const WaveFunction1D& w, std::span<const double> f);
double expect_multiplicative(const WaveFunction1D& w, const std::function<double(double)>& f);
double expect_multiplicative(const WaveFunction2D& w, const std::function<double(double, double)>& f);

// <w| (-i hbar d/d axis)^order |w>, order 1 or 2, via the FFT diagonal.
double partial_derivative_expectation(const WaveFunction2D& w, int axis, int order);

// --- density matrices ---------------------------------------------------------

DensityMatrix1D pure_density(const WaveFunction1D& psi);
double dm_trace(const DensityMatrix1D& rho);            // sum rho_jj dx
double dm_purity(const DensityMatrix1D& rho);           // tr(rho^2)
double dm_hermiticity_defect(const DensityMatrix1D& rho);
// Eigenvalues of the discretized operator (unitless probabilities), ascending.
std::vector<double> dm_eigenvalues(const DensityMatrix1D& rho);
// Throws NotHermitian / std::invalid_argument on invariant violations.
// with_spectrum additionally checks eigenvalues >= -1e-8.
void check_density_matrix(const DensityMatrix1D& rho, bool with_spectrum = false);

double fidelity_with_pure(const DensityMatrix1D& rho, const WaveFunction1D& psi);
double trace_distance(const DensityMatrix1D& a, const DensityMatrix1D& b);

}  // namespace akmeter

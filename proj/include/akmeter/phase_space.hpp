#pragma once

#include <vector>

#include "akmeter/grid.hpp"

namespace akmeter {

// Real-valued function on an (x, p) lattice, units 1/(length*momentum).
// Row major: values[ix * p_axis.n + ip].
struct PhaseSpaceDist {
    GridSpec1D x_axis;
    GridSpec1D p_axis;
    std::vector<double> values;

    double& at(std::size_t ix, std::size_t ip) { return values[ix * p_axis.n + ip]; }
    const double& at(std::size_t ix, std::size_t ip) const {
        return values[ix * p_axis.n + ip];
    }
};

struct CoherentStateParams {
    double mu_x = 0.0;
    double mu_p = 0.0;
    double lambda = 1.0;  // > 0
};

// --- constructions -------------------------------------------------------------

// (1/(pi lambda^2))^(1/4) exp[-(x-muX)^2/(2 lambda^2) + i muP x/hbar - i muP muX/(2 hbar)]
WaveFunction1D coherent_wavefunction(const CoherentStateParams& params, const GridSpec1D& grid);

// W(x,p) = (1/h) Integral dy exp(i p y/hbar) psi(x-y/2) psi*(x+y/2).
// Evaluated exactly on the (grid, conjugate grid) lattice via the half-step
// interleaved correlation (band-limited 2x upsampling, no interpolation bias).
PhaseSpaceDist wigner_of_pure(const WaveFunction1D& psi);

// Same transform for a density matrix: (1/h) Int dy e^{ipy/hbar} <x-y/2|rho|x+y/2>.
PhaseSpaceDist wigner_of_density(const DensityMatrix1D& rho);

// Q(muX,muP) = (2/h) Int dx dp exp[-(muX-x)^2/li^2 - li^2 (muP-p)^2/hbar^2] W(x,p).
PhaseSpaceDist husimi(const WaveFunction1D& psi, double lambda_i);

// Independent route for the same object: |<coherent(muX,muP,lambda)|psi>|^2 / h.
PhaseSpaceDist husimi_overlap(const WaveFunction1D& psi, double lambda_i);

// Cartwright smearing: Gaussian kernel with variances scaled by cosh(eta).
// eta = 0 reproduces the Husimi function.
PhaseSpaceDist smeared_wigner(const WaveFunction1D& psi, double lambda, double eta);

// The Gaussian kernel above as a lattice distribution (unit mass, centered).
PhaseSpaceDist gaussian_phase_kernel(const GridSpec1D& x_axis, const GridSpec1D& p_axis,
                                     double lambda, double eta);

// Zero-padded linear convolution (2x padding per axis) via FFT. Output lives
// on a's lattice; the kernel b must share it and hold zero on its own grid.
PhaseSpaceDist convolve2d(const PhaseSpaceDist& a, const PhaseSpaceDist& b);

// --- diagnostics ----------------------------------------------------------------

double mass(const PhaseSpaceDist& d);                       // Int d dx dp
std::vector<double> marginal_x(const PhaseSpaceDist& d);    // Int d dp
std::vector<double> marginal_p(const PhaseSpaceDist& d);    // Int d dx
double min_value(const PhaseSpaceDist& d);
double max_abs_value(const PhaseSpaceDist& d);
double l1_distance(const PhaseSpaceDist& a, const PhaseSpaceDist& b);
// First and second moments of the two marginals: {mean_x, var_x, mean_p, var_p}.
struct PhaseSpaceMoments {
    double mean_x, var_x, mean_p, var_p;
};
PhaseSpaceMoments moments(const PhaseSpaceDist& d);

}  // namespace akmeter

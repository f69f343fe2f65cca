#pragma once

#include <utility>

#include "akmeter/measurement.hpp"

namespace akmeter {

// K(x, muX, muP; x') on a coarse 4-index lattice, values row major in that
// index order. A validation layer, not a production path: n is capped at 32.
// Built with the discrete-torus convention (epsilon arguments wrap around the
// window), which makes the lattice unitarity and marginal-kernel identities
// hold to roundoff; wrap-around ghost images sit a full period away and are
// suppressed by the decay of any state the kernel is applied to.
struct MeasurementKernel {
    GridSpec1D x_grid;
    GridSpec1D mux_grid;
    GridSpec1D mup_grid;
    GridSpec1D xp_grid;
    std::vector<cdouble> values;

    cdouble& at(std::size_t ix, std::size_t ia, std::size_t ir, std::size_t ixp) {
        return values[((ix * mux_grid.n + ia) * mup_grid.n + ir) * xp_grid.n + ixp];
    }
    const cdouble& at(std::size_t ix, std::size_t ia, std::size_t ir,
                      std::size_t ixp) const {
        return values[((ix * mux_grid.n + ia) * mup_grid.n + ir) * xp_grid.n + ixp];
    }
};

// f_X(muX; x1, x2) or f_P(muP; p1, p2), row major [imu][i1][i2].
struct MarginalKernel {
    GridSpec1D mu_grid;
    GridSpec1D arg_grid;
    std::vector<cdouble> f;

    cdouble& at(std::size_t imu, std::size_t i1, std::size_t i2) {
        return f[(imu * arg_grid.n + i1) * arg_grid.n + i2];
    }
    const cdouble& at(std::size_t imu, std::size_t i1, std::size_t i2) const {
        return f[(imu * arg_grid.n + i1) * arg_grid.n + i2];
    }
};

// chi0 over the displacement lattice s = mu - arg, plus the off-diagonal mass
// fraction measuring deviation from the convolution form.
struct ConvolutionForm {
    double s_min = 0.0;
    double ds = 0.0;
    std::vector<double> chi0;
    double residual = 0.0;

    double s(std::size_t t) const { return s_min + ds * double(t); }
};

// K specialized to the Arthurs-Kelly interaction:
// K = h^(-1/2) exp(i muP (x - x')/hbar) phi_ap(muX - x', muX - x).
// x, muX, x' live on `grid`; muP on its conjugate. Requires grid.n <= 32.
MeasurementKernel extract_kernel_ak(const ApparatusState& ap, const GridSpec1D& grid);

struct UnitarityResidue {
    double max_offdiag;   // |U(x1,x2)| dx for x1 != x2
    double max_diag_dev;  // |U(x,x) dx - 1|
};
UnitarityResidue kernel_unitarity_residue(const MeasurementKernel& k);

// Integrates K against psi; cross-validates joint_final_state.
JointFinalState apply_kernel(const MeasurementKernel& k, const WaveFunction1D& psi);

// (f_X, f_P). f_P is built from the momentum-representation kernel K~ rather
// than by transforming f_X, exercising both constructions.
std::pair<MarginalKernel, MarginalKernel> marginal_kernels(const MeasurementKernel& k);

// Delta-normalization defect of  Int dmu f(mu; a, b)  against delta(a-b)/dx.
UnitarityResidue marginal_delta_residue(const MarginalKernel& f);

ConvolutionForm detect_convolution_form(const MarginalKernel& f);

double chi_mass(const ConvolutionForm& c);

// Standard deviations of chi_X0 / chi_P0; throws FormViolation when either
// residual exceeds 1e-3.
std::pair<double, double> prugovecki_sigmas(const ConvolutionForm& cx,
                                            const ConvolutionForm& cp);

// (Delta_ei)^2 = Int (mu - a1)(mu - a2) f(mu; a1, a2) psi(a1) psi*(a2);
// psi must live on the marginal kernel's argument lattice.
double rms_from_marginal(const MarginalKernel& f, const WaveFunction1D& psi);

}  // namespace akmeter

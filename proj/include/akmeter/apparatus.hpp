#pragma once

#include <utility>

#include "akmeter/grid.hpp"

namespace akmeter {

// Initial apparatus state phi_ap(eps_Xi, eps_Xf): axis1 is the retrodictive
// error coordinate, axis2 the predictive one.
struct ApparatusState {
    WaveFunction2D wf;
};

// The error and disturbance operators in the (eps_Xi, eps_Xf) representation.
// eps_Xi/eps_Xf multiply by the coordinate; the momentum errors act as
// eps_Pi = +i hbar d/d eps_Xi and eps_Pf = -i hbar d/d eps_Xf -- signs fixed
// by the commutator table ([eps_Xi, eps_Pi] = -i hbar, [eps_Xf, eps_Pf] = +i hbar).
enum class ErrorOp {
    EpsXi,
    EpsXf,
    EpsPi,
    EpsPf,
    DeltaX,  // eps_Xi - eps_Xf
    DeltaP,  // eps_Pi - eps_Pf
    EpsX,    // (eps_Xi + eps_Xf)/2
    EpsP,    // (eps_Pi + eps_Pf)/2
};

WaveFunction2D apply_error_operator(const WaveFunction2D& w, ErrorOp op);
cdouble braket(const WaveFunction2D& a, const WaveFunction2D& b);

// The six rms figures (second moments about zero, as in the definitions of
// the errors of retrodiction/prediction and the disturbances), the first
// moments, and the averaged-error cross moments.
struct ErrorReport {
    double hbar = 1.0;
    double dei_x = 0.0, dei_p = 0.0;  // retrodictive
    double def_x = 0.0, def_p = 0.0;  // predictive
    double dd_x = 0.0, dd_p = 0.0;    // disturbances
    double cross_term_x = 0.0;        // <eps_X delta_X>
    double cross_term_p = 0.0;        // <eps_P delta_P>
    double mean_ei_x = 0.0, mean_ei_p = 0.0;
    double mean_ef_x = 0.0, mean_ef_p = 0.0;
    double mean_d_x = 0.0, mean_d_p = 0.0;
};

// --- apparatus families ---------------------------------------------------------

// Gaussian of width lambda_i in eps_Xi times an arbitrary normalized phi_f.
// Saturates the retrodictive error product at hbar/2.
ApparatusState make_retrodictively_optimal(double lambda_i, const WaveFunction1D& phi_f);

// Mirror image: arbitrary phi_i times a Gaussian of width lambda_f in eps_Xf.
ApparatusState make_predictively_optimal(double lambda_f, const WaveFunction1D& phi_i);

// Product of the two Gaussians; saturates both error products.
ApparatusState make_completely_optimal(double lambda_i, double lambda_f,
                                       const GridSpec1D& grid);

// Correlated Gaussian exp[-(cosh(eta)(ei^2+ef^2) - 2 sinh(eta) ei ef)/(2 lambda^2)];
// equal retrodictive/predictive errors, disturbance product hbar e^(-eta),
// error products (hbar/2) cosh(eta).
ApparatusState make_minimally_disturbing(double lambda, double eta, const GridSpec1D& grid);

ApparatusState make_apparatus_from_amplitudes(const GridSpec2D& grid,
                                              std::vector<cdouble> amps);

// --- analysis --------------------------------------------------------------------

// All six rms figures; independent of any system state by construction.
ErrorReport error_report(const ApparatusState& ap);

// Change of variables to the simultaneous (mu_X, pi_P) eigenbasis:
// mu_X = (eps_Xi + eps_Xf)/2, pi_P = eps_Xi - eps_Xf. Exact index remap
// (unit Jacobian); both ap axes must be the same centered lattice.
WaveFunction2D to_muX_piP_rep(const ApparatusState& ap);

// Further Fourier transform pi_P -> mu_P, giving the pointer representation.
WaveFunction2D to_pointer_rep(const ApparatusState& ap);

// Splits a factorized apparatus state into (phi_i, phi_f) with matched phases.
// Throws NotFactorized when || phi - phi_i (x) phi_f || exceeds 1e-6.
std::pair<WaveFunction1D, WaveFunction1D> apparatus_factors(const ApparatusState& ap);

// 1-D helper used throughout: (1/(pi w^2))^(1/4) exp(-(x-c)^2/(2 w^2)).
WaveFunction1D gaussian_packet(const GridSpec1D& grid, double center, double width);

// Half-width the named families need for the boundary-decay invariant.
double recommended_half_width(double lambda_i, double lambda_f, double lambda, double eta);

}  // namespace akmeter

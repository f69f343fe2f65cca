#pragma once

#include <cstdint>
#include <vector>

#include "akmeter/apparatus.hpp"
#include "akmeter/phase_space.hpp"

namespace akmeter {

// <x, muX, muP | U | psi (x) phi_ap>, amps[ix][imux][imup] row major.
// The pointer position lattice equals the system lattice; the pointer
// momentum lattice is its conjugate.
struct JointFinalState {
    GridSpec1D x_grid;
    GridSpec1D mux_grid;
    GridSpec1D mup_grid;
    std::vector<cdouble> amps;

    cdouble& at(std::size_t ix, std::size_t ia, std::size_t ir) {
        return amps[(ix * mux_grid.n + ia) * mup_grid.n + ir];
    }
    const cdouble& at(std::size_t ix, std::size_t ia, std::size_t ir) const {
        return amps[(ix * mux_grid.n + ia) * mup_grid.n + ir];
    }
};

// Rectangle in outcome space; cell centers decide membership.
struct OutcomeRegion {
    double x_lo = 0.0, x_hi = 0.0;
    double p_lo = 0.0, p_hi = 0.0;

    void validate() const;
    bool contains(double mu_x, double mu_p) const {
        return mu_x >= x_lo && mu_x <= x_hi && mu_p >= p_lo && mu_p <= p_hi;
    }
};

struct MeasurementOutcomeSample {
    double mu_x = 0.0;
    double mu_p = 0.0;
    std::uint64_t seed = 0;   // provenance
    std::uint64_t index = 0;
};

double joint_norm_squared(const JointFinalState& j);

// The joint final wavefunction: Psi(x,muX,muP) =
// h^(-1/2) Int dx' exp(i muP (x-x')/hbar) phi_ap(muX-x', muX-x) psi(x').
// System and apparatus lattices must share dx and alignment.
JointFinalState joint_final_state(const WaveFunction1D& psi, const ApparatusState& ap);

// Reduced initial apparatus density matrix on the eps_Xi axis:
// rho(ei, ei') = Int d ef  phi(ei, ef) phi*(ei', ef).
DensityMatrix1D reduced_epsilon_density(const ApparatusState& ap);

// rho(muX,muP) from the double-integral of rho_eps matrix elements against psi.
PhaseSpaceDist outcome_distribution_direct(const WaveFunction1D& psi,
                                           const ApparatusState& ap);

// rho = W_eps_i (*) W_sy,i (retrodictive-error Wigner convolved with the
// initial-state Wigner function).
PhaseSpaceDist outcome_distribution_convolution(const WaveFunction1D& psi,
                                                const ApparatusState& ap);

// The Wigner function of the retrodictive error pair (eps_Xi, eps_Pi); its
// sign convention follows from the conjugate momentum being -eps_Pi.
PhaseSpaceDist retrodictive_error_wigner(const ApparatusState& ap);

// Standard deviations of the two marginals of an outcome distribution.
struct PointerSpreads {
    double dmu_x, dmu_p;
};
PointerSpreads pointer_variances(const PhaseSpaceDist& rho);

double region_probability(const PhaseSpaceDist& rho, const OutcomeRegion& region);

// Conditional post-measurement state for a factorized apparatus
// phi(ei,ef) = phi_i(ei) phi_f(ef), given the outcome landed in `region`.
DensityMatrix1D conditional_state_factorized(const WaveFunction1D& psi,
                                             const WaveFunction1D& phi_i,
                                             const WaveFunction1D& phi_f,
                                             const OutcomeRegion& region);

// Same object by partial trace of the joint state over the region; works for
// non-factorized apparatus states too.
DensityMatrix1D conditional_state_general(const JointFinalState& joint,
                                          const OutcomeRegion& region);

// W_sy,f(x,p) = (1/p_R) Int_R W_eps_f(muX-x, muP-p) rho(muX,muP) dmuX dmuP.
PhaseSpaceDist final_wigner_from_outcomes(const PhaseSpaceDist& rho,
                                          const WaveFunction1D& phi_f,
                                          const OutcomeRegion& region);

// Anti-Husimi (P) function of the final state for a predictively optimal
// apparatus: rho/p_R inside the region, zero outside.
PhaseSpaceDist anti_husimi_on_region(const PhaseSpaceDist& rho, const OutcomeRegion& region,
                                     const ErrorReport& report);

// Diagonal coherent-state mixture  Int P |coh><coh|  on the given lattice.
DensityMatrix1D density_from_coherent_mixture(const PhaseSpaceDist& p_dist, double lambda_f,
                                              const GridSpec1D& grid);

// Inverse-CDF sampling over the flattened lattice with uniform in-cell jitter.
// Deterministic for a given seed; sample i depends only on (seed, i).
std::vector<MeasurementOutcomeSample> sample_outcomes(const PhaseSpaceDist& rho,
                                                      std::size_t count,
                                                      std::uint64_t seed);

}  // namespace akmeter

#pragma once

#include <optional>
#include <string>

#include "akmeter/report.hpp"

namespace akmeter {

// Scenario files are flat key/value text with [section] headers; '#' starts a
// comment. Physical parameters have no defaults (except hbar = 1), so every
// field the chosen type needs must be present.
struct SystemSpec {
    std::string type;        // coherent | squeezed | cat | cubic | file
    double mu_x = 0.0;
    double mu_p = 0.0;
    double lambda = 0.0;
    double separation = 0.0;  // cat
    double gamma = 0.0;       // cubic phase strength
    std::string path;         // file
};

struct ApparatusSpec {
    std::string type;  // retro_opt | pred_opt | complete_opt | min_disturb | file
    double lambda_i = 0.0;
    double lambda_f = 0.0;
    double lambda = 0.0;
    double eta = 0.0;
    std::string partner;  // free factor for retro_opt/pred_opt: gaussian | bimodal
    double partner_lambda = 0.0;
    double partner_separation = 0.0;
    std::string path;  // file
};

struct ScenarioGrid {
    std::size_t n = 256;
    double half_width = 0.0;  // 0: derived from the state parameters
};

struct Scenario {
    double hbar = 1.0;
    SystemSpec system;
    ApparatusSpec apparatus;
    ScenarioGrid grid;
    std::optional<OutcomeRegion> region;
    std::size_t sample_count = 0;
    std::uint64_t seed = 0;
};

Scenario parse_scenario(const std::string& text);       // throws ScenarioError
Scenario load_scenario_file(const std::string& path);

struct BuiltScenario {
    GridSpec1D grid;
    WaveFunction1D psi;
    ApparatusState ap;
    bool factorized = false;
    WaveFunction1D phi_i;  // valid when factorized
    WaveFunction1D phi_f;
};

BuiltScenario build_scenario(const Scenario& s);

struct ScenarioResult {
    MeasurementReport report;
    PhaseSpaceDist rho;             // production (convolution) route
    PhaseSpaceDist wigner_initial;
    std::optional<PhaseSpaceDist> wigner_final;  // region + factorized apparatus
    BuiltScenario built;
};

// Runs every check applicable to the scenario; deterministic for a given
// scenario (and seed, for sampling done by the caller on `rho`).
ScenarioResult run_scenario(const Scenario& s);

}  // namespace akmeter

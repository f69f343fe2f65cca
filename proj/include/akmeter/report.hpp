#pragma once

#include <string>
#include <vector>

#include "akmeter/apparatus.hpp"
#include "akmeter/measurement.hpp"

namespace akmeter {

// Inequality verdict. For bound-type entries the margin is lhs - bound; for
// identity-type entries it is tolerance - |deviation|. pass records the
// verdict against the entry's own slack.
struct Verdict {
    std::string name;
    double margin = 0.0;
    bool pass = false;
};

// Distribution/state identity checked by two independent routes.
struct IdentityCheck {
    std::string name;
    double gap = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct MeasurementReport {
    double hbar = 1.0;
    std::string system_type;
    std::string apparatus_type;
    ErrorReport errors;
    double dmu_x = 0.0;
    double dmu_p = 0.0;
    double dual_route_l1 = 0.0;
    std::vector<Verdict> verdicts;
    std::vector<IdentityCheck> checks;

    bool all_pass() const;
};

// Stable key ordering; identical reports serialize to identical bytes.
std::string report_to_json(const MeasurementReport& r);
MeasurementReport report_from_json(const std::string& text);

// Flat "key,value" rows, 17-significant-digit floats.
std::string report_to_csv(const MeasurementReport& r);
MeasurementReport report_from_csv(const std::string& text);

void emit_report(const MeasurementReport& r, const std::string& format,
                 const std::string& path);

// Header mu_x,mu_p,density; row major over the muX-then-muP lattice.
std::string distribution_to_csv(const PhaseSpaceDist& d);
void emit_distribution_csv(const PhaseSpaceDist& d, const std::string& path);
PhaseSpaceDist distribution_from_csv(const std::string& text, const GridSpec1D& x_axis,
                                     const GridSpec1D& p_axis);

std::string samples_to_csv(const std::vector<MeasurementOutcomeSample>& samples);
void emit_samples_csv(const std::vector<MeasurementOutcomeSample>& samples,
                      const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace akmeter

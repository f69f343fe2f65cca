#include "akmeter/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace akmeter {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KvStore {
    std::map<std::string, std::string> values;  // "section.key" -> value
    mutable std::map<std::string, bool> used;

    bool has(const std::string& key) const { return values.count(key) > 0; }

    std::string str(const std::string& key) const {
        const auto it = values.find(key);
        if (it == values.end()) throw ScenarioError("missing scenario key: " + key);
        used[key] = true;
        return it->second;
    }

    double num(const std::string& key) const {
        const std::string v = str(key);
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ScenarioError("scenario key " + key + " is not a number: " + v);
        }
    }

    double num_or(const std::string& key, double fallback) const {
        return has(key) ? num(key) : fallback;
    }

    void require_all_used() const {
        for (const auto& [k, v] : values) {
            if (!used.count(k)) throw ScenarioError("unknown scenario key: " + k);
        }
    }
};

KvStore tokenize(const std::string& text) {
    KvStore kv;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ScenarioError("malformed section header at line " +
                                    std::to_string(lineno));
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ScenarioError("expected key = value at line " + std::to_string(lineno));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) {
            throw ScenarioError("empty key or value at line " + std::to_string(lineno));
        }
        const std::string full = section.empty() ? key : section + "." + key;
        if (kv.values.count(full)) throw ScenarioError("duplicate scenario key: " + full);
        kv.values[full] = val;
    }
    return kv;
}

WaveFunction1D load_wavefunction_csv(const std::string& path, const GridSpec1D& grid) {
    const std::string text = read_text_file(path);
    WaveFunction1D w;
    w.grid = grid;
    w.amps.reserve(grid.n);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto c = line.find(',');
        if (c == std::string::npos) throw IoError("state file row needs re,im: " + path);
        w.amps.emplace_back(std::stod(line.substr(0, c)), std::stod(line.substr(c + 1)));
    }
    if (w.amps.size() != grid.n) {
        throw IoError("state file holds " + std::to_string(w.amps.size()) +
                      " samples, grid needs " + std::to_string(grid.n));
    }
    return normalize(std::move(w));
}

std::vector<cdouble> load_amps_csv(const std::string& path, std::size_t count) {
    const std::string text = read_text_file(path);
    std::vector<cdouble> amps;
    amps.reserve(count);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto c = line.find(',');
        if (c == std::string::npos) throw IoError("state file row needs re,im: " + path);
        amps.emplace_back(std::stod(line.substr(0, c)), std::stod(line.substr(c + 1)));
    }
    if (amps.size() != count) {
        throw IoError("apparatus file holds " + std::to_string(amps.size()) +
                      " samples, grid needs " + std::to_string(count));
    }
    return amps;
}

WaveFunction1D build_free_factor(const ApparatusSpec& a, const GridSpec1D& grid) {
    if (a.partner == "gaussian") {
        return gaussian_packet(grid, 0.0, a.partner_lambda);
    }
    if (a.partner == "bimodal") {
        WaveFunction1D w;
        w.grid = grid;
        w.amps.resize(grid.n);
        const double s = 0.5 * a.partner_separation;
        const double wd = a.partner_lambda;
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double x = grid.x(i);
            w.amps[i] = std::exp(-0.5 * (x - s) * (x - s) / (wd * wd)) +
                        0.6 * std::exp(-0.5 * (x + s) * (x + s) / (wd * wd));
        }
        return normalize(std::move(w));
    }
    throw ScenarioError("apparatus partner must be gaussian or bimodal, got " + a.partner);
}

double auto_half_width(const Scenario& s) {
    double w = 10.0;
    const SystemSpec& sys = s.system;
    if (sys.type == "coherent" || sys.type == "squeezed") {
        w = std::max(w, std::abs(sys.mu_x) + 8.0 * sys.lambda);
    } else if (sys.type == "cat") {
        w = std::max(w, 0.5 * sys.separation + 8.0 * sys.lambda);
    } else if (sys.type == "cubic") {
        w = std::max(w, 8.0 * sys.lambda);
    }
    const ApparatusSpec& ap = s.apparatus;
    w = std::max(w, recommended_half_width(ap.lambda_i, ap.lambda_f, ap.lambda, ap.eta));
    if (ap.partner_lambda > 0.0) {
        w = std::max(w, 0.5 * ap.partner_separation + 8.0 * ap.partner_lambda);
    }
    return w;
}

void add_bound_verdict(MeasurementReport& r, const std::string& name, double lhs,
                       double bound, double slack) {
    Verdict v;
    v.name = name;
    v.margin = lhs - bound;
    v.pass = v.margin >= -slack;
    r.verdicts.push_back(v);
}

void add_identity_verdict(MeasurementReport& r, const std::string& name, double deviation,
                          double tol) {
    Verdict v;
    v.name = name;
    v.margin = tol - std::abs(deviation);
    v.pass = v.margin >= 0.0;
    r.verdicts.push_back(v);
}

void add_check(MeasurementReport& r, const std::string& name, double gap, double tol) {
    r.checks.push_back(IdentityCheck{name, gap, tol, gap <= tol});
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    const KvStore kv = tokenize(text);
    Scenario s;
    s.hbar = kv.num_or("hbar", 1.0);
    if (!(s.hbar > 0.0)) throw ScenarioError("hbar must be positive");

    s.system.type = kv.str("system.type");
    if (s.system.type == "coherent" || s.system.type == "squeezed") {
        s.system.mu_x = kv.num("system.mu_x");
        s.system.mu_p = kv.num("system.mu_p");
        s.system.lambda = kv.num("system.lambda");
    } else if (s.system.type == "cat") {
        s.system.separation = kv.num("system.separation");
        s.system.lambda = kv.num("system.lambda");
    } else if (s.system.type == "cubic") {
        s.system.lambda = kv.num("system.lambda");
        s.system.gamma = kv.num("system.gamma");
    } else if (s.system.type == "file") {
        s.system.path = kv.str("system.path");
    } else {
        throw ScenarioError("unknown system type: " + s.system.type);
    }

    s.apparatus.type = kv.str("apparatus.type");
    if (s.apparatus.type == "retro_opt") {
        s.apparatus.lambda_i = kv.num("apparatus.lambda_i");
        s.apparatus.partner = kv.str("apparatus.partner");
        s.apparatus.partner_lambda = kv.num("apparatus.partner_lambda");
        if (s.apparatus.partner == "bimodal") {
            s.apparatus.partner_separation = kv.num("apparatus.partner_separation");
        }
    } else if (s.apparatus.type == "pred_opt") {
        s.apparatus.lambda_f = kv.num("apparatus.lambda_f");
        s.apparatus.partner = kv.str("apparatus.partner");
        s.apparatus.partner_lambda = kv.num("apparatus.partner_lambda");
        if (s.apparatus.partner == "bimodal") {
            s.apparatus.partner_separation = kv.num("apparatus.partner_separation");
        }
    } else if (s.apparatus.type == "complete_opt") {
        s.apparatus.lambda_i = kv.num("apparatus.lambda_i");
        s.apparatus.lambda_f = kv.num("apparatus.lambda_f");
    } else if (s.apparatus.type == "min_disturb") {
        s.apparatus.lambda = kv.num("apparatus.lambda");
        s.apparatus.eta = kv.num("apparatus.eta");
        if (s.apparatus.eta < 0.0) throw ScenarioError("eta must be >= 0");
    } else if (s.apparatus.type == "file") {
        s.apparatus.path = kv.str("apparatus.path");
    } else {
        throw ScenarioError("unknown apparatus type: " + s.apparatus.type);
    }

    s.grid.n = std::size_t(kv.num_or("grid.n", 256.0));
    s.grid.half_width = kv.num_or("grid.half_width", 0.0);
    if (!is_power_of_two(s.grid.n)) throw ScenarioError("grid.n must be a power of two");

    if (kv.has("region.x_lo") || kv.has("region.x_hi") || kv.has("region.p_lo") ||
        kv.has("region.p_hi")) {
        OutcomeRegion reg;
        reg.x_lo = kv.num("region.x_lo");
        reg.x_hi = kv.num("region.x_hi");
        reg.p_lo = kv.num("region.p_lo");
        reg.p_hi = kv.num("region.p_hi");
        try {
            reg.validate();
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(e.what());
        }
        s.region = reg;
    }

    if (kv.has("sampling.count")) {
        s.sample_count = std::size_t(kv.num("sampling.count"));
    }
    s.seed = std::uint64_t(kv.num_or("sampling.seed", 0.0));
    kv.require_all_used();

    if ((s.system.type == "file" || s.apparatus.type == "file") &&
        s.grid.half_width <= 0.0) {
        throw ScenarioError("file-loaded states need an explicit grid.half_width");
    }
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    return parse_scenario(read_text_file(path));
}

BuiltScenario build_scenario(const Scenario& s) {
    BuiltScenario b;
    const double half = s.grid.half_width > 0.0 ? s.grid.half_width : auto_half_width(s);
    b.grid = GridSpec1D::centered(half, s.grid.n, s.hbar);

    const SystemSpec& sys = s.system;
    if (sys.type == "coherent" || sys.type == "squeezed") {
        b.psi = coherent_wavefunction({sys.mu_x, sys.mu_p, sys.lambda}, b.grid);
    } else if (sys.type == "cat") {
        WaveFunction1D w;
        w.grid = b.grid;
        w.amps.resize(b.grid.n);
        const double a = 0.5 * sys.separation;
        const double l2 = sys.lambda * sys.lambda;
        for (std::size_t i = 0; i < b.grid.n; ++i) {
            const double x = b.grid.x(i);
            w.amps[i] = std::exp(-0.5 * (x - a) * (x - a) / l2) +
                        std::exp(-0.5 * (x + a) * (x + a) / l2);
        }
        b.psi = normalize(std::move(w));
    } else if (sys.type == "cubic") {
        WaveFunction1D w;
        w.grid = b.grid;
        w.amps.resize(b.grid.n);
        const double l2 = sys.lambda * sys.lambda;
        for (std::size_t i = 0; i < b.grid.n; ++i) {
            const double x = b.grid.x(i);
            w.amps[i] = std::polar(std::exp(-0.5 * x * x / l2), sys.gamma * x * x * x);
        }
        b.psi = normalize(std::move(w));
    } else {
        b.psi = load_wavefunction_csv(sys.path, b.grid);
    }
    require_boundary_decay(b.psi, "build_scenario(system)");

    const ApparatusSpec& ap = s.apparatus;
    if (ap.type == "retro_opt") {
        b.ap = make_retrodictively_optimal(ap.lambda_i, build_free_factor(ap, b.grid));
    } else if (ap.type == "pred_opt") {
        b.ap = make_predictively_optimal(ap.lambda_f, build_free_factor(ap, b.grid));
    } else if (ap.type == "complete_opt") {
        b.ap = make_completely_optimal(ap.lambda_i, ap.lambda_f, b.grid);
    } else if (ap.type == "min_disturb") {
        b.ap = make_minimally_disturbing(ap.lambda, ap.eta, b.grid);
    } else {
        b.ap = make_apparatus_from_amplitudes(GridSpec2D{b.grid, b.grid, "eps_xi", "eps_xf"},
                                              load_amps_csv(ap.path, b.grid.n * b.grid.n));
    }

    if (ap.type == "min_disturb" && ap.eta > 0.0) {
        b.factorized = false;
    } else {
        try {
            auto [phi_i, phi_f] = apparatus_factors(b.ap);
            b.factorized = true;
            b.phi_i = std::move(phi_i);
            b.phi_f = std::move(phi_f);
        } catch (const NotFactorized&) {
            b.factorized = false;
        }
    }
    return b;
}

ScenarioResult run_scenario(const Scenario& s) {
    ScenarioResult out;
    out.built = build_scenario(s);
    const BuiltScenario& b = out.built;
    const double hbar = s.hbar;

    MeasurementReport& rep = out.report;
    rep.hbar = hbar;
    rep.system_type = s.system.type;
    rep.apparatus_type = s.apparatus.type;
    rep.errors = error_report(b.ap);

    add_bound_verdict(rep, "retrodictive_error_product",
                      rep.errors.dei_x * rep.errors.dei_p, 0.5 * hbar, 1e-9 * hbar);
    add_bound_verdict(rep, "predictive_error_product",
                      rep.errors.def_x * rep.errors.def_p, 0.5 * hbar, 1e-9 * hbar);
    add_bound_verdict(rep, "error_disturbance_eix_ddp",
                      rep.errors.dei_x * rep.errors.dd_p, 0.5 * hbar, 1e-9 * hbar);
    add_bound_verdict(rep, "error_disturbance_efx_ddp",
                      rep.errors.def_x * rep.errors.dd_p, 0.5 * hbar, 1e-9 * hbar);
    add_bound_verdict(rep, "error_disturbance_eip_ddx",
                      rep.errors.dei_p * rep.errors.dd_x, 0.5 * hbar, 1e-9 * hbar);
    add_bound_verdict(rep, "error_disturbance_efp_ddx",
                      rep.errors.def_p * rep.errors.dd_x, 0.5 * hbar, 1e-9 * hbar);

    out.wigner_initial = wigner_of_pure(b.psi);
    out.rho = outcome_distribution_convolution(b.psi, b.ap);
    const PhaseSpaceDist rho_direct = outcome_distribution_direct(b.psi, b.ap);
    rep.dual_route_l1 = l1_distance(out.rho, rho_direct);
    add_check(rep, "dual_route_rho", rep.dual_route_l1, 1e-6);
    add_check(rep, "rho_mass", std::abs(mass(out.rho) - 1.0), 1e-6);

    const PointerSpreads ps = pointer_variances(out.rho);
    rep.dmu_x = ps.dmu_x;
    rep.dmu_p = ps.dmu_p;
    add_bound_verdict(rep, "arthurs_kelly_pointer", ps.dmu_x * ps.dmu_p, hbar, 1e-6 * hbar);

    const double dd = rep.errors.dd_x * rep.errors.dd_p;
    const ApparatusSpec& ap = s.apparatus;
    if (ap.type == "retro_opt" || ap.type == "pred_opt" || ap.type == "complete_opt") {
        // Optimal measurements disturb by at least hbar.
        add_bound_verdict(rep, "disturbance_product_floor", dd, hbar, 1e-9 * hbar);
    }
    if (ap.type == "retro_opt" || ap.type == "complete_opt") {
        const double li = ap.lambda_i;
        add_identity_verdict(rep, "retro_saturation",
                             rep.errors.dei_x * rep.errors.dei_p - 0.5 * hbar, 1e-6 * hbar);
        add_check(rep, "husimi_identity", l1_distance(out.rho, husimi(b.psi, li)), 1e-6);
    }
    if (ap.type == "pred_opt" || ap.type == "complete_opt") {
        add_identity_verdict(rep, "pred_saturation",
                             rep.errors.def_x * rep.errors.def_p - 0.5 * hbar, 1e-6 * hbar);
    }
    if (ap.type == "complete_opt") {
        const double ratio = ap.lambda_f / ap.lambda_i;
        const double want =
            0.5 * hbar * std::sqrt(2.0 + ratio * ratio + 1.0 / (ratio * ratio));
        add_identity_verdict(rep, "complete_disturbance_formula", dd - want, 1e-6 * hbar);
    }
    if (ap.type == "min_disturb") {
        add_identity_verdict(rep, "min_disturbance_product",
                             dd - hbar * std::exp(-ap.eta), 1e-6 * hbar);
        add_identity_verdict(rep, "cosh_error_floor",
                             rep.errors.dei_x * rep.errors.dei_p -
                                 0.5 * hbar * std::cosh(ap.eta),
                             1e-6 * hbar);
        add_identity_verdict(rep, "cross_term_zero", rep.errors.cross_term_x, 1e-8 * hbar);
        add_check(rep, "cartwright_identity",
                  l1_distance(out.rho, smeared_wigner(b.psi, ap.lambda, ap.eta)), 1e-6);
    }

    if (s.region && b.factorized) {
        const DensityMatrix1D cond =
            conditional_state_factorized(b.psi, b.phi_i, b.phi_f, *s.region);
        add_check(rep, "conditional_trace", std::abs(dm_trace(cond) - 1.0), 1e-6);
        out.wigner_final = final_wigner_from_outcomes(out.rho, b.phi_f, *s.region);
        add_check(rep, "final_wigner_route",
                  l1_distance(*out.wigner_final, wigner_of_density(cond)), 1e-5);
        if (ap.type == "pred_opt") {
            const double cx = 0.5 * (s.region->x_lo + s.region->x_hi);
            const double cp = 0.5 * (s.region->p_lo + s.region->p_hi);
            const double fid =
                fidelity_with_pure(cond, coherent_wavefunction({cx, cp, ap.lambda_f}, b.grid));
            add_check(rep, "coherent_preparation_fidelity", 1.0 - fid, 0.01);
            const PhaseSpaceDist p_fn =
                anti_husimi_on_region(out.rho, *s.region, rep.errors);
            add_check(rep, "anti_husimi_reconstruction",
                      trace_distance(density_from_coherent_mixture(p_fn, ap.lambda_f, b.grid),
                                     cond),
                      1e-5);
        }
    }
    return out;
}

}  // namespace akmeter

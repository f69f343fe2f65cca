#include "akmeter/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace akmeter {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json errors_to_json(const ErrorReport& e) {
    ordered_json j;
    j["dei_x"] = e.dei_x;
    j["dei_p"] = e.dei_p;
    j["def_x"] = e.def_x;
    j["def_p"] = e.def_p;
    j["dd_x"] = e.dd_x;
    j["dd_p"] = e.dd_p;
    j["cross_term_x"] = e.cross_term_x;
    j["cross_term_p"] = e.cross_term_p;
    j["mean_ei_x"] = e.mean_ei_x;
    j["mean_ei_p"] = e.mean_ei_p;
    j["mean_ef_x"] = e.mean_ef_x;
    j["mean_ef_p"] = e.mean_ef_p;
    j["mean_d_x"] = e.mean_d_x;
    j["mean_d_p"] = e.mean_d_p;
    return j;
}

void errors_from_json(const ordered_json& j, ErrorReport& e) {
    e.dei_x = j.at("dei_x");
    e.dei_p = j.at("dei_p");
    e.def_x = j.at("def_x");
    e.def_p = j.at("def_p");
    e.dd_x = j.at("dd_x");
    e.dd_p = j.at("dd_p");
    e.cross_term_x = j.at("cross_term_x");
    e.cross_term_p = j.at("cross_term_p");
    e.mean_ei_x = j.at("mean_ei_x");
    e.mean_ei_p = j.at("mean_ei_p");
    e.mean_ef_x = j.at("mean_ef_x");
    e.mean_ef_p = j.at("mean_ef_p");
    e.mean_d_x = j.at("mean_d_x");
    e.mean_d_p = j.at("mean_d_p");
}

}  // namespace

bool MeasurementReport::all_pass() const {
    for (const auto& v : verdicts) {
        if (!v.pass) return false;
    }
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

std::string report_to_json(const MeasurementReport& r) {
    ordered_json j;
    j["hbar"] = r.hbar;
    j["system_type"] = r.system_type;
    j["apparatus_type"] = r.apparatus_type;
    j["errors"] = errors_to_json(r.errors);
    j["pointer"] = ordered_json{{"dmu_x", r.dmu_x}, {"dmu_p", r.dmu_p}};
    j["dual_route_l1"] = r.dual_route_l1;
    ordered_json verdicts = ordered_json::array();
    for (const auto& v : r.verdicts) {
        verdicts.push_back(
            ordered_json{{"name", v.name}, {"margin", v.margin}, {"pass", v.pass}});
    }
    j["verdicts"] = verdicts;
    ordered_json checks = ordered_json::array();
    for (const auto& c : r.checks) {
        checks.push_back(ordered_json{{"name", c.name},
                                      {"gap", c.gap},
                                      {"tolerance", c.tolerance},
                                      {"pass", c.pass}});
    }
    j["checks"] = checks;
    return j.dump(2) + "\n";
}

MeasurementReport report_from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    MeasurementReport r;
    r.hbar = j.at("hbar");
    r.system_type = j.at("system_type");
    r.apparatus_type = j.at("apparatus_type");
    errors_from_json(j.at("errors"), r.errors);
    r.errors.hbar = r.hbar;
    r.dmu_x = j.at("pointer").at("dmu_x");
    r.dmu_p = j.at("pointer").at("dmu_p");
    r.dual_route_l1 = j.at("dual_route_l1");
    for (const auto& v : j.at("verdicts")) {
        r.verdicts.push_back(Verdict{v.at("name"), v.at("margin"), v.at("pass")});
    }
    for (const auto& c : j.at("checks")) {
        r.checks.push_back(
            IdentityCheck{c.at("name"), c.at("gap"), c.at("tolerance"), c.at("pass")});
    }
    return r;
}

std::string report_to_csv(const MeasurementReport& r) {
    std::ostringstream out;
    out << "key,value\n";
    out << "hbar," << fmt17(r.hbar) << "\n";
    out << "system_type," << r.system_type << "\n";
    out << "apparatus_type," << r.apparatus_type << "\n";
    const ordered_json je = errors_to_json(r.errors);
    for (const auto& [k, v] : je.items()) {
        out << "errors." << k << "," << fmt17(v.get<double>()) << "\n";
    }
    out << "pointer.dmu_x," << fmt17(r.dmu_x) << "\n";
    out << "pointer.dmu_p," << fmt17(r.dmu_p) << "\n";
    out << "dual_route_l1," << fmt17(r.dual_route_l1) << "\n";
    for (const auto& v : r.verdicts) {
        out << "verdict." << v.name << ".margin," << fmt17(v.margin) << "\n";
        out << "verdict." << v.name << ".pass," << (v.pass ? 1 : 0) << "\n";
    }
    for (const auto& c : r.checks) {
        out << "check." << c.name << ".gap," << fmt17(c.gap) << "\n";
        out << "check." << c.name << ".tolerance," << fmt17(c.tolerance) << "\n";
        out << "check." << c.name << ".pass," << (c.pass ? 1 : 0) << "\n";
    }
    return out.str();
}

MeasurementReport report_from_csv(const std::string& text) {
    MeasurementReport r;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    auto verdict_slot = [&r](const std::string& name) -> Verdict& {
        for (auto& v : r.verdicts) {
            if (v.name == name) return v;
        }
        r.verdicts.push_back(Verdict{name, 0.0, false});
        return r.verdicts.back();
    };
    auto check_slot = [&r](const std::string& name) -> IdentityCheck& {
        for (auto& c : r.checks) {
            if (c.name == name) return c;
        }
        r.checks.push_back(IdentityCheck{name, 0.0, 0.0, false});
        return r.checks.back();
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError("report_from_csv: malformed row");
        const std::string key = line.substr(0, comma);
        const std::string val = line.substr(comma + 1);
        if (key == "hbar") {
            r.hbar = std::stod(val);
        } else if (key == "system_type") {
            r.system_type = val;
        } else if (key == "apparatus_type") {
            r.apparatus_type = val;
        } else if (key.rfind("errors.", 0) == 0) {
            const std::string f = key.substr(7);
            ErrorReport& e = r.errors;
            double* slot = nullptr;
            if (f == "dei_x") slot = &e.dei_x;
            else if (f == "dei_p") slot = &e.dei_p;
            else if (f == "def_x") slot = &e.def_x;
            else if (f == "def_p") slot = &e.def_p;
            else if (f == "dd_x") slot = &e.dd_x;
            else if (f == "dd_p") slot = &e.dd_p;
            else if (f == "cross_term_x") slot = &e.cross_term_x;
            else if (f == "cross_term_p") slot = &e.cross_term_p;
            else if (f == "mean_ei_x") slot = &e.mean_ei_x;
            else if (f == "mean_ei_p") slot = &e.mean_ei_p;
            else if (f == "mean_ef_x") slot = &e.mean_ef_x;
            else if (f == "mean_ef_p") slot = &e.mean_ef_p;
            else if (f == "mean_d_x") slot = &e.mean_d_x;
            else if (f == "mean_d_p") slot = &e.mean_d_p;
            if (!slot) throw IoError("report_from_csv: unknown error field " + f);
            *slot = std::stod(val);
        } else if (key == "pointer.dmu_x") {
            r.dmu_x = std::stod(val);
        } else if (key == "pointer.dmu_p") {
            r.dmu_p = std::stod(val);
        } else if (key == "dual_route_l1") {
            r.dual_route_l1 = std::stod(val);
        } else if (key.rfind("verdict.", 0) == 0) {
            const auto dot = key.rfind('.');
            const std::string name = key.substr(8, dot - 8);
            const std::string field = key.substr(dot + 1);
            Verdict& v = verdict_slot(name);
            if (field == "margin") {
                v.margin = std::stod(val);
            } else {
                v.pass = (val == "1");
            }
        } else if (key.rfind("check.", 0) == 0) {
            const auto dot = key.rfind('.');
            const std::string name = key.substr(6, dot - 6);
            const std::string field = key.substr(dot + 1);
            IdentityCheck& c = check_slot(name);
            if (field == "gap") {
                c.gap = std::stod(val);
            } else if (field == "tolerance") {
                c.tolerance = std::stod(val);
            } else {
                c.pass = (val == "1");
            }
        } else {
            throw IoError("report_from_csv: unknown key " + key);
        }
    }
    r.errors.hbar = r.hbar;
    return r;
}

void emit_report(const MeasurementReport& r, const std::string& format,
                 const std::string& path) {
    if (format == "json") {
        write_text_file(path, report_to_json(r));
    } else if (format == "csv") {
        write_text_file(path, report_to_csv(r));
    } else {
        throw IoError("emit_report: unknown format " + format);
    }
}

std::string distribution_to_csv(const PhaseSpaceDist& d) {
    std::ostringstream out;
    out << "mu_x,mu_p,density\n";
    for (std::size_t a = 0; a < d.x_axis.n; ++a) {
        const std::string xs = fmt17(d.x_axis.x(a));
        for (std::size_t r = 0; r < d.p_axis.n; ++r) {
            out << xs << "," << fmt17(d.p_axis.x(r)) << "," << fmt17(d.at(a, r)) << "\n";
        }
    }
    return out.str();
}

void emit_distribution_csv(const PhaseSpaceDist& d, const std::string& path) {
    write_text_file(path, distribution_to_csv(d));
}

PhaseSpaceDist distribution_from_csv(const std::string& text, const GridSpec1D& x_axis,
                                     const GridSpec1D& p_axis) {
    PhaseSpaceDist d;
    d.x_axis = x_axis;
    d.p_axis = p_axis;
    d.values.assign(x_axis.n * p_axis.n, 0.0);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (line != "mu_x,mu_p,density") {
        throw IoError("distribution_from_csv: missing header");
    }
    std::size_t idx = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos || idx >= d.values.size()) {
            throw IoError("distribution_from_csv: malformed row");
        }
        d.values[idx++] = std::stod(line.substr(c2 + 1));
    }
    if (idx != d.values.size()) throw IoError("distribution_from_csv: row count mismatch");
    return d;
}

std::string samples_to_csv(const std::vector<MeasurementOutcomeSample>& samples) {
    std::ostringstream out;
    out << "mu_x,mu_p\n";
    for (const auto& s : samples) {
        out << fmt17(s.mu_x) << "," << fmt17(s.mu_p) << "\n";
    }
    return out.str();
}

void emit_samples_csv(const std::vector<MeasurementOutcomeSample>& samples,
                      const std::string& path) {
    write_text_file(path, samples_to_csv(samples));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace akmeter

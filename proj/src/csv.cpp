#include "polcav/csv.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "polcav/config.hpp"
#include "polcav/errors.hpp"
#include "polcav/version.hpp"

namespace polcav {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out.precision(12);
    return out;
}

// Header block shared by every CSV: version plus the resolved parameter set
// in config syntax, so a file is self-describing and reproducible.
void write_header(std::ofstream& out, const SystemParams& params) {
    out << "# polcav " << kVersion << "\n";
    std::istringstream cfg(params_to_config(params));
    for (std::string line; std::getline(cfg, line);)
        out << "# " << line << "\n";
}

// CSV column name for a sweep axis, with the unit suffix spelled out.
std::string axis_column(const std::string& axis) {
    if (axis == "f_laser")
        return "laser_detuning_ghz";
    if (axis == "qd_common_offset")
        return "qd_offset_ghz";
    if (axis == "theta_out" || axis == "theta_in")
        return axis + "_deg";
    if (!axis.empty() && axis[0] == 'f')
        return axis + "_ghz";
    return axis + "_per_ns";
}

void write_value(std::ofstream& out, double v) {
    if (std::isfinite(v))
        out << v;
    else
        out << "nan";
}

std::string format_fwhm(double fwhm_ps) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", fwhm_ps);
    return buf;
}

} // namespace

void write_map_csv(const std::string& path, const SweepSpec& spec,
                   const SweepResult& res) {
    std::ofstream out = open_out(path);
    write_header(out, spec.base);
    const bool g2 = spec.scenario == Scenario::G2Map;
    out << axis_column(spec.axis0.name) << "," << axis_column(spec.axis1.name);
    out << (g2 ? ",g2_zero" : ",T_raw,T_colnorm") << "\n";
    const std::size_t n1 = res.a1.size();
    for (std::size_t i = 0; i < res.a0.size(); ++i) {
        for (std::size_t j = 0; j < n1; ++j) {
            out << res.a0[i] << "," << res.a1[j] << ",";
            if (g2) {
                write_value(out, res.g2[i * n1 + j]);
            } else {
                write_value(out, res.T_raw[i * n1 + j]);
                out << ",";
                write_value(out, res.T_colnorm[i * n1 + j]);
            }
            out << "\n";
        }
    }
}

void write_pn_csv(const std::string& path, const SweepSpec& spec,
                  const SweepResult& res) {
    std::ofstream out = open_out(path);
    write_header(out, spec.base);
    out << "theta_out_deg";
    for (int n = 0; n < spec.base.n_fock; ++n)
        out << ",p" << n;
    out << "\n";
    for (std::size_t j = 0; j < res.a1.size(); ++j) {
        out << res.a1[j];
        const std::vector<double>& p = res.pn[j];
        for (int n = 0; n < spec.base.n_fock; ++n) {
            out << ",";
            write_value(out, n < static_cast<int>(p.size())
                                 ? p[n]
                                 : std::numeric_limits<double>::quiet_NaN());
        }
        out << "\n";
    }
}

void write_trace_csv(const std::string& path, const SystemParams& params,
                     double theta_out, const CorrelationTrace& raw,
                     const std::vector<CorrelationTrace>& convolved) {
    for (const CorrelationTrace& c : convolved) {
        if (!c.convolved_with)
            throw InvalidParams("trace output: convolved trace lacks a width");
        if (c.tau.size() != raw.tau.size())
            throw DimensionMismatch("trace output: grids differ in length");
    }
    std::ofstream out = open_out(path);
    write_header(out, params);
    out << "# theta_out_deg = " << theta_out << "\n";
    out << "tau_ns,g2_raw";
    for (const CorrelationTrace& c : convolved)
        out << ",g2_conv_" << format_fwhm(*c.convolved_with) << "ps";
    out << "\n";
    for (std::size_t i = 0; i < raw.tau.size(); ++i) {
        out << raw.tau[i] << ",";
        write_value(out, raw.g2[i]);
        for (const CorrelationTrace& c : convolved) {
            out << ",";
            write_value(out, c.g2[i]);
        }
        out << "\n";
    }
}

void write_kappa_csv(const std::string& path, const SystemParams& base,
                     double target_nbar, const std::vector<KappaPoint>& pts) {
    std::ofstream out = open_out(path);
    write_header(out, base);
    out << "# target_nbar = " << target_nbar << "\n";
    out << "kappa_per_ns,eta_per_ns,cooperativity,g2_max,at_laser_ghz,"
           "at_theta_deg\n";
    for (const KappaPoint& p : pts) {
        SystemParams at = base;
        at.kappa = p.kappa;
        at.eta = p.eta;
        out << p.kappa << "," << p.eta << "," << cooperativity(at) << ",";
        write_value(out, p.g2_max);
        out << "," << p.at_laser << "," << p.at_theta << "\n";
    }
}

void write_special_angles_csv(const std::string& path,
                              const SystemParams& params,
                              const SpecialAngles& sa) {
    std::ofstream out = open_out(path);
    write_header(out, params);
    out << "transition,theta_out_deg,laser_detuning_ghz,t_min\n";
    out << "x," << sa.theta_x << "," << sa.f_x << "," << sa.t_x << "\n";
    out << "y," << sa.theta_y << "," << sa.f_y << "," << sa.t_y << "\n";
}

void write_fit_json(const std::string& path, const FitResult& fit,
                    const std::vector<std::string>& free_fields) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["free"] = free_fields;
    j["params"]["kappa_per_ns"] = fit.params.kappa;
    j["params"]["g_x_per_ns"] = fit.params.g_x;
    j["params"]["g_y_per_ns"] = fit.params.g_y;
    j["params"]["gamma_par_per_ns"] = fit.params.gamma_par;
    j["params"]["gamma_star_per_ns"] = fit.params.gamma_star;
    j["params"]["f_qd_x_ghz"] = fit.params.f_qd_x;
    j["params"]["f_qd_y_ghz"] = fit.params.f_qd_y;
    j["params"]["f_cav_x_ghz"] = fit.params.f_cav_x;
    j["params"]["f_cav_y_ghz"] = fit.params.f_cav_y;
    j["per_trace_scales"] = fit.per_trace_scales;
    j["sse"] = fit.sse;
    j["n_evals"] = fit.n_evals;
    j["converged"] = fit.converged;
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
}

TransmissionDataset load_transmission_csv(const std::string& path,
                                          double theta_in) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");

    TransmissionDataset ds;
    ds.theta_in = theta_in;
    // Traces keyed by theta_out in order of first appearance.
    std::map<long long, std::size_t> index;

    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#')
            continue;
        if (!header_seen) {
            // Column header row; require the expected layout.
            if (line.find("theta_out_deg") == std::string::npos ||
                line.find("transmission") == std::string::npos)
                throw IoError(path + ":" + std::to_string(lineno) +
                              ": expected header "
                              "'theta_out_deg,detuning_ghz,transmission'");
            header_seen = true;
            continue;
        }
        double theta = 0, det = 0, tr = 0;
        char extra = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf %c", &theta, &det, &tr,
                        &extra) != 3)
            throw IoError(path + ":" + std::to_string(lineno) +
                          ": expected 'theta_out,detuning,transmission'");
        const long long key = std::llround(theta * 1e6);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, ds.traces.size()).first;
            ds.traces.push_back(TransmissionTrace{theta, {}, {}});
        }
        TransmissionTrace& t = ds.traces[it->second];
        t.detuning.push_back(det);
        t.transmission.push_back(tr);
    }
    if (!header_seen)
        throw IoError(path + ": no data rows found");
    ds.validate();
    return ds;
}

} // namespace polcav

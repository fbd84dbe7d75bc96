#include "polcav/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "polcav/sweeps.hpp"

namespace polcav {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

const std::set<std::string>& param_keys() {
    static const std::set<std::string> keys = {
        "preset",          "kappa_per_ns",     "g_per_ns",
        "g_x_per_ns",      "g_y_per_ns",       "gamma_par_per_ns",
        "gamma_star_per_ns", "eta_per_ns",     "target_nbar",
        "f_cav_x_ghz",     "f_cav_y_ghz",      "f_qd_x_ghz",
        "f_qd_y_ghz",      "f_laser_ghz",      "theta_in_deg",
        "n_fock",          "qd_x_enabled",     "qd_y_enabled"};
    return keys;
}

} // namespace

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str(), path);
}

Config Config::from_string(const std::string& text, const std::string& origin) {
    Config c;
    c.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": empty key or value");
        if (c.kv_.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": duplicate key '" + key + "'");
        c.kv_[key] = val;
    }
    return c;
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get_str(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end())
        throw ConfigError("missing required field '" + key + "' in " + origin_);
    return it->second;
}

std::string Config::get_str(const std::string& key,
                            const std::string& dflt) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string s = get_str(key);
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("field '" + key + "' is not a number: " + s);
    }
    if (pos != s.size())
        throw ConfigError("field '" + key + "' has trailing junk: " + s);
    return v;
}

double Config::get_double(const std::string& key, double dflt) const {
    return has(key) ? get_double(key) : dflt;
}

int Config::get_int(const std::string& key) const {
    const double v = get_double(key);
    if (v != std::floor(v))
        throw ConfigError("field '" + key + "' must be an integer");
    return int(v);
}

int Config::get_int(const std::string& key, int dflt) const {
    return has(key) ? get_int(key) : dflt;
}

bool Config::get_bool(const std::string& key, bool dflt) const {
    if (!has(key)) return dflt;
    const std::string s = get_str(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("field '" + key + "' must be a boolean, got: " + s);
}

std::vector<double> Config::get_double_list(const std::string& key) const {
    const std::string s = get_str(key);
    std::vector<double> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty())
            throw ConfigError("field '" + key + "' has an empty list entry");
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("field '" + key + "' has a non-numeric entry: " +
                              tok);
        }
    }
    if (out.empty())
        throw ConfigError("field '" + key + "' is an empty list");
    return out;
}

void Config::set(const std::string& key, const std::string& value) {
    kv_[key] = value;
}

void Config::require_known(const std::set<std::string>& scenario_keys) const {
    for (const auto& [k, v] : kv_) {
        if (param_keys().count(k) || scenario_keys.count(k)) continue;
        throw ConfigError("unknown config key '" + k + "' in " + origin_);
    }
}

SystemParams Config::system_params() const {
    SystemParams p;
    if (has("preset")) {
        const std::string name = get_str("preset");
        if (name == "qd_a") p = preset_qd_a();
        else if (name == "qd_b") p = preset_qd_b();
        else throw ConfigError("unknown preset '" + name + "'");
    }
    p.kappa = get_double("kappa_per_ns", p.kappa);
    if (has("g_per_ns")) { p.g_x = get_double("g_per_ns"); p.g_y = p.g_x; }
    p.g_x = get_double("g_x_per_ns", p.g_x);
    p.g_y = get_double("g_y_per_ns", p.g_y);
    p.gamma_par = get_double("gamma_par_per_ns", p.gamma_par);
    p.gamma_star = get_double("gamma_star_per_ns", p.gamma_star);
    p.f_cav_x = get_double("f_cav_x_ghz", p.f_cav_x);
    p.f_cav_y = get_double("f_cav_y_ghz", p.f_cav_y);
    p.f_qd_x = get_double("f_qd_x_ghz", p.f_qd_x);
    p.f_qd_y = get_double("f_qd_y_ghz", p.f_qd_y);
    p.f_laser = get_double("f_laser_ghz", p.f_laser);
    p.theta_in = get_double("theta_in_deg", p.theta_in);
    p.n_fock = get_int("n_fock", p.n_fock);
    p.qd_x_enabled = get_bool("qd_x_enabled", p.qd_x_enabled);
    p.qd_y_enabled = get_bool("qd_y_enabled", p.qd_y_enabled);
    if (has("eta_per_ns") && has("target_nbar"))
        throw ConfigError("give either eta_per_ns or target_nbar, not both");
    if (has("eta_per_ns"))
        p.eta = get_double("eta_per_ns");
    else if (has("target_nbar"))
        p.eta = calibrate_eta(p.kappa, get_double("target_nbar"));
    p.validate();
    return p;
}

std::string params_to_config(const SystemParams& p) {
    std::ostringstream out;
    out.precision(17);
    out << "kappa_per_ns = " << p.kappa << "\n"
        << "g_x_per_ns = " << p.g_x << "\n"
        << "g_y_per_ns = " << p.g_y << "\n"
        << "gamma_par_per_ns = " << p.gamma_par << "\n"
        << "gamma_star_per_ns = " << p.gamma_star << "\n"
        << "eta_per_ns = " << p.eta << "\n"
        << "f_cav_x_ghz = " << p.f_cav_x << "\n"
        << "f_cav_y_ghz = " << p.f_cav_y << "\n"
        << "f_qd_x_ghz = " << p.f_qd_x << "\n"
        << "f_qd_y_ghz = " << p.f_qd_y << "\n"
        << "f_laser_ghz = " << p.f_laser << "\n"
        << "theta_in_deg = " << p.theta_in << "\n"
        << "n_fock = " << p.n_fock << "\n"
        << "qd_x_enabled = " << (p.qd_x_enabled ? "true" : "false") << "\n"
        << "qd_y_enabled = " << (p.qd_y_enabled ? "true" : "false") << "\n";
    return out.str();
}

} // namespace polcav

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "polcav/model.hpp"

namespace polcav {

// Flat key = value configuration text with '#' comments.  Keys carry their
// units (kappa_per_ns, f_qd_x_ghz, theta_in_deg) so a value can never be
// read in the wrong unit silently.
class Config {
public:
    static Config load(const std::string& path);
    static Config from_string(const std::string& text,
                              const std::string& origin = "<string>");

    bool has(const std::string& key) const;
    std::string get_str(const std::string& key) const;
    std::string get_str(const std::string& key, const std::string& dflt) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double dflt) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int dflt) const;
    bool get_bool(const std::string& key, bool dflt) const;
    std::vector<double> get_double_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value);

    // Errors on any key outside the known set (parameter keys plus the given
    // scenario keys); typos in unit suffixes must not pass silently.
    void require_known(const std::set<std::string>& scenario_keys) const;

    // Preset (qd_a / qd_b) first, then explicit per-field overrides; eta may
    // alternatively be given via target_nbar.
    SystemParams system_params() const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
    std::string origin_;
};

// Fully resolved parameter listing in config syntax, suitable for the CSV
// header comment and for re-running a job.
std::string params_to_config(const SystemParams& p);

} // namespace polcav

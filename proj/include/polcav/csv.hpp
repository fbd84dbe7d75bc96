#pragma once

#include <string>
#include <vector>

#include "polcav/fit.hpp"
#include "polcav/sweeps.hpp"

namespace polcav {

// All writers emit '#'-prefixed header comments carrying the code version and
// the fully resolved parameter set, so any file can be regenerated exactly.

void write_map_csv(const std::string& path, const SweepSpec& spec,
                   const SweepResult& res);

void write_pn_csv(const std::string& path, const SweepSpec& spec,
                  const SweepResult& res);

void write_trace_csv(const std::string& path, const SystemParams& params,
                     double theta_out, const CorrelationTrace& raw,
                     const std::vector<CorrelationTrace>& convolved);

void write_kappa_csv(const std::string& path, const SystemParams& base,
                     double target_nbar, const std::vector<KappaPoint>& pts);

void write_special_angles_csv(const std::string& path,
                              const SystemParams& params,
                              const SpecialAngles& sa);

void write_fit_json(const std::string& path, const FitResult& fit,
                    const std::vector<std::string>& free_fields);

// Long-format input for the fitter: theta_out_deg, detuning_ghz, transmission.
TransmissionDataset load_transmission_csv(const std::string& path,
                                          double theta_in);

} // namespace polcav

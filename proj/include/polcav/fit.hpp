#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polcav/model.hpp"

namespace polcav {

struct TransmissionTrace {
    double theta_out = 0.0;          // degrees
    std::vector<double> detuning;    // GHz, strictly increasing
    std::vector<double> transmission; // normalized, [0, 1.05]
};

struct TransmissionDataset {
    std::vector<TransmissionTrace> traces;
    double theta_in = 45.0;

    void validate() const;
};

struct FitOptions {
    int max_evals = 4000; // per start
    int restarts = 3;     // seeded restarts after the initial run
    double ftol = 1e-10;
    double xtol = 1e-7;
    std::uint64_t seed = 12345;
    int n_fock = 2; // forward-model truncation; transmission converges fast
};

struct FitResult {
    SystemParams params;
    std::vector<double> per_trace_scales;
    double sse = 0.0;
    int n_evals = 0;
    bool converged = false;
};

// Sum of squared residuals (s_t * T_model - T_data)^2 with the per-trace
// amplitude scales s_t profiled out in closed form.  Model evaluations are
// shared across traces at equal detunings.
double objective(const SystemParams& p, const TransmissionDataset& data,
                 std::vector<double>* scales_out = nullptr);

// Derivative-free simplex minimization over the named free fields ("g" ties
// g_x = g_y), with seeded restarts around the best point found.
FitResult fit_parameters(const TransmissionDataset& data,
                         const SystemParams& init,
                         const std::vector<std::string>& free_fields,
                         const FitOptions& opts = {});

// Synthetic dataset from a known parameter set: each trace normalized to a
// 0.95 peak, optionally with additive Gaussian noise (seeded, deterministic).
TransmissionDataset synth_dataset(const SystemParams& truth,
                                  const std::vector<double>& theta_outs,
                                  double f_min, double f_max, int n_points,
                                  double noise_sigma, std::uint64_t seed);

} // namespace polcav

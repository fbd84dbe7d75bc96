#pragma once

#include <string>
#include <vector>

#include "polcav/observables.hpp"

namespace polcav {

// Drive amplitude giving an empty-cavity on-resonance co-polarized mean
// photon number of target_nbar: eta = kappa * sqrt(target_nbar).
double calibrate_eta(double kappa, double target_nbar);

struct AxisSpec {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    int n_points = 2;

    void validate() const;
    std::vector<double> values() const;
};

// Set the named parameter field; "qd_common_offset" shifts both QD lines
// together (preserving the fine-structure splitting) and "g" sets both
// couplings.  "theta_out" is not a parameter axis and is rejected here.
SystemParams apply_axis(SystemParams p, const std::string& name, double value);

enum class Scenario {
    TransmissionMap, // param axis x theta_out -> T_raw, T_colnorm
    G2Map,           // param axis x theta_out -> g2_zero
    PnVsTheta,       // theta_out axis -> P_0..P_{n_fock-1}
};

struct SweepSpec {
    Scenario scenario = Scenario::TransmissionMap;
    SystemParams base;
    AxisSpec axis0; // parameter axis (ignored for PnVsTheta)
    AxisSpec axis1; // must be "theta_out" for the map scenarios
};

struct SweepResult {
    std::vector<double> a0; // axis0 values (empty for PnVsTheta)
    std::vector<double> a1; // theta_out values
    // Row-major [i0 * a1.size() + i1]; NaN marks a failed cell.
    std::vector<double> T_raw;
    std::vector<double> T_colnorm; // each fixed-theta column / its maximum
    std::vector<double> g2;
    std::vector<std::vector<double>> pn; // PnVsTheta: [i_theta][n]
    std::vector<double> residuals;       // per axis0 point
    int n_failures = 0;
    int n_fock = 0;
};

// Evaluates the steady state once per parameter-axis point and all theta_out
// observables from it; deterministic and safe to parallelize over points.
SweepResult run_sweep(const SweepSpec& spec, int n_threads = 0);

struct G2Max {
    double g2 = 0.0;
    double axis0 = 0.0;
    double theta = 0.0;
};

// Maximum of g2(0) over an (axis0 x theta_out) grid, then optional local
// refinement stages that shrink the grid around the running maximum.
// Cells with transmission below kIntensityFloor are skipped; min_numerator
// additionally skips cells whose two-photon numerator does not exceed it,
// which masks Fock-truncation noise near dark analyzer settings (calibrate
// it against the crossed-port numerator of a matched empty cavity).
G2Max g2_grid_max(const SystemParams& base, const std::string& axis0_name,
                  const std::vector<double>& axis0_values,
                  const std::vector<double>& thetas,
                  double min_numerator = 0.0);
G2Max g2_refined_max(const SystemParams& base, const std::string& axis0_name,
                     const AxisSpec& axis0, const AxisSpec& theta,
                     int refine_stages = 2, double min_numerator = 0.0);

struct KappaPoint {
    double kappa = 0.0;
    double eta = 0.0;
    double g2_max = 0.0;
    double at_laser = 0.0;
    double at_theta = 0.0;
};

// Constant-output-flux cavity study: for each kappa, recalibrate eta to the
// target mean photon number and maximize g2(0) over laser detuning x theta_out.
std::vector<KappaPoint> kappa_sweep(const SystemParams& base,
                                    const std::vector<double>& kappas,
                                    double target_nbar,
                                    const AxisSpec& laser_axis,
                                    const AxisSpec& theta_axis,
                                    int refine_stages = 2);

struct StudyPoint {
    double value = 0.0;
    double g2_max = 0.0;
    double at_offset = 0.0;
    double at_theta = 0.0;
};

// One-parameter sensitivity study: for each value of the named parameter,
// the refined maximum of g2(0) over qd_common_offset x theta_out.
std::vector<StudyPoint> param_study(const SystemParams& base,
                                    const std::string& param,
                                    const std::vector<double>& values,
                                    const AxisSpec& offset_axis,
                                    const AxisSpec& theta_axis,
                                    int refine_stages = 2);

struct SpecialAngles {
    double theta_x = 0.0; // polarizer angle of the minimum near the X line
    double f_x = 0.0;     // laser offset of that minimum, GHz
    double t_x = 0.0;     // transmission at the minimum
    double theta_y = 0.0;
    double f_y = 0.0;
    double t_y = 0.0;
};

// Locates the transmission minima near the two QD lines over a laser x
// theta_out grid and refines both coordinates by quadratic interpolation.
// Throws NotFound when a transition is disabled/uncoupled or a minimum has
// no interior neighborhood to refine in.
SpecialAngles find_special_angles(const SystemParams& base,
                                  const AxisSpec& theta_axis,
                                  const AxisSpec& laser_axis,
                                  double window_ghz = 1.0);

} // namespace polcav

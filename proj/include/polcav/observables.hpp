#pragma once

#include <optional>
#include <vector>

#include "polcav/solver.hpp"

namespace polcav {

// Detection mode behind the output polarizer: a = e1 a_X + e2 a_Y.
struct PolarizedMode {
    JonesVector jones;
    Operator op;  // a
    Operator op2; // a a
};

PolarizedMode polarized_mode(const SpaceLayout& layout, const JonesVector& jones);

struct CorrelationTrace {
    std::vector<double> tau; // ns, symmetric grid -tau_max..tau_max
    std::vector<double> g2;
    std::optional<double> convolved_with; // pair-response FWHM in ps
};

struct PhotonNumberDist {
    std::vector<double> p; // P_0 .. P_{n_fock-1}
    double theta_out = 0.0;
};

inline constexpr double kIntensityFloor = 1e-12;

// T = Tr(rho a^dag a) for the polarized detection mode.
double transmission(const DensityMatrix& rho0, const PolarizedMode& mode);

// Tr(rho a^dag a^dag a a) / T^2.
double g2_zero(const DensityMatrix& rho0, const PolarizedMode& mode,
               double intensity_floor = kIntensityFloor);

// Raw ingredients of g2(0) for one detection mode, with no intensity floor:
// T, the two-photon numerator Tr(rho a^dag a^dag a a), and their ratio
// numerator / T^2 (NaN when T == 0). Lets callers apply their own masking,
// e.g. a numerator floor calibrated against the Fock-truncation noise of a
// matched empty cavity.
struct G2Cell {
    double transmission = 0.0;
    double numerator = 0.0;
    double g2 = 0.0;
};

G2Cell g2_cell(const DensityMatrix& rho0, const PolarizedMode& mode);

// g2(tau) = Tr[a^dag a e^{L tau}(a rho a^dag)] / T^2 for tau >= 0, reflected
// onto the symmetric grid (the stationary correlator is even in tau).
CorrelationTrace g2_trace(const Liouvillian& L, const DensityMatrix& rho0,
                          const PolarizedMode& mode, const PropagationSpec& spec,
                          double intensity_floor = kIntensityFloor);

// Reduced photonic density matrix (both TLS factors traced out), indexed by
// n_x * n_fock + n_y.
Eigen::MatrixXcd photonic_reduced(const Operator& rho, const SpaceLayout& layout);

// Joint projection onto n detected-polarization photons, summed over the
// rejected-polarization photon number m:
//   P_n = sum_m 1/(n! m!) <0|b_det^n b_rej^m rho_ph b_det^dag^n b_rej^dag^m|0>
// with b_det = cos(theta) a_X + sin(theta) a_Y and b_rej the orthogonal mode,
// evaluated on the intracavity state.
PhotonNumberDist photon_number_dist(const DensityMatrix& rho0,
                                    const SpaceLayout& layout,
                                    double theta_out_deg);

// Low-drive two-photon estimate 2 P_2 / P_1^2.
double g2_lowdrive_check(const PhotonNumberDist& dist,
                         double intensity_floor = kIntensityFloor);

// Convolution with a unit-area Gaussian pair response of the given FWHM;
// the trace is extended by its asymptotic value 1 beyond the grid edges.
CorrelationTrace convolve_detector(const CorrelationTrace& trace,
                                   double jitter_fwhm_ps);

} // namespace polcav

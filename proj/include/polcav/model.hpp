#pragma once

#include <complex>

#include <Eigen/Sparse>

#include "polcav/hilbert.hpp"

namespace polcav {

// GHz -> rad/ns for detunings; decay/coupling rates are specified in 1/ns
// and enter the generator directly.
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct JonesVector {
    cplx e1{1.0, 0.0};
    cplx e2{0.0, 0.0};

    // Linear polarization at the given angle from the X axis.
    static JonesVector from_angle_deg(double theta_deg);
    void validate() const; // |e1|^2 + |e2|^2 = 1 within 1e-12
};

struct SystemParams {
    double kappa = 69.0;      // cavity intensity decay rate, 1/ns
    double g_x = 15.0;        // QD-cavity coupling, X transition, 1/ns
    double g_y = 15.0;        // QD-cavity coupling, Y transition, 1/ns
    double gamma_par = 3.5;   // QD relaxation rate, 1/ns
    double gamma_star = 6.0;  // pure dephasing rate, 1/ns
    double f_cav_x = 0.0;     // cavity resonance offset, GHz
    double f_cav_y = 0.0;     // cavity resonance offset, GHz
    double f_qd_x = -1.5;     // QD X transition offset, GHz
    double f_qd_y = 1.3;      // QD Y transition offset, GHz
    double f_laser = 0.0;     // laser offset, GHz
    double eta = 6.9;         // drive amplitude, 1/ns
    double theta_in = 45.0;   // input polarizer angle, degrees
    int n_fock = 4;           // Fock levels per mode
    bool qd_x_enabled = true; // false drops the transition's Hamiltonian terms
    bool qd_y_enabled = true;

    void validate() const;
    JonesVector input_jones() const;
};

// Device parameter sets used throughout; eta set for an empty-cavity
// on-resonance mean photon number of 0.01.
SystemParams preset_qd_a();
SystemParams preset_qd_b();

using SparseSuper = Eigen::SparseMatrix<cplx>;

// Generator of d(vec rho)/dt, column-stacked: vec(A rho B) = (B^T (x) A) vec(rho).
struct Liouvillian {
    int dim = 0; // Hilbert-space dimension; matrix is dim^2 x dim^2
    SparseSuper mat;
};

// Rotating-frame Hamiltonian: detuning terms for both modes and enabled
// transitions, excitation-exchange coupling, and the polarized coherent drive.
Operator build_hamiltonian(const SystemParams& p);

// -i[H, .] plus, for each transition j, cavity decay (kappa/2) D[a_j],
// relaxation (gamma_par/2) D[sigma_j], and pure dephasing
// (gamma_star/4) D[sigma_z_j], with D[o]rho = 2 o rho o^dag - o^dag o rho
// - rho o^dag o and sigma_z eigenvalues +-1/2.  Under this convention the
// TLS coherence decays at gamma_par/2 + gamma_star/4.
Liouvillian build_liouvillian(const SystemParams& p);

// g^2 / (kappa * (gamma_par/2 + gamma_star)), with g = g_x.
double cooperativity(const SystemParams& p);

} // namespace polcav

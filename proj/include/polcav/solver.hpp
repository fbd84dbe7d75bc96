#pragma once

#include <vector>

#include <Eigen/Dense>

#include "polcav/model.hpp"

namespace polcav {

struct SolverOptions {
    // Row of the singular system replaced by the trace constraint.  Trace
    // preservation (vec(I)^T L = 0) makes exactly the diagonal rows of the
    // vectorized system linearly dependent, so this must be a diagonal
    // position: a multiple of dim + 1.
    int replaced_row = 0;
    double residual_tol = 1e-9;
    // Above this superoperator dimension the direct factorization is skipped
    // in favor of the preconditioned iterative solver.
    int direct_max_dim2 = 300000;
    int max_iterations = 20000;
};

struct DensityMatrix {
    Operator mat;
    double residual = 0.0; // ||L vec(rho)|| / ||vec(rho)||
    double min_eig = 0.0;  // smallest eigenvalue, reported not clipped

    double trace_error() const;
    double hermiticity_error() const;
};

struct PropagationSpec {
    double tau_max = 5.0; // ns
    int n_samples = 501;
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;

    void validate() const;
    std::vector<double> sample_times() const;
};

// Stationary solution of L v = 0, resolved by replacing one redundant row
// with the trace(rho) = 1 equation; Hermitized and trace-normalized.
DensityMatrix steady_state(const Liouvillian& L, const SolverOptions& opts = {});

// e^{L tau_k} v0 at tau_k = k tau_max/(n_samples-1) via adaptive embedded
// Runge-Kutta (Dormand-Prince 5(4)) with per-step error control: the
// generator is large and sparse, so the action of the exponential is
// integrated rather than formed.
std::vector<Eigen::VectorXcd> propagate(const Liouvillian& L,
                                        const Eigen::VectorXcd& v0,
                                        const PropagationSpec& spec);

} // namespace polcav

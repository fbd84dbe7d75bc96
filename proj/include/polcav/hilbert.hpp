#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "polcav/errors.hpp"

namespace polcav {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;

enum class Mode { X, Y };

// Basis label of one joint-space index: photon numbers of both cavity modes
// plus the excitation state (0 = ground, 1 = excited) of both transitions.
struct BasisState {
    int n_x;
    int n_y;
    int s_x;
    int s_y;
};

// Truncated joint space: mode X (n_fock levels) x mode Y (n_fock levels)
// x TLS X (2 levels) x TLS Y (2 levels), in that fixed tensor order.
// The last factor varies fastest in the flattened index.
class SpaceLayout {
public:
    explicit SpaceLayout(int n_fock);

    int n_fock() const { return n_fock_; }
    int dim() const { return dim_; }

    int encode(const BasisState& b) const;
    BasisState decode(int idx) const;

private:
    int n_fock_;
    int dim_;
};

// Elementary operators, each acting on its own tensor factor and as the
// identity on all others.
Operator annihilation(const SpaceLayout& layout, Mode mode);
Operator qd_lowering(const SpaceLayout& layout, Mode transition);

// sigma_z = (sigma^dag sigma - sigma sigma^dag) / 2, eigenvalues +-1/2.
Operator qd_sigma_z(const SpaceLayout& layout, Mode transition);

Operator identity_op(const SpaceLayout& layout);

// Kronecker product of per-factor matrices in layout order; the factor
// dimensions must be (n_fock, n_fock, 2, 2).
Operator kron_assemble(const SpaceLayout& layout,
                       const std::vector<Eigen::MatrixXcd>& factors);

// Single-mode ladder matrix <n-1|a|n> = sqrt(n), size n_fock x n_fock.
Eigen::MatrixXcd fock_annihilation(int n_fock);

} // namespace polcav

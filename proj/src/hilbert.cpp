#include "polcav/hilbert.hpp"

#include <cmath>
#include <string>

namespace polcav {

SpaceLayout::SpaceLayout(int n_fock) : n_fock_(n_fock) {
    if (n_fock < 2)
        throw InvalidParams("n_fock must be >= 2, got " + std::to_string(n_fock));
    dim_ = n_fock * n_fock * 2 * 2;
}

int SpaceLayout::encode(const BasisState& b) const {
    if (b.n_x < 0 || b.n_x >= n_fock_ || b.n_y < 0 || b.n_y >= n_fock_ ||
        b.s_x < 0 || b.s_x > 1 || b.s_y < 0 || b.s_y > 1)
        throw InvalidParams("basis state out of range");
    return ((b.n_x * n_fock_ + b.n_y) * 2 + b.s_x) * 2 + b.s_y;
}

BasisState SpaceLayout::decode(int idx) const {
    if (idx < 0 || idx >= dim_)
        throw InvalidParams("basis index out of range: " + std::to_string(idx));
    BasisState b;
    b.s_y = idx % 2; idx /= 2;
    b.s_x = idx % 2; idx /= 2;
    b.n_y = idx % n_fock_; idx /= n_fock_;
    b.n_x = idx;
    return b;
}

Eigen::MatrixXcd fock_annihilation(int n_fock) {
    if (n_fock < 1)
        throw InvalidParams("fock_annihilation needs at least one level");
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_fock, n_fock);
    for (int n = 1; n < n_fock; ++n)
        a(n - 1, n) = std::sqrt(double(n));
    return a;
}

namespace {

Eigen::MatrixXcd tls_lowering() {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
    s(0, 1) = 1.0; // |g><e|, basis order (g, e)
    return s;
}

} // namespace

Operator kron_assemble(const SpaceLayout& layout,
                       const std::vector<Eigen::MatrixXcd>& factors) {
    const int nf = layout.n_fock();
    const int expected[4] = {nf, nf, 2, 2};
    if (factors.size() != 4)
        throw DimensionMismatch("kron_assemble expects 4 factors, got " +
                                std::to_string(factors.size()));
    for (int i = 0; i < 4; ++i) {
        if (factors[i].rows() != expected[i] || factors[i].cols() != expected[i])
            throw DimensionMismatch("factor " + std::to_string(i) +
                                    " must be " + std::to_string(expected[i]) +
                                    "x" + std::to_string(expected[i]));
    }
    Eigen::MatrixXcd out = factors[0];
    for (int i = 1; i < 4; ++i) {
        const Eigen::MatrixXcd& f = factors[i];
        Eigen::MatrixXcd next(out.rows() * f.rows(), out.cols() * f.cols());
        for (Eigen::Index r = 0; r < out.rows(); ++r)
            for (Eigen::Index c = 0; c < out.cols(); ++c)
                next.block(r * f.rows(), c * f.cols(), f.rows(), f.cols()) =
                    out(r, c) * f;
        out = std::move(next);
    }
    return out;
}

namespace {

Operator lift(const SpaceLayout& layout, int slot, const Eigen::MatrixXcd& m) {
    const int nf = layout.n_fock();
    std::vector<Eigen::MatrixXcd> factors = {
        Eigen::MatrixXcd::Identity(nf, nf), Eigen::MatrixXcd::Identity(nf, nf),
        Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Identity(2, 2)};
    factors[slot] = m;
    return kron_assemble(layout, factors);
}

} // namespace

Operator annihilation(const SpaceLayout& layout, Mode mode) {
    return lift(layout, mode == Mode::X ? 0 : 1,
                fock_annihilation(layout.n_fock()));
}

Operator qd_lowering(const SpaceLayout& layout, Mode transition) {
    return lift(layout, transition == Mode::X ? 2 : 3, tls_lowering());
}

Operator qd_sigma_z(const SpaceLayout& layout, Mode transition) {
    const Eigen::MatrixXcd s = tls_lowering();
    const Eigen::MatrixXcd sz =
        0.5 * (s.adjoint() * s - s * s.adjoint());
    return lift(layout, transition == Mode::X ? 2 : 3, sz);
}

Operator identity_op(const SpaceLayout& layout) {
    return Eigen::MatrixXcd::Identity(layout.dim(), layout.dim());
}

} // namespace polcav

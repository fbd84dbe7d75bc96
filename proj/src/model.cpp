#include "polcav/model.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace polcav {

JonesVector JonesVector::from_angle_deg(double theta_deg) {
    const double t = theta_deg * kTwoPi / 360.0;
    return JonesVector{cplx(std::cos(t), 0.0), cplx(std::sin(t), 0.0)};
}

void JonesVector::validate() const {
    const double n = std::norm(e1) + std::norm(e2);
    if (std::abs(n - 1.0) > 1e-12)
        throw InvalidParams("Jones vector is not normalized: |e|^2 = " +
                            std::to_string(n));
}

void SystemParams::validate() const {
    if (kappa <= 0) throw InvalidParams("kappa must be > 0");
    if (gamma_par < 0) throw InvalidParams("gamma_par must be >= 0");
    if (gamma_star < 0) throw InvalidParams("gamma_star must be >= 0");
    if (eta < 0) throw InvalidParams("eta must be >= 0");
    if (g_x < 0 || g_y < 0) throw InvalidParams("couplings must be >= 0");
    if (n_fock < 2) throw InvalidParams("n_fock must be >= 2");
    if (!std::isfinite(kappa) || !std::isfinite(g_x) || !std::isfinite(g_y) ||
        !std::isfinite(gamma_par) || !std::isfinite(gamma_star) ||
        !std::isfinite(f_cav_x) || !std::isfinite(f_cav_y) ||
        !std::isfinite(f_qd_x) || !std::isfinite(f_qd_y) ||
        !std::isfinite(f_laser) || !std::isfinite(eta) ||
        !std::isfinite(theta_in))
        throw InvalidParams("non-finite parameter value");
}

JonesVector SystemParams::input_jones() const {
    return JonesVector::from_angle_deg(theta_in);
}

SystemParams preset_qd_a() {
    SystemParams p;
    p.kappa = 69.0; p.g_x = 15.0; p.g_y = 15.0;
    p.gamma_par = 3.5; p.gamma_star = 6.0;
    p.f_cav_x = 0.0; p.f_cav_y = 0.0;
    p.f_qd_x = -1.5; p.f_qd_y = 1.3;
    p.f_laser = 0.0; p.theta_in = 45.0; p.n_fock = 4;
    p.eta = p.kappa * 0.1; // empty-cavity on-resonance nbar = 0.01
    return p;
}

SystemParams preset_qd_b() {
    SystemParams p;
    p.kappa = 105.0; p.g_x = 14.0; p.g_y = 14.0;
    p.gamma_par = 1.0; p.gamma_star = 0.7;
    p.f_cav_x = 0.0; p.f_cav_y = 0.0;
    p.f_qd_x = -2.0; p.f_qd_y = 2.4;
    p.f_laser = 0.0; p.theta_in = 45.0; p.n_fock = 4;
    p.eta = p.kappa * 0.1;
    return p;
}

Operator build_hamiltonian(const SystemParams& p) {
    p.validate();
    const SpaceLayout layout(p.n_fock);
    const Operator aX = annihilation(layout, Mode::X);
    const Operator aY = annihilation(layout, Mode::Y);

    Operator H = kTwoPi * (p.f_laser - p.f_cav_x) * (aX.adjoint() * aX) +
                 kTwoPi * (p.f_laser - p.f_cav_y) * (aY.adjoint() * aY);

    const JonesVector in = p.input_jones();
    H += (p.eta / 2.0) * (in.e1.real() * (aX.adjoint() + aX) +
                          in.e2.real() * (aY.adjoint() + aY));

    if (p.qd_x_enabled) {
        const Operator sX = qd_lowering(layout, Mode::X);
        H += kTwoPi * (p.f_laser - p.f_qd_x) * (sX.adjoint() * sX) +
             p.g_x * (sX * aX.adjoint() + sX.adjoint() * aX);
    }
    if (p.qd_y_enabled) {
        const Operator sY = qd_lowering(layout, Mode::Y);
        H += kTwoPi * (p.f_laser - p.f_qd_y) * (sY.adjoint() * sY) +
             p.g_y * (sY * aY.adjoint() + sY.adjoint() * aY);
    }
    return H;
}

namespace {

SparseSuper to_sparse(const Operator& m, double prune_tol = 0.0) {
    SparseSuper s = m.sparseView(1.0, prune_tol);
    s.makeCompressed();
    return s;
}

// vec(2 o rho o^dag - o^dag o rho - rho o^dag o), column-stacked.
SparseSuper dissipator_super(const Operator& o) {
    const int d = int(o.rows());
    const SparseSuper os = to_sparse(o);
    const SparseSuper obar = to_sparse(o.conjugate());
    const SparseSuper oo = to_sparse(Operator(o.adjoint() * o));
    const SparseSuper ooT = to_sparse(Operator((o.adjoint() * o).transpose()));
    SparseSuper id(d, d);
    id.setIdentity();
    SparseSuper out = 2.0 * Eigen::kroneckerProduct(obar, os).eval();
    out -= Eigen::kroneckerProduct(id, oo).eval();
    out -= Eigen::kroneckerProduct(ooT, id).eval();
    out.makeCompressed();
    return out;
}

} // namespace

Liouvillian build_liouvillian(const SystemParams& p) {
    const SpaceLayout layout(p.n_fock);
    const int d = layout.dim();
    const Operator H = build_hamiltonian(p);

    const SparseSuper Hs = to_sparse(H);
    const SparseSuper HsT = to_sparse(Operator(H.transpose()));
    SparseSuper id(d, d);
    id.setIdentity();

    const cplx mi(0.0, -1.0);
    SparseSuper L = mi * (Eigen::kroneckerProduct(id, Hs).eval() -
                          Eigen::kroneckerProduct(HsT, id).eval());

    L += cplx(p.kappa / 2.0) *
         (dissipator_super(annihilation(layout, Mode::X)) +
          dissipator_super(annihilation(layout, Mode::Y)));

    // Dissipators act on both transitions regardless of the enabled flags: for
    // a transition without Hamiltonian terms they only pin it to its ground
    // state, which keeps the stationary state unique.
    for (Mode t : {Mode::X, Mode::Y}) {
        L += cplx(p.gamma_par / 2.0) * dissipator_super(qd_lowering(layout, t));
        if (p.gamma_star > 0)
            L += cplx(p.gamma_star / 4.0) *
                 dissipator_super(qd_sigma_z(layout, t));
    }
    L.makeCompressed();
    return Liouvillian{d, std::move(L)};
}

double cooperativity(const SystemParams& p) {
    const double gamma = p.gamma_par / 2.0 + p.gamma_star;
    if (p.kappa <= 0 || gamma <= 0)
        throw InvalidParams("cooperativity undefined: kappa and "
                            "gamma_par/2 + gamma_star must be positive");
    return p.g_x * p.g_x / (p.kappa * gamma);
}

} // namespace polcav

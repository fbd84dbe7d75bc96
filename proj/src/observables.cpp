#include "polcav/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace polcav {

PolarizedMode polarized_mode(const SpaceLayout& layout, const JonesVector& jones) {
    jones.validate();
    PolarizedMode m;
    m.jones = jones;
    m.op = jones.e1 * annihilation(layout, Mode::X) +
           jones.e2 * annihilation(layout, Mode::Y);
    m.op2 = m.op * m.op;
    return m;
}

namespace {

// Tr(rho o^dag o) = sum_ij (o rho)_ij conj(o_ij), avoiding o^dag o.
double quadratic_expectation(const Operator& rho, const Operator& o) {
    return ((o * rho).cwiseProduct(o.conjugate())).sum().real();
}

} // namespace

double transmission(const DensityMatrix& rho0, const PolarizedMode& mode) {
    return quadratic_expectation(rho0.mat, mode.op);
}

double g2_zero(const DensityMatrix& rho0, const PolarizedMode& mode,
               double intensity_floor) {
    const double T = transmission(rho0, mode);
    if (T < intensity_floor)
        throw ZeroIntensity("transmission " + std::to_string(T) +
                            " below the intensity floor");
    const double num = quadratic_expectation(rho0.mat, mode.op2);
    return num / (T * T);
}

G2Cell g2_cell(const DensityMatrix& rho0, const PolarizedMode& mode) {
    G2Cell c;
    c.transmission = transmission(rho0, mode);
    c.numerator = quadratic_expectation(rho0.mat, mode.op2);
    c.g2 = c.numerator / (c.transmission * c.transmission);
    return c;
}

CorrelationTrace g2_trace(const Liouvillian& L, const DensityMatrix& rho0,
                          const PolarizedMode& mode, const PropagationSpec& spec,
                          double intensity_floor) {
    const double T = transmission(rho0, mode);
    if (T < intensity_floor)
        throw ZeroIntensity("transmission below the intensity floor");

    const int d = L.dim;
    const Operator seed = mode.op * rho0.mat * mode.op.adjoint();
    const Eigen::VectorXcd v0 =
        Eigen::Map<const Eigen::VectorXcd>(seed.data(), d * d);
    const std::vector<Eigen::VectorXcd> vt = propagate(L, v0, spec);
    const std::vector<double> times = spec.sample_times();

    const int np = int(times.size());
    CorrelationTrace tr;
    tr.tau.resize(2 * np - 1);
    tr.g2.resize(2 * np - 1);
    for (int k = 0; k < np; ++k) {
        const Operator m =
            Eigen::Map<const Operator>(vt[size_t(k)].data(), d, d);
        const double val = quadratic_expectation(m, mode.op) / (T * T);
        tr.tau[size_t(np - 1 + k)] = times[size_t(k)];
        tr.g2[size_t(np - 1 + k)] = val;
        tr.tau[size_t(np - 1 - k)] = -times[size_t(k)];
        tr.g2[size_t(np - 1 - k)] = val;
    }
    return tr;
}

Eigen::MatrixXcd photonic_reduced(const Operator& rho, const SpaceLayout& layout) {
    const int nf = layout.n_fock();
    const int dp = nf * nf;
    if (rho.rows() != layout.dim() || rho.cols() != layout.dim())
        throw DimensionMismatch("density matrix does not match the layout");
    Eigen::MatrixXcd red = Eigen::MatrixXcd::Zero(dp, dp);
    for (int nx = 0; nx < nf; ++nx)
        for (int ny = 0; ny < nf; ++ny)
            for (int mx = 0; mx < nf; ++mx)
                for (int my = 0; my < nf; ++my) {
                    cplx acc = 0.0;
                    for (int sx = 0; sx < 2; ++sx)
                        for (int sy = 0; sy < 2; ++sy)
                            acc += rho(layout.encode({nx, ny, sx, sy}),
                                       layout.encode({mx, my, sx, sy}));
                    red(nx * nf + ny, mx * nf + my) = acc;
                }
    return red;
}

PhotonNumberDist photon_number_dist(const DensityMatrix& rho0,
                                    const SpaceLayout& layout,
                                    double theta_out_deg) {
    const int nf = layout.n_fock();
    const int dp = nf * nf;
    const Eigen::MatrixXcd red = photonic_reduced(rho0.mat, layout);

    // Photonic-space ladder matrices, indexed n_x * nf + n_y.
    const Eigen::MatrixXcd a1 = fock_annihilation(nf);
    Eigen::MatrixXcd ax = Eigen::MatrixXcd::Zero(dp, dp);
    Eigen::MatrixXcd ay = Eigen::MatrixXcd::Zero(dp, dp);
    for (int nx = 0; nx < nf; ++nx)
        for (int ny = 0; ny < nf; ++ny) {
            if (nx > 0) ax(int((nx - 1) * nf + ny), int(nx * nf + ny)) = a1(nx - 1, nx);
            if (ny > 0) ay(int(nx * nf + ny - 1), int(nx * nf + ny)) = a1(ny - 1, ny);
        }

    const double t = theta_out_deg * kTwoPi / 360.0;
    const Eigen::MatrixXcd bdet_dag =
        (std::cos(t) * ax + std::sin(t) * ay).adjoint();
    const Eigen::MatrixXcd brej_dag =
        (-std::sin(t) * ax + std::cos(t) * ay).adjoint();

    // The two-mode space holds up to 2(nf-1) quanta of the detected mode, so
    // run both ladders to that limit; the operators annihilate states beyond
    // the per-mode truncation, which zeroes the unreachable weights.
    const int n_max = 2 * (nf - 1);
    std::vector<double> fact(size_t(n_max + 1), 1.0);
    for (int k = 1; k <= n_max; ++k)
        fact[size_t(k)] = fact[size_t(k - 1)] * k;

    PhotonNumberDist dist;
    dist.theta_out = theta_out_deg;
    dist.p.assign(size_t(n_max + 1), 0.0);

    Eigen::VectorXcd u_n = Eigen::VectorXcd::Zero(dp);
    u_n(0) = 1.0; // |0,0>
    for (int n = 0; n <= n_max; ++n) {
        Eigen::VectorXcd u = u_n;
        for (int m = 0; m <= n_max; ++m) {
            const double w = (u.adjoint() * red * u).value().real();
            dist.p[size_t(n)] += w / (fact[size_t(n)] * fact[size_t(m)]);
            u = brej_dag * u;
        }
        u_n = bdet_dag * u_n;
    }
    return dist;
}

double g2_lowdrive_check(const PhotonNumberDist& dist, double intensity_floor) {
    if (dist.p.size() < 3)
        throw InvalidParams("distribution too short for a two-photon estimate");
    const double p1 = dist.p[1];
    if (p1 < intensity_floor)
        throw ZeroIntensity("P_1 below the intensity floor");
    return 2.0 * dist.p[2] / (p1 * p1);
}

CorrelationTrace convolve_detector(const CorrelationTrace& trace,
                                   double jitter_fwhm_ps) {
    if (trace.convolved_with)
        throw InvalidParams("trace is already convolved");
    if (!(jitter_fwhm_ps > 0))
        throw InvalidParams("jitter FWHM must be > 0");
    if (trace.tau.size() < 2 || trace.g2.size() != trace.tau.size())
        throw InvalidParams("malformed correlation trace");

    const double fwhm = jitter_fwhm_ps * 1e-3; // ps -> ns
    const double dt = trace.tau[1] - trace.tau[0];
    if (dt > fwhm / 4.0)
        throw GridTooCoarse("tau spacing " + std::to_string(dt) +
                            " ns exceeds FWHM/4 = " +
                            std::to_string(fwhm / 4.0) + " ns");

    const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const int half = int(std::ceil(5.0 * sigma / dt));
    std::vector<double> kernel(size_t(2 * half + 1));
    double sum = 0.0;
    for (int k = -half; k <= half; ++k) {
        const double x = k * dt / sigma;
        kernel[size_t(k + half)] = std::exp(-0.5 * x * x);
        sum += kernel[size_t(k + half)];
    }
    for (double& v : kernel) v /= sum;

    const int n = int(trace.g2.size());
    CorrelationTrace out;
    out.tau = trace.tau;
    out.convolved_with = jitter_fwhm_ps;
    out.g2.resize(size_t(n));
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = -half; k <= half; ++k) {
            const int j = i + k;
            // Stationary correlators relax to 1 beyond the computed window.
            const double v =
                (j < 0 || j >= n) ? 1.0 : trace.g2[size_t(j)];
            acc += kernel[size_t(k + half)] * v;
        }
        out.g2[size_t(i)] = acc;
    }
    return out;
}

} // namespace polcav

#include "polcav/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include <Eigen/SparseLU>
#include <Eigen/IterativeLinearSolvers>
#ifdef POLCAV_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include "polcav/kernels/csr.hpp"
#include "polcav/kernels/kernels.hpp"

namespace polcav {

double DensityMatrix::trace_error() const {
    return std::abs(mat.trace().real() - 1.0) + std::abs(mat.trace().imag());
}

double DensityMatrix::hermiticity_error() const {
    return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
}

void PropagationSpec::validate() const {
    if (tau_max <= 0) throw InvalidParams("tau_max must be > 0");
    if (n_samples < 2) throw InvalidParams("n_samples must be >= 2");
    if (rel_tol <= 0 || rel_tol > 1e-2 || abs_tol <= 0 || abs_tol > 1e-2)
        throw InvalidParams("tolerances must lie in (0, 1e-2]");
}

std::vector<double> PropagationSpec::sample_times() const {
    std::vector<double> t(n_samples);
    for (int k = 0; k < n_samples; ++k)
        t[k] = tau_max * double(k) / double(n_samples - 1);
    return t;
}

namespace {

SparseSuper with_trace_row(const SparseSuper& L, int d, int row) {
    // Rebuild with the given row swapped for the trace functional.
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(size_t(L.nonZeros()) + size_t(d));
    for (int k = 0; k < L.outerSize(); ++k)
        for (SparseSuper::InnerIterator it(L, k); it; ++it)
            if (it.row() != row)
                trips.emplace_back(int(it.row()), int(it.col()), it.value());
    for (int i = 0; i < d; ++i)
        trips.emplace_back(row, i * d + i, cplx(1.0, 0.0));
    SparseSuper A(L.rows(), L.cols());
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    return A;
}

} // namespace

DensityMatrix steady_state(const Liouvillian& L, const SolverOptions& opts) {
    const int d = L.dim;
    const int n = d * d;
    if (L.mat.rows() != n || L.mat.cols() != n)
        throw DimensionMismatch("Liouvillian size does not match dim^2");
    if (opts.replaced_row < 0 || opts.replaced_row >= n)
        throw InvalidParams("replaced_row out of range");
    // Only rows at diagonal positions vec(i,i) are linearly dependent on the
    // rest (trace preservation); replacing any other row loses an equation.
    if (opts.replaced_row % (d + 1) != 0)
        throw InvalidParams("replaced_row must sit on the density-matrix "
                            "diagonal, i.e. be a multiple of dim+1");

    const SparseSuper A = with_trace_row(L.mat, d, opts.replaced_row);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
    rhs(opts.replaced_row) = 1.0;

    Eigen::VectorXcd v;
    if (n <= opts.direct_max_dim2) {
        bool solved = false;
#ifdef POLCAV_HAVE_UMFPACK
        {
            // Fast path; its pivot heuristics can misreport stiff systems as
            // singular, so a failure falls through to SparseLU instead.
            Eigen::UmfPackLU<SparseSuper> lu;
            lu.compute(A);
            if (lu.info() == Eigen::Success) {
                v = lu.solve(rhs);
                solved = lu.info() == Eigen::Success;
            }
        }
#endif
        if (!solved) {
            Eigen::SparseLU<SparseSuper> lu;
            lu.compute(A);
            if (lu.info() != Eigen::Success)
                throw SolverSingular("sparse LU factorization failed "
                                     "(rank-deficient augmented system)");
            v = lu.solve(rhs);
            if (lu.info() != Eigen::Success)
                throw SolverSingular("sparse LU solve failed");
        }
    } else {
        Eigen::BiCGSTAB<SparseSuper, Eigen::IncompleteLUT<cplx>> it;
        it.setTolerance(1e-12);
        it.setMaxIterations(opts.max_iterations);
        it.compute(A);
        if (it.info() != Eigen::Success)
            throw SolverSingular("iterative solver setup failed");
        v = it.solve(rhs);
        if (it.info() != Eigen::Success)
            throw NoConvergence("iterative steady-state solve did not converge");
    }

    Operator rho = Eigen::Map<const Operator>(v.data(), d, d);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const cplx tr = rho.trace();
    if (std::abs(tr) < 1e-14)
        throw SolverSingular("steady-state candidate has vanishing trace");
    rho /= tr;

    // Residual against the original (un-augmented) generator.
    const kernels::CsrMatrix csr = kernels::CsrMatrix::from_eigen(L.mat);
    const auto& k = kernels::active();
    Eigen::VectorXcd vr = Eigen::Map<const Eigen::VectorXcd>(rho.data(), n);
    Eigen::VectorXcd Lv(n);
    k.spmv(csr, vr.data(), Lv.data());
    const double res = std::sqrt(k.nrm2sq(n, Lv.data())) /
                       std::sqrt(k.nrm2sq(n, vr.data()));
    if (!(res < opts.residual_tol))
        throw SolverSingular("steady-state residual " + std::to_string(res) +
                             " exceeds tolerance");

    Eigen::SelfAdjointEigenSolver<Operator> es(rho,
                                               Eigen::EigenvaluesOnly);
    DensityMatrix out;
    out.mat = std::move(rho);
    out.residual = res;
    out.min_eig = es.eigenvalues().minCoeff();
    return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                 a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

} // namespace

std::vector<Eigen::VectorXcd> propagate(const Liouvillian& L,
                                        const Eigen::VectorXcd& v0,
                                        const PropagationSpec& spec) {
    spec.validate();
    const int n = L.dim * L.dim;
    if (v0.size() != n)
        throw DimensionMismatch("v0 has size " + std::to_string(v0.size()) +
                                ", expected dim^2 = " + std::to_string(n));

    const kernels::CsrMatrix csr = kernels::CsrMatrix::from_eigen(L.mat);
    const auto& kr = kernels::active();
    const auto rhs = [&](const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
        kr.spmv(csr, y.data(), dy.data());
    };

    const std::vector<double> times = spec.sample_times();
    std::vector<Eigen::VectorXcd> out;
    out.reserve(times.size());
    out.push_back(v0);

    Eigen::VectorXcd y = v0, ytmp(n), y5(n), err(n);
    Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    rhs(y, k1);

    const double vnorm0 = std::sqrt(kr.nrm2sq(n, y.data()));
    const double f0 = std::sqrt(kr.nrm2sq(n, k1.data()));
    double h = 0.01;
    if (f0 > 0)
        h = std::min(0.1 * (vnorm0 + spec.abs_tol) / f0, spec.tau_max / 10.0);
    h = std::max(h, 1e-12);

    double t = 0.0;
    size_t next = 1;
    long steps = 0;
    const long max_steps = 50'000'000;

    const auto stage = [&](double hh, int nterms, const double* coef,
                           const Eigen::VectorXcd* ks[]) {
        ytmp = y;
        for (int i = 0; i < nterms; ++i)
            kr.axpy(n, cplx(hh * coef[i], 0.0), ks[i]->data(), ytmp.data());
    };

    while (next < times.size()) {
        const double t_target = times[next];
        bool hit = false;
        double hs = h;
        if (t + hs >= t_target) {
            hs = t_target - t;
            hit = true;
        }

        {
            const double c2[] = {a21};
            const Eigen::VectorXcd* ks[] = {&k1};
            stage(hs, 1, c2, ks);
            rhs(ytmp, k2);
        }
        {
            const double c3[] = {a31, a32};
            const Eigen::VectorXcd* ks[] = {&k1, &k2};
            stage(hs, 2, c3, ks);
            rhs(ytmp, k3);
        }
        {
            const double c4[] = {a41, a42, a43};
            const Eigen::VectorXcd* ks[] = {&k1, &k2, &k3};
            stage(hs, 3, c4, ks);
            rhs(ytmp, k4);
        }
        {
            const double c5[] = {a51, a52, a53, a54};
            const Eigen::VectorXcd* ks[] = {&k1, &k2, &k3, &k4};
            stage(hs, 4, c5, ks);
            rhs(ytmp, k5);
        }
        {
            const double c6[] = {a61, a62, a63, a64, a65};
            const Eigen::VectorXcd* ks[] = {&k1, &k2, &k3, &k4, &k5};
            stage(hs, 5, c6, ks);
            rhs(ytmp, k6);
        }
        {
            const double cb[] = {b1, b3, b4, b5, b6};
            const Eigen::VectorXcd* ks[] = {&k1, &k3, &k4, &k5, &k6};
            stage(hs, 5, cb, ks);
            y5 = ytmp;
            rhs(y5, k7);
        }

        err.setZero();
        const double ce[] = {e1, e3, e4, e5, e6, e7};
        const Eigen::VectorXcd* kes[] = {&k1, &k3, &k4, &k5, &k6, &k7};
        for (int i = 0; i < 6; ++i)
            kr.axpy(n, cplx(hs * ce[i], 0.0), kes[i]->data(), err.data());

        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double sc = spec.abs_tol +
                              spec.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double r = std::abs(err[i]) / sc;
            acc += r * r;
        }
        const double enorm = std::sqrt(acc / n);

        if (enorm <= 1.0) {
            t = hit ? t_target : t + hs;
            y.swap(y5);
            k1.swap(k7); // first-same-as-last
            if (hit) {
                out.push_back(y);
                ++next;
            }
        }

        const double fac =
            (enorm > 0) ? 0.9 * std::pow(enorm, -0.2) : 5.0;
        const double hnew = hs * std::min(5.0, std::max(0.2, fac));
        // A step clipped to land on a sample must not shrink the adaptive
        // step unless it actually failed the error test.
        if (enorm > 1.0)
            h = hnew;
        else if (!hit)
            h = hnew;
        if (h < 1e-14)
            throw NoConvergence("step size underflow in propagation");
        if (++steps > max_steps)
            throw NoConvergence("propagation exceeded the step budget");
    }
    return out;
}

} // namespace polcav

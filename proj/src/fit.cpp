#include "polcav/fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>

#include "polcav/observables.hpp"
#include "polcav/sweeps.hpp"

namespace polcav {

void TransmissionDataset::validate() const {
    if (traces.empty()) throw InvalidParams("dataset has no traces");
    for (const auto& tr : traces) {
        if (tr.detuning.size() < 10)
            throw InvalidParams("each trace needs at least 10 points");
        if (tr.detuning.size() != tr.transmission.size())
            throw DimensionMismatch("trace column lengths differ");
        for (size_t k = 0; k < tr.detuning.size(); ++k) {
            if (!std::isfinite(tr.detuning[k]) ||
                !std::isfinite(tr.transmission[k]))
                throw NonFinite("dataset contains a non-finite value");
            if (k > 0 && !(tr.detuning[k] > tr.detuning[k - 1]))
                throw InvalidParams("detunings must be strictly increasing");
            if (tr.transmission[k] < 0.0 || tr.transmission[k] > 1.05)
                throw InvalidParams("transmission outside [0, 1.05]");
        }
    }
}

namespace {

struct SharedPoint {
    double detuning = 0.0;
    std::vector<std::pair<int, int>> users; // (trace index, point index)
};

// Traces usually share their detuning grid; solving each unique detuning once
// and reading off every trace's polarization cuts the forward cost ~6x.
std::vector<SharedPoint> unique_detunings(const TransmissionDataset& data) {
    std::map<long long, SharedPoint> m;
    for (int t = 0; t < int(data.traces.size()); ++t) {
        const auto& tr = data.traces[size_t(t)];
        for (int k = 0; k < int(tr.detuning.size()); ++k) {
            const double f = tr.detuning[size_t(k)];
            const long long key = llround(f * 1e9);
            auto& sp = m[key];
            sp.detuning = f;
            sp.users.emplace_back(t, k);
        }
    }
    std::vector<SharedPoint> out;
    out.reserve(m.size());
    for (auto& [k, v] : m) out.push_back(std::move(v));
    return out;
}

} // namespace

double objective(const SystemParams& p, const TransmissionDataset& data,
                 std::vector<double>* scales_out) {
    data.validate();
    SystemParams q = p;
    q.theta_in = data.theta_in;
    q.validate();

    const SpaceLayout layout(q.n_fock);
    std::vector<PolarizedMode> modes;
    modes.reserve(data.traces.size());
    for (const auto& tr : data.traces)
        modes.push_back(
            polarized_mode(layout, JonesVector::from_angle_deg(tr.theta_out)));

    const std::vector<SharedPoint> points = unique_detunings(data);
    std::vector<std::vector<double>> model(data.traces.size());
    for (size_t t = 0; t < data.traces.size(); ++t)
        model[t].assign(data.traces[t].detuning.size(),
                        std::numeric_limits<double>::quiet_NaN());

    int failed = 0;
    for (const auto& sp : points) {
        SystemParams r = q;
        r.f_laser = sp.detuning;
        DensityMatrix rho;
        try {
            rho = steady_state(build_liouvillian(r));
        } catch (const std::exception&) {
            ++failed;
            continue;
        }
        for (const auto& [t, k] : sp.users)
            model[size_t(t)][size_t(k)] = transmission(rho, modes[size_t(t)]);
    }
    if (failed * 10 > int(points.size()))
        throw ForwardModelFailure("more than 10% of model evaluations failed");

    double sse = 0.0;
    std::vector<double> scales(data.traces.size(), 0.0);
    for (size_t t = 0; t < data.traces.size(); ++t) {
        const auto& tr = data.traces[t];
        double mm = 0.0, md = 0.0;
        for (size_t k = 0; k < tr.detuning.size(); ++k) {
            const double m = model[t][k];
            if (!std::isfinite(m)) continue;
            mm += m * m;
            md += m * tr.transmission[k];
        }
        const double s = mm > 0 ? md / mm : 0.0;
        scales[t] = s;
        for (size_t k = 0; k < tr.detuning.size(); ++k) {
            const double m = model[t][k];
            if (!std::isfinite(m)) continue;
            const double r = s * m - tr.transmission[k];
            sse += r * r;
        }
    }
    if (scales_out) *scales_out = scales;
    return sse;
}

namespace {

const std::vector<std::string> kFittable = {"kappa",      "g",
                                            "gamma_par",  "gamma_star",
                                            "f_qd_x",     "f_qd_y"};

double get_field(const SystemParams& p, const std::string& f) {
    if (f == "kappa") return p.kappa;
    if (f == "g") return p.g_x;
    if (f == "gamma_par") return p.gamma_par;
    if (f == "gamma_star") return p.gamma_star;
    if (f == "f_qd_x") return p.f_qd_x;
    if (f == "f_qd_y") return p.f_qd_y;
    throw InvalidParams("not a fittable field: " + f);
}

SystemParams with_vector(SystemParams p,
                         const std::vector<std::string>& fields,
                         const std::vector<double>& x) {
    for (size_t i = 0; i < fields.size(); ++i)
        p = apply_axis(p, fields[i], x[i]);
    return p;
}

struct SimplexOutcome {
    std::vector<double> x;
    double f = 0.0;
    int evals = 0;
    bool converged = false;
};

// Nelder-Mead with standard reflection/expansion/contraction/shrink moves.
SimplexOutcome nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                           const std::vector<double>& x0,
                           const std::vector<double>& step,
                           int max_evals, double ftol, double xtol) {
    const int n = int(x0.size());
    std::vector<std::vector<double>> xs(size_t(n + 1), x0);
    for (int i = 0; i < n; ++i)
        xs[size_t(i + 1)][size_t(i)] += step[size_t(i)];

    std::vector<double> fs(size_t(n + 1));
    int evals = 0;
    for (int i = 0; i <= n; ++i) {
        fs[size_t(i)] = fn(xs[size_t(i)]);
        ++evals;
    }

    const auto order = [&] {
        std::vector<int> idx(size_t(n + 1));
        for (int i = 0; i <= n; ++i) idx[size_t(i)] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return fs[size_t(a)] < fs[size_t(b)]; });
        std::vector<std::vector<double>> xs2(size_t(n + 1));
        std::vector<double> fs2(size_t(n + 1));
        for (int i = 0; i <= n; ++i) {
            xs2[size_t(i)] = xs[size_t(idx[size_t(i)])];
            fs2[size_t(i)] = fs[size_t(idx[size_t(i)])];
        }
        xs.swap(xs2);
        fs.swap(fs2);
    };

    bool converged = false;
    while (evals < max_evals) {
        order();
        double fspread = std::abs(fs[size_t(n)] - fs[0]);
        double xspread = 0.0;
        for (int i = 0; i < n; ++i)
            xspread = std::max(
                xspread, std::abs(xs[size_t(n)][size_t(i)] - xs[0][size_t(i)]));
        if (fspread < ftol * (1.0 + std::abs(fs[0])) && xspread < xtol) {
            converged = true;
            break;
        }

        std::vector<double> centroid(size_t(n), 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                centroid[size_t(j)] += xs[size_t(i)][size_t(j)] / double(n);

        const auto blend = [&](double coef) {
            std::vector<double> x(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j)
                x[size_t(j)] = centroid[size_t(j)] +
                               coef * (xs[size_t(n)][size_t(j)] -
                                       centroid[size_t(j)]);
            return x;
        };

        const std::vector<double> xr = blend(-1.0);
        const double fr = fn(xr);
        ++evals;
        if (fr < fs[0]) {
            const std::vector<double> xe = blend(-2.0);
            const double fe = fn(xe);
            ++evals;
            if (fe < fr) { xs[size_t(n)] = xe; fs[size_t(n)] = fe; }
            else         { xs[size_t(n)] = xr; fs[size_t(n)] = fr; }
        } else if (fr < fs[size_t(n - 1)]) {
            xs[size_t(n)] = xr;
            fs[size_t(n)] = fr;
        } else {
            const bool outside = fr < fs[size_t(n)];
            const std::vector<double> xc = blend(outside ? -0.5 : 0.5);
            const double fc = fn(xc);
            ++evals;
            if (fc < std::min(fr, fs[size_t(n)])) {
                xs[size_t(n)] = xc;
                fs[size_t(n)] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    for (int j = 0; j < n; ++j)
                        xs[size_t(i)][size_t(j)] =
                            0.5 * (xs[size_t(i)][size_t(j)] + xs[0][size_t(j)]);
                    fs[size_t(i)] = fn(xs[size_t(i)]);
                    ++evals;
                }
            }
        }
    }
    order();
    return SimplexOutcome{xs[0], fs[0], evals, converged};
}

} // namespace

FitResult fit_parameters(const TransmissionDataset& data,
                         const SystemParams& init,
                         const std::vector<std::string>& free_fields,
                         const FitOptions& opts) {
    data.validate();
    if (free_fields.empty())
        throw InvalidParams("no free fields given");
    for (const auto& f : free_fields)
        if (std::find(kFittable.begin(), kFittable.end(), f) == kFittable.end())
            throw InvalidParams("field is not fittable: " + f);

    SystemParams base = init;
    base.n_fock = opts.n_fock;
    base.theta_in = data.theta_in;
    base.validate();

    int total_evals = 0;
    const auto fn = [&](const std::vector<double>& x) {
        ++total_evals;
        SystemParams p;
        try {
            p = with_vector(base, free_fields, x);
            p.validate();
        } catch (const InvalidParams&) {
            return std::numeric_limits<double>::infinity();
        }
        return objective(p, data, nullptr);
    };

    const int n = int(free_fields.size());
    std::vector<double> x0(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        x0[size_t(i)] = get_field(base, free_fields[size_t(i)]);
    const auto steps_for = [&](const std::vector<double>& x) {
        std::vector<double> s(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double mag = std::abs(x[size_t(i)]);
            s[size_t(i)] = mag > 0.5 ? 0.08 * mag : 0.25;
        }
        return s;
    };

    SimplexOutcome best =
        nelder_mead(fn, x0, steps_for(x0), opts.max_evals, opts.ftol, opts.xtol);

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> jitter(-0.08, 0.08);
    for (int r = 0; r < opts.restarts; ++r) {
        std::vector<double> xr = best.x;
        for (int i = 0; i < n; ++i) {
            const double mag = std::abs(xr[size_t(i)]);
            xr[size_t(i)] += jitter(rng) * (mag > 0.5 ? mag : 1.0);
        }
        SimplexOutcome cand = nelder_mead(fn, xr, steps_for(xr),
                                          opts.max_evals, opts.ftol, opts.xtol);
        if (cand.f < best.f) best = cand;
    }

    FitResult out;
    out.params = with_vector(base, free_fields, best.x);
    out.sse = objective(out.params, data, &out.per_trace_scales);
    out.n_evals = total_evals;
    out.converged = best.converged;
    return out;
}

TransmissionDataset synth_dataset(const SystemParams& truth,
                                  const std::vector<double>& theta_outs,
                                  double f_min, double f_max, int n_points,
                                  double noise_sigma, std::uint64_t seed) {
    if (n_points < 10) throw InvalidParams("n_points must be >= 10");
    if (!(f_max > f_min)) throw InvalidParams("bad detuning range");

    const SpaceLayout layout(truth.n_fock);
    std::vector<PolarizedMode> modes;
    modes.reserve(theta_outs.size());
    for (double th : theta_outs)
        modes.push_back(polarized_mode(layout, JonesVector::from_angle_deg(th)));

    TransmissionDataset data;
    data.theta_in = truth.theta_in;
    data.traces.resize(theta_outs.size());
    for (size_t t = 0; t < theta_outs.size(); ++t) {
        data.traces[t].theta_out = theta_outs[t];
        data.traces[t].detuning.resize(size_t(n_points));
        data.traces[t].transmission.resize(size_t(n_points));
    }

    for (int k = 0; k < n_points; ++k) {
        SystemParams p = truth;
        p.f_laser = f_min + (f_max - f_min) * double(k) / double(n_points - 1);
        const DensityMatrix rho = steady_state(build_liouvillian(p));
        for (size_t t = 0; t < theta_outs.size(); ++t) {
            data.traces[t].detuning[size_t(k)] = p.f_laser;
            data.traces[t].transmission[size_t(k)] = transmission(rho, modes[t]);
        }
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (auto& tr : data.traces) {
        const double peak =
            *std::max_element(tr.transmission.begin(), tr.transmission.end());
        for (double& v : tr.transmission) {
            v = peak > 0 ? 0.95 * v / peak : 0.0;
            if (noise_sigma > 0) v += noise(rng);
            v = std::clamp(v, 0.0, 1.05);
        }
    }
    return data;
}

} // namespace polcav

#include "polcav/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polcav {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double calibrate_eta(double kappa, double target_nbar) {
    if (kappa <= 0) throw InvalidParams("kappa must be > 0");
    if (target_nbar < 0) throw InvalidParams("target_nbar must be >= 0");
    return kappa * std::sqrt(target_nbar);
}

void AxisSpec::validate() const {
    if (name.empty()) throw InvalidParams("axis name is empty");
    if (n_points < 2) throw InvalidParams("axis needs at least 2 points");
    if (!(stop > start)) throw InvalidParams("axis stop must exceed start");
}

std::vector<double> AxisSpec::values() const {
    validate();
    std::vector<double> v(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i)
        v[size_t(i)] = start + (stop - start) * double(i) / double(n_points - 1);
    return v;
}

SystemParams apply_axis(SystemParams p, const std::string& name, double value) {
    if (name == "kappa") p.kappa = value;
    else if (name == "g_x") p.g_x = value;
    else if (name == "g_y") p.g_y = value;
    else if (name == "g") { p.g_x = value; p.g_y = value; }
    else if (name == "gamma_par") p.gamma_par = value;
    else if (name == "gamma_star") p.gamma_star = value;
    else if (name == "f_cav_x") p.f_cav_x = value;
    else if (name == "f_cav_y") p.f_cav_y = value;
    else if (name == "f_qd_x") p.f_qd_x = value;
    else if (name == "f_qd_y") p.f_qd_y = value;
    else if (name == "f_laser") p.f_laser = value;
    else if (name == "eta") p.eta = value;
    else if (name == "theta_in") p.theta_in = value;
    else if (name == "qd_common_offset") { p.f_qd_x += value; p.f_qd_y += value; }
    else
        throw InvalidParams("unknown parameter axis: " + name);
    return p;
}

namespace {

std::vector<PolarizedMode> theta_modes(const SpaceLayout& layout,
                                       const std::vector<double>& thetas) {
    std::vector<PolarizedMode> modes;
    modes.reserve(thetas.size());
    for (double th : thetas)
        modes.push_back(polarized_mode(layout, JonesVector::from_angle_deg(th)));
    return modes;
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec, int n_threads) {
    spec.base.validate();
    const SpaceLayout layout(spec.base.n_fock);

    SweepResult res;
    res.n_fock = spec.base.n_fock;

    if (spec.scenario == Scenario::PnVsTheta) {
        if (spec.axis1.name != "theta_out")
            throw InvalidParams("PnVsTheta needs a theta_out axis");
        res.a1 = spec.axis1.values();
        const Liouvillian L = build_liouvillian(spec.base);
        const DensityMatrix rho = steady_state(L);
        res.residuals.push_back(rho.residual);
        res.pn.reserve(res.a1.size());
        for (double th : res.a1)
            res.pn.push_back(photon_number_dist(rho, layout, th).p);
        return res;
    }

    if (spec.axis1.name != "theta_out")
        throw InvalidParams("map scenarios use theta_out as the second axis");
    res.a0 = spec.axis0.values();
    res.a1 = spec.axis1.values();
    const int n0 = int(res.a0.size());
    const int n1 = int(res.a1.size());
    const std::vector<PolarizedMode> modes = theta_modes(layout, res.a1);

    const bool want_t = spec.scenario == Scenario::TransmissionMap;
    const bool want_g2 = spec.scenario == Scenario::G2Map;
    if (want_t) {
        res.T_raw.assign(size_t(n0) * size_t(n1), kNaN);
        res.T_colnorm.assign(size_t(n0) * size_t(n1), kNaN);
    }
    if (want_g2) res.g2.assign(size_t(n0) * size_t(n1), kNaN);
    res.residuals.assign(size_t(n0), kNaN);

    int failures = 0;
#ifdef _OPENMP
    if (n_threads > 0) omp_set_num_threads(n_threads);
#pragma omp parallel for schedule(dynamic) reduction(+ : failures)
#endif
    for (int i = 0; i < n0; ++i) {
        try {
            const SystemParams p =
                apply_axis(spec.base, spec.axis0.name, res.a0[size_t(i)]);
            const Liouvillian L = build_liouvillian(p);
            const DensityMatrix rho = steady_state(L);
            res.residuals[size_t(i)] = rho.residual;
            for (int j = 0; j < n1; ++j) {
                const size_t idx = size_t(i) * size_t(n1) + size_t(j);
                if (want_t) {
                    res.T_raw[idx] = transmission(rho, modes[size_t(j)]);
                } else if (want_g2) {
                    try {
                        res.g2[idx] = g2_zero(rho, modes[size_t(j)]);
                    } catch (const ZeroIntensity&) {
                        ++failures; // dark cell stays NaN
                    }
                }
            }
        } catch (const std::exception&) {
            ++failures; // whole row stays NaN
        }
    }
    res.n_failures = failures;

    if (want_t) {
        for (int j = 0; j < n1; ++j) {
            double colmax = 0.0;
            for (int i = 0; i < n0; ++i) {
                const double v = res.T_raw[size_t(i) * size_t(n1) + size_t(j)];
                if (std::isfinite(v)) colmax = std::max(colmax, v);
            }
            for (int i = 0; i < n0; ++i) {
                const size_t idx = size_t(i) * size_t(n1) + size_t(j);
                res.T_colnorm[idx] =
                    colmax > 0 ? res.T_raw[idx] / colmax : kNaN;
            }
        }
    }
    return res;
}

G2Max g2_grid_max(const SystemParams& base, const std::string& axis0_name,
                  const std::vector<double>& axis0_values,
                  const std::vector<double>& thetas,
                  double min_numerator) {
    const SpaceLayout layout(base.n_fock);
    const std::vector<PolarizedMode> modes = theta_modes(layout, thetas);
    G2Max best{-std::numeric_limits<double>::infinity(), 0.0, 0.0};
    for (double v : axis0_values) {
        const SystemParams p = apply_axis(base, axis0_name, v);
        DensityMatrix rho;
        try {
            rho = steady_state(build_liouvillian(p));
        } catch (const std::exception&) {
            continue;
        }
        for (size_t j = 0; j < thetas.size(); ++j) {
            const G2Cell c = g2_cell(rho, modes[j]);
            if (c.transmission < kIntensityFloor) continue;
            if (c.numerator <= min_numerator) continue;
            if (std::isfinite(c.g2) && c.g2 > best.g2)
                best = G2Max{c.g2, v, thetas[j]};
        }
    }
    if (!std::isfinite(best.g2))
        throw NotFound("no finite g2 cell on the grid");
    return best;
}

G2Max g2_refined_max(const SystemParams& base, const std::string& axis0_name,
                     const AxisSpec& axis0, const AxisSpec& theta,
                     int refine_stages, double min_numerator) {
    G2Max best = g2_grid_max(base, axis0_name, axis0.values(), theta.values(),
                             min_numerator);
    double step0 = (axis0.stop - axis0.start) / double(axis0.n_points - 1);
    double step1 = (theta.stop - theta.start) / double(theta.n_points - 1);
    for (int stage = 0; stage < refine_stages; ++stage) {
        step0 /= 5.0;
        step1 /= 5.0;
        std::vector<double> vals0, vals1;
        for (int k = -7; k <= 7; ++k)
            vals0.push_back(best.axis0 + step0 * k);
        for (int k = -7; k <= 7; ++k)
            vals1.push_back(best.theta + step1 * k);
        const G2Max cand =
            g2_grid_max(base, axis0_name, vals0, vals1, min_numerator);
        if (cand.g2 > best.g2) best = cand;
    }
    return best;
}

std::vector<KappaPoint> kappa_sweep(const SystemParams& base,
                                    const std::vector<double>& kappas,
                                    double target_nbar,
                                    const AxisSpec& laser_axis,
                                    const AxisSpec& theta_axis,
                                    int refine_stages) {
    std::vector<KappaPoint> out;
    out.reserve(kappas.size());
    for (double k : kappas) {
        SystemParams p = base;
        p.kappa = k;
        p.eta = calibrate_eta(k, target_nbar);

        // Per-rung truncation-noise floor.  A matched empty cavity (same
        // kappa/eta/n_fock, emitter decoupled) holds a near-coherent state
        // whose crossed-port two-photon numerator is pure Fock-truncation
        // junk: the coherent amplitude cancels exactly at that analyzer
        // setting.  Driving it on cavity resonance maximizes the intracavity
        // photon number, so this junk scale bounds every cell of the rung.
        // Cells whose numerator is not well above it carry no trustworthy
        // g2 and are skipped by the grid search.
        SystemParams empty = p;
        empty.qd_x_enabled = false;
        empty.qd_y_enabled = false;
        empty.g_x = 0.0;
        empty.g_y = 0.0;
        empty.f_laser = empty.f_cav_x;
        const SpaceLayout layout(empty.n_fock);
        const DensityMatrix rho0 = steady_state(build_liouvillian(empty));
        const PolarizedMode crossed = polarized_mode(
            layout, JonesVector::from_angle_deg(empty.theta_in + 90.0));
        const double min_num = 10.0 * g2_cell(rho0, crossed).numerator;

        const G2Max m = g2_refined_max(p, "f_laser", laser_axis, theta_axis,
                                       refine_stages, min_num);
        out.push_back(KappaPoint{k, p.eta, m.g2, m.axis0, m.theta});
    }
    return out;
}

std::vector<StudyPoint> param_study(const SystemParams& base,
                                    const std::string& param,
                                    const std::vector<double>& values,
                                    const AxisSpec& offset_axis,
                                    const AxisSpec& theta_axis,
                                    int refine_stages) {
    std::vector<StudyPoint> out;
    out.reserve(values.size());
    for (double v : values) {
        const SystemParams p = apply_axis(base, param, v);
        const G2Max m = g2_refined_max(p, "qd_common_offset", offset_axis,
                                       theta_axis, refine_stages);
        out.push_back(StudyPoint{v, m.g2, m.axis0, m.theta});
    }
    return out;
}

namespace {

// Vertex refinement of a grid minimum: fit a parabola through the three
// samples along one axis; returns the offset in index units, clamped to the
// cell.
double parabolic_offset(double ym, double y0, double yp) {
    const double denom = ym - 2.0 * y0 + yp;
    if (denom <= 0) return 0.0;
    return std::clamp(0.5 * (ym - yp) / denom, -1.0, 1.0);
}

} // namespace

SpecialAngles find_special_angles(const SystemParams& base,
                                  const AxisSpec& theta_axis,
                                  const AxisSpec& laser_axis,
                                  double window_ghz) {
    if (!base.qd_x_enabled || base.g_x <= 0 || !base.qd_y_enabled ||
        base.g_y <= 0)
        throw NotFound("both QD transitions must be enabled and coupled");

    const std::vector<double> thetas = theta_axis.values();
    const std::vector<double> lasers = laser_axis.values();
    const SpaceLayout layout(base.n_fock);
    const std::vector<PolarizedMode> modes = theta_modes(layout, thetas);

    const int n0 = int(lasers.size());
    const int n1 = int(thetas.size());
    std::vector<double> tmap(size_t(n0) * size_t(n1), kNaN);
    for (int i = 0; i < n0; ++i) {
        SystemParams p = base;
        p.f_laser = lasers[size_t(i)];
        const DensityMatrix rho = steady_state(build_liouvillian(p));
        for (int j = 0; j < n1; ++j)
            tmap[size_t(i) * size_t(n1) + size_t(j)] =
                transmission(rho, modes[size_t(j)]);
    }

    const auto locate = [&](double line, double& theta_out, double& f_out,
                            double& t_out) {
        int bi = -1, bj = -1;
        double bv = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n0; ++i) {
            if (std::abs(lasers[size_t(i)] - line) > window_ghz) continue;
            for (int j = 0; j < n1; ++j) {
                const double v = tmap[size_t(i) * size_t(n1) + size_t(j)];
                if (v < bv) { bv = v; bi = i; bj = j; }
            }
        }
        if (bi < 0)
            throw NotFound("no grid point within the line window");
        if (bi == 0 || bi == n0 - 1 || bj == 0 || bj == n1 - 1)
            throw NotFound("transmission minimum sits on the grid boundary");

        const auto at = [&](int i, int j) {
            return tmap[size_t(i) * size_t(n1) + size_t(j)];
        };
        const double di =
            parabolic_offset(at(bi - 1, bj), bv, at(bi + 1, bj));
        const double dj =
            parabolic_offset(at(bi, bj - 1), bv, at(bi, bj + 1));
        f_out = lasers[size_t(bi)] + di * (lasers[1] - lasers[0]);
        theta_out = thetas[size_t(bj)] + dj * (thetas[1] - thetas[0]);
        t_out = bv;
    };

    SpecialAngles s;
    locate(base.f_qd_x, s.theta_x, s.f_x, s.t_x);
    locate(base.f_qd_y, s.theta_y, s.f_y, s.t_y);
    return s;
}

} // namespace polcav

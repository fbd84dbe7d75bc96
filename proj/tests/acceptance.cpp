// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.  The oracle suite (criterion 8, parts a-e) runs first and blocks
// the paper-number criteria when it fails; its truncation-convergence audit
// (part f) is filled in by the criteria as they compute their maps and is
// folded into the final C8 verdict.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "polcav/fit.hpp"
#include "polcav/sweeps.hpp"

using namespace polcav;

namespace {

using clk = std::chrono::steady_clock;

double elapsed(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return std::string(buf);
}

struct Criterion {
    std::string id;
    bool pass = false;
    std::string summary;
};

std::vector<Criterion> g_results;

void record(const std::string& id, bool pass, const std::string& summary) {
    g_results.push_back({id, pass, summary});
    printf("%s %s  %s\n", pass ? "PASS" : "FAIL", id.c_str(), summary.c_str());
}

void note(const std::string& s) { printf("    %s\n", s.c_str()); }

double rel_err(double measured, double truth) {
    return std::abs(measured - truth) / std::abs(truth);
}

// Truncation-convergence audit entries (criterion 8f): each reported map
// maximum, re-evaluated with one more Fock level.
struct ConvEntry {
    std::string name;
    double at_nf = 0.0;     // value at the production truncation
    double at_nf_p1 = 0.0;  // value with n_fock + 1
    double pct() const { return 100.0 * rel_err(at_nf_p1, at_nf); }
};

std::vector<ConvEntry> g_conv;

double g2_at_point(SystemParams p, double theta_out) {
    const SpaceLayout layout(p.n_fock);
    const DensityMatrix rho = steady_state(build_liouvillian(p));
    return g2_zero(rho,
                   polarized_mode(layout, JonesVector::from_angle_deg(theta_out)));
}

// Map grids shared by the bunching-map criteria (2, 5): the production
// resolution locates the ridge, two refinement stages sharpen it.
const AxisSpec kOffsetAxis{"qd_common_offset", -6.0, 6.0, 121};
const AxisSpec kThetaAxis{"theta_out", -90.0, 0.0, 181};
constexpr int kRefine = 2;

double poisson_pmf(double lambda, int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return std::exp(-lambda) * std::pow(lambda, n) / f;
}

double g2_from_pn(const PhotonNumberDist& d) {
    double n1 = 0, n2 = 0;
    for (std::size_t n = 0; n < d.p.size(); ++n) {
        n1 += double(n) * d.p[n];
        n2 += double(n) * double(n - 1) * d.p[n];
    }
    return n2 / (n1 * n1);
}

bool density_matrix_sane(const DensityMatrix& rho, const std::string& label) {
    const bool ok = rho.trace_error() < 1e-10 && rho.hermiticity_error() < 1e-10 &&
                    rho.min_eig > -1e-10 && rho.residual < 1e-9;
    note(fmt("%s: |tr-1|=%.1e herm=%.1e min_eig=%+.1e residual=%.1e %s",
             label.c_str(), rho.trace_error(), rho.hermiticity_error(),
             rho.min_eig, rho.residual, ok ? "ok" : "VIOLATION"));
    return ok;
}

} // namespace

int main() {
    setvbuf(stdout, nullptr, _IONBF, 0);
    const clk::time_point t_all = clk::now();
    printf("=== polcav acceptance ===\n");

    // ------------------------------------------------------------------
    // Criterion 8, parts a-e: oracle gate (no paper numbers).
    // ------------------------------------------------------------------
    bool gate_ok = true;
    std::vector<std::string> gate_fails;
    const auto gate_check = [&](bool ok, const std::string& what) {
        if (!ok) {
            gate_ok = false;
            gate_fails.push_back(what);
            note("GATE VIOLATION: " + what);
        }
    };
    printf("[gate] oracle suite (criterion 8, parts a-e)\n");
    try {
        // (a) empty-cavity coherent state: T = eta^2/kappa^2, g2 = 1,
        //     Poissonian photon numbers in any analyzer basis.
        SystemParams ec = preset_qd_a();
        ec.g_x = 0.0;
        ec.g_y = 0.0;
        ec.qd_x_enabled = false;
        ec.qd_y_enabled = false;
        ec.n_fock = 6;
        const SpaceLayout ec_layout(ec.n_fock);
        const DensityMatrix ec_rho = steady_state(build_liouvillian(ec));
        const double T_expect = (ec.eta / ec.kappa) * (ec.eta / ec.kappa);
        const PolarizedMode co = polarized_mode(
            ec_layout, JonesVector::from_angle_deg(ec.theta_in));
        const double T_co = transmission(ec_rho, co);
        note(fmt("empty cavity: T_co=%.8f expected %.8f", T_co, T_expect));
        gate_check(rel_err(T_co, T_expect) < 1e-6, "empty-cavity T != eta^2/kappa^2");
        for (double th : {45.0, 10.0, -30.0}) {
            const PolarizedMode m =
                polarized_mode(ec_layout, JonesVector::from_angle_deg(th));
            const double g2 = g2_zero(ec_rho, m);
            gate_check(std::abs(g2 - 1.0) < 1e-6,
                       fmt("empty-cavity g2(theta=%g) = %.8f != 1", th, g2));
            const double lambda = transmission(ec_rho, m);
            const PhotonNumberDist d = photon_number_dist(ec_rho, ec_layout, th);
            for (int n = 0; n < 4; ++n) {
                const double want = poisson_pmf(lambda, n);
                gate_check(std::abs(d.p[size_t(n)] - want) <= 1e-5 * want + 1e-12,
                           fmt("empty-cavity P_%d(theta=%g) not Poissonian", n, th));
            }
        }

        // (b) cross-polarized extinction.
        const PolarizedMode cross = polarized_mode(
            ec_layout, JonesVector::from_angle_deg(ec.theta_in + 90.0));
        const double T_cross = transmission(ec_rho, cross);
        note(fmt("empty cavity crossed: T=%.3e", T_cross));
        gate_check(T_cross < 1e-12, "cross-polarized output not extinguished");
        bool threw = false;
        try {
            (void)g2_zero(ec_rho, cross);
        } catch (const ZeroIntensity&) {
            threw = true;
        }
        gate_check(threw, "dark analyzer did not raise ZeroIntensity");

        // (c) physicality of representative steady states.
        SystemParams a4 = preset_qd_a();
        a4.n_fock = 4;
        SystemParams b4 = preset_qd_b();
        b4.n_fock = 4;
        const SpaceLayout l4(4);
        const DensityMatrix rho_a = steady_state(build_liouvillian(a4));
        const DensityMatrix rho_b = steady_state(build_liouvillian(b4));
        gate_check(density_matrix_sane(ec_rho, "empty nf=6"), "empty-cavity state unphysical");
        gate_check(density_matrix_sane(rho_a, "qd_a nf=4"), "qd_a state unphysical");
        gate_check(density_matrix_sane(rho_b, "qd_b nf=4"), "qd_b state unphysical");

        // (d) operator vs photon-number-moment g2 on an interacting state.
        for (double th : {-25.0, -65.0, 20.0}) {
            const double direct = g2_zero(
                rho_a, polarized_mode(l4, JonesVector::from_angle_deg(th)));
            const double from_pn = g2_from_pn(photon_number_dist(rho_a, l4, th));
            gate_check(rel_err(from_pn, direct) < 1e-6,
                       fmt("g2 vs P_n moments disagree at theta=%g (%.3e)", th,
                           rel_err(from_pn, direct)));
        }
        note("operator vs P_n-moment g2 agreement < 1e-6 at 3 angles");

        // (e) two-photon estimate 2 P2 / P1^2 in the low-drive limit.
        SystemParams weak = preset_qd_a();
        weak.n_fock = 4;
        weak.eta = weak.kappa * 0.01; // empty-cavity nbar = 1e-4 < 1e-3
        const DensityMatrix rho_w = steady_state(build_liouvillian(weak));
        const double g2w = g2_zero(
            rho_w, polarized_mode(l4, JonesVector::from_angle_deg(-25.0)));
        const double est = g2_lowdrive_check(photon_number_dist(rho_w, l4, -25.0));
        note(fmt("low drive: g2=%.4f 2P2/P1^2=%.4f (rel %.2f%%)", g2w, est,
                 100 * rel_err(est, g2w)));
        gate_check(rel_err(est, g2w) < 0.05, "2P2/P1^2 not within 5% of g2 at nbar<1e-3");
    } catch (const std::exception& e) {
        gate_ok = false;
        gate_fails.push_back(fmt("exception: %s", e.what()));
        note(fmt("GATE EXCEPTION: %s", e.what()));
    }
    if (!gate_ok) {
        record("C8", false,
               fmt("oracle suite gate failed (%zu violations); paper-number "
                   "criteria not evaluated",
                   gate_fails.size()));
        printf("=== 0/9 criteria evaluated to PASS; gate failure ===\n");
        return 1;
    }
    printf("[gate] all oracle checks passed (convergence audit pending)\n");

    // ------------------------------------------------------------------
    // Criterion 1: cooperativity from the preset reports.
    // ------------------------------------------------------------------
    {
        const double c_a = cooperativity(preset_qd_a());
        const double c_b = cooperativity(preset_qd_b());
        const bool ok = std::abs(c_a - 0.42) <= 0.01 && std::abs(c_b - 1.56) <= 0.05;
        record("C1", ok,
               fmt("cooperativity qd_a C=%.4f (0.42+-0.01), qd_b C=%.4f (1.56+-0.05)",
                   c_a, c_b));
    }

    // ------------------------------------------------------------------
    // Criterion 2: QD A bunching-map maximum at n_fock = 4.
    // ------------------------------------------------------------------
    G2Max maxA{};
    bool haveA = false;
    {
        const clk::time_point t0 = clk::now();
        try {
            SystemParams a4 = preset_qd_a();
            a4.n_fock = 4;
            maxA = g2_refined_max(a4, "qd_common_offset", kOffsetAxis, kThetaAxis,
                                  kRefine);
            haveA = true;
            note(fmt("qd_a map max %.4f at offset=%.3f GHz theta_out=%.2f deg [%.0f s]",
                     maxA.g2, maxA.axis0, maxA.theta, elapsed(t0)));
            // Full-protocol truncation audit for the headline map.
            SystemParams a5 = a4;
            a5.n_fock = 5;
            const G2Max maxA5 = g2_refined_max(a5, "qd_common_offset", kOffsetAxis,
                                               kThetaAxis, kRefine);
            note(fmt("qd_a map max at n_fock=5: %.4f at (%.3f, %.2f)", maxA5.g2,
                     maxA5.axis0, maxA5.theta));
            g_conv.push_back({"qd_a map max (full rerun)", maxA.g2, maxA5.g2});
            const bool ok = std::abs(maxA.g2 - 3.7) <= 0.6;
            record("C2", ok,
                   fmt("qd_a map max g2(0)=%.3f vs 3.7+-0.6 (offset=%.3f GHz, "
                       "theta_out=%.2f deg)",
                       maxA.g2, maxA.axis0, maxA.theta));
        } catch (const std::exception& e) {
            record("C2", false, fmt("exception: %s", e.what()));
        }
    }

    // ------------------------------------------------------------------
    // Criterion 3: special polarization angles and the A/B difference.
    // ------------------------------------------------------------------
    {
        const clk::time_point t0 = clk::now();
        try {
            const AxisSpec th_axis{"theta_out", -90.0, 0.0, 361};
            const AxisSpec la_axis{"f_laser", -6.0, 6.0, 121};
            SystemParams a4 = preset_qd_a();
            a4.n_fock = 4;
            SystemParams a3 = a4;
            a3.n_fock = 3;
            SystemParams b4 = preset_qd_b();
            b4.n_fock = 4;
            const SpecialAngles sA = find_special_angles(a4, th_axis, la_axis, 1.0);
            const SpecialAngles sA3 = find_special_angles(a3, th_axis, la_axis, 1.0);
            const SpecialAngles sB = find_special_angles(b4, th_axis, la_axis, 1.0);
            note(fmt("qd_a: theta_x=%.3f (f=%.3f, T=%.2e) theta_y=%.3f (f=%.3f, T=%.2e)",
                     sA.theta_x, sA.f_x, sA.t_x, sA.theta_y, sA.f_y, sA.t_y));
            note(fmt("qd_b: theta_x=%.3f (f=%.3f) theta_y=%.3f (f=%.3f)", sB.theta_x,
                     sB.f_x, sB.theta_y, sB.f_y));
            const double stab_x = std::abs(sA.theta_x - sA3.theta_x);
            const double stab_y = std::abs(sA.theta_y - sA3.theta_y);
            note(fmt("truncation stability nf=3 -> 4: dtheta_x=%.3f dtheta_y=%.3f deg",
                     stab_x, stab_y));
            const double dx = std::abs(sA.theta_x - sB.theta_x);
            const double dy = std::abs(sA.theta_y - sB.theta_y);
            const bool ok_a = std::abs(sA.theta_x - (-25.0)) <= 3.0 &&
                              std::abs(sA.theta_y - (-65.0)) <= 3.0;
            const bool ok_d = std::abs(dx - 11.0) <= 3.0 && std::abs(dy - 11.0) <= 3.0;
            const bool ok_stab = stab_x < 0.5 && stab_y < 0.5;
            record("C3", ok_a && ok_d && ok_stab,
                   fmt("qd_a angles (%.2f, %.2f) vs (-25, -65)+-3; A/B diffs "
                       "(%.2f, %.2f) vs 11+-3",
                       sA.theta_x, sA.theta_y, dx, dy));
            note(fmt("[%.0f s]", elapsed(t0)));
        } catch (const std::exception& e) {
            record("C3", false, fmt("exception: %s", e.what()));
        }
    }

    // ------------------------------------------------------------------
    // Criterion 4: detector-convolved g2 peaks at the map maxima.
    // ------------------------------------------------------------------
    G2Max maxB{};
    {
        const clk::time_point t0 = clk::now();
        try {
            if (!haveA) throw NotFound("qd_a map maximum unavailable (criterion 2)");
            // QD A trace at its own map maximum.
            SystemParams pa = preset_qd_a();
            pa.n_fock = 4;
            pa = apply_axis(pa, "qd_common_offset", maxA.axis0);
            const Liouvillian La = build_liouvillian(pa);
            const DensityMatrix ra = steady_state(La);
            const SpaceLayout l4(4);
            const PolarizedMode ma =
                polarized_mode(l4, JonesVector::from_angle_deg(maxA.theta));
            PropagationSpec specA;
            specA.tau_max = 6.0;
            specA.n_samples = 601;
            const CorrelationTrace trA = g2_trace(La, ra, ma, specA);
            const CorrelationTrace cvA = convolve_detector(trA, 500.0);
            const double rawA = *std::max_element(trA.g2.begin(), trA.g2.end());
            const double peakA = *std::max_element(cvA.g2.begin(), cvA.g2.end());
            note(fmt("qd_a: raw peak %.3f, 500 ps peak %.3f [%.0f s]", rawA, peakA,
                     elapsed(t0)));

            // QD B map maximum, then its trace.
            SystemParams b4 = preset_qd_b();
            b4.n_fock = 4;
            maxB = g2_refined_max(b4, "qd_common_offset", kOffsetAxis, kThetaAxis,
                                  kRefine);
            note(fmt("qd_b map max %.4f at offset=%.3f GHz theta_out=%.2f deg",
                     maxB.g2, maxB.axis0, maxB.theta));
            SystemParams b5 = b4;
            b5.n_fock = 5;
            const G2Max maxB5 = g2_refined_max(b5, "qd_common_offset", kOffsetAxis,
                                               kThetaAxis, kRefine);
            note(fmt("qd_b map max at n_fock=5: %.4f at (%.3f, %.2f)", maxB5.g2,
                     maxB5.axis0, maxB5.theta));
            g_conv.push_back({"qd_b map max (full rerun)", maxB.g2, maxB5.g2});

            SystemParams pb = apply_axis(b4, "qd_common_offset", maxB.axis0);
            const Liouvillian Lb = build_liouvillian(pb);
            const DensityMatrix rb = steady_state(Lb);
            const PolarizedMode mb =
                polarized_mode(l4, JonesVector::from_angle_deg(maxB.theta));
            PropagationSpec specB;
            specB.tau_max = 10.0;
            specB.n_samples = 1001;
            const CorrelationTrace trB = g2_trace(Lb, rb, mb, specB);
            const CorrelationTrace cvB = convolve_detector(trB, 500.0);
            const double rawB = *std::max_element(trB.g2.begin(), trB.g2.end());
            const double peakB = *std::max_element(cvB.g2.begin(), cvB.g2.end());
            note(fmt("qd_b: raw peak %.3f, 500 ps peak %.3f", rawB, peakB));

            const bool ok_a = std::abs(peakA - 2.1) <= 0.3;
            const bool ok_b_band = std::abs(peakB - 25.0) <= 8.0;
            const bool ok_b_raw = rawB >= 40.0;
            if (!ok_b_band) {
                // The stated fallback: re-evaluate the width-parameter reading
                // (FWHM vs sigma) and document the alternative.
                const double fwhm_if_sigma = 500.0 * 2.0 * std::sqrt(2.0 * std::log(2.0));
                const CorrelationTrace cvBs = convolve_detector(trB, fwhm_if_sigma);
                note(fmt("qd_b 500 ps band failed; sigma-reading (FWHM=%.1f ps) "
                         "peak %.3f",
                         fwhm_if_sigma,
                         *std::max_element(cvBs.g2.begin(), cvBs.g2.end())));
            }
            record("C4", ok_a && ok_b_band && ok_b_raw,
                   fmt("conv 500 ps peaks: qd_a %.3f vs 2.1+-0.3; qd_b %.3f vs "
                       "25+-8 (raw %.1f >= 40)",
                       peakA, peakB, rawB));
        } catch (const std::exception& e) {
            record("C4", false, fmt("exception: %s", e.what()));
        }
    }

    // ------------------------------------------------------------------
    // Criterion 5: dephasing dominates the parameter sensitivities.
    // ------------------------------------------------------------------
    {
        const clk::time_point t0 = clk::now();
        try {
            if (!haveA) throw NotFound("baseline map maximum unavailable");
            SystemParams a4 = preset_qd_a();
            a4.n_fock = 4;
            const StudyPoint st_gs =
                param_study(a4, "gamma_star", {0.5}, kOffsetAxis, kThetaAxis, kRefine)[0];
            const StudyPoint st_g =
                param_study(a4, "g", {7.5}, kOffsetAxis, kThetaAxis, kRefine)[0];
            const StudyPoint st_k =
                param_study(a4, "kappa", {34.5}, kOffsetAxis, kThetaAxis, kRefine)[0];
            const double d_g = 100 * (st_g.g2_max - maxA.g2) / maxA.g2;
            const double d_k = 100 * (st_k.g2_max - maxA.g2) / maxA.g2;
            note(fmt("baseline %.3f; gamma*=0.5 -> %.3f; g/2 -> %.3f (%+.1f%%); "
                     "kappa/2 -> %.3f (%+.1f%%) [%.0f s]",
                     maxA.g2, st_gs.g2_max, st_g.g2_max, d_g, st_k.g2_max, d_k,
                     elapsed(t0)));
            for (const auto& [name, st, mod, val] :
                 {std::tuple{"study gamma*=0.5", st_gs, "gamma_star", 0.5},
                  std::tuple{"study g/2", st_g, "g", 7.5},
                  std::tuple{"study kappa/2", st_k, "kappa", 34.5}}) {
                SystemParams p5 = apply_axis(a4, mod, val);
                p5 = apply_axis(p5, "qd_common_offset", st.at_offset);
                p5.n_fock = 5;
                g_conv.push_back({name, st.g2_max, g2_at_point(p5, st.at_theta)});
            }
            const bool ok = st_gs.g2_max > 30.0 && std::abs(d_g) < 50.0 &&
                            std::abs(d_k) < 50.0;
            record("C5", ok,
                   fmt("gamma*=0.5 max %.1f > 30; |g/2| change %.1f%% < 50; "
                       "|kappa/2| change %.1f%% < 50",
                       st_gs.g2_max, std::abs(d_g), std::abs(d_k)));
        } catch (const std::exception& e) {
            record("C5", false, fmt("exception: %s", e.what()));
        }
    }

    // ------------------------------------------------------------------
    // Criterion 6: kappa ladder with constant output flux.
    // ------------------------------------------------------------------
    {
        const clk::time_point t0 = clk::now();
        try {
            SystemParams b4 = preset_qd_b();
            b4.n_fock = 4;
            const double k0 = b4.kappa;
            const std::vector<double> kappas{0.5 * k0, k0, 2 * k0, 4 * k0, 8 * k0};
            const AxisSpec laser{"f_laser", -8.0, 8.0, 161};
            const std::vector<KappaPoint> pts =
                kappa_sweep(b4, kappas, 0.01, laser, kThetaAxis, kRefine);
            bool decreasing = true;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                note(fmt("rung kappa=%.1f eta=%.2f: max g2=%.4f at (f_laser=%.3f, "
                         "theta=%.2f)",
                         pts[i].kappa, pts[i].eta, pts[i].g2_max, pts[i].at_laser,
                         pts[i].at_theta));
                if (i > 0 && !(pts[i].g2_max < pts[i - 1].g2_max)) decreasing = false;
                SystemParams p5 = b4;
                p5.kappa = pts[i].kappa;
                p5.eta = pts[i].eta;
                p5.f_laser = pts[i].at_laser;
                p5.n_fock = 5;
                g_conv.push_back({fmt("ladder kappa=%.1f", pts[i].kappa),
                                  pts[i].g2_max, g2_at_point(p5, pts[i].at_theta)});
            }
            const double top = pts.back().g2_max;
            // "approaching 1 at the top" operationalized as the final rung
            // sitting below 2.
            const bool ok = decreasing && top < 2.0;
            record("C6", ok,
                   fmt("ladder %s (top rung g2=%.3f, < 2 required) [%.0f s]",
                       decreasing ? "strictly decreasing" : "NOT strictly decreasing",
                       top, elapsed(t0)));
        } catch (const std::exception& e) {
            record("C6", false, fmt("exception: %s", e.what()));
        }
    }

    // ------------------------------------------------------------------
    // Criterion 7: single-transition ablation confines the bunching.
    // ------------------------------------------------------------------
    {
        const clk::time_point t0 = clk::now();
        try {
            int bad_total = 0;
            std::string detail;
            for (const bool drop_y : {true, false}) {
                SweepSpec sp;
                sp.scenario = Scenario::G2Map;
                sp.base = preset_qd_a();
                sp.base.n_fock = 4;
                if (drop_y)
                    sp.base.qd_y_enabled = false;
                else
                    sp.base.qd_x_enabled = false;
                sp.axis0 = AxisSpec{"qd_common_offset", -6.0, 6.0, 61};
                sp.axis1 = AxisSpec{"theta_out", -90.0, 90.0, 91};
                const SweepResult r = run_sweep(sp);
                const double line = drop_y ? sp.base.f_qd_x : sp.base.f_qd_y;
                int bad = 0;
                double worst_g2 = 0, worst_off = 0, worst_th = 0;
                double peak = 0, peak_off = 0, peak_th = 0;
                for (std::size_t i = 0; i < r.a0.size(); ++i)
                    for (std::size_t j = 0; j < r.a1.size(); ++j) {
                        const double v = r.g2[i * r.a1.size() + j];
                        if (!std::isfinite(v) || v <= 2.0) continue;
                        if (v > peak) {
                            peak = v;
                            peak_off = r.a0[i];
                            peak_th = r.a1[j];
                        }
                        // Distance of the laser from the surviving line once
                        // the common offset is applied.
                        if (std::abs(line + r.a0[i] - sp.base.f_laser) > 2.0) {
                            ++bad;
                            if (v > worst_g2) {
                                worst_g2 = v;
                                worst_off = r.a0[i];
                                worst_th = r.a1[j];
                            }
                        }
                    }
                bad_total += bad;
                note(fmt("%s disabled: peak g2=%.2f at (%.2f, %.1f); cells>2 beyond "
                         "2 GHz of remaining line: %d%s",
                         drop_y ? "Y" : "X", peak, peak_off, peak_th, bad,
                         bad ? fmt(" (worst %.3f at offset=%.2f, theta=%.1f)",
                                   worst_g2, worst_off, worst_th)
                                   .c_str()
                             : ""));
                SystemParams p5 = apply_axis(sp.base, "qd_common_offset", peak_off);
                p5.n_fock = 5;
                g_conv.push_back({fmt("ablation %s-only map max", drop_y ? "X" : "Y"),
                                  peak, g2_at_point(p5, peak_th)});
                detail += fmt("%s%s-only: %d stray", detail.empty() ? "" : "; ",
                              drop_y ? "X" : "Y", bad);
            }
            record("C7", bad_total == 0,
                   fmt("g2>2 cells beyond +-2 GHz of the remaining transition: %s "
                       "[%.0f s]",
                       detail.c_str(), elapsed(t0)));
        } catch (const std::exception& e) {
            record("C7", false, fmt("exception: %s", e.what()));
        }
    }

    // ------------------------------------------------------------------
    // Criterion 9: fit round-trip, 10 noise seeds, < 10 minutes.
    // ------------------------------------------------------------------
    {
        const clk::time_point t0 = clk::now();
        try {
            SystemParams truth = preset_qd_a();
            truth.n_fock = 2;
            const std::vector<double> angles{-65.0, -45.0, -25.0, 0.0, 45.0, 90.0};
            const std::vector<std::string> free_fields{
                "kappa", "g", "gamma_par", "gamma_star", "f_qd_x", "f_qd_y"};
            SystemParams init = truth;
            init.kappa *= 1.2;
            init.g_x *= 1.2;
            init.g_y *= 1.2;
            init.gamma_par *= 1.2;
            init.gamma_star *= 1.2;
            init.f_qd_x *= 1.2;
            init.f_qd_y *= 1.2;
            FitOptions fo;
            fo.max_evals = 900;
            fo.restarts = 0;
            fo.n_fock = 2;

            const auto errs = [&](const SystemParams& p) {
                return std::vector<double>{
                    rel_err(p.kappa, truth.kappa),     rel_err(p.g_x, truth.g_x),
                    rel_err(p.gamma_par, truth.gamma_par),
                    rel_err(p.gamma_star, truth.gamma_star),
                    rel_err(p.f_qd_x, truth.f_qd_x),   rel_err(p.f_qd_y, truth.f_qd_y)};
            };
            static const char* kNames[] = {"kappa", "g", "gamma_par", "gamma_star",
                                           "f_qd_x", "f_qd_y"};

            // Zero-noise round trip: 5% bounds, 15% for gamma_par.
            const TransmissionDataset clean =
                synth_dataset(truth, angles, -8.0, 8.0, 41, 0.0, 777);
            const FitResult r0 = fit_parameters(clean, init, free_fields, fo);
            const std::vector<double> e0 = errs(r0.params);
            bool ok_clean = true;
            std::string worst_clean;
            for (int i = 0; i < 6; ++i) {
                const double bound = (i == 2) ? 0.15 : 0.05;
                if (e0[size_t(i)] > bound) {
                    ok_clean = false;
                    worst_clean += fmt(" %s=%.2f%%", kNames[i], 100 * e0[size_t(i)]);
                }
            }
            note(fmt("zero-noise: sse=%.2e evals=%d errors%%: k=%.3f g=%.3f "
                     "gpar=%.3f gstar=%.3f fx=%.3f fy=%.3f%s",
                     r0.sse, r0.n_evals, 100 * e0[0], 100 * e0[1], 100 * e0[2],
                     100 * e0[3], 100 * e0[4], 100 * e0[5],
                     ok_clean ? "" : (" VIOLATIONS:" + worst_clean).c_str()));

            // Ten seeded noise round trips: every parameter within 10%.
            bool ok_noise = true;
            double worst_noise = 0;
            std::string worst_case;
            for (int s = 1; s <= 10; ++s) {
                const TransmissionDataset noisy = synth_dataset(
                    truth, angles, -8.0, 8.0, 41, 0.02, 1000 + std::uint64_t(s));
                const FitResult r = fit_parameters(noisy, init, free_fields, fo);
                const std::vector<double> e = errs(r.params);
                const auto it = std::max_element(e.begin(), e.end());
                const int wi = int(it - e.begin());
                note(fmt("seed %2d: worst err %s=%.2f%% (evals=%d)", s, kNames[wi],
                         100 * *it, r.n_evals));
                if (*it > worst_noise) {
                    worst_noise = *it;
                    worst_case = fmt("seed %d %s", s, kNames[wi]);
                }
                if (*it > 0.10) ok_noise = false;
            }
            const double dt = elapsed(t0);
            const bool ok_time = dt < 600.0;
            record("C9", ok_clean && ok_noise && ok_time,
                   fmt("round-trip: zero-noise %s; noise worst %.2f%% (%s) vs 10%%; "
                       "%.0f s (< 600)",
                       ok_clean ? "within 5%/15%" : ("VIOLATED:" + worst_clean).c_str(),
                       100 * worst_noise, worst_case.c_str(), dt));
        } catch (const std::exception& e) {
            record("C9", false, fmt("exception: %s", e.what()));
        }
    }

    // ------------------------------------------------------------------
    // Criterion 8, final verdict: gate plus the truncation audit.
    // ------------------------------------------------------------------
    {
        bool conv_ok = !g_conv.empty();
        double worst = 0;
        std::string worst_name;
        for (const ConvEntry& c : g_conv) {
            note(fmt("convergence %-28s nf: %.4f  nf+1: %.4f  (%.2f%%)",
                     c.name.c_str(), c.at_nf, c.at_nf_p1, c.pct()));
            if (c.pct() > worst) {
                worst = c.pct();
                worst_name = c.name;
            }
            if (!(c.pct() < 2.0)) conv_ok = false;
        }
        record("C8", gate_ok && conv_ok,
               fmt("oracle suite: gate passed; n_fock->n_fock+1 audit over %zu map "
                   "maxima, worst %.2f%% (%s) vs 2%%",
                   g_conv.size(), worst, worst_name.c_str()));
    }

    // ------------------------------------------------------------------
    int failed = 0;
    printf("--- summary ---\n");
    for (const Criterion& c : g_results) {
        printf("%s %s  %s\n", c.pass ? "PASS" : "FAIL", c.id.c_str(),
               c.summary.c_str());
        if (!c.pass) ++failed;
    }
    printf("=== %zu/%zu criteria pass (%.0f s total) ===\n",
           g_results.size() - size_t(failed), g_results.size(), elapsed(t_all));
    return failed;
}

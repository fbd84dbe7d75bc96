// polcav: steady-state simulator for a resonantly driven quantum dot in a
// polarization-degenerate microcavity.  Each subcommand runs one scenario
// (transmission/g2 maps, correlation traces, photon-number distributions,
// cavity-linewidth and ablation studies, parameter fits) and writes the
// result as CSV or JSON with a self-describing parameter header.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polcav/config.hpp"
#include "polcav/csv.hpp"
#include "polcav/errors.hpp"
#include "polcav/fit.hpp"
#include "polcav/kernels/kernels.hpp"
#include "polcav/version.hpp"

namespace {

using namespace polcav;

// Parameter source shared by every subcommand: a bundled preset, a config
// file, or both (file overrides preset fields it names).
struct ParamOpts {
    std::string preset;
    std::string config_path;
    int n_fock = 0; // 0 = keep
};

void add_param_opts(CLI::App* cmd, ParamOpts& po) {
    cmd->add_option("--preset", po.preset, "Bundled parameter set")
        ->check(CLI::IsMember({"qd_a", "qd_b"}));
    cmd->add_option("-c,--config", po.config_path,
                    "Parameter file (key = value, unit-suffixed keys)");
    cmd->add_option("--n-fock", po.n_fock, "Fock levels per mode override")
        ->check(CLI::PositiveNumber);
}

SystemParams resolve_params(const ParamOpts& po) {
    SystemParams p;
    if (!po.config_path.empty()) {
        Config cfg = Config::load(po.config_path);
        if (!po.preset.empty())
            cfg.set("preset", po.preset);
        cfg.require_known({});
        p = cfg.system_params();
    } else if (po.preset == "qd_a") {
        p = preset_qd_a();
    } else if (po.preset == "qd_b") {
        p = preset_qd_b();
    } else {
        throw ConfigError("no parameters given: use --preset or --config");
    }
    if (po.n_fock > 0)
        p.n_fock = po.n_fock;
    p.validate();
    return p;
}

struct AxisOpts {
    double start = 0.0;
    double stop = 0.0;
    int points = 2;
};

void add_axis_opts(CLI::App* cmd, const std::string& prefix, AxisOpts& ax,
                   const std::string& what) {
    cmd->add_option("--" + prefix + "-start", ax.start, what + " start")
        ->capture_default_str();
    cmd->add_option("--" + prefix + "-stop", ax.stop, what + " stop")
        ->capture_default_str();
    cmd->add_option("--" + prefix + "-points", ax.points, what + " points")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
}

AxisSpec to_axis(const std::string& name, const AxisOpts& ax) {
    return AxisSpec{name, ax.start, ax.stop, ax.points};
}

int default_threads() {
    const char* env = std::getenv("POLCAV_THREADS");
    if (env != nullptr) {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return 0; // let the runtime decide
}

void run_map(Scenario scenario, const SystemParams& base,
             const AxisSpec& axis0, const AxisSpec& theta,
             const std::string& out, int threads) {
    SweepSpec spec;
    spec.scenario = scenario;
    spec.base = base;
    spec.axis0 = axis0;
    spec.axis1 = theta;
    SweepResult res = run_sweep(spec, threads);
    if (scenario == Scenario::PnVsTheta)
        write_pn_csv(out, spec, res);
    else
        write_map_csv(out, spec, res);
    std::cout << "wrote " << out << " (" << res.a0.size() << " x "
              << res.a1.size() << " cells";
    if (res.n_failures > 0)
        std::cout << ", " << res.n_failures << " failed";
    std::cout << ")\n";
}

int run(int argc, char** argv) {
    CLI::App app{"two-polarization cavity-QED transmission and correlation "
                 "simulator"};
    app.set_version_flag("--version", std::string("polcav ") + kVersion);
    app.require_subcommand(1);

    int threads = default_threads();
    app.add_option("--threads", threads,
                   "Worker threads for sweeps (default: POLCAV_THREADS or "
                   "all cores)");

    // ---- params-report ----------------------------------------------------
    auto* rep = app.add_subcommand(
        "params-report", "Print the resolved parameters and derived figures");
    ParamOpts rep_po;
    add_param_opts(rep, rep_po);

    // ---- transmission-map -------------------------------------------------
    auto* tmap = app.add_subcommand(
        "transmission-map", "Transmission vs parameter axis and theta_out");
    ParamOpts tmap_po;
    add_param_opts(tmap, tmap_po);
    std::string tmap_axis = "f_laser";
    tmap->add_option("--axis", tmap_axis, "Parameter axis name")
        ->capture_default_str();
    AxisOpts tmap_ax{-8.0, 8.0, 161};
    add_axis_opts(tmap, "axis", tmap_ax, "parameter axis");
    AxisOpts tmap_th{-90.0, 90.0, 181};
    add_axis_opts(tmap, "theta", tmap_th, "theta_out (deg)");
    std::string tmap_out;
    tmap->add_option("-o,--output", tmap_out, "Output CSV")->required();

    // ---- g2-map -----------------------------------------------------------
    auto* gmap = app.add_subcommand(
        "g2-map", "g2(0) vs parameter axis and theta_out");
    ParamOpts gmap_po;
    add_param_opts(gmap, gmap_po);
    std::string gmap_axis = "qd_common_offset";
    gmap->add_option("--axis", gmap_axis, "Parameter axis name")
        ->capture_default_str();
    AxisOpts gmap_ax{-6.0, 6.0, 121};
    add_axis_opts(gmap, "axis", gmap_ax, "parameter axis");
    AxisOpts gmap_th{-90.0, 90.0, 181};
    add_axis_opts(gmap, "theta", gmap_th, "theta_out (deg)");
    std::string gmap_out;
    gmap->add_option("-o,--output", gmap_out, "Output CSV")->required();

    // ---- g2-trace ---------------------------------------------------------
    auto* trace = app.add_subcommand(
        "g2-trace", "g2(tau) at one polarizer setting, with detector "
                    "convolution");
    ParamOpts trace_po;
    add_param_opts(trace, trace_po);
    double trace_theta = 0.0;
    trace->add_option("--theta-out", trace_theta, "Output polarizer (deg)")
        ->required();
    double trace_tau_max = 5.0;
    trace->add_option("--tau-max", trace_tau_max, "Half-width of the tau "
                                                  "grid (ns)")
        ->capture_default_str();
    int trace_samples = 501;
    trace->add_option("--samples", trace_samples,
                      "Samples on tau in [0, tau-max]")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    std::vector<double> trace_jitter;
    trace->add_option("--jitter", trace_jitter,
                      "Detector pair-response FWHM values (ps); one extra "
                      "column per value");
    std::string trace_out;
    trace->add_option("-o,--output", trace_out, "Output CSV")->required();

    // ---- photon-number ----------------------------------------------------
    auto* pn = app.add_subcommand(
        "photon-number", "Post-selected photon-number distribution vs "
                         "theta_out");
    ParamOpts pn_po;
    add_param_opts(pn, pn_po);
    AxisOpts pn_th{-90.0, 90.0, 181};
    add_axis_opts(pn, "theta", pn_th, "theta_out (deg)");
    std::string pn_out;
    pn->add_option("-o,--output", pn_out, "Output CSV")->required();

    // ---- kappa-sweep ------------------------------------------------------
    auto* ks = app.add_subcommand(
        "kappa-sweep", "Maximal g2(0) across a cavity-linewidth ladder at "
                       "constant drive strength");
    ParamOpts ks_po;
    add_param_opts(ks, ks_po);
    std::vector<double> ks_factors{0.5, 1.0, 2.0, 4.0, 8.0};
    ks->add_option("--factors", ks_factors, "kappa multipliers")
        ->capture_default_str();
    double ks_nbar = 0.01;
    ks->add_option("--nbar", ks_nbar, "Empty-cavity mean photon number used "
                                      "to recalibrate the drive")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    AxisOpts ks_laser{-8.0, 8.0, 41};
    add_axis_opts(ks, "laser", ks_laser, "laser detuning (GHz)");
    AxisOpts ks_th{-90.0, 90.0, 37};
    add_axis_opts(ks, "theta", ks_th, "theta_out (deg)");
    int ks_refine = 2;
    ks->add_option("--refine", ks_refine, "Local refinement stages")
        ->check(CLI::Range(0, 6))
        ->capture_default_str();
    std::string ks_out;
    ks->add_option("-o,--output", ks_out, "Output CSV")->required();

    // ---- ablation ---------------------------------------------------------
    auto* abl = app.add_subcommand(
        "ablation", "g2(0) map with one QD transition disabled");
    ParamOpts abl_po;
    add_param_opts(abl, abl_po);
    std::string abl_disable;
    abl->add_option("--disable", abl_disable, "Transition to drop")
        ->check(CLI::IsMember({"x", "y"}))
        ->required();
    AxisOpts abl_ax{-6.0, 6.0, 121};
    add_axis_opts(abl, "axis", abl_ax, "qd_common_offset (GHz)");
    AxisOpts abl_th{-90.0, 90.0, 181};
    add_axis_opts(abl, "theta", abl_th, "theta_out (deg)");
    std::string abl_out;
    abl->add_option("-o,--output", abl_out, "Output CSV")->required();

    // ---- fit --------------------------------------------------------------
    auto* fit = app.add_subcommand(
        "fit", "Estimate parameters from transmission traces");
    ParamOpts fit_po;
    add_param_opts(fit, fit_po);
    std::string fit_data;
    fit->add_option("--data", fit_data,
                    "CSV with theta_out_deg,detuning_ghz,transmission rows")
        ->required();
    double fit_theta_in = 45.0;
    fit->add_option("--theta-in", fit_theta_in, "Input polarizer (deg)")
        ->capture_default_str();
    std::vector<std::string> fit_free{"kappa",     "g",      "gamma_par",
                                      "gamma_star", "f_qd_x", "f_qd_y"};
    fit->add_option("--free", fit_free, "Fields to vary")
        ->capture_default_str();
    FitOptions fit_opts;
    fit->add_option("--seed", fit_opts.seed, "Restart RNG seed")
        ->capture_default_str();
    fit->add_option("--restarts", fit_opts.restarts, "Seeded restarts")
        ->check(CLI::Range(0, 32))
        ->capture_default_str();
    fit->add_option("--max-evals", fit_opts.max_evals,
                    "Objective evaluations per start")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    std::string fit_out;
    fit->add_option("-o,--output", fit_out, "Output JSON")->required();

    // ---- special-angles ---------------------------------------------------
    auto* sa = app.add_subcommand(
        "special-angles", "Locate the transmission-null polarizer angles of "
                          "both QD lines");
    ParamOpts sa_po;
    add_param_opts(sa, sa_po);
    AxisOpts sa_laser{-4.0, 4.0, 81};
    add_axis_opts(sa, "laser", sa_laser, "laser detuning (GHz)");
    AxisOpts sa_th{-90.0, 90.0, 181};
    add_axis_opts(sa, "theta", sa_th, "theta_out (deg)");
    double sa_window = 1.0;
    sa->add_option("--window", sa_window,
                   "Search half-width around each QD line (GHz)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    std::string sa_out;
    sa->add_option("-o,--output", sa_out, "Output CSV (optional)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (rep->parsed()) {
        SystemParams p = resolve_params(rep_po);
        const double gamma = p.gamma_par / 2.0 + p.gamma_star;
        std::cout << params_to_config(p);
        std::cout << "# derived\n";
        std::cout << "cooperativity = " << cooperativity(p) << "\n";
        std::cout << "gamma_total_per_ns = " << gamma << "\n";
        std::cout << "empty_cavity_nbar = " << (p.eta / p.kappa) * (p.eta / p.kappa)
                  << "\n";
        std::cout << "hilbert_dim = " << SpaceLayout(p.n_fock).dim() << "\n";
        std::cout << "kernels = " << kernels::isa_name(kernels::active().isa)
                  << "\n";
        return 0;
    }
    if (tmap->parsed()) {
        run_map(Scenario::TransmissionMap, resolve_params(tmap_po),
                to_axis(tmap_axis, tmap_ax), to_axis("theta_out", tmap_th),
                tmap_out, threads);
        return 0;
    }
    if (gmap->parsed()) {
        run_map(Scenario::G2Map, resolve_params(gmap_po),
                to_axis(gmap_axis, gmap_ax), to_axis("theta_out", gmap_th),
                gmap_out, threads);
        return 0;
    }
    if (trace->parsed()) {
        SystemParams p = resolve_params(trace_po);
        SpaceLayout layout(p.n_fock);
        Liouvillian L = build_liouvillian(p);
        DensityMatrix rho = steady_state(L);
        PolarizedMode mode =
            polarized_mode(layout, JonesVector::from_angle_deg(trace_theta));
        PropagationSpec ps;
        ps.tau_max = trace_tau_max;
        ps.n_samples = trace_samples;
        CorrelationTrace raw = g2_trace(L, rho, mode, ps);
        std::vector<CorrelationTrace> conv;
        conv.reserve(trace_jitter.size());
        for (double fwhm : trace_jitter)
            conv.push_back(convolve_detector(raw, fwhm));
        write_trace_csv(trace_out, p, trace_theta, raw, conv);
        const std::size_t mid = raw.tau.size() / 2;
        std::cout << "wrote " << trace_out << " (g2(0) = " << raw.g2[mid];
        for (std::size_t i = 0; i < conv.size(); ++i)
            std::cout << ", conv " << trace_jitter[i]
                      << " ps = " << conv[i].g2[mid];
        std::cout << ")\n";
        return 0;
    }
    if (pn->parsed()) {
        run_map(Scenario::PnVsTheta, resolve_params(pn_po),
                AxisSpec{"none", 0.0, 1.0, 2}, to_axis("theta_out", pn_th),
                pn_out, threads);
        return 0;
    }
    if (ks->parsed()) {
        SystemParams p = resolve_params(ks_po);
        std::vector<double> kappas;
        kappas.reserve(ks_factors.size());
        for (double f : ks_factors) {
            if (f <= 0)
                throw ConfigError("kappa factors must be positive");
            kappas.push_back(f * p.kappa);
        }
        std::vector<KappaPoint> pts =
            kappa_sweep(p, kappas, ks_nbar, to_axis("f_laser", ks_laser),
                        to_axis("theta_out", ks_th), ks_refine);
        write_kappa_csv(ks_out, p, ks_nbar, pts);
        std::cout << "wrote " << ks_out << " (" << pts.size()
                  << " kappa points)\n";
        return 0;
    }
    if (abl->parsed()) {
        SystemParams p = resolve_params(abl_po);
        if (abl_disable == "x")
            p.qd_x_enabled = false;
        else
            p.qd_y_enabled = false;
        run_map(Scenario::G2Map, p, to_axis("qd_common_offset", abl_ax),
                to_axis("theta_out", abl_th), abl_out, threads);
        return 0;
    }
    if (fit->parsed()) {
        SystemParams init = resolve_params(fit_po);
        TransmissionDataset data =
            load_transmission_csv(fit_data, fit_theta_in);
        FitResult res = fit_parameters(data, init, fit_free, fit_opts);
        write_fit_json(fit_out, res, fit_free);
        std::cout << "wrote " << fit_out << " (sse = " << res.sse
                  << ", evals = " << res.n_evals
                  << (res.converged ? ", converged" : ", not converged")
                  << ")\n";
        return 0;
    }
    if (sa->parsed()) {
        SystemParams p = resolve_params(sa_po);
        SpecialAngles out = find_special_angles(
            p, to_axis("theta_out", sa_th), to_axis("f_laser", sa_laser),
            sa_window);
        std::cout << "x line: theta_out = " << out.theta_x
                  << " deg at detuning " << out.f_x << " GHz (T = " << out.t_x
                  << ")\n";
        std::cout << "y line: theta_out = " << out.theta_y
                  << " deg at detuning " << out.f_y << " GHz (T = " << out.t_y
                  << ")\n";
        if (!sa_out.empty()) {
            write_special_angles_csv(sa_out, p, out);
            std::cout << "wrote " << sa_out << "\n";
        }
        return 0;
    }
    return 2; // unreachable: require_subcommand(1)
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "polcav: config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParams& e) {
        std::cerr << "polcav: config error: " << e.what() << "\n";
        return 2;
    } catch (const GridTooCoarse& e) {
        std::cerr << "polcav: config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "polcav: i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        // Solver-layer failures (singular systems, stalled integration,
        // dark cells, degenerate grids) and anything unexpected.
        std::cerr << "polcav: error: " << e.what() << "\n";
        return 3;
    }
}

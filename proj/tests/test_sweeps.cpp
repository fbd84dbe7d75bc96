#include <doctest.h>

#include <cmath>

#include "polcav/sweeps.hpp"

using namespace polcav;

TEST_CASE("axis specification") {
    AxisSpec ax{"f_laser", -2.0, 2.0, 5};
    const auto v = ax.values();
    REQUIRE(v.size() == 5);
    CHECK(v.front() == -2.0);
    CHECK(v.back() == 2.0);
    CHECK(v[2] == doctest::Approx(0.0));

    CHECK_THROWS_AS((AxisSpec{"f_laser", 0.0, 1.0, 1}.validate()),
                    InvalidParams);
    CHECK_THROWS_AS((AxisSpec{"f_laser", 1.0, 1.0, 3}.validate()),
                    InvalidParams);
    CHECK_THROWS_AS((AxisSpec{"", 0.0, 1.0, 3}.validate()), InvalidParams);
}

TEST_CASE("axis application covers every sweepable field") {
    const SystemParams base = preset_qd_a();
    CHECK(apply_axis(base, "kappa", 50.0).kappa == 50.0);
    CHECK(apply_axis(base, "g_x", 9.0).g_x == 9.0);
    CHECK(apply_axis(base, "g_y", 8.0).g_y == 8.0);
    const SystemParams both = apply_axis(base, "g", 7.0);
    CHECK(both.g_x == 7.0);
    CHECK(both.g_y == 7.0);
    CHECK(apply_axis(base, "gamma_par", 1.25).gamma_par == 1.25);
    CHECK(apply_axis(base, "gamma_star", 0.5).gamma_star == 0.5);
    CHECK(apply_axis(base, "f_cav_x", 0.3).f_cav_x == 0.3);
    CHECK(apply_axis(base, "f_cav_y", -0.3).f_cav_y == -0.3);
    CHECK(apply_axis(base, "f_qd_x", -2.2).f_qd_x == -2.2);
    CHECK(apply_axis(base, "f_qd_y", 2.2).f_qd_y == 2.2);
    CHECK(apply_axis(base, "f_laser", 1.1).f_laser == 1.1);
    CHECK(apply_axis(base, "eta", 3.0).eta == 3.0);
    CHECK(apply_axis(base, "theta_in", 30.0).theta_in == 30.0);

    // The common offset shifts both lines, preserving their splitting.
    const SystemParams off = apply_axis(base, "qd_common_offset", 2.0);
    CHECK(off.f_qd_x == doctest::Approx(base.f_qd_x + 2.0));
    CHECK(off.f_qd_y == doctest::Approx(base.f_qd_y + 2.0));

    CHECK_THROWS_AS(apply_axis(base, "theta_out", 10.0), InvalidParams);
    CHECK_THROWS_AS(apply_axis(base, "n_fock", 5.0), InvalidParams);
    CHECK_THROWS_AS(apply_axis(base, "bogus", 1.0), InvalidParams);
}

TEST_CASE("drive calibration") {
    CHECK(calibrate_eta(105.0, 0.01) == doctest::Approx(10.5));
    CHECK(calibrate_eta(50.0, 0.04) == doctest::Approx(10.0));
    CHECK_THROWS_AS(calibrate_eta(-1.0, 0.01), InvalidParams);
    CHECK_THROWS_AS(calibrate_eta(50.0, -0.01), InvalidParams);
}

TEST_CASE("transmission sweep matches unshared per-point evaluation") {
    SystemParams base = preset_qd_a();
    base.n_fock = 3;

    SweepSpec spec;
    spec.scenario = Scenario::TransmissionMap;
    spec.base = base;
    spec.axis0 = AxisSpec{"f_laser", -2.0, 2.0, 3};
    spec.axis1 = AxisSpec{"theta_out", -90.0, 90.0, 5};
    const SweepResult res = run_sweep(spec);

    REQUIRE(res.a0.size() == 3);
    REQUIRE(res.a1.size() == 5);
    REQUIRE(res.T_raw.size() == 15);
    CHECK(res.n_failures == 0);
    CHECK(res.n_fock == 3);

    const SpaceLayout layout(base.n_fock);
    for (std::size_t i = 0; i < res.a0.size(); ++i) {
        const SystemParams p = apply_axis(base, "f_laser", res.a0[i]);
        const DensityMatrix rho = steady_state(build_liouvillian(p));
        CHECK(res.residuals[i] == doctest::Approx(rho.residual).epsilon(1e-6));
        for (std::size_t j = 0; j < res.a1.size(); ++j) {
            const PolarizedMode mode = polarized_mode(
                layout, JonesVector::from_angle_deg(res.a1[j]));
            CHECK(res.T_raw[i * 5 + j] ==
                  doctest::Approx(transmission(rho, mode)).epsilon(1e-10));
        }
    }

    // Column normalization: each fixed-theta column peaks at exactly 1.
    for (std::size_t j = 0; j < res.a1.size(); ++j) {
        double best = 0;
        for (std::size_t i = 0; i < res.a0.size(); ++i)
            best = std::max(best, res.T_colnorm[i * 5 + j]);
        CHECK(best == doctest::Approx(1.0));
    }
}

TEST_CASE("dark analyzer cells become NaN, not failures") {
    // Empty cavity: the cross-polarized column has no light at all, so the
    // correlation there is undefined and must be marked, while the rest of
    // the map stays valid.
    SystemParams base = preset_qd_a();
    base.n_fock = 4;
    base.g_x = 0.0;
    base.g_y = 0.0;
    base.qd_x_enabled = false;
    base.qd_y_enabled = false;
    // Weak drive keeps the truncated coherent state's g2 at 1 within 1e-6.
    base.eta = base.kappa * std::sqrt(1e-3);

    SweepSpec spec;
    spec.scenario = Scenario::G2Map;
    spec.base = base;
    spec.axis0 = AxisSpec{"f_laser", -1.0, 1.0, 3};
    spec.axis1 = AxisSpec{"theta_out", 45.0, 135.0, 3}; // includes 90 + 45
    const SweepResult res = run_sweep(spec);

    REQUIRE(res.g2.size() == 9);
    for (std::size_t i = 0; i < res.a0.size(); ++i) {
        // Co-polarized (45) and single-mode (90) cells hold coherent light.
        CHECK(res.g2[i * 3 + 0] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(res.g2[i * 3 + 1] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(std::isnan(res.g2[i * 3 + 2])); // exactly crossed: dark
    }
}

TEST_CASE("photon-number scenario fills one distribution per angle") {
    SystemParams base = preset_qd_b();
    base.n_fock = 3;

    SweepSpec spec;
    spec.scenario = Scenario::PnVsTheta;
    spec.base = base;
    spec.axis1 = AxisSpec{"theta_out", -90.0, 0.0, 4};
    const SweepResult res = run_sweep(spec);

    REQUIRE(res.pn.size() == 4);
    for (const auto& p : res.pn) {
        REQUIRE(int(p.size()) == 2 * base.n_fock - 1);
        double total = 0;
        for (double v : p) {
            CHECK(v >= -1e-12);
            total += v;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("grid maximum search") {
    SystemParams base = preset_qd_a();
    base.n_fock = 3;

    // The bunching ridge of this sample peaks off-resonance; the refined
    // search must end strictly above its own coarse pass.
    AxisSpec offset{"qd_common_offset", 0.5, 3.0, 6};
    AxisSpec theta{"theta_out", -40.0, -5.0, 8};
    const G2Max coarse =
        g2_grid_max(base, "qd_common_offset", offset.values(), theta.values());
    const G2Max fine = g2_refined_max(base, "qd_common_offset", offset, theta, 2);
    CHECK(fine.g2 >= coarse.g2);
    CHECK(fine.g2 > 1.0);
    CHECK(fine.axis0 >= offset.start);
    CHECK(fine.axis0 <= offset.stop);
    CHECK(fine.theta >= theta.start);
    CHECK(fine.theta <= theta.stop);

    // A map with no light anywhere cannot yield a maximum.  The drive is
    // kept weak so even the crossed-port Fock-truncation junk of the
    // coherent state sits below the intensity floor.
    SystemParams dark = base;
    dark.g_x = 0.0;
    dark.g_y = 0.0;
    dark.qd_x_enabled = false;
    dark.qd_y_enabled = false;
    dark.eta = dark.kappa * 1e-2; // empty-cavity nbar = 1e-4
    CHECK_THROWS_AS(g2_grid_max(dark, "f_laser", {0.0}, {135.0}), NotFound);

    // At stronger drive the truncation junk clears the intensity floor and
    // would masquerade as a huge g2; a numerator mask calibrated above the
    // junk scale restores the NotFound.
    SystemParams brighter = dark;
    brighter.eta = brighter.kappa * 0.1; // empty-cavity nbar = 1e-2
    brighter.f_laser = 0.0;
    const DensityMatrix rho = steady_state(build_liouvillian(brighter));
    const SpaceLayout layout(brighter.n_fock);
    const PolarizedMode crossed =
        polarized_mode(layout, JonesVector::from_angle_deg(135.0));
    const G2Cell junk = g2_cell(rho, crossed);
    CHECK(junk.transmission > kIntensityFloor);
    CHECK(g2_grid_max(brighter, "f_laser", {0.0}, {135.0}).g2 > 100.0);
    CHECK_THROWS_AS(g2_grid_max(brighter, "f_laser", {0.0}, {135.0},
                                10.0 * junk.numerator),
                    NotFound);
}

TEST_CASE("kappa ladder recalibrates the drive per rung") {
    SystemParams base = preset_qd_b();
    base.n_fock = 3;
    const std::vector<double> kappas{80.0, 160.0};
    AxisSpec laser{"f_laser", -3.0, 3.0, 5};
    AxisSpec theta{"theta_out", -80.0, -10.0, 5};
    const auto pts = kappa_sweep(base, kappas, 0.01, laser, theta, 1);
    REQUIRE(pts.size() == 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(pts[i].kappa == kappas[i]);
        CHECK(pts[i].eta == doctest::Approx(kappas[i] * 0.1));
        CHECK(std::isfinite(pts[i].g2_max));
    }
}

TEST_CASE("special angles on the strongly coupled sample") {
    SystemParams base = preset_qd_a();
    base.n_fock = 3;
    AxisSpec theta{"theta_out", -90.0, 0.0, 46};
    AxisSpec laser{"f_laser", -3.0, 3.0, 31};
    const SpecialAngles sa = find_special_angles(base, theta, laser, 1.0);

    // The null of each line sits near (but not exactly at) the line.
    CHECK(sa.f_x == doctest::Approx(base.f_qd_x).epsilon(0.5));
    CHECK(sa.f_y == doctest::Approx(base.f_qd_y).epsilon(0.5));
    CHECK(sa.theta_x > -90.0);
    CHECK(sa.theta_x < 0.0);
    CHECK(sa.theta_y > -90.0);
    CHECK(sa.theta_y < 0.0);
    CHECK(sa.theta_x != sa.theta_y);
    // Transmission at a null is orders of magnitude below the empty-cavity
    // peak of ~1e-2.
    CHECK(sa.t_x < 1e-3);
    CHECK(sa.t_y < 1e-3);

    SystemParams crippled = base;
    crippled.qd_y_enabled = false;
    CHECK_THROWS_AS(find_special_angles(crippled, theta, laser, 1.0), NotFound);
}

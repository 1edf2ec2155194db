#include <doctest.h>

#include <cmath>

#include "mbrom/hertz.hpp"
#include "mbrom/log.hpp"

using namespace mbrom;

TEST_CASE("rigid-target impact matches the classical closed form") {
    const HertzContact hc = hertz_contact(steel(), steel(), 5.55e-3);
    const double m = 5.58e-3, v = 1.1;

    const double tau_formula = 2.87 * std::pow(m * m / (hc.radius * hc.e_star * hc.e_star * v),
                                               0.2);
    CHECK(tau_formula == doctest::Approx(37.5e-6).epsilon(2e-2));
    CHECK(hertz_impact_duration(hc, m, v) == doctest::Approx(tau_formula).epsilon(5e-3));

    const Trajectory traj = hertz_rigid_target(hc, m, v, 1e-8, 1.2e-4);
    const EventLog events = detect_events(traj);
    REQUIRE(events.windows.size() == 1);
    const double tau = events.t_end() - events.t_start();
    CHECK(std::abs(tau - hertz_impact_duration(hc, m, v)) / hertz_impact_duration(hc, m, v) <
          0.01);

    SUBCASE("restitution on the rigid target is one") {
        const double v_out = traj.v_sph(traj.n_samples() - 1);
        CHECK(std::abs(v_out / v - 1.0) < 1e-3);
    }
    SUBCASE("peak force matches the energy-balance value") {
        CHECK(traj.f_c.maxCoeff() == doctest::Approx(hertz_peak_force(hc, m, v)).epsilon(1e-3));
    }
}

TEST_CASE("energy balance fixes the peak indentation") {
    const HertzContact hc = hertz_contact(steel(), steel(), 5.55e-3);
    const double m = 5.58e-3, v = 1.1;
    const double delta = hertz_max_indentation(hc, m, v);
    // (2/5) k delta^{5/2} = m v^2 / 2
    CHECK(0.4 * hc.k_h * std::pow(delta, 2.5) ==
          doctest::Approx(0.5 * m * v * v).epsilon(1e-12));
}

TEST_CASE("oracle on the flexible beam") {
    Scenario sc;
    sc.n_elem = 40;
    sc.t_end = 1.5e-4;
    const ImpactSetup setup = prepare(sc);
    const Trajectory traj = hertz_oracle(setup);

    CHECK(traj.f_c.minCoeff() >= 0.0);
    const EventLog events = detect_events(traj);
    REQUIRE(events.windows.size() == 1);
    CHECK(events.sub_impacts == 0);

    SUBCASE("duration sits near the rigid-target value, lengthened by beam recoil") {
        const HertzContact hc = hertz_contact(steel(), steel(), sc.sphere_radius);
        const double tau_rigid = hertz_impact_duration(hc, sc.sphere_mass, sc.impact_velocity);
        const double tau = events.t_end() - events.t_start();
        CHECK(tau > 0.8 * tau_rigid);
        CHECK(tau < 1.5 * tau_rigid);
    }
}

TEST_CASE("hertz validity warning on deep indentation") {
    const HertzContact hc = hertz_contact(steel(), steel(), 1e-4);  // tiny sphere
    Scenario sc;
    sc.n_elem = 24;
    sc.sphere_radius = 1e-4;
    sc.sphere_mass = 4.0;  // absurdly dense, drives delta past 1% of R
    sc.impact_velocity = 3.0;
    sc.t_end = 2e-5;
    sc.dt = 5e-8;
    std::vector<std::string> warnings;
    log::set_warning_sink([&](const std::string& w) { warnings.push_back(w); });
    hertz_oracle(sc);
    log::set_warning_sink(nullptr);
    bool found = false;
    for (const auto& w : warnings)
        if (w.find("1% of the sphere") != std::string::npos) found = true;
    CHECK(found);
    CHECK(hc.k_h > 0.0);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "mbrom/hertz.hpp"
#include "mbrom/post.hpp"

using namespace mbrom;

namespace {

Scenario short_freefree() {
    Scenario sc;
    sc.n_elem = 40;
    sc.t_end = 1.2e-4;
    return sc;
}

}  // namespace

TEST_CASE("modal energy basics") {
    CHECK(modal_energy(0.0, 1.0, 7.0) == doctest::Approx(0.5));
    CHECK(modal_energy(1.0 / 7.0, 0.0, 7.0) == doctest::Approx(0.5));
    CHECK(modal_energy(0.0, 0.0, 7.0) == 0.0);
}

TEST_CASE("modal projection") {
    const AssembledModel m =
        assemble_beam(10, steel(), BeamGeometry{0.210, 0.015, 0.010}, BeamBc::free_free);
    const ModalBasis basis = solve_modes(m);

    SUBCASE("a pure mode shape projects to a unit vector") {
        const Eigen::VectorXd q = basis.shapes.col(3);
        const auto [eta, eta_dot] =
            project_to_modal(q, Eigen::VectorXd::Zero(m.n_dof()), basis, m.mass);
        for (int k = 0; k < eta.size(); ++k)
            CHECK(eta(k) == doctest::Approx(k == 3 ? 1.0 : 0.0).epsilon(1e-9).scale(1.0));
    }
    SUBCASE("a rigid translation excites only rigid coordinates") {
        Eigen::VectorXd q = Eigen::VectorXd::Zero(m.n_dof());
        for (int i = 0; i < m.n_dof(); ++i)
            if (m.dof_labels[i].tag == "w") q(i) = 1.0;
        const auto [eta, eta_dot] = project_to_modal(q, q, basis, m.mass);
        const double rigid_part = eta.head(basis.rigid_count).norm();
        const double elastic_part = eta.tail(eta.size() - basis.rigid_count).norm();
        CHECK(elastic_part < 1e-8 * rigid_part);
    }
    SUBCASE("completeness: Phi (Phi' M q) recovers q") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Eigen::VectorXd q(m.n_dof());
        for (int i = 0; i < q.size(); ++i) q(i) = dist(rng);
        const auto [eta, eta_dot] = project_to_modal(q, q, basis, m.mass);
        const Eigen::VectorXd back = basis.shapes * eta;
        CHECK((back - q).cwiseAbs().maxCoeff() < 1e-10 * q.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("restitution formula on a rigid immovable target") {
    // Synthetic trajectory: the sphere bounces elastically, the target's modal
    // content is identically zero (phi at the impact point vanishes).
    Trajectory traj;
    traj.dt = 1e-6;
    const int n = 11;
    traj.t.resize(n);
    traj.f_c.resize(n);
    traj.v_sph.resize(n);
    traj.eta = Eigen::MatrixXd::Zero(n, 3);
    traj.eta_dot = Eigen::MatrixXd::Zero(n, 3);
    traj.beam_eta_offset = 1;
    traj.beam_omega = Eigen::VectorXd::Constant(2, 1000.0);
    traj.beam_rigid_count = 0;
    for (int i = 0; i < n; ++i) {
        traj.t(i) = i * traj.dt;
        traj.f_c(i) = (i > 2 && i < 8) ? 1.0 : 0.0;
        traj.v_sph(i) = (i < 5) ? -2.0 : 2.0;
    }
    traj.eta_dot.col(1).setConstant(99.0);  // nonzero, but phi = 0 removes it

    const EventLog events = detect_events(traj);
    const Eigen::VectorXd r = modal_restitution(traj, events, Eigen::VectorXd::Zero(2));
    CHECK(r(0) == doctest::Approx(1.0));
    CHECK(r(1) == doctest::Approx(1.0));

    SUBCASE("no contact window is an error") {
        traj.f_c.setZero();
        const EventLog none = detect_events(traj);
        CHECK_THROWS_AS(modal_restitution(traj, none, Eigen::VectorXd::Zero(2)),
                        std::runtime_error);
    }
}

TEST_CASE("two-body elastic collision surrogate") {
    // Beam reduced to its rigid modes only: the impact becomes a classical
    // elastic two-mass collision with m2 = 1/phi^2 = the beam mass.
    Scenario sc = short_freefree();
    const AssembledModel beam_full =
        assemble_beam(sc.n_elem, sc.beam_material, sc.geometry, sc.bc, sc.mass_style);
    const int dof = translation_dof(beam_full, nearest_node(beam_full, 0.105));
    AssembledModel beam = with_boundary(beam_full, {dof});
    const ModalBasis basis = solve_modes(beam);
    const ReducedModel beam_rom = build_rom(beam, basis, {0, 1});

    const double m1 = sc.sphere_mass;
    const double m2 = 1.0 / std::pow(basis.shapes(dof, 0), 2.0);  // effective modal mass
    const double m_beam = steel().density * sc.geometry.area() * sc.geometry.length;
    CHECK(m2 == doctest::Approx(m_beam).epsilon(1e-9));

    const HertzContact hc = hertz_contact(sc.sphere_material, sc.beam_material, sc.sphere_radius);
    const double c =
        hertz_secant_compliance(hc, hertz_peak_force(hc, sc.sphere_mass, sc.impact_velocity));
    const ReducedModel sphere_rom = build_rom(assemble_sphere({m1, sc.sphere_radius, c}), 1.0);
    const CoupledRom rom = couple(sphere_rom, beam_rom);
    ContactProblem contact = node_to_node_contact(rom, {{0, 1}}, Eigen::VectorXd::Zero(1));

    SimState s;
    s.eta = Eigen::VectorXd::Zero(rom.n_m());
    s.eta_dot_half = Eigen::VectorXd::Zero(rom.n_m());
    const double v1 = -sc.impact_velocity;
    s.eta_dot_half(0) = v1 * std::sqrt(m1);

    Trajectory traj;
    const int n = 1500;
    traj.dt = 1e-7;
    traj.t.resize(n);
    traj.f_c.resize(n);
    traj.v_sph.resize(n);
    traj.eta.resize(n, rom.n_m());
    traj.eta_dot.resize(n, rom.n_m());
    traj.beam_eta_offset = 1;
    traj.beam_omega = beam_rom.retained_omega;
    traj.beam_rigid_count = beam_rom.retained_rigid;
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd before = s.eta_dot_half;
        s = step(s, rom, contact, traj.dt);
        traj.t(i) = i * traj.dt;
        traj.f_c(i) = s.lambda.sum();
        traj.eta.row(i) = s.eta.transpose();
        traj.eta_dot.row(i) = (0.5 * (before + s.eta_dot_half)).transpose();
        traj.v_sph(i) = traj.eta_dot(i, 0) / std::sqrt(m1);
    }

    const EventLog events = detect_events(traj);
    REQUIRE(events.windows.size() == 1);
    const int ne = static_cast<int>(std::lround(events.t_end() / traj.dt));

    const double v1_prime = v1 * (m1 - m2) / (m1 + m2);
    const double v2_prime = 2.0 * m1 * v1 / (m1 + m2);
    CHECK(std::abs(traj.v_sph(ne) - v1_prime) / std::abs(v1_prime) < 0.01);

    Eigen::VectorXd phi_impact(2);
    phi_impact << basis.shapes(dof, 0), basis.shapes(dof, 1);
    const Eigen::VectorXd r = modal_restitution(traj, events, phi_impact);
    // Closed form: r = -(v1' - v2')/v1 = 1 for the translation mode.
    const double r_expected = -(v1_prime - v2_prime) / v1;
    CHECK(r_expected == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r(0) - r_expected) < 0.01);
    CHECK(r(0) >= 0.0);
    CHECK(r(0) <= 1.0 + 0.01);
}

TEST_CASE("force recovery from the sphere velocity") {
    SUBCASE("a linear ramp differentiates exactly") {
        const double a = 17.0, m = 2.5, dt = 1e-4;
        Eigen::VectorXd v(50);
        for (int i = 0; i < v.size(); ++i) v(i) = a * i * dt;
        const Eigen::VectorXd f = force_from_sphere_velocity(v, m, dt);
        for (int i = 0; i < f.size(); ++i) CHECK(f(i) == doctest::Approx(m * a).epsilon(1e-12));
    }
    SUBCASE("needs at least three samples") {
        CHECK_THROWS_AS(force_from_sphere_velocity(Eigen::VectorXd::Zero(2), 1.0, 1e-4),
                        std::invalid_argument);
    }
    SUBCASE("recovered force matches the multiplier sum within 2% rms") {
        const SimulationRun run = simulate(short_freefree());
        const Trajectory& traj = run.trajectory;
        const Eigen::VectorXd f_rec =
            force_from_sphere_velocity(traj.v_sph, run.setup.scenario.sphere_mass, traj.dt);
        const double rms_err = (f_rec - traj.f_c).norm();
        const double rms_ref = traj.f_c.norm();
        CHECK(rms_err / rms_ref < 0.02);
    }
    SUBCASE("the 102.4 kHz resolution underestimates a 40 us peak") {
        // Half-sine pulse, deliberately offset against the coarse sampling grid.
        const double tau = 40e-6, f_peak = 600.0, m = 5.58e-3, dt = 1e-7;
        const double t0 = 13e-6;
        const int n = 2000;
        Eigen::VectorXd v(n);
        double vi = 0.0;
        for (int i = 0; i < n; ++i) {
            v(i) = vi;
            const double t = i * dt;
            const double f =
                (t >= t0 && t <= t0 + tau) ? f_peak * std::sin(M_PI * (t - t0) / tau) : 0.0;
            vi += f / m * dt;
        }
        const Eigen::VectorXd v_ds = resample_linear(v, dt, 102.4e3);
        const Eigen::VectorXd f_ds = force_from_sphere_velocity(v_ds, m, 1.0 / 102.4e3);
        CHECK(f_ds.maxCoeff() < 0.995 * f_peak);  // about 4 samples across the pulse
        CHECK(f_ds.maxCoeff() > 0.5 * f_peak);
    }
}

TEST_CASE("duhamel integral") {
    SUBCASE("constant force closed form") {
        const double omega = 2000.0, phi = 0.8, force = 50.0, t_end = 1e-3;
        const int n = 2001;
        const double dt = t_end / (n - 1);
        const DuhamelResult r =
            duhamel_response(Eigen::VectorXd::Constant(n, force), dt, omega, phi);
        const double eta_exact = phi * force / (omega * omega) * (1.0 - std::cos(omega * t_end));
        const double eta_dot_exact = phi * force / omega * std::sin(omega * t_end);
        CHECK(std::abs(r.eta - eta_exact) / std::abs(eta_exact) < 1e-6);
        CHECK(std::abs(r.eta_dot - eta_dot_exact) / std::abs(eta_dot_exact) < 1e-6);
    }
    SUBCASE("single-sample impulse response") {
        const double omega = 2000.0, phi = 0.8, dt = 1e-6;
        const int n = 501, hit = 100;
        Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
        f(hit) = 1e4;
        const DuhamelResult r = duhamel_response(f, dt, omega, phi);
        const double impulse = f(hit) * dt;
        const double arg = omega * ((n - 1) - hit) * dt;
        CHECK(r.eta_dot == doctest::Approx(phi * impulse * std::cos(arg)).epsilon(1e-9));
        CHECK(r.eta == doctest::Approx(phi * impulse / omega * std::sin(arg)).epsilon(1e-9));
    }
    SUBCASE("empty window is an error") {
        CHECK_THROWS_AS(duhamel_response(Eigen::VectorXd::Zero(1), 1e-6, 100.0, 1.0),
                        std::invalid_argument);
    }
    SUBCASE("matches the direct modal velocities of a simulated pulse within 3%") {
        const SimulationRun run = simulate(short_freefree());
        const Trajectory& traj = run.trajectory;
        REQUIRE(run.events.windows.size() == 1);
        const int ns = static_cast<int>(std::lround(run.events.t_start() / traj.dt));
        const int ne = static_cast<int>(std::lround(run.events.t_end() / traj.dt));
        const Eigen::VectorXd window = -traj.f_c.segment(ns, ne - ns + 1);  // force on the beam

        const Eigen::VectorXd eta_dot_direct = traj.beam_eta_dot_at(ne);
        int checked = 0;
        for (int k = traj.beam_rigid_count; k < traj.n_beam_modes(); ++k) {
            const double omega = traj.beam_omega(k);
            const double steps_per_period = 2.0 * M_PI / omega / traj.dt;
            if (steps_per_period < 20.0) continue;
            const double phi = run.setup.beam_basis.shapes(run.setup.impact_dof,
                                                           run.setup.beam_retained[k]);
            if (std::abs(phi) < 1e-6) continue;  // even modes carry nothing here
            const DuhamelResult d = duhamel_response(window, traj.dt, omega, phi);
            const double scale = std::abs(eta_dot_direct(k));
            if (scale < 1e-9 * run.setup.scenario.impact_velocity) continue;
            CHECK(std::abs(d.eta_dot - eta_dot_direct(k)) / scale < 0.03);
            ++checked;
        }
        CHECK(checked >= 4);
    }
}

TEST_CASE("free least-squares modal fit") {
    const int n_modes = 3;
    Eigen::VectorXd omega(n_modes), phi(n_modes), eta_cos(n_modes), eta_sin(n_modes);
    omega << 2.0 * M_PI * 1200.0, 2.0 * M_PI * 6500.0, 2.0 * M_PI * 16100.0;
    phi << 2.1, -1.7, 1.3;
    eta_cos << 3e-6, -2e-6, 1e-6;
    eta_sin << -1e-6, 4e-6, 2e-6;
    const double v_rigid = -0.04;

    const int n = 4000;
    const double dt = 1e-7;
    Eigen::VectorXd t(n), v(n);
    for (int i = 0; i < n; ++i) {
        t(i) = i * dt;
        double vi = v_rigid;
        for (int k = 0; k < n_modes; ++k)
            vi += omega(k) * phi(k) *
                  (-eta_cos(k) * std::sin(omega(k) * t(i)) +
                   eta_sin(k) * std::cos(omega(k) * t(i)));
        v(i) = vi;
    }

    SUBCASE("noise-free recovery is exact") {
        const FreeFitResult fit = fit_modal_free(v, t, omega, phi);
        CHECK(std::abs(fit.v_rigid - v_rigid) < 1e-10);
        for (int k = 0; k < n_modes; ++k) {
            CHECK(std::abs(fit.eta_cos(k) - eta_cos(k)) < 1e-10 * eta_cos.cwiseAbs().maxCoeff());
            CHECK(std::abs(fit.eta_sin(k) - eta_sin(k)) < 1e-10 * eta_sin.cwiseAbs().maxCoeff());
        }
        CHECK(fit.residual_norm < 1e-10 * v.norm());
    }
    SUBCASE("40 dB noise perturbs the coefficients by under 2%") {
        std::mt19937 rng(42);
        const double sigma = v.norm() / std::sqrt(double(n)) / 100.0;  // SNR 40 dB
        std::normal_distribution<double> noise(0.0, sigma);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXd vn = v;
            for (int i = 0; i < n; ++i) vn(i) += noise(rng);
            const FreeFitResult fit = fit_modal_free(vn, t, omega, phi);
            for (int k = 0; k < n_modes; ++k) {
                const double amp = std::hypot(eta_cos(k), eta_sin(k));
                const double err = std::hypot(fit.eta_cos(k) - eta_cos(k),
                                              fit.eta_sin(k) - eta_sin(k));
                worst = std::max(worst, err / amp);
            }
        }
        CHECK(worst < 0.02);
    }
    SUBCASE("duplicate frequencies are rejected") {
        Eigen::VectorXd om2 = omega;
        om2(1) = om2(0);
        CHECK_THROWS_AS(fit_modal_free(v, t, om2, phi), std::invalid_argument);
    }
    SUBCASE("aliased frequencies make the design matrix rank-deficient") {
        // On a uniform grid, omega and 2 pi/dt - omega produce identical samples.
        Eigen::VectorXd om2(2), phi2(2);
        om2 << omega(0), 2.0 * M_PI / dt - omega(0);
        phi2 << 1.0, 1.0;
        CHECK_THROWS_WITH_AS(fit_modal_free(v, t, om2, phi2), doctest::Contains("rank"),
                             std::runtime_error);
    }
}

TEST_CASE("h1 estimator") {
    SUBCASE("single realization ratio") {
        Eigen::VectorXd freq(1);
        freq << 100.0;
        Eigen::VectorXcd u(1), f(1);
        u << std::complex<double>(2.0, 0.0);
        f << std::complex<double>(1.0, 0.0);
        const FrfEstimate est = h1_estimate({{u, f}}, freq);
        CHECK(est.h(0).real() == doctest::Approx(2.0));
        CHECK(est.h(0).imag() == doctest::Approx(0.0));
    }
    SUBCASE("noise-free identity across random excitations") {
        std::mt19937 rng(3);
        std::normal_distribution<double> dist(0.0, 1.0);
        const int nf = 16;
        Eigen::VectorXd freq(nf);
        Eigen::VectorXcd h_true(nf);
        for (int i = 0; i < nf; ++i) {
            freq(i) = 10.0 * (i + 1);
            h_true(i) = std::complex<double>(dist(rng), dist(rng));
        }
        std::vector<std::pair<Eigen::VectorXcd, Eigen::VectorXcd>> reals;
        for (int m = 0; m < 10; ++m) {
            Eigen::VectorXcd f(nf), u(nf);
            for (int i = 0; i < nf; ++i) {
                f(i) = std::complex<double>(dist(rng), dist(rng));
                u(i) = h_true(i) * f(i);
            }
            reals.emplace_back(u, f);
        }
        const FrfEstimate est = h1_estimate(reals, freq);
        for (int i = 0; i < nf; ++i) CHECK(std::abs(est.h(i) - h_true(i)) < 1e-12);
    }
    SUBCASE("output noise averages down like 1/sqrt(N)") {
        std::mt19937 rng(11);
        std::normal_distribution<double> dist(0.0, 1.0);
        const std::complex<double> h_true(1.4, -0.6);
        const auto mean_error = [&](int n_rep, int trials) {
            double acc = 0.0;
            for (int trial = 0; trial < trials; ++trial) {
                std::vector<std::pair<Eigen::VectorXcd, Eigen::VectorXcd>> reals;
                for (int m = 0; m < n_rep; ++m) {
                    Eigen::VectorXcd f(1), u(1);
                    f(0) = std::complex<double>(dist(rng), dist(rng));
                    u(0) = h_true * f(0) + 0.3 * std::complex<double>(dist(rng), dist(rng));
                    reals.emplace_back(u, f);
                }
                Eigen::VectorXd freq(1);
                freq << 50.0;
                acc += std::abs(h1_estimate(reals, freq).h(0) - h_true);
            }
            return acc / trials;
        };
        const double e4 = mean_error(4, 400);
        const double e64 = mean_error(64, 400);
        CHECK(e64 / e4 < 0.45);  // expect about 1/4
        CHECK(e64 / e4 > 0.10);
    }
    SUBCASE("vanishing excitation power flags the bin undefined") {
        Eigen::VectorXd freq(2);
        freq << 10.0, 20.0;
        Eigen::VectorXcd u(2), f(2);
        u << 1.0, 1.0;
        f << 1.0, 0.0;
        const FrfEstimate est = h1_estimate({{u, f}}, freq);
        CHECK(est.defined[0] == 1);
        CHECK(est.defined[1] == 0);
        CHECK(std::isnan(est.h(1).real()));
    }
    SUBCASE("velocity spectra integrate to displacement, f = 0 excluded") {
        Eigen::VectorXd freq(1);
        freq << 25.0;
        Eigen::VectorXcd v(1);
        v << std::complex<double>(0.0, 2.0 * M_PI * 25.0);  // i w -> displacement 1
        const Eigen::VectorXcd u = displacement_from_velocity_spectrum(v, freq);
        CHECK(std::abs(u(0) - std::complex<double>(1.0, 0.0)) < 1e-12);
        Eigen::VectorXd zero(1);
        zero << 0.0;
        CHECK_THROWS_AS(displacement_from_velocity_spectrum(v, zero), std::invalid_argument);
    }
}

TEST_CASE("model frequency response") {
    SUBCASE("single-mode resonance magnitude") {
        ModalBasis basis;
        basis.omega = Eigen::VectorXd::Constant(1, 2.0 * M_PI * 500.0);
        basis.shapes = Eigen::MatrixXd::Constant(1, 1, 1.7);
        basis.rigid_count = 0;
        Eigen::VectorXd damping = Eigen::VectorXd::Constant(1, 1e-4);
        Eigen::VectorXd freq(1);
        freq << 500.0;
        const FrfEstimate est = frf_model(basis, damping, 0, 0, freq);
        const double w = basis.omega(0);
        const double expected = 1.7 * 1.7 / (2.0 * 1e-4 * w * w);
        CHECK(std::abs(est.h(0)) == doctest::Approx(expected).epsilon(1e-9));
    }
    SUBCASE("undamped static limit equals the flexibility entry") {
        const AssembledModel m = assemble_beam(12, steel(), BeamGeometry{0.210, 0.015, 0.010},
                                               BeamBc::clamped_clamped);
        const ModalBasis basis = solve_modes(m);
        const int drive = translation_dof(m, 3), resp = translation_dof(m, 7);
        Eigen::VectorXd freq(1);
        freq << 0.0;
        const FrfEstimate est =
            frf_model(basis, Eigen::VectorXd::Zero(basis.n_modes()), drive, resp, freq);
        const double flex = m.stiffness.inverse()(drive, resp);
        CHECK(est.h(0).real() == doctest::Approx(flex).epsilon(1e-9));
        CHECK(est.h(0).imag() == doctest::Approx(0.0));
    }
    SUBCASE("light damping keeps the 1F peak sharp") {
        const AssembledModel m = assemble_beam(24, steel(), BeamGeometry{0.210, 0.015, 0.010},
                                               BeamBc::free_free);
        const ModalBasis basis = solve_modes(m);
        Eigen::VectorXd damping = Eigen::VectorXd::Constant(basis.n_modes(), 22.9e-6);  // 1F row
        const int p2 = translation_dof(m, nearest_node(m, 0.25 * 0.210));
        const double f1 = basis.omega(2) / (2.0 * M_PI);
        Eigen::VectorXd freq(2);
        freq << f1, 1.05 * f1;
        const FrfEstimate est = frf_model(basis, damping, p2, p2, freq);
        CHECK(std::abs(est.h(0)) > 100.0 * std::abs(est.h(1)));
    }
}

TEST_CASE("pulse spectrum") {
    SUBCASE("rectangular pulse has a sinc envelope") {
        const int n = 1000;
        const double dt = 1e-5, width = 100 * dt;
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < 100; ++i) x(i) = 1.0;
        const Spectrum s = pulse_spectrum(x, dt);
        // First null of |sinc| at f = 1/width.
        const int k_null = static_cast<int>(std::lround(1.0 / width * n * dt));
        CHECK(std::abs(s.values(k_null)) < 1e-3 * std::abs(s.values(0)));
        CHECK(std::abs(s.values(k_null / 2)) > 0.1 * std::abs(s.values(0)));
    }
    SUBCASE("half-sine of 40 us nulls near 1.5/tau = 37.5 kHz") {
        const double tau = 40e-6, dt = 1e-7;
        const int n = 5000;  // 500 us record
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) {
            const double t = i * dt;
            if (t <= tau) x(i) = std::sin(M_PI * t / tau);
        }
        const Spectrum s = pulse_spectrum(x, dt);
        // Locate the first local magnitude minimum above 20 kHz.
        int k = static_cast<int>(std::lround(20e3 * n * dt));
        while (std::abs(s.values(k + 1)) < std::abs(s.values(k))) ++k;
        const double f_null = s.freq(k);
        CHECK(f_null == doctest::Approx(1.5 / tau).epsilon(0.06));
    }
    SUBCASE("parseval identity under the 1/N convention") {
        std::mt19937 rng(5);
        std::normal_distribution<double> dist(0.0, 1.0);
        const int n = 256;
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x(i) = dist(rng);
        const Spectrum s = pulse_spectrum(x, 1e-4);
        const double time_energy = x.squaredNorm();
        const double freq_energy = n * s.values.squaredNorm();
        CHECK(std::abs(time_energy - freq_energy) / time_energy < 1e-9);
    }
}

TEST_CASE("modal summary audits energy conservation") {
    const SimulationRun run = simulate(short_freefree());
    const ModalSummary sum = summarize_modes(run);
    CHECK(sum.balance_error < 0.01);
    CHECK(sum.sphere_ke_pre ==
          doctest::Approx(0.5 * 5.58e-3 * 1.1 * 1.1).epsilon(1e-12));
    for (const auto& row : sum.rows) {
        CHECK(row.energy_j >= 0.0);
        if (row.restitution == row.restitution) {  // skip NaN rows
            CHECK(row.restitution >= 0.0);
            CHECK(row.restitution <= 1.0 + 1e-9);
        }
    }
    // Even bending modes stay below 2% of the bending energy for a central hit.
    double even = 0.0, all = 0.0;
    for (const auto& row : sum.rows) {
        all += row.energy_j;
        if (row.mode % 2 == 0) even += row.energy_j;
    }
    CHECK(even <= 0.02 * all);
}

#include "mbrom/bench.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "mbrom/contact.hpp"
#include "mbrom/integrator.hpp"
#include "mbrom/log.hpp"

namespace mbrom {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double window_duration(const Trajectory& traj) {
    const EventLog ev = detect_events(traj);
    if (!ev.any_contact() || !ev.windows.back().closed()) return 0.0;
    return ev.t_end() - ev.t_start();
}

}  // namespace

Trajectory full_order_reference(const Scenario& scenario, double* wall_s, int* dofs_out,
                                long* steps_out) {
    scenario.validate();
    // The unreduced coupled system: beam free dofs + [sphere mass dof, contact dof].
    // The contact node needs some mass for the explicit march; 1e-3 m_sph keeps the
    // boundary 'heavy' the way plain FE models are, which is the point of the reference.
    const ImpactSetup setup = prepare(scenario);
    const AssembledModel& beam = setup.beam_model;
    const int nf = beam.n_dof();
    const int n = nf + 2;
    const double m_sph = scenario.sphere_mass;
    const double k_contact = 1.0 / setup.sphere_compliance;

    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(n, n);
    mass.topLeftCorner(nf, nf) = beam.mass;
    stiff.topLeftCorner(nf, nf) = beam.stiffness;
    const int i_mass = nf, i_contact = nf + 1;
    mass(i_mass, i_mass) = m_sph;
    mass(i_contact, i_contact) = 1e-3 * m_sph;
    stiff(i_mass, i_mass) += k_contact;
    stiff(i_contact, i_contact) += k_contact;
    stiff(i_mass, i_contact) -= k_contact;
    stiff(i_contact, i_mass) -= k_contact;

    // Stability limit of the central-difference march.
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(stiff, mass,
                                                                 Eigen::EigenvaluesOnly);
    const double omega_max = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    const double dt = 0.9 * 2.0 / omega_max;

    Eigen::MatrixXd w_map = Eigen::MatrixXd::Zero(n, 1);
    w_map(i_contact, 0) = 1.0;
    w_map(setup.impact_dof, 0) = -1.0;

    Eigen::LLT<Eigen::MatrixXd> mass_llt(mass);
    const Eigen::MatrixXd minv_w = mass_llt.solve(w_map);
    Eigen::MatrixXd delassus = dt * dt * w_map.transpose() * minv_w;

    const long n_steps = std::lround(scenario.t_end / dt);
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd v0 = Eigen::VectorXd::Zero(n);
    v0(i_mass) = -scenario.impact_velocity;
    v0(i_contact) = -scenario.impact_velocity;
    Eigen::VectorXd q_prev = q - dt * v0;  // zero initial acceleration (no gap, no strain)

    Trajectory traj;
    const int n_samples = static_cast<int>(n_steps) + 1;
    traj.dt = dt;
    traj.t.resize(n_samples);
    traj.f_c.resize(n_samples);
    traj.v_sph.resize(n_samples);
    traj.lambda.resize(n_samples, 1);
    traj.comp_residual = Eigen::VectorXd::Zero(n_samples);
    traj.v_probes.resize(n_samples, 0);
    traj.eta.resize(0, 0);
    traj.eta_dot.resize(0, 0);

    const auto t0 = std::chrono::steady_clock::now();
    Eigen::VectorXd q_next(n);
    for (int step = 0; step < n_samples; ++step) {
        traj.t(step) = step * dt;
        // Predictor without contact, then the position-level complementarity solve.
        const Eigen::VectorXd accel_free = mass_llt.solve(-(stiff * q));
        const Eigen::VectorXd q_pred = 2.0 * q - q_prev + dt * dt * accel_free;
        const Eigen::VectorXd b = w_map.transpose() * q_pred;
        const Eigen::VectorXd lambda =
            solve_lcp(delassus, b, scenario.penalty_scale, scenario.complementarity_tol,
                      scenario.max_iterations);
        q_next = q_pred + dt * dt * (minv_w * lambda);

        traj.f_c(step) = lambda.sum();
        traj.lambda(step, 0) = lambda(0);
        traj.v_sph(step) = (q_next(i_mass) - q_prev(i_mass)) / (2.0 * dt);
        q_prev = q;
        q = q_next;
    }
    if (wall_s) *wall_s = seconds_since(t0);
    if (dofs_out) *dofs_out = n;
    if (steps_out) *steps_out = n_steps;
    return traj;
}

BenchReport run_bench(const Scenario& scenario) {
    Scenario sc = scenario;
    sc.n_elem = scenario.bench_n_elem;
    sc.t_end = scenario.bench_t_end;

    BenchReport report;

    const auto t_setup = std::chrono::steady_clock::now();
    const ImpactSetup setup = prepare(sc);
    report.rom_setup_s = seconds_since(t_setup);

    const auto t_rom = std::chrono::steady_clock::now();
    const SimulationRun rom_run = simulate(setup);
    const double rom_wall = seconds_since(t_rom);

    BenchMethodResult rom;
    rom.name = "rom_semi_explicit";
    rom.dofs = setup.coupled.n_b() + setup.coupled.n_m();
    rom.steps = std::lround(sc.t_end / sc.dt);
    rom.wall_s = rom_wall;
    rom.contact_duration_s = window_duration(rom_run.trajectory);
    report.methods.push_back(rom);

    BenchMethodResult full;
    full.name = "full_order_reference";
    const Trajectory full_traj =
        full_order_reference(sc, &full.wall_s, &full.dofs, &full.steps);
    full.contact_duration_s = window_duration(full_traj);
    report.methods.push_back(full);

    for (const BenchMethodResult& m : report.methods)
        if (m.wall_s < 10e-3)
            log::warn("bench: " + m.name + " ran for " + std::to_string(m.wall_s * 1e3) +
                      " ms; timer resolution may dominate");

    report.speedup = full.wall_s / std::max(rom.wall_s, 1e-12);
    const double ref = std::max(full.contact_duration_s, 1e-30);
    report.duration_disagreement = std::abs(rom.contact_duration_s - full.contact_duration_s) / ref;
    return report;
}

void write_bench_report(std::ostream& os, const BenchReport& report) {
    os << "method, dofs, steps, wall_s, contact_duration_s\n";
    for (const BenchMethodResult& m : report.methods) {
        std::ostringstream line;
        line.precision(6);
        line << m.name << ", " << m.dofs << ", " << m.steps << ", " << m.wall_s << ", "
             << m.contact_duration_s;
        os << line.str() << "\n";
    }
    os << "rom_setup_s = " << report.rom_setup_s << "\n";
    os << "speedup = " << report.speedup << "\n";
    os << "contact_duration_disagreement = " << report.duration_disagreement << "\n";
}

}  // namespace mbrom

#include "mbrom/integrator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mbrom/hertz.hpp"
#include "mbrom/log.hpp"

namespace mbrom {

namespace {

void check_step_size(double dt, const Eigen::VectorXd& omega) {
    if (dt <= 0.0) throw std::invalid_argument("step: dt must be positive");
    const double om = omega.size() ? omega.maxCoeff() : 0.0;
    if (om * dt > 2.0) {
        std::ostringstream os;
        os << "step: dt*omega_max = " << om * dt
           << " exceeds the linear stability bound 2 of the explicit inner update";
        throw std::runtime_error(os.str());
    }
    if (om * dt > 0.5) {
        std::ostringstream os;
        os << "step: dt*omega_max = " << om * dt << " exceeds 0.5; accuracy degrades";
        log::warn(os.str());
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double total_energy(const CoupledRom& rom, const Eigen::VectorXd& q_b, const Eigen::VectorXd& eta,
                    const Eigen::VectorXd& eta_dot) {
    const double kin = 0.5 * eta_dot.squaredNorm();
    const double pot = 0.5 * q_b.dot(rom.k_bb * q_b) + q_b.dot(rom.k_bi * eta) +
                       0.5 * eta.dot(rom.k_ii * eta);
    return kin + pot;
}

SimState step(const SimState& state, const CoupledRom& rom, const ContactProblem& problem,
              double dt) {
    check_step_size(dt, rom.omega);
    StaticContactSolver solver(rom, problem);
    SimState out = state;
    const StaticContactResult sc = solver.solve(out.eta);
    const Eigen::VectorXd accel = -(rom.k_bi.transpose() * sc.q_b + rom.k_ii * out.eta);
    out.eta_dot_half += dt * accel;
    out.eta += dt * out.eta_dot_half;
    out.q_b = sc.q_b;
    out.lambda = sc.lambda;
    out.time = state.time + dt;
    out.step = state.step + 1;
    return out;
}

ImpactSetup prepare(const Scenario& scenario) {
    scenario.validate();
    ImpactSetup s;
    s.scenario = scenario;

    AssembledModel beam = assemble_beam(scenario.n_elem, scenario.beam_material,
                                        scenario.geometry, scenario.bc, scenario.mass_style);
    s.impact_node = nearest_node(beam, scenario.impact_x());
    s.impact_x = beam.node_x[s.impact_node];
    const int impact_dof = translation_dof(beam, s.impact_node);
    if (impact_dof < 0)
        throw ScenarioError("impact point snaps to a constrained support node; move it inboard");
    s.impact_dof = impact_dof;
    s.beam_model = with_boundary(std::move(beam), {impact_dof});

    s.beam_basis = solve_modes(s.beam_model);
    const double f1 =
        s.beam_basis.omega(s.beam_basis.rigid_count) / (2.0 * M_PI);
    if (scenario.f_cut <= f1) {
        std::ostringstream os;
        os << "rom.f_cut_hz = " << scenario.f_cut
           << " must exceed the first beam elastic frequency (" << f1 << " Hz)";
        throw ScenarioError(os.str());
    }
    s.beam_retained = select_retained(s.beam_basis, scenario.f_cut);
    s.beam_rom = build_rom(s.beam_model, s.beam_basis, s.beam_retained);

    const HertzContact hc =
        hertz_contact(scenario.sphere_material, scenario.beam_material, scenario.sphere_radius);
    s.hertz_stiffness = hc.k_h;
    s.hertz_peak_force = hertz_peak_force(hc, scenario.sphere_mass, scenario.impact_velocity);
    switch (scenario.compliance_rule) {
        case ComplianceRule::hertz_secant_peak:
            s.sphere_compliance = hertz_secant_compliance(hc, s.hertz_peak_force);
            break;
        case ComplianceRule::hertz_tangent_peak:
            s.sphere_compliance = hertz_tangent_compliance(hc, s.hertz_peak_force);
            break;
        case ComplianceRule::fixed_value:
            s.sphere_compliance = scenario.fixed_compliance;
            break;
    }
    const SphereSpec sphere{scenario.sphere_mass, scenario.sphere_radius, s.sphere_compliance};
    s.sphere_rom = build_rom(assemble_sphere(sphere), scenario.f_cut);

    s.coupled = couple(s.sphere_rom, s.beam_rom);
    s.contact = node_to_node_contact(s.coupled, {{0, s.coupled.nb_a}}, Eigen::VectorXd::Zero(1));
    s.contact.penalty_scale = scenario.penalty_scale;
    s.contact.complementarity_tol = scenario.complementarity_tol;
    s.contact.max_iterations = scenario.max_iterations;
    s.contact.gap_tol = scenario.gap_tol;

    for (double frac : scenario.probe_fractions) {
        const int node = nearest_node(s.beam_model, frac * scenario.geometry.length);
        if (translation_dof(s.beam_model, node) < 0)
            throw ScenarioError("probe at fraction " + std::to_string(frac) +
                                " snaps to a constrained support node");
        s.probe_nodes.push_back(node);
        s.probe_x.push_back(s.beam_model.node_x[node]);
    }
    return s;
}

SimulationRun simulate(const ImpactSetup& setup) {
    const Scenario& sc = setup.scenario;
    const CoupledRom& rom = setup.coupled;
    check_step_size(sc.dt, rom.omega);

    const long n_steps = std::lround(sc.t_end / sc.dt);
    const int n_samples = static_cast<int>(n_steps) + 1;
    const int nm = rom.n_m();
    const int n_probes = static_cast<int>(setup.probe_nodes.size());
    const int n_pairs = setup.contact.n_pairs();

    StaticContactSolver solver(rom, setup.contact);

    // Sphere rigid-mode coordinate: eta = x / phi_mass with phi_mass the mode
    // value at the mass dof (first block column past the boundary in R).
    const double phi_mass = setup.sphere_rom.component_modes(0, setup.sphere_rom.n_b());
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(nm);
    Eigen::VectorXd eta_dot0 = Eigen::VectorXd::Zero(nm);
    eta_dot0(0) = -sc.impact_velocity / phi_mass;

    // Probe rows of the beam expansion, in coupled [q_b; eta] ordering.
    Eigen::MatrixXd probe_rows(n_probes, rom.nb_b + rom.nm_b);
    for (int p = 0; p < n_probes; ++p) {
        const int dof = translation_dof(setup.beam_model, setup.probe_nodes[p]);
        probe_rows.row(p) = setup.beam_rom.component_modes.row(dof);
    }

    Trajectory traj;
    traj.dt = sc.dt;
    traj.t.resize(n_samples);
    traj.f_c.resize(n_samples);
    traj.v_sph.resize(n_samples);
    traj.lambda.resize(n_samples, n_pairs);
    traj.eta.resize(n_samples, nm);
    traj.eta_dot.resize(n_samples, nm);
    traj.comp_residual.resize(n_samples);
    traj.probe_x = setup.probe_x;
    traj.beam_eta_offset = rom.nm_a;
    traj.beam_omega = setup.beam_rom.retained_omega;
    traj.beam_rigid_count = setup.beam_rom.retained_rigid;
    Eigen::MatrixXd w_probes(n_samples, n_probes);

    // Half-step start-up: the marching loop kicks by a full dt at t = 0, so the
    // staggered velocity starts half a step behind for second order from t = 0.
    const StaticContactResult sc0 = solver.solve(eta);
    Eigen::VectorXd eta_dot_half =
        eta_dot0 + 0.5 * sc.dt * (rom.k_bi.transpose() * sc0.q_b + rom.k_ii * eta);

    double e0 = std::numeric_limits<double>::quiet_NaN();
    for (int n = 0; n < n_samples; ++n) {
        const Eigen::VectorXd prev_half = eta_dot_half;
        const StaticContactResult scr = solver.solve(eta);
        const Eigen::VectorXd accel = -(rom.k_bi.transpose() * scr.q_b + rom.k_ii * eta);
        eta_dot_half += sc.dt * accel;
        const Eigen::VectorXd eta_dot_n = 0.5 * (prev_half + eta_dot_half);

        traj.t(n) = n * sc.dt;
        traj.f_c(n) = n_pairs ? scr.lambda.sum() : 0.0;
        traj.lambda.row(n) = scr.lambda.transpose();
        traj.eta.row(n) = eta.transpose();
        traj.eta_dot.row(n) = eta_dot_n.transpose();
        traj.comp_residual(n) = scr.residual;
        traj.v_sph(n) = phi_mass * eta_dot_n(0);
        if (n_probes) {
            Eigen::VectorXd beam_gen(rom.nb_b + rom.nm_b);
            beam_gen << scr.q_b.tail(rom.nb_b), eta.tail(rom.nm_b);
            w_probes.row(n) = (probe_rows * beam_gen).transpose();
        }

        const double e = total_energy(rom, scr.q_b, eta, eta_dot_n);
        if (n == 0) e0 = e;
        if (e > 1.10 * e0 + 1e-300) {
            std::ostringstream os;
            os << "instability detected at t = " << fmt(traj.t(n)) << ": total energy " << e
               << " J grew above 110% of the initial " << e0 << " J; reduce dt";
            throw std::runtime_error(os.str());
        }

        eta += sc.dt * eta_dot_half;
    }

    // Probe velocities by central differences of the reconstructed displacements.
    traj.v_probes.resize(n_samples, n_probes);
    for (int p = 0; p < n_probes; ++p) {
        for (int n = 1; n + 1 < n_samples; ++n)
            traj.v_probes(n, p) = (w_probes(n + 1, p) - w_probes(n - 1, p)) / (2.0 * sc.dt);
        if (n_samples >= 2) {
            traj.v_probes(0, p) = (w_probes(1, p) - w_probes(0, p)) / sc.dt;
            traj.v_probes(n_samples - 1, p) =
                (w_probes(n_samples - 1, p) - w_probes(n_samples - 2, p)) / sc.dt;
        }
    }

    SimulationRun run;
    run.setup = setup;
    run.trajectory = std::move(traj);
    run.events = detect_events(run.trajectory);
    return run;
}

SimulationRun simulate(const Scenario& scenario) { return simulate(prepare(scenario)); }

Eigen::VectorXd Trajectory::beam_eta_at(int sample) const {
    return eta.row(sample).segment(beam_eta_offset, n_beam_modes()).transpose();
}

Eigen::VectorXd Trajectory::beam_eta_dot_at(int sample) const {
    return eta_dot.row(sample).segment(beam_eta_offset, n_beam_modes()).transpose();
}

bool ContactWindow::closed() const { return !std::isnan(release); }

double EventLog::t_start() const {
    if (windows.empty()) throw std::runtime_error("event log: no contact occurred");
    return windows.front().onset;
}

double EventLog::t_end() const {
    if (windows.empty()) throw std::runtime_error("event log: no contact occurred");
    if (!windows.back().closed())
        throw std::runtime_error("event log: contact never released within the record");
    return windows.back().release;
}

EventLog detect_events(const Trajectory& trajectory, double coalescence_time) {
    EventLog log;
    log.coalescence_time = coalescence_time;

    std::vector<ContactWindow> raw;
    bool in_contact = false;
    for (int n = 0; n < trajectory.n_samples(); ++n) {
        const bool active = trajectory.f_c(n) > 0.0;
        if (active && !in_contact) {
            raw.push_back({trajectory.t(n), std::numeric_limits<double>::quiet_NaN()});
            in_contact = true;
        } else if (!active && in_contact) {
            raw.back().release = trajectory.t(n);
            in_contact = false;
        }
    }
    log.raw_windows = static_cast<int>(raw.size());

    for (const ContactWindow& w : raw) {
        if (!log.windows.empty() && log.windows.back().closed() &&
            w.onset - log.windows.back().release < coalescence_time) {
            log.windows.back().release = w.release;  // coalesced liftoff-recontact event
        } else {
            log.windows.push_back(w);
        }
    }
    log.sub_impacts = log.raw_windows - static_cast<int>(log.windows.size());
    return log;
}

void write_event_log(std::ostream& os, const EventLog& log) {
    for (const ContactWindow& w : log.windows) {
        os << "onset t=" << fmt(w.onset) << "\n";
        if (w.closed())
            os << "release t=" << fmt(w.release) << "\n";
        else
            os << "release t=never (contact persists at end of record)\n";
    }
    os << "subimpacts n=" << log.sub_impacts << "\n";
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::string& run_id) {
    if (!run_id.empty()) os << "# run_id=" << run_id << "\n";
    os << "t,f_c,v_sph";
    for (int p = 0; p < traj.v_probes.cols(); ++p) os << ",v_P" << p + 1;
    for (int j = 0; j < traj.lambda.cols(); ++j) os << ",lambda_" << j + 1;
    os << "\n";
    for (int n = 0; n < traj.n_samples(); ++n) {
        os << fmt(traj.t(n)) << "," << fmt(traj.f_c(n)) << "," << fmt(traj.v_sph(n));
        for (int p = 0; p < traj.v_probes.cols(); ++p) os << "," << fmt(traj.v_probes(n, p));
        for (int j = 0; j < traj.lambda.cols(); ++j) os << "," << fmt(traj.lambda(n, j));
        os << "\n";
    }
}

Trajectory read_trajectory_csv(std::istream& is) {
    std::string line;
    std::vector<std::string> header;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream hs(line);
        std::string col;
        while (std::getline(hs, col, ',')) header.push_back(col);
        break;
    }
    if (header.size() < 3 || header[0] != "t" || header[1] != "f_c" || header[2] != "v_sph")
        throw std::runtime_error("trajectory csv: unexpected header");
    int n_probes = 0, n_pairs = 0;
    for (size_t c = 3; c < header.size(); ++c) {
        if (header[c].rfind("v_P", 0) == 0)
            ++n_probes;
        else if (header[c].rfind("lambda_", 0) == 0)
            ++n_pairs;
        else
            throw std::runtime_error("trajectory csv: unexpected column '" + header[c] + "'");
    }

    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<double> row;
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != header.size())
            throw std::runtime_error("trajectory csv: row width mismatch");
        rows.push_back(std::move(row));
    }

    Trajectory traj;
    const int n = static_cast<int>(rows.size());
    traj.t.resize(n);
    traj.f_c.resize(n);
    traj.v_sph.resize(n);
    traj.v_probes.resize(n, n_probes);
    traj.lambda.resize(n, n_pairs);
    traj.comp_residual = Eigen::VectorXd::Zero(n);
    for (int r = 0; r < n; ++r) {
        traj.t(r) = rows[r][0];
        traj.f_c(r) = rows[r][1];
        traj.v_sph(r) = rows[r][2];
        for (int p = 0; p < n_probes; ++p) traj.v_probes(r, p) = rows[r][3 + p];
        for (int j = 0; j < n_pairs; ++j) traj.lambda(r, j) = rows[r][3 + n_probes + j];
    }
    if (n >= 2) traj.dt = traj.t(1) - traj.t(0);
    return traj;
}

}  // namespace mbrom

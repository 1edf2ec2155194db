#pragma once

#include <Eigen/Dense>

#include "mbrom/contact.hpp"
#include "mbrom/modal.hpp"
#include "mbrom/scenario.hpp"
#include "mbrom/trajectory.hpp"

namespace mbrom {

/// Marching state of the semi-explicit scheme. eta_dot_half is staggered:
/// after step n it holds the velocity at t^{n+1/2}; q_b and lambda hold the
/// static contact solution of the most recent integer time level.
struct SimState {
    double time = 0.0;
    long step = 0;
    Eigen::VectorXd q_b;
    Eigen::VectorXd eta;
    Eigen::VectorXd eta_dot_half;
    Eigen::VectorXd lambda;
};

// One semi-explicit step: (i) static contact solve at eta^n, (ii) explicit
// half-step velocity update, (iii) position update. Validates dt against the
// highest retained frequency (throws above dt*omega = 2, warns above 0.5).
SimState step(const SimState& state, const CoupledRom& rom, const ContactProblem& problem,
              double dt);

/// Everything scenario-derived that both the massless-boundary march and the
/// Hertz oracle consume.
struct ImpactSetup {
    Scenario scenario;
    AssembledModel beam_model;
    ModalBasis beam_basis;
    std::vector<int> beam_retained;
    ReducedModel beam_rom;
    ReducedModel sphere_rom;
    CoupledRom coupled;
    ContactProblem contact;
    int impact_node = 0;
    double impact_x = 0.0;         // snapped coordinate
    int impact_dof = 0;            // parent beam dof of the contact node
    double sphere_compliance = 0.0;
    double hertz_stiffness = 0.0;   // k_H
    double hertz_peak_force = 0.0;  // F* used by the compliance rules
    std::vector<int> probe_nodes;
    std::vector<double> probe_x;
};

ImpactSetup prepare(const Scenario& scenario);

struct SimulationRun {
    ImpactSetup setup;
    Trajectory trajectory;
    EventLog events;
};

SimulationRun simulate(const ImpactSetup& setup);
SimulationRun simulate(const Scenario& scenario);

// Total mechanical energy of the coupled reduced system at an integer sample.
double total_energy(const CoupledRom& rom, const Eigen::VectorXd& q_b,
                    const Eigen::VectorXd& eta, const Eigen::VectorXd& eta_dot);

}  // namespace mbrom

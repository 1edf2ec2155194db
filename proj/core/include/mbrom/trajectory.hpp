#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace mbrom {

/// Time series of one run, sampled on the integer step grid. Inner coordinates
/// are stored as [sphere block | beam block]; beam_eta_offset marks the split.
struct Trajectory {
    double dt = 0.0;
    Eigen::VectorXd t;
    Eigen::VectorXd f_c;          // total contact force, sum of multipliers
    Eigen::VectorXd v_sph;        // sphere mass-dof velocity
    Eigen::MatrixXd v_probes;     // n_samples x n_probes
    Eigen::MatrixXd lambda;       // n_samples x n_pairs
    Eigen::MatrixXd eta;          // n_samples x n_inner
    Eigen::MatrixXd eta_dot;      // n_samples x n_inner, integer-time velocities
    Eigen::VectorXd comp_residual;  // scaled complementarity residual per step
    std::vector<double> probe_x;
    Eigen::VectorXd beam_omega;   // retained beam frequencies (rad/s), beam block order
    int beam_eta_offset = 0;
    int beam_rigid_count = 0;

    int n_samples() const { return static_cast<int>(t.size()); }
    int n_beam_modes() const { return static_cast<int>(beam_omega.size()); }
    Eigen::VectorXd beam_eta_at(int sample) const;
    Eigen::VectorXd beam_eta_dot_at(int sample) const;
};

struct ContactWindow {
    double onset = 0.0;
    double release = 0.0;  // NaN if still in contact at the end of the record
    bool closed() const;
};

struct EventLog {
    std::vector<ContactWindow> windows;  // after coalescence
    int raw_windows = 0;
    int sub_impacts = 0;                 // raw windows merged away by coalescence
    double coalescence_time = 5e-6;

    bool any_contact() const { return !windows.empty(); }
    // Start/end of the overall contact span (first onset, last release).
    double t_start() const;
    double t_end() const;
};

EventLog detect_events(const Trajectory& trajectory, double coalescence_time = 5e-6);

void write_event_log(std::ostream& os, const EventLog& log);

// `t,f_c,v_sph,v_P1..v_Pk,lambda_1..lambda_m`; a leading `# run_id=` comment
// line carries the manifest id when provided.
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory,
                          const std::string& run_id = "");
Trajectory read_trajectory_csv(std::istream& is);

}  // namespace mbrom

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mbrom/integrator.hpp"
#include "mbrom/modal.hpp"
#include "mbrom/trajectory.hpp"

namespace mbrom {

// E_mod = (eta_dot^2 + omega^2 eta^2) / 2, mass-normalized convention.
double modal_energy(double eta, double eta_dot, double omega);

// eta = Phi' M q for mass-normalized shapes; same relation for velocities.
std::pair<Eigen::VectorXd, Eigen::VectorXd> project_to_modal(const Eigen::VectorXd& q,
                                                             const Eigen::VectorXd& q_dot,
                                                             const ModalBasis& basis,
                                                             const Eigen::MatrixXd& mass);

// r_k = -(v_sph(t_E) - phi_k(P) eta_dot_k(t_E)) / v_sph(t_S), per beam mode.
// phi_impact holds the mass-normalized shape at the impact node, beam block order.
Eigen::VectorXd modal_restitution(const Trajectory& trajectory, const EventLog& events,
                                  const Eigen::VectorXd& phi_impact);

// f_c = m dv/dt by 2nd-order central differences, one-sided at the ends.
Eigen::VectorXd force_from_sphere_velocity(const Eigen::VectorXd& v_sph, double sphere_mass,
                                           double dt);

// Linear-interpolation resampling onto a fixed rate (used to emulate the
// 102.4 kHz acquisition). Returns the sample times when t_out is given.
Eigen::VectorXd resample_linear(const Eigen::VectorXd& signal, double dt_in, double rate_out_hz,
                                Eigen::VectorXd* t_out = nullptr);

struct DuhamelResult {
    double eta = 0.0;
    double eta_dot = 0.0;
};

// Undamped Duhamel integral of a sampled force window, trapezoidal rule:
//   eta(T)     = (phi/omega) ∫ f sin(omega (T - tau)) dtau
//   eta_dot(T) =  phi        ∫ f cos(omega (T - tau)) dtau
DuhamelResult duhamel_response(const Eigen::VectorXd& force_window, double dt, double omega,
                               double phi_p);

struct FreeFitResult {
    double v_rigid = 0.0;
    Eigen::VectorXd eta_cos;  // eta_k(t) = eta_cos cos(omega t) + eta_sin sin(omega t)
    Eigen::VectorXd eta_sin;
    double residual_norm = 0.0;
};

// Least-squares fit of v(t) = v_RgB + sum_k omega_k phi_k [-eta_cos sin + eta_sin cos]
// on the given samples; phases are referenced to t = 0 of the passed time array.
FreeFitResult fit_modal_free(const Eigen::VectorXd& v, const Eigen::VectorXd& t,
                             const Eigen::VectorXd& omega, const Eigen::VectorXd& phi_p);

struct FrfEstimate {
    Eigen::VectorXd freq;          // Hz, ascending
    Eigen::VectorXcd h;            // m/N
    std::vector<uint8_t> defined;  // 0 where the excitation power vanishes
    int n_realizations = 0;
};

// H1 = sum U F* / sum F F* per frequency bin; undefined bins are flagged, not zeroed.
FrfEstimate h1_estimate(const std::vector<std::pair<Eigen::VectorXcd, Eigen::VectorXcd>>&
                            realizations,  // (U_m, F_m) on the shared grid
                        const Eigen::VectorXd& freq);

// U(f) = V(f) / (2 pi f i); the f = 0 bin is not representable and must be excluded.
Eigen::VectorXcd displacement_from_velocity_spectrum(const Eigen::VectorXcd& v,
                                                     const Eigen::VectorXd& freq);

// H(f) = sum_k phi_k(drive) phi_k(resp) / (omega_k^2 - w^2 + 2 i D_k omega_k w).
FrfEstimate frf_model(const ModalBasis& basis, const Eigen::VectorXd& damping_ratios,
                      int drive_dof, int response_dof, const Eigen::VectorXd& freq);

struct Spectrum {
    Eigen::VectorXd freq;    // Hz, k/(N dt), k = 0..N-1
    Eigen::VectorXcd values; // forward DFT with 1/N normalization
};

Spectrum pulse_spectrum(const Eigen::VectorXd& signal, double dt);

struct ModalSummary {
    struct Row {
        int mode = 0;          // 1-based elastic mode number
        std::string label;     // 1F, 2F, ...
        double freq_hz = 0.0;
        double energy_j = 0.0;
        double energy_fraction = 0.0;  // of the sphere's pre-impact kinetic energy
        double restitution = 0.0;
    };
    std::vector<Row> rows;
    double sphere_ke_pre = 0.0;
    double sphere_ke_post = 0.0;
    double beam_rigid_ke = 0.0;
    double balance_error = 0.0;  // |pre - post - rigid - sum(E_mod)| / pre
};

// Evaluated at the contact release sample (last sample if contact never ends).
ModalSummary summarize_modes(const SimulationRun& run);

void write_modal_summary_csv(std::ostream& os, const ModalSummary& summary,
                             const std::string& run_id = "");
void write_frf_csv(std::ostream& os, const FrfEstimate& frf, const std::string& run_id = "");
void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum,
                        const std::string& run_id = "");

}  // namespace mbrom

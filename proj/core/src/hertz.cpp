#include "mbrom/hertz.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>

#include "mbrom/log.hpp"

namespace mbrom {

HertzContact hertz_contact(const MaterialSpec& sphere, const MaterialSpec& target, double radius) {
    sphere.validate();
    target.validate();
    if (radius <= 0.0) throw std::invalid_argument("hertz_contact: radius must be positive");
    HertzContact c;
    const double inv_e_star =
        (1.0 - sphere.poisson_ratio * sphere.poisson_ratio) / sphere.elastic_modulus +
        (1.0 - target.poisson_ratio * target.poisson_ratio) / target.elastic_modulus;
    c.e_star = 1.0 / inv_e_star;
    c.radius = radius;
    c.k_h = (4.0 / 3.0) * c.e_star * std::sqrt(radius);
    return c;
}

double hertz_max_indentation(const HertzContact& c, double mass, double speed) {
    return std::pow(5.0 * mass * speed * speed / (4.0 * c.k_h), 0.4);
}

double hertz_peak_force(const HertzContact& c, double mass, double speed) {
    return c.k_h * std::pow(hertz_max_indentation(c, mass, speed), 1.5);
}

double hertz_impact_duration(const HertzContact& c, double mass, double speed) {
    // tau = 2 * B(2/5,1/2)/... evaluated: 2.94325 * delta_max / v.
    return 2.943245 * hertz_max_indentation(c, mass, speed) / speed;
}

double hertz_tangent_compliance(const HertzContact& c, double force) {
    if (force <= 0.0) throw std::invalid_argument("hertz compliance: force must be positive");
    return 1.0 / (1.5 * std::pow(c.k_h, 2.0 / 3.0) * std::cbrt(force));
}

double hertz_secant_compliance(const HertzContact& c, double force) {
    if (force <= 0.0) throw std::invalid_argument("hertz compliance: force must be positive");
    return 1.0 / (std::pow(c.k_h, 2.0 / 3.0) * std::cbrt(force));
}

namespace {

using State = std::vector<double>;

// State layout: [x_s, v_s, eta_1..eta_m, eta_dot_1..eta_dot_m].
struct HertzBeamOde {
    double k_h, mass;
    Eigen::VectorXd omega2;  // retained beam frequencies squared
    Eigen::VectorXd phi_p;   // shapes at the impact node

    double contact_force(const State& y) const {
        double w_p = 0.0;
        const int m = static_cast<int>(omega2.size());
        for (int k = 0; k < m; ++k) w_p += phi_p(k) * y[2 + k];
        const double delta = w_p - y[0];  // beam surface above sphere = penetration
        return delta > 0.0 ? k_h * std::pow(delta, 1.5) : 0.0;
    }

    void operator()(const State& y, State& dydt, double) const {
        const int m = static_cast<int>(omega2.size());
        const double f = contact_force(y);
        dydt[0] = y[1];
        dydt[1] = f / mass;  // contact pushes the sphere up
        for (int k = 0; k < m; ++k) {
            dydt[2 + k] = y[2 + m + k];
            dydt[2 + m + k] = -omega2(k) * y[2 + k] - phi_p(k) * f;  // and the beam down
        }
    }
};

Trajectory integrate_hertz(const HertzBeamOde& ode, double v0, double dt_out, double t_end,
                           double sqrt_mass, const Eigen::MatrixXd& probe_phi,
                           const Eigen::VectorXd& beam_omega, int beam_rigid) {
    namespace odeint = boost::numeric::odeint;
    const int m = static_cast<int>(ode.omega2.size());
    const long n_steps = std::lround(t_end / dt_out);
    const int n_samples = static_cast<int>(n_steps) + 1;
    const int n_probes = static_cast<int>(probe_phi.rows());

    Trajectory traj;
    traj.dt = dt_out;
    traj.t.resize(n_samples);
    traj.f_c.resize(n_samples);
    traj.v_sph.resize(n_samples);
    traj.lambda.resize(n_samples, 1);
    traj.eta.resize(n_samples, 1 + m);
    traj.eta_dot.resize(n_samples, 1 + m);
    traj.v_probes.resize(n_samples, n_probes);
    traj.comp_residual = Eigen::VectorXd::Zero(n_samples);
    traj.beam_eta_offset = 1;
    traj.beam_omega = beam_omega;
    traj.beam_rigid_count = beam_rigid;

    State y(2 + 2 * m, 0.0);
    y[1] = -v0;

    int sample = 0;
    auto observer = [&](const State& yy, double t) {
        if (sample >= n_samples) return;
        const double f = ode.contact_force(yy);
        traj.t(sample) = t;
        traj.f_c(sample) = f;
        traj.lambda(sample, 0) = f;
        traj.v_sph(sample) = yy[1];
        traj.eta(sample, 0) = sqrt_mass * yy[0];
        traj.eta_dot(sample, 0) = sqrt_mass * yy[1];
        for (int k = 0; k < m; ++k) {
            traj.eta(sample, 1 + k) = yy[2 + k];
            traj.eta_dot(sample, 1 + k) = yy[2 + m + k];
        }
        for (int p = 0; p < n_probes; ++p) {
            double v = 0.0;
            for (int k = 0; k < m; ++k) v += probe_phi(p, k) * yy[2 + m + k];
            traj.v_probes(sample, p) = v;
        }
        ++sample;
    };

    auto stepper = odeint::make_dense_output(1e-12, 1e-9,
                                             odeint::runge_kutta_dopri5<State>());
    odeint::integrate_const(stepper, ode, y, 0.0, t_end + 0.5 * dt_out, dt_out, observer);
    return traj;
}

}  // namespace

Trajectory hertz_oracle(const ImpactSetup& setup) {
    const Scenario& sc = setup.scenario;
    const HertzContact hc =
        hertz_contact(sc.sphere_material, sc.beam_material, sc.sphere_radius);

    HertzBeamOde ode;
    ode.k_h = hc.k_h;
    ode.mass = sc.sphere_mass;
    const int m = static_cast<int>(setup.beam_retained.size());
    ode.omega2.resize(m);
    ode.phi_p.resize(m);
    for (int k = 0; k < m; ++k) {
        const int mode = setup.beam_retained[k];
        ode.omega2(k) = setup.beam_basis.omega(mode) * setup.beam_basis.omega(mode);
        ode.phi_p(k) = setup.beam_basis.shapes(setup.impact_dof, mode);
    }

    Eigen::MatrixXd probe_phi(setup.probe_nodes.size(), m);
    for (size_t p = 0; p < setup.probe_nodes.size(); ++p) {
        const int dof = translation_dof(setup.beam_model, setup.probe_nodes[p]);
        for (int k = 0; k < m; ++k)
            probe_phi(static_cast<int>(p), k) = setup.beam_basis.shapes(dof, setup.beam_retained[k]);
    }

    Trajectory traj = integrate_hertz(ode, sc.impact_velocity, sc.dt, sc.t_end,
                                      std::sqrt(sc.sphere_mass), probe_phi,
                                      setup.beam_rom.retained_omega,
                                      setup.beam_rom.retained_rigid);
    traj.probe_x = setup.probe_x;

    const double delta_max =
        (traj.f_c.maxCoeff() > 0.0) ? std::pow(traj.f_c.maxCoeff() / hc.k_h, 2.0 / 3.0) : 0.0;
    if (delta_max > 0.01 * sc.sphere_radius) {
        std::ostringstream os;
        os << "hertz_oracle: peak indentation " << delta_max << " m exceeds 1% of the sphere "
           << "radius; Hertz validity degrades";
        log::warn(os.str());
    }
    return traj;
}

Trajectory hertz_oracle(const Scenario& scenario) { return hertz_oracle(prepare(scenario)); }

Trajectory hertz_rigid_target(const HertzContact& c, double mass, double speed, double dt_out,
                              double t_end) {
    HertzBeamOde ode;
    ode.k_h = c.k_h;
    ode.mass = mass;
    ode.omega2.resize(0);
    ode.phi_p.resize(0);
    return integrate_hertz(ode, speed, dt_out, t_end, std::sqrt(mass), Eigen::MatrixXd(0, 0),
                           Eigen::VectorXd(), 0);
}

}  // namespace mbrom

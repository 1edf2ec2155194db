#pragma once

#include "mbrom/integrator.hpp"
#include "mbrom/types.hpp"

namespace mbrom {

/// Hertzian point contact of a sphere on a flat: F = k_H delta^{3/2}.
struct HertzContact {
    double k_h = 0.0;     // N/m^{3/2}
    double e_star = 0.0;  // Pa
    double radius = 0.0;  // m
};

// 1/E* = (1-nu1^2)/E1 + (1-nu2^2)/E2, k_H = (4/3) E* sqrt(R).
HertzContact hertz_contact(const MaterialSpec& sphere, const MaterialSpec& target,
                           double radius);

double hertz_max_indentation(const HertzContact& c, double mass, double speed);
double hertz_peak_force(const HertzContact& c, double mass, double speed);
// Rigid-target impact duration, 2.87 (m^2 / (R E*^2 v))^{1/5}.
double hertz_impact_duration(const HertzContact& c, double mass, double speed);

double hertz_tangent_compliance(const HertzContact& c, double force);
double hertz_secant_compliance(const HertzContact& c, double force);

// Reference model: sphere rigid-body dof + retained beam modes with the
// nonlinear Hertz force, integrated adaptively (dopri5, rel tol 1e-9).
// Produces the same Trajectory layout as the massless-boundary march.
Trajectory hertz_oracle(const ImpactSetup& setup);
Trajectory hertz_oracle(const Scenario& scenario);

// Half-space limit: beam modes removed, immovable target.
Trajectory hertz_rigid_target(const HertzContact& c, double mass, double speed,
                              double dt_out, double t_end);

}  // namespace mbrom

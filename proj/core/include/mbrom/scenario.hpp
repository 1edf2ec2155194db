#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mbrom/model.hpp"
#include "mbrom/types.hpp"

namespace mbrom {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ComplianceRule {
    hertz_secant_peak,   // c = 1/(k_H^{2/3} F*^{1/3}), chord through the Hertz peak (default)
    hertz_tangent_peak,  // c = 1/(1.5 k_H^{2/3} F*^{1/3}), tangent at the Hertz peak
    fixed_value,         // sphere.compliance_m_per_n taken verbatim
};

enum class Strictness { strict, lenient };

/// One impact run: beam, sphere, impact, reduction and integration settings.
struct Scenario {
    MaterialSpec beam_material = steel();
    BeamGeometry geometry{0.210, 0.015, 0.010};
    BeamBc bc = BeamBc::free_free;
    int n_elem = 60;
    MassStyle mass_style = MassStyle::consistent;

    double sphere_mass = 5.58e-3;    // kg
    double sphere_radius = 5.55e-3;  // m
    MaterialSpec sphere_material = steel();
    ComplianceRule compliance_rule = ComplianceRule::hertz_secant_peak;
    double fixed_compliance = 0.0;   // m/N, used by fixed_value only

    std::string impact_point = "P4";     // label into point_fractions, or ""
    double impact_position = -1.0;       // m; overrides the label when >= 0
    double impact_velocity = 1.100;      // m/s, downward magnitude

    double f_cut = 69.7e3;  // Hz, modal retention cutoff

    double dt = 1e-7;       // s
    double t_end = 5e-4;    // s

    double penalty_scale = 1.0;
    double complementarity_tol = 1e-10;
    int max_iterations = 500;
    double gap_tol = 1e-12;

    std::map<std::string, double> point_fractions = {
        {"P1", 0.125}, {"P2", 0.25}, {"P3", 0.75}, {"P4", 0.5}};
    std::vector<double> probe_fractions = {0.25, 0.75};

    double frf_damping_ratio = 1e-4;  // uniform modal damping for the model FRF output

    bool downsample_102k4 = false;

    int bench_n_elem = 150;
    double bench_t_end = 1.5e-4;

    double impact_x() const;  // resolved impact coordinate in meters
    void validate() const;
};

Scenario parse_scenario(const std::string& path, Strictness strictness = Strictness::strict);
Scenario parse_scenario_text(const std::string& text, Strictness strictness,
                             const std::string& origin);

// Canonical `section.key = value` echo of a scenario; parse(print(s)) == s.
std::string print_scenario(const Scenario& s);
void print_defaults(std::ostream& os);

}  // namespace mbrom

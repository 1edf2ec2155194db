#pragma once

#include <stdexcept>

namespace mbrom {

/// Homogeneous, isotropic, linear-elastic material.
struct MaterialSpec {
    double elastic_modulus = 0.0;  // Pa
    double poisson_ratio = 0.0;
    double density = 0.0;          // kg/m^3

    void validate() const;
};

/// Rectangular-section beam, bending about the width axis (flap-wise).
struct BeamGeometry {
    double length = 0.0;  // m
    double width = 0.0;   // m
    double height = 0.0;  // m

    double area() const { return width * height; }
    double second_moment() const { return width * height * height * height / 12.0; }

    void validate() const;  // warns below slenderness 5
};

/// Rigid sphere with a scalar static compliance of the contact region.
struct SphereSpec {
    double mass = 0.0;                // kg
    double radius = 0.0;              // m
    double contact_compliance = 0.0;  // m/N

    void validate() const;
};

inline MaterialSpec steel() { return MaterialSpec{210.0e9, 0.3, 7800.0}; }

}  // namespace mbrom

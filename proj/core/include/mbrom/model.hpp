#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mbrom/types.hpp"

namespace mbrom {

enum class MassStyle { consistent, lumped };
enum class BeamBc { free_free, clamped_clamped };

struct DofLabel {
    int node = 0;
    std::string tag;  // "u" axial, "w" transverse, "rot" rotation

    bool is_translation() const { return tag == "u" || tag == "w"; }
};

/// Assembled linear-elastic model with a boundary/inner dof partition.
/// Matrices cover the free dofs only; eliminated supports are kept in
/// constrained_set for bookkeeping. Immutable by convention once built.
struct AssembledModel {
    Eigen::MatrixXd mass;       // n x n, symmetric
    Eigen::MatrixXd stiffness;  // n x n, symmetric PSD
    std::vector<DofLabel> dof_labels;
    std::vector<int> boundary_set;
    std::vector<int> inner_set;
    std::vector<DofLabel> constrained_set;
    std::vector<double> node_x;      // axial coordinate per node id (empty if unknown)
    Eigen::MatrixXd rigid_seeds;     // exact rigid-body vectors, n x r (0 cols if none/unknown)

    int n_dof() const { return static_cast<int>(stiffness.rows()); }
    std::vector<int> massless_dofs() const;  // dofs whose mass row is identically zero
    std::string dof_name(int dof) const;

    void validate() const;
};

AssembledModel assemble_rod(int n_elem, const MaterialSpec& material, double area,
                            double length, MassStyle mass_style = MassStyle::consistent);

AssembledModel assemble_beam(int n_elem, const MaterialSpec& material,
                             const BeamGeometry& geometry, BeamBc bc,
                             MassStyle mass_style = MassStyle::consistent);

// Two-dof chain: massive rigid-body dof (inner) + massless contact dof (boundary)
// joined by a spring of stiffness 1/contact_compliance. Dof 0 is the mass dof.
AssembledModel assemble_sphere(const SphereSpec& spec);

struct MeshGuideline {
    double wave_speed;      // m/s, transversal
    double wavelength;      // m, at f_max
    double element_length;  // m, wavelength / 20
};
MeshGuideline recommend_element_length(const MaterialSpec& material, double f_max_hz);

// Returns a copy of the model with the given dofs marked as contact boundary.
// Rotational dofs are rejected; only translations may enter the boundary set.
AssembledModel with_boundary(AssembledModel model, const std::vector<int>& boundary_dofs);

// Snaps an axial coordinate to the nearest node. Throws if x lies outside the span.
int nearest_node(const AssembledModel& model, double x);

// Index of the free translation dof at a node, or -1 if it was eliminated by a support.
int translation_dof(const AssembledModel& model, int node);

}  // namespace mbrom

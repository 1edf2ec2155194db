#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mbrom/modal.hpp"
#include "mbrom/model.hpp"

namespace mbrom {

/// Residual flexibility of the non-retained modes, boundary columns only.
struct ResidualFlexibility {
    Eigen::MatrixXd bb;  // n_b x n_b
    Eigen::MatrixXd ib;  // n_i x n_b
};

ResidualFlexibility residual_flexibility(const AssembledModel& model, const ModalBasis& basis,
                                         const std::vector<int>& retained);

/// Massless-boundary reduced model: generalized coordinates [q_b; eta],
/// reduced mass diag(0, I), reduced stiffness [[k_bb, k_bi], [k_bi', k_ii]].
struct ReducedModel {
    Eigen::MatrixXd component_modes;  // R, n x (n_b + n_m); empty for imported models
    Eigen::MatrixXd k_bb;             // n_b x n_b
    Eigen::MatrixXd k_bi;             // n_b x n_m
    Eigen::MatrixXd k_ii;             // n_m x n_m
    Eigen::MatrixXd phi_b;            // boundary rows of the retained modes, n_b x n_m
    Eigen::VectorXd retained_omega;   // rad/s
    std::vector<int> boundary_map;    // parent dof index per q_b slot
    std::vector<DofLabel> boundary_labels;
    int retained_rigid = 0;

    int n_b() const { return static_cast<int>(k_bb.rows()); }
    int n_m() const { return static_cast<int>(k_ii.rows()); }
    Eigen::MatrixXd reduced_stiffness() const;  // assembled K~
    Eigen::MatrixXd reduced_mass() const;       // diag(0, I), constructed exactly

    // q = R [q_b; eta]; boundary rows of the result equal q_b exactly.
    Eigen::VectorXd expand(const Eigen::VectorXd& q_b, const Eigen::VectorXd& eta) const;
};

ReducedModel build_rom(const AssembledModel& model, const ModalBasis& basis,
                       const std::vector<int>& retained);

// Convenience: solves modes (condensing massless dofs when present), applies the
// frequency cutoff and builds the reduced model. Returns the basis if requested.
ReducedModel build_rom(const AssembledModel& model, double f_cut_hz,
                       ModalBasis* basis_out = nullptr,
                       std::vector<int>* retained_out = nullptr);

// Text export: boundary map, retained frequencies and K~ in the symmetric
// triplet format. Imported models can be marched but not expanded (no R).
void export_rom(const ReducedModel& rom, const std::string& path);
ReducedModel import_rom(const std::string& path);

}  // namespace mbrom

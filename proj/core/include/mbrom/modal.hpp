#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mbrom/model.hpp"

namespace mbrom {

/// Free-interface normal modes, mass-normalized, frequencies ascending.
struct ModalBasis {
    Eigen::VectorXd omega;   // rad/s
    Eigen::MatrixXd shapes;  // n x n_modes
    int rigid_count = 0;
    double omega_tol = 0.0;  // classification threshold used for rigid modes

    int n_modes() const { return static_cast<int>(omega.size()); }
};

enum class MasslessDofPolicy {
    reject,    // throw on any zero-mass dof (default, matches the raw eigenproblem contract)
    condense,  // statically condense zero-mass dofs, solve the reduced problem, lift modes back
};

ModalBasis solve_modes(const AssembledModel& model,
                       MasslessDofPolicy policy = MasslessDofPolicy::reject);

// All modes with omega/2pi <= f_cut_hz, always including rigid modes.
// Warns when the cutoff falls below the first elastic frequency.
std::vector<int> select_retained(const ModalBasis& basis, double f_cut_hz);

}  // namespace mbrom

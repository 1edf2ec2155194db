#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "mbrom/rom.hpp"

namespace mbrom {

/// Two reduced models stacked into one boundary/inner system.
/// Boundary slots: [0, nb_a) for body a, [nb_a, nb_a+nb_b) for body b.
struct CoupledRom {
    Eigen::MatrixXd k_bb;
    Eigen::MatrixXd k_bi;
    Eigen::MatrixXd k_ii;
    Eigen::VectorXd omega;  // concatenated retained frequencies
    int nb_a = 0, nb_b = 0;
    int nm_a = 0, nm_b = 0;

    int n_b() const { return nb_a + nb_b; }
    int n_m() const { return nm_a + nm_b; }
};

CoupledRom couple(const ReducedModel& a, const ReducedModel& b);

/// Frictionless node-to-node contact: gap g = W' q_b + g0, force on the
/// boundary is W lambda. Each column of W holds a unit direction per body
/// block (+1 on the a-side dof, -1 on the b-side dof).
struct ContactProblem {
    Eigen::MatrixXd direction_map;            // W, n_b x n_pairs
    Eigen::VectorXd initial_gap;              // g0 >= 0
    std::vector<std::pair<int, int>> pairing; // (a boundary slot, b boundary slot in coupled numbering)
    double penalty_scale = 1.0;
    double complementarity_tol = 1e-10;
    int max_iterations = 500;
    double gap_tol = 1e-12;                   // m, admissible penetration

    int n_pairs() const { return static_cast<int>(direction_map.cols()); }
    void validate(int n_b_total) const;
};

ContactProblem node_to_node_contact(const CoupledRom& rom,
                                    const std::vector<std::pair<int, int>>& pairs,
                                    const Eigen::VectorXd& initial_gap);

struct StaticContactResult {
    Eigen::VectorXd q_b;
    Eigen::VectorXd lambda;
    Eigen::VectorXd gap;
    int iterations = 0;
    double residual = 0.0;       // scaled complementarity residual
    double comp_product = 0.0;   // |lambda . gap|
};

// 0 <= Aλ + b ⊥ λ >= 0 by the augmented-Lagrangian Uzawa sweep with Jacobi
// updates and penalty rho/A_jj. Throws on non-convergence. Exposed for the
// full-order reference, which solves the same complementarity sub-problem.
Eigen::VectorXd solve_lcp(const Eigen::MatrixXd& delassus, const Eigen::VectorXd& b,
                          double penalty_scale, double tol, int max_iterations,
                          int* iterations_out = nullptr, double* residual_out = nullptr);

/// Prefactored static contact solver for repeated solves along a trajectory.
class StaticContactSolver {
  public:
    StaticContactSolver(const CoupledRom& rom, const ContactProblem& problem);

    StaticContactResult solve(const Eigen::VectorXd& eta) const;

    const CoupledRom& rom() const { return rom_; }
    const ContactProblem& problem() const { return problem_; }

  private:
    CoupledRom rom_;
    ContactProblem problem_;
    Eigen::LLT<Eigen::MatrixXd> kbb_llt_;
    Eigen::MatrixXd kbb_inv_w_;  // k_bb^{-1} W
    Eigen::MatrixXd delassus_;   // W' k_bb^{-1} W
};

// Solves k_bb q_b + k_bi eta - W lambda = 0 with 0 <= g ⊥ lambda >= 0.
StaticContactResult solve_static_contact(const CoupledRom& rom, const Eigen::VectorXd& eta,
                                         const ContactProblem& problem);

}  // namespace mbrom

#include "mbrom/contact.hpp"

#include <cmath>
#include <sstream>

namespace mbrom {

CoupledRom couple(const ReducedModel& a, const ReducedModel& b) {
    CoupledRom c;
    c.nb_a = a.n_b();
    c.nb_b = b.n_b();
    c.nm_a = a.n_m();
    c.nm_b = b.n_m();
    const int nb = c.n_b(), nm = c.n_m();
    c.k_bb = Eigen::MatrixXd::Zero(nb, nb);
    c.k_bb.topLeftCorner(c.nb_a, c.nb_a) = a.k_bb;
    c.k_bb.bottomRightCorner(c.nb_b, c.nb_b) = b.k_bb;
    c.k_bi = Eigen::MatrixXd::Zero(nb, nm);
    c.k_bi.topLeftCorner(c.nb_a, c.nm_a) = a.k_bi;
    c.k_bi.bottomRightCorner(c.nb_b, c.nm_b) = b.k_bi;
    c.k_ii = Eigen::MatrixXd::Zero(nm, nm);
    c.k_ii.topLeftCorner(c.nm_a, c.nm_a) = a.k_ii;
    c.k_ii.bottomRightCorner(c.nm_b, c.nm_b) = b.k_ii;
    c.omega.resize(nm);
    c.omega << a.retained_omega, b.retained_omega;
    return c;
}

void ContactProblem::validate(int n_b_total) const {
    const int m = n_pairs();
    if (direction_map.rows() != n_b_total)
        throw std::invalid_argument("contact: direction map row count does not match the "
                                    "coupled boundary size");
    if (initial_gap.size() != m)
        throw std::invalid_argument("contact: initial gap size does not match the pair count");
    if (static_cast<int>(pairing.size()) != m)
        throw std::invalid_argument("contact: pairing size does not match the pair count");
    if (m > 0 && initial_gap.minCoeff() < 0.0)
        throw std::invalid_argument("contact: initial gaps must be non-negative");
    for (int j = 0; j < m; ++j) {
        const auto [sa, sb] = pairing[j];
        if (sa < 0 || sa >= n_b_total || sb < 0 || sb >= n_b_total || sa == sb)
            throw std::invalid_argument("contact: invalid pairing slots");
        // Unit direction per body block.
        if (std::abs(std::abs(direction_map(sa, j)) - 1.0) > 1e-14 ||
            std::abs(std::abs(direction_map(sb, j)) - 1.0) > 1e-14)
            throw std::invalid_argument("contact: per-body direction entries must be unit");
    }
    if (penalty_scale <= 0.0) throw std::invalid_argument("contact: penalty scale must be positive");
    if (complementarity_tol <= 0.0)
        throw std::invalid_argument("contact: complementarity tolerance must be positive");
    if (max_iterations < 1) throw std::invalid_argument("contact: max_iterations must be >= 1");
}

ContactProblem node_to_node_contact(const CoupledRom& rom,
                                    const std::vector<std::pair<int, int>>& pairs,
                                    const Eigen::VectorXd& initial_gap) {
    ContactProblem p;
    const int m = static_cast<int>(pairs.size());
    p.direction_map = Eigen::MatrixXd::Zero(rom.n_b(), m);
    for (int j = 0; j < m; ++j) {
        p.direction_map(pairs[j].first, j) = 1.0;    // gap opens when body a moves up
        p.direction_map(pairs[j].second, j) = -1.0;  // and body b moves down
    }
    p.initial_gap = initial_gap;
    p.pairing = pairs;
    p.validate(rom.n_b());
    return p;
}

Eigen::VectorXd solve_lcp(const Eigen::MatrixXd& delassus, const Eigen::VectorXd& b,
                          double penalty_scale, double tol, int max_iterations,
                          int* iterations_out, double* residual_out) {
    const int m = static_cast<int>(b.size());
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
    const Eigen::VectorXd penalty = penalty_scale * delassus.diagonal().cwiseInverse();

    double residual = 0.0;
    int it = 0;
    for (; it < max_iterations; ++it) {
        const Eigen::VectorXd g = delassus * lambda + b;
        // Scaled complementarity residual in force units.
        const double scale =
            std::max(lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0,
                     (penalty.cwiseProduct(g)).cwiseAbs().maxCoeff());
        residual = 0.0;
        for (int j = 0; j < m; ++j)
            residual = std::max(residual, std::abs(std::min(lambda(j), penalty(j) * g(j))));
        if (residual <= tol * std::max(scale, 1e-300)) break;
        lambda = (lambda - penalty.cwiseProduct(g)).cwiseMax(0.0);  // Jacobi sweep over pairs
    }
    if (it >= max_iterations) {
        std::ostringstream os;
        os << "contact solver did not converge within " << max_iterations
           << " iterations; final scaled complementarity residual " << residual;
        throw std::runtime_error(os.str());
    }
    if (iterations_out) *iterations_out = it;
    if (residual_out) *residual_out = residual;
    return lambda;
}

StaticContactSolver::StaticContactSolver(const CoupledRom& rom, const ContactProblem& problem)
    : rom_(rom), problem_(problem) {
    problem_.validate(rom_.n_b());
    kbb_llt_.compute(rom_.k_bb);
    if (kbb_llt_.info() != Eigen::Success)
        throw std::runtime_error("static contact: coupled boundary stiffness is not positive "
                                 "definite");
    kbb_inv_w_ = kbb_llt_.solve(problem_.direction_map);
    delassus_ = problem_.direction_map.transpose() * kbb_inv_w_;
    delassus_ = 0.5 * (delassus_ + delassus_.transpose());
}

StaticContactResult StaticContactSolver::solve(const Eigen::VectorXd& eta) const {
    if (eta.size() != rom_.n_m())
        throw std::invalid_argument("static contact: eta size mismatch");

    StaticContactResult r;
    const Eigen::VectorXd q_free = -kbb_llt_.solve(rom_.k_bi * eta);
    const int m = problem_.n_pairs();
    if (m == 0) {
        r.q_b = q_free;
        r.lambda.resize(0);
        r.gap.resize(0);
        return r;
    }

    const Eigen::VectorXd b = problem_.direction_map.transpose() * q_free + problem_.initial_gap;
    r.lambda = solve_lcp(delassus_, b, problem_.penalty_scale, problem_.complementarity_tol,
                         problem_.max_iterations, &r.iterations, &r.residual);
    r.q_b = q_free + kbb_inv_w_ * r.lambda;
    r.gap = problem_.direction_map.transpose() * r.q_b + problem_.initial_gap;
    r.comp_product = std::abs(r.lambda.dot(r.gap));

    if (r.gap.minCoeff() < -problem_.gap_tol) {
        std::ostringstream os;
        os << "static contact: penetration " << -r.gap.minCoeff() << " exceeds gap_tol "
           << problem_.gap_tol;
        throw std::logic_error(os.str());
    }
    return r;
}

StaticContactResult solve_static_contact(const CoupledRom& rom, const Eigen::VectorXd& eta,
                                         const ContactProblem& problem) {
    return StaticContactSolver(rom, problem).solve(eta);
}

}  // namespace mbrom

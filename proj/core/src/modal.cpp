#include "mbrom/modal.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "mbrom/log.hpp"

namespace mbrom {

namespace {

// M-metric modified Gram-Schmidt; column order of `vectors` is preserved
// (translation seeds before rotation seeds).
Eigen::MatrixXd m_orthonormalize(const Eigen::MatrixXd& vectors, const Eigen::MatrixXd& mass) {
    Eigen::MatrixXd q = vectors;
    for (int c = 0; c < q.cols(); ++c) {
        for (int p = 0; p < c; ++p) q.col(c) -= q.col(p) * (q.col(p).dot(mass * q.col(c)));
        const double norm2 = q.col(c).dot(mass * q.col(c));
        if (norm2 <= 0.0)
            throw std::runtime_error("rigid seed vectors are not independent in the mass metric");
        q.col(c) /= std::sqrt(norm2);
    }
    return q;
}

void normalize_signs(Eigen::MatrixXd& shapes) {
    for (int c = 0; c < shapes.cols(); ++c) {
        int imax = 0;
        shapes.col(c).cwiseAbs().maxCoeff(&imax);
        if (shapes(imax, c) < 0.0) shapes.col(c) = -shapes.col(c);
    }
}

int classify_rigid_fallback(const Eigen::VectorXd& lambda) {
    if (lambda.size() == 0) return 0;
    const double tol = 1e-10 * std::max(lambda.maxCoeff(), 1e-300);
    int r = 0;
    while (r < lambda.size() && lambda(r) < tol) ++r;
    return r;
}

}  // namespace

ModalBasis solve_modes(const AssembledModel& model, MasslessDofPolicy policy) {
    model.validate();
    const int n = model.n_dof();
    const std::vector<int> massless = model.massless_dofs();

    if (!massless.empty() && policy == MasslessDofPolicy::reject)
        throw std::runtime_error("solve_modes: mass matrix is not positive definite: " +
                                 model.dof_name(massless.front()) +
                                 " carries no mass; reduce the model before solving");

    Eigen::VectorXd lambda;
    Eigen::MatrixXd shapes;
    if (massless.empty()) {
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(model.stiffness, model.mass);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("solve_modes: generalized eigensolver failed "
                                     "(mass matrix not positive definite?)");
        lambda = es.eigenvalues();
        shapes = es.eigenvectors();
    } else {
        // Zero-mass dofs are statically condensed; the finite spectrum of the
        // singular pencil is exactly that of the condensed SPD problem.
        std::vector<char> is_z(n, 0);
        for (int z : massless) is_z[z] = 1;
        std::vector<int> mset, zset;
        for (int i = 0; i < n; ++i) (is_z[i] ? zset : mset).push_back(i);
        if (mset.empty()) throw std::runtime_error("solve_modes: model has no massive dofs");

        const Eigen::MatrixXd k_mm = model.stiffness(mset, mset);
        const Eigen::MatrixXd k_mz = model.stiffness(mset, zset);
        const Eigen::MatrixXd k_zz = model.stiffness(zset, zset);
        Eigen::LLT<Eigen::MatrixXd> kzz_llt(k_zz);
        if (kzz_llt.info() != Eigen::Success)
            throw std::runtime_error("solve_modes: stiffness block of the massless dofs is "
                                     "singular; the condensation is undefined");
        const Eigen::MatrixXd kzz_inv_kzm = kzz_llt.solve(k_mz.transpose());
        Eigen::MatrixXd k_c = k_mm - k_mz * kzz_inv_kzm;
        k_c = 0.5 * (k_c + k_c.transpose());

        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k_c,
                                                                     model.mass(mset, mset));
        if (es.info() != Eigen::Success)
            throw std::runtime_error("solve_modes: condensed eigensolver failed");
        lambda = es.eigenvalues();
        const Eigen::MatrixXd phi_m = es.eigenvectors();
        const Eigen::MatrixXd phi_z = -kzz_inv_kzm * phi_m;  // static lift

        shapes = Eigen::MatrixXd::Zero(n, lambda.size());
        for (int r = 0; r < static_cast<int>(mset.size()); ++r) shapes.row(mset[r]) = phi_m.row(r);
        for (int r = 0; r < static_cast<int>(zset.size()); ++r) shapes.row(zset[r]) = phi_z.row(r);
    }

    lambda = lambda.cwiseMax(0.0);  // clip eigensolver noise below zero

    ModalBasis basis;
    basis.shapes = shapes;

    int rigid = classify_rigid_fallback(lambda);
    if (model.rigid_seeds.cols() > 0) {
        const int r = static_cast<int>(model.rigid_seeds.cols());
        if (rigid != r) {
            std::ostringstream os;
            os << "solve_modes: eigenvalue-based rigid count " << rigid
               << " disagrees with the " << r << " analytic kernel vectors; trusting the kernel";
            log::warn(os.str());
        }
        rigid = r;
        // Replace the near-zero eigenpairs by the exact kernel, orthonormalized in
        // the M metric, then re-orthogonalize the elastic modes against it.
        const Eigen::MatrixXd phi_r = m_orthonormalize(model.rigid_seeds, model.mass);
        basis.shapes.leftCols(rigid) = phi_r;
        for (int c = rigid; c < basis.shapes.cols(); ++c) {
            const Eigen::VectorXd m_phi = model.mass * basis.shapes.col(c);
            basis.shapes.col(c) -= phi_r * (phi_r.transpose() * m_phi);
            const double norm2 = basis.shapes.col(c).dot(model.mass * basis.shapes.col(c));
            basis.shapes.col(c) /= std::sqrt(norm2);
        }
        lambda.head(rigid).setZero();
    }

    basis.omega = lambda.cwiseSqrt();
    basis.rigid_count = rigid;
    basis.omega_tol =
        (rigid < basis.omega.size()) ? 1e-4 * basis.omega(rigid) : 0.0;
    if (rigid > 0 && rigid < basis.omega.size() && basis.omega(rigid - 1) > basis.omega_tol) {
        std::ostringstream os;
        os << "solve_modes: highest rigid-mode frequency " << basis.omega(rigid - 1)
           << " rad/s exceeds the classification tolerance " << basis.omega_tol;
        log::warn(os.str());
    }
    normalize_signs(basis.shapes);
    return basis;
}

std::vector<int> select_retained(const ModalBasis& basis, double f_cut_hz) {
    if (f_cut_hz <= 0.0) throw std::invalid_argument("select_retained: f_cut must be positive");
    const double omega_cut = 2.0 * M_PI * f_cut_hz;
    std::vector<int> retained;
    for (int k = 0; k < basis.n_modes(); ++k) {
        if (k < basis.rigid_count || basis.omega(k) <= omega_cut) retained.push_back(k);
    }
    if (basis.rigid_count < basis.n_modes() && omega_cut < basis.omega(basis.rigid_count)) {
        std::ostringstream os;
        os << "select_retained: f_cut = " << f_cut_hz
           << " Hz lies below the first elastic frequency ("
           << basis.omega(basis.rigid_count) / (2.0 * M_PI)
           << " Hz); no elastodynamics representable";
        log::warn(os.str());
    }
    return retained;
}

}  // namespace mbrom

#include "mbrom/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mbrom/log.hpp"

namespace mbrom {

void MaterialSpec::validate() const {
    if (elastic_modulus <= 0.0)
        throw std::invalid_argument("material: elastic modulus must be positive");
    if (poisson_ratio < 0.0 || poisson_ratio >= 0.5)
        throw std::invalid_argument("material: Poisson ratio must be in [0, 0.5)");
    if (density <= 0.0)
        throw std::invalid_argument("material: density must be positive");
}

void BeamGeometry::validate() const {
    if (length <= 0.0 || width <= 0.0 || height <= 0.0)
        throw std::invalid_argument("beam geometry: all dimensions must be positive");
    if (length / height < 5.0) {
        std::ostringstream os;
        os << "beam slenderness length/height = " << length / height
           << " is below 5; beam theory degrades";
        log::warn(os.str());
    }
}

void SphereSpec::validate() const {
    if (mass <= 0.0) throw std::invalid_argument("sphere: mass must be positive");
    if (radius <= 0.0) throw std::invalid_argument("sphere: radius must be positive");
    if (contact_compliance <= 0.0)
        throw std::invalid_argument("sphere: contact compliance must be positive");
}

std::vector<int> AssembledModel::massless_dofs() const {
    std::vector<int> out;
    for (int i = 0; i < n_dof(); ++i) {
        if (mass.row(i).cwiseAbs().maxCoeff() == 0.0) out.push_back(i);
    }
    return out;
}

std::string AssembledModel::dof_name(int dof) const {
    std::ostringstream os;
    os << "dof " << dof;
    if (dof >= 0 && dof < static_cast<int>(dof_labels.size()))
        os << " (node " << dof_labels[dof].node << ", " << dof_labels[dof].tag << ")";
    return os.str();
}

void AssembledModel::validate() const {
    const int n = n_dof();
    if (mass.rows() != n || mass.cols() != n || stiffness.cols() != n)
        throw std::invalid_argument("model: matrix dimensions inconsistent");
    if (static_cast<int>(dof_labels.size()) != n)
        throw std::invalid_argument("model: dof label count does not match matrix size");
    if ((stiffness - stiffness.transpose()).cwiseAbs().maxCoeff() != 0.0)
        throw std::invalid_argument("model: stiffness matrix not symmetric");
    if ((mass - mass.transpose()).cwiseAbs().maxCoeff() != 0.0)
        throw std::invalid_argument("model: mass matrix not symmetric");
    std::vector<char> seen(n, 0);
    for (int b : boundary_set) {
        if (b < 0 || b >= n) throw std::invalid_argument("model: boundary dof out of range");
        seen[b] += 1;
    }
    for (int i : inner_set) {
        if (i < 0 || i >= n) throw std::invalid_argument("model: inner dof out of range");
        seen[i] += 1;
    }
    for (int i = 0; i < n; ++i) {
        if (seen[i] != 1)
            throw std::invalid_argument("model: boundary/inner sets must partition the free dofs ("
                                        + dof_name(i) + " appears " + std::to_string(seen[i])
                                        + " times)");
    }
}

namespace {

struct Element {
    int node_a, node_b;
};

// Scatters a symmetric element matrix into the global one.
void scatter(Eigen::MatrixXd& global, const Eigen::MatrixXd& elem, const std::vector<int>& dofs) {
    for (int r = 0; r < elem.rows(); ++r)
        for (int c = 0; c < elem.cols(); ++c) global(dofs[r], dofs[c]) += elem(r, c);
}

}  // namespace

AssembledModel assemble_rod(int n_elem, const MaterialSpec& material, double area, double length,
                            MassStyle mass_style) {
    material.validate();
    if (n_elem < 1) throw std::invalid_argument("assemble_rod: n_elem must be >= 1");
    if (area <= 0.0) throw std::invalid_argument("assemble_rod: area must be positive");
    if (length <= 0.0) throw std::invalid_argument("assemble_rod: length must be positive");

    const int n_nodes = n_elem + 1;
    const double le = length / n_elem;
    const double ea = material.elastic_modulus * area;
    const double rho_a = material.density * area;

    AssembledModel m;
    m.stiffness = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
    m.mass = Eigen::MatrixXd::Zero(n_nodes, n_nodes);

    Eigen::Matrix2d ke;
    ke << 1, -1, -1, 1;
    ke *= ea / le;
    Eigen::Matrix2d me;
    if (mass_style == MassStyle::consistent) {
        me << 2, 1, 1, 2;
        me *= rho_a * le / 6.0;
    } else {
        me = Eigen::Matrix2d::Zero();
        me.diagonal().setConstant(rho_a * le / 2.0);  // row-sum lumping
    }
    for (int e = 0; e < n_elem; ++e) {
        std::vector<int> dofs{e, e + 1};
        scatter(m.stiffness, ke, dofs);
        scatter(m.mass, me, dofs);
    }

    m.dof_labels.resize(n_nodes);
    m.node_x.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        m.dof_labels[i] = DofLabel{i, "u"};
        m.node_x[i] = i * le;
        m.inner_set.push_back(i);
    }
    m.rigid_seeds = Eigen::MatrixXd::Ones(n_nodes, 1);  // free-free axial translation
    m.validate();
    return m;
}

AssembledModel assemble_beam(int n_elem, const MaterialSpec& material, const BeamGeometry& geometry,
                             BeamBc bc, MassStyle mass_style) {
    material.validate();
    geometry.validate();
    if (n_elem < 2) throw std::invalid_argument("assemble_beam: n_elem must be >= 2");

    const int n_nodes = n_elem + 1;
    const double le = geometry.length / n_elem;
    const double ei = material.elastic_modulus * geometry.second_moment();
    const double rho_a = material.density * geometry.area();
    const int n_full = 2 * n_nodes;  // (w, rot) per node

    Eigen::MatrixXd k_full = Eigen::MatrixXd::Zero(n_full, n_full);
    Eigen::MatrixXd m_full = Eigen::MatrixXd::Zero(n_full, n_full);

    Eigen::Matrix4d ke;
    const double l2 = le * le;
    ke << 12, 6 * le, -12, 6 * le,
        6 * le, 4 * l2, -6 * le, 2 * l2,
        -12, -6 * le, 12, -6 * le,
        6 * le, 2 * l2, -6 * le, 4 * l2;
    ke *= ei / (le * le * le);

    Eigen::Matrix4d me;
    me << 156, 22 * le, 54, -13 * le,
        22 * le, 4 * l2, 13 * le, -3 * l2,
        54, 13 * le, 156, -22 * le,
        -13 * le, -3 * l2, -22 * le, 4 * l2;
    me *= rho_a * le / 420.0;
    if (mass_style == MassStyle::lumped) {
        // Row-sum lumping within like-dof blocks; preserves total translational mass.
        Eigen::Matrix4d ml = Eigen::Matrix4d::Zero();
        ml(0, 0) = ml(2, 2) = rho_a * le / 2.0;
        ml(1, 1) = ml(3, 3) = rho_a * le * l2 / 420.0;
        me = ml;
    }

    for (int e = 0; e < n_elem; ++e) {
        std::vector<int> dofs{2 * e, 2 * e + 1, 2 * e + 2, 2 * e + 3};
        scatter(k_full, ke, dofs);
        scatter(m_full, me, dofs);
    }

    std::vector<DofLabel> full_labels(n_full);
    for (int i = 0; i < n_nodes; ++i) {
        full_labels[2 * i] = DofLabel{i, "w"};
        full_labels[2 * i + 1] = DofLabel{i, "rot"};
    }

    std::vector<int> keep;
    AssembledModel m;
    if (bc == BeamBc::clamped_clamped) {
        for (int i = 0; i < n_full; ++i) {
            const int node = full_labels[i].node;
            if (node == 0 || node == n_nodes - 1)
                m.constrained_set.push_back(full_labels[i]);
            else
                keep.push_back(i);
        }
    } else {
        for (int i = 0; i < n_full; ++i) keep.push_back(i);
    }

    const int n = static_cast<int>(keep.size());
    m.stiffness.resize(n, n);
    m.mass.resize(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            m.stiffness(r, c) = k_full(keep[r], keep[c]);
            m.mass(r, c) = m_full(keep[r], keep[c]);
        }
    m.dof_labels.resize(n);
    for (int r = 0; r < n; ++r) m.dof_labels[r] = full_labels[keep[r]];
    m.node_x.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) m.node_x[i] = i * le;
    for (int i = 0; i < n; ++i) m.inner_set.push_back(i);

    if (bc == BeamBc::free_free) {
        // Exact kernel seeds: uniform translation, then rotation about the midpoint.
        const double xc = geometry.length / 2.0;
        m.rigid_seeds = Eigen::MatrixXd::Zero(n, 2);
        for (int r = 0; r < n; ++r) {
            const DofLabel& lab = m.dof_labels[r];
            if (lab.tag == "w") {
                m.rigid_seeds(r, 0) = 1.0;
                m.rigid_seeds(r, 1) = m.node_x[lab.node] - xc;
            } else {
                m.rigid_seeds(r, 1) = 1.0;
            }
        }
    }
    m.validate();
    return m;
}

AssembledModel assemble_sphere(const SphereSpec& spec) {
    spec.validate();
    const double k = 1.0 / spec.contact_compliance;

    AssembledModel m;
    m.stiffness.resize(2, 2);
    m.stiffness << k, -k, -k, k;
    m.mass = Eigen::MatrixXd::Zero(2, 2);
    m.mass(0, 0) = spec.mass;  // rigid-body dof; contact dof stays massless
    m.dof_labels = {DofLabel{0, "w"}, DofLabel{1, "w"}};
    m.inner_set = {0};
    m.boundary_set = {1};
    m.node_x = {0.0, 0.0};
    m.rigid_seeds = Eigen::MatrixXd::Ones(2, 1);
    m.validate();
    return m;
}

MeshGuideline recommend_element_length(const MaterialSpec& material, double f_max_hz) {
    material.validate();
    if (f_max_hz <= 0.0)
        throw std::invalid_argument("recommend_element_length: f_max must be positive");
    MeshGuideline g;
    g.wave_speed = std::sqrt(material.elastic_modulus /
                             (2.0 * (1.0 + material.poisson_ratio) * material.density));
    g.wavelength = g.wave_speed / f_max_hz;
    g.element_length = g.wavelength / 20.0;  // 20 nodes per shortest wave
    return g;
}

AssembledModel with_boundary(AssembledModel model, const std::vector<int>& boundary_dofs) {
    model.boundary_set.clear();
    model.inner_set.clear();
    std::vector<char> is_boundary(model.n_dof(), 0);
    for (int b : boundary_dofs) {
        if (b < 0 || b >= model.n_dof())
            throw std::invalid_argument("with_boundary: dof index out of range");
        if (!model.dof_labels[b].is_translation())
            throw std::invalid_argument("with_boundary: rotational dofs cannot be contact "
                                        "boundary dofs (" + model.dof_name(b) + ")");
        if (is_boundary[b]) throw std::invalid_argument("with_boundary: duplicate boundary dof");
        is_boundary[b] = 1;
    }
    for (int i = 0; i < model.n_dof(); ++i) {
        if (is_boundary[i])
            model.boundary_set.push_back(i);
        else
            model.inner_set.push_back(i);
    }
    model.validate();
    return model;
}

int nearest_node(const AssembledModel& model, double x) {
    if (model.node_x.empty())
        throw std::runtime_error("nearest_node: model carries no node coordinates");
    const double span = model.node_x.back();
    if (x < 0.0 || x > span)
        throw std::invalid_argument("nearest_node: coordinate " + std::to_string(x) +
                                    " outside [0, " + std::to_string(span) + "]");
    int best = 0;
    double best_d = std::numeric_limits<double>::max();
    for (int i = 0; i < static_cast<int>(model.node_x.size()); ++i) {
        const double d = std::abs(model.node_x[i] - x);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

int translation_dof(const AssembledModel& model, int node) {
    for (int i = 0; i < model.n_dof(); ++i) {
        if (model.dof_labels[i].node == node && model.dof_labels[i].is_translation()) return i;
    }
    return -1;
}

}  // namespace mbrom

#include "mbrom/rom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mbrom/log.hpp"
#include "mbrom/matrix_io.hpp"

namespace mbrom {

ResidualFlexibility residual_flexibility(const AssembledModel& model, const ModalBasis& basis,
                                         const std::vector<int>& retained_in) {
    model.validate();
    if (model.boundary_set.empty())
        throw std::invalid_argument("residual_flexibility: model has no boundary dofs");
    if (basis.shapes.rows() != model.n_dof())
        throw std::invalid_argument("residual_flexibility: basis does not match the model");

    std::vector<int> retained = retained_in;
    std::sort(retained.begin(), retained.end());
    if (std::adjacent_find(retained.begin(), retained.end()) != retained.end())
        throw std::invalid_argument("residual_flexibility: duplicate retained index");
    for (int k : retained)
        if (k < 0 || k >= basis.n_modes())
            throw std::invalid_argument("residual_flexibility: retained index out of range");

    std::vector<char> is_retained(basis.n_modes(), 0);
    for (int k : retained) is_retained[k] = 1;
    for (int k = 0; k < basis.rigid_count; ++k)
        if (!is_retained[k])
            throw std::invalid_argument(
                "residual_flexibility: rigid mode " + std::to_string(k) +
                " not retained; the flexibility sum diverges for omega = 0");
    bool contiguous = true;
    for (size_t i = 0; i < retained.size(); ++i)
        if (retained[i] != static_cast<int>(i)) contiguous = false;
    if (!contiguous)
        log::warn("residual_flexibility: retained set is not contiguous from the lowest mode");

    const std::vector<int>& b = model.boundary_set;
    const std::vector<int>& in = model.inner_set;
    const int nb = static_cast<int>(b.size());
    const int ni = static_cast<int>(in.size());

    ResidualFlexibility f;
    f.bb = Eigen::MatrixXd::Zero(nb, nb);
    f.ib = Eigen::MatrixXd::Zero(ni, nb);

    // Complementary modal sum over the non-retained elastic modes.
    for (int k = 0; k < basis.n_modes(); ++k) {
        if (is_retained[k]) continue;
        const double w2 = basis.omega(k) * basis.omega(k);
        const Eigen::VectorXd phi_b = basis.shapes(b, Eigen::indexing::all).col(k);
        const Eigen::VectorXd phi_i = basis.shapes(in, Eigen::indexing::all).col(k);
        f.bb += (phi_b * phi_b.transpose()) / w2;
        f.ib += (phi_i * phi_b.transpose()) / w2;
    }

    // Massless dofs contribute their exact static flexibility K_zz^{-1}; for an
    // SPD mass matrix this term is empty and the result is the pure modal sum.
    const std::vector<int> massless = model.massless_dofs();
    if (!massless.empty()) {
        std::vector<int> slot(model.n_dof(), -1);
        for (int s = 0; s < nb; ++s) slot[b[s]] = s;
        for (int z : massless)
            if (slot[z] < 0)
                throw std::invalid_argument("residual_flexibility: massless " +
                                            model.dof_name(z) + " must be a boundary dof");
        const Eigen::MatrixXd k_zz = model.stiffness(massless, massless);
        const Eigen::MatrixXd s_zz = Eigen::LLT<Eigen::MatrixXd>(k_zz).solve(
            Eigen::MatrixXd::Identity(k_zz.rows(), k_zz.cols()));
        for (int r = 0; r < static_cast<int>(massless.size()); ++r)
            for (int c = 0; c < static_cast<int>(massless.size()); ++c)
                f.bb(slot[massless[r]], slot[massless[c]]) += s_zz(r, c);
    }

    f.bb = 0.5 * (f.bb + f.bb.transpose());
    return f;
}

Eigen::MatrixXd ReducedModel::reduced_stiffness() const {
    const int nb = n_b(), nm = n_m();
    Eigen::MatrixXd kt(nb + nm, nb + nm);
    kt.topLeftCorner(nb, nb) = k_bb;
    kt.topRightCorner(nb, nm) = k_bi;
    kt.bottomLeftCorner(nm, nb) = k_bi.transpose();
    kt.bottomRightCorner(nm, nm) = k_ii;
    return kt;
}

Eigen::MatrixXd ReducedModel::reduced_mass() const {
    const int nb = n_b(), nm = n_m();
    Eigen::MatrixXd mt = Eigen::MatrixXd::Zero(nb + nm, nb + nm);
    mt.bottomRightCorner(nm, nm).setIdentity();
    return mt;
}

Eigen::VectorXd ReducedModel::expand(const Eigen::VectorXd& q_b, const Eigen::VectorXd& eta) const {
    if (component_modes.size() == 0)
        throw std::runtime_error("expand: component modes unavailable (imported ROM)");
    if (q_b.size() != n_b() || eta.size() != n_m())
        throw std::invalid_argument("expand: dimension mismatch (expected " +
                                    std::to_string(n_b()) + " boundary + " +
                                    std::to_string(n_m()) + " modal coordinates)");
    Eigen::VectorXd gen(n_b() + n_m());
    gen << q_b, eta;
    return component_modes * gen;
}

ReducedModel build_rom(const AssembledModel& model, const ModalBasis& basis,
                       const std::vector<int>& retained_in) {
    std::vector<int> retained = retained_in;
    std::sort(retained.begin(), retained.end());

    const ResidualFlexibility f = residual_flexibility(model, basis, retained);
    const int nb = static_cast<int>(model.boundary_set.size());
    const int nm = static_cast<int>(retained.size());
    const int ni = static_cast<int>(model.inner_set.size());

    Eigen::LLT<Eigen::MatrixXd> fbb_llt(f.bb);
    if (fbb_llt.info() != Eigen::Success)
        throw std::runtime_error(
            "build_rom: residual boundary flexibility is singular; every boundary-active mode "
            "is already retained. Lower the mode cutoff (f_cut).");

    ReducedModel rom;
    rom.k_bb = fbb_llt.solve(Eigen::MatrixXd::Identity(nb, nb));
    rom.k_bb = 0.5 * (rom.k_bb + rom.k_bb.transpose());

    rom.phi_b.resize(nb, nm);
    Eigen::MatrixXd phi_i(ni, nm);
    Eigen::VectorXd omega(nm);
    for (int c = 0; c < nm; ++c) {
        rom.phi_b.col(c) = basis.shapes(model.boundary_set, Eigen::indexing::all).col(retained[c]);
        phi_i.col(c) = basis.shapes(model.inner_set, Eigen::indexing::all).col(retained[c]);
        omega(c) = basis.omega(retained[c]);
    }

    rom.k_bi = -rom.k_bb * rom.phi_b;
    rom.k_ii = omega.array().square().matrix().asDiagonal();
    rom.k_ii += rom.phi_b.transpose() * rom.k_bb * rom.phi_b;
    rom.k_ii = 0.5 * (rom.k_ii + rom.k_ii.transpose());
    rom.retained_omega = omega;
    rom.retained_rigid =
        static_cast<int>(std::count_if(retained.begin(), retained.end(),
                                       [&](int k) { return k < basis.rigid_count; }));
    rom.boundary_map = model.boundary_set;
    for (int bdof : model.boundary_set) rom.boundary_labels.push_back(model.dof_labels[bdof]);

    // R = [[I, 0], [F'_ib F'_bb^{-1}, Phi_i - F'_ib F'_bb^{-1} Phi_b]] in parent dof order.
    const Eigen::MatrixXd fib_fbb_inv = f.ib * rom.k_bb;
    rom.component_modes = Eigen::MatrixXd::Zero(model.n_dof(), nb + nm);
    for (int s = 0; s < nb; ++s) rom.component_modes(model.boundary_set[s], s) = 1.0;
    const Eigen::MatrixXd inner_modal = phi_i - fib_fbb_inv * rom.phi_b;
    for (int r = 0; r < ni; ++r) {
        rom.component_modes.row(model.inner_set[r]).head(nb) = fib_fbb_inv.row(r);
        rom.component_modes.row(model.inner_set[r]).tail(nm) = inner_modal.row(r);
    }
    return rom;
}

ReducedModel build_rom(const AssembledModel& model, double f_cut_hz, ModalBasis* basis_out,
                       std::vector<int>* retained_out) {
    const MasslessDofPolicy policy = model.massless_dofs().empty() ? MasslessDofPolicy::reject
                                                                   : MasslessDofPolicy::condense;
    ModalBasis basis = solve_modes(model, policy);
    std::vector<int> retained = select_retained(basis, f_cut_hz);
    ReducedModel rom = build_rom(model, basis, retained);
    if (basis_out) *basis_out = std::move(basis);
    if (retained_out) *retained_out = std::move(retained);
    return rom;
}

void export_rom(const ReducedModel& rom, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("export_rom: cannot write " + path);
    os << "rom " << rom.n_b() << " " << rom.n_m() << " " << rom.retained_rigid << "\n";
    for (int s = 0; s < rom.n_b(); ++s) {
        const DofLabel lab = s < static_cast<int>(rom.boundary_labels.size())
                                 ? rom.boundary_labels[s]
                                 : DofLabel{0, "w"};
        os << "boundary " << s + 1 << " " << rom.boundary_map[s] + 1 << " " << lab.node << " "
           << lab.tag << "\n";
    }
    char buf[40];
    for (int k = 0; k < rom.n_m(); ++k) {
        std::snprintf(buf, sizeof buf, "%.16e", rom.retained_omega(k));
        os << "mode " << k + 1 << " " << buf << "\n";
    }
    write_symmetric_matrix(os, rom.reduced_stiffness());
}

ReducedModel import_rom(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("import_rom: cannot read " + path);
    std::string line;
    int line_number = 0;
    int nb = -1, nm = -1, rigid = 0;
    ReducedModel rom;
    // Header block, then the stiffness triplets are handed to the matrix reader.
    while (std::getline(is, line)) {
        ++line_number;
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw.empty() || kw[0] == '#') continue;
        if (kw == "rom") {
            ls >> nb >> nm >> rigid;
            if (ls.fail() || nb <= 0 || nm < 0)
                throw ParseError("malformed rom header at line " + std::to_string(line_number),
                                 line_number);
            rom.retained_omega.resize(nm);
            rom.boundary_map.assign(nb, -1);
            rom.boundary_labels.assign(nb, DofLabel{});
            rom.retained_rigid = rigid;
        } else if (kw == "boundary") {
            int slot = 0, orig = 0, node = 0;
            std::string tag;
            ls >> slot >> orig >> node >> tag;
            if (ls.fail() || slot < 1 || slot > nb)
                throw ParseError("malformed boundary line at line " + std::to_string(line_number),
                                 line_number);
            rom.boundary_map[slot - 1] = orig - 1;
            rom.boundary_labels[slot - 1] = DofLabel{node, tag};
        } else if (kw == "mode") {
            int k = 0;
            double w = 0.0;
            ls >> k >> w;
            if (ls.fail() || k < 1 || k > nm)
                throw ParseError("malformed mode line at line " + std::to_string(line_number),
                                 line_number);
            rom.retained_omega(k - 1) = w;
        } else if (kw == "symmetric") {
            int n = 0;
            ls >> n;
            if (ls.fail() || n != nb + nm)
                throw ParseError("reduced stiffness size mismatch at line " +
                                     std::to_string(line_number),
                                 line_number);
            Eigen::MatrixXd kt = Eigen::MatrixXd::Zero(n, n);
            std::set<std::pair<int, int>> seen;
            while (std::getline(is, line)) {
                ++line_number;
                std::istringstream ts(line);
                std::string first;
                ts >> first;
                if (first.empty() || first[0] == '#') continue;
                int i = std::stoi(first);
                int j = 0;
                double v = 0.0;
                ts >> j >> v;
                if (ts.fail() || i < 1 || i > n || j < 1 || j > n || j > i)
                    throw ParseError("malformed triplet at line " + std::to_string(line_number),
                                     line_number);
                if (!seen.insert({i, j}).second)
                    throw ParseError("duplicate entry at line " + std::to_string(line_number),
                                     line_number);
                kt(i - 1, j - 1) = v;
                kt(j - 1, i - 1) = v;
            }
            rom.k_bb = kt.topLeftCorner(nb, nb);
            rom.k_bi = kt.topRightCorner(nb, nm);
            rom.k_ii = kt.bottomRightCorner(nm, nm);
            // Boundary mode rows are recoverable: Phi_b = -k_bb^{-1} k_bi.
            rom.phi_b = -Eigen::LLT<Eigen::MatrixXd>(rom.k_bb).solve(rom.k_bi);
        } else {
            throw ParseError("unknown keyword '" + kw + "' at line " + std::to_string(line_number),
                             line_number);
        }
    }
    if (nb < 0 || rom.k_bb.size() == 0)
        throw std::runtime_error("import_rom: incomplete file " + path);
    return rom;
}

}  // namespace mbrom

#include "mbrom/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace mbrom {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);  // 17 significant digits
    return buf;
}

// Strips comments/whitespace; returns false for lines to skip.
bool payload(const std::string& raw, std::string& out) {
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return false;
    const auto last = s.find_last_not_of(" \t\r");
    out = s.substr(first, last - first + 1);
    return true;
}

}  // namespace

void write_symmetric_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    os << "symmetric " << n << "\n";
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            if (m(i, j) != 0.0) os << i + 1 << " " << j + 1 << " " << fmt17(m(i, j)) << "\n";
}

Eigen::MatrixXd read_symmetric_matrix(std::istream& is, int& line_number) {
    std::string raw, line;
    int n = -1;
    Eigen::MatrixXd m;
    std::set<std::pair<int, int>> seen;
    while (std::getline(is, raw)) {
        ++line_number;
        if (!payload(raw, line)) continue;
        if (n < 0) {
            std::istringstream hs(line);
            std::string kw;
            hs >> kw >> n;
            if (hs.fail() || kw != "symmetric" || n <= 0)
                throw ParseError("malformed header '" + line + "' at line " +
                                     std::to_string(line_number),
                                 line_number);
            m = Eigen::MatrixXd::Zero(n, n);
            continue;
        }
        std::istringstream ts(line);
        int i = 0, j = 0;
        double v = 0.0;
        ts >> i >> j >> v;
        std::string rest;
        if (ts.fail() || (ts >> rest))
            throw ParseError("malformed triplet '" + line + "' at line " +
                                 std::to_string(line_number),
                             line_number);
        if (i < 1 || i > n || j < 1 || j > n)
            throw ParseError("index out of range at line " + std::to_string(line_number),
                             line_number);
        if (j > i)
            throw ParseError("upper-triangle entry (asymmetric duplicate) at line " +
                                 std::to_string(line_number),
                             line_number);
        if (!seen.insert({i, j}).second)
            throw ParseError("duplicate entry for (" + std::to_string(i) + "," +
                                 std::to_string(j) + ") at line " + std::to_string(line_number),
                             line_number);
        m(i - 1, j - 1) = v;
        if (i != j) m(j - 1, i - 1) = v;
    }
    if (n < 0) throw ParseError("missing 'symmetric <n>' header", line_number);
    return m;
}

void export_matrices(const AssembledModel& model, const std::string& base_path) {
    model.validate();
    {
        std::ofstream os(base_path + ".mass");
        if (!os) throw std::runtime_error("export_matrices: cannot write " + base_path + ".mass");
        write_symmetric_matrix(os, model.mass);
    }
    {
        std::ofstream os(base_path + ".stiff");
        if (!os) throw std::runtime_error("export_matrices: cannot write " + base_path + ".stiff");
        write_symmetric_matrix(os, model.stiffness);
    }
    {
        std::ofstream os(base_path + ".dofs");
        if (!os) throw std::runtime_error("export_matrices: cannot write " + base_path + ".dofs");
        std::vector<char> is_boundary(model.n_dof(), 0);
        for (int b : model.boundary_set) is_boundary[b] = 1;
        for (int i = 0; i < model.n_dof(); ++i) {
            os << i + 1 << " " << model.dof_labels[i].node << " " << model.dof_labels[i].tag << " "
               << (is_boundary[i] ? "boundary" : "inner") << "\n";
        }
        for (const DofLabel& lab : model.constrained_set)
            os << 0 << " " << lab.node << " " << lab.tag << " constrained\n";
    }
}

AssembledModel import_matrices(const std::string& base_path) {
    AssembledModel m;
    {
        std::ifstream is(base_path + ".mass");
        if (!is) throw std::runtime_error("import_matrices: cannot read " + base_path + ".mass");
        int line = 0;
        m.mass = read_symmetric_matrix(is, line);
    }
    {
        std::ifstream is(base_path + ".stiff");
        if (!is) throw std::runtime_error("import_matrices: cannot read " + base_path + ".stiff");
        int line = 0;
        m.stiffness = read_symmetric_matrix(is, line);
    }
    if (m.mass.rows() != m.stiffness.rows())
        throw std::runtime_error("import_matrices: mass/stiffness size mismatch");
    {
        std::ifstream is(base_path + ".dofs");
        if (!is) throw std::runtime_error("import_matrices: cannot read " + base_path + ".dofs");
        m.dof_labels.resize(m.stiffness.rows());
        std::string raw, line;
        int line_number = 0;
        int free_seen = 0;
        while (std::getline(is, raw)) {
            ++line_number;
            if (!payload(raw, line)) continue;
            std::istringstream ts(line);
            int index = 0, node = 0;
            std::string tag, cls;
            ts >> index >> node >> tag >> cls;
            if (ts.fail())
                throw ParseError("malformed dof line '" + line + "' at line " +
                                     std::to_string(line_number),
                                 line_number);
            if (cls == "constrained") {
                m.constrained_set.push_back(DofLabel{node, tag});
                continue;
            }
            if (index < 1 || index > m.n_dof())
                throw ParseError("index out of range at line " + std::to_string(line_number),
                                 line_number);
            m.dof_labels[index - 1] = DofLabel{node, tag};
            if (cls == "boundary")
                m.boundary_set.push_back(index - 1);
            else if (cls == "inner")
                m.inner_set.push_back(index - 1);
            else
                throw ParseError("unknown dof class '" + cls + "' at line " +
                                     std::to_string(line_number),
                                 line_number);
            ++free_seen;
        }
        if (free_seen != m.n_dof())
            throw std::runtime_error("import_matrices: .dofs lists " + std::to_string(free_seen) +
                                     " free dofs for a " + std::to_string(m.n_dof()) +
                                     "-dof model");
    }
    m.validate();
    return m;
}

}  // namespace mbrom

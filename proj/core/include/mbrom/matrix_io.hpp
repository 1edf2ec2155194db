#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "mbrom/model.hpp"

namespace mbrom {

struct ParseError : std::runtime_error {
    int line;
    ParseError(const std::string& message, int line_number)
        : std::runtime_error(message), line(line_number) {}
};

// Text format, one matrix per file:
//   symmetric <n>
//   i j v        (1-based, lower triangle incl. diagonal, 17 significant digits)
// Blank lines and '#' comments are ignored. Round-trips doubles bit-exactly.
void write_symmetric_matrix(std::ostream& os, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_symmetric_matrix(std::istream& is, int& line_number);

// Writes <base>.mass, <base>.stiff and <base>.dofs. The .dofs file lists
// `index node tag class` with 1-based matrix indices for free dofs and
// index 0 for eliminated supports.
void export_matrices(const AssembledModel& model, const std::string& base_path);
AssembledModel import_matrices(const std::string& base_path);

}  // namespace mbrom

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mbrom/scenario.hpp"
#include "mbrom/trajectory.hpp"

namespace mbrom {

struct BenchMethodResult {
    std::string name;
    int dofs = 0;
    long steps = 0;
    double wall_s = 0.0;
    double contact_duration_s = 0.0;
};

struct BenchReport {
    std::vector<BenchMethodResult> methods;
    double rom_setup_s = 0.0;        // modes + reduction overhead
    double speedup = 0.0;            // full-order wall / ROM wall
    double duration_disagreement = 0.0;  // relative, ROM vs full order
};

// Unreduced beam + sphere chain marched by central differences at the
// stability limit, with the per-step position-level complementarity solve.
// The sphere contact node carries a small mass (1e-3 m_sph); reference only,
// not a commercial-FEA replica.
Trajectory full_order_reference(const Scenario& scenario, double* wall_s = nullptr,
                                int* dofs = nullptr, long* steps = nullptr);

BenchReport run_bench(const Scenario& scenario);

void write_bench_report(std::ostream& os, const BenchReport& report);

}  // namespace mbrom

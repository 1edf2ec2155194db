#pragma once

#include <string>
#include <vector>

#include "mbrom/integrator.hpp"
#include "mbrom/scenario.hpp"

namespace mbrom {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// FNV-1a 64-bit, used for the run manifest checksums.
std::uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);

struct RunArtifacts {
    std::string out_dir;
    std::string run_id;
    std::vector<std::string> files;  // paths written, relative to out_dir
};

// Full pipeline: simulate, post-process and write trajectory.csv,
// modal_summary.csv, pulse_spectrum.csv, events.log and manifest.txt.
RunArtifacts run_simulate(const Scenario& scenario, const std::string& out_dir);

// Same artifact set produced from the Hertz reference model.
RunArtifacts run_oracle(const Scenario& scenario, const std::string& out_dir);

// Post-processing of an existing trajectory CSV: spectrum + events always;
// modal summaries via the free fit and Duhamel routes when a scenario is given.
RunArtifacts run_post(const std::string& trajectory_csv, const Scenario* scenario,
                      const std::string& out_dir);

// Runs scenarios concurrently (shared-nothing); thread count from MBROM_THREADS.
std::vector<RunArtifacts> run_batch(const std::vector<Scenario>& scenarios,
                                    const std::vector<std::string>& out_dirs);

}  // namespace mbrom

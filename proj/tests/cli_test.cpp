// End-to-end exercise of the installed CLI surface: every subcommand, the
// documented exit codes and the byte-identical rerun guarantee.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (ok) {
        std::printf("ok   %s\n", what.c_str());
    } else {
        std::printf("FAIL %s\n", what.c_str());
        ++failures;
    }
}

int run(const std::string& cmd) {
    const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture(const std::string& cmd) {
    const std::string tmp = (fs::temp_directory_path() / "mbrom_cli_capture.txt").string();
    std::system((cmd + " > " + tmp + " 2>&1").c_str());
    std::ifstream is(tmp);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

int main() {
    const std::string cli = MBROM_CLI_PATH;
    const fs::path work = fs::temp_directory_path() / "mbrom_cli_test";
    fs::remove_all(work);
    fs::create_directories(work);

    // A small, fast scenario for most of the checks.
    const fs::path quick_cfg = work / "quick.cfg";
    {
        std::ofstream os(quick_cfg);
        os << "beam.bc = free_free\n"
              "impact.velocity_m_s = 1.1\n"
              "beam.n_elem = 32\n"
              "integration.t_end_s = 1e-4\n"
              "bench.n_elem = 24\n"
              "bench.t_end_s = 6e-5\n";
    }

    expect(run(cli + " --print-defaults") == 0, "--print-defaults exits 0");
    expect(capture(cli + " --print-defaults").find("beam.length_m") != std::string::npos,
           "--print-defaults lists the beam keys");
    expect(run(cli + " --version") == 0, "--version exits 0");
    expect(run(cli) == 0, "bare invocation prints help");

    expect(run(cli + " modes --config " + quick_cfg.string()) == 0, "modes runs");
    expect(capture(cli + " modes --config " + quick_cfg.string()).find("rigid") !=
               std::string::npos,
           "modes reports the rigid count");
    const fs::path modes_dir = work / "modes";
    expect(run(cli + " modes --config " + quick_cfg.string() + " --out " +
               modes_dir.string()) == 0,
           "modes writes csv outputs");
    expect(fs::exists(modes_dir / "modes.csv") && fs::exists(modes_dir / "frf.csv"),
           "modes emits modes.csv and frf.csv");

    const fs::path rom_dir = work / "rom";
    expect(run(cli + " rom --config " + quick_cfg.string() + " --out " + rom_dir.string()) == 0,
           "rom runs");
    expect(fs::exists(rom_dir / "beam.rom") && fs::exists(rom_dir / "sphere.rom") &&
               fs::exists(rom_dir / "beam.stiff"),
           "rom writes the reduced models and the matrix files");

    const fs::path sim_a = work / "sim_a";
    const fs::path sim_b = work / "sim_b";
    expect(run(cli + " simulate --config " + quick_cfg.string() + " --out " + sim_a.string()) ==
               0,
           "simulate runs");
    expect(run(cli + " simulate --config " + quick_cfg.string() + " --out " + sim_b.string()) ==
               0,
           "simulate reruns");
    bool identical = true;
    for (const char* name :
         {"trajectory.csv", "modal_summary.csv", "pulse_spectrum.csv", "events.log",
          "manifest.txt"})
        identical = identical && slurp(sim_a / name) == slurp(sim_b / name);
    expect(identical, "reruns are byte-identical");

    const fs::path oracle_dir = work / "oracle";
    expect(run(cli + " oracle --config " + quick_cfg.string() + " --out " +
               oracle_dir.string()) == 0,
           "oracle runs");

    const fs::path post_dir = work / "post";
    expect(run(cli + " post --traj " + (sim_a / "trajectory.csv").string() + " --out " +
               post_dir.string()) == 0,
           "post runs without a config");
    const fs::path post_modal = work / "post_modal";
    expect(run(cli + " post --traj " + (sim_a / "trajectory.csv").string() + " --config " +
               quick_cfg.string() + " --out " + post_modal.string()) == 0,
           "post runs with a config");
    expect(fs::exists(post_modal / "modal_routes.csv"), "post emits the modal routes");

    expect(run(cli + " bench --config " + quick_cfg.string()) == 0, "bench runs");
    expect(capture(cli + " bench --config " + quick_cfg.string()).find("speedup") !=
               std::string::npos,
           "bench prints the speedup");

    // Batch mode: two configs, per-config output directories.
    const fs::path second_cfg = work / "second.cfg";
    {
        std::ofstream os(second_cfg);
        os << "beam.bc = clamped_clamped\n"
              "impact.point = P2\n"
              "impact.velocity_m_s = 0.769\n"
              "beam.n_elem = 32\n"
              "rom.f_cut_hz = 40.8e3\n"
              "integration.t_end_s = 1e-4\n"
              "probes.fractions = 0.75, 0.5\n";
    }
    const fs::path batch_dir = work / "batch";
    expect(run(cli + " simulate --config " + quick_cfg.string() + " --config " +
               second_cfg.string() + " --out " + batch_dir.string()) == 0,
           "batch simulate runs");
    expect(fs::exists(batch_dir / "quick" / "trajectory.csv") &&
               fs::exists(batch_dir / "second" / "trajectory.csv"),
           "batch writes one directory per config");

    // Exit codes.
    const fs::path bad_cfg = work / "bad.cfg";
    {
        std::ofstream os(bad_cfg);
        os << "beam.bc = free_free\nimpact.velocity_m_s = 1.1\nintegration.dt_s = -1\n";
    }
    expect(run(cli + " simulate --config " + bad_cfg.string() + " --out " +
               (work / "x").string()) == 2,
           "config validation failure exits 2");

    const fs::path typo_cfg = work / "typo.cfg";
    {
        std::ofstream os(typo_cfg);
        os << "beam.bc = free_free\nimpact.velocity_m_s = 1.1\nbeam.n_elems = 40\n";
    }
    expect(run(cli + " simulate --config " + typo_cfg.string() + " --out " +
               (work / "y").string()) == 2,
           "unknown key exits 2 under strict parsing");
    expect(run(cli + " --lenient simulate --config " + typo_cfg.string() + " --out " +
               (work / "y").string()) == 0,
           "unknown key passes under --lenient");

    expect(run(cli + " post --traj /nonexistent.csv --out " + (work / "z").string()) == 4,
           "missing trajectory exits 4");

    const fs::path blocker = work / "blocker";
    std::ofstream(blocker).put('x');
    expect(run(cli + " simulate --config " + quick_cfg.string() + " --out " +
               (blocker / "sub").string()) == 4,
           "unwritable output directory exits 4");

    std::printf("%s\n", failures == 0 ? "ALL CLI CHECKS PASSED" : "CLI CHECKS FAILED");
    return failures;
}

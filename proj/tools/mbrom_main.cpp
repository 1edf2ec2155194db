#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mbrom/bench.hpp"
#include "mbrom/hertz.hpp"
#include "mbrom/matrix_io.hpp"
#include "mbrom/post.hpp"
#include "mbrom/rom.hpp"
#include "mbrom/run.hpp"
#include "mbrom/scenario.hpp"
#include "mbrom/version.hpp"

namespace {

// Exit codes: 0 ok, 2 configuration/validation, 3 numerical failure, 4 I/O.
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

mbrom::Strictness strictness_flag(bool lenient) {
    return lenient ? mbrom::Strictness::lenient : mbrom::Strictness::strict;
}

std::string out_dir_for(const std::string& root, const std::string& config_path, bool batch) {
    if (!batch) return root;
    return (std::filesystem::path(root) / std::filesystem::path(config_path).stem()).string();
}

int cmd_modes(const mbrom::Scenario& scenario, const std::string& out_dir) {
    const mbrom::ImpactSetup setup = mbrom::prepare(scenario);
    const mbrom::ModalBasis& basis = setup.beam_basis;
    std::printf("beam modes (%d total, %d rigid), impact node %d at x = %.6g m\n",
                basis.n_modes(), basis.rigid_count, setup.impact_node, setup.impact_x);
    std::printf("%6s %14s %14s %10s\n", "mode", "f_hz", "omega_rad_s", "retained");
    const std::size_t retained = setup.beam_retained.size();
    for (int k = 0; k < basis.n_modes(); ++k) {
        std::printf("%6d %14.6g %14.6g %10s\n", k + 1, basis.omega(k) / (2 * M_PI),
                    basis.omega(k), k < static_cast<int>(retained) ? "yes" : "no");
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream os(std::filesystem::path(out_dir) / "modes.csv");
        os << "mode,f_hz,omega_rad_s,phi_impact,retained\n";
        for (int k = 0; k < basis.n_modes(); ++k) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%d\n", k + 1,
                          basis.omega(k) / (2 * M_PI), basis.omega(k),
                          basis.shapes(setup.impact_dof, k),
                          k < static_cast<int>(retained) ? 1 : 0);
            os << buf;
        }

        // Model FRF between P2's mirror point (drive) and P2 (response),
        // uniform modal damping from frf.damping_ratio, 10 Hz to 40 kHz.
        const double length = scenario.geometry.length;
        const double x_p2 = scenario.point_fractions.at("P2") * length;
        const int drive = mbrom::translation_dof(
            setup.beam_model, mbrom::nearest_node(setup.beam_model, length - x_p2));
        const int resp = mbrom::translation_dof(
            setup.beam_model, mbrom::nearest_node(setup.beam_model, x_p2));
        const int nf = 4000;
        Eigen::VectorXd freq(nf);
        for (int i = 0; i < nf; ++i) freq(i) = 10.0 * (i + 1);
        const mbrom::FrfEstimate frf = mbrom::frf_model(
            basis, Eigen::VectorXd::Constant(basis.n_modes(), scenario.frf_damping_ratio),
            drive, resp, freq);
        std::ofstream fos(std::filesystem::path(out_dir) / "frf.csv");
        mbrom::write_frf_csv(fos, frf);
        std::printf("wrote %s/modes.csv and %s/frf.csv\n", out_dir.c_str(), out_dir.c_str());
    }
    return 0;
}

int cmd_rom(const mbrom::Scenario& scenario, const std::string& out_dir) {
    const mbrom::ImpactSetup setup = mbrom::prepare(scenario);
    std::filesystem::create_directories(out_dir);
    const auto beam_path = std::filesystem::path(out_dir) / "beam.rom";
    const auto sphere_path = std::filesystem::path(out_dir) / "sphere.rom";
    mbrom::export_rom(setup.beam_rom, beam_path.string());
    mbrom::export_rom(setup.sphere_rom, sphere_path.string());
    mbrom::export_matrices(setup.beam_model,
                           (std::filesystem::path(out_dir) / "beam").string());
    std::printf("beam rom: %d boundary + %d modes (%d rigid), sphere rom: %d + %d\n",
                setup.beam_rom.n_b(), setup.beam_rom.n_m(), setup.beam_rom.retained_rigid,
                setup.sphere_rom.n_b(), setup.sphere_rom.n_m());
    std::printf("wrote %s, %s and beam.{mass,stiff,dofs}\n", beam_path.c_str(),
                sphere_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mbrom: massless-boundary impact simulation for a sphere striking a beam"};
    app.set_version_flag("--version", mbrom::version);

    bool lenient = false;
    bool print_defaults_flag = false;
    app.add_flag("--lenient,!--strict", lenient,
                 "warn about unknown config keys instead of failing");
    app.add_flag("--print-defaults", print_defaults_flag,
                 "print the default scenario configuration and exit");

    std::vector<std::string> configs;
    std::string out_dir = "out";
    std::string traj_path;

    auto* modes = app.add_subcommand("modes", "solve the beam modes for a scenario");
    modes->add_option("--config", configs, "scenario file")->required()->expected(1);
    modes->add_option("--out", out_dir, "output directory for modes.csv (optional)");

    auto* rom = app.add_subcommand("rom", "build and export the reduced models");
    rom->add_option("--config", configs, "scenario file")->required()->expected(1);
    rom->add_option("--out", out_dir, "output directory")->required();

    auto* simulate = app.add_subcommand("simulate", "run the massless-boundary impact simulation");
    simulate->add_option("--config", configs, "scenario file (repeat to batch)")->required();
    simulate->add_option("--out", out_dir, "output directory (per-config subdirs when batching)");

    auto* oracle = app.add_subcommand("oracle", "run the Hertz + modal-truncation reference");
    oracle->add_option("--config", configs, "scenario file")->required()->expected(1);
    oracle->add_option("--out", out_dir, "output directory");

    auto* post = app.add_subcommand("post", "post-process a trajectory CSV");
    post->add_option("--traj", traj_path, "trajectory CSV")->required();
    post->add_option("--config", configs, "scenario file for the modal routes (optional)");
    post->add_option("--out", out_dir, "output directory");

    auto* bench = app.add_subcommand("bench", "compare ROM against the full-order reference");
    bench->add_option("--config", configs, "scenario file")->required()->expected(1);

    app.require_subcommand(0, 1);

    CLI11_PARSE(app, argc, argv);

    if (print_defaults_flag) {
        mbrom::print_defaults(std::cout);
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return 0;
    }

    try {
        std::vector<mbrom::Scenario> scenarios;
        for (const std::string& path : configs)
            scenarios.push_back(mbrom::parse_scenario(path, strictness_flag(lenient)));

        if (modes->parsed()) {
            return cmd_modes(scenarios.at(0), modes->count("--out") ? out_dir : "");
        }
        if (rom->parsed()) {
            return cmd_rom(scenarios.at(0), out_dir);
        }
        if (simulate->parsed()) {
            if (scenarios.size() == 1) {
                const mbrom::RunArtifacts a = mbrom::run_simulate(scenarios[0], out_dir);
                std::printf("run %s: %zu files in %s\n", a.run_id.c_str(), a.files.size(),
                            a.out_dir.c_str());
            } else {
                std::vector<std::string> dirs;
                for (const std::string& c : configs) dirs.push_back(out_dir_for(out_dir, c, true));
                const auto all = mbrom::run_batch(scenarios, dirs);
                for (const auto& a : all)
                    std::printf("run %s: %zu files in %s\n", a.run_id.c_str(), a.files.size(),
                                a.out_dir.c_str());
            }
            return 0;
        }
        if (oracle->parsed()) {
            const mbrom::RunArtifacts a = mbrom::run_oracle(scenarios.at(0), out_dir);
            std::printf("oracle %s: %zu files in %s\n", a.run_id.c_str(), a.files.size(),
                        a.out_dir.c_str());
            return 0;
        }
        if (post->parsed()) {
            const mbrom::Scenario* sc = scenarios.empty() ? nullptr : &scenarios[0];
            const mbrom::RunArtifacts a = mbrom::run_post(traj_path, sc, out_dir);
            std::printf("post %s: %zu files in %s\n", a.run_id.c_str(), a.files.size(),
                        a.out_dir.c_str());
            return 0;
        }
        if (bench->parsed()) {
            const mbrom::BenchReport report = mbrom::run_bench(scenarios.at(0));
            mbrom::write_bench_report(std::cout, report);
            return 0;
        }
    } catch (const mbrom::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const mbrom::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const mbrom::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}

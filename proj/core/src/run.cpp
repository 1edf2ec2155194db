#include "mbrom/run.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "mbrom/hertz.hpp"
#include "mbrom/post.hpp"
#include "mbrom/version.hpp"

namespace mbrom {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& data) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

namespace {

std::string fmtg(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory " + dir + (ec ? ": " + ec.message() : ""));
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path);
    os << content;
    if (!os) throw IoError("write failed for " + path);
}

struct ArtifactWriter {
    std::string out_dir;
    std::string run_id;
    std::vector<std::pair<std::string, std::string>> checksums;

    void add(const std::string& name, const std::string& content) {
        write_file((fs::path(out_dir) / name).string(), content);
        checksums.emplace_back(name, fnv1a64_hex(content));
    }
};

void write_manifest(ArtifactWriter& w, const Scenario& scenario,
                    const std::vector<std::string>& derived) {
    std::ostringstream os;
    os << "mbrom run manifest\n";
    os << "version = " << version << "\n";
    os << "run_id = " << w.run_id << "\n";
    os << "\n[config]\n" << print_scenario(scenario);
    os << "\n[derived]\n";
    for (const std::string& d : derived) os << d << "\n";
    os << "assumption: point fractions points.p1..p4 are configuration defaults, "
          "not measured coordinates\n";
    os << "\n[files]\n";
    for (const auto& [name, sum] : w.checksums) os << name << " fnv64=" << sum << "\n";
    write_file((fs::path(w.out_dir) / "manifest.txt").string(), os.str());
}

std::string trajectory_text(const Trajectory& traj, const std::string& run_id) {
    std::ostringstream os;
    write_trajectory_csv(os, traj, run_id);
    return os.str();
}

RunArtifacts write_run_outputs(const SimulationRun& run, const Trajectory& traj,
                               const std::string& out_dir, const std::string& flavor) {
    const Scenario& sc = run.setup.scenario;
    ensure_dir(out_dir);
    ArtifactWriter w;
    w.out_dir = out_dir;
    w.run_id = fnv1a64_hex(flavor + "\n" + print_scenario(sc));

    w.add("trajectory.csv", trajectory_text(traj, w.run_id));

    {
        std::ostringstream os;
        write_modal_summary_csv(os, summarize_modes(run), w.run_id);
        w.add("modal_summary.csv", os.str());
    }
    {
        std::ostringstream os;
        write_spectrum_csv(os, pulse_spectrum(traj.f_c, traj.dt), w.run_id);
        w.add("pulse_spectrum.csv", os.str());
    }
    {
        std::ostringstream os;
        write_event_log(os, detect_events(traj));
        w.add("events.log", os.str());
    }
    if (sc.downsample_102k4) {
        Eigen::VectorXd t_ds;
        const Eigen::VectorXd v_ds = resample_linear(traj.v_sph, traj.dt, 102.4e3, &t_ds);
        const Eigen::VectorXd f_rec = force_from_sphere_velocity(v_ds, sc.sphere_mass,
                                                                 1.0 / 102.4e3);
        std::ostringstream os;
        os << "# run_id=" << w.run_id << "\n";
        os << "t,v_sph,f_c_recovered\n";
        for (int i = 0; i < t_ds.size(); ++i)
            os << fmtg(t_ds(i)) << "," << fmtg(v_ds(i)) << "," << fmtg(f_rec(i)) << "\n";
        w.add("sphere_102k4.csv", os.str());
    }

    std::vector<std::string> derived;
    derived.push_back("method = " + flavor);
    derived.push_back("impact_node = " + std::to_string(run.setup.impact_node));
    derived.push_back("impact_x_m = " + fmtg(run.setup.impact_x));
    derived.push_back("sphere_compliance_m_per_n = " + fmtg(run.setup.sphere_compliance));
    derived.push_back("hertz_stiffness_n_per_m32 = " + fmtg(run.setup.hertz_stiffness));
    derived.push_back("hertz_peak_force_n = " + fmtg(run.setup.hertz_peak_force));
    derived.push_back("beam_modes_retained = " + std::to_string(run.setup.beam_retained.size()) +
                      " (" + std::to_string(run.setup.beam_rom.retained_rigid) + " rigid)");
    write_manifest(w, sc, derived);

    RunArtifacts a;
    a.out_dir = out_dir;
    a.run_id = w.run_id;
    for (const auto& [name, sum] : w.checksums) a.files.push_back(name);
    a.files.push_back("manifest.txt");
    return a;
}

}  // namespace

RunArtifacts run_simulate(const Scenario& scenario, const std::string& out_dir) {
    const SimulationRun run = simulate(scenario);
    return write_run_outputs(run, run.trajectory, out_dir, "massless-boundary-rom");
}

RunArtifacts run_oracle(const Scenario& scenario, const std::string& out_dir) {
    const ImpactSetup setup = prepare(scenario);
    const Trajectory traj = hertz_oracle(setup);
    SimulationRun run;
    run.setup = setup;
    run.trajectory = traj;
    run.events = detect_events(traj);
    return write_run_outputs(run, traj, out_dir, "hertz-modal-oracle");
}

RunArtifacts run_post(const std::string& trajectory_csv, const Scenario* scenario,
                      const std::string& out_dir) {
    std::ifstream is(trajectory_csv);
    if (!is) throw IoError("cannot read trajectory " + trajectory_csv);
    const Trajectory traj = read_trajectory_csv(is);
    if (traj.n_samples() < 3) throw std::runtime_error("trajectory too short to post-process");

    ensure_dir(out_dir);
    ArtifactWriter w;
    w.out_dir = out_dir;
    w.run_id = fnv1a64_hex("post\n" + trajectory_csv);

    {
        std::ostringstream os;
        write_spectrum_csv(os, pulse_spectrum(traj.f_c, traj.dt), w.run_id);
        w.add("pulse_spectrum.csv", os.str());
    }
    const EventLog events = detect_events(traj);
    {
        std::ostringstream os;
        write_event_log(os, events);
        w.add("events.log", os.str());
    }

    if (scenario) {
        // Rebuild the modal data and evaluate the measurement-style routes:
        // Duhamel from the force pulse, free fit from the first probe velocity.
        const ImpactSetup setup = prepare(*scenario);
        const int n_modes = static_cast<int>(setup.beam_retained.size());
        Eigen::VectorXd omega(n_modes), phi_imp(n_modes);
        for (int k = 0; k < n_modes; ++k) {
            omega(k) = setup.beam_basis.omega(setup.beam_retained[k]);
            phi_imp(k) = setup.beam_basis.shapes(setup.impact_dof, setup.beam_retained[k]);
        }

        std::ostringstream os;
        os << "# run_id=" << w.run_id << "\n";
        os << "mode,label,freq_hz,E_duhamel_J,E_freefit_J\n";
        if (events.any_contact() && events.windows.back().closed()) {
            const int ns = static_cast<int>(std::lround(events.t_start() / traj.dt));
            const int ne = static_cast<int>(std::lround(events.t_end() / traj.dt));
            const Eigen::VectorXd window = traj.f_c.segment(ns, ne - ns + 1);

            FreeFitResult fit;
            std::vector<int> fit_slot(n_modes, -1);
            const int tail = traj.n_samples() - ne;
            if (traj.v_probes.cols() > 0 && !setup.probe_nodes.empty() && tail > 16) {
                const int probe_dof = translation_dof(setup.beam_model, setup.probe_nodes[0]);
                // Modes with less than a quarter period in the window make the
                // fit ill-posed; leave them to the Duhamel route.
                const double min_omega = 2.0 * M_PI * 0.25 / (tail * traj.dt);
                std::vector<int> fitted;
                for (int k = 0; k < n_modes; ++k)
                    if (omega(k) >= min_omega) {
                        fit_slot[k] = static_cast<int>(fitted.size());
                        fitted.push_back(k);
                    }
                Eigen::VectorXd om_e(fitted.size()), phi_e(fitted.size());
                for (size_t j = 0; j < fitted.size(); ++j) {
                    om_e(j) = omega(fitted[j]);
                    phi_e(j) =
                        setup.beam_basis.shapes(probe_dof, setup.beam_retained[fitted[j]]);
                }
                if (!fitted.empty()) {
                    const Eigen::VectorXd v_tail = traj.v_probes.col(0).segment(ne, tail);
                    Eigen::VectorXd t_tail(tail);
                    for (int i = 0; i < tail; ++i) t_tail(i) = i * traj.dt;
                    fit = fit_modal_free(v_tail, t_tail, om_e, phi_e);
                } else {
                    std::fill(fit_slot.begin(), fit_slot.end(), -1);
                }
            }

            int elastic_counter = 0;
            for (int k = 0; k < n_modes; ++k) {
                if (omega(k) <= 0.0) continue;
                ++elastic_counter;
                // Force on the beam is the reaction -f_c.
                const DuhamelResult d =
                    duhamel_response(-window, traj.dt, omega(k), phi_imp(k));
                const double e_duh = modal_energy(d.eta, d.eta_dot, omega(k));
                double e_fit = std::nan("");
                if (fit_slot[k] >= 0) {
                    const int j = fit_slot[k];
                    e_fit = 0.5 * omega(k) * omega(k) *
                            (fit.eta_cos(j) * fit.eta_cos(j) + fit.eta_sin(j) * fit.eta_sin(j));
                }
                os << elastic_counter << "," << elastic_counter << "F," << fmtg(omega(k) / (2 * M_PI))
                   << "," << fmtg(e_duh) << "," << fmtg(e_fit) << "\n";
            }
        }
        w.add("modal_routes.csv", os.str());
        write_manifest(w, *scenario, {"method = post"});
    } else {
        std::ostringstream os;
        os << "mbrom post manifest\nversion = " << version << "\nrun_id = " << w.run_id
           << "\ninput = " << trajectory_csv << "\n\n[files]\n";
        for (const auto& [name, sum] : w.checksums) os << name << " fnv64=" << sum << "\n";
        write_file((fs::path(out_dir) / "manifest.txt").string(), os.str());
    }

    RunArtifacts a;
    a.out_dir = out_dir;
    a.run_id = w.run_id;
    for (const auto& [name, sum] : w.checksums) a.files.push_back(name);
    a.files.push_back("manifest.txt");
    return a;
}

std::vector<RunArtifacts> run_batch(const std::vector<Scenario>& scenarios,
                                    const std::vector<std::string>& out_dirs) {
    if (scenarios.size() != out_dirs.size())
        throw std::invalid_argument("run_batch: one output directory per scenario required");
    unsigned threads = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("MBROM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) threads = static_cast<unsigned>(v);
    }
    threads = std::max(1u, std::min<unsigned>(threads, scenarios.size()));

    std::vector<RunArtifacts> results(scenarios.size());
    std::atomic<size_t> next{0};
    std::vector<std::future<void>> workers;
    std::mutex error_mutex;
    std::exception_ptr first_error;
    for (unsigned w = 0; w < threads; ++w) {
        workers.push_back(std::async(std::launch::async, [&]() {
            for (size_t i = next.fetch_add(1); i < scenarios.size(); i = next.fetch_add(1)) {
                try {
                    results[i] = run_simulate(scenarios[i], out_dirs[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        }));
    }
    for (auto& w : workers) w.get();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

}  // namespace mbrom

#include "mbrom/post.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "mbrom/log.hpp"

namespace mbrom {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int sample_at(const Trajectory& traj, double time) {
    const int n = static_cast<int>(std::lround((time - traj.t(0)) / traj.dt));
    return std::clamp(n, 0, traj.n_samples() - 1);
}

}  // namespace

double modal_energy(double eta, double eta_dot, double omega) {
    return 0.5 * (eta_dot * eta_dot + omega * omega * eta * eta);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> project_to_modal(const Eigen::VectorXd& q,
                                                             const Eigen::VectorXd& q_dot,
                                                             const ModalBasis& basis,
                                                             const Eigen::MatrixXd& mass) {
    if (q.size() != basis.shapes.rows() || q_dot.size() != basis.shapes.rows() ||
        mass.rows() != basis.shapes.rows())
        throw std::invalid_argument("project_to_modal: dimension mismatch");
    return {basis.shapes.transpose() * (mass * q), basis.shapes.transpose() * (mass * q_dot)};
}

Eigen::VectorXd modal_restitution(const Trajectory& traj, const EventLog& events,
                                  const Eigen::VectorXd& phi_impact) {
    if (!events.any_contact())
        throw std::runtime_error("modal_restitution: no contact window detected");
    if (phi_impact.size() != traj.n_beam_modes())
        throw std::invalid_argument("modal_restitution: phi size does not match the beam modes");
    const int ns = sample_at(traj, events.t_start());
    const int ne = sample_at(traj, events.t_end());
    const double v_start = traj.v_sph(ns);
    if (v_start == 0.0) throw std::runtime_error("modal_restitution: zero approach velocity");
    const double v_end = traj.v_sph(ne);
    const Eigen::VectorXd eta_dot_e = traj.beam_eta_dot_at(ne);
    Eigen::VectorXd r(traj.n_beam_modes());
    for (int k = 0; k < r.size(); ++k)
        r(k) = -(v_end - phi_impact(k) * eta_dot_e(k)) / v_start;
    return r;
}

Eigen::VectorXd force_from_sphere_velocity(const Eigen::VectorXd& v_sph, double sphere_mass,
                                           double dt) {
    const int n = static_cast<int>(v_sph.size());
    if (n < 3) throw std::invalid_argument("force_from_sphere_velocity: need at least 3 samples");
    Eigen::VectorXd f(n);
    for (int i = 1; i + 1 < n; ++i) f(i) = sphere_mass * (v_sph(i + 1) - v_sph(i - 1)) / (2.0 * dt);
    f(0) = sphere_mass * (v_sph(1) - v_sph(0)) / dt;
    f(n - 1) = sphere_mass * (v_sph(n - 1) - v_sph(n - 2)) / dt;
    return f;
}

Eigen::VectorXd resample_linear(const Eigen::VectorXd& signal, double dt_in, double rate_out_hz,
                                Eigen::VectorXd* t_out) {
    if (dt_in <= 0.0 || rate_out_hz <= 0.0)
        throw std::invalid_argument("resample_linear: rates must be positive");
    const double dt_out = 1.0 / rate_out_hz;
    const double span = (signal.size() - 1) * dt_in;
    const int n_out = static_cast<int>(std::floor(span / dt_out)) + 1;
    Eigen::VectorXd out(n_out);
    if (t_out) t_out->resize(n_out);
    for (int i = 0; i < n_out; ++i) {
        const double t = i * dt_out;
        const int j = std::min(static_cast<int>(t / dt_in), static_cast<int>(signal.size()) - 2);
        const double a = (t - j * dt_in) / dt_in;
        out(i) = (1.0 - a) * signal(j) + a * signal(j + 1);
        if (t_out) (*t_out)(i) = t;
    }
    return out;
}

DuhamelResult duhamel_response(const Eigen::VectorXd& force_window, double dt, double omega,
                               double phi_p) {
    const int n = static_cast<int>(force_window.size());
    if (n < 2) throw std::invalid_argument("duhamel_response: empty contact window");
    if (omega <= 0.0) throw std::invalid_argument("duhamel_response: omega must be positive");
    const double t_end = (n - 1) * dt;
    double int_sin = 0.0, int_cos = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;  // trapezoidal rule
        const double arg = omega * (t_end - i * dt);
        int_sin += w * force_window(i) * std::sin(arg);
        int_cos += w * force_window(i) * std::cos(arg);
    }
    DuhamelResult r;
    r.eta = phi_p / omega * int_sin * dt;
    r.eta_dot = phi_p * int_cos * dt;
    return r;
}

FreeFitResult fit_modal_free(const Eigen::VectorXd& v, const Eigen::VectorXd& t,
                             const Eigen::VectorXd& omega, const Eigen::VectorXd& phi_p) {
    const int n = static_cast<int>(v.size());
    const int m = static_cast<int>(omega.size());
    if (t.size() != n) throw std::invalid_argument("fit_modal_free: time/signal size mismatch");
    if (phi_p.size() != m) throw std::invalid_argument("fit_modal_free: omega/phi size mismatch");
    for (int k = 0; k < m; ++k) {
        if (omega(k) <= 0.0)
            throw std::invalid_argument("fit_modal_free: frequencies must be positive");
        for (int j = k + 1; j < m; ++j)
            if (omega(j) == omega(k))
                throw std::invalid_argument("fit_modal_free: duplicate frequency");
    }
    if (m > 0) {
        const double span = t(n - 1) - t(0);
        const double period0 = 2.0 * M_PI / omega.minCoeff();
        if (span < 2.0 * period0) {
            std::ostringstream os;
            os << "fit_modal_free: window " << span << " s is shorter than 2 periods of the "
               << "lowest fitted mode (" << 2.0 * period0 << " s); conditioning degrades";
            log::warn(os.str());
        }
    }

    Eigen::MatrixXd a(n, 1 + 2 * m);
    a.col(0).setOnes();
    for (int k = 0; k < m; ++k) {
        for (int i = 0; i < n; ++i) {
            a(i, 1 + 2 * k) = -omega(k) * phi_p(k) * std::sin(omega(k) * t(i));
            a(i, 2 + 2 * k) = omega(k) * phi_p(k) * std::cos(omega(k) * t(i));
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < a.cols())
        throw std::runtime_error("fit_modal_free: design matrix is rank-deficient "
                                 "(aliased or unobservable frequencies)");
    const Eigen::VectorXd x = qr.solve(v);

    FreeFitResult r;
    r.v_rigid = x(0);
    r.eta_cos.resize(m);
    r.eta_sin.resize(m);
    for (int k = 0; k < m; ++k) {
        r.eta_cos(k) = x(1 + 2 * k);
        r.eta_sin(k) = x(2 + 2 * k);
    }
    r.residual_norm = (a * x - v).norm();
    return r;
}

FrfEstimate h1_estimate(
    const std::vector<std::pair<Eigen::VectorXcd, Eigen::VectorXcd>>& realizations,
    const Eigen::VectorXd& freq) {
    if (realizations.empty()) throw std::invalid_argument("h1_estimate: no realizations");
    const int nf = static_cast<int>(freq.size());
    for (int i = 1; i < nf; ++i)
        if (freq(i) <= freq(i - 1))
            throw std::invalid_argument("h1_estimate: frequency grid must ascend");
    for (const auto& [u, f] : realizations)
        if (u.size() != nf || f.size() != nf)
            throw std::invalid_argument("h1_estimate: realization does not share the grid");

    FrfEstimate est;
    est.freq = freq;
    est.h.resize(nf);
    est.defined.assign(nf, 1);
    est.n_realizations = static_cast<int>(realizations.size());
    for (int i = 0; i < nf; ++i) {
        std::complex<double> num = 0.0;
        double den = 0.0;
        for (const auto& [u, f] : realizations) {
            num += u(i) * std::conj(f(i));
            den += std::norm(f(i));
        }
        if (den > 0.0) {
            est.h(i) = num / den;
        } else {
            est.h(i) = std::complex<double>(std::nan(""), std::nan(""));
            est.defined[i] = 0;
        }
    }
    return est;
}

Eigen::VectorXcd displacement_from_velocity_spectrum(const Eigen::VectorXcd& v,
                                                     const Eigen::VectorXd& freq) {
    if (v.size() != freq.size())
        throw std::invalid_argument("displacement spectrum: size mismatch");
    Eigen::VectorXcd u(v.size());
    for (int i = 0; i < v.size(); ++i) {
        if (freq(i) == 0.0)
            throw std::invalid_argument("displacement spectrum: the f = 0 bin must be excluded");
        u(i) = v(i) / std::complex<double>(0.0, 2.0 * M_PI * freq(i));
    }
    return u;
}

FrfEstimate frf_model(const ModalBasis& basis, const Eigen::VectorXd& damping_ratios,
                      int drive_dof, int response_dof, const Eigen::VectorXd& freq) {
    if (damping_ratios.size() != basis.n_modes())
        throw std::invalid_argument("frf_model: damping ratio count must match the basis");
    if (damping_ratios.size() && damping_ratios.minCoeff() < 0.0)
        throw std::invalid_argument("frf_model: damping ratios must be non-negative");
    FrfEstimate est;
    est.freq = freq;
    est.h.resize(freq.size());
    est.defined.assign(freq.size(), 1);
    est.n_realizations = 0;
    for (int i = 0; i < freq.size(); ++i) {
        const double w = 2.0 * M_PI * freq(i);
        std::complex<double> h = 0.0;
        for (int k = 0; k < basis.n_modes(); ++k) {
            const double wk = basis.omega(k);
            const std::complex<double> den(wk * wk - w * w, 2.0 * damping_ratios(k) * wk * w);
            h += basis.shapes(drive_dof, k) * basis.shapes(response_dof, k) / den;
        }
        est.h(i) = h;
    }
    return est;
}

Spectrum pulse_spectrum(const Eigen::VectorXd& signal, double dt) {
    const int n = static_cast<int>(signal.size());
    if (n < 1 || dt <= 0.0) throw std::invalid_argument("pulse_spectrum: bad input");
    Spectrum s;
    s.freq.resize(n);
    s.values.resize(n);
    const double two_pi_over_n = 2.0 * M_PI / n;
    for (int k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double arg = -two_pi_over_n * k * i;
            acc += signal(i) * std::complex<double>(std::cos(arg), std::sin(arg));
        }
        s.values(k) = acc / static_cast<double>(n);  // forward 1/N normalization
        s.freq(k) = k / (n * dt);
    }
    return s;
}

ModalSummary summarize_modes(const SimulationRun& run) {
    const Trajectory& traj = run.trajectory;
    const Scenario& sc = run.setup.scenario;

    ModalSummary sum;
    sum.sphere_ke_pre = 0.5 * sc.sphere_mass * sc.impact_velocity * sc.impact_velocity;

    const int ne = run.events.any_contact() && run.events.windows.back().closed()
                       ? sample_at(traj, run.events.t_end())
                       : traj.n_samples() - 1;

    sum.sphere_ke_post = 0.5 * sc.sphere_mass * traj.v_sph(ne) * traj.v_sph(ne);

    const Eigen::VectorXd eta = traj.beam_eta_at(ne);
    const Eigen::VectorXd eta_dot = traj.beam_eta_dot_at(ne);

    Eigen::VectorXd phi_impact(traj.n_beam_modes());
    for (int k = 0; k < phi_impact.size(); ++k)
        phi_impact(k) = run.setup.beam_basis.shapes(run.setup.impact_dof,
                                                    run.setup.beam_retained[k]);
    Eigen::VectorXd restitution;
    if (run.events.any_contact() && run.events.windows.back().closed())
        restitution = modal_restitution(traj, run.events, phi_impact);
    else
        restitution = Eigen::VectorXd::Constant(traj.n_beam_modes(),
                                                std::numeric_limits<double>::quiet_NaN());

    double e_modal = 0.0;
    int elastic_counter = 0;
    for (int k = 0; k < traj.n_beam_modes(); ++k) {
        const double omega = traj.beam_omega(k);
        const double e = modal_energy(eta(k), eta_dot(k), omega);
        if (k < traj.beam_rigid_count) {
            sum.beam_rigid_ke += e;  // omega = 0: purely kinetic
            continue;
        }
        ++elastic_counter;
        ModalSummary::Row row;
        row.mode = elastic_counter;
        row.label = std::to_string(elastic_counter) + "F";
        row.freq_hz = omega / (2.0 * M_PI);
        row.energy_j = e;
        row.energy_fraction = e / sum.sphere_ke_pre;
        row.restitution = restitution(k);
        sum.rows.push_back(std::move(row));
        e_modal += e;
    }
    sum.balance_error = std::abs(sum.sphere_ke_pre - sum.sphere_ke_post - sum.beam_rigid_ke -
                                 e_modal) /
                        sum.sphere_ke_pre;
    return sum;
}

void write_modal_summary_csv(std::ostream& os, const ModalSummary& summary,
                             const std::string& run_id) {
    if (!run_id.empty()) os << "# run_id=" << run_id << "\n";
    os << "mode,label,freq_hz,E_mod_J,E_frac,r_k\n";
    for (const auto& row : summary.rows)
        os << row.mode << "," << row.label << "," << fmt(row.freq_hz) << "," << fmt(row.energy_j)
           << "," << fmt(row.energy_fraction) << "," << fmt(row.restitution) << "\n";
}

void write_frf_csv(std::ostream& os, const FrfEstimate& frf, const std::string& run_id) {
    if (!run_id.empty()) os << "# run_id=" << run_id << "\n";
    os << "f_hz,re,im,mag,phase\n";
    for (int i = 0; i < frf.freq.size(); ++i) {
        const std::complex<double> h = frf.h(i);
        os << fmt(frf.freq(i)) << "," << fmt(h.real()) << "," << fmt(h.imag()) << ","
           << fmt(std::abs(h)) << "," << fmt(std::arg(h)) << "\n";
    }
}

void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum, const std::string& run_id) {
    if (!run_id.empty()) os << "# run_id=" << run_id << "\n";
    os << "f_hz,re,im,mag,phase\n";
    const int half = static_cast<int>(spectrum.freq.size()) / 2;
    for (int k = 0; k <= half; ++k) {
        const std::complex<double> x = spectrum.values(k);
        os << fmt(spectrum.freq(k)) << "," << fmt(x.real()) << "," << fmt(x.imag()) << ","
           << fmt(std::abs(x)) << "," << fmt(std::arg(x)) << "\n";
    }
}

}  // namespace mbrom

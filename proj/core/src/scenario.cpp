#include "mbrom/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "mbrom/log.hpp"

namespace mbrom {

double Scenario::impact_x() const {
    if (impact_position >= 0.0) return impact_position;
    const auto it = point_fractions.find(impact_point);
    if (it == point_fractions.end())
        throw ScenarioError("impact.point '" + impact_point + "' is not a configured point label");
    return it->second * geometry.length;
}

void Scenario::validate() const {
    beam_material.validate();
    geometry.validate();
    sphere_material.validate();
    if (n_elem < 2) throw ScenarioError("beam.n_elem must be >= 2");
    if (sphere_mass <= 0.0) throw ScenarioError("sphere.mass_kg must be > 0");
    if (sphere_radius <= 0.0) throw ScenarioError("sphere.radius_m must be > 0");
    if (compliance_rule == ComplianceRule::fixed_value && fixed_compliance <= 0.0)
        throw ScenarioError("sphere.compliance_m_per_n must be > 0 for the fixed rule");
    if (impact_velocity <= 0.0) throw ScenarioError("impact.velocity_m_s must be > 0");
    if (f_cut <= 0.0) throw ScenarioError("rom.f_cut_hz must be > 0");
    if (dt <= 0.0) throw ScenarioError("integration.dt_s must be > 0");
    if (t_end < dt) throw ScenarioError("integration.t_end_s must be >= integration.dt_s");
    if (penalty_scale <= 0.0) throw ScenarioError("contact.penalty_scale must be > 0");
    if (complementarity_tol <= 0.0) throw ScenarioError("contact.complementarity_tol must be > 0");
    if (max_iterations < 1) throw ScenarioError("contact.max_iterations must be >= 1");
    if (gap_tol <= 0.0) throw ScenarioError("contact.gap_tol_m must be > 0");
    for (const auto& [label, frac] : point_fractions)
        if (frac < 0.0 || frac > 1.0)
            throw ScenarioError("points." + label + ": fraction must lie in [0, 1]");
    const double x = impact_x();
    if (x < 0.0 || x > geometry.length)
        throw ScenarioError("impact position lies outside the beam span [0, length]");
    for (double f : probe_fractions)
        if (f < 0.0 || f > 1.0)
            throw ScenarioError("probes.fractions: probe must lie within the beam span");
    if (bench_n_elem < 2) throw ScenarioError("bench.n_elem must be >= 2");
    if (bench_t_end < dt) throw ScenarioError("bench.t_end_s must be >= integration.dt_s");
    if (frf_damping_ratio < 0.0) throw ScenarioError("frf.damping_ratio must be >= 0");
}

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

using RawConfig = std::map<std::string, RawEntry>;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << message;
    throw ScenarioError(os.str());
}

RawConfig tokenize(const std::string& text, const std::string& origin) {
    RawConfig cfg;
    std::istringstream is(text);
    std::string raw;
    int line_number = 0;
    while (std::getline(is, raw)) {
        ++line_number;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(origin, line_number, "expected 'section.key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || key.find('.') == std::string::npos)
            fail(origin, line_number, "key '" + key + "' is not of the form section.key");
        if (cfg.count(key)) fail(origin, line_number, "duplicate key '" + key + "'");
        cfg[key] = RawEntry{value, line_number, false};
    }
    return cfg;
}

class ConfigReader {
  public:
    ConfigReader(RawConfig& cfg, const std::string& origin) : cfg_(cfg), origin_(origin) {}

    double number(const std::string& key, double fallback) {
        const RawEntry* e = find(key);
        if (!e) return fallback;
        return parse_double(key, *e);
    }

    int integer(const std::string& key, int fallback) {
        const RawEntry* e = find(key);
        if (!e) return fallback;
        const double v = parse_double(key, *e);
        if (v != std::floor(v)) fail(origin_, e->line, key + ": expected an integer");
        return static_cast<int>(v);
    }

    bool boolean(const std::string& key, bool fallback) {
        const RawEntry* e = find(key);
        if (!e) return fallback;
        if (e->value == "true" || e->value == "1") return true;
        if (e->value == "false" || e->value == "0") return false;
        fail(origin_, e->line, key + ": expected true/false, got '" + e->value + "'");
    }

    std::string word(const std::string& key, const std::string& fallback) {
        const RawEntry* e = find(key);
        return e ? e->value : fallback;
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
        const RawEntry* e = find(key);
        if (!e) return fallback;
        std::string v = e->value;
        std::replace(v.begin(), v.end(), ',', ' ');
        std::istringstream vs(v);
        std::vector<double> out;
        std::string tok;
        while (vs >> tok) out.push_back(parse_double(key, RawEntry{tok, e->line, true}));
        if (out.empty()) fail(origin_, e->line, key + ": empty list");
        return out;
    }

    int line_of(const std::string& key) const {
        const auto it = cfg_.find(key);
        return it == cfg_.end() ? 0 : it->second.line;
    }

  private:
    const RawEntry* find(const std::string& key) {
        const auto it = cfg_.find(key);
        if (it == cfg_.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    double parse_double(const std::string& key, const RawEntry& e) {
        try {
            size_t pos = 0;
            const double v = std::stod(e.value, &pos);
            if (pos != e.value.size())
                fail(origin_, e.line, key + ": unparseable value '" + e.value + "'");
            return v;
        } catch (const ScenarioError&) {
            throw;
        } catch (const std::exception&) {
            fail(origin_, e.line, key + ": unparseable value '" + e.value + "'");
        }
    }

    RawConfig& cfg_;
    std::string origin_;
};

}  // namespace

Scenario parse_scenario_text(const std::string& text, Strictness strictness,
                             const std::string& origin) {
    RawConfig cfg = tokenize(text, origin);
    for (const char* required : {"beam.bc", "impact.velocity_m_s"})
        if (!cfg.count(required))
            throw ScenarioError(origin + ": missing mandatory key '" + std::string(required) +
                                "'");
    ConfigReader rd(cfg, origin);
    Scenario s;

    s.geometry.length = rd.number("beam.length_m", s.geometry.length);
    s.geometry.width = rd.number("beam.width_m", s.geometry.width);
    s.geometry.height = rd.number("beam.height_m", s.geometry.height);
    s.beam_material.elastic_modulus =
        rd.number("beam.elastic_modulus_pa", s.beam_material.elastic_modulus);
    s.beam_material.poisson_ratio = rd.number("beam.poisson_ratio", s.beam_material.poisson_ratio);
    s.beam_material.density = rd.number("beam.density_kg_m3", s.beam_material.density);
    s.n_elem = rd.integer("beam.n_elem", s.n_elem);

    const std::string bc = rd.word("beam.bc", "free_free");
    if (bc == "free_free")
        s.bc = BeamBc::free_free;
    else if (bc == "clamped_clamped")
        s.bc = BeamBc::clamped_clamped;
    else
        fail(origin, rd.line_of("beam.bc"),
             "beam.bc: expected free_free or clamped_clamped, got '" + bc + "'");

    const std::string mass_style = rd.word("beam.mass_style", "consistent");
    if (mass_style == "consistent")
        s.mass_style = MassStyle::consistent;
    else if (mass_style == "lumped")
        s.mass_style = MassStyle::lumped;
    else
        fail(origin, rd.line_of("beam.mass_style"),
             "beam.mass_style: expected consistent or lumped, got '" + mass_style + "'");

    s.sphere_mass = rd.number("sphere.mass_kg", s.sphere_mass);
    s.sphere_radius = rd.number("sphere.radius_m", s.sphere_radius);
    s.sphere_material.elastic_modulus =
        rd.number("sphere.elastic_modulus_pa", s.sphere_material.elastic_modulus);
    s.sphere_material.poisson_ratio =
        rd.number("sphere.poisson_ratio", s.sphere_material.poisson_ratio);
    s.sphere_material.density = rd.number("sphere.density_kg_m3", s.sphere_material.density);

    const std::string rule = rd.word("sphere.compliance_rule", "hertz_secant_peak");
    if (rule == "hertz_secant_peak")
        s.compliance_rule = ComplianceRule::hertz_secant_peak;
    else if (rule == "hertz_tangent_peak")
        s.compliance_rule = ComplianceRule::hertz_tangent_peak;
    else if (rule == "fixed")
        s.compliance_rule = ComplianceRule::fixed_value;
    else
        fail(origin, rd.line_of("sphere.compliance_rule"),
             "sphere.compliance_rule: expected hertz_secant_peak, hertz_tangent_peak or fixed");
    s.fixed_compliance = rd.number("sphere.compliance_m_per_n", s.fixed_compliance);

    s.impact_point = rd.word("impact.point", s.impact_point);
    s.impact_position = rd.number("impact.position_m", s.impact_position);
    s.impact_velocity = rd.number("impact.velocity_m_s", s.impact_velocity);
    s.f_cut = rd.number("rom.f_cut_hz", s.f_cut);
    s.dt = rd.number("integration.dt_s", s.dt);
    s.t_end = rd.number("integration.t_end_s", s.t_end);
    s.penalty_scale = rd.number("contact.penalty_scale", s.penalty_scale);
    s.complementarity_tol = rd.number("contact.complementarity_tol", s.complementarity_tol);
    s.max_iterations = rd.integer("contact.max_iterations", s.max_iterations);
    s.gap_tol = rd.number("contact.gap_tol_m", s.gap_tol);

    for (auto& [label, frac] : s.point_fractions) {
        std::string key = "points." + label + "_frac";
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        frac = rd.number(key, frac);
    }
    s.probe_fractions = rd.numbers("probes.fractions", s.probe_fractions);
    s.frf_damping_ratio = rd.number("frf.damping_ratio", s.frf_damping_ratio);
    s.downsample_102k4 = rd.boolean("outputs.downsample_102k4", s.downsample_102k4);
    s.bench_n_elem = rd.integer("bench.n_elem", s.bench_n_elem);
    s.bench_t_end = rd.number("bench.t_end_s", s.bench_t_end);

    for (const auto& [key, entry] : cfg) {
        if (entry.used) continue;
        if (strictness == Strictness::strict)
            fail(origin, entry.line, "unknown key '" + key + "'");
        log::warn(origin + ":" + std::to_string(entry.line) + ": ignoring unknown key '" + key +
                  "'");
    }

    s.validate();
    return s;
}

Scenario parse_scenario(const std::string& path, Strictness strictness) {
    std::ifstream is(path);
    if (!is) throw ScenarioError("cannot open scenario file " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_scenario_text(buf.str(), strictness, path);
}

namespace {
std::string fmtg(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

std::string print_scenario(const Scenario& s) {
    std::ostringstream os;
    os << "beam.length_m = " << fmtg(s.geometry.length) << "\n";
    os << "beam.width_m = " << fmtg(s.geometry.width) << "\n";
    os << "beam.height_m = " << fmtg(s.geometry.height) << "\n";
    os << "beam.elastic_modulus_pa = " << fmtg(s.beam_material.elastic_modulus) << "\n";
    os << "beam.poisson_ratio = " << fmtg(s.beam_material.poisson_ratio) << "\n";
    os << "beam.density_kg_m3 = " << fmtg(s.beam_material.density) << "\n";
    os << "beam.bc = " << (s.bc == BeamBc::free_free ? "free_free" : "clamped_clamped") << "\n";
    os << "beam.n_elem = " << s.n_elem << "\n";
    os << "beam.mass_style = " << (s.mass_style == MassStyle::consistent ? "consistent" : "lumped")
       << "\n";
    os << "sphere.mass_kg = " << fmtg(s.sphere_mass) << "\n";
    os << "sphere.radius_m = " << fmtg(s.sphere_radius) << "\n";
    os << "sphere.elastic_modulus_pa = " << fmtg(s.sphere_material.elastic_modulus) << "\n";
    os << "sphere.poisson_ratio = " << fmtg(s.sphere_material.poisson_ratio) << "\n";
    os << "sphere.density_kg_m3 = " << fmtg(s.sphere_material.density) << "\n";
    os << "sphere.compliance_rule = "
       << (s.compliance_rule == ComplianceRule::hertz_secant_peak    ? "hertz_secant_peak"
           : s.compliance_rule == ComplianceRule::hertz_tangent_peak ? "hertz_tangent_peak"
                                                                     : "fixed")
       << "\n";
    if (s.compliance_rule == ComplianceRule::fixed_value)
        os << "sphere.compliance_m_per_n = " << fmtg(s.fixed_compliance) << "\n";
    if (!s.impact_point.empty()) os << "impact.point = " << s.impact_point << "\n";
    if (s.impact_position >= 0.0) os << "impact.position_m = " << fmtg(s.impact_position) << "\n";
    os << "impact.velocity_m_s = " << fmtg(s.impact_velocity) << "\n";
    os << "rom.f_cut_hz = " << fmtg(s.f_cut) << "\n";
    os << "integration.dt_s = " << fmtg(s.dt) << "\n";
    os << "integration.t_end_s = " << fmtg(s.t_end) << "\n";
    os << "contact.penalty_scale = " << fmtg(s.penalty_scale) << "\n";
    os << "contact.complementarity_tol = " << fmtg(s.complementarity_tol) << "\n";
    os << "contact.max_iterations = " << s.max_iterations << "\n";
    os << "contact.gap_tol_m = " << fmtg(s.gap_tol) << "\n";
    for (const auto& [label, frac] : s.point_fractions) {
        std::string key = label;
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        os << "points." << key << "_frac = " << fmtg(frac) << "\n";
    }
    os << "probes.fractions =";
    for (double f : s.probe_fractions) os << " " << fmtg(f);
    os << "\n";
    os << "frf.damping_ratio = " << fmtg(s.frf_damping_ratio) << "\n";
    os << "outputs.downsample_102k4 = " << (s.downsample_102k4 ? "true" : "false") << "\n";
    os << "bench.n_elem = " << s.bench_n_elem << "\n";
    os << "bench.t_end_s = " << fmtg(s.bench_t_end) << "\n";
    return os.str();
}

void print_defaults(std::ostream& os) { os << print_scenario(Scenario{}); }

}  // namespace mbrom

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qdimer/half_int.hpp"
#include "qdimer/units.hpp"

namespace qdimer {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Run configuration: a single key/value file with sections, every physical
// default traceable to the NaO constants. Unknown keys are rejected.
struct RunConfig {
    // [molecule]
    MoleculeParams mol;

    // [trap]
    double r_nm = 500.0;
    double delta_r_nm = 30.0;

    // [fields]
    double eta_el = 0.0;
    double eta_m_start = 0.0;
    double eta_m_stop = 3.0;
    int eta_m_points = 3001;
    double eta_m_ratio = 1.1;
    double theta = std::numbers::pi / 2;
    double phi = 0.0;
    double chi = 0.0;
    double xi_over_b = 0.0;  // 0 = derive from mu and r_nm

    // [truncation]
    int two_j_max = 7;

    // [tracking]
    int k_tracks = 8;
    double overlap_floor = 0.5;
    double gap_threshold_b = 0.05;
    double gap_floor_b = 1e-12;
    double refine_tol = 1e-7;

    // [gate]
    int scheme = 2;
    int control = 2;
    double gate_eta_start = 2.63;
    double gate_eta_operate = 2.64;
    int gate_window_points = 11;
    double resolvability_threshold_ghz = 1e-6;
    double scheme1_eta_start = 1.0;

    // [broadening]
    std::string spread_convention = "separation";  // or "position"
    double individual_threshold = 1e-2;

    // [run]
    unsigned workers = 1;
    std::uint64_t seed = 20240517;
    std::string outdir = "out";

    double xi_over_b_resolved() const {
        if (xi_over_b != 0.0) return xi_over_b;
        return units::xi_from_geometry(mol, r_nm) / mol.B_cm1;
    }

    HalfInt j_max() const { return HalfInt::from_twice(two_j_max); }

    void validate() const {
        mol.validate();
        if (!(r_nm > 0.0)) throw ConfigError("trap.r_nm must be positive");
        if (delta_r_nm < 0.0 || delta_r_nm >= r_nm)
            throw ConfigError("trap.delta_r_nm must satisfy 0 <= delta_r < r");
        if (eta_m_points < 1) throw ConfigError("fields.eta_m_points must be >= 1");
        if (eta_m_points > 1 && !(eta_m_stop != eta_m_start))
            throw ConfigError("fields: empty eta_m grid");
        if (two_j_max < 1 || two_j_max % 2 == 0)
            throw ConfigError("truncation.two_j_max must be an odd positive integer");
        if (k_tracks < 1) throw ConfigError("tracking.k_tracks must be >= 1");
        if (!(overlap_floor > 0.0 && overlap_floor <= 1.0))
            throw ConfigError("tracking.overlap_floor must lie in (0, 1]");
        if (scheme != 1 && scheme != 2) throw ConfigError("gate.scheme must be 1 or 2");
        if (control != 1 && control != 2) throw ConfigError("gate.control must be 1 or 2");
        if (spread_convention != "separation" && spread_convention != "position")
            throw ConfigError("broadening.spread_convention must be separation|position");
        if (eta_el < 0.0 || eta_m_start < 0.0) throw ConfigError("fields must be >= 0");
    }
};

namespace config_detail {

inline std::string trim(const std::string& s) {
    const auto l = s.find_first_not_of(" \t\r\n");
    if (l == std::string::npos) return "";
    const auto r = s.find_last_not_of(" \t\r\n");
    return s.substr(l, r - l + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T out;
    in >> out;
    if (in.fail() || !in.eof()) throw ConfigError("invalid numeric value for " + key);
    return out;
}

}  // namespace config_detail

inline void apply_config_entry(RunConfig& cfg, const std::string& section,
                               const std::string& key, const std::string& value) {
    using config_detail::parse_number;
    const std::string k = section + "." + key;
    auto num = [&](auto& slot) { slot = parse_number<std::decay_t<decltype(slot)>>(k, value); };

    if (k == "molecule.b_cm1") return num(cfg.mol.B_cm1);
    if (k == "molecule.gamma_cm1") return num(cfg.mol.gamma_cm1);
    if (k == "molecule.mu_debye") return num(cfg.mol.mu_debye);
    if (k == "molecule.g_s") return num(cfg.mol.g_s);
    if (k == "trap.r_nm") return num(cfg.r_nm);
    if (k == "trap.delta_r_nm") return num(cfg.delta_r_nm);
    if (k == "fields.eta_el") return num(cfg.eta_el);
    if (k == "fields.eta_m_start") return num(cfg.eta_m_start);
    if (k == "fields.eta_m_stop") return num(cfg.eta_m_stop);
    if (k == "fields.eta_m_points") return num(cfg.eta_m_points);
    if (k == "fields.eta_m_ratio") return num(cfg.eta_m_ratio);
    if (k == "fields.theta") return num(cfg.theta);
    if (k == "fields.phi") return num(cfg.phi);
    if (k == "fields.chi") return num(cfg.chi);
    if (k == "fields.xi_over_b") return num(cfg.xi_over_b);
    if (k == "truncation.two_j_max") return num(cfg.two_j_max);
    if (k == "tracking.k_tracks") return num(cfg.k_tracks);
    if (k == "tracking.overlap_floor") return num(cfg.overlap_floor);
    if (k == "tracking.gap_threshold_b") return num(cfg.gap_threshold_b);
    if (k == "tracking.gap_floor_b") return num(cfg.gap_floor_b);
    if (k == "tracking.refine_tol") return num(cfg.refine_tol);
    if (k == "gate.scheme") return num(cfg.scheme);
    if (k == "gate.control") return num(cfg.control);
    if (k == "gate.eta_start") return num(cfg.gate_eta_start);
    if (k == "gate.eta_operate") return num(cfg.gate_eta_operate);
    if (k == "gate.window_points") return num(cfg.gate_window_points);
    if (k == "gate.resolvability_threshold_ghz") return num(cfg.resolvability_threshold_ghz);
    if (k == "gate.scheme1_eta_start") return num(cfg.scheme1_eta_start);
    if (k == "broadening.spread_convention") {
        cfg.spread_convention = value;
        return;
    }
    if (k == "broadening.individual_threshold") return num(cfg.individual_threshold);
    if (k == "run.workers") return num(cfg.workers);
    if (k == "run.seed") return num(cfg.seed);
    if (k == "run.outdir") {
        cfg.outdir = value;
        return;
    }
    throw ConfigError("unknown configuration key: " + k);
}

inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = config_detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section");
            section = config_detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = config_detail::trim(line.substr(0, eq));
        const std::string value = config_detail::trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        apply_config_entry(cfg, section, key, value);
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

// Resolved configuration as "# section.key = value" lines for embedding in
// every output file.
inline std::string provenance(const RunConfig& cfg, const std::string& version) {
    std::ostringstream out;
    out.precision(17);
    out << "# qdimer " << version << '\n';
    auto kv = [&](const char* key, auto value) { out << "# " << key << " = " << value << '\n'; };
    kv("molecule.b_cm1", cfg.mol.B_cm1);
    kv("molecule.gamma_cm1", cfg.mol.gamma_cm1);
    kv("molecule.mu_debye", cfg.mol.mu_debye);
    kv("molecule.g_s", cfg.mol.g_s);
    kv("trap.r_nm", cfg.r_nm);
    kv("trap.delta_r_nm", cfg.delta_r_nm);
    kv("fields.eta_el", cfg.eta_el);
    kv("fields.eta_m_start", cfg.eta_m_start);
    kv("fields.eta_m_stop", cfg.eta_m_stop);
    kv("fields.eta_m_points", cfg.eta_m_points);
    kv("fields.eta_m_ratio", cfg.eta_m_ratio);
    kv("fields.theta", cfg.theta);
    kv("fields.phi", cfg.phi);
    kv("fields.chi", cfg.chi);
    kv("fields.xi_over_b", cfg.xi_over_b_resolved());
    kv("truncation.two_j_max", cfg.two_j_max);
    kv("tracking.k_tracks", cfg.k_tracks);
    kv("tracking.overlap_floor", cfg.overlap_floor);
    kv("tracking.gap_threshold_b", cfg.gap_threshold_b);
    kv("tracking.gap_floor_b", cfg.gap_floor_b);
    kv("tracking.refine_tol", cfg.refine_tol);
    kv("gate.scheme", cfg.scheme);
    kv("gate.control", cfg.control);
    kv("gate.eta_start", cfg.gate_eta_start);
    kv("gate.eta_operate", cfg.gate_eta_operate);
    kv("gate.window_points", cfg.gate_window_points);
    kv("gate.resolvability_threshold_ghz", cfg.resolvability_threshold_ghz);
    kv("gate.scheme1_eta_start", cfg.scheme1_eta_start);
    kv("broadening.spread_convention", cfg.spread_convention);
    kv("broadening.individual_threshold", cfg.individual_threshold);
    kv("run.workers", cfg.workers);
    kv("run.seed", cfg.seed);
    return out.str();
}

inline constexpr const char* kVersion = "1.0.0";

}  // namespace qdimer

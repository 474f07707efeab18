// Command-line driver: structured config in, CSV/JSON artifacts out.
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdimer/qdimer.hpp"

namespace fs = std::filesystem;
using namespace qdimer;

namespace {

RunConfig resolve_config(const std::string& config_path,
                         const std::vector<std::string>& overrides) {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        const auto dot = item.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            throw ConfigError("override must look like section.key=value: " + item);
        apply_config_entry(cfg, item.substr(0, dot), item.substr(dot + 1, eq - dot - 1),
                           item.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

spectra::MatrixBuilder dimer_builder(const RunConfig& cfg, const PairBasis& pair) {
    return [&cfg, &pair](double eta) {
        ham::DimerConfig dc;
        dc.mol1 = cfg.mol;
        dc.mol2 = cfg.mol;
        dc.site1 = {cfg.eta_el, eta};
        dc.site2 = {cfg.eta_el, eta * cfg.eta_m_ratio};
        dc.xi_over_b = cfg.xi_over_b_resolved();
        dc.phi = cfg.phi;
        dc.theta = cfg.theta;
        dc.chi = cfg.chi;
        return ham::build_dimer_hamiltonian(pair, dc);
    };
}

std::vector<double> eta_grid(const RunConfig& cfg) {
    std::vector<double> grid(static_cast<std::size_t>(cfg.eta_m_points));
    for (int i = 0; i < cfg.eta_m_points; ++i)
        grid[static_cast<std::size_t>(i)] =
            cfg.eta_m_start +
            (cfg.eta_m_stop - cfg.eta_m_start) *
                (cfg.eta_m_points == 1 ? 0.0 : double(i) / (cfg.eta_m_points - 1));
    return grid;
}

spectra::TrackedSpectrum run_tracked_sweep(const RunConfig& cfg, const PairBasis& pair) {
    spectra::SweepOptions opts;
    opts.overlap_floor = cfg.overlap_floor;
    opts.workers = cfg.workers;
    return spectra::sweep_track(eta_grid(cfg), dimer_builder(cfg, pair), cfg.k_tracks,
                                spectra::SeedSelection::LowestK, opts);
}

int cmd_sweep(const RunConfig& cfg) {
    PairBasis pair(cfg.j_max());
    const auto tracked = run_tracked_sweep(cfg, pair);
    fs::create_directories(cfg.outdir);
    io::write_file(cfg.outdir + "/eigenvalues.csv",
                   reports::sweep_csv(tracked, cfg.mol.B_cm1, cfg.eta_m_ratio,
                                      provenance(cfg, kVersion)));
    io::write_file(cfg.outdir + "/basis_manifest.csv",
                   provenance(cfg, kVersion) + pair.single().manifest_csv());
    std::cout << "wrote " << cfg.outdir << "/eigenvalues.csv (" << tracked.points()
              << " grid points, " << tracked.tracks() << " tracks)\n";
    return 0;
}

int cmd_concurrence(const RunConfig& cfg) {
    PairBasis pair(cfg.j_max());
    RunConfig sweep_cfg = cfg;
    sweep_cfg.k_tracks = std::max(cfg.k_tracks, 4);
    const auto tracked = run_tracked_sweep(sweep_cfg, pair);
    const auto profile = qubits::concurrence_profile(
        tracked, pair, cfg.mol, cfg.mol, [&](double eta) {
            return std::pair<FieldPoint, FieldPoint>{
                FieldPoint{cfg.eta_el, eta}, FieldPoint{cfg.eta_el, eta * cfg.eta_m_ratio}};
        });
    fs::create_directories(cfg.outdir);
    io::write_file(cfg.outdir + "/concurrence.csv",
                   reports::concurrence_csv(profile, cfg.mol.B_cm1, provenance(cfg, kVersion)));
    io::Json bell = reports::bell_decomposition_json(profile);
    bell["config"] = provenance(cfg, kVersion);
    io::write_file(cfg.outdir + "/bell_decomposition.json", bell.dump(2) + "\n");
    std::cout << "wrote " << cfg.outdir << "/concurrence.csv\n";
    return 0;
}

int cmd_cnot(const RunConfig& cfg) {
    gates::ProtocolConfig pc;
    pc.scheme = (cfg.scheme == 1) ? gates::Scheme::I : gates::Scheme::II;
    pc.control = cfg.control;
    pc.eta_start = (cfg.scheme == 1) ? cfg.scheme1_eta_start : cfg.gate_eta_start;
    pc.eta_operate = cfg.gate_eta_operate;
    pc.ratio = cfg.eta_m_ratio;
    pc.eta_el = cfg.eta_el;
    pc.xi_over_b = cfg.xi_over_b_resolved();
    pc.theta = cfg.theta;
    pc.window_points = cfg.gate_window_points;
    pc.overlap_floor = cfg.overlap_floor;
    pc.resolvability_threshold_ghz = cfg.resolvability_threshold_ghz;
    pc.workers = cfg.workers;
    pc.seed = cfg.seed;

    const Eigen::Vector4d input = Eigen::Vector4d::Unit(1);  // |01>
    const gates::GateReport rep = (cfg.scheme == 1) ? gates::run_scheme1(input, pc, cfg.j_max())
                                                    : gates::run_scheme2(input, pc, cfg.j_max());

    io::Json j = reports::gate_report_json(rep, cfg);
    j["config"] = provenance(cfg, kVersion);
    fs::create_directories(cfg.outdir);
    io::write_file(cfg.outdir + "/gate_report.json", j.dump(2) + "\n");
    std::cout << "wrote " << cfg.outdir << "/gate_report.json (verdict: " << rep.verdict << ")\n";
    return 0;
}

int cmd_broadening(const RunConfig& cfg) {
    feasibility::BroadeningScenario sc;
    sc.mol = cfg.mol;
    sc.eta_m = cfg.gate_eta_operate;
    sc.eta_ref = cfg.gate_eta_start;
    sc.ratio = cfg.eta_m_ratio;
    sc.eta_el = cfg.eta_el;
    sc.theta = cfg.theta;
    sc.xi_over_b = cfg.xi_over_b_resolved();
    sc.j_max = cfg.j_max();
    sc.workers = cfg.workers;

    feasibility::TrapGeometry trap{cfg.r_nm, cfg.delta_r_nm};
    const auto convention = (cfg.spread_convention == "position")
                                ? feasibility::SpreadConvention::PositionExtremes
                                : feasibility::SpreadConvention::SeparationExtremes;
    const auto rep = feasibility::composite_broadening(sc, trap, convention);
    const auto verdict = feasibility::overlap_check(rep);

    feasibility::BroadeningScenario ind_sc = sc;
    ind_sc.eta_m = cfg.gate_eta_start;  // readout point
    const auto ind = feasibility::individual_broadening(ind_sc, trap, cfg.individual_threshold);

    io::Json j = reports::broadening_report_json(rep, ind, verdict, cfg);
    j["config"] = provenance(cfg, kVersion);
    fs::create_directories(cfg.outdir);
    io::write_file(cfg.outdir + "/broadening_report.json", j.dump(2) + "\n");
    std::cout << "wrote " << cfg.outdir << "/broadening_report.json (feasible: "
              << (verdict.feasible ? "yes" : "no") << ")\n";
    return 0;
}

int cmd_constants(const RunConfig& cfg) {
    std::cout << "# Pinned physical constants\n"
              << "speed_of_light_ghz_per_cm1 = " << io::fmt(constants::kGHzPerWavenumber)
              << "   # 299792458 m/s exact\n"
              << "bohr_magneton_cm1_per_tesla = "
              << io::fmt(constants::kBohrMagnetonWavenumberPerTesla) << "   # mu_B / hc\n"
              << "electron_g_factor = " << io::fmt(constants::kElectronGFactor) << '\n'
              << "debye_kv_cm_to_cm1 = " << io::fmt(constants::kWavenumberPerDebyeKvCm)
              << "   # mu E / hc for mu = 1 D, E = 1 kV/cm\n"
              << "xi_cm1_debye2_nm3 = " << io::fmt(constants::kXiWavenumberDebye2PerNm3)
              << "   # mu^2 / (4 pi eps0 r^3 hc), mu = 1 D, r = 1 nm\n"
              << "# Derived for the configured molecule\n"
              << "eta_m_at_1T = " << io::fmt(units::eta_m_from_field(cfg.mol, 1.0)) << '\n'
              << "eta_el_at_100kVcm = " << io::fmt(units::eta_el_from_field(cfg.mol, 100.0))
              << '\n'
              << "xi_cm1_at_r = " << io::fmt(units::xi_from_geometry(cfg.mol, cfg.r_nm)) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled two-molecule spectra, entanglement and CNOT feasibility"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("-c,--config", config_path, "configuration file (key = value sections)");
    app.add_option("-s,--set", overrides, "override, e.g. --set fields.eta_m_points=101");

    auto* sweep = app.add_subcommand("sweep", "tracked eigenvalue sweep -> eigenvalues.csv");
    auto* conc = app.add_subcommand("concurrence", "concurrence profile -> concurrence.csv");
    auto* cnot = app.add_subcommand("cnot", "CNOT protocol -> gate_report.json");
    auto* broad = app.add_subcommand("broadening", "spectral broadening -> broadening_report.json");
    auto* consts = app.add_subcommand("constants", "print the pinned constants table");

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    try {
        cfg = resolve_config(config_path, overrides);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (conc->parsed()) return cmd_concurrence(cfg);
        if (cnot->parsed()) return cmd_cnot(cfg);
        if (broad->parsed()) return cmd_broadening(cfg);
        if (consts->parsed()) return cmd_constants(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

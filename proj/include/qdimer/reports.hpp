#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "qdimer/config.hpp"
#include "qdimer/feasibility.hpp"
#include "qdimer/gates.hpp"
#include "qdimer/io.hpp"
#include "qdimer/qubits.hpp"
#include "qdimer/spectra.hpp"
#include "qdimer/units.hpp"

namespace qdimer::reports {

// Sweep CSV: one row per grid point with both site eta values, each tracked
// eigenvalue in cm^-1 and GHz, and the eigenvector column it came from.
inline std::string sweep_csv(const spectra::TrackedSpectrum& tracked, double b_cm1, double ratio,
                             const std::string& provenance_block) {
    std::ostringstream out;
    out << provenance_block;
    out << "eta_m_1,eta_m_2";
    for (int k = 0; k < tracked.tracks(); ++k)
        out << ",track" << k << "_cm1,track" << k << "_ghz";
    for (int k = 0; k < tracked.tracks(); ++k) out << ",track" << k << "_idx";
    out << '\n';
    for (std::size_t t = 0; t < tracked.points(); ++t) {
        out << io::fmt(tracked.grid[t]) << ',' << io::fmt(tracked.grid[t] * ratio);
        for (int k = 0; k < tracked.tracks(); ++k) {
            const double e_cm1 = tracked.energies(t, k) * b_cm1;
            out << ',' << io::fmt(e_cm1) << ',' << io::fmt(units::cm1_to_ghz(e_cm1));
        }
        for (int k = 0; k < tracked.tracks(); ++k) out << ',' << tracked.eigen_index(t, k);
        out << '\n';
    }
    return out.str();
}

inline std::string concurrence_csv(const std::vector<qubits::ConcurrencePoint>& profile,
                                   double b_cm1, const std::string& provenance_block) {
    std::ostringstream out;
    out << provenance_block;
    out << "eta_m_1,C1,C2,C3,C4,E1_cm1,E2_cm1,E3_cm1,E4_cm1\n";
    for (const auto& pt : profile) {
        out << io::fmt(pt.eta_m);
        for (int i = 0; i < 4; ++i) out << ',' << io::fmt(pt.concurrence[static_cast<std::size_t>(i)]);
        for (int i = 0; i < 4; ++i)
            out << ',' << io::fmt(pt.energy[static_cast<std::size_t>(i)] * b_cm1);
        out << '\n';
    }
    return out.str();
}

// Bell-decomposition report: computational amplitudes of the four tracked
// states at each grid point.
inline io::Json bell_decomposition_json(const std::vector<qubits::ConcurrencePoint>& profile) {
    io::Json points = io::Json::array();
    for (const auto& pt : profile) {
        io::Json states = io::Json::array();
        for (int i = 0; i < 4; ++i) {
            const auto& st = pt.states[static_cast<std::size_t>(i)];
            states.push_back(io::Json{{"amplitudes",
                                       {st.amps(0), st.amps(1), st.amps(2), st.amps(3)}},
                                      {"energy_b", st.energy},
                                      {"leakage", st.leakage},
                                      {"concurrence",
                                       pt.concurrence[static_cast<std::size_t>(i)]}});
        }
        points.push_back(io::Json{{"eta_m_1", pt.eta_m}, {"states", states}});
    }
    return io::Json{{"points", points}};
}

inline io::Json gate_report_json(const gates::GateReport& rep, const RunConfig& cfg) {
    io::Json j;
    j["scheme"] = (rep.scheme == gates::Scheme::I) ? "I" : "II";
    j["control_molecule"] = rep.control;
    j["fields"] = {{"eta_el", cfg.eta_el},
                   {"eta_m_ratio", cfg.eta_m_ratio},
                   {"eta_start", (rep.scheme == gates::Scheme::II) ? cfg.gate_eta_start
                                                                   : cfg.scheme1_eta_start},
                   {"eta_operate", (rep.scheme == gates::Scheme::II) ? cfg.gate_eta_operate : 0.0},
                   {"xi_over_b", cfg.xi_over_b_resolved()},
                   {"theta", cfg.theta}};
    j["pulse"] = io::frequency_json(rep.pulse_freq_ghz);
    j["transition_dipole_mu"] = {{"q_minus", rep.dipole.q_minus},
                                 {"q_zero", rep.dipole.q_zero},
                                 {"q_plus", rep.dipole.q_plus},
                                 {"magnitude", rep.dipole.magnitude()}};
    j["omega_em_1"] = io::frequency_json(rep.omegas_operate_ghz[0]);
    j["omega_em_2"] = io::frequency_json(rep.omegas_operate_ghz[1]);
    j["omega_em_3"] = io::frequency_json(rep.omegas_operate_ghz[2]);
    j["delta_omega"] = io::frequency_json(rep.omegas_operate_ghz[3]);
    if (rep.scheme == gates::Scheme::I) {
        j["omega_0_1"] = io::frequency_json(rep.w01_ghz);
        j["omega_0_3"] = io::frequency_json(rep.w03_ghz);
    }
    if (rep.crossing) {
        j["avoided_crossing"] = {{"eta_lo", rep.crossing->lo},
                                 {"eta_hi", rep.crossing->hi},
                                 {"location", rep.crossing->location},
                                 {"min_gap_b", rep.crossing->min_gap},
                                 {"above_gap_floor", rep.crossing->above_floor}};
    }
    j["feasible"] = rep.feasible;
    j["verdict"] = rep.verdict;
    j["resolvability_margin"] = io::frequency_json(rep.resolvability_margin_ghz);
    j["label_leakage"] = rep.max_label_leakage;

    io::Json table = io::Json::array();
    for (const auto& e : rep.truth_table) {
        table.push_back(io::Json{{"input", {e.input(0), e.input(1), e.input(2), e.input(3)}},
                                 {"output", {e.output(0), e.output(1), e.output(2), e.output(3)}},
                                 {"expected",
                                  {e.expected(0), e.expected(1), e.expected(2), e.expected(3)}},
                                 {"pass", e.pass}});
    }
    j["truth_table"] = table;
    j["truth_table_pass"] = rep.truth_table_pass;
    return j;
}

inline io::Json broadening_report_json(const feasibility::BroadeningReport& rep,
                                       const feasibility::IndividualReport& ind,
                                       const feasibility::OverlapVerdict& verdict,
                                       const RunConfig& cfg) {
    io::Json j;
    j["convention"] = (rep.convention == feasibility::SpreadConvention::SeparationExtremes)
                          ? "separation"
                          : "position";
    j["trap"] = {{"r_nm", cfg.r_nm}, {"delta_r_nm", cfg.delta_r_nm}};
    j["xi_over_b"] = {{"nominal", cfg.xi_over_b_resolved()},
                      {"min", rep.xi_min_over_b},
                      {"max", rep.xi_max_over_b}};
    const char* names[3] = {"omega_em_1", "omega_em_2", "omega_em_3"};
    for (int i = 0; i < 3; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        j[names[idx]] = {{"nominal", io::frequency_json(rep.nominal_ghz[idx])},
                         {"width", io::frequency_json(rep.width_ghz[idx])},
                         {"width_dipole_dipole", io::frequency_json(rep.width_dd_ghz[idx])},
                         {"width_inhomogeneity", io::frequency_json(rep.width_inhom_ghz[idx])},
                         {"interval_ghz", {rep.interval_ghz[idx][0], rep.interval_ghz[idx][1]}},
                         {"dominance_dd_over_inhom", rep.dominance[idx]}};
    }
    j["delta_omega"] = io::frequency_json(rep.dw_ghz);
    j["quad_fit_residual"] = rep.quad_fit_residual;
    j["overlap_check"] = {{"disjoint", verdict.disjoint},
                          {"margin", io::frequency_json(verdict.margin_ghz)},
                          {"w3_width_over_dw", verdict.w3_width_over_dw},
                          {"feasible", verdict.feasible}};
    j["individual"] = {{"flip_1", io::frequency_json(ind.de1_ghz)},
                       {"flip_2", io::frequency_json(ind.de2_ghz)},
                       {"width_1", io::frequency_json(ind.width1_ghz)},
                       {"width_2", io::frequency_json(ind.width2_ghz)},
                       {"separation", io::frequency_json(ind.separation_ghz)},
                       {"threshold", ind.threshold},
                       {"feasible_1", ind.feasible1},
                       {"feasible_2", ind.feasible2}};
    return j;
}

}  // namespace qdimer::reports

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "qdimer/gates.hpp"
#include "qdimer/hamiltonian.hpp"
#include "qdimer/qubits.hpp"
#include "qdimer/spectra.hpp"
#include "qdimer/units.hpp"

namespace qdimer::feasibility {

struct TrapGeometry {
    double r_nm = 500.0;        // nominal separation (lambda/2)
    double delta_r_nm = 30.0;   // translational spread of each molecule

    void validate() const {
        if (!(r_nm > 0.0)) throw std::domain_error("TrapGeometry: separation must be positive");
        if (delta_r_nm < 0.0 || delta_r_nm >= r_nm)
            throw std::domain_error("TrapGeometry: need 0 <= delta_r < r");
    }
};

// How the translational spread maps onto the two extreme cases:
//  - SeparationExtremes: r_12 -> r -+ delta_r with the fields sampled at the
//    well centers (only the dipole-dipole strength varies).
//  - PositionExtremes: each molecule additionally moves -+ delta_r/2 along
//    the linear field profile, shifting its local eta.
enum class SpreadConvention { SeparationExtremes, PositionExtremes };

struct BroadeningScenario {
    MoleculeParams mol;
    double eta_m = 2.64;       // evaluation point
    double eta_ref = 2.63;     // tracking seed point (clean labels)
    double ratio = 1.1;        // (eta_m)_2 / (eta_m)_1, defines the linear profile
    double eta_el = 0.0;
    double theta = std::numbers::pi / 2;
    double xi_over_b = 5.41e-6;
    HalfInt j_max = HalfInt::from_twice(7);
    int window_points = 6;
    unsigned workers = 1;
};

struct BroadeningReport {
    // omega_em,1..3 at the evaluation point.
    std::array<double, 3> nominal_ghz{};
    double dw_ghz = 0.0;
    // Interval widths per transition for the active convention, plus the two
    // contributions isolated by toggling each effect.
    std::array<double, 3> width_ghz{};
    std::array<double, 3> width_dd_ghz{};
    std::array<double, 3> width_inhom_ghz{};
    std::array<std::array<double, 2>, 3> interval_ghz{};  // [lo, hi] per line
    std::array<double, 3> dominance{};                    // dd / inhom per line
    double quad_fit_residual = 0.0;  // relative residual of the Xi^2 model
    SpreadConvention convention = SpreadConvention::SeparationExtremes;
    double xi_min_over_b = 0.0, xi_max_over_b = 0.0;
};

namespace detail {

// omega_em,1..3 (GHz) at scenario.eta_m for given dipole-dipole strength and
// per-site eta scale factors, via a computational-family tracked window.
inline std::array<double, 4> omegas_at(const BroadeningScenario& sc, const PairBasis& pair,
                                       double xi_over_b, double scale1, double scale2) {
    auto builder = [&](double eta) {
        ham::DimerConfig dc;
        dc.mol1 = sc.mol;
        dc.mol2 = sc.mol;
        dc.site1 = {sc.eta_el, eta * scale1};
        dc.site2 = {sc.eta_el, eta * sc.ratio * scale2};
        dc.xi_over_b = xi_over_b;
        dc.theta = sc.theta;
        return ham::build_dimer_hamiltonian(pair, dc);
    };

    const qubits::QubitPair m1 = qubits::single_qubit_states(
        pair.single(), sc.mol, FieldPoint{sc.eta_el, sc.eta_ref * scale1});
    const qubits::QubitPair m2 = qubits::single_qubit_states(
        pair.single(), sc.mol, FieldPoint{sc.eta_el, sc.eta_ref * sc.ratio * scale2});
    const auto seed = qubits::make_computational_seed(pair, builder(sc.eta_ref), m1, m2);

    std::vector<double> grid(sc.window_points);
    for (int i = 0; i < sc.window_points; ++i)
        grid[i] = sc.eta_ref + (sc.eta_m - sc.eta_ref) * i / (sc.window_points - 1);
    spectra::SweepOptions opts;
    opts.workers = sc.workers;
    opts.seed_vectors = seed.vectors;
    const auto window = spectra::sweep_track(grid, builder, 4 + seed.partners,
                                             spectra::SeedSelection::LowestK, opts);

    const auto e4 = spectra::lowest_four(window, window.points() - 1);
    const auto tf = spectra::transition_frequencies(e4, sc.mol.B_cm1);
    return {tf.w1_ghz, tf.w2_ghz, tf.w3_ghz, tf.dw_ghz};
}

}  // namespace detail

// Broadening of the composite-system transitions from the translational
// spread: the dipole-dipole part is Xi^2-quadratic and is extracted from a
// large-Xi fit so that Hz-scale widths are not buried in eigensolver noise;
// the field-inhomogeneity part is evaluated directly from the displaced
// site fields.
inline BroadeningReport composite_broadening(const BroadeningScenario& sc,
                                             const TrapGeometry& trap,
                                             SpreadConvention convention =
                                                 SpreadConvention::SeparationExtremes) {
    trap.validate();
    PairBasis pair(sc.j_max);

    BroadeningReport rep;
    rep.convention = convention;

    const auto nominal = detail::omegas_at(sc, pair, sc.xi_over_b, 1.0, 1.0);
    rep.nominal_ghz = {nominal[0], nominal[1], nominal[2]};
    rep.dw_ghz = nominal[3];

    const double rmin = trap.r_nm - trap.delta_r_nm;
    const double rmax = trap.r_nm + trap.delta_r_nm;
    const double cube = [](double x) { return x * x * x; }(trap.r_nm);
    rep.xi_max_over_b = sc.xi_over_b * cube / (rmin * rmin * rmin);
    rep.xi_min_over_b = sc.xi_over_b * cube / (rmax * rmax * rmax);

    if (trap.delta_r_nm == 0.0) {
        for (int i = 0; i < 3; ++i)
            rep.interval_ghz[static_cast<std::size_t>(i)] = {nominal[static_cast<std::size_t>(i)],
                                                             nominal[static_cast<std::size_t>(i)]};
        return rep;
    }

    // Quadratic model omega_i(Xi) = omega_i(0) + k_i Xi^2, fitted far above
    // the noise floor and validated at the midpoint.
    const double xi_big = 3.0e-4;
    const auto w0 = detail::omegas_at(sc, pair, 0.0, 1.0, 1.0);
    const auto wbig = detail::omegas_at(sc, pair, xi_big, 1.0, 1.0);
    const auto wmid = detail::omegas_at(sc, pair, xi_big / 2.0, 1.0, 1.0);

    std::array<double, 3> k{};
    double residual = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        k[i] = (wbig[i] - w0[i]) / (xi_big * xi_big);
        const double predicted = w0[i] + k[i] * (xi_big / 2.0) * (xi_big / 2.0);
        const double denom = std::max(std::abs(wbig[i] - w0[i]), 1e-300);
        residual = std::max(residual, std::abs(wmid[i] - predicted) / denom);
    }
    rep.quad_fit_residual = residual;

    const double xi2_hi = rep.xi_max_over_b * rep.xi_max_over_b;
    const double xi2_lo = rep.xi_min_over_b * rep.xi_min_over_b;
    const double xi2_nom = sc.xi_over_b * sc.xi_over_b;
    for (std::size_t i = 0; i < 3; ++i) rep.width_dd_ghz[i] = std::abs(k[i]) * (xi2_hi - xi2_lo);

    // Field-profile displacement of -+ delta_r/2 per molecule: molecule 1
    // moves up-field when the pair contracts, molecule 2 down-field.
    const double shift = (sc.ratio - 1.0) * (trap.delta_r_nm / 2.0) / trap.r_nm;
    const double s1a = 1.0 + shift, s2a = 1.0 - shift / sc.ratio;
    const double s1b = 1.0 - shift, s2b = 1.0 + shift / sc.ratio;
    const auto wia = detail::omegas_at(sc, pair, sc.xi_over_b, s1a, s2a);
    const auto wib = detail::omegas_at(sc, pair, sc.xi_over_b, s1b, s2b);
    for (std::size_t i = 0; i < 3; ++i) rep.width_inhom_ghz[i] = std::abs(wia[i] - wib[i]);

    for (std::size_t i = 0; i < 3; ++i) {
        if (convention == SpreadConvention::SeparationExtremes) {
            rep.width_ghz[i] = rep.width_dd_ghz[i];
            const double lo = nominal[i] + k[i] * (xi2_lo - xi2_nom);
            const double hi = nominal[i] + k[i] * (xi2_hi - xi2_nom);
            rep.interval_ghz[i] = {std::min(lo, hi), std::max(lo, hi)};
        } else {
            // Both effects: dd interval displaced by the field shifts.
            const double a = wia[i] + k[i] * (xi2_hi - xi2_nom);
            const double b = wib[i] + k[i] * (xi2_lo - xi2_nom);
            rep.width_ghz[i] = std::abs(a - b);
            rep.interval_ghz[i] = {std::min(a, b), std::max(a, b)};
        }
        rep.dominance[i] = (rep.width_inhom_ghz[i] > 0.0)
                               ? rep.width_dd_ghz[i] / rep.width_inhom_ghz[i]
                               : std::numeric_limits<double>::infinity();
    }
    return rep;
}

// The Eq.-(16)-style feasibility check: the three broadened frequency ranges
// must not overlap, and the omega_em,3 width must be small against the key
// frequency difference.
struct OverlapVerdict {
    bool disjoint = false;
    double margin_ghz = 0.0;           // smallest pairwise interval distance
    double w3_width_over_dw = 0.0;
    bool feasible = false;
};

inline OverlapVerdict overlap_check(const BroadeningReport& rep) {
    OverlapVerdict out;
    out.margin_ghz = std::numeric_limits<double>::infinity();
    out.disjoint = true;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const auto& a = rep.interval_ghz[static_cast<std::size_t>(i)];
            const auto& b = rep.interval_ghz[static_cast<std::size_t>(j)];
            const double gap = std::max(a[0], b[0]) <= std::min(a[1], b[1])
                                   ? 0.0
                                   : std::max(b[0] - a[1], a[0] - b[1]);
            if (gap <= 0.0) out.disjoint = false;
            out.margin_ghz = std::min(out.margin_ghz, gap);
        }
    out.w3_width_over_dw =
        (rep.dw_ghz != 0.0) ? rep.width_ghz[2] / std::abs(rep.dw_ghz) : 0.0;
    out.feasible = out.disjoint;
    return out;
}

// Individual-molecule addressability: the spread of each molecule's flipping
// frequency across its well against the separation of the two flipping
// frequencies.
struct IndividualReport {
    double de1_ghz = 0.0, de2_ghz = 0.0;          // nominal flip frequencies
    double width1_ghz = 0.0, width2_ghz = 0.0;    // across -+ delta_r/2
    double separation_ghz = 0.0;
    double threshold = 1e-2;  // operationalizes "much smaller than"
    bool feasible1 = false, feasible2 = false;
};

inline IndividualReport individual_broadening(const BroadeningScenario& sc,
                                              const TrapGeometry& trap,
                                              double threshold = 1e-2) {
    trap.validate();
    SingleBasis basis(sc.j_max);
    const double to_ghz = sc.mol.B_cm1 * constants::kGHzPerWavenumber;

    auto flip = [&](double eta) {
        const auto qp =
            qubits::single_qubit_states(basis, sc.mol, FieldPoint{sc.eta_el, eta});
        return (qp.e1 - qp.e0) * to_ghz;
    };

    const double eta1 = sc.eta_m, eta2 = sc.eta_m * sc.ratio;
    const double gradient = (sc.ratio - 1.0) * sc.eta_m / trap.r_nm;  // eta per nm
    const double d = gradient * trap.delta_r_nm / 2.0;

    IndividualReport rep;
    rep.threshold = threshold;
    rep.de1_ghz = flip(eta1);
    rep.de2_ghz = flip(eta2);
    rep.separation_ghz = std::abs(rep.de2_ghz - rep.de1_ghz);
    rep.width1_ghz = std::abs(flip(eta1 + d) - flip(eta1 - d));
    rep.width2_ghz = std::abs(flip(eta2 + d) - flip(eta2 - d));
    rep.feasible1 = rep.width1_ghz < threshold * rep.separation_ghz;
    rep.feasible2 = rep.width2_ghz < threshold * rep.separation_ghz;
    return rep;
}

}  // namespace qdimer::feasibility

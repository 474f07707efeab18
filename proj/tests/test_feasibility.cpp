#include <gtest/gtest.h>

#include "qdimer/feasibility.hpp"

using namespace qdimer;

namespace {

feasibility::BroadeningScenario small_scenario() {
    feasibility::BroadeningScenario sc;
    sc.j_max = HalfInt::from_twice(5);  // N = 2 manifold present, fast
    return sc;
}

}  // namespace

TEST(TrapGeometry, Validation) {
    feasibility::TrapGeometry ok;
    EXPECT_NO_THROW(ok.validate());
    feasibility::TrapGeometry bad{100.0, 100.0};
    EXPECT_THROW(bad.validate(), std::domain_error);
    feasibility::TrapGeometry neg{500.0, -1.0};
    EXPECT_THROW(neg.validate(), std::domain_error);
}

TEST(CompositeBroadening, ZeroSpreadMeansZeroWidths) {
    auto sc = small_scenario();
    feasibility::TrapGeometry trap{500.0, 0.0};
    const auto rep = feasibility::composite_broadening(sc, trap);
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(rep.width_ghz[static_cast<std::size_t>(i)], 0.0);
        EXPECT_GT(rep.nominal_ghz[static_cast<std::size_t>(i)], 0.0);
    }
}

TEST(CompositeBroadening, WidthsMonotoneInSpreadAndCubicLaw) {
    auto sc = small_scenario();
    const auto rep10 = feasibility::composite_broadening(sc, {500.0, 10.0});
    const auto rep30 = feasibility::composite_broadening(sc, {500.0, 30.0});
    for (int i = 0; i < 3; ++i)
        EXPECT_GE(rep30.width_dd_ghz[static_cast<std::size_t>(i)],
                  rep10.width_dd_ghz[static_cast<std::size_t>(i)]);

    // One-sided Xi change matches the 3 Xi dr/r linearization for small dr.
    const feasibility::TrapGeometry small_dr{500.0, 3.0};
    const auto rep = feasibility::composite_broadening(sc, small_dr);
    const double xi = sc.xi_over_b;
    EXPECT_NEAR(rep.xi_max_over_b - xi, 3.0 * xi * small_dr.delta_r_nm / small_dr.r_nm,
                0.05 * 3.0 * xi * small_dr.delta_r_nm / small_dr.r_nm);
    // Quadratic-in-Xi fit must be clean.
    EXPECT_LT(rep.quad_fit_residual, 0.02);
}

TEST(CompositeBroadening, InhomogeneityToggleMatchesIndividualAtXiZero) {
    // With the coupling off, the field-profile widths of the bottom gap equal
    // the individual molecule-1 flip-frequency spread.
    auto sc = small_scenario();
    sc.xi_over_b = 0.0;
    feasibility::TrapGeometry trap{500.0, 30.0};
    const auto rep =
        feasibility::composite_broadening(sc, trap, feasibility::SpreadConvention::PositionExtremes);

    auto ind_sc = sc;
    const auto ind = feasibility::individual_broadening(ind_sc, trap);
    EXPECT_NEAR(rep.width_inhom_ghz[0], ind.width1_ghz, 1e-9 * std::max(1.0, ind.width1_ghz));
}

TEST(IndividualBroadening, TableIIIValuesAndLinearScaling) {
    auto sc = small_scenario();
    sc.eta_m = 2.63;
    sc.j_max = HalfInt::from_twice(7);
    const feasibility::TrapGeometry trap{500.0, 30.0};
    const auto rep = feasibility::individual_broadening(sc, trap);
    EXPECT_NEAR(rep.de1_ghz, 36.427, 0.001);
    EXPECT_NEAR(rep.de2_ghz, 40.069, 0.001);
    EXPECT_NEAR(rep.separation_ghz, 3.642, 0.002);

    // Two-level Zeeman: width scales linearly with gradient x spread.
    const auto rep2 = feasibility::individual_broadening(sc, {500.0, 15.0});
    EXPECT_NEAR(rep.width1_ghz, 2.0 * rep2.width1_ghz, 1e-6 * rep.width1_ghz);

    const auto rep0 = feasibility::individual_broadening(sc, {500.0, 0.0});
    EXPECT_EQ(rep0.width1_ghz, 0.0);
    EXPECT_EQ(rep0.width2_ghz, 0.0);
    EXPECT_TRUE(rep0.feasible1);
    EXPECT_TRUE(rep0.feasible2);
}

TEST(OverlapCheck, SyntheticIntervals) {
    feasibility::BroadeningReport rep;
    rep.interval_ghz = {{{1.0, 1.1}, {2.0, 2.1}, {3.0, 3.1}}};
    rep.width_ghz = {0.1, 0.1, 0.1};
    rep.dw_ghz = 0.5;
    const auto ok = feasibility::overlap_check(rep);
    EXPECT_TRUE(ok.feasible);
    EXPECT_NEAR(ok.margin_ghz, 0.9, 1e-12);
    EXPECT_NEAR(ok.w3_width_over_dw, 0.2, 1e-12);

    rep.interval_ghz = {{{1.0, 1.1}, {1.0, 1.1}, {3.0, 3.1}}};
    const auto bad = feasibility::overlap_check(rep);
    EXPECT_FALSE(bad.feasible);
}

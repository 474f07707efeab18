#include <gtest/gtest.h>

#include <sstream>

#include "qdimer/config.hpp"
#include "qdimer/io.hpp"

using namespace qdimer;

TEST(Config, DefaultsAreTableValues) {
    RunConfig cfg;
    cfg.validate();
    EXPECT_DOUBLE_EQ(cfg.mol.B_cm1, 0.462);
    EXPECT_DOUBLE_EQ(cfg.mol.gamma_cm1, 0.193);
    EXPECT_DOUBLE_EQ(cfg.mol.mu_debye, 7.88);
    EXPECT_EQ(cfg.two_j_max, 7);
    EXPECT_DOUBLE_EQ(cfg.r_nm, 500.0);
    EXPECT_NEAR(cfg.xi_over_b_resolved(), 5.41e-6, 0.02e-6);
}

TEST(Config, ParseSectionsAndOverrides) {
    std::istringstream in(R"(
# comment
[molecule]
b_cm1 = 0.5
gamma_cm1 = 0.1   ; trailing comment
[fields]
eta_m_points = 11
eta_m_stop = 1.5
[run]
outdir = results
)");
    const RunConfig cfg = parse_config(in);
    EXPECT_DOUBLE_EQ(cfg.mol.B_cm1, 0.5);
    EXPECT_DOUBLE_EQ(cfg.mol.gamma_cm1, 0.1);
    EXPECT_EQ(cfg.eta_m_points, 11);
    EXPECT_EQ(cfg.outdir, "results");
    // Untouched keys keep defaults.
    EXPECT_DOUBLE_EQ(cfg.mol.mu_debye, 7.88);
}

TEST(Config, RejectsUnknownKeysAndMalformedLines) {
    std::istringstream unknown("[molecule]\nnot_a_key = 1\n");
    EXPECT_THROW(parse_config(unknown), ConfigError);
    std::istringstream nosection("b_cm1 = 1\n");
    EXPECT_THROW(parse_config(nosection), ConfigError);
    std::istringstream noequals("[molecule]\nb_cm1 0.4\n");
    EXPECT_THROW(parse_config(noequals), ConfigError);
    std::istringstream badnum("[molecule]\nb_cm1 = abc\n");
    EXPECT_THROW(parse_config(badnum), ConfigError);
}

TEST(Config, ValidationCatchesBadValues) {
    RunConfig cfg;
    cfg.two_j_max = 4;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = RunConfig{};
    cfg.eta_m_points = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = RunConfig{};
    cfg.eta_m_points = 5;
    cfg.eta_m_stop = cfg.eta_m_start;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = RunConfig{};
    cfg.scheme = 3;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = RunConfig{};
    cfg.delta_r_nm = 600.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Config, ProvenanceDeterministic) {
    RunConfig cfg;
    const std::string a = provenance(cfg, kVersion);
    const std::string b = provenance(cfg, kVersion);
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find("molecule.b_cm1 = 0.462"), std::string::npos);
    EXPECT_NE(a.find("fields.xi_over_b"), std::string::npos);
}

TEST(Io, FloatFormattingStable) {
    EXPECT_EQ(io::fmt(1.0), "1");
    EXPECT_EQ(io::fmt(0.1), "0.1");
    EXPECT_EQ(io::fmt(36.42703), "36.42703");
    EXPECT_EQ(io::fmt(1.234567890123e-11), "1.23456789012e-11");
}

TEST(Io, FrequencyUnitTags) {
    EXPECT_EQ(io::frequency_json(36.4)["unit"], "GHz");
    EXPECT_EQ(io::frequency_json(0.198)["unit"], "GHz");
    EXPECT_EQ(io::frequency_json(1.98e-4)["unit"], "MHz");
    EXPECT_NEAR(io::frequency_json(1.98e-4)["value"].get<double>(), 0.198, 1e-12);
    EXPECT_EQ(io::frequency_json(2.4e-7)["unit"], "kHz");
    EXPECT_EQ(io::frequency_json(1.6e-9 * 1.662)["unit"], "Hz");
}

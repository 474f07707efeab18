#pragma once

#include <cmath>
#include <stdexcept>

namespace qdimer {

// Physical constants, pinned to fixed documented values so outputs are
// bit-stable. All derived factors trace back to CODATA 2018 exact/recommended
// values; energies are wavenumbers (cm^-1) at the I/O boundary and multiples
// of the rotational constant B internally.
namespace constants {

// Speed of light: 299792458 m/s (exact). 1 cm^-1 = 29.9792458 GHz.
inline constexpr double kGHzPerWavenumber = 29.9792458;

// Bohr magneton over hc: mu_B / (h c) = 0.46686447783 cm^-1 / T.
inline constexpr double kBohrMagnetonWavenumberPerTesla = 0.46686447783;

// Free-electron g factor magnitude used throughout.
inline constexpr double kElectronGFactor = 2.0023;

// 1 Debye = 3.33564095e-30 C m; with E in kV/cm and h c = 1.98644586e-23 J cm,
// mu * E / (h c) = 1.67921e-2 cm^-1 per (D kV/cm).
inline constexpr double kWavenumberPerDebyeKvCm = 1.6792092e-2;

// mu1 mu2 / (4 pi eps0 r^3) for mu in Debye and r in nm, expressed in cm^-1.
// (1 D)^2 / (4 pi eps0 (1 nm)^3) = 1.0e-22 J exactly; dividing by
// h c = 1.986445857e-23 J cm gives 5.0341179 cm^-1.
inline constexpr double kXiWavenumberDebye2PerNm3 = 5.0341179;

}  // namespace constants

// Body-fixed molecular constants of one 2-Sigma species.
struct MoleculeParams {
    double B_cm1 = 0.462;     // rotational constant
    double gamma_cm1 = 0.193; // spin-rotation constant
    double mu_debye = 7.88;   // body-fixed electric dipole moment
    double g_s = constants::kElectronGFactor;

    void validate() const {
        if (!(B_cm1 > 0.0)) throw std::domain_error("MoleculeParams: B must be positive");
        if (mu_debye < 0.0) throw std::domain_error("MoleculeParams: mu must be >= 0");
        if (!(g_s > 0.0)) throw std::domain_error("MoleculeParams: g_s must be positive");
        if (!std::isfinite(gamma_cm1)) throw std::domain_error("MoleculeParams: gamma not finite");
    }
};

// Dimensionless field parameters at one site.
struct FieldPoint {
    double eta_el = 0.0;
    double eta_m = 0.0;
};

namespace units {

// eta_m = g_S mu_B H / B for H in Tesla.
inline double eta_m_from_field(const MoleculeParams& p, double tesla) {
    p.validate();
    if (tesla < 0.0) throw std::domain_error("eta_m_from_field: H must be >= 0");
    return p.g_s * constants::kBohrMagnetonWavenumberPerTesla * tesla / p.B_cm1;
}

inline double field_from_eta_m(const MoleculeParams& p, double eta_m) {
    p.validate();
    return eta_m * p.B_cm1 / (p.g_s * constants::kBohrMagnetonWavenumberPerTesla);
}

// eta_el = mu E / B for E in kV/cm.
inline double eta_el_from_field(const MoleculeParams& p, double kv_per_cm) {
    p.validate();
    if (kv_per_cm < 0.0) throw std::domain_error("eta_el_from_field: E must be >= 0");
    return p.mu_debye * constants::kWavenumberPerDebyeKvCm * kv_per_cm / p.B_cm1;
}

inline double field_from_eta_el(const MoleculeParams& p, double eta_el) {
    p.validate();
    if (p.mu_debye == 0.0) throw std::domain_error("field_from_eta_el: mu is zero");
    return eta_el * p.B_cm1 / (p.mu_debye * constants::kWavenumberPerDebyeKvCm);
}

// Electric dipole-dipole strength Xi = mu^2 / (4 pi eps0 r^3) in cm^-1, r in nm.
inline double xi_from_geometry(const MoleculeParams& p, double r_nm) {
    p.validate();
    if (!(r_nm > 0.0)) throw std::domain_error("xi_from_geometry: separation must be positive");
    return p.mu_debye * p.mu_debye * constants::kXiWavenumberDebye2PerNm3 / (r_nm * r_nm * r_nm);
}

inline double cm1_to_ghz(double x) { return x * constants::kGHzPerWavenumber; }
inline double ghz_to_cm1(double x) { return x / constants::kGHzPerWavenumber; }

}  // namespace units
}  // namespace qdimer

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "qdimer/angmom.hpp"
#include "qdimer/basis.hpp"
#include "qdimer/units.hpp"

namespace qdimer::ham {

// Geometry and per-site fields of the two-molecule system. Fields are
// collinear along the space-fixed Z axis; (phi, theta, chi) are the Euler
// angles of the intermolecular axis n relative to that frame. Energies of the
// assembled matrices are in units of mol1.B.
struct DimerConfig {
    MoleculeParams mol1, mol2;
    FieldPoint site1, site2;
    double xi_over_b = 0.0;
    double phi = 0.0;
    double theta = std::numbers::pi / 2;
    double chi = 0.0;

    void validate() const {
        mol1.validate();
        mol2.validate();
        if (xi_over_b < 0.0) throw std::domain_error("DimerConfig: xi_over_b must be >= 0");
        if (theta < 0.0 || theta > std::numbers::pi)
            throw std::domain_error("DimerConfig: theta outside [0, pi]");
    }
};

namespace detail {

// Case (a) ladder element <J, Omega+1, Sigma+1 | J.S | J, Omega, Sigma>.
// The body-frame sign convention is fixed here once; it is unobservable and
// validated against the analytic field-free case (b) spectrum.
inline double js_ladder(HalfInt J, HalfInt Omega, HalfInt Sigma, int dir) {
    const double jpart = J.j_squared() - Omega.value() * (Omega.value() + dir);
    const double spart = BasisKet::S().j_squared() - Sigma.value() * (Sigma.value() + dir);
    if (jpart <= 0.0 || spart <= 0.0) return 0.0;
    return 0.5 * std::sqrt(jpart) * std::sqrt(spart);
}

// Spherical component T^1_q of S acting on |S Sigma>, body frame.
inline double spin_t1(int q, HalfInt sigma_from, HalfInt sigma_to) {
    const double s2 = BasisKet::S().j_squared();
    const double sv = sigma_from.value();
    switch (q) {
        case 0:
            return (sigma_to == sigma_from) ? sv : 0.0;
        case 1:
            if ((sigma_from + kOne) != sigma_to) return 0.0;
            return -std::sqrt(s2 - sv * (sv + 1.0)) / std::numbers::sqrt2;
        case -1:
            if ((sigma_from - kOne) != sigma_to) return 0.0;
            return std::sqrt(s2 - sv * (sv - 1.0)) / std::numbers::sqrt2;
        default:
            return 0.0;
    }
}

inline void require_z_aligned_azimuths(double phi, double chi) {
    auto is_multiple_of_pi = [](double x) {
        const double r = std::remainder(x, std::numbers::pi);
        return std::abs(r) < 1e-12;
    };
    // With both fields along Z the spectrum cannot depend on phi or chi; only
    // these values keep the assembled matrix real.
    if (!is_multiple_of_pi(phi) || !is_multiple_of_pi(chi))
        throw std::domain_error("build_vdd: phi and chi must be multiples of pi");
}

// Exact C(1,1,2; nu, lambda, nu+lambda) values for the rank-2 recoupling.
inline double cg112(int nu, int lambda) {
    const int q = nu + lambda;
    if (nu == 0 && lambda == 0) return std::sqrt(2.0 / 3.0);
    if (q == 1 || q == -1) return 1.0 / std::numbers::sqrt2;
    if (q == 2 || q == -2) return 1.0;
    return 1.0 / std::sqrt(6.0);  // (nu, lambda) = (+-1, -+1)
}

template <typename Fill>
Eigen::MatrixXd symmetric_from_upper(std::size_t n, Fill&& fill) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = r; c < n; ++c) {
            const double v = fill(r, c);
            out(r, c) = v;
            out(c, r) = v;
        }
    }
    return out;
}

}  // namespace detail

// N^2 = (J - S)^2 in the case (a) basis (diagonal in J and M; couples Omega).
inline Eigen::MatrixXd build_n_squared(const SingleBasis& basis) {
    return detail::symmetric_from_upper(basis.size(), [&](std::size_t r, std::size_t c) {
        const BasisKet& b = basis.ket(r);
        const BasisKet& k = basis.ket(c);
        if (b.J != k.J || b.M != k.M) return 0.0;
        if (b.Omega == k.Omega)
            return b.J.j_squared() + BasisKet::S().j_squared() -
                   2.0 * k.Omega.value() * k.Sigma.value();
        if (b.Omega == k.Omega + kOne) return -2.0 * detail::js_ladder(k.J, k.Omega, k.Sigma, +1);
        if (b.Omega == k.Omega - kOne) return -2.0 * detail::js_ladder(k.J, k.Omega, k.Sigma, -1);
        return 0.0;
    });
}

// N.S = J.S - S^2 in the case (a) basis.
inline Eigen::MatrixXd build_n_dot_s(const SingleBasis& basis) {
    return detail::symmetric_from_upper(basis.size(), [&](std::size_t r, std::size_t c) {
        const BasisKet& b = basis.ket(r);
        const BasisKet& k = basis.ket(c);
        if (b.J != k.J || b.M != k.M) return 0.0;
        if (b.Omega == k.Omega)
            return k.Omega.value() * k.Sigma.value() - BasisKet::S().j_squared();
        if (b.Omega == k.Omega + kOne) return detail::js_ladder(k.J, k.Omega, k.Sigma, +1);
        if (b.Omega == k.Omega - kOne) return detail::js_ladder(k.J, k.Omega, k.Sigma, -1);
        return 0.0;
    });
}

// cos(theta) = D^1_{00}; couples Delta J = 0, +-1 with Delta M = Delta Sigma = 0.
inline Eigen::MatrixXd build_cos_theta(const SingleBasis& basis) {
    return detail::symmetric_from_upper(basis.size(), [&](std::size_t r, std::size_t c) {
        const BasisKet& b = basis.ket(r);
        const BasisKet& k = basis.ket(c);
        if (b.Sigma != k.Sigma) return 0.0;
        return angmom::d_matrix_element(b.J, b.M, b.Omega, 1, 0, 0, k.J, k.M, k.Omega);
    });
}

// Space-fixed S_Z decomposed over body-frame spin components,
//   S_Z = sum_q D^1_{0q} T^1_q(S),
// so Omega and Sigma shift together and the kets stay physical.
inline Eigen::MatrixXd build_sz(const SingleBasis& basis) {
    return detail::symmetric_from_upper(basis.size(), [&](std::size_t r, std::size_t c) {
        const BasisKet& b = basis.ket(r);
        const BasisKet& k = basis.ket(c);
        if (b.M != k.M) return 0.0;
        double total = 0.0;
        for (int q = -1; q <= 1; ++q) {
            const double spin = detail::spin_t1(q, k.Sigma, b.Sigma);
            if (spin == 0.0) continue;
            total += spin * angmom::d_matrix_element(b.J, b.M, b.Omega, 1, 0, q, k.J, k.M, k.Omega);
        }
        return total;
    });
}

// Rotational matrix of D^1_{-nu,0} for one molecule (identity on spin).
inline Eigen::MatrixXd build_dipole_component(const SingleBasis& basis, int nu) {
    const std::size_t n = basis.size();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const BasisKet& b = basis.ket(r);
            const BasisKet& k = basis.ket(c);
            if (b.Sigma != k.Sigma) continue;
            out(r, c) = angmom::d_matrix_element(b.J, b.M, b.Omega, 1, -nu, 0, k.J, k.M, k.Omega);
        }
    }
    return out;
}

// H/B = N^2 + (gamma/B) N.S - eta_el cos(theta) + eta_m S_Z.
inline Eigen::MatrixXd build_single_hamiltonian(const SingleBasis& basis, const MoleculeParams& p,
                                                double eta_el, double eta_m) {
    p.validate();
    Eigen::MatrixXd h = build_n_squared(basis);
    h += (p.gamma_cm1 / p.B_cm1) * build_n_dot_s(basis);
    if (eta_el != 0.0) h -= eta_el * build_cos_theta(basis);
    if (eta_m != 0.0) h += eta_m * build_sz(basis);
    return h;
}

// Electric dipole-dipole coupling per unit Xi in the pair basis:
//   V/Xi = -sqrt(6) sum_{nu,lambda} C(1,1,2;nu,lambda,nu+lambda)
//          D^1_{-nu,0}(mol 1) D^1_{-lambda,0}(mol 2) D^2_{nu+lambda,0}(n).
inline Eigen::MatrixXd build_vdd(const PairBasis& pair, double phi, double theta, double chi) {
    detail::require_z_aligned_azimuths(phi, chi);
    const SingleBasis& sb = pair.single();
    const std::size_t n = sb.size();

    std::array<Eigen::MatrixXd, 3> dip;  // index nu+1
    for (int nu = -1; nu <= 1; ++nu) dip[nu + 1] = build_dipole_component(sb, nu);

    double geom[5];  // index (nu+lambda)+2
    for (int q = -2; q <= 2; ++q)
        geom[q + 2] = angmom::small_d_m0(2, q, theta) * std::cos(q * phi);

    double coef[3][3];
    for (int nu = -1; nu <= 1; ++nu)
        for (int lambda = -1; lambda <= 1; ++lambda)
            coef[nu + 1][lambda + 1] =
                -std::sqrt(6.0) * detail::cg112(nu, lambda) * geom[nu + lambda + 2];

    return detail::symmetric_from_upper(n * n, [&](std::size_t r, std::size_t c) {
        const auto [i1, i2] = pair.unflatten(r);
        const auto [j1, j2] = pair.unflatten(c);
        double v = 0.0;
        for (int nu = -1; nu <= 1; ++nu) {
            const double a1 = dip[nu + 1](i1, j1);
            if (a1 == 0.0) continue;
            for (int lambda = -1; lambda <= 1; ++lambda) {
                const double b2 = dip[lambda + 1](i2, j2);
                if (b2 == 0.0) continue;
                v += coef[nu + 1][lambda + 1] * a1 * b2;
            }
        }
        return v;
    });
}

// H = H1 x I + I x H2 + Xi V_dd, in units of mol1.B.
inline Eigen::MatrixXd build_dimer_hamiltonian(const PairBasis& pair, const DimerConfig& cfg) {
    cfg.validate();
    const SingleBasis& sb = pair.single();
    const std::size_t n = sb.size();

    const Eigen::MatrixXd h1 = build_single_hamiltonian(sb, cfg.mol1, cfg.site1.eta_el, cfg.site1.eta_m);
    Eigen::MatrixXd h2 = build_single_hamiltonian(sb, cfg.mol2, cfg.site2.eta_el, cfg.site2.eta_m);
    h2 *= cfg.mol2.B_cm1 / cfg.mol1.B_cm1;

    Eigen::MatrixXd out;
    if (cfg.xi_over_b != 0.0)
        out = cfg.xi_over_b * build_vdd(pair, cfg.phi, cfg.theta, cfg.chi);
    else
        out = Eigen::MatrixXd::Zero(n * n, n * n);

    for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t j1 = 0; j1 < n; ++j1) {
            const double v = h1(i1, j1);
            if (v == 0.0) continue;
            for (std::size_t i2 = 0; i2 < n; ++i2) out(pair.flat_index(i1, i2), pair.flat_index(j1, i2)) += v;
        }
    for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t j2 = 0; j2 < n; ++j2) {
            const double v = h2(i2, j2);
            if (v == 0.0) continue;
            for (std::size_t i1 = 0; i1 < n; ++i1) out(pair.flat_index(i1, i2), pair.flat_index(i1, j2)) += v;
        }
    return out;
}

// ---------------------------------------------------------------------------
// Decoupled-basis oracle |N m_N> x |S m_S>. The same physical Hamiltonian
// assembled along an independent route: N^2 and S_Z diagonal, N.S by standard
// ladders, rotational tensors via closed-form l = 1 spherical-harmonic
// (Gaunt) elements. Used for convergence cross-checks only.
// ---------------------------------------------------------------------------

namespace detail {

// <N' m'| C^1_q |N m> with Condon-Shortley phases, closed form.
inline double gaunt_c1(int Np, int mp, int q, int N, int m) {
    if (mp != m + q) return 0.0;
    if (Np == N + 1) {
        const double den = (2.0 * N + 1.0) * (2.0 * N + 3.0);
        switch (q) {
            case 0: return std::sqrt(((N + 1.0) * (N + 1.0) - m * m) / den);
            case 1: return -std::sqrt((N + m + 1.0) * (N + m + 2.0) / (2.0 * den));
            case -1: return std::sqrt((N - m + 1.0) * (N - m + 2.0) / (2.0 * den));
            default: return 0.0;
        }
    }
    if (Np == N - 1) {
        // Hermitian conjugate: C^1_q^dag = (-1)^q C^1_{-q}.
        const double sign = (q == 0) ? 1.0 : -1.0;
        return sign * gaunt_c1(N, m, -q, Np, mp);
    }
    return 0.0;
}

// Operator D^1_{q,0} = (-1)^q C^1_{-q} on integer-N rotor states.
inline double rotor_d1(int Np, int mp, int q, int N, int m) {
    const double sign = (q == 0) ? 1.0 : -1.0;
    return sign * gaunt_c1(Np, mp, -q, N, m);
}

}  // namespace detail

inline Eigen::MatrixXd build_decoupled_single(const DecoupledBasis& basis, const MoleculeParams& p,
                                              double eta_el, double eta_m) {
    p.validate();
    const double gr = p.gamma_cm1 / p.B_cm1;
    return detail::symmetric_from_upper(basis.size(), [&](std::size_t r, std::size_t c) {
        const DecoupledKet& b = basis.ket(r);
        const DecoupledKet& k = basis.ket(c);
        double v = 0.0;
        if (r == c) v += k.N * (k.N + 1.0) + eta_m * k.mS.value();
        if (b.N == k.N) {
            if (b.mN == k.mN && b.mS == k.mS) v += gr * k.mN * k.mS.value();
            // (1/2)(N+ S- + N- S+)
            if (b.mN == k.mN + 1 && b.mS == k.mS - kOne)
                v += 0.5 * gr * std::sqrt(k.N * (k.N + 1.0) - k.mN * (k.mN + 1.0));
            if (b.mN == k.mN - 1 && b.mS == k.mS + kOne)
                v += 0.5 * gr * std::sqrt(k.N * (k.N + 1.0) - k.mN * (k.mN - 1.0));
        }
        if (eta_el != 0.0 && b.mS == k.mS && b.mN == k.mN)
            v -= eta_el * detail::gaunt_c1(b.N, b.mN, 0, k.N, k.mN);
        return v;
    });
}

struct DecoupledPair {
    const DecoupledBasis& basis;
    std::size_t flat(std::size_t i1, std::size_t i2) const { return i1 * basis.size() + i2; }
    std::size_t size() const { return basis.size() * basis.size(); }
};

inline Eigen::MatrixXd build_decoupled_vdd(const DecoupledBasis& basis, double phi, double theta,
                                           double chi) {
    detail::require_z_aligned_azimuths(phi, chi);
    const std::size_t n = basis.size();
    DecoupledPair pair{basis};

    std::array<Eigen::MatrixXd, 3> dip;
    for (int nu = -1; nu <= 1; ++nu) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                const DecoupledKet& b = basis.ket(r);
                const DecoupledKet& k = basis.ket(c);
                if (b.mS != k.mS) continue;
                a(r, c) = detail::rotor_d1(b.N, b.mN, -nu, k.N, k.mN);
            }
        dip[nu + 1] = a;
    }

    double geom[5];
    for (int q = -2; q <= 2; ++q)
        geom[q + 2] = angmom::small_d_m0(2, q, theta) * std::cos(q * phi);

    double coef[3][3];
    for (int nu = -1; nu <= 1; ++nu)
        for (int lambda = -1; lambda <= 1; ++lambda)
            coef[nu + 1][lambda + 1] =
                -std::sqrt(6.0) * detail::cg112(nu, lambda) * geom[nu + lambda + 2];

    return detail::symmetric_from_upper(pair.size(), [&](std::size_t r, std::size_t c) {
        const std::size_t i1 = r / n, i2 = r % n;
        const std::size_t j1 = c / n, j2 = c % n;
        double v = 0.0;
        for (int nu = -1; nu <= 1; ++nu) {
            const double a1 = dip[nu + 1](i1, j1);
            if (a1 == 0.0) continue;
            for (int lambda = -1; lambda <= 1; ++lambda) {
                const double b2 = dip[lambda + 1](i2, j2);
                if (b2 == 0.0) continue;
                v += coef[nu + 1][lambda + 1] * a1 * b2;
            }
        }
        return v;
    });
}

inline Eigen::MatrixXd build_decoupled_dimer(const DecoupledBasis& basis, const DimerConfig& cfg) {
    cfg.validate();
    const std::size_t n = basis.size();
    DecoupledPair pair{basis};

    const Eigen::MatrixXd h1 =
        build_decoupled_single(basis, cfg.mol1, cfg.site1.eta_el, cfg.site1.eta_m);
    Eigen::MatrixXd h2 = build_decoupled_single(basis, cfg.mol2, cfg.site2.eta_el, cfg.site2.eta_m);
    h2 *= cfg.mol2.B_cm1 / cfg.mol1.B_cm1;

    Eigen::MatrixXd out;
    if (cfg.xi_over_b != 0.0)
        out = cfg.xi_over_b * build_decoupled_vdd(basis, cfg.phi, cfg.theta, cfg.chi);
    else
        out = Eigen::MatrixXd::Zero(pair.size(), pair.size());

    for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t j1 = 0; j1 < n; ++j1) {
            const double v = h1(i1, j1);
            if (v == 0.0) continue;
            for (std::size_t i2 = 0; i2 < n; ++i2) out(pair.flat(i1, i2), pair.flat(j1, i2)) += v;
        }
    for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t j2 = 0; j2 < n; ++j2) {
            const double v = h2(i2, j2);
            if (v == 0.0) continue;
            for (std::size_t i1 = 0; i1 < n; ++i1) out(pair.flat(i1, i2), pair.flat(i1, j2)) += v;
        }
    return out;
}

}  // namespace qdimer::ham

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "qdimer/basis.hpp"
#include "qdimer/hamiltonian.hpp"
#include "qdimer/spectra.hpp"

namespace qdimer::qubits {

// |0> and |1>: the single-molecule eigenstates adiabatically connected to the
// field-free (N=0, J=1/2, M=-+1/2) pair, solved at the site fields.
struct QubitPair {
    Eigen::VectorXd q0, q1;  // M = -1/2 and M = +1/2 character
    double e0 = 0.0, e1 = 0.0;  // units of B
    FieldPoint fields;
};

// Identifies the qubit pair by N-character (<N^2> ~ 0) and the sign of <M>.
// Throws when the N=0 labels are no longer clean (crossing with the N=1
// manifold under strong electric fields).
inline QubitPair single_qubit_states(const SingleBasis& basis, const MoleculeParams& params,
                                     const FieldPoint& fields) {
    const Eigen::MatrixXd h =
        ham::build_single_hamiltonian(basis, params, fields.eta_el, fields.eta_m);
    const Eigen::MatrixXd n2 = ham::build_n_squared(basis);
    const spectra::EigenSolution sol = spectra::diagonalize(h);

    Eigen::VectorXd mdiag(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) mdiag(i) = basis.ket(i).M.value();

    int i0 = -1, i1 = -1;
    for (int c = 0; c < sol.eigenvectors.cols() && (i0 < 0 || i1 < 0); ++c) {
        const Eigen::VectorXd v = sol.eigenvectors.col(c);
        if (v.dot(n2 * v) > 0.5) continue;
        const double m = v.cwiseAbs2().dot(mdiag);
        if (m < 0.0 && i0 < 0) i0 = c;
        if (m > 0.0 && i1 < 0) i1 = c;
        if (std::abs(m) < 0.25) {
            // Degenerate pair (zero field): rotate the 2x2 subspace to M
            // eigenvectors.
            if (c + 1 >= sol.eigenvectors.cols()) break;
            Eigen::MatrixXd sub(basis.size(), 2);
            sub.col(0) = v;
            sub.col(1) = sol.eigenvectors.col(c + 1);
            Eigen::Matrix2d msub;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    msub(a, b) = sub.col(a).dot(mdiag.asDiagonal() * sub.col(b));
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> ms(msub);
            QubitPair out;
            out.q0 = sub * ms.eigenvectors().col(0);  // lower <M>
            out.q1 = sub * ms.eigenvectors().col(1);
            out.e0 = sol.eigenvalues(c);
            out.e1 = sol.eigenvalues(c + 1);
            out.fields = fields;
            return out;
        }
    }
    if (i0 < 0 || i1 < 0)
        throw std::runtime_error(
            "single_qubit_states: adiabatic (N~=0, J~=1/2) labels lost; fields too strong");

    QubitPair out;
    out.q0 = sol.eigenvectors.col(i0);
    out.q1 = sol.eigenvectors.col(i1);
    out.e0 = sol.eigenvalues(i0);
    out.e1 = sol.eigenvalues(i1);
    out.fields = fields;
    return out;
}

// Columns |00>, |01>, |10>, |11> of the computational subspace embedded in the
// pair basis.
inline Eigen::MatrixXd computational_projector(const PairBasis& pair, const QubitPair& m1,
                                               const QubitPair& m2) {
    const std::size_t n = pair.single().size();
    Eigen::MatrixXd p(n * n, 4);
    const std::array<const Eigen::VectorXd*, 2> a{&m1.q0, &m1.q1};
    const std::array<const Eigen::VectorXd*, 2> b{&m2.q0, &m2.q1};
    for (int qa = 0; qa < 2; ++qa)
        for (int qb = 0; qb < 2; ++qb) {
            const int col = 2 * qa + qb;
            for (std::size_t i1 = 0; i1 < n; ++i1)
                for (std::size_t i2 = 0; i2 < n; ++i2)
                    p(pair.flat_index(i1, i2), col) = (*a[qa])(i1) * (*b[qb])(i2);
        }
    return p;
}

// 4x4 effective Hamiltonian <q_a q_b| H |q_c q_d> by direct projection.
inline Eigen::Matrix4d effective_hamiltonian_4x4(const Eigen::MatrixXd& h_dimer,
                                                 const Eigen::MatrixXd& projector) {
    if (h_dimer.rows() != projector.rows())
        throw std::invalid_argument("effective_hamiltonian_4x4: dimension mismatch");
    Eigen::Matrix4d out = projector.transpose() * h_dimer * projector;
    return 0.5 * (out + out.transpose());
}

// Amplitudes of a dimer eigenvector over {|00>,|01>,|10>,|11>}, with the
// subspace leakage 1 - |P^T v|^2.
struct EffectiveQubitState {
    Eigen::Vector4d amps = Eigen::Vector4d::Zero();
    double energy = 0.0;
    double leakage = 0.0;
};

inline EffectiveQubitState qubit_amplitudes(const Eigen::VectorXd& v, double energy,
                                            const Eigen::MatrixXd& projector) {
    EffectiveQubitState out;
    Eigen::Vector4d raw = projector.transpose() * v;
    const double norm2 = raw.squaredNorm();
    out.leakage = 1.0 - norm2;
    if (norm2 > 0.0) raw /= std::sqrt(norm2);
    // Deterministic sign: largest-magnitude amplitude positive.
    int imax = 0;
    raw.cwiseAbs().maxCoeff(&imax);
    if (raw(imax) < 0.0) raw = -raw;
    out.amps = raw;
    out.energy = energy;
    return out;
}

namespace detail {

inline void require_normalized(const Eigen::Vector4d& amps) {
    if (std::abs(amps.squaredNorm() - 1.0) > 1e-9)
        throw std::domain_error("concurrence: amplitudes not normalized");
}

inline Eigen::Matrix4d sigma_y_sigma_y() {
    Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
    s(0, 3) = -1.0;
    s(1, 2) = 1.0;
    s(2, 1) = 1.0;
    s(3, 0) = -1.0;
    return s;
}

}  // namespace detail

// Wootters concurrence of a pure two-qubit state with real amplitudes, via
// the eigenvalues of rho * rho~ with rho~ = (sy x sy) rho* (sy x sy).
inline double concurrence(const Eigen::Vector4d& amps) {
    detail::require_normalized(amps);
    const Eigen::Matrix4d rho = amps * amps.transpose();
    const Eigen::Matrix4d s = detail::sigma_y_sigma_y();
    const Eigen::Matrix4d rho_tilde = s * rho * s;
    const Eigen::Matrix4d m = rho * rho_tilde;

    Eigen::EigenSolver<Eigen::Matrix4d> solver(m);
    std::array<double, 4> lambda{};
    for (int i = 0; i < 4; ++i) lambda[i] = std::max(0.0, solver.eigenvalues()(i).real());
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    const double c = std::sqrt(lambda[0]) - std::sqrt(lambda[1]) - std::sqrt(lambda[2]) -
                     std::sqrt(lambda[3]);
    return std::max(0.0, c);
}

// Same quantity through the spin-flipped state built by basis relabeling
// (|00><->|11|, |01><->|10>) with the sigma_y phases carried along.
inline double concurrence_spin_flip_route(const Eigen::Vector4d& amps) {
    detail::require_normalized(amps);
    Eigen::Vector4d flipped;
    flipped << -amps(3), amps(2), amps(1), -amps(0);
    const Eigen::Matrix4d rho = amps * amps.transpose();
    const Eigen::Matrix4d rho_tilde = flipped * flipped.transpose();
    Eigen::EigenSolver<Eigen::Matrix4d> solver(rho * rho_tilde);
    std::array<double, 4> lambda{};
    for (int i = 0; i < 4; ++i) lambda[i] = std::max(0.0, solver.eigenvalues()(i).real());
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    return std::max(0.0, std::sqrt(lambda[0]) - std::sqrt(lambda[1]) - std::sqrt(lambda[2]) -
                             std::sqrt(lambda[3]));
}

// Closed form for real pure states.
inline double concurrence_analytic(const Eigen::Vector4d& amps) {
    detail::require_normalized(amps);
    return std::max(0.0, 2.0 * std::abs(amps(1) * amps(2) - amps(0) * amps(3)));
}

// Seed vectors for tracking the computational family: the four eigenstates of
// maximal overlap with |00>, |01>, |10>, |11> (in that column order), plus
// every other eigenstate within partner_window_b of any of them. Beyond weak
// fields the computational states are interleaved with unrelated levels, so
// sweeps that extract gap structure must follow this family rather than the
// lowest eigenvalues.
struct ComputationalSeed {
    Eigen::MatrixXd vectors;        // n x (4 + partners)
    std::vector<double> energies;   // units of B, aligned with columns
    int partners = 0;
};

inline ComputationalSeed make_computational_seed(const PairBasis& pair,
                                                 const Eigen::MatrixXd& h_dimer,
                                                 const QubitPair& m1, const QubitPair& m2,
                                                 double partner_window_b = 0.12) {
    const spectra::EigenSolution sol = spectra::diagonalize(h_dimer);
    const Eigen::MatrixXd p = computational_projector(pair, m1, m2);
    const Eigen::MatrixXd overlap = p.transpose() * sol.eigenvectors;  // 4 x n

    std::array<int, 4> fan{};
    for (int label = 0; label < 4; ++label) {
        int best = 0;
        overlap.row(label).cwiseAbs().maxCoeff(&best);
        if (std::abs(overlap(label, best)) < 0.95)
            throw std::runtime_error(
                "make_computational_seed: computational characters not clean at seed point");
        fan[static_cast<std::size_t>(label)] = best;
    }

    std::vector<int> partner_cols;
    for (int c = 0; c < sol.eigenvalues.size(); ++c) {
        if (std::find(fan.begin(), fan.end(), c) != fan.end()) continue;
        for (int f : fan) {
            if (std::abs(sol.eigenvalues(c) - sol.eigenvalues(f)) < partner_window_b) {
                partner_cols.push_back(c);
                break;
            }
        }
    }

    ComputationalSeed seed;
    seed.partners = static_cast<int>(partner_cols.size());
    seed.vectors.resize(sol.eigenvectors.rows(), 4 + seed.partners);
    for (int label = 0; label < 4; ++label) {
        seed.vectors.col(label) = sol.eigenvectors.col(fan[static_cast<std::size_t>(label)]);
        seed.energies.push_back(sol.eigenvalues(fan[static_cast<std::size_t>(label)]));
    }
    for (int i = 0; i < seed.partners; ++i) {
        seed.vectors.col(4 + i) = sol.eigenvectors.col(partner_cols[static_cast<std::size_t>(i)]);
        seed.energies.push_back(sol.eigenvalues(partner_cols[static_cast<std::size_t>(i)]));
    }
    return seed;
}

// Concurrence of the four lowest adiabatic states along a tracked sweep; the
// qubit basis is re-solved at each point's site fields.
struct ConcurrencePoint {
    double eta_m = 0.0;
    std::array<double, 4> energy{};       // ascending, units of B
    std::array<double, 4> concurrence{};  // aligned with energies
    std::array<EffectiveQubitState, 4> states{};
};

template <typename FieldsOfEta>
std::vector<ConcurrencePoint> concurrence_profile(const spectra::TrackedSpectrum& tracked,
                                                  const PairBasis& pair,
                                                  const MoleculeParams& mol1,
                                                  const MoleculeParams& mol2,
                                                  FieldsOfEta&& fields_of_eta) {
    std::vector<ConcurrencePoint> out;
    out.reserve(tracked.points());
    for (std::size_t t = 0; t < tracked.points(); ++t) {
        const auto [f1, f2] = fields_of_eta(tracked.grid[t]);
        const QubitPair m1 = single_qubit_states(pair.single(), mol1, f1);
        const QubitPair m2 = single_qubit_states(pair.single(), mol2, f2);
        const Eigen::MatrixXd p = computational_projector(pair, m1, m2);

        ConcurrencePoint pt;
        pt.eta_m = tracked.grid[t];
        const auto order = tracked.adiabatic_order(t);
        for (int k = 0; k < 4; ++k) {
            const int col = order[static_cast<std::size_t>(k)];
            pt.energy[k] = tracked.energies(t, col);
            pt.states[k] = qubit_amplitudes(tracked.vectors[t].col(col), pt.energy[k], p);
            pt.concurrence[k] = concurrence(pt.states[k].amps);
        }
        out.push_back(pt);
    }
    return out;
}

}  // namespace qdimer::qubits

#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdimer/half_int.hpp"

namespace qdimer {

// One Hund's case (a) ket |J, Omega, M, S, Sigma> of a 2-Sigma molecule.
// Lambda = 0 forces Omega = Sigma = +-1/2; S is fixed at 1/2.
struct BasisKet {
    HalfInt J;
    HalfInt Omega;
    HalfInt M;
    HalfInt Sigma;

    static constexpr HalfInt S() { return kHalf; }

    bool operator==(const BasisKet&) const = default;
};

// Deterministically ordered single-molecule basis: ascending J, then Omega,
// then M. The ordering is part of the file-format contract; eigenvector CSV
// columns reference it.
class SingleBasis {
public:
    explicit SingleBasis(HalfInt j_max) : j_max_(j_max) {
        if (j_max.is_integer() || j_max.twice() < 1)
            throw std::domain_error(
                "SingleBasis: J_max must be a positive half-integer (2-Sigma molecule)");
        for (HalfInt j = kHalf; j <= j_max; j = j + kOne) {
            for (int om = -1; om <= 1; om += 2) {
                const HalfInt omega = HalfInt::from_twice(om);
                for (HalfInt m = -j; m <= j; m = next(m)) {
                    kets_.push_back(BasisKet{j, omega, m, omega});
                }
            }
        }
    }

    HalfInt j_max() const { return j_max_; }
    std::size_t size() const { return kets_.size(); }
    const BasisKet& ket(std::size_t i) const { return kets_[i]; }
    const std::vector<BasisKet>& kets() const { return kets_; }

    // CSV manifest: index, 2J, 2Omega, 2M, 2Sigma.
    std::string manifest_csv() const {
        std::ostringstream out;
        out << "index,twoJ,twoOmega,twoM,twoSigma\n";
        for (std::size_t i = 0; i < kets_.size(); ++i) {
            const auto& k = kets_[i];
            out << i << ',' << k.J.twice() << ',' << k.Omega.twice() << ',' << k.M.twice()
                << ',' << k.Sigma.twice() << '\n';
        }
        return out.str();
    }

private:
    HalfInt j_max_;
    std::vector<BasisKet> kets_;
};

// Ordered tensor-product basis of the two-molecule system. Flat index is
// i1 * n_single + i2.
class PairBasis {
public:
    explicit PairBasis(HalfInt j_max) : single_(j_max) {}

    const SingleBasis& single() const { return single_; }
    std::size_t size() const { return single_.size() * single_.size(); }

    std::size_t flat_index(std::size_t i1, std::size_t i2) const {
        return i1 * single_.size() + i2;
    }
    std::pair<std::size_t, std::size_t> unflatten(std::size_t flat) const {
        return {flat / single_.size(), flat % single_.size()};
    }

private:
    SingleBasis single_;
};

// Decoupled basis |N m_N> x |S m_S> with integer N <= N_max. Spans a slightly
// different truncated subspace than the case (a) set; used for convergence
// cross-checks only, never for regression numbers.
struct DecoupledKet {
    int N;
    int mN;
    HalfInt mS;

    bool operator==(const DecoupledKet&) const = default;
};

class DecoupledBasis {
public:
    explicit DecoupledBasis(int n_max) : n_max_(n_max) {
        if (n_max < 0) throw std::domain_error("DecoupledBasis: N_max must be >= 0");
        for (int n = 0; n <= n_max; ++n)
            for (int m = -n; m <= n; ++m)
                for (int ms = -1; ms <= 1; ms += 2)
                    kets_.push_back(DecoupledKet{n, m, HalfInt::from_twice(ms)});
    }

    int n_max() const { return n_max_; }
    std::size_t size() const { return kets_.size(); }
    const DecoupledKet& ket(std::size_t i) const { return kets_[i]; }

private:
    int n_max_;
    std::vector<DecoupledKet> kets_;
};

}  // namespace qdimer

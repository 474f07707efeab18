#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "qdimer/half_int.hpp"

namespace qdimer::angmom {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

namespace detail {

inline cpp_int factorial_exact(int n) {
    cpp_int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline void require_valid_jm(HalfInt j, HalfInt m, const char* who) {
    if (j.twice() < 0)
        throw std::domain_error(std::string(who) + ": negative angular momentum j=" + j.str());
    if (!j.same_parity(m))
        throw std::domain_error(std::string(who) + ": m=" + m.str() +
                                " not in the ladder of j=" + j.str());
    if (m.abs() > j)
        throw std::domain_error(std::string(who) + ": |m|=" + m.abs().str() + " exceeds j=" + j.str());
}

inline bool triangle_ok(HalfInt j1, HalfInt j2, HalfInt j3) {
    // j3 in {|j1-j2|, ..., j1+j2} with integer perimeter.
    if ((j1.twice() + j2.twice() + j3.twice()) % 2 != 0) return false;
    return j3 >= (j1 - j2).abs() && j3 <= j1 + j2;
}

// Packs six twice-values (each within +-127) into a cache key.
inline uint64_t pack_key(int a, int b, int c, int d, int e, int f) {
    auto enc = [](int v) -> uint64_t { return static_cast<uint64_t>(v + 128) & 0xff; };
    return enc(a) | enc(b) << 8 | enc(c) << 16 | enc(d) << 24 | enc(e) << 32 | enc(f) << 40;
}

struct ThreeJCache {
    std::unordered_map<uint64_t, double> map;
    std::shared_mutex mutex;

    static ThreeJCache& instance() {
        static ThreeJCache cache;
        return cache;
    }
};

// Racah single-sum formula with exact rational accumulation; one square root
// at the end. The cancellation-prone alternating sum is done in integers.
inline double wigner3j_exact(HalfInt j1, HalfInt j2, HalfInt j3,
                             HalfInt m1, HalfInt m2, HalfInt m3) {
    // All of these combinations are integers whenever the triangle rule and
    // m-ladders hold (twice-values validated upstream).
    const int a1 = (j1.twice() + j2.twice() - j3.twice()) / 2;
    const int a2 = (j1.twice() - j2.twice() + j3.twice()) / 2;
    const int a3 = (-j1.twice() + j2.twice() + j3.twice()) / 2;
    const int perim1 = (j1.twice() + j2.twice() + j3.twice()) / 2 + 1;

    const int j1m = (j1.twice() - m1.twice()) / 2, j1p = (j1.twice() + m1.twice()) / 2;
    const int j2m = (j2.twice() - m2.twice()) / 2, j2p = (j2.twice() + m2.twice()) / 2;
    const int j3m = (j3.twice() - m3.twice()) / 2, j3p = (j3.twice() + m3.twice()) / 2;

    const int b1 = (j3.twice() - j2.twice() + m1.twice()) / 2;  // j3-j2+m1
    const int b2 = (j3.twice() - j1.twice() - m2.twice()) / 2;  // j3-j1-m2

    const int kmin = std::max({0, -b1, -b2});
    const int kmax = std::min({a1, j1m, j2p});
    if (kmin > kmax) return 0.0;

    cpp_rational sum = 0;
    for (int k = kmin; k <= kmax; ++k) {
        cpp_int den = factorial_exact(k) * factorial_exact(a1 - k) * factorial_exact(j1m - k) *
                      factorial_exact(j2p - k) * factorial_exact(b1 + k) * factorial_exact(b2 + k);
        cpp_rational term(1, den);
        if (k % 2 != 0) term = -term;
        sum += term;
    }
    if (sum == 0) return 0.0;

    cpp_rational prefactor(factorial_exact(a1) * factorial_exact(a2) * factorial_exact(a3),
                           factorial_exact(perim1));
    prefactor *= cpp_rational(factorial_exact(j1p) * factorial_exact(j1m) * factorial_exact(j2p) *
                                  factorial_exact(j2m) * factorial_exact(j3p) * factorial_exact(j3m),
                              1);

    const cpp_rational square = prefactor * sum * sum;
    double value = std::sqrt(static_cast<double>(square));
    if (sum < 0) value = -value;

    // Phase (-1)^(j1-j2-m3); the exponent is an integer for valid inputs.
    const int phase = (j1.twice() - j2.twice() - m3.twice()) / 2;
    if (phase % 2 != 0) value = -value;
    return value;
}

}  // namespace detail

// Wigner 3-j symbol (j1 j2 j3; m1 m2 m3), half-integer capable.
// Returns exactly 0 when m1+m2+m3 != 0 or the triangle rule fails.
inline double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3,
                       HalfInt m1, HalfInt m2, HalfInt m3) {
    detail::require_valid_jm(j1, m1, "wigner3j");
    detail::require_valid_jm(j2, m2, "wigner3j");
    detail::require_valid_jm(j3, m3, "wigner3j");
    if ((m1 + m2 + m3).twice() != 0) return 0.0;
    if (!detail::triangle_ok(j1, j2, j3)) return 0.0;

    const uint64_t key = detail::pack_key(j1.twice(), j2.twice(), j3.twice(),
                                          m1.twice(), m2.twice(), m3.twice());
    auto& cache = detail::ThreeJCache::instance();
    {
        std::shared_lock lock(cache.mutex);
        auto it = cache.map.find(key);
        if (it != cache.map.end()) return it->second;
    }
    const double value = detail::wigner3j_exact(j1, j2, j3, m1, m2, m3);
    {
        std::unique_lock lock(cache.mutex);
        cache.map.emplace(key, value);
    }
    return value;
}

// Clebsch-Gordan coefficient C(j1 j2 j3; m1 m2 m3) = <j1 m1 j2 m2 | j3 m3>.
inline double clebsch_gordan(HalfInt j1, HalfInt j2, HalfInt j3,
                             HalfInt m1, HalfInt m2, HalfInt m3) {
    detail::require_valid_jm(j1, m1, "clebsch_gordan");
    detail::require_valid_jm(j2, m2, "clebsch_gordan");
    detail::require_valid_jm(j3, m3, "clebsch_gordan");
    if ((m1 + m2 - m3).twice() != 0) return 0.0;
    if (!detail::triangle_ok(j1, j2, j3)) return 0.0;

    const double threej = wigner3j(j1, j2, j3, m1, m2, -m3);
    if (threej == 0.0) return 0.0;
    const int phase = (j1.twice() - j2.twice() + m3.twice()) / 2;
    const double sign = (phase % 2 == 0) ? 1.0 : -1.0;
    return sign * std::sqrt(static_cast<double>(j3.twice() + 1)) * threej;
}

// Symmetric-top matrix element of a Wigner function,
//   <J' M' K' | D^l_{m,k} | J M K>
//     = sqrt((2J+1)/(2J'+1)) C(J l J'; M m M') C(J l J'; K k K'),
// for normalized |J M K> with wavefunction sqrt((2J+1)/8pi^2) D^{J*}_{MK}.
// Zero unless M' = M+m and K' = K+k.
inline double d_matrix_element(HalfInt Jp, HalfInt Mp, HalfInt Kp,
                               int l, int m, int k,
                               HalfInt J, HalfInt M, HalfInt K) {
    detail::require_valid_jm(Jp, Mp, "d_matrix_element");
    detail::require_valid_jm(Jp, Kp, "d_matrix_element");
    detail::require_valid_jm(J, M, "d_matrix_element");
    detail::require_valid_jm(J, K, "d_matrix_element");
    if (l < 0) throw std::domain_error("d_matrix_element: rank l must be >= 0");

    const HalfInt lh(l), mh(m), kh(k);
    if ((M + mh).twice() != Mp.twice()) return 0.0;
    if ((K + kh).twice() != Kp.twice()) return 0.0;
    if (!detail::triangle_ok(J, lh, Jp)) return 0.0;

    const double norm = std::sqrt(static_cast<double>(J.twice() + 1) /
                                  static_cast<double>(Jp.twice() + 1));
    return norm * clebsch_gordan(J, lh, Jp, M, mh, Mp) * clebsch_gordan(J, lh, Jp, K, kh, Kp);
}

// Reduced d-matrix d^l_{m,0}(beta) for l = 2 geometry factors and l = 1 ladders.
inline double small_d_m0(int l, int m, double beta) {
    const double c = std::cos(beta), s = std::sin(beta);
    if (l == 0) return (m == 0) ? 1.0 : 0.0;
    if (l == 1) {
        switch (m) {
            case 0: return c;
            case 1: return -s / std::sqrt(2.0);
            case -1: return s / std::sqrt(2.0);
            default: return 0.0;
        }
    }
    if (l == 2) {
        switch (m) {
            case 0: return 0.5 * (3.0 * c * c - 1.0);
            case 1: return -std::sqrt(1.5) * s * c;
            case -1: return std::sqrt(1.5) * s * c;
            case 2: return std::sqrt(3.0 / 8.0) * s * s;
            case -2: return std::sqrt(3.0 / 8.0) * s * s;
            default: return 0.0;
        }
    }
    throw std::domain_error("small_d_m0: rank not implemented");
}

}  // namespace qdimer::angmom

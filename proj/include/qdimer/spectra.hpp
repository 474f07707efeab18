#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#ifdef QDIMER_HAVE_LAPACKE
#include <lapacke.h>
#endif

#include "qdimer/parallel.hpp"
#include "qdimer/units.hpp"

namespace qdimer::spectra {

struct EigenSolution {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // columns aligned with eigenvalues
};

namespace detail {

// Deterministic sign: largest-magnitude component of each column positive
// (first index attaining the maximum decides).
inline void canonicalize_signs(Eigen::MatrixXd& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index imax = 0;
        double best = std::abs(vectors(0, c));
        for (Eigen::Index r = 1; r < vectors.rows(); ++r) {
            const double a = std::abs(vectors(r, c));
            if (a > best) {
                best = a;
                imax = r;
            }
        }
        if (vectors(imax, c) < 0.0) vectors.col(c) = -vectors.col(c);
    }
}

}  // namespace detail

// Full spectrum of a dense real symmetric matrix, ascending eigenvalues.
inline EigenSolution diagonalize(const Eigen::MatrixXd& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("diagonalize: matrix not square");
    if (!h.allFinite()) throw std::invalid_argument("diagonalize: non-finite entries");

    EigenSolution sol;
#ifdef QDIMER_HAVE_LAPACKE
    const lapack_int n = static_cast<lapack_int>(h.rows());
    sol.eigenvectors = h;
    sol.eigenvalues.resize(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                           sol.eigenvectors.data(), n, sol.eigenvalues.data());
    if (info != 0)
#endif
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("diagonalize: eigensolver failed to converge");
        sol.eigenvalues = solver.eigenvalues();
        sol.eigenvectors = solver.eigenvectors();
    }
    detail::canonicalize_signs(sol.eigenvectors);
    return sol;
}

using MatrixBuilder = std::function<Eigen::MatrixXd(double)>;

struct TrackingError : std::runtime_error {
    double grid_lo, grid_hi, best_overlap;
    TrackingError(double lo, double hi, double overlap)
        : std::runtime_error("sweep_track: grid too coarse in [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "] (best overlap " + std::to_string(overlap) +
                             "); refine the grid"),
          grid_lo(lo), grid_hi(hi), best_overlap(overlap) {}
};

enum class SeedSelection { LowestK };

struct SweepOptions {
    double overlap_floor = 0.5;
    unsigned workers = 1;
    // Seed vectors override SeedSelection::LowestK when provided: tracks start
    // from the eigenstates of the first grid point with maximal overlap.
    std::optional<Eigen::MatrixXd> seed_vectors;
};

// Eigenvalue/eigenvector curves over a field sweep with state identity
// threaded by greedy maximal-overlap matching (diabatic continuation).
struct TrackedSpectrum {
    std::vector<double> grid;              // sweep parameter values
    Eigen::MatrixXd energies;              // grid.size() x K
    std::vector<Eigen::MatrixXd> vectors;  // per point, n x K, sign-continuous
    Eigen::MatrixXi eigen_index;           // grid.size() x K
    double min_overlap = 1.0;

    std::size_t points() const { return grid.size(); }
    int tracks() const { return static_cast<int>(energies.cols()); }

    std::size_t index_of(double value) const {
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (std::abs(grid[i] - value) <= 1e-12 * std::max(1.0, std::abs(value))) return i;
        throw std::invalid_argument("TrackedSpectrum: value not on grid");
    }

    // Adiabatic view: indices of the tracked columns sorted by energy at one
    // grid point. Under the exact adiabatic theorem a ramp carries population
    // along these sorted branches.
    std::vector<int> adiabatic_order(std::size_t point) const {
        std::vector<int> idx(tracks());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
            return energies(static_cast<Eigen::Index>(point), a) <
                   energies(static_cast<Eigen::Index>(point), b);
        });
        return idx;
    }
};

namespace detail {

// Greedy max-|overlap| assignment of K previous tracks onto new eigenvectors.
// Returns the chosen eigenvector index per track and the worst matched
// overlap magnitude.
inline std::pair<std::vector<int>, double> match_tracks(const Eigen::MatrixXd& prev_tracked,
                                                        const Eigen::MatrixXd& new_vectors) {
    const int k = static_cast<int>(prev_tracked.cols());
    const int n = static_cast<int>(new_vectors.cols());
    Eigen::MatrixXd overlap = prev_tracked.transpose() * new_vectors;  // k x n

    struct Entry {
        double mag;
        int track, col;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(k) * n);
    for (int t = 0; t < k; ++t)
        for (int c = 0; c < n; ++c) entries.push_back({std::abs(overlap(t, c)), t, c});
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.mag != b.mag) return a.mag > b.mag;
        if (a.track != b.track) return a.track < b.track;
        return a.col < b.col;
    });

    std::vector<int> assignment(k, -1);
    std::vector<char> col_used(n, 0);
    int assigned = 0;
    double worst = 1.0;
    for (const Entry& e : entries) {
        if (assignment[e.track] >= 0 || col_used[e.col]) continue;
        assignment[e.track] = e.col;
        col_used[e.col] = 1;
        worst = std::min(worst, e.mag);
        if (++assigned == k) break;
    }
    return {assignment, worst};
}

}  // namespace detail

// Tracks K states along a monotone grid. Diagonalizations of distinct grid
// points run as a parallel map; the identity-threading fold is sequential in
// grid order, so results are identical for any worker count.
inline TrackedSpectrum sweep_track(const std::vector<double>& grid, const MatrixBuilder& builder,
                                   int k, SeedSelection seed = SeedSelection::LowestK,
                                   const SweepOptions& opts = {}) {
    if (grid.empty()) throw std::invalid_argument("sweep_track: empty grid");
    if (grid.size() > 1) {
        const bool ascending = grid[1] > grid[0];
        for (std::size_t i = 1; i < grid.size(); ++i)
            if ((grid[i] > grid[i - 1]) != ascending || grid[i] == grid[i - 1])
                throw std::invalid_argument("sweep_track: grid must be strictly monotone");
    }
    (void)seed;

    TrackedSpectrum out;
    out.grid = grid;

    const std::size_t npts = grid.size();
    const unsigned workers = std::max(1u, opts.workers);
    const std::size_t chunk = std::max<std::size_t>(workers, 1);

    std::vector<EigenSolution> buffer(std::min(chunk, npts));
    Eigen::MatrixXd prev_tracked;

    for (std::size_t base = 0; base < npts; base += chunk) {
        const std::size_t count = std::min(chunk, npts - base);
        parallel_for(count, workers,
                     [&](std::size_t i) { buffer[i] = diagonalize(builder(grid[base + i])); });

        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t t = base + i;
            EigenSolution& sol = buffer[i];
            const int n = static_cast<int>(sol.eigenvalues.size());
            if (k > n) throw std::invalid_argument("sweep_track: K exceeds matrix dimension");

            if (t == 0) {
                out.energies.resize(npts, k);
                out.eigen_index.resize(npts, k);
                out.vectors.assign(npts, Eigen::MatrixXd());

                std::vector<int> pick(k);
                if (opts.seed_vectors) {
                    auto [assignment, worst] = detail::match_tracks(*opts.seed_vectors,
                                                                    sol.eigenvectors);
                    pick = assignment;
                    out.min_overlap = std::min(out.min_overlap, worst);
                } else {
                    std::iota(pick.begin(), pick.end(), 0);
                }
                Eigen::MatrixXd tracked(sol.eigenvectors.rows(), k);
                for (int c = 0; c < k; ++c) {
                    tracked.col(c) = sol.eigenvectors.col(pick[c]);
                    out.energies(0, c) = sol.eigenvalues(pick[c]);
                    out.eigen_index(0, c) = pick[c];
                }
                out.vectors[0] = tracked;
                prev_tracked = std::move(tracked);
                continue;
            }

            auto [assignment, worst] = detail::match_tracks(prev_tracked, sol.eigenvectors);
            if (worst < opts.overlap_floor) throw TrackingError(grid[t - 1], grid[t], worst);
            out.min_overlap = std::min(out.min_overlap, worst);

            Eigen::MatrixXd tracked(sol.eigenvectors.rows(), k);
            for (int c = 0; c < k; ++c) {
                const int col = assignment[c];
                Eigen::VectorXd v = sol.eigenvectors.col(col);
                if (prev_tracked.col(c).dot(v) < 0.0) v = -v;
                tracked.col(c) = v;
                out.energies(t, c) = sol.eigenvalues(col);
                out.eigen_index(t, c) = col;
            }
            out.vectors[t] = tracked;
            prev_tracked = std::move(tracked);
        }
    }
    return out;
}

// A local minimum of an inter-track gap, refined inside one grid interval.
struct AvoidedCrossing {
    double lo = 0.0, hi = 0.0;  // bracketing interval (adjacent refined points)
    double location = 0.0;      // position of the minimal gap
    double min_gap = 0.0;       // units of the builder's energy scale
    int track_a = 0, track_b = 0;
    bool above_floor = false;   // distinguishes avoided from (numerically) true crossings
};

struct DetectOptions {
    double gap_threshold = 0.05;  // only refine sampled minima below this
    double gap_floor = 1e-12;     // minimum-gap floor separating true crossings
    double refine_tol = 1e-8;     // target width of the bracketing interval
    int max_refine_iters = 60;
    std::vector<int> interest_tracks;  // empty = the four lowest at the first point
};

namespace detail {

// Re-solves at probe points and follows the two participating tracks by
// maximal overlap with reference vectors.
struct PairProbe {
    const MatrixBuilder& builder;
    Eigen::MatrixXd ref_a, ref_b;

    std::pair<double, double> operator()(double x) {
        const EigenSolution sol = diagonalize(builder(x));
        int best_a = 0, best_b = 0;
        double mag_a = -1.0, mag_b = -1.0;
        for (int c = 0; c < sol.eigenvectors.cols(); ++c) {
            const double oa = std::abs(ref_a.col(0).dot(sol.eigenvectors.col(c)));
            const double ob = std::abs(ref_b.col(0).dot(sol.eigenvectors.col(c)));
            if (oa > mag_a) { mag_a = oa; best_a = c; }
            if (ob > mag_b) { mag_b = ob; best_b = c; }
        }
        if (best_a == best_b) {
            // Inside the mixing region the characters blend; fall back to the
            // two states bracketing the reference energy.
            const int second = (best_a + 1 < sol.eigenvectors.cols()) ? best_a + 1
                                                                      : best_a - 1;
            best_b = second;
        }
        return {sol.eigenvalues(best_a), sol.eigenvalues(best_b)};
    }
};

}  // namespace detail

// Local minima of pairwise tracked-state gaps below the threshold, bracketed
// by grid neighbours and refined by golden-section search on the gap.
inline std::vector<AvoidedCrossing> detect_avoided_crossing(const TrackedSpectrum& tracked,
                                                            const MatrixBuilder& builder,
                                                            const DetectOptions& opts = {}) {
    std::vector<AvoidedCrossing> found;
    const std::size_t npts = tracked.points();
    if (npts < 3 || tracked.tracks() < 2) return found;

    std::vector<int> interest = opts.interest_tracks;
    if (interest.empty()) {
        const auto order = tracked.adiabatic_order(0);
        const int take = std::min<int>(4, tracked.tracks());
        interest.assign(order.begin(), order.begin() + take);
    }

    for (int a : interest) {
        for (int b = 0; b < tracked.tracks(); ++b) {
            if (b == a) continue;
            if (std::find(interest.begin(), interest.end(), b) != interest.end() && b < a)
                continue;  // each interest pair once
            for (std::size_t t = 1; t + 1 < npts; ++t) {
                auto gap = [&](std::size_t i) {
                    return std::abs(tracked.energies(i, a) - tracked.energies(i, b));
                };
                if (!(gap(t) < gap(t - 1) && gap(t) <= gap(t + 1))) continue;
                if (gap(t) >= opts.gap_threshold) continue;

                detail::PairProbe probe{builder, tracked.vectors[t].col(a),
                                        tracked.vectors[t].col(b)};
                double lo = tracked.grid[t - 1], hi = tracked.grid[t + 1];
                // Golden-section on the V-shaped gap.
                const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
                double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
                auto eval = [&](double x) {
                    auto [ea, eb] = probe(x);
                    return std::abs(ea - eb);
                };
                double f1 = eval(x1), f2 = eval(x2);
                int iters = 0;
                while (hi - lo > opts.refine_tol && iters++ < opts.max_refine_iters) {
                    if (f1 <= f2) {
                        hi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = hi - gr * (hi - lo);
                        f1 = eval(x1);
                    } else {
                        lo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = lo + gr * (hi - lo);
                        f2 = eval(x2);
                    }
                }
                AvoidedCrossing ac;
                ac.lo = lo;
                ac.hi = hi;
                ac.location = (f1 <= f2) ? x1 : x2;
                ac.min_gap = std::min(f1, f2);
                ac.track_a = a;
                ac.track_b = b;
                ac.above_floor = ac.min_gap > opts.gap_floor;
                found.push_back(ac);
            }
        }
    }
    std::stable_sort(found.begin(), found.end(),
                     [](const AvoidedCrossing& x, const AvoidedCrossing& y) {
                         return x.location < y.location;
                     });
    return found;
}

// Transition frequencies of four states sorted ascending in energy:
// omega_em,1 is the bottom gap, omega_em,2 the middle, omega_em,3 the top,
// and Delta omega = |omega_em,3 - omega_em,1|. Inputs in units of B.
struct TransitionFrequencies {
    double w1_ghz, w2_ghz, w3_ghz, dw_ghz;
};

inline TransitionFrequencies transition_frequencies(std::array<double, 4> e_over_b,
                                                    double b_cm1) {
    std::sort(e_over_b.begin(), e_over_b.end());
    const double to_ghz = b_cm1 * constants::kGHzPerWavenumber;
    TransitionFrequencies out{};
    out.w1_ghz = (e_over_b[1] - e_over_b[0]) * to_ghz;
    out.w2_ghz = (e_over_b[2] - e_over_b[1]) * to_ghz;
    out.w3_ghz = (e_over_b[3] - e_over_b[2]) * to_ghz;
    out.dw_ghz = std::abs(out.w3_ghz - out.w1_ghz);
    return out;
}

// Lowest four adiabatic energies (units of B) of a tracked family at a point.
inline std::array<double, 4> lowest_four(const TrackedSpectrum& tracked, std::size_t point) {
    if (tracked.tracks() < 4)
        throw std::invalid_argument("lowest_four: need at least four tracks");
    const auto order = tracked.adiabatic_order(point);
    return {tracked.energies(point, order[0]), tracked.energies(point, order[1]),
            tracked.energies(point, order[2]), tracked.energies(point, order[3])};
}

}  // namespace qdimer::spectra

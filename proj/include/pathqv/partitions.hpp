#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pathqv/paths.hpp"

namespace pathqv {

/// Ordered partition 0 = t_0 < t_1 < ... < t_K = T of the path horizon.
///
/// Generated partitions are optional: each internal time is a function of the
/// path restricted to [0, that time]. `exhausted` records that generation ran
/// until no further stopping time existed before T.
struct Partition {
    std::vector<double> times;
    bool exhausted = false;

    /// Throws ValidationError unless the times start at 0, end at `horizon`,
    /// and are strictly increasing.
    void validate(double horizon) const;

    std::size_t intervals() const { return times.empty() ? 0 : times.size() - 1; }

    friend bool operator==(const Partition&, const Partition&) = default;
};

/// Sample times of the path plus the horizon: the finest partition a step
/// path can distinguish.
Partition full_refinement(const SampledPath& path);

/// Sorted union of the time sets (duplicates collapsed).
Partition merge(const std::vector<Partition>& parts, double horizon);

// ---------------------------------------------------------------------------
// Lebesgue partitions

struct LebesgueTrace {
    int level = 0;
    Partition partition;
    /// Dyadic index j of D_k = j * 2^-level for every partition point, starting
    /// with D_0. The appended horizon (when not itself a crossing) has no entry,
    /// so levels.size() == number of crossings + 1.
    std::vector<std::int64_t> levels;

    double level_value(std::size_t k) const;
};

/// n-th Lebesgue partition of a 1-d path: successive times at which the bracket
/// between the value at the previous partition time and the current value
/// contains a dyadic of spacing 2^-n other than the last one crossed.
/// Comparisons run on the exact scaled values omega * 2^n.
LebesgueTrace lebesgue_1d(const SampledPath& path, int n);

/// Lebesgue partition of a d-dimensional path: union of the 1-d partitions of
/// every coordinate and every pairwise sum omega^i + omega^j (i < j).
Partition lebesgue_multi(const SampledPath& path, int n);

// ---------------------------------------------------------------------------
// Drawup / drawdown partitions

enum class Direction { up, down };

struct DrawTrace {
    int level = 0;
    double threshold = 0.0;  ///< 2^-level
    /// rho_0 = 0, rho_1, ...: only the finite ones. rho.size()-1 switches found.
    std::vector<double> rho;
    /// direction[k] labels rho[k] for k >= 1 (direction[0] is unused and set to
    /// the first switch's direction when one exists).
    std::vector<Direction> direction;
    /// intra[k] = tau_{k,1}, tau_{k,2}, ... (tau_{k,0} = rho_k is not repeated).
    std::vector<std::vector<double>> intra;
    /// i(k, n): greatest i with tau_{k,i} < rho_{k+1}, 0 when rho_{k+1} is infinite.
    std::vector<std::size_t> last_before_next;
    /// Whether rho_{k+1} <= T.
    std::vector<bool> next_reached;
    Partition combined;

    bool up_first() const { return rho.size() > 1 && direction[1] == Direction::up; }
};

/// Drawup/drawdown times with threshold 2^-n and the oscillation times between
/// them. Threshold equalities are read as first passage (">=").
DrawTrace drawupdown(const SampledPath& path, int n);

// ---------------------------------------------------------------------------

/// Greedy oscillation stopping times t_i = inf{t > t_{i-1} : |omega(t) - omega(t_{i-1})| > eps}.
Partition epsilon_partition(const SampledPath& path, double eps);

/// Step approximation omega^eps sampled at the partition times: constant on
/// each [t_{i-1}, t_i) with value omega(t_{i-1}).
SampledPath step_approximation(const SampledPath& path, const Partition& partition);

/// O_T(omega, tau): largest Euclidean distance between two path values inside
/// one half-open partition interval [tau_{i-1}, tau_i).
double oscillation(const SampledPath& path, const Partition& partition);

}  // namespace pathqv

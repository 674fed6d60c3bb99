#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace pathqv {

/// A d-dimensional càdlàg step path given by finitely many samples.
///
/// The path is the right-continuous step function
///   omega(t) = values[k]  for the largest k with times[k] <= t,
/// and stays at the last sample value on [times.back(), horizon].
/// Values are stored row-major: sample k occupies values[k*dim .. k*dim+dim).
class SampledPath {
public:
    /// Throws ValidationError unless times are strictly increasing, start at 0,
    /// do not exceed horizon, and every value is finite.
    SampledPath(std::vector<double> times, std::vector<double> values, std::size_t dim,
                double horizon);

    std::size_t dim() const { return dim_; }
    double horizon() const { return horizon_; }
    std::size_t size() const { return times_.size(); }

    std::span<const double> times() const { return times_; }
    std::span<const double> values() const { return values_; }

    double time(std::size_t k) const { return times_[k]; }
    double value(std::size_t k, std::size_t coord) const { return values_[k * dim_ + coord]; }
    std::span<const double> row(std::size_t k) const {
        return std::span<const double>(values_).subspan(k * dim_, dim_);
    }

    /// Index of the sample in force at time t (largest k with t_k <= t).
    std::size_t index_at(double t) const;
    /// Index of the sample in force just before t, i.e. the one giving omega(t-).
    /// Empty for t <= 0.
    std::optional<std::size_t> index_before(double t) const;

    double value_at(double t, std::size_t coord) const { return value(index_at(t), coord); }

    /// One coordinate as a 1-d path on the same grid.
    SampledPath coordinate(std::size_t coord) const;

    friend bool operator==(const SampledPath&, const SampledPath&) = default;

private:
    std::vector<double> times_;
    std::vector<double> values_;
    std::size_t dim_;
    double horizon_;
};

/// Convenience constructor for 1-d paths. Horizon defaults to the last time.
SampledPath make_path(std::vector<double> times, std::vector<double> values,
                      std::optional<double> horizon = std::nullopt);

/// Path restricted to [0, t] and frozen afterwards (same horizon).
/// Used to check that a construction only looks at the past.
SampledPath truncate(const SampledPath& path, double t);

/// omega^i + sign * omega^j as a 1-d path.
SampledPath combine(const SampledPath& path, std::size_t i, std::size_t j, double sign = 1.0);

/// Largest Euclidean norm over all samples.
double sup_norm(const SampledPath& path);

// ---------------------------------------------------------------------------
// Jumps

struct Jump {
    double time;
    std::vector<double> delta;
};

using JumpList = std::vector<Jump>;

/// All nonzero sample-to-sample changes. For a step path every change is a jump.
JumpList jumps(const SampledPath& path);

// ---------------------------------------------------------------------------
// Jump-size bound psi and sample-space membership

/// Nondecreasing, nonnegative function on [0, inf).
class PsiSpec {
public:
    enum class Kind { identity, constant, table };

    static PsiSpec identity();
    static PsiSpec constant(double kappa);
    /// Piecewise-linear interpolation through (x, y) knots sorted by x; constant
    /// extrapolation outside the knot range.
    static PsiSpec table(std::vector<std::pair<double, double>> knots);

    Kind kind() const { return kind_; }
    double operator()(double x) const;

private:
    PsiSpec(Kind kind, double kappa, std::vector<std::pair<double, double>> knots);

    Kind kind_;
    double kappa_ = 0.0;
    std::vector<std::pair<double, double>> knots_;
};

struct MembershipViolation {
    double time;
    std::size_t coord;
    double jump;
    double bound;  ///< -psi(sup_{s<t} |omega(s)|)
};

struct MembershipReport {
    bool member = true;
    std::optional<MembershipViolation> first_violation;
};

/// Checks the downward-jump restriction
///   Delta omega^i(t) >= -psi(sup_{s<t} |omega(s)|)
/// at every sample time, with the supremum taken over samples strictly before t.
MembershipReport check_membership(const SampledPath& path, const PsiSpec& psi);

// ---------------------------------------------------------------------------
// Synthetic paths

/// Symmetric +-step_size walk on the grid k*horizon/steps.
///
/// Signs come from std::mt19937_64 seeded with `seed`: the k-th step is +h
/// when the most significant bit of the k-th 64-bit output is 0 and -h
/// otherwise. The engine's output sequence is fixed by the C++ standard, so
/// walks are identical on every conforming platform.
SampledPath synth_walk(std::size_t steps, double horizon, double step_size, std::uint64_t seed);

/// Same walk built from explicit signs (true = up).
SampledPath walk_from_signs(const std::vector<bool>& up, double horizon, double step_size);

/// Path on [0, 1] that, on each [1/(n+1), 1/n] with n <= n_max, performs n^2
/// up-down oscillations of amplitude 1/sqrt(n), sampled at the extremes.
SampledPath synth_oscillator(std::size_t n_max);

}  // namespace pathqv

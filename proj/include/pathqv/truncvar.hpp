#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pathqv/partitions.hpp"
#include "pathqv/paths.hpp"
#include "pathqv/quadvar.hpp"

namespace pathqv {

/// Running truncated variation
///   TV^c(f, [0, t]) = sup over t_0 < ... < t_k <= t of sum max(|f(t_j) - f(t_{j-1})| - c, 0)
/// at every sample time.
struct TVResult {
    double c = 0.0;
    std::vector<double> times;
    std::vector<double> running;
    double total = 0.0;
};

enum class TVAlgorithm {
    dynamic_programming,  ///< O(m^2) reference recursion
    linear,               ///< O(m) running-extremum form of the same recursion
    automatic,            ///< linear for m > kLinearThreshold, DP otherwise
};

inline constexpr std::size_t kLinearThreshold = 50000;

/// Exact truncated variation of a 1-d step path.
///
/// The reference recursion is B[i] = max(0, max_{j<i} B[j] + max(|x_i - x_j| - c, 0)):
/// B[i] is the best truncated sum over chains ending at sample i and the running
/// value is the prefix maximum of B. Splitting the inner max gives
///   B[i] = max(P[i-1], x_i - c + max_{j<i}(B[j] - x_j), -x_i - c + max_{j<i}(B[j] + x_j)),
/// with P the prefix maximum, which the linear algorithm evaluates in one pass.
TVResult truncated_variation(const SampledPath& path, double c,
                             TVAlgorithm algorithm = TVAlgorithm::automatic);

/// Exhaustive maximum over all subsequences of the samples. Test oracle only;
/// at most kBruteForceMaxSamples samples.
double brute_force_tv(const SampledPath& path, double c);
inline constexpr std::size_t kBruteForceMaxSamples = 18;

/// Total variation sum |x_k - x_{k-1}| of a 1-d step path, running.
std::vector<double> total_variation(const SampledPath& path);

/// Finite-variation companion omega^c: within c of omega in every coordinate,
/// starting at omega(0) and moving only when omega leaves the band.
struct RegularizedPath {
    double c = 0.0;
    SampledPath path;
    std::vector<double> tv_of_regularized;  ///< total variation per coordinate at T
};

/// Coordinate-wise dead-zone tracking: (omega^c)^i moves to omega^i -+ c only
/// when |omega^i - (omega^c)^i| > c. Throws for c <= 0.
RegularizedPath regularize(const SampledPath& path, double c);

struct SandwichReport {
    std::vector<double> times;
    std::vector<double> tv_2c;            ///< TV^{2c}(omega, [0, t])
    std::vector<double> tv_regularized;   ///< TV(omega^c, [0, t])
    double min_lower_gap = 0.0;           ///< min_t TV(omega^c) - TV^{2c}
    double max_upper_gap = 0.0;           ///< max_t TV(omega^c) - TV^{2c} (must be <= 2c)
};

/// Checks TV^{2c}(omega) <= TV(omega^c) <= TV^{2c}(omega) + 2c at every sample
/// time; throws InvariantViolation if the bracket fails beyond round-off.
SandwichReport tv_sandwich_check(const SampledPath& path, double c);

struct IdentityReport {
    std::vector<double> times;
    std::vector<double> lhs;  ///< c * TV(omega^c, [0, t])
    std::vector<double> rhs;  ///< int_(0,t] (omega - omega^c)(s) d omega^c(s)
    double max_residual = 0.0;
    double max_relative_residual = 0.0;  ///< residual / (1 + |lhs| + |rhs|)
};

/// Both sides of c * TV(omega^c) = int (omega - omega^c) d omega^c, the
/// integrand taken at s (post-jump).
IdentityReport tv_integral_identity(const SampledPath& path, double c);

/// Estimates of the continuous quadratic (co)variation from truncated variation
/// for one truncation level c.
struct TVEstimate {
    double c = 0.0;
    MatrixProcess estimate;        ///< c * TV^c diagonal, polarized off-diagonal
    MatrixProcess estimate_proof;  ///< same with 2c * TV^{2c}
    std::optional<double> distance_to_reference;  ///< sup-norm vs reference cont_part
};

/// For each c: diagonal c * TV^c(S^i), off-diagonal c (TV^c(S^i+S^j) - TV^c(S^i-S^j)) / 4.
/// c_list must be positive and strictly decreasing.
std::vector<TVEstimate> qv_via_tv(const SampledPath& path, const std::vector<double>& c_list,
                                  const QVMatrixProcess* reference = nullptr,
                                  unsigned threads = 1);

struct PropositionResidual {
    int level = 0;
    double residual = 0.0;       ///< the finite sum of the drawup/drawdown condition
    double combined_qv = 0.0;    ///< sum (omega(tau_{k+1} ^ T) - omega(tau_k ^ T))^2
    double scaled_tv = 0.0;      ///< 2^-n TV^{2^-n}(omega, [0, T])
};

/// Evaluates the drawup/drawdown sufficient condition at level n along with
/// the combined-partition quadratic variation. Throws for an empty trace.
PropositionResidual proposition_residual(const SampledPath& path, const DrawTrace& trace);
PropositionResidual proposition_residual(const SampledPath& path, int n);

}  // namespace pathqv

#pragma once

#include <cstddef>
#include <vector>

#include "pathqv/partitions.hpp"
#include "pathqv/paths.hpp"
#include "pathqv/quadvar.hpp"

namespace pathqv {

/// Running integral evaluated on a time grid; 0 at time 0.
struct IntegralProcess {
    std::vector<double> times;
    std::vector<double> values;

    double final_value() const { return values.empty() ? 0.0 : values.back(); }
    /// sup_t |this_t - other_t| on a shared grid.
    double sup_distance(const IntegralProcess& other) const;
};

/// Both paths sampled on the union of their time grids (columns of `a` first,
/// then `b`). Horizons must agree.
SampledPath align(const SampledPath& a, const SampledPath& b);

/// int_(0,t] g(s-) da(s) for a step integrator: sum over the jumps u <= t of a
/// of g(u-) * Delta a(u). Evaluated on the union grid of g and a.
IntegralProcess lebesgue_stieltjes(const SampledPath& g, const SampledPath& a);

struct FollmerLadder {
    std::vector<IntegralProcess> per_level;
    ConvergenceReport report;
};

/// Left-point Riemann sums sum g(tau_{i-1}) (x(tau_i ^ t) - x(tau_{i-1} ^ t)) along
/// each partition of a refining ladder, with sup-norm Cauchy diagnostics.
/// `labels` name the ladder rungs in the report (defaults to 0, 1, ...).
FollmerLadder follmer_integral(const SampledPath& g, const SampledPath& x,
                               const std::vector<Partition>& partitions, double tol = 1e-9,
                               std::vector<int> labels = {});

/// One Riemann-sum process along a single partition.
IntegralProcess riemann_sum(const SampledPath& g, const SampledPath& x, const Partition& partition);

/// Simple strategy: weights h_k held on (tau_k, tau_{k+1}].
/// times has one more entry than weights; +infinity marks a time never reached.
/// Weights must be causal (functions of the path up to tau_k); that is the
/// caller's contract.
struct SimpleStrategy {
    std::vector<double> times;
    std::vector<std::vector<double>> weights;

    void validate(std::size_t dim) const;
};

/// (H . S)_t = sum_k h_k . (S_{tau_{k+1} ^ t} - S_{tau_k ^ t}) at every sample time.
IntegralProcess simple_strategy_integral(const SimpleStrategy& strategy, const SampledPath& path);

struct ResidualReport {
    std::vector<double> times;
    std::vector<double> residual;
    double sup_residual = 0.0;
};

/// omega^i omega^j(t) - omega^i omega^j(0) minus the two Follmer integrals along
/// `partition` minus qv[i][j]_t. Zero for every partition when qv is the discrete
/// covariation along that same partition.
ResidualReport ibp_residual_typical(const SampledPath& path, const QVMatrixProcess& qv,
                                    std::size_t i, std::size_t j, const Partition& partition);

/// Same, using the finest rung of a ladder (the last entry).
ResidualReport ibp_residual_typical(const SampledPath& path, const QVMatrixProcess& qv,
                                    std::size_t i, std::size_t j,
                                    const std::vector<Partition>& partitions);

/// Integration by parts against a finite-variation companion fv:
///   omega^i fv^j(t) - omega^i fv^j(0) = (F) int fv^j(s-) d omega^i
///                                      + int omega^i(s-) d fv^j + sum Delta omega^i Delta fv^j.
/// The first integral runs along `partition` (taken on the union grid of the
/// two paths); the rest are exact jump sums.
ResidualReport ibp_residual_fv(const SampledPath& path, const SampledPath& fv, std::size_t i,
                               std::size_t j, const Partition& partition);

/// Running sum over 0 < s <= t with |Delta b(s)| > eps of Delta a(s) Delta b(s).
/// eps must differ from every |Delta b|; eps = 0 keeps every co-jump.
IntegralProcess co_jump_sum(const SampledPath& a, const SampledPath& b, double eps = 0.0);

}  // namespace pathqv

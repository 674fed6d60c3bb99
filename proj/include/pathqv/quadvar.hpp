#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pathqv/partitions.hpp"
#include "pathqv/paths.hpp"

namespace pathqv {

/// Stack of d x d matrices, one per evaluation time, stored row-major.
class MatrixProcess {
public:
    MatrixProcess() = default;
    MatrixProcess(std::vector<double> times, std::size_t dim);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return times_.size(); }
    std::span<const double> times() const { return times_; }

    double& at(std::size_t k, std::size_t i, std::size_t j) {
        return data_[(k * dim_ + i) * dim_ + j];
    }
    double at(std::size_t k, std::size_t i, std::size_t j) const {
        return data_[(k * dim_ + i) * dim_ + j];
    }
    std::span<const double> matrix(std::size_t k) const {
        return std::span<const double>(data_).subspan(k * dim_ * dim_, dim_ * dim_);
    }

    /// sup over time of the Frobenius norm of the entry-wise difference.
    /// Both processes must share their time grid.
    double sup_distance(const MatrixProcess& other) const;

    MatrixProcess operator-(const MatrixProcess& other) const;

private:
    std::vector<double> times_;
    std::vector<double> data_;
    std::size_t dim_ = 0;
};

/// Running quadratic (co)variation [S^i, S^j]_t with its jump/continuous split.
struct QVMatrixProcess {
    MatrixProcess matrices;
    MatrixProcess jump_part;
    MatrixProcess cont_part;

    std::size_t dim() const { return matrices.dim(); }
    /// |[S]_T| = (sum_{i,j} [S^i,S^j]_T^2)^{1/2}
    double frobenius_T() const;
};

/// Smallest eigenvalue of one symmetric matrix of the process.
double min_eigenvalue(const MatrixProcess& process, std::size_t k);

/// Running sum of outer products of the jump vectors whose Euclidean norm
/// exceeds `jump_threshold`. Threshold 0 counts every sample change.
MatrixProcess jump_qv(const SampledPath& path, double jump_threshold = 0.0);

/// Q^{i,j,tau}_t = sum_k (omega^i(tau_k ^ t) - omega^i(tau_{k-1} ^ t))
///                      (omega^j(tau_k ^ t) - omega^j(tau_{k-1} ^ t))
/// evaluated at every sample time of the path.
QVMatrixProcess discrete_qv(const SampledPath& path, const Partition& partition,
                            double jump_threshold = 0.0);

struct ConvergenceReport {
    std::vector<int> levels;
    std::vector<double> sup_diffs;  ///< sup_diffs[k] compares levels[k] and levels[k+1]
    bool converged = false;
    double tol = 0.0;
    double achieved_tol = 0.0;  ///< largest of the diffs used for the verdict
    /// Lowest level from which every later diff is within tol.
    std::optional<int> converged_at;
};

/// Builds the verdict for a diff sequence: converged iff the last two diffs
/// (or the only one) are within tol.
ConvergenceReport make_report(std::vector<int> levels, std::vector<double> sup_diffs, double tol);

struct QVLimit {
    QVMatrixProcess qv;  ///< at the highest level
    ConvergenceReport report;
};

/// discrete_qv along lebesgue_multi for n = n_min..n_max with Cauchy
/// diagnostics. Non-convergence is reported, never thrown.
/// Levels are computed on up to `threads` worker threads.
QVLimit qv_limit(const SampledPath& path, int n_min, int n_max, double tol,
                 double jump_threshold = 0.0, unsigned threads = 1);

/// Scalar running processes of the polarization identity 4Q = R - T.
struct Polarization {
    std::vector<double> times;
    std::vector<double> R;  ///< sum (d omega^i + d omega^j)^2
    std::vector<double> T;  ///< sum (d omega^i - d omega^j)^2
    std::vector<double> Q;  ///< (R - T) / 4
    std::vector<double> Q_direct;  ///< sum d omega^i d omega^j, computed independently
};

Polarization polarized_qv(const SampledPath& path, const Partition& partition, std::size_t i,
                          std::size_t j);

/// Membership in Omega_{q,M}: |[S]_T| <= q and sup_t |omega(t)| <= M.
bool omega_qm(const SampledPath& path, const QVMatrixProcess& qv, double q, double M);

struct IndependenceRow {
    double oscillation;
    double sup_error;
};

/// For each partition: (O_T, sup_t |Q^tau_t - reference_t|).
std::vector<IndependenceRow> partition_independence_study(const SampledPath& path,
                                                          const std::vector<Partition>& partitions,
                                                          const QVMatrixProcess& reference);

}  // namespace pathqv

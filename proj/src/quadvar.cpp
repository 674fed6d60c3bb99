#include "pathqv/quadvar.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "capped_sum.hpp"
#include "pathqv/error.hpp"
#include "pathqv/parallel.hpp"
#include "pathqv/summation.hpp"

namespace pathqv {

MatrixProcess::MatrixProcess(std::vector<double> times, std::size_t dim)
    : times_(std::move(times)), data_(times_.size() * dim * dim, 0.0), dim_(dim) {}

double MatrixProcess::sup_distance(const MatrixProcess& other) const {
    if (other.size() != size() || other.dim() != dim())
        throw ValidationError("processes live on different grids");
    double sup = 0.0;
    const std::size_t block = dim_ * dim_;
    for (std::size_t k = 0; k < size(); ++k) {
        double s = 0.0;
        for (std::size_t e = 0; e < block; ++e) {
            const double d = data_[k * block + e] - other.data_[k * block + e];
            s += d * d;
        }
        sup = std::max(sup, std::sqrt(s));
    }
    return sup;
}

MatrixProcess MatrixProcess::operator-(const MatrixProcess& other) const {
    if (other.size() != size() || other.dim() != dim())
        throw ValidationError("processes live on different grids");
    MatrixProcess out(times_, dim_);
    for (std::size_t e = 0; e < data_.size(); ++e) out.data_[e] = data_[e] - other.data_[e];
    return out;
}

double QVMatrixProcess::frobenius_T() const {
    if (matrices.size() == 0) return 0.0;
    double s = 0.0;
    for (double v : matrices.matrix(matrices.size() - 1)) s += v * v;
    return std::sqrt(s);
}

double min_eigenvalue(const MatrixProcess& process, std::size_t k) {
    const std::size_t d = process.dim();
    Eigen::MatrixXd m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = process.at(k, i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

namespace {

// Upper-triangle accumulators of a symmetric d x d running sum.
class SymmetricAccumulator {
public:
    explicit SymmetricAccumulator(std::size_t dim) : dim_(dim), sums_(dim * dim) {}

    void add_outer(const SampledPath& path, std::size_t from, std::size_t to) {
        for (std::size_t i = 0; i < dim_; ++i) {
            const double a = path.value(to, i) - path.value(from, i);
            for (std::size_t j = i; j < dim_; ++j) {
                sums_[i * dim_ + j].add(a * (path.value(to, j) - path.value(from, j)));
            }
        }
    }

    // Writes completed sums plus the open increment (from -> k) into slot k.
    void store(MatrixProcess& out, std::size_t slot, const SampledPath& path, std::size_t from,
               std::size_t k) const {
        for (std::size_t i = 0; i < dim_; ++i) {
            const double a = path.value(k, i) - path.value(from, i);
            for (std::size_t j = i; j < dim_; ++j) {
                CompensatedSum s = sums_[i * dim_ + j];
                s.add(a * (path.value(k, j) - path.value(from, j)));
                out.at(slot, i, j) = s.value();
                out.at(slot, j, i) = s.value();
            }
        }
    }

private:
    std::size_t dim_;
    std::vector<CompensatedSum> sums_;
};

std::vector<double> grid_of(const SampledPath& path) {
    return {path.times().begin(), path.times().end()};
}

}  // namespace

MatrixProcess jump_qv(const SampledPath& path, double jump_threshold) {
    const std::size_t d = path.dim();
    MatrixProcess out(grid_of(path), d);
    SymmetricAccumulator acc(d);
    for (std::size_t k = 0; k < path.size(); ++k) {
        if (k > 0) {
            double norm2 = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double delta = path.value(k, i) - path.value(k - 1, i);
                norm2 += delta * delta;
            }
            if (norm2 > 0.0 && std::sqrt(norm2) > jump_threshold) acc.add_outer(path, k - 1, k);
        }
        acc.store(out, k, path, k, k);
    }
    return out;
}

QVMatrixProcess discrete_qv(const SampledPath& path, const Partition& partition,
                            double jump_threshold) {
    partition.validate(path.horizon());
    const std::size_t d = path.dim();
    QVMatrixProcess qv;
    qv.matrices = MatrixProcess(grid_of(path), d);
    SymmetricAccumulator acc(d);
    detail::walk_partition(
        path, partition, [&](std::size_t from, std::size_t to) { acc.add_outer(path, from, to); },
        [&](std::size_t k, std::size_t from) { acc.store(qv.matrices, k, path, from, k); });
    qv.jump_part = jump_qv(path, jump_threshold);
    qv.cont_part = qv.matrices - qv.jump_part;
    return qv;
}

ConvergenceReport make_report(std::vector<int> levels, std::vector<double> sup_diffs, double tol) {
    ConvergenceReport r;
    r.levels = std::move(levels);
    r.sup_diffs = std::move(sup_diffs);
    r.tol = tol;
    const auto& d = r.sup_diffs;
    if (!d.empty()) {
        const std::size_t used = std::min<std::size_t>(2, d.size());
        r.achieved_tol = *std::max_element(d.end() - static_cast<std::ptrdiff_t>(used), d.end());
        r.converged = r.achieved_tol <= tol;
        std::size_t start = d.size();
        while (start > 0 && d[start - 1] <= tol) --start;
        if (start < d.size()) r.converged_at = r.levels[start];
    }
    return r;
}

QVLimit qv_limit(const SampledPath& path, int n_min, int n_max, double tol, double jump_threshold,
                 unsigned threads) {
    if (n_min > n_max) throw ValidationError("empty level range");
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    const std::size_t count = static_cast<std::size_t>(n_max - n_min + 1);
    std::vector<MatrixProcess> per_level(count);
    parallel_for(count, threads, [&](std::size_t k) {
        const int n = n_min + static_cast<int>(k);
        per_level[k] = discrete_qv(path, lebesgue_multi(path, n)).matrices;
    });

    std::vector<int> levels;
    std::vector<double> diffs;
    for (std::size_t k = 0; k < count; ++k) {
        levels.push_back(n_min + static_cast<int>(k));
        if (k > 0) diffs.push_back(per_level[k].sup_distance(per_level[k - 1]));
    }

    QVLimit out;
    out.qv.matrices = std::move(per_level.back());
    out.qv.jump_part = jump_qv(path, jump_threshold);
    out.qv.cont_part = out.qv.matrices - out.qv.jump_part;
    out.report = make_report(std::move(levels), std::move(diffs), tol);
    return out;
}

Polarization polarized_qv(const SampledPath& path, const Partition& partition, std::size_t i,
                          std::size_t j) {
    if (i >= path.dim() || j >= path.dim()) throw ValidationError("coordinate index out of range");
    partition.validate(path.horizon());
    Polarization out;
    out.times = grid_of(path);
    const std::size_t m = path.size();
    out.R.resize(m);
    out.T.resize(m);
    out.Q.resize(m);
    out.Q_direct.resize(m);

    CompensatedSum r, t, q;
    auto incr = [&](std::size_t from, std::size_t to) {
        return std::pair{path.value(to, i) - path.value(from, i),
                         path.value(to, j) - path.value(from, j)};
    };
    detail::walk_partition(
        path, partition,
        [&](std::size_t from, std::size_t to) {
            const auto [a, b] = incr(from, to);
            r.add((a + b) * (a + b));
            t.add((a - b) * (a - b));
            q.add(a * b);
        },
        [&](std::size_t k, std::size_t from) {
            const auto [a, b] = incr(from, k);
            CompensatedSum rk = r, tk = t, qk = q;
            rk.add((a + b) * (a + b));
            tk.add((a - b) * (a - b));
            qk.add(a * b);
            out.R[k] = rk.value();
            out.T[k] = tk.value();
            out.Q[k] = (out.R[k] - out.T[k]) / 4.0;
            out.Q_direct[k] = qk.value();
        });
    return out;
}

bool omega_qm(const SampledPath& path, const QVMatrixProcess& qv, double q, double M) {
    if (!(q > 0.0) || !(M > 0.0)) throw ValidationError("q and M must be positive");
    return qv.frobenius_T() <= q && sup_norm(path) <= M;
}

std::vector<IndependenceRow> partition_independence_study(const SampledPath& path,
                                                          const std::vector<Partition>& partitions,
                                                          const QVMatrixProcess& reference) {
    std::vector<IndependenceRow> rows;
    rows.reserve(partitions.size());
    for (const auto& p : partitions) {
        const auto qv = discrete_qv(path, p);
        rows.push_back({oscillation(path, p), qv.matrices.sup_distance(reference.matrices)});
    }
    return rows;
}

}  // namespace pathqv

#include "pathqv/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "capped_sum.hpp"
#include "pathqv/error.hpp"
#include "pathqv/summation.hpp"

namespace pathqv {

double IntegralProcess::sup_distance(const IntegralProcess& other) const {
    if (other.values.size() != values.size())
        throw ValidationError("integral processes live on different grids");
    double sup = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k)
        sup = std::max(sup, std::fabs(values[k] - other.values[k]));
    return sup;
}

SampledPath align(const SampledPath& a, const SampledPath& b) {
    if (a.horizon() != b.horizon()) throw ValidationError("paths must share their horizon");
    std::vector<double> grid;
    grid.reserve(a.size() + b.size());
    std::merge(a.times().begin(), a.times().end(), b.times().begin(), b.times().end(),
               std::back_inserter(grid));
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const std::size_t d = a.dim() + b.dim();
    std::vector<double> values;
    values.reserve(grid.size() * d);
    std::size_t ia = 0, ib = 0;
    for (double t : grid) {
        while (ia + 1 < a.size() && a.time(ia + 1) <= t) ++ia;
        while (ib + 1 < b.size() && b.time(ib + 1) <= t) ++ib;
        const auto ra = a.row(ia);
        const auto rb = b.row(ib);
        values.insert(values.end(), ra.begin(), ra.end());
        values.insert(values.end(), rb.begin(), rb.end());
    }
    return SampledPath(std::move(grid), std::move(values), d, a.horizon());
}

namespace {

void require_1d(const SampledPath& path, const char* what) {
    if (path.dim() != 1) throw ValidationError(std::string(what) + " requires 1-d paths");
}

IntegralProcess empty_on(const SampledPath& grid) {
    return {{grid.times().begin(), grid.times().end()}, std::vector<double>(grid.size(), 0.0)};
}

// Left-point Riemann sum of column g against column x of one aligned path.
IntegralProcess riemann_columns(const SampledPath& p, std::size_t g, std::size_t x,
                                const Partition& partition) {
    partition.validate(p.horizon());
    IntegralProcess out = empty_on(p);
    CompensatedSum sum;
    detail::walk_partition(
        p, partition,
        [&](std::size_t from, std::size_t to) {
            sum.add(p.value(from, g) * (p.value(to, x) - p.value(from, x)));
        },
        [&](std::size_t k, std::size_t from) {
            CompensatedSum s = sum;
            s.add(p.value(from, g) * (p.value(k, x) - p.value(from, x)));
            out.values[k] = s.value();
        });
    return out;
}

// Exact jump sum of column g (left limit) against column a.
IntegralProcess stieltjes_columns(const SampledPath& p, std::size_t g, std::size_t a) {
    IntegralProcess out = empty_on(p);
    CompensatedSum sum;
    for (std::size_t k = 1; k < p.size(); ++k) {
        const double da = p.value(k, a) - p.value(k - 1, a);
        if (da != 0.0) sum.add(p.value(k - 1, g) * da);
        out.values[k] = sum.value();
    }
    return out;
}

IntegralProcess co_jumps_columns(const SampledPath& p, std::size_t a, std::size_t b, double eps) {
    IntegralProcess out = empty_on(p);
    CompensatedSum sum;
    for (std::size_t k = 1; k < p.size(); ++k) {
        const double db = p.value(k, b) - p.value(k - 1, b);
        if (std::fabs(db) > eps) sum.add((p.value(k, a) - p.value(k - 1, a)) * db);
        out.values[k] = sum.value();
    }
    return out;
}

ResidualReport finish(std::vector<double> times, std::vector<double> residual) {
    ResidualReport r;
    r.sup_residual = 0.0;
    for (double v : residual) r.sup_residual = std::max(r.sup_residual, std::fabs(v));
    r.times = std::move(times);
    r.residual = std::move(residual);
    return r;
}

}  // namespace

IntegralProcess lebesgue_stieltjes(const SampledPath& g, const SampledPath& a) {
    require_1d(g, "lebesgue_stieltjes");
    require_1d(a, "lebesgue_stieltjes");
    return stieltjes_columns(align(g, a), 0, 1);
}

IntegralProcess riemann_sum(const SampledPath& g, const SampledPath& x, const Partition& partition) {
    require_1d(g, "riemann_sum");
    require_1d(x, "riemann_sum");
    return riemann_columns(align(g, x), 0, 1, partition);
}

FollmerLadder follmer_integral(const SampledPath& g, const SampledPath& x,
                               const std::vector<Partition>& partitions, double tol,
                               std::vector<int> labels) {
    require_1d(g, "follmer_integral");
    require_1d(x, "follmer_integral");
    if (labels.empty()) {
        labels.resize(partitions.size());
        std::iota(labels.begin(), labels.end(), 0);
    }
    if (labels.size() != partitions.size()) throw ValidationError("one label per partition");
    const SampledPath p = align(g, x);
    FollmerLadder ladder;
    std::vector<double> diffs;
    for (const auto& part : partitions) {
        ladder.per_level.push_back(riemann_columns(p, 0, 1, part));
        const std::size_t n = ladder.per_level.size();
        if (n > 1) diffs.push_back(ladder.per_level[n - 1].sup_distance(ladder.per_level[n - 2]));
    }
    ladder.report = make_report(std::move(labels), std::move(diffs), tol);
    return ladder;
}

void SimpleStrategy::validate(std::size_t dim) const {
    if (times.size() != weights.size() + 1)
        throw ValidationError("simple strategy needs one more time than weights");
    if (times.front() != 0.0) throw ValidationError("simple strategy must start at time 0");
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] >= times[k - 1])) throw ValidationError("strategy times must be nondecreasing");
    }
    for (const auto& h : weights) {
        if (h.size() != dim) throw ValidationError("strategy weight has wrong dimension");
        for (double v : h)
            if (!std::isfinite(v)) throw ValidationError("strategy weights must be finite");
    }
}

IntegralProcess simple_strategy_integral(const SimpleStrategy& strategy, const SampledPath& path) {
    strategy.validate(path.dim());
    const std::size_t d = path.dim();
    const std::size_t K = strategy.weights.size();
    IntegralProcess out = empty_on(path);
    auto increment = [&](std::size_t k, std::size_t from, std::size_t to) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            s += strategy.weights[k][i] * (path.value(to, i) - path.value(from, i));
        return s;
    };
    CompensatedSum done;
    std::size_t p = 0;
    for (std::size_t m = 0; m < path.size(); ++m) {
        const double t = path.time(m);
        while (p < K && strategy.times[p + 1] <= t) {
            done.add(increment(p, path.index_at(strategy.times[p]),
                               path.index_at(strategy.times[p + 1])));
            ++p;
        }
        CompensatedSum s = done;
        if (p < K && strategy.times[p] <= t) s.add(increment(p, path.index_at(strategy.times[p]), m));
        out.values[m] = s.value();
    }
    return out;
}

ResidualReport ibp_residual_typical(const SampledPath& path, const QVMatrixProcess& qv,
                                    std::size_t i, std::size_t j, const Partition& partition) {
    if (i >= path.dim() || j >= path.dim()) throw ValidationError("coordinate index out of range");
    if (qv.matrices.size() != path.size() || qv.dim() != path.dim())
        throw ValidationError("quadratic variation must live on the path grid");
    const auto fij = riemann_columns(path, i, j, partition);
    const auto fji = riemann_columns(path, j, i, partition);
    const double start = path.value(0, i) * path.value(0, j);
    std::vector<double> res(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double lhs = path.value(k, i) * path.value(k, j) - start;
        res[k] = lhs - fij.values[k] - fji.values[k] - qv.matrices.at(k, i, j);
    }
    return finish({path.times().begin(), path.times().end()}, std::move(res));
}

ResidualReport ibp_residual_typical(const SampledPath& path, const QVMatrixProcess& qv,
                                    std::size_t i, std::size_t j,
                                    const std::vector<Partition>& partitions) {
    if (partitions.empty()) throw ValidationError("need at least one partition");
    return ibp_residual_typical(path, qv, i, j, partitions.back());
}

ResidualReport ibp_residual_fv(const SampledPath& path, const SampledPath& fv, std::size_t i,
                               std::size_t j, const Partition& partition) {
    if (i >= path.dim() || j >= fv.dim()) throw ValidationError("coordinate index out of range");
    const SampledPath p = align(path, fv);
    const std::size_t a = i;
    const std::size_t b = path.dim() + j;
    const auto follmer = riemann_columns(p, b, a, partition);
    const auto stieltjes = stieltjes_columns(p, a, b);
    const auto cojumps = co_jumps_columns(p, a, b, 0.0);
    const double start = p.value(0, a) * p.value(0, b);
    std::vector<double> res(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double lhs = p.value(k, a) * p.value(k, b) - start;
        res[k] = lhs - follmer.values[k] - stieltjes.values[k] - cojumps.values[k];
    }
    return finish({p.times().begin(), p.times().end()}, std::move(res));
}

IntegralProcess co_jump_sum(const SampledPath& a, const SampledPath& b, double eps) {
    require_1d(a, "co_jump_sum");
    require_1d(b, "co_jump_sum");
    if (!(eps >= 0.0)) throw ValidationError("jump filter must be nonnegative");
    if (eps > 0.0) {
        for (std::size_t k = 1; k < b.size(); ++k) {
            if (std::fabs(b.value(k, 0) - b.value(k - 1, 0)) == eps)
                throw ValidationError("jump filter equals an existing jump size of the integrator");
        }
    }
    return co_jumps_columns(align(a, b), 0, 1, eps);
}

}  // namespace pathqv

#include "pathqv/truncvar.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "pathqv/error.hpp"
#include "pathqv/parallel.hpp"
#include "pathqv/summation.hpp"

namespace pathqv {

namespace {

void require_1d(const SampledPath& path, const char* what) {
    if (path.dim() != 1) throw ValidationError(std::string(what) + " requires a 1-d path");
}

std::vector<double> tv_dp(std::span<const double> x, double c) {
    const std::size_t m = x.size();
    std::vector<double> best(m, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
        double b = best[i - 1];
        for (std::size_t j = 0; j < i; ++j) {
            const double gain = std::max(std::fabs(x[i] - x[j]) - c, 0.0);
            b = std::max(b, best[j] + gain);
        }
        best[i] = b;
    }
    return best;
}

std::vector<double> tv_linear(std::span<const double> x, double c) {
    const std::size_t m = x.size();
    std::vector<double> running(m, 0.0);
    double prefix = 0.0;
    double from_below = -x[0];  // max_j B[j] - x_j
    double from_above = x[0];   // max_j B[j] + x_j
    for (std::size_t i = 1; i < m; ++i) {
        const double b =
            std::max({prefix, (x[i] - c) + from_below, (-x[i] - c) + from_above});
        running[i] = b;
        prefix = b;
        from_below = std::max(from_below, b - x[i]);
        from_above = std::max(from_above, b + x[i]);
    }
    return running;
}

}  // namespace

TVResult truncated_variation(const SampledPath& path, double c, TVAlgorithm algorithm) {
    require_1d(path, "truncated_variation");
    if (!(c >= 0.0) || !std::isfinite(c)) throw ValidationError("truncation parameter must be >= 0");
    if (algorithm == TVAlgorithm::automatic) {
        algorithm = path.size() > kLinearThreshold ? TVAlgorithm::linear
                                                   : TVAlgorithm::dynamic_programming;
    }
    TVResult r;
    r.c = c;
    r.times.assign(path.times().begin(), path.times().end());
    r.running = algorithm == TVAlgorithm::linear ? tv_linear(path.values(), c)
                                                 : tv_dp(path.values(), c);
    r.total = r.running.back();
    return r;
}

double brute_force_tv(const SampledPath& path, double c) {
    require_1d(path, "brute_force_tv");
    if (path.size() > kBruteForceMaxSamples)
        throw ValidationError("brute_force_tv supports at most " +
                              std::to_string(kBruteForceMaxSamples) + " samples");
    const auto x = path.values();
    const std::size_t m = x.size();
    double best = 0.0;
    // Depth-first over every strictly increasing index chain.
    std::function<void(std::size_t, double)> extend = [&](std::size_t last, double sum) {
        best = std::max(best, sum);
        for (std::size_t next = last + 1; next < m; ++next) {
            extend(next, sum + std::max(std::fabs(x[next] - x[last]) - c, 0.0));
        }
    };
    for (std::size_t start = 0; start < m; ++start) extend(start, 0.0);
    return best;
}

std::vector<double> total_variation(const SampledPath& path) {
    require_1d(path, "total_variation");
    std::vector<double> out(path.size(), 0.0);
    CompensatedSum s;
    for (std::size_t k = 1; k < path.size(); ++k) {
        s.add(std::fabs(path.value(k, 0) - path.value(k - 1, 0)));
        out[k] = s.value();
    }
    return out;
}

RegularizedPath regularize(const SampledPath& path, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("regularization needs c > 0");
    const std::size_t d = path.dim();
    const std::size_t m = path.size();
    std::vector<double> values(m * d);
    std::vector<CompensatedSum> tv(d);
    for (std::size_t i = 0; i < d; ++i) values[i] = path.value(0, i);
    for (std::size_t k = 1; k < m; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            const double prev = values[(k - 1) * d + i];
            const double x = path.value(k, i);
            double next = prev;
            if (x > prev + c) {
                next = x - c;
            } else if (x < prev - c) {
                next = x + c;
            }
            values[k * d + i] = next;
            tv[i].add(std::fabs(next - prev));
        }
    }
    RegularizedPath out{c, SampledPath({path.times().begin(), path.times().end()},
                                       std::move(values), d, path.horizon()),
                        {}};
    for (const auto& s : tv) out.tv_of_regularized.push_back(s.value());
    return out;
}

SandwichReport tv_sandwich_check(const SampledPath& path, double c) {
    require_1d(path, "tv_sandwich_check");
    const auto reg = regularize(path, c);
    SandwichReport r;
    r.times.assign(path.times().begin(), path.times().end());
    r.tv_2c = truncated_variation(path, 2.0 * c, TVAlgorithm::linear).running;
    r.tv_regularized = total_variation(reg.path);
    r.min_lower_gap = 0.0;
    r.max_upper_gap = 0.0;
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        const double gap = r.tv_regularized[k] - r.tv_2c[k];
        r.min_lower_gap = std::min(r.min_lower_gap, gap);
        r.max_upper_gap = std::max(r.max_upper_gap, gap);
        const double slack = 1e-12 * (1.0 + r.tv_regularized[k]);
        if (gap < -slack || gap > 2.0 * c + slack) {
            throw InvariantViolation("truncated-variation sandwich violated at t = " +
                                     std::to_string(r.times[k]) + " (gap " + std::to_string(gap) +
                                     ", c = " + std::to_string(c) + ")");
        }
    }
    return r;
}

IdentityReport tv_integral_identity(const SampledPath& path, double c) {
    require_1d(path, "tv_integral_identity");
    const auto reg = regularize(path, c);
    IdentityReport r;
    r.times.assign(path.times().begin(), path.times().end());
    const std::size_t m = path.size();
    r.lhs.assign(m, 0.0);
    r.rhs.assign(m, 0.0);
    CompensatedSum tv, integral;
    for (std::size_t k = 1; k < m; ++k) {
        const double move = reg.path.value(k, 0) - reg.path.value(k - 1, 0);
        tv.add(std::fabs(move));
        integral.add((path.value(k, 0) - reg.path.value(k, 0)) * move);
        r.lhs[k] = c * tv.value();
        r.rhs[k] = integral.value();
        const double res = std::fabs(r.lhs[k] - r.rhs[k]);
        r.max_residual = std::max(r.max_residual, res);
        r.max_relative_residual = std::max(
            r.max_relative_residual, res / (1.0 + std::fabs(r.lhs[k]) + std::fabs(r.rhs[k])));
    }
    return r;
}

std::vector<TVEstimate> qv_via_tv(const SampledPath& path, const std::vector<double>& c_list,
                                  const QVMatrixProcess* reference, unsigned threads) {
    for (std::size_t k = 0; k < c_list.size(); ++k) {
        if (!(c_list[k] > 0.0)) throw ValidationError("truncation levels must be positive");
        if (k > 0 && !(c_list[k] < c_list[k - 1]))
            throw ValidationError("truncation levels must be strictly decreasing");
    }
    const std::size_t d = path.dim();
    const std::vector<double> grid(path.times().begin(), path.times().end());

    // 1-d series whose truncated variations feed the estimates.
    std::vector<SampledPath> coords;
    for (std::size_t i = 0; i < d; ++i) coords.push_back(path.coordinate(i));
    std::vector<std::pair<SampledPath, SampledPath>> pairs;  // (sum, difference), i < j
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            pairs.emplace_back(combine(path, i, j, 1.0), combine(path, i, j, -1.0));

    std::vector<TVEstimate> out(c_list.size());
    parallel_for(c_list.size(), threads, [&](std::size_t ci) {
        const double c = c_list[ci];
        TVEstimate est;
        est.c = c;
        est.estimate = MatrixProcess(grid, d);
        est.estimate_proof = MatrixProcess(grid, d);
        auto fill = [&](MatrixProcess& target, double trunc) {
            for (std::size_t i = 0; i < d; ++i) {
                const auto tv = truncated_variation(coords[i], trunc, TVAlgorithm::linear).running;
                for (std::size_t k = 0; k < grid.size(); ++k) target.at(k, i, i) = trunc * tv[k];
            }
            std::size_t p = 0;
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = i + 1; j < d; ++j, ++p) {
                    const auto plus =
                        truncated_variation(pairs[p].first, trunc, TVAlgorithm::linear).running;
                    const auto minus =
                        truncated_variation(pairs[p].second, trunc, TVAlgorithm::linear).running;
                    for (std::size_t k = 0; k < grid.size(); ++k) {
                        const double v = trunc * (plus[k] - minus[k]) / 4.0;
                        target.at(k, i, j) = v;
                        target.at(k, j, i) = v;
                    }
                }
            }
        };
        fill(est.estimate, c);
        fill(est.estimate_proof, 2.0 * c);
        if (reference) est.distance_to_reference = est.estimate.sup_distance(reference->cont_part);
        out[ci] = std::move(est);
    });
    return out;
}

PropositionResidual proposition_residual(const SampledPath& path, const DrawTrace& trace) {
    require_1d(path, "proposition_residual");
    if (trace.rho.empty()) throw ValidationError("empty drawup/drawdown trace");
    const double delta = trace.threshold;
    const double T = path.horizon();
    auto w = [&](double t) { return path.value_at(std::min(t, T), 0); };

    PropositionResidual r;
    r.level = trace.level;
    const std::size_t K = trace.rho.size() - 1;  // index of the last finite rho
    const bool up_first = trace.up_first();
    CompensatedSum residual;
    for (std::size_t k = 1; k <= K; ++k) {
        const bool reached = trace.next_reached[k];
        const double rho_next = reached ? trace.rho[k + 1] : T;
        const std::size_t i_kn = trace.last_before_next[k];
        const double tau = i_kn == 0 ? trace.rho[k] : trace.intra[k][i_kn - 1];
        // (-1)^{k+1} when the first switch is a drawup, (-1)^k otherwise.
        const bool odd = (k % 2) == 1;
        const double sign = (up_first == odd) ? 1.0 : -1.0;
        const double shifted = w(rho_next) + sign * delta * (reached ? 1.0 : 0.0) - w(tau);
        const double incr = w(rho_next) - w(tau);
        residual.add(delta * std::fabs(shifted) - incr * incr);
    }
    r.residual = residual.value();

    CompensatedSum qv;
    const auto& ct = trace.combined.times;
    for (std::size_t k = 1; k < ct.size(); ++k) {
        const double incr = w(ct[k]) - w(ct[k - 1]);
        qv.add(incr * incr);
    }
    r.combined_qv = qv.value();
    r.scaled_tv = delta * truncated_variation(path, delta, TVAlgorithm::linear).total;
    return r;
}

PropositionResidual proposition_residual(const SampledPath& path, int n) {
    return proposition_residual(path, drawupdown(path, n));
}

}  // namespace pathqv

#pragma once
// Shared fixtures and deliberately naive reference implementations.
// Nothing here calls the library code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "pathqv/paths.hpp"

namespace testsupport {

using pathqv::SampledPath;

inline std::vector<double> uniform_times(std::size_t m, double T) {
    std::vector<double> t(m);
    for (std::size_t k = 0; k < m; ++k) t[k] = T * static_cast<double>(k) / static_cast<double>(m);
    return t;
}

/// 1-d path with m samples; values are multiples of 2^-grid in [-1, 1] so every
/// sum the tests form is exact in double precision.
inline SampledPath dyadic_path(std::mt19937_64& gen, std::size_t m, int grid = 6) {
    const std::int64_t top = std::int64_t{1} << grid;
    std::uniform_int_distribution<std::int64_t> pick(-top, top);
    std::vector<double> v(m);
    for (auto& x : v) x = std::ldexp(static_cast<double>(pick(gen)), -grid);
    return pathqv::make_path(uniform_times(m, 1.0), std::move(v), 1.0);
}

/// d-dimensional path with arbitrary (non-dyadic) values in [-1, 1].
inline SampledPath real_path(std::mt19937_64& gen, std::size_t m, std::size_t d) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(m * d);
    for (auto& x : v) x = u(gen);
    return SampledPath(uniform_times(m, 1.0), std::move(v), d, 1.0);
}

/// Random step path of length 2..max_len with values in [-1, 1].
inline SampledPath small_path(std::mt19937_64& gen, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(2, max_len);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t m = len(gen);
    std::vector<double> v(m);
    for (auto& x : v) x = u(gen);
    return pathqv::make_path(uniform_times(m, 1.0), std::move(v), 1.0);
}

// ---------------------------------------------------------------------------
// Naive oracles

/// omega(t) by linear search.
inline double value_at(const SampledPath& p, double t, std::size_t i = 0) {
    std::size_t k = 0;
    for (std::size_t q = 0; q < p.size(); ++q)
        if (p.time(q) <= t) k = q;
    return p.value(k, i);
}

/// Q^{i,j,tau}_t straight from the definition.
inline double discrete_qv_at(const SampledPath& p, const std::vector<double>& tau, double t,
                             std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 1; k < tau.size(); ++k) {
        const double a = std::min(tau[k - 1], t), b = std::min(tau[k], t);
        s += (value_at(p, b, i) - value_at(p, a, i)) * (value_at(p, b, j) - value_at(p, a, j));
    }
    return s;
}

/// Truncated variation by enumerating every subset of sample indices (bitmask).
inline double tv_by_subsets(const std::vector<double>& x, double c) {
    const std::size_t m = x.size();
    double best = 0.0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
        double s = 0.0;
        int last = -1;
        for (std::size_t q = 0; q < m; ++q) {
            if (!(mask >> q & 1)) continue;
            if (last >= 0) s += std::max(std::fabs(x[q] - x[static_cast<std::size_t>(last)]) - c, 0.0);
            last = static_cast<int>(q);
        }
        best = std::max(best, s);
    }
    return best;
}

/// Lebesgue partition of a 1-d path traced literally: scan every later sample,
/// list all admissible dyadics in the closed bracket, keep the nearest
/// (smaller on ties). Values must be exact multiples of some 2^-k with k <= 40.
struct NaiveLebesgue {
    std::vector<double> times;
    std::vector<double> levels;
};

inline NaiveLebesgue naive_lebesgue(const SampledPath& p, int n) {
    const double grid = std::ldexp(1.0, -n);
    NaiveLebesgue out;
    double D = std::floor(p.value(0, 0) / grid) * grid;
    out.times.push_back(0.0);
    out.levels.push_back(D);
    std::size_t last = 0;
    for (std::size_t q = 1; q < p.size(); ++q) {
        const double a = p.value(last, 0), b = p.value(q, 0);
        const double lo = std::min(a, b), hi = std::max(a, b);
        bool found = false;
        double best = 0.0;
        for (double j = std::ceil(lo / grid); j * grid <= hi; j += 1.0) {
            const double cand = j * grid;
            if (cand == D) continue;
            if (!found || std::fabs(cand - b) < std::fabs(best - b)) {
                best = cand;
                found = true;
            }
        }
        if (found) {
            out.times.push_back(p.time(q));
            out.levels.push_back(best);
            D = best;
            last = q;
        }
    }
    if (out.times.back() != p.horizon()) out.times.push_back(p.horizon());
    return out;
}

/// Drawup/drawdown times by direct definition (running extremum recomputed
/// from scratch at every candidate; right-continuity puts omega(rho_k) in the
/// window (rho_k, t]).
struct NaiveDraw {
    std::vector<double> rho;
    std::vector<bool> up;  // direction of rho[k], k >= 1 (index 0 unused)
    std::vector<double> combined;
};

inline NaiveDraw naive_drawupdown(const SampledPath& p, int n) {
    const double delta = std::ldexp(1.0, -n);
    const std::size_t m = p.size();
    auto x = [&](std::size_t q) { return p.value(q, 0); };
    auto passage = [&](std::size_t from, bool up) -> std::size_t {
        for (std::size_t t = from + 1; t < m; ++t) {
            double ext = x(from);
            for (std::size_t s = from; s <= t; ++s) ext = up ? std::min(ext, x(s)) : std::max(ext, x(s));
            if ((up ? x(t) - ext : ext - x(t)) >= delta) return t;
        }
        return m;
    };
    NaiveDraw out;
    std::vector<std::size_t> idx{0};
    out.up.push_back(true);
    const std::size_t u = passage(0, true), d = passage(0, false);
    if (u < m || d < m) {
        bool up = u < d;
        idx.push_back(std::min(u, d));
        out.up.push_back(up);
        while (true) {
            up = !up;
            const std::size_t nx = passage(idx.back(), up);
            if (nx >= m) break;
            idx.push_back(nx);
            out.up.push_back(up);
        }
    }
    for (auto q : idx) out.rho.push_back(p.time(q));
    std::vector<double> all;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        all.push_back(p.time(idx[k]));
        const std::size_t end = k + 1 < idx.size() ? idx[k + 1] : m - 1;
        std::size_t anchor = idx[k];
        for (std::size_t q = idx[k] + 1; q <= end; ++q) {
            if (std::fabs(x(q) - x(anchor)) >= delta) {
                all.push_back(p.time(q));
                anchor = q;
            }
        }
    }
    all.push_back(p.horizon());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    out.combined = all;
    return out;
}

/// O_T by comparing every pair of samples inside each [tau_{k-1}, tau_k).
inline double naive_oscillation(const SampledPath& p, const std::vector<double>& tau) {
    double best = 0.0;
    for (std::size_t k = 1; k < tau.size(); ++k) {
        std::vector<std::size_t> inside;
        for (std::size_t q = 0; q < p.size(); ++q)
            if (p.time(q) >= tau[k - 1] && p.time(q) < tau[k]) inside.push_back(q);
        // the sample in force at tau_{k-1} also belongs to the interval
        std::size_t at = 0;
        for (std::size_t q = 0; q < p.size(); ++q)
            if (p.time(q) <= tau[k - 1]) at = q;
        inside.push_back(at);
        for (auto a : inside)
            for (auto b : inside) {
                double s = 0.0;
                for (std::size_t i = 0; i < p.dim(); ++i) {
                    const double dlt = p.value(a, i) - p.value(b, i);
                    s += dlt * dlt;
                }
                best = std::max(best, std::sqrt(s));
            }
    }
    return best;
}

}  // namespace testsupport

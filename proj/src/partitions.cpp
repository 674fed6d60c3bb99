#include "pathqv/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pathqv/error.hpp"

namespace pathqv {

void Partition::validate(double horizon) const {
    if (times.size() < 2) throw ValidationError("partition needs at least the points 0 and T");
    if (times.front() != 0.0) throw ValidationError("partition must start at 0");
    if (times.back() != horizon) throw ValidationError("partition must end at the horizon");
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1]))
            throw ValidationError("partition times must be strictly increasing (entry " +
                                  std::to_string(k) + ")");
    }
}

namespace {

void close_at_horizon(std::vector<double>& times, double horizon) {
    if (times.empty() || times.back() < horizon) times.push_back(horizon);
}

void require_1d(const SampledPath& path, const char* what) {
    if (path.dim() != 1) throw ValidationError(std::string(what) + " requires a 1-d path");
}

}  // namespace

Partition full_refinement(const SampledPath& path) {
    Partition p{{path.times().begin(), path.times().end()}, true};
    close_at_horizon(p.times, path.horizon());
    return p;
}

Partition merge(const std::vector<Partition>& parts, double horizon) {
    Partition out;
    out.exhausted = true;
    for (const auto& p : parts) {
        out.times.insert(out.times.end(), p.times.begin(), p.times.end());
        out.exhausted = out.exhausted && p.exhausted;
    }
    out.times.push_back(0.0);
    std::sort(out.times.begin(), out.times.end());
    out.times.erase(std::unique(out.times.begin(), out.times.end()), out.times.end());
    close_at_horizon(out.times, horizon);
    return out;
}

// ---------------------------------------------------------------------------
// Lebesgue partitions

namespace {

// Values scaled by 2^n are exact (ldexp only shifts the exponent), so the
// bracket test below is exact integer-vs-double arithmetic on the grid Z.
constexpr double kMaxScaled = 4611686018427387904.0;  // 2^62

double scaled(double v, int n) {
    const double s = std::ldexp(v, n);
    if (!(std::fabs(s) < kMaxScaled))
        throw ValidationError("dyadic level " + std::to_string(n) +
                              " too fine for path magnitude");
    return s;
}

std::int64_t floor_index(double s) { return static_cast<std::int64_t>(std::floor(s)); }
std::int64_t ceil_index(double s) { return static_cast<std::int64_t>(std::ceil(s)); }

}  // namespace

double LebesgueTrace::level_value(std::size_t k) const {
    return std::ldexp(static_cast<double>(levels.at(k)), -level);
}

LebesgueTrace lebesgue_1d(const SampledPath& path, int n) {
    require_1d(path, "lebesgue_1d");
    LebesgueTrace trace;
    trace.level = n;
    auto& times = trace.partition.times;

    double anchor = scaled(path.value(0, 0), n);
    std::int64_t last = floor_index(anchor);
    times.push_back(0.0);
    trace.levels.push_back(last);

    for (std::size_t k = 1; k < path.size(); ++k) {
        const double s = scaled(path.value(k, 0), n);
        const std::int64_t jlo = ceil_index(std::min(anchor, s));
        const std::int64_t jhi = floor_index(std::max(anchor, s));
        if (jlo > jhi) continue;
        if (jlo == jhi && jlo == last) continue;

        // Nearest admissible dyadic to the current value; ties go to the smaller one.
        const std::int64_t f = floor_index(s);
        const std::int64_t c = ceil_index(s);
        std::int64_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::int64_t j : {f - 1, f, c, c + 1}) {
            if (j < jlo || j > jhi || j == last) continue;
            const double dist = std::fabs(static_cast<double>(j) - s);
            if (dist < best_dist || (dist == best_dist && j < best)) {
                best = j;
                best_dist = dist;
            }
        }
        last = best;
        anchor = s;
        times.push_back(path.time(k));
        trace.levels.push_back(last);
    }
    close_at_horizon(times, path.horizon());
    trace.partition.exhausted = true;
    return trace;
}

Partition lebesgue_multi(const SampledPath& path, int n) {
    std::vector<Partition> parts;
    for (std::size_t i = 0; i < path.dim(); ++i) {
        parts.push_back(lebesgue_1d(path.coordinate(i), n).partition);
    }
    for (std::size_t i = 0; i < path.dim(); ++i) {
        for (std::size_t j = i + 1; j < path.dim(); ++j) {
            parts.push_back(lebesgue_1d(combine(path, i, j), n).partition);
        }
    }
    return merge(parts, path.horizon());
}

// ---------------------------------------------------------------------------
// Drawup / drawdown

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

// First index q > from where the rise above the running minimum (or the fall
// below the running maximum) reaches the threshold. The running extremum is
// seeded with the value at `from`: the step path keeps that value on
// (t_from, t_{from+1}).
std::size_t first_passage(std::span<const double> x, std::size_t from, Direction dir,
                          double threshold) {
    double extremum = x[from];
    for (std::size_t q = from + 1; q < x.size(); ++q) {
        if (dir == Direction::up) {
            extremum = std::min(extremum, x[q]);
            if (x[q] - extremum >= threshold) return q;
        } else {
            extremum = std::max(extremum, x[q]);
            if (extremum - x[q] >= threshold) return q;
        }
    }
    return npos;
}

Direction flip(Direction d) { return d == Direction::up ? Direction::down : Direction::up; }

}  // namespace

DrawTrace drawupdown(const SampledPath& path, int n) {
    require_1d(path, "drawupdown");
    DrawTrace trace;
    trace.level = n;
    trace.threshold = std::ldexp(1.0, -n);
    const auto x = path.values();
    const double delta = trace.threshold;

    std::vector<std::size_t> rho_idx{0};
    trace.direction.push_back(Direction::up);
    const std::size_t up = first_passage(x, 0, Direction::up, delta);
    const std::size_t down = first_passage(x, 0, Direction::down, delta);
    if (up != npos || down != npos) {
        Direction dir = (up < down) ? Direction::up : Direction::down;
        rho_idx.push_back(std::min(up, down));
        trace.direction[0] = dir;
        trace.direction.push_back(dir);
        for (;;) {
            dir = flip(dir);
            const std::size_t next = first_passage(x, rho_idx.back(), dir, delta);
            if (next == npos) break;
            rho_idx.push_back(next);
            trace.direction.push_back(dir);
        }
    }

    std::vector<double> all;
    for (std::size_t k = 0; k < rho_idx.size(); ++k) {
        trace.rho.push_back(path.time(rho_idx[k]));
        all.push_back(path.time(rho_idx[k]));
        const bool has_next = k + 1 < rho_idx.size();
        const std::size_t end = has_next ? rho_idx[k + 1] : path.size() - 1;
        std::vector<double> intra;
        std::size_t anchor = rho_idx[k];
        for (std::size_t q = rho_idx[k] + 1; q <= end; ++q) {
            if (std::fabs(x[q] - x[anchor]) >= delta) {
                intra.push_back(path.time(q));
                anchor = q;
            }
        }
        std::size_t i_kn = 0;
        if (has_next) {
            i_kn = intra.size();
            if (!intra.empty() && intra.back() == path.time(rho_idx[k + 1])) --i_kn;
        }
        all.insert(all.end(), intra.begin(), intra.end());
        trace.intra.push_back(std::move(intra));
        trace.last_before_next.push_back(i_kn);
        trace.next_reached.push_back(has_next);
    }

    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    close_at_horizon(all, path.horizon());
    trace.combined = Partition{std::move(all), true};
    return trace;
}

// ---------------------------------------------------------------------------

namespace {

double distance(const SampledPath& path, std::size_t a, std::size_t b) {
    if (path.dim() == 1) return std::fabs(path.value(a, 0) - path.value(b, 0));
    double s = 0.0;
    for (std::size_t i = 0; i < path.dim(); ++i) {
        const double d = path.value(a, i) - path.value(b, i);
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace

Partition epsilon_partition(const SampledPath& path, double eps) {
    if (!(eps > 0.0)) throw ValidationError("epsilon must be positive");
    Partition p;
    p.times.push_back(0.0);
    std::size_t anchor = 0;
    for (std::size_t q = 1; q < path.size(); ++q) {
        if (distance(path, q, anchor) > eps) {
            p.times.push_back(path.time(q));
            anchor = q;
        }
    }
    close_at_horizon(p.times, path.horizon());
    p.exhausted = true;
    return p;
}

SampledPath step_approximation(const SampledPath& path, const Partition& partition) {
    partition.validate(path.horizon());
    std::vector<double> times;
    std::vector<double> values;
    const std::size_t d = path.dim();
    for (std::size_t k = 0; k + 1 < partition.times.size(); ++k) {
        const double t = partition.times[k];
        const auto row = path.row(path.index_at(t));
        times.push_back(t);
        values.insert(values.end(), row.begin(), row.end());
    }
    const auto last = path.row(path.size() - 1);
    times.push_back(path.horizon());
    values.insert(values.end(), last.begin(), last.end());
    return SampledPath(std::move(times), std::move(values), d, path.horizon());
}

double oscillation(const SampledPath& path, const Partition& partition) {
    partition.validate(path.horizon());
    double result = 0.0;
    for (std::size_t k = 1; k < partition.times.size(); ++k) {
        const double lo = partition.times[k - 1];
        const double hi = partition.times[k];
        // Samples whose values are taken on [lo, hi): the one in force at lo
        // and every sample strictly inside.
        const std::size_t first = path.index_at(lo);
        std::size_t last = first;
        while (last + 1 < path.size() && path.time(last + 1) < hi) ++last;
        if (last == first) continue;
        if (path.dim() == 1) {
            double mn = path.value(first, 0);
            double mx = mn;
            for (std::size_t q = first + 1; q <= last; ++q) {
                mn = std::min(mn, path.value(q, 0));
                mx = std::max(mx, path.value(q, 0));
            }
            result = std::max(result, mx - mn);
        } else {
            // TODO: use a convex-hull diameter for d = 2; pairwise is quadratic in
            // the interval length.
            for (std::size_t a = first; a <= last; ++a)
                for (std::size_t b = a + 1; b <= last; ++b)
                    result = std::max(result, distance(path, a, b));
        }
    }
    return result;
}

}  // namespace pathqv

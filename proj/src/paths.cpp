#include "pathqv/paths.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pathqv/error.hpp"

namespace pathqv {

SampledPath::SampledPath(std::vector<double> times, std::vector<double> values, std::size_t dim,
                         double horizon)
    : times_(std::move(times)), values_(std::move(values)), dim_(dim), horizon_(horizon) {
    if (dim_ == 0) throw ValidationError("path dimension must be positive");
    if (!std::isfinite(horizon_) || horizon_ <= 0.0)
        throw ValidationError("horizon must be a finite positive number");
    if (times_.empty()) throw ValidationError("path needs at least one sample");
    if (values_.size() != times_.size() * dim_)
        throw ValidationError("values size does not match times.size() * dim");
    if (times_.front() != 0.0) throw ValidationError("first sample time must be 0");
    for (std::size_t k = 1; k < times_.size(); ++k) {
        if (!(times_[k] > times_[k - 1]))
            throw ValidationError("sample times must be strictly increasing (sample " +
                                  std::to_string(k) + ")");
    }
    if (times_.back() > horizon_) throw ValidationError("sample time beyond horizon");
    for (double v : values_) {
        if (!std::isfinite(v)) throw ValidationError("path values must be finite");
    }
}

std::size_t SampledPath::index_at(double t) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0;
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

std::optional<std::size_t> SampledPath::index_before(double t) const {
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return std::nullopt;
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

SampledPath SampledPath::coordinate(std::size_t coord) const {
    if (coord >= dim_) throw ValidationError("coordinate index out of range");
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k) v[k] = value(k, coord);
    return SampledPath(times_, std::move(v), 1, horizon_);
}

SampledPath make_path(std::vector<double> times, std::vector<double> values,
                      std::optional<double> horizon) {
    const double T = horizon ? *horizon : (times.empty() ? 0.0 : times.back());
    // A single sample at 0 with no explicit horizon gets the unit interval.
    const double resolved = (T > 0.0) ? T : 1.0;
    return SampledPath(std::move(times), std::move(values), 1, resolved);
}

SampledPath truncate(const SampledPath& path, double t) {
    const std::size_t last = path.index_at(t);
    std::vector<double> times(path.times().begin(), path.times().begin() + last + 1);
    std::vector<double> values(path.values().begin(),
                               path.values().begin() + (last + 1) * path.dim());
    return SampledPath(std::move(times), std::move(values), path.dim(), path.horizon());
}

SampledPath combine(const SampledPath& path, std::size_t i, std::size_t j, double sign) {
    if (i >= path.dim() || j >= path.dim()) throw ValidationError("coordinate index out of range");
    std::vector<double> v(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) v[k] = path.value(k, i) + sign * path.value(k, j);
    return SampledPath({path.times().begin(), path.times().end()}, std::move(v), 1,
                       path.horizon());
}

namespace {

double norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

}  // namespace

double sup_norm(const SampledPath& path) {
    double m = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) m = std::max(m, norm(path.row(k)));
    return m;
}

JumpList jumps(const SampledPath& path) {
    JumpList out;
    const std::size_t d = path.dim();
    for (std::size_t k = 1; k < path.size(); ++k) {
        std::vector<double> delta(d);
        bool nonzero = false;
        for (std::size_t i = 0; i < d; ++i) {
            delta[i] = path.value(k, i) - path.value(k - 1, i);
            nonzero = nonzero || delta[i] != 0.0;
        }
        if (nonzero) out.push_back({path.time(k), std::move(delta)});
    }
    return out;
}

// ---------------------------------------------------------------------------

PsiSpec::PsiSpec(Kind kind, double kappa, std::vector<std::pair<double, double>> knots)
    : kind_(kind), kappa_(kappa), knots_(std::move(knots)) {}

PsiSpec PsiSpec::identity() { return PsiSpec(Kind::identity, 0.0, {}); }

PsiSpec PsiSpec::constant(double kappa) {
    if (!(kappa >= 0.0)) throw ValidationError("psi constant must be nonnegative");
    return PsiSpec(Kind::constant, kappa, {});
}

PsiSpec PsiSpec::table(std::vector<std::pair<double, double>> knots) {
    if (knots.empty()) throw ValidationError("psi table needs at least one knot");
    for (std::size_t k = 0; k < knots.size(); ++k) {
        const auto [x, y] = knots[k];
        if (!std::isfinite(x) || !std::isfinite(y) || x < 0.0 || y < 0.0)
            throw ValidationError("psi table knots must be finite and nonnegative");
        if (k > 0 && (!(x > knots[k - 1].first) || y < knots[k - 1].second))
            throw ValidationError("psi table must be strictly increasing in x and nondecreasing in y");
    }
    return PsiSpec(Kind::table, 0.0, std::move(knots));
}

double PsiSpec::operator()(double x) const {
    switch (kind_) {
        case Kind::identity:
            return x;
        case Kind::constant:
            return kappa_;
        case Kind::table: {
            if (x <= knots_.front().first) return knots_.front().second;
            if (x >= knots_.back().first) return knots_.back().second;
            auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                                       [](double v, const auto& kn) { return v < kn.first; });
            const auto [x1, y1] = *it;
            const auto [x0, y0] = *(it - 1);
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
    }
    return 0.0;
}

MembershipReport check_membership(const SampledPath& path, const PsiSpec& psi) {
    MembershipReport report;
    double running_sup = norm(path.row(0));
    for (std::size_t k = 1; k < path.size(); ++k) {
        const double bound = -psi(running_sup);
        for (std::size_t i = 0; i < path.dim(); ++i) {
            const double jump = path.value(k, i) - path.value(k - 1, i);
            if (jump < bound) {
                report.member = false;
                report.first_violation = MembershipViolation{path.time(k), i, jump, bound};
                return report;
            }
        }
        running_sup = std::max(running_sup, norm(path.row(k)));
    }
    return report;
}

// ---------------------------------------------------------------------------

SampledPath walk_from_signs(const std::vector<bool>& up, double horizon, double step_size) {
    const std::size_t n = up.size();
    if (n == 0) throw ValidationError("walk needs at least one step");
    if (!(step_size > 0.0)) throw ValidationError("step size must be positive");
    if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
    std::vector<double> times(n + 1);
    std::vector<double> values(n + 1);
    times[0] = 0.0;
    values[0] = 0.0;
    const double dt = horizon / static_cast<double>(n);
    for (std::size_t k = 1; k <= n; ++k) {
        times[k] = (k == n) ? horizon : static_cast<double>(k) * dt;
        values[k] = values[k - 1] + (up[k - 1] ? step_size : -step_size);
    }
    return SampledPath(std::move(times), std::move(values), 1, horizon);
}

SampledPath synth_walk(std::size_t steps, double horizon, double step_size, std::uint64_t seed) {
    if (steps == 0) throw ValidationError("walk needs at least one step");
    std::mt19937_64 gen(seed);
    std::vector<bool> up(steps);
    for (std::size_t k = 0; k < steps; ++k) up[k] = (gen() >> 63) == 0;
    return walk_from_signs(up, horizon, step_size);
}

SampledPath synth_oscillator(std::size_t n_max) {
    if (n_max == 0) throw ValidationError("oscillator needs n_max >= 1");
    std::vector<double> times{0.0};
    std::vector<double> values{0.0};
    for (std::size_t n = n_max; n >= 1; --n) {
        const double lo = 1.0 / static_cast<double>(n + 1);
        const double hi = 1.0 / static_cast<double>(n);
        const double amplitude = 1.0 / std::sqrt(static_cast<double>(n));
        const std::size_t pieces = 2 * n * n;
        const double dt = (hi - lo) / static_cast<double>(pieces);
        for (std::size_t j = 1; j <= pieces; ++j) {
            times.push_back(j == pieces ? hi : lo + static_cast<double>(j) * dt);
            values.push_back(j % 2 == 1 ? amplitude : 0.0);
        }
    }
    return SampledPath(std::move(times), std::move(values), 1, 1.0);
}

}  // namespace pathqv

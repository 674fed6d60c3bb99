#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "pathqv/error.hpp"
#include "pathqv/integrals.hpp"
#include "pathqv/partitions.hpp"
#include "pathqv/paths.hpp"
#include "pathqv/quadvar.hpp"
#include "pathqv/truncvar.hpp"
#include "support.hpp"

using namespace pathqv;

namespace {

SampledPath path_of(std::vector<double> v) {
    auto t = testsupport::uniform_times(v.size(), 1.0);
    return make_path(std::move(t), std::move(v), 1.0);
}

/// sum over (u_{k-1}, u_k] of g(u_{k-1}) (x(u_k ^ t) - x(u_{k-1} ^ t)), by definition.
double naive_riemann(const SampledPath& g, const SampledPath& x, const std::vector<double>& tau,
                     double t) {
    double s = 0.0;
    for (std::size_t k = 1; k < tau.size(); ++k) {
        const double a = std::min(tau[k - 1], t), b = std::min(tau[k], t);
        s += testsupport::value_at(g, tau[k - 1]) * (testsupport::value_at(x, b) - testsupport::value_at(x, a));
    }
    return s;
}

}  // namespace

TEST_CASE("align merges grids and holds values") {
    const auto a = make_path({0, 2}, {1, 3}, 4.0);
    const auto b = make_path({0, 1, 3}, {5, 6, 7}, 4.0);
    const auto p = align(a, b);
    CHECK(std::vector<double>(p.times().begin(), p.times().end()) == std::vector<double>{0, 1, 2, 3});
    CHECK(p.value(1, 0) == 1);
    CHECK(p.value(2, 0) == 3);
    CHECK(p.value(2, 1) == 6);
    CHECK_THROWS_AS(align(a, make_path({0, 1}, {0, 1}, 5.0)), ValidationError);
}

TEST_CASE("Lebesgue-Stieltjes integral against a step integrator") {
    const auto g = make_path({0, 1, 2}, {1, 2, 3});
    const auto a = make_path({0, 1, 2}, {0, 0, 1});
    // one jump of a at t = 2, integrand left limit g(2-) = 2
    const auto r = lebesgue_stieltjes(g, a);
    CHECK(r.values == std::vector<double>{0, 0, 2});
    CHECK(lebesgue_stieltjes(g, make_path({0, 1, 2}, {4, 4, 4})).final_value() == 0);

    std::mt19937_64 gen(79);
    for (int rep = 0; rep < 50; ++rep) {
        const auto x = testsupport::dyadic_path(gen, 30);
        const auto one = make_path({0}, {1}, 1.0);
        const auto tel = lebesgue_stieltjes(one, x);
        for (std::size_t k = 0; k < x.size(); ++k) CHECK(tel.values[k] == x.value(k, 0) - x.value(0, 0));
    }
}

TEST_CASE("Riemann sums match the definition on arbitrary partitions") {
    std::mt19937_64 gen(83);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const auto g = testsupport::real_path(gen, 20, 1);
        const auto x = testsupport::real_path(gen, 25, 1);
        std::vector<double> tau{0.0};
        while (true) {
            const double next = tau.back() + 0.15 * u(gen);
            if (next >= 1.0) break;
            tau.push_back(next);
        }
        tau.push_back(1.0);
        const auto r = riemann_sum(g, x, Partition{tau});
        for (std::size_t k = 0; k < r.times.size(); ++k)
            CHECK(r.values[k] == doctest::Approx(naive_riemann(g, x, tau, r.times[k])).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("Follmer ladder: full refinement equals the jump sum, coarse is one term") {
    std::mt19937_64 gen(89);
    for (int rep = 0; rep < 50; ++rep) {
        const auto g = testsupport::dyadic_path(gen, 30);
        const auto x = testsupport::dyadic_path(gen, 30);
        const auto aligned = align(g, x);
        const auto full = follmer_integral(g, x, {Partition{{0, 1}}, full_refinement(aligned)});
        const auto exact = lebesgue_stieltjes(g, x);
        CHECK(full.per_level[1].sup_distance(exact) == 0.0);
        const auto& coarse = full.per_level[0];
        CHECK(coarse.final_value() == g.value(0, 0) * (x.value(x.size() - 1, 0) - x.value(0, 0)));
        CHECK(full.report.levels == std::vector<int>{0, 1});
    }
}

TEST_CASE("Follmer ladder on a walk along Lebesgue partitions") {
    const auto w = synth_walk(4096, 1.0, 1.0 / 64, 7);
    std::vector<Partition> ladder;
    std::vector<int> labels;
    for (int n = 3; n <= 8; ++n) {
        ladder.push_back(lebesgue_1d(w, n).partition);
        labels.push_back(n);
    }
    const auto f = follmer_integral(w, w, ladder, 1e-9, labels);
    // finest rung: every sample step is a crossing, so the sum is the exact one
    CHECK(f.per_level.back().sup_distance(lebesgue_stieltjes(w, w)) <= 1e-12);
    CHECK(f.report.sup_diffs.back() <= 1e-12);
    // w^2(T) - w^2(0) = 2 int w(s-) dw + [w, w]_T
    const double T2 = std::pow(w.value(w.size() - 1, 0), 2);
    CHECK(T2 == doctest::Approx(2 * f.per_level.back().final_value() + 1.0).epsilon(1e-12));
    CHECK_THROWS_AS(follmer_integral(w, w, ladder, 1e-9, {1, 2}), ValidationError);
}

TEST_CASE("simple strategy integrals") {
    const auto p = make_path({0, 1, 2, 3}, {0, 1, 3, 2}, 4.0);
    const auto zero = simple_strategy_integral({{0, 4}, {{0.0}}}, p);
    for (double v : zero.values) CHECK(v == 0);

    const auto hold = simple_strategy_integral({{0, 4}, {{1.0}}}, p);
    for (std::size_t k = 0; k < p.size(); ++k) CHECK(hold.values[k] == p.value(k, 0));

    // hold 2 on (0, 1], then -1 on (1, inf): 2*1 + (-1)*(omega(t) - 1)
    const auto two = simple_strategy_integral(
        {{0, 1, std::numeric_limits<double>::infinity()}, {{2.0}, {-1.0}}}, p);
    CHECK(two.values == std::vector<double>{0, 2, 0, 1});

    const SampledPath q({0, 1, 2}, {0, 0, 1, 5, 2, 7}, 2, 2);
    const auto e2 = simple_strategy_integral({{0, 2}, {{0.0, 1.0}}}, q);
    CHECK(e2.values == std::vector<double>{0, 5, 7});

    CHECK_THROWS_AS(simple_strategy_integral({{0, 1}, {{1.0}, {2.0}}}, p), ValidationError);
    CHECK_THROWS_AS(simple_strategy_integral({{0.5, 1}, {{1.0}}}, p), ValidationError);
    CHECK_THROWS_AS(simple_strategy_integral({{0, 1}, {{1.0, 2.0}}}, p), ValidationError);
    CHECK_THROWS_AS(simple_strategy_integral({{0, 2, 1}, {{1.0}, {1.0}}}, p), ValidationError);
}

TEST_CASE("simple strategy along a partition equals the Riemann sum") {
    // weights g(tau_k) on (tau_k, tau_{k+1}] reproduce the left-point sum
    std::mt19937_64 gen(97);
    for (int rep = 0; rep < 50; ++rep) {
        const auto x = testsupport::real_path(gen, 40, 1);
        const auto part = lebesgue_1d(x, 2 + rep % 4).partition;
        SimpleStrategy h{part.times, {}};
        for (std::size_t k = 0; k + 1 < part.times.size(); ++k) h.weights.push_back({x.value_at(part.times[k], 0)});
        const auto a = simple_strategy_integral(h, x);
        const auto b = riemann_sum(x, x, part);
        CHECK(a.sup_distance(b) <= 1e-12);
    }
}

TEST_CASE("typical integration by parts: zero along the same partition") {
    std::mt19937_64 gen(101);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t d = 1 + rep % 3;
        const auto p = testsupport::real_path(gen, 80, d);
        const Partition part = rep % 2 ? full_refinement(p) : lebesgue_multi(p, 3);
        const auto q = discrete_qv(p, part);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) CHECK(ibp_residual_typical(p, q, i, j, part).sup_residual <= 1e-12);
    }
    const auto flat = make_path({0, 1}, {2, 2});
    const auto qf = discrete_qv(flat, full_refinement(flat));
    CHECK(ibp_residual_typical(flat, qf, 0, 0, std::vector<Partition>{full_refinement(flat)}).sup_residual == 0);
    CHECK_THROWS_AS(ibp_residual_typical(flat, qf, 0, 1, full_refinement(flat)), ValidationError);
}

TEST_CASE("typical integration by parts against the limiting QV on a walk") {
    const auto w = synth_walk(1 << 12, 1.0, 1.0 / 64, 11);
    const auto lim = qv_limit(w, 3, 8, 1e-12);
    double prev = INFINITY;
    for (int n = 4; n <= 8; ++n) {
        const double r = ibp_residual_typical(w, lim.qv, 0, 0, lebesgue_1d(w, n).partition).sup_residual;
        CHECK(r <= prev + 1e-12);
        prev = r;
    }
    CHECK(prev <= 1e-12);
}

TEST_CASE("integration by parts against the regularized path") {
    std::mt19937_64 gen(103);
    for (int rep = 0; rep < 40; ++rep) {
        const auto p = rep % 2 ? synth_walk(500, 1.0, 0.03, gen()) : testsupport::real_path(gen, 200, 1);
        for (int e = 1; e <= 5; ++e) {
            const auto reg = regularize(p, std::ldexp(1.0, -e));
            const auto r = ibp_residual_fv(p, reg.path, 0, 0, full_refinement(p));
            CHECK(r.sup_residual <= 1e-12);
        }
        const auto cst = make_path({0}, {0.7}, 1.0);
        CHECK(ibp_residual_fv(p, cst, 0, 0, full_refinement(p)).sup_residual <= 1e-12);
        CHECK(ibp_residual_fv(cst, p, 0, 0, full_refinement(p)).sup_residual <= 1e-12);
        const auto zero = make_path({0}, {0.0}, 1.0);
        CHECK(ibp_residual_fv(zero, p, 0, 0, full_refinement(p)).sup_residual == 0);
    }
}

TEST_CASE("co-jump sums") {
    std::mt19937_64 gen(107);
    for (int rep = 0; rep < 50; ++rep) {
        const auto p = testsupport::real_path(gen, 40, 2);
        const auto all = co_jump_sum(p.coordinate(0), p.coordinate(1));
        CHECK(all.final_value() == doctest::Approx(jump_qv(p).at(p.size() - 1, 0, 1)).epsilon(1e-12));
        CHECK(co_jump_sum(p.coordinate(0), p.coordinate(1), 5.0).final_value() == 0);
    }
    // jumps of b: +0.5 at 1, -2 at 2, +1 at 3; a jumps by 1, 2, 3 at the same times
    const auto a = make_path({0, 1, 2, 3}, {0, 1, 3, 6});
    const auto b = make_path({0, 1, 2, 3}, {0, 0.5, -1.5, -0.5});
    CHECK(co_jump_sum(a, b, 0.75).values == std::vector<double>{0, 0, -4, -1});
    CHECK(co_jump_sum(a, b, 1.5).final_value() == -4);
    CHECK(co_jump_sum(a, b, 0.0).final_value() == doctest::Approx(0.5 - 4 + 3));
    CHECK_THROWS_AS(co_jump_sum(a, b, 1.0), ValidationError);
    CHECK_THROWS_AS(co_jump_sum(a, b, -1.0), ValidationError);
}

TEST_CASE("co-jump sums: Cauchy-Schwarz and small-jump bounds") {
    std::mt19937_64 gen(109);
    for (int rep = 0; rep < 50; ++rep) {
        const auto a = testsupport::real_path(gen, 60, 1);
        const auto b = testsupport::real_path(gen, 60, 1);
        const auto ja = jump_qv(a), jb = jump_qv(b);
        const double full = co_jump_sum(a, b).final_value();
        CHECK(std::fabs(full) <= std::sqrt(ja.at(a.size() - 1, 0, 0) * jb.at(b.size() - 1, 0, 0)) + 1e-12);
        // jumps of b at most eps contribute at most eps TV^0(a)
        const double eps = 0.3;
        const double small = full - co_jump_sum(a, b, eps).final_value();
        CHECK(std::fabs(small) <= eps * total_variation(a).back() + 1e-12);
    }
}

TEST_CASE("filtered co-jumps: |unfiltered - filtered| <= sqrt(eps TV^0(b) [a,a]_T)") {
    std::mt19937_64 gen(127);
    for (int rep = 0; rep < 50; ++rep) {
        const auto a = testsupport::real_path(gen, 80, 1);
        const auto b = testsupport::real_path(gen, 80, 1);
        const double qa = jump_qv(a).at(a.size() - 1, 0, 0);
        const double tvb = total_variation(b).back();
        for (double eps : {0.05, 0.3, 1.1}) {
            const double gap = co_jump_sum(a, b).final_value() - co_jump_sum(a, b, eps).final_value();
            CHECK(std::fabs(gap) <= std::sqrt(eps) * std::sqrt(tvb) * std::sqrt(qa) + 1e-12);
        }
    }
}

TEST_CASE("step approximation along an epsilon partition moves the integral by at most eps TV^0(a)") {
    std::mt19937_64 gen(131);
    for (int rep = 0; rep < 50; ++rep) {
        const auto g = testsupport::real_path(gen, 100, 1);
        const auto a = testsupport::real_path(gen, 60, 1);
        for (double eps : {0.02, 0.2, 0.7}) {
            const auto ge = step_approximation(g, epsilon_partition(g, eps));
            for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::fabs(g.value(k, 0) - ge.value_at(g.time(k), 0)) <= eps);
            const double diff =
                lebesgue_stieltjes(g, a).final_value() - lebesgue_stieltjes(ge, a).final_value();
            CHECK(std::fabs(diff) <= eps * total_variation(a).back() + 1e-12);
        }
    }
}

TEST_CASE("strategy weights regenerate from the truncated path") {
    // h_k = omega(tau_k) on Lebesgue times: rebuilding from the path stopped at
    // tau_k reproduces every weight fixed by then
    std::mt19937_64 gen(137);
    auto strategy = [](const SampledPath& x) {
        const auto part = lebesgue_1d(x, 3).partition;
        SimpleStrategy h{part.times, {}};
        for (std::size_t k = 0; k + 1 < part.times.size(); ++k) h.weights.push_back({x.value_at(part.times[k], 0)});
        return h;
    };
    for (int rep = 0; rep < 30; ++rep) {
        const auto x = testsupport::real_path(gen, 60, 1);
        const auto full = strategy(x);
        for (std::size_t k = 1; k + 1 < full.times.size(); ++k) {
            const auto again = strategy(truncate(x, full.times[k]));
            REQUIRE(again.weights.size() > k);
            for (std::size_t q = 0; q <= k; ++q) CHECK(again.weights[q] == full.weights[q]);
        }
    }
}

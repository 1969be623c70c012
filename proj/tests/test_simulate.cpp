#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "escape/errors.hpp"
#include "escape/simulate.hpp"

using namespace escape;

namespace {

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> x, std::vector<double> y) {
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    double dmax = 0.0;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i] <= y[j])
            ++i;
        else
            ++j;
        const double fx = static_cast<double>(i) / x.size();
        const double fy = static_cast<double>(j) / y.size();
        dmax = std::max(dmax, std::abs(fx - fy));
    }
    return dmax;
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("wilson interval") {
    const auto [lo, hi] = wilson_interval(0, 100);
    CHECK(lo <= 1e-15);
    CHECK(hi > 0.0);
    CHECK(hi < 0.05);
    const auto [lo2, hi2] = wilson_interval(50, 100);
    CHECK(lo2 < 0.5);
    CHECK(hi2 > 0.5);
    CHECK(hi2 - lo2 < 0.2);
    CHECK_THROWS_AS(wilson_interval(5, 0), domain_error);
    CHECK_THROWS_AS(wilson_interval(5, 4), domain_error);
}

TEST_CASE("wilson interval covers at about 95%") {
    const double p = 0.1;
    const std::uint64_t n = 200;
    int covered = 0;
    const int reps = 1000;
    Stream rng(77, 0);
    for (int rep = 0; rep < reps; ++rep) {
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < n; ++i) hits += rng.uniform() < p;
        const auto [lo, hi] = wilson_interval(hits, n);
        covered += (p >= lo && p <= hi);
    }
    const double coverage = static_cast<double>(covered) / reps;
    CHECK(coverage > 0.92);
    CHECK(coverage < 0.98);
}

TEST_CASE("subordinator increments match the Laplace transform") {
    const std::size_t n = 200000;
    for (double gamma : {0.3, 0.5, 0.7}) {
        Stream rng(11, 3);
        const double lambda = 1.0;
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::exp(-lambda * sample_subordinator_increment(gamma, 1.0, rng));
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / n;
        const double sd = std::sqrt((sum2 / n - mean * mean) / n);
        const double target = std::exp(-std::pow(lambda, gamma));
        CHECK(std::abs(mean - target) < 4.0 * sd);
    }
    Stream rng(1, 1);
    CHECK_THROWS_AS(sample_subordinator_increment(1.0, 1.0, rng), domain_error);
    CHECK_THROWS_AS(sample_subordinator_increment(0.5, 0.0, rng), domain_error);
}

TEST_CASE("subordinator increments scale as dt^(1/gamma)") {
    const double gamma = 0.5;
    const std::size_t n = 100000;
    std::vector<double> a(n), b(n);
    Stream ra(5, 1), rb(5, 2);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = sample_subordinator_increment(gamma, 2.0, ra);
        b[i] = 4.0 * sample_subordinator_increment(gamma, 1.0, rb);  // 2^(1/gamma) = 4
    }
    // 1% KS critical value for two samples of 1e5.
    CHECK(ks_statistic(a, b) < 1.628 * std::sqrt(2.0 / n));
}

TEST_CASE("increment marginals") {
    const std::size_t n = 100000;

    SUBCASE("alpha = 2: coordinate variance 2 dt") {
        const ProcessSpec spec{2.0, 2};
        const double dt = 0.7;
        Stream rng(9, 0);
        double out[2];
        double sum2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sample_increment(spec, dt, rng, out);
            sum2 += out[0] * out[0] + out[1] * out[1];
        }
        const double var = sum2 / (2.0 * n);
        const double sd = 2.0 * dt * std::sqrt(2.0 / (2.0 * n));
        CHECK(std::abs(var - 2.0 * dt) < 4.0 * sd);
    }

    SUBCASE("alpha = 1: standard Cauchy marginal over dt = 1") {
        const ProcessSpec spec{1.0, 1};
        Stream rng(10, 0);
        double out[1];
        std::size_t below = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sample_increment(spec, 1.0, rng, out);
            below += out[0] <= 1.0;
        }
        const double target = 0.5 + std::atan(1.0) / M_PI;  // 0.75
        const double sd = std::sqrt(target * (1.0 - target) / n);
        CHECK(std::abs(static_cast<double>(below) / n - target) < 4.0 * sd);
    }

    SUBCASE("alpha = 1: self-similarity |X_4| ~ 4 |X_1|") {
        const ProcessSpec spec{1.0, 1};
        std::vector<double> a(n), b(n);
        Stream ra(12, 1), rb(12, 2);
        double out[1];
        for (std::size_t i = 0; i < n; ++i) {
            sample_increment(spec, 4.0, ra, out);
            a[i] = std::abs(out[0]);
            sample_increment(spec, 1.0, rb, out);
            b[i] = 4.0 * std::abs(out[0]);
        }
        CHECK(ks_statistic(a, b) < 1.628 * std::sqrt(2.0 / n));
    }
}

TEST_CASE("estimate_q is deterministic and worker-count independent") {
    const ProcessSpec spec{1.0, 1};
    const LowerRateCandidate cand{RateFunction::power(1.0), ScaleFunction::power(1.0)};
    SimulationPlan plan;
    plan.t_start = 2.0;
    plan.t_max = 20.0;
    plan.grid_ratio = 1.1;
    plan.n_paths = 10000;
    plan.seed = 42;
    const auto e1 = estimate_q(spec, cand, plan, 1);
    const auto e4 = estimate_q(spec, cand, plan, 4);
    const auto e16 = estimate_q(spec, cand, plan, 16);
    CHECK(e1.n_hits == e4.n_hits);
    CHECK(e1.n_hits == e16.n_hits);
    CHECK(e1.q_hat == e4.q_hat);
    CHECK(e1.q_hat_coarse == e16.q_hat_coarse);
    CHECK(e1.q_hat > 0.0);
    CHECK(e1.ci_low <= e1.q_hat);
    CHECK(e1.ci_high >= e1.q_hat);
    // Coarse companion can only under-count.
    CHECK(e1.refinement_delta >= 0.0);

    // Bit-identical rerun.
    const auto e1b = estimate_q(spec, cand, plan, 1);
    CHECK(e1.q_hat == e1b.q_hat);
    CHECK(e1.truncation_bound == e1b.truncation_bound);

    // Antithetic variant stays deterministic and sane.
    plan.antithetic = true;
    const auto ea = estimate_q(spec, cand, plan, 2);
    const auto eb = estimate_q(spec, cand, plan, 8);
    CHECK(ea.n_hits == eb.n_hits);
    CHECK(ea.q_hat > 0.0);
}

TEST_CASE("estimate_q is pathwise monotone in t_max on a shared grid") {
    const ProcessSpec spec{1.0, 1};
    const LowerRateCandidate cand{RateFunction::power(1.0), ScaleFunction::power(1.0)};
    SimulationPlan plan;
    plan.t_start = 2.0;
    plan.grid_ratio = 1.3;
    plan.n_paths = 5000;
    plan.seed = 3;
    // t_max values built by the same repeated multiplication the grid uses,
    // so the shorter grid is an exact prefix of the longer one.
    double tm = plan.t_start;
    for (int k = 0; k < 6; ++k) tm *= plan.grid_ratio;
    plan.t_max = tm;
    const auto shorter = estimate_q(spec, cand, plan);
    for (int k = 0; k < 6; ++k) tm *= plan.grid_ratio;
    plan.t_max = tm;
    const auto longer = estimate_q(spec, cand, plan);
    CHECK(longer.n_hits >= shorter.n_hits);
    CHECK(longer.q_hat >= shorter.q_hat);
}

TEST_CASE("vanishing boundary radius yields zero crossings") {
    const ProcessSpec spec{2.0, 1};
    const LowerRateCandidate cand{RateFunction::power(600.0), ScaleFunction::power(2.0)};
    SimulationPlan plan;
    plan.t_start = 2.0;
    plan.t_max = 8.0;
    plan.grid_ratio = 1.5;
    plan.n_paths = 2000;
    const auto est = estimate_q(spec, cand, plan);
    CHECK(est.n_hits == 0);
    CHECK(est.q_hat == 0.0);
    // No truncation route covers alpha = 2 in d = 1.
    CHECK(est.truncation_status == TruncationStatus::Unbounded);
    CHECK(est.truncation_bound == 1.0);
}

TEST_CASE("truncation bound routes") {
    SUBCASE("exact Brownian route in d = 3 tightens as t_max grows") {
        const ProcessSpec spec{2.0, 3};
        const LowerRateCandidate cand{RateFunction::power(0.25), ScaleFunction::power(2.0)};
        const auto b1 = truncation_bound_after(spec, cand, 1e4);
        const auto b2 = truncation_bound_after(spec, cand, 4e4);
        CHECK(b1.second == TruncationStatus::Bounded);
        CHECK(b2.second == TruncationStatus::Bounded);
        CHECK(b2.first < b1.first);
        CHECK(b1.first < 1.0);
        CHECK(b1.first > 0.0);
    }

    SUBCASE("windowed route for the transient 1-stable process") {
        const ProcessSpec spec{1.0, 3};
        // Decaying boundary radius varphi(t) = 1/t.
        const LowerRateCandidate cand{RateFunction::power(2.0), ScaleFunction::power(1.0)};
        const auto b1 = truncation_bound_after(spec, cand, 1e3);
        const auto b2 = truncation_bound_after(spec, cand, 4e3);
        CHECK(b1.second == TruncationStatus::Bounded);
        CHECK(b2.first < b1.first);
        CHECK(b1.first < 1.0);
    }

    SUBCASE("windowed route for the critical Cauchy process") {
        const ProcessSpec spec{1.0, 1};
        // varphi(t) = t exp(-sqrt(t)); the log-window bound sums geometrically.
        const LowerRateCandidate cand{RateFunction::exp_power(0.5), ScaleFunction::power(1.0)};
        const auto b1 = truncation_bound_after(spec, cand, 1e3);
        const auto b2 = truncation_bound_after(spec, cand, 4e3);
        CHECK(b1.second == TruncationStatus::Bounded);
        CHECK(b2.first < b1.first);
        CHECK(b1.first < 1.0);
    }
}

TEST_CASE("estimate_hitting basics") {
    const ProcessSpec cauchy{1.0, 1};

    SUBCASE("gigantic target ball is hit immediately") {
        const auto est = estimate_hitting(cauchy, 1.0, 2.0, 1e9, 500, 1);
        CHECK(est.p_hat == 1.0);
    }

    SUBCASE("shrinking window reduces to the time-a marginal") {
        const double a = 1.0, r = 0.5;
        const auto est = estimate_hitting(cauchy, a, a * (1.0 + 1e-7), r, 50000, 21);
        const double target = 2.0 / M_PI * std::atan(r / a);
        const double sd = std::sqrt(target * (1.0 - target) / est.n_paths);
        CHECK(est.p_hat >= target - 4.0 * sd);  // window can only add hits
        CHECK(est.p_hat <= target + 4.0 * sd + 1e-3);
    }

    SUBCASE("pathwise monotone under window extension on a shared step size") {
        // Same step h and same seed: the shorter grid is a prefix.
        const auto small_w = estimate_hitting(cauchy, 1.0, 2.0, 0.4, 20000, 8, 64);
        const auto large_w = estimate_hitting(cauchy, 1.0, 3.0, 0.4, 20000, 8, 128);
        CHECK(large_w.n_hits >= small_w.n_hits);
        // Larger ball on the identical grid also dominates pathwise.
        const auto large_r = estimate_hitting(cauchy, 1.0, 2.0, 0.6, 20000, 8, 64);
        CHECK(large_r.n_hits >= small_w.n_hits);
    }

    SUBCASE("argument guards") {
        CHECK_THROWS_AS(estimate_hitting(cauchy, 0.0, 1.0, 0.5, 10, 1), domain_error);
        CHECK_THROWS_AS(estimate_hitting(cauchy, 2.0, 1.0, 0.5, 10, 1), domain_error);
        CHECK_THROWS_AS(estimate_hitting(cauchy, 1.0, 2.0, 0.0, 10, 1), domain_error);
    }
}

TEST_CASE("plan and spec validation") {
    CHECK_THROWS_AS((ProcessSpec{2.5, 1}).validate(), domain_error);
    CHECK_THROWS_AS((ProcessSpec{1.0, 0}).validate(), domain_error);
    SimulationPlan plan;
    plan.t_max = plan.t_start;
    CHECK_THROWS_AS(plan.validate(), domain_error);
    plan.t_max = 10.0;
    plan.grid_ratio = 1.0;
    CHECK_THROWS_AS(plan.validate(), domain_error);
}

}  // TEST_SUITE

#include "escape/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "escape/errors.hpp"
#include "escape/hitting_bounds.hpp"
#include "escape/quadrature.hpp"
#include "escape/special.hpp"

namespace escape {

void ProcessSpec::validate() const {
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw domain_error("process spec: alpha must lie in (0,2]");
    if (dim < 1) throw domain_error("process spec: dim must be >= 1");
}

void SimulationPlan::validate() const {
    if (!(t_start > 0.0)) throw domain_error("plan: t_start must be > 0");
    if (!(t_max > t_start)) throw domain_error("plan: t_max must exceed t_start");
    if (!(grid_ratio > 1.0)) throw domain_error("plan: grid_ratio must be > 1");
    if (n_paths == 0) throw domain_error("plan: n_paths must be > 0");
}

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t n) {
    if (n == 0) throw domain_error("wilson_interval: n must be > 0");
    if (hits > n) throw domain_error("wilson_interval: hits exceed n");
    constexpr double z = 1.959963984540054;  // 97.5% normal quantile
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nn;
    const double denom = 1.0 + z * z / nn;
    const double center = (p + z * z / (2.0 * nn)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double sample_subordinator_increment(double gamma, double dt, Stream& rng) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw domain_error("subordinator increment: gamma must lie in (0,1)");
    if (!(dt > 0.0)) throw domain_error("subordinator increment: dt must be > 0");
    // Kanter's method: S = (A(U)/E)^((1-gamma)/gamma) is standard one-sided
    // gamma-stable; dt^(1/gamma) S is the increment over dt.
    const double u = rng.uniform(0.0, M_PI);
    const double e = rng.exponential();
    const double A = std::pow(std::sin(gamma * u), gamma / (1.0 - gamma)) *
                     std::sin((1.0 - gamma) * u) /
                     std::pow(std::sin(u), 1.0 / (1.0 - gamma));
    return std::pow(dt, 1.0 / gamma) * std::pow(A / e, (1.0 - gamma) / gamma);
}

void sample_increment(const ProcessSpec& spec, double dt, Stream& rng, double* out) {
    if (!(dt > 0.0)) throw domain_error("sample_increment: dt must be > 0");
    double clock = dt;
    if (spec.alpha < 2.0)
        clock = sample_subordinator_increment(0.5 * spec.alpha, dt, rng);
    const double sd = std::sqrt(2.0 * clock);
    for (int i = 0; i < spec.dim; ++i) out[i] = sd * rng.normal();
}

namespace {

double norm_of(const double* x, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += x[i] * x[i];
    return std::sqrt(s);
}

double sup_varphi(const LowerRateCandidate& cand, double lo, double hi) {
    double best = 0.0;
    for (int i = 0; i <= 8; ++i) {
        const double u = lo * std::pow(hi / lo, i / 8.0);
        best = std::max(best, eval_varphi(cand, u));
    }
    return best;
}

// Exact Brownian d=3 route: after T the chance of ever touching a ball of
// radius r is E[min(1, r/|X_T|)] with |X_T| = sqrt(2T) chi_3.
double brownian3_ruin(double T, double r) {
    const double z = r / std::sqrt(2.0 * T);
    return gamma_p(1.5, 0.5 * z * z) +
           z * std::sqrt(2.0 / M_PI) * std::exp(-0.5 * z * z);
}

constexpr int kMaxWindows = 400;

}  // namespace

std::pair<double, TruncationStatus> truncation_bound_after(const ProcessSpec& spec,
                                                           const LowerRateCandidate& cand,
                                                           double t_max) {
    spec.validate();
    double best = 1.0;
    bool any = false;

    // Exact route for transient Brownian motion in d = 3.  Every window
    // growth factor yields a valid bound; take the tightest.
    if (spec.alpha == 2.0 && spec.dim == 3) {
        for (double c : {2.0, 4.0, 8.0, 16.0}) {
            double total = 0.0, w0 = t_max;
            bool ok = true;
            for (int k = 0; k < kMaxWindows; ++k) {
                const double term = brownian3_ruin(w0, sup_varphi(cand, w0, c * w0));
                total += term;
                if (term < 1e-14) break;
                if (k == kMaxWindows - 1) ok = false;
                w0 *= c;
            }
            if (ok) {
                best = std::min(best, total);
                any = true;
            }
        }
    }

    // Lemma-based window routes need the measured Euclidean envelope; for
    // alpha = 2 the envelope only holds on a bounded r/sqrt(t) range, so
    // these routes are restricted to alpha = 1 (the exact route serves the
    // Brownian case).
    if (spec.alpha == 1.0) {
        const HittingContext ctx = make_euclidean_context(spec.alpha, spec.dim);
        const bool transient = spec.dim > spec.alpha;
        const bool critical = static_cast<double>(spec.dim) == spec.alpha;
        if (transient || critical) {
            const double c = 4.0;
            double total = 0.0, w0 = t_max;
            bool ok = true;
            for (int k = 0; k < kMaxWindows; ++k) {
                const double rk = sup_varphi(cand, w0, c * w0);
                // A vanished boundary radius cannot be crossed (points are
                // polar for these processes); later windows only shrink it.
                if (!(rk > 0.0)) break;
                WindowQuery q{w0, c * w0, w0, rk};
                const SandwichBounds sb =
                    transient ? lemma42_upper(ctx, q) : lemmaA1_bounds(ctx, q);
                if (transient ? !sb.applicable
                              : !sb.violated.empty()) {  // upper needs its guards
                    ok = false;
                    break;
                }
                total += sb.upper;
                if (sb.upper < 1e-14) break;
                if (k == kMaxWindows - 1) ok = false;
                w0 *= c;
            }
            if (ok) {
                best = std::min(best, total);
                any = true;
            }
        }

        // Single-shot route when the boundary radius is nonincreasing past
        // t_max: r* = sup varphi is attained at t_max itself.
        if (transient) {
            bool nonincreasing = true;
            double prev = eval_varphi(cand, t_max);
            for (int i = 1; i <= 16; ++i) {
                const double v = eval_varphi(cand, t_max * std::pow(2.0, i));
                if (v > prev * (1.0 + 1e-12)) {
                    nonincreasing = false;
                    break;
                }
                prev = v;
            }
            if (nonincreasing) {
                const double rstar = eval_varphi(cand, t_max);
                if (rstar > 0.0) {
                    auto f = [&](double u) {
                        return 1.0 /
                               eval_volume(ctx.profile, 0.0, eval_phi_inv(ctx.scale, u));
                    };
                    const double val = ctx.ledger.K1 *
                                       eval_volume(ctx.profile, 0.0, rstar) /
                                       eval_phi(ctx.scale, rstar) *
                                       integrate_to_inf(f, t_max, 1e-9);
                    best = std::min(best, val);
                    any = true;
                }
            }
        }
    }

    if (!any) return {1.0, TruncationStatus::Unbounded};
    return {std::min(best, 1.0), TruncationStatus::Bounded};
}

CrossingEstimate estimate_q(const ProcessSpec& spec, const LowerRateCandidate& cand,
                            const SimulationPlan& plan, int n_workers) {
    spec.validate();
    plan.validate();

    std::vector<double> times{plan.t_start};
    while (times.back() < plan.t_max * (1.0 - 1e-12))
        times.push_back(std::min(times.back() * plan.grid_ratio, plan.t_max));
    const std::size_t m = times.size();
    std::vector<double> radius(m);
    for (std::size_t j = 0; j < m; ++j) radius[j] = eval_varphi(cand, times[j]);

    const int d = spec.dim;
    auto run_range = [&](std::uint64_t p0, std::uint64_t p1, std::uint64_t& hits_fine,
                         std::uint64_t& hits_coarse) {
        std::vector<double> pos(d), inc(d);
        hits_fine = hits_coarse = 0;
        for (std::uint64_t p = p0; p < p1; ++p) {
            Stream rng(plan.seed, plan.antithetic ? p / 2 : p,
                       plan.antithetic && (p % 2 == 1) ? -1.0 : 1.0);
            sample_increment(spec, times[0], rng, pos.data());
            bool fine = false, coarse = false;
            for (std::size_t j = 1; j < m; ++j) {
                sample_increment(spec, times[j] - times[j - 1], rng, inc.data());
                for (int i = 0; i < d; ++i) pos[i] += inc[i];
                if (norm_of(pos.data(), d) <= radius[j]) {
                    fine = true;
                    // Coarse companion grid keeps every other point.
                    if (j % 2 == 0) coarse = true;
                }
                if (fine && coarse) break;
            }
            hits_fine += fine;
            hits_coarse += coarse;
        }
    };

    const int W = std::max(1, n_workers);
    std::vector<std::uint64_t> hf(W, 0), hc(W, 0);
    if (W == 1) {
        run_range(0, plan.n_paths, hf[0], hc[0]);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < W; ++w) {
            const std::uint64_t p0 = plan.n_paths * w / W;
            const std::uint64_t p1 = plan.n_paths * (w + 1) / W;
            pool.emplace_back([&, w, p0, p1] { run_range(p0, p1, hf[w], hc[w]); });
        }
        for (auto& th : pool) th.join();
    }
    std::uint64_t hits = 0, hits_coarse = 0;
    for (int w = 0; w < W; ++w) {
        hits += hf[w];
        hits_coarse += hc[w];
    }

    CrossingEstimate est;
    est.n_paths = plan.n_paths;
    est.n_hits = hits;
    est.q_hat = static_cast<double>(hits) / static_cast<double>(plan.n_paths);
    std::tie(est.ci_low, est.ci_high) = wilson_interval(hits, plan.n_paths);
    est.q_hat_coarse = static_cast<double>(hits_coarse) / static_cast<double>(plan.n_paths);
    est.refinement_delta = est.q_hat - est.q_hat_coarse;
    std::tie(est.truncation_bound, est.truncation_status) =
        truncation_bound_after(spec, cand, plan.t_max);
    return est;
}

HittingEstimate estimate_hitting(const ProcessSpec& spec, double a, double b, double r,
                                 std::uint64_t n_paths, std::uint64_t seed,
                                 int n_steps) {
    spec.validate();
    if (!(a > 0.0 && b > a)) throw domain_error("estimate_hitting: need 0 < a < b");
    if (!(r > 0.0)) throw domain_error("estimate_hitting: need r > 0");
    if (n_paths == 0) throw domain_error("estimate_hitting: n_paths must be > 0");
    if (n_steps <= 0) {
        // Resolve both the window and the ball's sojourn scale phi(r)=r^alpha.
        const double dt = std::max(
            std::min((b - a) / 16.0, 0.25 * std::pow(r, spec.alpha)), (b - a) / 4096.0);
        n_steps = std::max(16, static_cast<int>(std::ceil((b - a) / dt)));
    }
    const double h = (b - a) / n_steps;

    const int d = spec.dim;
    std::vector<double> pos(d), inc(d);
    std::uint64_t hits = 0;
    for (std::uint64_t p = 0; p < n_paths; ++p) {
        Stream rng(seed, p);
        sample_increment(spec, a, rng, pos.data());
        bool hit = false;
        for (int k = 1; k <= n_steps && !hit; ++k) {
            sample_increment(spec, h, rng, inc.data());
            for (int i = 0; i < d; ++i) pos[i] += inc[i];
            hit = norm_of(pos.data(), d) <= r;
        }
        hits += hit;
    }
    HittingEstimate est;
    est.n_paths = n_paths;
    est.n_hits = hits;
    est.p_hat = static_cast<double>(hits) / static_cast<double>(n_paths);
    std::tie(est.ci_low, est.ci_high) = wilson_interval(hits, n_paths);
    return est;
}

}  // namespace escape

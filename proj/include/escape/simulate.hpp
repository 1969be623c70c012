#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "escape/rate.hpp"
#include "escape/rng.hpp"

namespace escape {

// Isotropic alpha-stable process in R^d.  alpha = 2 is Brownian motion with
// the kernel convention p(t,x,y) = (4 pi t)^(-d/2) exp(-|x-y|^2/(4t))
// (coordinate variance 2t); alpha < 2 is that Brownian motion run at an
// (alpha/2)-stable subordinated clock.
struct ProcessSpec {
    double alpha = 2.0;
    int dim = 1;
    void validate() const;
};

struct SimulationPlan {
    double t_start = 1.0;
    double t_max = 100.0;
    double grid_ratio = 1.02;
    std::uint64_t n_paths = 100000;
    std::uint64_t seed = 1;
    bool antithetic = false;
    void validate() const;
};

enum class TruncationStatus { Bounded, Unbounded };

struct CrossingEstimate {
    double q_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double truncation_bound = 0.0;
    std::uint64_t n_paths = 0;
    std::uint64_t n_hits = 0;
    TruncationStatus truncation_status = TruncationStatus::Bounded;
    // Coarse-grid (every other grid point, ratio rho^2) companion estimate
    // from the same paths; q_hat - q_hat_coarse indicates the residual
    // discretization bias (crossing detection only under-counts).
    double q_hat_coarse = 0.0;
    double refinement_delta = 0.0;
};

struct HittingEstimate {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t n_paths = 0;
    std::uint64_t n_hits = 0;
};

// 95% Wilson score interval for hits successes out of n trials.
std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t n);

// One-sided gamma-stable sample over dt: Kanter's transformation of a
// uniform and an exponential variate; E[exp(-lambda S)] = exp(-dt
// lambda^gamma).
double sample_subordinator_increment(double gamma, double dt, Stream& rng);

// Displacement over dt; out must have spec.dim slots.
void sample_increment(const ProcessSpec& spec, double dt, Stream& rng, double* out);

// Monte Carlo estimate of the bottom-crossing probability: paths from the
// origin, exact stable marginal at t_start, geometric grid to t_max, hit
// when |X_u| <= varphi(u) at a grid point u in (t_start, t_max].  The
// truncation bound covers crossings after t_max (smallest applicable of
// the generic window-summed bound, the critical-regime window bound, and
// the exact Brownian d=3 ruin bound); Unbounded when none applies.
CrossingEstimate estimate_q(const ProcessSpec& spec, const LowerRateCandidate& cand,
                            const SimulationPlan& plan, int n_workers = 1);

// MC estimate of P_0(|X_s| <= r for some s in (a,b]) on a uniform grid over
// (a, b]; n_steps = 0 picks a default resolving min(window/16, phi-scale).
HittingEstimate estimate_hitting(const ProcessSpec& spec, double a, double b, double r,
                                 std::uint64_t n_paths, std::uint64_t seed,
                                 int n_steps = 0);

// Upper bound on the crossing probability over (t_max, inf); exposed for
// the truncation-consistency tests.
std::pair<double, TruncationStatus> truncation_bound_after(const ProcessSpec& spec,
                                                           const LowerRateCandidate& cand,
                                                           double t_max);

}  // namespace escape

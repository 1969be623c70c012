#pragma once
#include <vector>

#include "escape/geometry.hpp"

namespace escape {

enum class RateFamily { Power, LogPower, ExpPower, ExpLogPower, Tabulated };

// Decreasing g(t) on [t_min, inf) with g -> 0:
//   Power(q):       t^-q
//   LogPower(q):    (log t)^-q
//   ExpPower(p):    exp(-t^p)
//   ExpLogPower(e): exp(-(log t)^(1+e))
// Tabulated: user-supplied monotone table, log-linear interpolation.
struct RateFunction {
    RateFamily family = RateFamily::Power;
    double param = 1.0;
    double t_min = 0.0;  // 0 -> family default
    std::vector<double> table_t, table_g;  // Tabulated only

    static RateFunction power(double q);
    static RateFunction log_power(double q);
    static RateFunction exp_power(double p);
    static RateFunction exp_log_power(double eps);
    static RateFunction tabulated(std::vector<double> t, std::vector<double> g);
};

double default_t_min(RateFamily family, double param);
// Domain start actually in force for rf (explicit t_min or family default).
double rate_t_min(const RateFunction& rf);
double eval_g(const RateFunction& rf, double t);

struct LowerRateCandidate {
    RateFunction g;
    ScaleFunction scale;
};

// varphi(t) = phi_inv(t) * g(t), the moving boundary radius.
double eval_varphi(const LowerRateCandidate& cand, double t);

struct OscillationResult {
    double value = 1.0;
    // True when the extremum is not attained on the search window: either the
    // closed form is a v->inf limit or the grid extremum sat on the boundary.
    bool boundary = false;
};

OscillationResult oscillation_ratio_transient(const RateFunction& rf, double c, double t);
OscillationResult oscillation_ratio_recurrent(const RateFunction& rf, double c, double t);

// Bounded grid search over v in [t, 100t] (256 points) and u in [v, cv]
// (64 points); flags when the extremum lies on the v-grid boundary.
OscillationResult oscillation_grid_transient(const RateFunction& rf, double c, double t);
OscillationResult oscillation_grid_recurrent(const RateFunction& rf, double c, double t);

double kappa(const LowerRateCandidate& cand, double t);

enum class RegularityVerdict { ConvergesToOne, Fails, Indeterminate };

struct RegularityReport {
    std::vector<double> c_grid, t_grid;
    std::vector<std::vector<double>> table;  // table[i][j] = R_{c_i, t_j}
    RegularityVerdict verdict = RegularityVerdict::Indeterminate;
};

enum class RateMode { Transient, Recurrent };

RegularityReport regularity_check(const RateFunction& rf, RateMode mode,
                                  const std::vector<double>& c_grid,
                                  const std::vector<double>& t_grid,
                                  double tolerance = 0.05);

}  // namespace escape

#include "escape/rate.hpp"

#include <algorithm>
#include <cmath>

#include "escape/errors.hpp"

namespace escape {

double rate_t_min(const RateFunction& rf) {
    return rf.t_min > 0.0 ? rf.t_min : default_t_min(rf.family, rf.param);
}

namespace {

double resolved_t_min(const RateFunction& rf) { return rate_t_min(rf); }

void check_param(double p, const char* what) {
    if (!(p > 0.0)) throw domain_error(std::string("rate: ") + what + " must be > 0");
}

}  // namespace

double default_t_min(RateFamily family, double param) {
    switch (family) {
        case RateFamily::Power:
            return 1.0001;
        case RateFamily::LogPower:
            return std::exp(1.0001);
        case RateFamily::ExpPower:
            // Guard so t^p >= 1e-4, keeping g safely below 1.
            return std::pow(1e-4, 1.0 / param);
        case RateFamily::ExpLogPower:
            return M_E;
        case RateFamily::Tabulated:
            return 0.0;  // taken from the table
    }
    return 1.0;
}

RateFunction RateFunction::power(double q) {
    check_param(q, "q");
    return {RateFamily::Power, q};
}
RateFunction RateFunction::log_power(double q) {
    check_param(q, "q");
    return {RateFamily::LogPower, q};
}
RateFunction RateFunction::exp_power(double p) {
    check_param(p, "p");
    return {RateFamily::ExpPower, p};
}
RateFunction RateFunction::exp_log_power(double eps) {
    check_param(eps, "eps");
    return {RateFamily::ExpLogPower, eps};
}

RateFunction RateFunction::tabulated(std::vector<double> t, std::vector<double> g) {
    if (t.size() != g.size() || t.size() < 2)
        throw domain_error("tabulated rate: need matching t/g tables, size >= 2");
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (!(t[i] < t[i + 1])) throw domain_error("tabulated rate: t must increase");
        if (!(g[i] > g[i + 1])) throw domain_error("tabulated rate: g must decrease");
    }
    if (!(g.back() > 0.0 && g.front() < 1.0))
        throw domain_error("tabulated rate: g must lie in (0,1)");
    RateFunction rf;
    rf.family = RateFamily::Tabulated;
    rf.t_min = t.front();
    rf.table_t = std::move(t);
    rf.table_g = std::move(g);
    return rf;
}

double eval_g(const RateFunction& rf, double t) {
    const double tmin = resolved_t_min(rf);
    if (!(t >= tmin)) throw domain_error("eval_g: t below domain start t_min");
    switch (rf.family) {
        case RateFamily::Power:
            return std::pow(t, -rf.param);
        case RateFamily::LogPower:
            return std::pow(std::log(t), -rf.param);
        case RateFamily::ExpPower:
            return std::exp(-std::pow(t, rf.param));
        case RateFamily::ExpLogPower:
            return std::exp(-std::pow(std::log(t), 1.0 + rf.param));
        case RateFamily::Tabulated: {
            const auto& ts = rf.table_t;
            const auto& gs = rf.table_g;
            if (t >= ts.back()) return gs.back();
            auto it = std::upper_bound(ts.begin(), ts.end(), t);
            const std::size_t j = static_cast<std::size_t>(it - ts.begin());
            // Log-linear interpolation keeps monotonicity and positivity.
            const double w = std::log(t / ts[j - 1]) / std::log(ts[j] / ts[j - 1]);
            return gs[j - 1] * std::pow(gs[j] / gs[j - 1], w);
        }
    }
    throw domain_error("eval_g: unknown family");
}

double eval_varphi(const LowerRateCandidate& cand, double t) {
    return eval_phi_inv(cand.scale, t) * eval_g(cand.g, t);
}

namespace {

void check_osc_args(const RateFunction& rf, double c, double t) {
    if (!(c > 1.0)) throw domain_error("oscillation ratio: c must be > 1");
    if (!(t >= resolved_t_min(rf))) throw domain_error("oscillation ratio: t below t_min");
}

double abs_log_g(const RateFunction& rf, double t) {
    const double g = eval_g(rf, t);
    if (!(g < 1.0)) throw domain_error("oscillation ratio (recurrent): need g < 1 on domain");
    return -std::log(g);
}

}  // namespace

OscillationResult oscillation_ratio_transient(const RateFunction& rf, double c, double t) {
    check_osc_args(rf, c, t);
    switch (rf.family) {
        case RateFamily::Power:
            // g(u)/g(v) = (v/u)^q, minimal at u = c v, independent of v.
            return {std::pow(c, -rf.param), false};
        case RateFamily::LogPower:
            // (log v / log(cv))^q increases in v; infimum at v = t.
            return {std::pow(std::log(t) / std::log(c * t), rf.param), false};
        case RateFamily::ExpPower:
        case RateFamily::ExpLogPower:
            // g(cv)/g(v) -> 0 as v -> inf: the infimum over v >= t is the
            // limit 0, not attained at any finite v.
            return {0.0, true};
        case RateFamily::Tabulated:
            return oscillation_grid_transient(rf, c, t);
    }
    throw domain_error("oscillation_ratio_transient: unknown family");
}

OscillationResult oscillation_ratio_recurrent(const RateFunction& rf, double c, double t) {
    check_osc_args(rf, c, t);
    (void)abs_log_g(rf, t);
    switch (rf.family) {
        case RateFamily::Power:
            // log(cv)/log(v) decreases in v; supremum at v = t.
            return {std::log(c * t) / std::log(t), false};
        case RateFamily::LogPower: {
            if (!(std::log(t) > 1.0))
                throw domain_error("oscillation ratio (recurrent): LogPower needs log t > 1");
            return {std::log(std::log(c * t)) / std::log(std::log(t)), false};
        }
        case RateFamily::ExpPower:
            return {std::pow(c, rf.param), false};
        case RateFamily::ExpLogPower:
            return {std::pow(std::log(c * t) / std::log(t), 1.0 + rf.param), false};
        case RateFamily::Tabulated:
            return oscillation_grid_recurrent(rf, c, t);
    }
    throw domain_error("oscillation_ratio_recurrent: unknown family");
}

namespace {

constexpr int kVGrid = 256;
constexpr int kUGrid = 64;

template <typename Ratio>
OscillationResult grid_extremum(double c, double t, bool minimize, const Ratio& ratio) {
    const double vmax_over_t = 100.0;
    double best = minimize ? 1e300 : -1e300;
    int best_vi = 0;
    for (int i = 0; i < kVGrid; ++i) {
        const double v = t * std::pow(vmax_over_t, static_cast<double>(i) / (kVGrid - 1));
        for (int j = 0; j < kUGrid; ++j) {
            const double u = v * std::pow(c, static_cast<double>(j) / (kUGrid - 1));
            const double val = ratio(u, v);
            if (minimize ? (val < best) : (val > best)) {
                best = val;
                best_vi = i;
            }
        }
    }
    return {best, best_vi == kVGrid - 1};
}

}  // namespace

OscillationResult oscillation_grid_transient(const RateFunction& rf, double c, double t) {
    check_osc_args(rf, c, t);
    return grid_extremum(c, t, true, [&](double u, double v) {
        return eval_g(rf, u) / eval_g(rf, v);
    });
}

OscillationResult oscillation_grid_recurrent(const RateFunction& rf, double c, double t) {
    check_osc_args(rf, c, t);
    (void)abs_log_g(rf, t);
    return grid_extremum(c, t, false, [&](double u, double v) {
        return abs_log_g(rf, u) / abs_log_g(rf, v);
    });
}

double kappa(const LowerRateCandidate& cand, double t) {
    const double g = eval_g(cand.g, t);
    return std::min(1.0, std::pow(g, cand.scale.d3) / cand.scale.c3);
}

RegularityReport regularity_check(const RateFunction& rf, RateMode mode,
                                  const std::vector<double>& c_grid,
                                  const std::vector<double>& t_grid,
                                  double tolerance) {
    if (c_grid.empty() || t_grid.empty())
        throw domain_error("regularity_check: grids must be nonempty");
    RegularityReport rep;
    rep.c_grid = c_grid;
    rep.t_grid = t_grid;
    rep.table.resize(c_grid.size());
    for (std::size_t i = 0; i < c_grid.size(); ++i) {
        rep.table[i].resize(t_grid.size());
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
            const OscillationResult r =
                mode == RateMode::Transient
                    ? oscillation_ratio_transient(rf, c_grid[i], t_grid[j])
                    : oscillation_ratio_recurrent(rf, c_grid[i], t_grid[j]);
            rep.table[i][j] = r.value;
        }
    }
    // The double limit c->1+, t->inf is probed at the smallest c and largest t.
    std::size_t ci = 0, tj = 0;
    for (std::size_t i = 0; i < c_grid.size(); ++i)
        if (c_grid[i] < c_grid[ci]) ci = i;
    for (std::size_t j = 0; j < t_grid.size(); ++j)
        if (t_grid[j] > t_grid[tj]) tj = j;
    const double corner = rep.table[ci][tj];
    if (std::abs(corner - 1.0) <= tolerance) {
        rep.verdict = RegularityVerdict::ConvergesToOne;
    } else if (mode == RateMode::Transient && corner < 0.5) {
        rep.verdict = RegularityVerdict::Fails;
    } else if (mode == RateMode::Recurrent && corner > 2.0) {
        rep.verdict = RegularityVerdict::Fails;
    } else {
        rep.verdict = RegularityVerdict::Indeterminate;
    }
    return rep;
}

}  // namespace escape

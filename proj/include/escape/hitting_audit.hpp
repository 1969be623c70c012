#pragma once
#include <vector>

#include "escape/hitting_bounds.hpp"
#include "escape/simulate.hpp"

namespace escape {

struct AuditCase {
    WindowQuery query;
    double lower = 0.0;
    double upper = 1.0;
    double mc = 0.0;
    double sigma = 0.0;
    bool pass = false;
};

enum class AuditRegime { Transient, Critical };

// Random applicable window queries for the regime's Euclidean instantiation
// (transient: 1-stable in R^3, critical: Cauchy in R^1), with the sharpest
// combined sandwich and an MC hitting estimate per query.  Pass means the
// MC value lies in [lower - 3 sigma, upper + 3 sigma].
inline std::vector<AuditCase> run_hitting_audit(AuditRegime regime, int n_queries,
                                                std::uint64_t seed,
                                                std::uint64_t n_paths_per_query = 4000) {
    const bool transient = regime == AuditRegime::Transient;
    const ProcessSpec spec{1.0, transient ? 3 : 1};
    const HittingContext ctx = make_euclidean_context(spec.alpha, spec.dim);

    std::vector<AuditCase> out;
    Stream qrng(seed, 0xa0d17ULL);
    int draws = 0;
    while (static_cast<int>(out.size()) < n_queries && draws < n_queries * 200) {
        ++draws;
        WindowQuery q;
        q.a = 0.5 * std::exp(qrng.uniform() * std::log(16.0));
        q.b = q.a * qrng.uniform(2.0, 6.0);
        q.c = q.a * qrng.uniform(0.5, 3.0);
        // phi(r) = r here, so this keeps the lemma guards satisfied.
        q.r = qrng.uniform(0.1, 0.95) * std::min({q.a, q.c, 0.5 * (q.b - q.a)});
        const SandwichBounds s41 = lemma41_bounds(ctx, q, true);
        SandwichBounds reg = transient ? lemma42_upper(ctx, q) : lemmaA1_bounds(ctx, q);
        if (!reg.applicable) continue;
        if (transient) {
            const SandwichBounds s43 = lemma43_lower(ctx, q.a, q.b, q.r);
            if (!s43.applicable) continue;
            reg.lower = s43.lower;
        }
        AuditCase ac;
        ac.query = q;
        ac.lower = std::max(s41.lower, reg.lower);
        ac.upper = std::min(s41.upper, reg.upper);
        const HittingEstimate he = estimate_hitting(
            spec, q.a, q.b, q.r, n_paths_per_query, seed + 17 * out.size() + 1);
        ac.mc = he.p_hat;
        ac.sigma = std::sqrt(std::max(ac.mc * (1.0 - ac.mc), 1e-12) /
                             static_cast<double>(he.n_paths));
        ac.pass = ac.mc >= ac.lower - 3.0 * ac.sigma && ac.mc <= ac.upper + 3.0 * ac.sigma;
        out.push_back(ac);
    }
    return out;
}

}  // namespace escape

#include "escape/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "escape/errors.hpp"
#include "escape/rng.hpp"

namespace escape {

void DoublingExponents::validate() const {
    if (!(c1 > 0.0 && c1 <= 1.0)) throw domain_error("doubling: c1 must be in (0,1]");
    if (!(c2 >= 1.0)) throw domain_error("doubling: c2 must be >= 1");
    if (!(d1 > 0.0)) throw domain_error("doubling: d1 must be > 0");
    if (!(d2 >= d1)) throw domain_error("doubling: d2 must be >= d1");
}

VolumeProfile VolumeProfile::power_global(double d, double prefactor) {
    if (!(d > 0.0)) throw domain_error("power_global: d must be > 0");
    if (!(prefactor > 0.0)) throw domain_error("power_global: prefactor must be > 0");
    VolumeProfile p;
    p.kind = VolumeKind::PowerGlobal;
    p.d = d;
    p.prefactor = prefactor;
    p.exponents = {1.0, 1.0, d, d};
    return p;
}

VolumeProfile VolumeProfile::two_regime(double alpha1, double alpha2, double prefactor) {
    if (!(alpha1 > 0.0 && alpha2 > 0.0)) throw domain_error("two_regime: exponents must be > 0");
    if (!(prefactor > 0.0)) throw domain_error("two_regime: prefactor must be > 0");
    VolumeProfile p;
    p.kind = VolumeKind::TwoRegime;
    p.alpha1 = alpha1;
    p.alpha2 = alpha2;
    p.prefactor = prefactor;
    p.exponents = {1.0, 1.0, std::min(alpha1, alpha2), std::max(alpha1, alpha2)};
    return p;
}

VolumeProfile VolumeProfile::weighted(double d, double alpha) {
    if (!(d > 0.0)) throw domain_error("weighted: d must be > 0");
    if (!(alpha > -0.5 * d)) throw domain_error("weighted: alpha must be > -d/2");
    VolumeProfile p;
    p.kind = VolumeKind::Weighted;
    p.d = d;
    p.alpha = alpha;
    // (1+R+|x|)/(1+r+|x|) lies between 1 and R/r, so the weight contributes
    // [0, 2*alpha] (alpha >= 0) or [2*alpha, 0] (alpha < 0) to the exponent.
    if (alpha >= 0.0) {
        p.exponents = {1.0, 1.0, d, d + 2.0 * alpha};
    } else {
        p.exponents = {1.0, 1.0, d + 2.0 * alpha, d};
    }
    return p;
}

ScaleFunction ScaleFunction::power(double beta) { return two_regime(beta, beta); }

ScaleFunction ScaleFunction::two_regime(double beta1, double beta2) {
    if (!(beta1 > 0.0 && beta2 > 0.0)) throw domain_error("scale: betas must be > 0");
    ScaleFunction s;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.c3 = 1.0;
    s.c4 = 1.0;
    s.d3 = std::min(beta1, beta2);
    s.d4 = std::max(beta1, beta2);
    return s;
}

void ScaleFunction::validate() const {
    if (!(beta1 > 0.0 && beta2 > 0.0)) throw domain_error("scale: betas must be > 0");
    if (!(c3 > 0.0 && c3 <= 1.0)) throw domain_error("scale: c3 must be in (0,1]");
    if (!(c4 >= 1.0)) throw domain_error("scale: c4 must be >= 1");
    if (!(d3 > 0.0 && d4 >= d3)) throw domain_error("scale: need 0 < d3 <= d4");
}

double eval_volume(const VolumeProfile& profile, double x_norm, double r) {
    if (!(r > 0.0)) throw domain_error("eval_volume: r must be > 0");
    switch (profile.kind) {
        case VolumeKind::PowerGlobal:
            return profile.prefactor * std::pow(r, profile.d);
        case VolumeKind::TwoRegime:
            return profile.prefactor *
                   std::pow(r, r < 1.0 ? profile.alpha1 : profile.alpha2);
        case VolumeKind::Weighted:
            if (x_norm < 0.0) throw domain_error("eval_volume: |x| must be >= 0");
            return std::pow(r, profile.d) *
                   std::pow(1.0 + r + x_norm, 2.0 * profile.alpha);
    }
    throw domain_error("eval_volume: unknown profile kind");
}

double eval_phi(const ScaleFunction& scale, double r) {
    if (r < 0.0) throw domain_error("eval_phi: r must be >= 0");
    if (r == 0.0) return 0.0;
    return std::pow(r, r < 1.0 ? scale.beta1 : scale.beta2);
}

double eval_phi_inv(const ScaleFunction& scale, double t) {
    if (t < 0.0) throw domain_error("eval_phi_inv: t must be >= 0");
    if (t == 0.0) return 0.0;
    return std::pow(t, 1.0 / (t < 1.0 ? scale.beta1 : scale.beta2));
}

namespace {

double log_uniform(Stream& rng, double lo, double hi) {
    return lo * std::exp(rng.uniform() * std::log(hi / lo));
}

}  // namespace

AuditReport audit_doubling(const VolumeProfile& profile, std::uint64_t sample_count,
                           std::uint64_t rng_seed, double r_lo, double r_hi) {
    if (sample_count < 1) throw domain_error("audit_doubling: sample_count must be >= 1");
    profile.exponents.validate();
    const DoublingExponents& e = profile.exponents;
    Stream rng(rng_seed, 0);
    AuditReport rep;
    rep.samples = sample_count;
    const double tol = 1.0 - 1e-12;
    for (std::uint64_t i = 0; i < sample_count; ++i) {
        double r = log_uniform(rng, r_lo, r_hi);
        double R = log_uniform(rng, r_lo, r_hi);
        if (r > R) std::swap(r, R);
        if (r == R) continue;
        const double x = (rng.uniform() < 0.2) ? 0.0 : log_uniform(rng, 1e-3, 1e3);
        const double ratio = eval_volume(profile, x, R) / eval_volume(profile, x, r);
        const double q = R / r;
        const double lower = e.c1 * std::pow(q, e.d1);
        const double upper = e.c2 * std::pow(q, e.d2);
        rep.worst_lower_margin = std::min(rep.worst_lower_margin, ratio / lower);
        rep.worst_upper_margin = std::min(rep.worst_upper_margin, upper / ratio);
        if (ratio < lower * tol || ratio > upper / tol) ++rep.violations;
    }
    rep.pass = rep.violations == 0;
    if (!rep.pass) rep.detail = "volume doubling bracket violated";
    return rep;
}

AuditReport audit_scale(const ScaleFunction& scale, std::uint64_t sample_count,
                        std::uint64_t rng_seed, double r_lo, double r_hi) {
    if (sample_count < 1) throw domain_error("audit_scale: sample_count must be >= 1");
    scale.validate();
    Stream rng(rng_seed, 0);
    AuditReport rep;
    rep.samples = sample_count;
    const double tol = 1.0 - 1e-12;
    for (std::uint64_t i = 0; i < sample_count; ++i) {
        double r = log_uniform(rng, r_lo, r_hi);
        double R = log_uniform(rng, r_lo, r_hi);
        if (r > R) std::swap(r, R);
        if (r == R) continue;
        const double q = R / r;
        const double ratio = eval_phi(scale, R) / eval_phi(scale, r);
        const double lower = scale.c3 * std::pow(q, scale.d3);
        const double upper = scale.c4 * std::pow(q, scale.d4);
        rep.worst_lower_margin = std::min(rep.worst_lower_margin, ratio / lower);
        rep.worst_upper_margin = std::min(rep.worst_upper_margin, upper / ratio);
        bool bad = ratio < lower * tol || ratio > upper / tol;

        // Inverse bounds implied by the growth control, on a time pair.
        const double t1 = eval_phi(scale, r), t2 = eval_phi(scale, R);
        if (t2 > t1) {
            const double iratio = eval_phi_inv(scale, t2) / eval_phi_inv(scale, t1);
            const double ilower = std::pow(scale.c4, -1.0 / scale.d4) *
                                  std::pow(t2 / t1, 1.0 / scale.d4);
            const double iupper = std::pow(scale.c3, -1.0 / scale.d3) *
                                  std::pow(t2 / t1, 1.0 / scale.d3);
            rep.worst_lower_margin = std::min(rep.worst_lower_margin, iratio / ilower);
            rep.worst_upper_margin = std::min(rep.worst_upper_margin, iupper / iratio);
            bad = bad || iratio < ilower * tol || iratio > iupper / tol;
        }
        if (bad) ++rep.violations;
    }
    rep.pass = rep.violations == 0;
    if (!rep.pass) rep.detail = "scale growth or inverse bracket violated";
    return rep;
}

}  // namespace escape

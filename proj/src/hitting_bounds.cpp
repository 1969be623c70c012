#include "escape/hitting_bounds.hpp"

#include <cmath>
#include <map>

#include "escape/errors.hpp"
#include "escape/quadrature.hpp"
#include "escape/special.hpp"

namespace escape {

namespace {

double kernel_density(double alpha, int d, double t, double r) {
    if (alpha == 2.0)
        return std::pow(4.0 * M_PI * t, -0.5 * d) * std::exp(-r * r / (4.0 * t));
    if (alpha == 1.0) {
        const double e = 0.5 * (d + 1);
        return std::tgamma(e) / std::pow(M_PI, e) * t / std::pow(t * t + r * r, e);
    }
    throw regime_error("kernel_density: closed forms exist only for alpha in {1,2}");
}

}  // namespace

KernelBounds measure_kernel_bounds(double alpha, int d) {
    if (!(alpha == 1.0 || alpha == 2.0))
        throw regime_error("measure_kernel_bounds: alpha must be 1 or 2");
    if (d < 1) throw domain_error("measure_kernel_bounds: d must be >= 1");

    static std::map<std::pair<double, int>, KernelBounds> cache;
    const auto key = std::make_pair(alpha, d);
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    const double omega = unit_ball_volume(d);
    const double rho_max = alpha == 2.0 ? 4.0 : 50.0;
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 25; ++i) {
        const double t = 0.01 * std::pow(1e4, i / 24.0);
        for (int j = 0; j < 40; ++j) {
            const double rho = 0.01 * std::pow(rho_max / 0.01, j / 39.0);
            const double r = rho * std::pow(t, 1.0 / alpha);
            const double on_diag = 1.0 / (omega * std::pow(t, d / alpha));
            const double off_diag = t / (omega * std::pow(r, d + alpha));
            const double ratio = kernel_density(alpha, d, t, r) / std::min(on_diag, off_diag);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
    }
    KernelBounds kb{lo, hi};
    kb.validate();
    cache[key] = kb;
    return kb;
}

HittingContext make_euclidean_context(double alpha, int d) {
    HittingContext ctx;
    ctx.alpha = alpha;
    ctx.d = d;
    ctx.profile = VolumeProfile::power_global(d, unit_ball_volume(d));
    ctx.scale = ScaleFunction::power(alpha);
    ctx.kernel = measure_kernel_bounds(alpha, d);
    if (static_cast<double>(d) == alpha)
        ctx.rc = RecurrentComparability{unit_ball_volume(d), unit_ball_volume(d)};
    ctx.ledger = compute_ledger(ctx.profile.exponents, ctx.scale, ctx.kernel, ctx.rc);
    return ctx;
}

void WindowQuery::validate() const {
    if (!(a > 0.0 && b > a)) throw domain_error("window query: need 0 < a < b");
    if (!(c > 0.0)) throw domain_error("window query: need c > 0");
    if (!(r > 0.0)) throw domain_error("window query: need r > 0");
}

std::optional<double> radial_mass_exact(double alpha, int d, double t, double r) {
    if (!(t > 0.0 && r >= 0.0)) throw domain_error("radial_mass_exact: t > 0, r >= 0");
    if (alpha == 2.0) return gamma_p(0.5 * d, r * r / (4.0 * t));
    if (alpha == 1.0) {
        switch (d) {
            case 1: return 2.0 / M_PI * std::atan(r / t);
            case 2: return 1.0 - t / std::sqrt(t * t + r * r);
            case 3:
                return 2.0 / M_PI * (std::atan(r / t) - t * r / (t * t + r * r));
            default: break;
        }
    }
    return std::nullopt;
}

namespace {

// int_a^b min{1, V(r)/V(phi_inv(u))} du.
double envelope_occupation(const HittingContext& ctx, double a, double b, double r) {
    if (!(b > a)) return 0.0;
    const double vr = eval_volume(ctx.profile, 0.0, r);
    auto f = [&](double u) {
        if (!(u > 0.0)) return 1.0;
        return std::min(1.0, vr / eval_volume(ctx.profile, 0.0, eval_phi_inv(ctx.scale, u)));
    };
    return integrate(f, a, b, 1e-10);
}

}  // namespace

std::pair<double, double> ball_occupation(const HittingContext& ctx, double a, double b,
                                          double r) {
    if (!(b > a)) throw domain_error("ball_occupation: need a < b");
    const double base = envelope_occupation(ctx, a, b, r);
    return {ctx.kernel.L1 * base, ctx.kernel.L2 * base};
}

std::optional<double> ball_occupation_exact(const HittingContext& ctx, double a, double b,
                                            double r) {
    if (!(b > a)) throw domain_error("ball_occupation_exact: need a < b");
    if (!radial_mass_exact(ctx.alpha, ctx.d, std::max(a, 1e-12), r)) return std::nullopt;
    auto f = [&](double u) {
        return u > 0.0 ? *radial_mass_exact(ctx.alpha, ctx.d, u, r) : 1.0;
    };
    return integrate(f, a, b, 1e-10);
}

SandwichBounds lemma41_bounds(const HittingContext& ctx, const WindowQuery& q,
                              bool use_exact) {
    q.validate();
    SandwichBounds sb;
    sb.lemma_tag = LemmaTag::L41;

    const bool exact_ok =
        use_exact && radial_mass_exact(ctx.alpha, ctx.d, 1.0, q.r).has_value();

    auto occ = [&](double a, double b, double r, bool want_low) {
        if (exact_ok) return *ball_occupation_exact(ctx, a, b, r);
        const auto [lo, hi] = ball_occupation(ctx, a, b, r);
        return want_low ? lo : hi;
    };

    const double num_low = occ(q.a, q.b, q.r, true);
    const double den_low = 2.0 * occ(0.0, q.b - q.a, 2.0 * q.r, false);
    const double num_up = occ(q.a, q.b + q.c, 2.0 * q.r, false);
    const double den_up = occ(0.0, q.c, q.r, true);
    if (!(den_low > 0.0) || !(den_up > 0.0))
        throw domain_error("lemma41_bounds: degenerate window (zero denominator)");

    sb.lower = std::min(1.0, num_low / den_low);
    sb.upper = num_up / den_up;
    if (sb.upper > 1.0) {
        sb.upper = 1.0;
        sb.upper_clamped = true;
    }
    return sb;
}

namespace {

double phi_inv_volume_integral(const HittingContext& ctx, double a, double b) {
    auto f = [&](double u) {
        return 1.0 / eval_volume(ctx.profile, 0.0, eval_phi_inv(ctx.scale, u));
    };
    return integrate(f, a, b, 1e-10);
}

}  // namespace

SandwichBounds lemma42_upper(const HittingContext& ctx, const WindowQuery& q) {
    q.validate();
    SandwichBounds sb;
    sb.lemma_tag = LemmaTag::L42;
    sb.lower = 0.0;
    const double phir = eval_phi(ctx.scale, q.r);
    if (!(phir <= q.a)) sb.violated.push_back("phi(r) <= a");
    if (!(phir <= q.c)) sb.violated.push_back("phi(r) <= c");
    if (!sb.violated.empty()) {
        sb.applicable = false;
        sb.upper = 1.0;
        return sb;
    }
    const double raw = ctx.ledger.K1 * eval_volume(ctx.profile, 0.0, q.r) / phir *
                       phi_inv_volume_integral(ctx, q.a, q.b + q.c);
    sb.upper = raw;
    if (sb.upper > 1.0) {
        sb.upper = 1.0;
        sb.upper_clamped = true;
    }
    return sb;
}

SandwichBounds lemma43_lower(const HittingContext& ctx, double a, double b, double r) {
    if (!(a > 0.0 && b > a && r > 0.0))
        throw domain_error("lemma43_lower: need 0 < a < b and r > 0");
    SandwichBounds sb;
    sb.lemma_tag = LemmaTag::L43;
    sb.upper = 1.0;
    if (!ctx.ledger.K2) {
        sb.applicable = false;
        sb.violated.push_back("d1 > d4 (transient ledger)");
        return sb;
    }
    const double phir = eval_phi(ctx.scale, r);
    if (!(phir <= a)) sb.violated.push_back("phi(r) <= a");
    if (!(eval_phi(ctx.scale, 2.0 * r) <= b - a)) sb.violated.push_back("phi(2r) <= b - a");
    if (!sb.violated.empty()) {
        sb.applicable = false;
        return sb;
    }
    sb.lower = *ctx.ledger.K2 * eval_volume(ctx.profile, 0.0, r) / phir *
               phi_inv_volume_integral(ctx, a, b);
    sb.lower = std::min(sb.lower, 1.0);
    return sb;
}

SandwichBounds lemmaA1_bounds(const HittingContext& ctx, const WindowQuery& q) {
    q.validate();
    SandwichBounds sb;
    sb.lemma_tag = LemmaTag::LA1i;
    if (!ctx.rc || !ctx.ledger.K3 || !ctx.ledger.K4) {
        sb.applicable = false;
        sb.violated.push_back("V-phi comparability (critical ledger)");
        return sb;
    }
    const double phir = eval_phi(ctx.scale, q.r);
    const double phi2r = eval_phi(ctx.scale, 2.0 * q.r);
    bool upper_ok = true, lower_ok = true;
    if (!(phir <= q.a)) {
        sb.violated.push_back("phi(r) <= a");
        upper_ok = lower_ok = false;
    }
    if (!(phir <= q.c)) {
        sb.violated.push_back("phi(r) <= c");
        upper_ok = false;
    }
    if (!(phi2r <= q.b - q.a)) {
        sb.violated.push_back("phi(2r) <= b - a");
        lower_ok = false;
    }
    if (upper_ok) {
        sb.upper = *ctx.ledger.K3 * std::log((q.b + q.c) / q.a) /
                   (1.0 + std::log(q.c / phir));
        if (sb.upper > 1.0) {
            sb.upper = 1.0;
            sb.upper_clamped = true;
        }
    } else {
        sb.upper = 1.0;
    }
    if (lower_ok) {
        sb.lower = std::min(1.0, *ctx.ledger.K4 * std::log(q.b / q.a) /
                                     (1.0 + std::log((q.b - q.a) / phi2r)));
    } else {
        sb.lower = 0.0;
    }
    sb.applicable = upper_ok && lower_ok;
    return sb;
}

}  // namespace escape

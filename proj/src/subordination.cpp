#include "escape/subordination.hpp"

#include <algorithm>
#include <cmath>

#include "escape/errors.hpp"
#include "escape/quadrature.hpp"

namespace escape {

void StableSubordinator::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw domain_error("subordinator: gamma must lie in (0,1)");
}

double StableSubordinator::levy_density(double s) const {
    validate();
    if (!(s > 0.0)) throw domain_error("levy_density: s must be > 0");
    return gamma / std::tgamma(1.0 - gamma) * std::pow(s, -1.0 - gamma);
}

double StableSubordinator::laplace_exponent(double lambda) const {
    validate();
    if (!(lambda >= 0.0)) throw domain_error("laplace_exponent: lambda must be >= 0");
    return std::pow(lambda, gamma);
}

DiffusionKernel DiffusionKernel::gaussian(int d) {
    if (d < 1) throw domain_error("diffusion kernel: dimension must be >= 1");
    DiffusionKernel dk;
    dk.kind = DiffusionKind::GaussianEuclidean;
    dk.d = d;
    return dk;
}

DiffusionKernel DiffusionKernel::sub_gaussian_envelope(
    double beta1, double beta2, double c_lower_small, double c_upper_small,
    double c_lower_large, double c_upper_large, double C_lower_small,
    double C_upper_small, double C_lower_large, double C_upper_large,
    VolumeProfile profile) {
    if (!(beta1 >= 2.0 && beta2 >= 2.0))
        throw domain_error("sub-Gaussian envelope: beta1, beta2 must be >= 2");
    for (double c : {c_lower_small, c_upper_small, c_lower_large, c_upper_large,
                     C_lower_small, C_upper_small, C_lower_large, C_upper_large})
        if (!(c > 0.0)) throw domain_error("sub-Gaussian envelope: constants must be > 0");
    DiffusionKernel dk;
    dk.kind = DiffusionKind::SubGaussianEnvelope;
    dk.d = static_cast<int>(profile.d);
    dk.beta1 = beta1;
    dk.beta2 = beta2;
    dk.c_low1 = c_lower_small;
    dk.c_up1 = c_upper_small;
    dk.c_low2 = c_lower_large;
    dk.c_up2 = c_upper_large;
    dk.C_low1 = C_lower_small;
    dk.C_up1 = C_upper_small;
    dk.C_low2 = C_lower_large;
    dk.C_up2 = C_upper_large;
    dk.profile = profile;
    return dk;
}

double DiffusionKernel::gaussian_density(double t, double r) const {
    if (kind != DiffusionKind::GaussianEuclidean)
        throw regime_error("pointwise kernel unsupported for the envelope kind");
    if (!(t > 0.0)) throw domain_error("gaussian_density: t must be > 0");
    return std::pow(4.0 * M_PI * t, -0.5 * d) * std::exp(-r * r / (4.0 * t));
}

namespace {

double sub_gaussian_branch(const DiffusionKernel& dk, double t, double r, double x_norm,
                           double c_small, double C_small, double c_large,
                           double C_large) {
    const double cut = std::max(1.0, r);
    if (t <= cut) {
        const double arg = std::pow(std::pow(r, dk.beta1) / t, 1.0 / (dk.beta1 - 1.0));
        return c_small / eval_volume(dk.profile, x_norm, std::pow(t, 1.0 / dk.beta1)) *
               std::exp(-C_small * arg);
    }
    const double arg = std::pow(std::pow(r, dk.beta2) / t, 1.0 / (dk.beta2 - 1.0));
    return c_large / eval_volume(dk.profile, x_norm, std::pow(t, 1.0 / dk.beta2)) *
           std::exp(-C_large * arg);
}

}  // namespace

double DiffusionKernel::envelope_lower(double t, double r, double x_norm) const {
    if (!(t > 0.0)) throw domain_error("envelope_lower: t must be > 0");
    if (kind == DiffusionKind::GaussianEuclidean) return gaussian_density(t, r);
    // Lower envelope uses the larger decay constants C (smaller value).
    return sub_gaussian_branch(*this, t, r, x_norm, c_low1, C_low1, c_low2, C_low2);
}

double DiffusionKernel::envelope_upper(double t, double r, double x_norm) const {
    if (!(t > 0.0)) throw domain_error("envelope_upper: t must be > 0");
    if (kind == DiffusionKind::GaussianEuclidean) return gaussian_density(t, r);
    return sub_gaussian_branch(*this, t, r, x_norm, c_up1, C_up1, c_up2, C_up2);
}

namespace {

// Kanter's function A(u) on (0, pi): the standard positive stable density
// with Laplace transform exp(-lambda^gamma) is
//   pi_1(x) = (gamma/(1-gamma)) (1/pi) x^(-1/(1-gamma))
//             int_0^pi A(u) exp(-x^(-gamma/(1-gamma)) A(u)) du.
double kanter_A(double gamma, double u) {
    return std::pow(std::sin(gamma * u), gamma / (1.0 - gamma)) *
           std::sin((1.0 - gamma) * u) / std::pow(std::sin(u), 1.0 / (1.0 - gamma));
}

double standard_density_integral(double gamma, double x) {
    const double xe = std::pow(x, -gamma / (1.0 - gamma));
    auto f = [&](double u) {
        const double A = kanter_A(gamma, u);
        const double e = xe * A;
        return e > 700.0 ? 0.0 : A * std::exp(-e);
    };
    const double I = composite_gl8(f, 0.0, M_PI, 64);
    return gamma / (1.0 - gamma) / M_PI * std::pow(x, -1.0 / (1.0 - gamma)) * I;
}

// Convergent series (1/pi) sum (-1)^(k+1) Gamma(k gamma + 1)/k! sin(k pi
// gamma) x^(-k gamma - 1); numerically stable for x away from 0.
double standard_density_series(double gamma, double x) {
    double sum = 0.0;
    double sign = 1.0;
    int quiet = 0;
    for (int k = 1; k <= 200; ++k) {
        const double log_term = std::lgamma(k * gamma + 1.0) - std::lgamma(k + 1.0) -
                                (k * gamma + 1.0) * std::log(x);
        const double term = sign * std::sin(k * M_PI * gamma) * std::exp(log_term);
        sum += term;
        // sin(k pi gamma) can vanish exactly at rational gamma, so require
        // two consecutive negligible terms before stopping.
        if (std::abs(term) < 1e-17 * std::max(std::abs(sum), 1e-30)) {
            if (++quiet >= 2 && k > 4) break;
        } else {
            quiet = 0;
        }
        sign = -sign;
    }
    return sum / M_PI;
}

double standard_density(double gamma, double x) {
    if (!(x > 0.0)) return 0.0;
    return x >= 1.0 ? standard_density_series(gamma, x)
                    : standard_density_integral(gamma, x);
}

}  // namespace

double pi_density(const StableSubordinator& sub, double t, double s) {
    sub.validate();
    if (!(t > 0.0 && s > 0.0)) throw domain_error("pi_density: t and s must be > 0");
    if (sub.gamma == 0.5) {
        return t / (2.0 * std::sqrt(M_PI)) * std::pow(s, -1.5) *
               std::exp(-t * t / (4.0 * s));
    }
    const double u = std::pow(t, -1.0 / sub.gamma);
    return u * standard_density(sub.gamma, s * u);
}

double subordinated_kernel(const StableSubordinator& sub, const DiffusionKernel& dk,
                           double t, double r) {
    sub.validate();
    if (dk.kind != DiffusionKind::GaussianEuclidean)
        throw regime_error("subordinated_kernel: envelope kind supports bounds only");
    if (!(t > 0.0)) throw domain_error("subordinated_kernel: t must be > 0");
    auto f = [&](double s) {
        return s > 0.0 ? dk.gaussian_density(s, r) * pi_density(sub, t, s) : 0.0;
    };
    // Split at the subordinator scale and the spatial scale; both are where
    // the integrand changes shoulder.
    double splits[2] = {std::pow(t, 1.0 / sub.gamma), r * r};
    if (splits[0] > splits[1]) std::swap(splits[0], splits[1]);
    double total = 0.0;
    double lo = 0.0;
    for (double sp : splits) {
        if (sp > lo) {
            total += integrate(f, lo, sp, 1e-11);
            lo = sp;
        }
    }
    if (lo <= 0.0) lo = 1.0;
    total += integrate_to_inf(f, lo, 1e-11);
    return total;
}

double jump_intensity(const StableSubordinator& sub, const DiffusionKernel& dk,
                      double r) {
    sub.validate();
    if (dk.kind != DiffusionKind::GaussianEuclidean)
        throw regime_error("jump_intensity: Gaussian kind only");
    if (!(r > 0.0)) throw domain_error("jump_intensity: x = y is a singularity");
    // J(r) = r^(-d-2gamma) J(1) by exact scaling of the integrand (s ->
    // r^2 s maps the r-integral onto the unit one); only J(1) needs
    // quadrature, cached per (d, gamma).
    static thread_local int cached_d = -1;
    static thread_local double cached_gamma = -1.0, cached_J1 = 0.0;
    if (cached_d != dk.d || cached_gamma != sub.gamma) {
        auto f = [&](double s) {
            return s > 0.0 ? dk.gaussian_density(s, 1.0) * sub.levy_density(s) : 0.0;
        };
        cached_J1 = integrate(f, 0.0, 1.0, 1e-12) + integrate_to_inf(f, 1.0, 1e-12);
        cached_d = dk.d;
        cached_gamma = sub.gamma;
    }
    return cached_J1 * std::pow(r, -static_cast<double>(dk.d) - 2.0 * sub.gamma);
}

EnvelopeRatioStats envelope_ratio_audit(const StableSubordinator& sub,
                                        const DiffusionKernel& dk,
                                        const VolumeProfile& profile,
                                        const ScaleFunction& scale,
                                        const std::vector<std::pair<double, double>>& grid) {
    if (grid.empty()) throw domain_error("envelope_ratio_audit: empty grid");
    EnvelopeRatioStats st;
    st.min_ratio = 1e300;
    st.max_ratio = 0.0;
    for (const auto& [t, r] : grid) {
        const double q = subordinated_kernel(sub, dk, t, r);
        const double on_diag = 1.0 / eval_volume(profile, 0.0, eval_phi_inv(scale, t));
        double env = on_diag;
        if (r > 0.0) {
            const double off = t / (eval_volume(profile, 0.0, r) * eval_phi(scale, r));
            env = std::min(env, off);
        }
        const double ratio = q / env;
        st.min_ratio = std::min(st.min_ratio, ratio);
        st.max_ratio = std::max(st.max_ratio, ratio);
        ++st.n;
    }
    st.spread = st.max_ratio / st.min_ratio;
    return st;
}

}  // namespace escape

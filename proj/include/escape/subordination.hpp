#pragma once
#include <utility>
#include <vector>

#include "escape/geometry.hpp"

namespace escape {

// One-sided gamma-stable subordinator: Laplace exponent psi(lambda) =
// lambda^gamma, zero drift, Levy density nu(s) = gamma/Gamma(1-gamma) *
// s^(-1-gamma).
struct StableSubordinator {
    double gamma = 0.5;
    void validate() const;
    double levy_density(double s) const;
    double laplace_exponent(double lambda) const;
};

enum class DiffusionKind { GaussianEuclidean, SubGaussianEnvelope };

// Base diffusion whose time change produces the jump process.
//   GaussianEuclidean: p(t,x,y) = (4 pi t)^(-d/2) exp(-|x-y|^2 / (4t)).
//   SubGaussianEnvelope: no pointwise kernel, only the two-regime
//   sub-Gaussian envelope pair (small time uses beta1, large time beta2);
//   any admissible kernel lies between envelope_lower and envelope_upper.
struct DiffusionKernel {
    DiffusionKind kind = DiffusionKind::GaussianEuclidean;
    int d = 1;
    // Envelope parameters (SubGaussianEnvelope only).
    double beta1 = 2.0, beta2 = 2.0;
    double c_low1 = 1.0, c_up1 = 1.0, c_low2 = 1.0, c_up2 = 1.0;
    double C_low1 = 1.0, C_up1 = 1.0, C_low2 = 1.0, C_up2 = 1.0;
    VolumeProfile profile;

    static DiffusionKernel gaussian(int d);
    static DiffusionKernel sub_gaussian_envelope(double beta1, double beta2,
                                                 double c_lower_small, double c_upper_small,
                                                 double c_lower_large, double c_upper_large,
                                                 double C_lower_small, double C_upper_small,
                                                 double C_lower_large, double C_upper_large,
                                                 VolumeProfile profile);
    // Pointwise Gaussian kernel at separation r (GaussianEuclidean only).
    double gaussian_density(double t, double r) const;
    // Envelope pair bracketing p(t, x, y) at separation r; for the Gaussian
    // kind both sides equal the kernel itself.
    double envelope_lower(double t, double r, double x_norm = 0.0) const;
    double envelope_upper(double t, double r, double x_norm = 0.0) const;
};

// Density of the subordinator at time t evaluated at s.  gamma = 1/2 uses
// the closed form (t / (2 sqrt(pi))) s^(-3/2) exp(-t^2/(4s)); other gamma
// use the single-integral representation of the standard positive stable
// density plus the scaling pi_t(s) = t^(-1/gamma) pi_1(s t^(-1/gamma)).
double pi_density(const StableSubordinator& sub, double t, double s);

// q(t, x, y) = int_0^inf p(s, x, y) pi_t(s) ds by adaptive quadrature with
// splits at s = t^(1/gamma) and s = r^2.  Gaussian kind only.
double subordinated_kernel(const StableSubordinator& sub, const DiffusionKernel& dk,
                           double t, double r);

// J(x, y) = int_0^inf p(s, x, y) nu(s) ds.  For the Gaussian kind this is
// the isotropic 2 gamma-stable jumping kernel A(d, 2 gamma) r^(-d-2gamma);
// evaluated as r^(-d-2gamma) times a cached unit-separation quadrature, so
// the scaling ratio between r and 2r is exact.
double jump_intensity(const StableSubordinator& sub, const DiffusionKernel& dk, double r);

struct EnvelopeRatioStats {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double spread = 0.0;  // max/min
    std::size_t n = 0;
};

// Ratio q(t,r) / min{ 1/V(0,phi_inv(t)), t/(V(0,r) phi(r)) } over a grid of
// (t, r) pairs; the spread certifies the two-sided comparability.
EnvelopeRatioStats envelope_ratio_audit(const StableSubordinator& sub,
                                        const DiffusionKernel& dk,
                                        const VolumeProfile& profile,
                                        const ScaleFunction& scale,
                                        const std::vector<std::pair<double, double>>& grid);

}  // namespace escape

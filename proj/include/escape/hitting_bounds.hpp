#pragma once
#include <optional>
#include <string>
#include <vector>

#include "escape/constants.hpp"

namespace escape {

// Euclidean instantiation bundle: isotropic alpha-stable process in R^d with
// V(0,r) = omega_d r^d, phi(r) = r^alpha, measured heat-kernel envelope
// constants, and the derived constant ledger.  When d = alpha the critical
// comparability (V vs phi) holds with cv1 = cv2 = omega_d.
struct HittingContext {
    double alpha = 2.0;
    int d = 1;
    VolumeProfile profile;
    ScaleFunction scale;
    KernelBounds kernel;
    std::optional<RecurrentComparability> rc;
    ConstantLedger ledger;
};

// Envelope constants L1, L2 for min{1/V(phi_inv(t)), t/(V(r) phi(r))}
// against the exact kernel, measured on a wide (t, rho) grid and cached.
// Only alpha in {1, 2} have closed-form kernels here.  For alpha = 2 the
// envelope fails as rho = r/sqrt(t) -> inf (Gaussian tail vs polynomial),
// so the grid is restricted to rho <= 4 and the bounds hold on that range.
KernelBounds measure_kernel_bounds(double alpha, int d);

HittingContext make_euclidean_context(double alpha, int d);

struct WindowQuery {
    double a = 1.0;  // window start
    double b = 2.0;  // window end
    double c = 1.0;  // auxiliary horizon for the upper bounds
    double r = 1.0;  // target ball radius
    void validate() const;
};

enum class LemmaTag { L41, L42, L43, LA1i, LA1ii };

struct SandwichBounds {
    double lower = 0.0;
    double upper = 1.0;
    LemmaTag lemma_tag = LemmaTag::L41;
    bool applicable = true;
    std::vector<std::string> violated;  // named preconditions when inapplicable
    bool upper_clamped = false;         // raw upper exceeded 1 (vacuous)
};

// Exact radial mass P(|X_t| <= r) for alpha = 2 (any d) and alpha = 1
// (d in {1,2,3}); nullopt otherwise.
std::optional<double> radial_mass_exact(double alpha, int d, double t, double r);

// Two-sided envelope bounds on int_a^b P(|X_u| <= r) du using the measured
// L1, L2; .first is the lower value, .second the upper.
std::pair<double, double> ball_occupation(const HittingContext& ctx, double a, double b,
                                          double r);
// Exact occupation integral by quadrature of the radial mass, when available.
std::optional<double> ball_occupation_exact(const HittingContext& ctx, double a, double b,
                                            double r);

// Window-hitting sandwich from occupation ratios.  use_exact selects the
// exact radial occupations (tight) over the envelope ones (always valid).
SandwichBounds lemma41_bounds(const HittingContext& ctx, const WindowQuery& q,
                              bool use_exact = true);

// Upper bound K1 (V(r)/phi(r)) int_a^{b+c} du / V(phi_inv(u)); requires
// phi(r) <= min(a, c).
SandwichBounds lemma42_upper(const HittingContext& ctx, const WindowQuery& q);

// Lower bound K2 (V(r)/phi(r)) int_a^b du / V(phi_inv(u)); requires
// phi(r) <= a, phi(2r) <= b - a, and the transient ledger (d1 > d4).
SandwichBounds lemma43_lower(const HittingContext& ctx, double a, double b, double r);

// Critical-regime sandwich: upper K3 log((b+c)/a) / (1 + log(c/phi(r))),
// lower K4 log(b/a) / (1 + log((b-a)/phi(2r))); requires the V-phi
// comparability data in the context.
SandwichBounds lemmaA1_bounds(const HittingContext& ctx, const WindowQuery& q);

}  // namespace escape

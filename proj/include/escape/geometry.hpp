#pragma once
#include <cstdint>
#include <string>

namespace escape {

// Two-sided power control of V(x,R)/V(x,r):
//   c1 (R/r)^d1 <= V(x,R)/V(x,r) <= c2 (R/r)^d2  for 0 < r < R.
struct DoublingExponents {
    double c1 = 1.0;  // in (0,1]
    double c2 = 1.0;  // in [1,inf)
    double d1 = 1.0;  // > 0
    double d2 = 1.0;  // >= d1
    void validate() const;
};

enum class VolumeKind { PowerGlobal, TwoRegime, Weighted };

// V(x,r) representatives:
//   PowerGlobal: prefactor * r^d
//   TwoRegime:   prefactor * (r^alpha1 for r<1, r^alpha2 for r>=1)
//   Weighted:    r^d * (1 + r + |x|)^(2*alpha), alpha > -d/2
struct VolumeProfile {
    VolumeKind kind = VolumeKind::PowerGlobal;
    double d = 1.0;
    double prefactor = 1.0;
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double alpha = 0.0;
    DoublingExponents exponents;

    static VolumeProfile power_global(double d, double prefactor = 1.0);
    static VolumeProfile two_regime(double alpha1, double alpha2, double prefactor = 1.0);
    static VolumeProfile weighted(double d, double alpha);
};

// phi(r) = r^beta1 for r<1, r^beta2 for r>=1; growth control
//   c3 (R/r)^d3 <= phi(R)/phi(r) <= c4 (R/r)^d4, d3 = min(beta), d4 = max(beta).
struct ScaleFunction {
    double beta1 = 2.0;
    double beta2 = 2.0;
    double c3 = 1.0;
    double c4 = 1.0;
    double d3 = 2.0;
    double d4 = 2.0;

    static ScaleFunction power(double beta);
    static ScaleFunction two_regime(double beta1, double beta2);
    void validate() const;
};

double eval_volume(const VolumeProfile& profile, double x_norm, double r);
double eval_phi(const ScaleFunction& scale, double r);
double eval_phi_inv(const ScaleFunction& scale, double t);

struct AuditReport {
    bool pass = true;
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    // Worst observed margins: min over samples of (ratio/lower_bound) and of
    // (upper_bound/ratio); both >= 1 (up to tolerance) iff the audit passes.
    double worst_lower_margin = 1.0;
    double worst_upper_margin = 1.0;
    std::string detail;
};

AuditReport audit_doubling(const VolumeProfile& profile, std::uint64_t sample_count,
                           std::uint64_t rng_seed, double r_lo = 1e-6, double r_hi = 1e6);
AuditReport audit_scale(const ScaleFunction& scale, std::uint64_t sample_count,
                        std::uint64_t rng_seed, double r_lo = 1e-6, double r_hi = 1e6);

}  // namespace escape

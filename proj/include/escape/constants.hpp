#pragma once
#include <optional>

#include "escape/geometry.hpp"

namespace escape {

// Two-sided heat kernel envelope constants:
//   L1 * env <= p(t,x,y) <= L2 * env,
//   env = min{ 1/V(x,phi_inv(t)), t/(V(x,d(x,y)) phi(d(x,y))) }.
struct KernelBounds {
    double L1 = 1.0;
    double L2 = 1.0;
    void validate() const;
};

// Critical-regime comparability cv1*phi(r) <= V(x,r) <= cv2*phi(r).
struct RecurrentComparability {
    double cv1 = 1.0;
    double cv2 = 1.0;
    void validate() const;
};

// Every explicit constant of the hitting lemmas and the limsup/liminf
// bracket, computed from the exponent data.  Transient-only entries need
// d1 > d4; critical-only entries need the comparability constants.
struct ConstantLedger {
    double K1 = 0.0;
    double H1 = 0.0;
    double H2 = 0.0;
    std::optional<double> K_star;
    std::optional<double> K2;
    std::optional<double> K3;
    std::optional<double> K4;
    std::optional<double> sup_bound_transient;
    std::optional<double> inf_bound_transient;
    std::optional<double> sup_bound_critical;
    std::optional<double> inf_bound_critical;
};

ConstantLedger compute_ledger(const DoublingExponents& exp, const ScaleFunction& scale,
                              const KernelBounds& kb,
                              const std::optional<RecurrentComparability>& rc = {});

// Parameter-window constants of the proof propositions.  Windows:
//   A_of, A_prime_of: 1 < k < 3/2 and 1 < l < 2 - 1/k
//   B_of, B_prime_of: 1 < l < k < 2 (B_prime additionally eps > 0)
double A_of(const DoublingExponents& exp, const ScaleFunction& scale,
            const ConstantLedger& ledger, double k, double l);
double B_of(const DoublingExponents& exp, const ScaleFunction& scale,
            const ConstantLedger& ledger, double k, double l);
double A_prime_of(const ScaleFunction& scale, const ConstantLedger& ledger,
                  double k, double l);
double B_prime_of(const ScaleFunction& scale, const ConstantLedger& ledger,
                  double eps, double k, double l);

}  // namespace escape

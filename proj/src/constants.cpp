#include "escape/constants.hpp"

#include <cmath>

#include "escape/errors.hpp"

namespace escape {

void KernelBounds::validate() const {
    if (!(L1 > 0.0)) throw domain_error("kernel bounds: L1 must be > 0");
    if (!(L2 >= L1)) throw domain_error("kernel bounds: L2 must be >= L1");
}

void RecurrentComparability::validate() const {
    if (!(cv1 > 0.0)) throw domain_error("comparability: cv1 must be > 0");
    if (!(cv2 >= cv1)) throw domain_error("comparability: cv2 must be >= cv1");
}

ConstantLedger compute_ledger(const DoublingExponents& e, const ScaleFunction& s,
                              const KernelBounds& kb,
                              const std::optional<RecurrentComparability>& rc) {
    e.validate();
    s.validate();
    kb.validate();
    const double Lr = kb.L2 / kb.L1;

    ConstantLedger led;
    led.K1 = std::pow(2.0, e.d2) * e.c2 * Lr;
    led.H1 = e.c2 * s.c4 * std::pow(2.0, e.d2 + s.d4) * Lr;
    led.H2 = 3.0 * led.K1 * e.c2 / std::pow(s.c3, e.d2 / s.d3);

    if (e.d1 > s.d4) {
        const double kstar =
            (std::pow(s.c4, e.d1 / s.d4) / e.c1) * (s.d4 / (e.d1 - s.d4));
        led.K_star = kstar;
        led.K2 = (1.0 / Lr) /
                 (s.c4 * std::pow(2.0, s.d4 + 1.0) *
                  (1.0 + e.c2 * e.c2 * std::pow(3.0, e.d2) * kstar));
        led.sup_bound_transient =
            Lr * std::pow(2.0, e.d2) * e.c2 * e.c2 / std::pow(s.c3, e.d2 / s.d3);
        led.inf_bound_transient =
            (1.0 / Lr) *
            (e.c1 * e.c1 * std::pow(s.c3, 3.0 * e.d2 / s.d3 - 1.0) /
             (std::pow(2.0, s.d4 + 1.0) * (e.c2 * s.c4) * (e.c2 * s.c4))) *
            ((e.d1 - s.d4) /
             ((e.d1 - s.d4) * e.c1 +
              std::pow(3.0, e.d2) * s.d4 * e.c2 * e.c2 * std::pow(s.c4, e.d1 / s.d4)));
    }

    if (rc) {
        rc->validate();
        const double cvr = rc->cv2 / rc->cv1;
        led.K3 = led.K1 * cvr * cvr;
        led.K4 = (1.0 / Lr) / (std::pow(2.0, s.d4 + 1.0) * s.c4 * cvr * cvr);
        led.sup_bound_critical = Lr * std::pow(2.0, e.d2) * e.c2 * cvr * cvr / s.d3;
        led.inf_bound_critical =
            (1.0 / Lr) / (std::pow(2.0, s.d4 + 1.0) * s.d4 * s.c4 * cvr * cvr);
    }
    return led;
}

namespace {

void check_A_window(double k, double l) {
    if (!(k > 1.0 && k < 1.5)) throw domain_error("A window: need 1 < k < 3/2");
    if (!(l > 1.0 && l < 2.0 - 1.0 / k))
        throw domain_error("A window: need 1 < l < 2 - 1/k");
}

void check_B_window(double k, double l) {
    if (!(l > 1.0)) throw domain_error("B window: need l > 1");
    if (!(k > l)) throw domain_error("B window: need k > l");
    if (!(k < 2.0)) throw domain_error("B window: need k < 2");
}

}  // namespace

double A_of(const DoublingExponents& e, const ScaleFunction& s,
            const ConstantLedger& led, double k, double l) {
    check_A_window(k, l);
    return led.H1 * led.H2 * (e.c2 * s.c4 / (e.c1 * s.c3)) *
           std::pow(k * l / (l - 1.0), e.d2 / s.d3) *
           std::pow(l, (e.d2 - s.d3) / s.d3);
}

double B_of(const DoublingExponents& e, const ScaleFunction& s,
            const ConstantLedger& led, double k, double l) {
    check_B_window(k, l);
    if (!led.K2) throw regime_error("B requires the transient ledger (d1 > d4)");
    return *led.K2 * (e.c1 * std::pow(s.c3, 2.0 * e.d2 / s.d3) / (e.c2 * e.c2 * s.c4)) *
           ((k - 1.0) / (k * l - 1.0)) / std::pow(k, 2.0 * e.d2 / s.d3 - 1.0);
}

double A_prime_of(const ScaleFunction& s, const ConstantLedger& led, double k, double l) {
    check_A_window(k, l);
    if (!led.K3) throw regime_error("A' requires the critical ledger (comparability data)");
    return (2.0 * led.H1 * *led.K3 / s.d3) * (k * l / (k * l - 1.0)) *
           std::log(1.5 * k * l / (l - 1.0));
}

double B_prime_of(const ScaleFunction& s, const ConstantLedger& led, double eps,
                  double k, double l) {
    if (!(eps > 0.0)) throw domain_error("B' window: need eps > 0");
    check_B_window(k, l);
    if (!led.K4) throw regime_error("B' requires the critical ledger (comparability data)");
    return (*led.K4 / (s.d4 + eps)) * std::log(k) / (k * l - 1.0);
}

}  // namespace escape

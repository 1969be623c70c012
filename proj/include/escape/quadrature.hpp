#pragma once
#include <cmath>
#include <cstddef>
#include <functional>

namespace escape {

namespace detail {
// Gauss-Kronrod 7-15 nodes/weights (QUADPACK qk15).
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};
}  // namespace detail

// Adaptive Gauss-Kronrod on [a,b].  rel_tol is relative to the running
// integral magnitude; abs_floor guards near-zero integrals.
template <typename F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-10,
                 double abs_floor = 1e-300, int max_depth = 52) {
    struct Rec {
        const F& f;
        double rel_tol, abs_floor;
        int max_depth;
        double run(double a, double b, double whole_hint, int depth) {
            const double c = 0.5 * (a + b), h = 0.5 * (b - a);
            double kron = 0.0, gauss = 0.0;
            double fc = f(c);
            kron = detail::kWgk[7] * fc;
            gauss = detail::kWg[3] * fc;
            for (int i = 0; i < 7; ++i) {
                const double dx = h * detail::kXgk[i];
                const double s = f(c - dx) + f(c + dx);
                kron += detail::kWgk[i] * s;
                if (i % 2 == 1) gauss += detail::kWg[i / 2] * s;
            }
            const double vk = h * kron;
            const double err = std::abs(h * (kron - gauss));
            const double scale = std::max({std::abs(whole_hint), std::abs(vk), abs_floor});
            if (depth >= max_depth || err <= rel_tol * scale) return vk;
            return run(a, c, scale, depth + 1) + run(c, b, scale, depth + 1);
        }
    };
    if (!(b > a)) return 0.0;
    Rec rec{f, rel_tol, abs_floor, max_depth};
    return rec.run(a, b, 0.0, 0);
}

// Integral over [a, infinity) for integrands that decay at least like a
// convergent power.  Works on the log axis in doubling blocks and stops
// once two consecutive blocks contribute below rel_tol relatively.
template <typename F>
double integrate_to_inf(const F& f, double a, double rel_tol = 1e-10,
                        int max_blocks = 128) {
    double total = 0.0;
    double lo = a;
    int quiet = 0;
    for (int k = 0; k < max_blocks; ++k) {
        const double hi = lo * 2.0;
        const double part = integrate(f, lo, hi, rel_tol * 0.1);
        total += part;
        if (std::abs(part) <= rel_tol * std::abs(total)) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
        lo = hi;
    }
    return total;
}

// Composite Gauss-Legendre with fixed panel count; 8-point rule per panel.
// Used where a deterministic fixed-cost rule is wanted (stable density).
template <typename F>
double composite_gl8(const F& f, double a, double b, int panels) {
    static constexpr double x[4] = {0.1834346424956498, 0.5255324099163290,
                                    0.7966664774136267, 0.9602898564975363};
    static constexpr double w[4] = {0.3626837833783620, 0.3137066458778873,
                                    0.2223810344533745, 0.1012285362903763};
    const double hp = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * hp, h = 0.5 * hp;
        for (int i = 0; i < 4; ++i) {
            sum += w[i] * (f(c - h * x[i]) + f(c + h * x[i])) * h;
        }
    }
    return sum;
}

}  // namespace escape

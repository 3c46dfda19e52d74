// quadrature.hpp — small internal numeric helpers shared by kernel tail sums
// and the closed-form bound evaluations.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "lrfpp/errors.hpp"

namespace lrfpp::detail {

// Adaptive Simpson on [a, b] with absolute tolerance scaled off an estimate
// of the whole integral.  f must be smooth on (a, b).
template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol, int max_depth = 40) {
    if (!(b > a)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double tol = std::abs(whole) * rel_tol + 1e-300;
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Golden-section minimization of a unimodal function on [lo, hi].
template <typename F>
double golden_section_min(const F& f, double lo, double hi, double rel_tol = 1e-12) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while ((b - a) > rel_tol * (std::abs(a) + std::abs(b) + 1.0)) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace lrfpp::detail

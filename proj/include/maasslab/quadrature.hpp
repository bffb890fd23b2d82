#pragma once

// Double-exponential quadrature on (0, inf): x = exp(pi/2 sinh t), trapezoid
// in t with step halving.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace maasslab {

struct QuadResult {
    std::complex<double> value;
    double abs_error;
    int levels;
};

/// Integral of f over (0, inf) for f analytic on the half-line, allowed
/// integrable endpoint singularities at 0 and decaying at least
/// exponentially. The error estimate is the last level difference plus a
/// rounding allowance proportional to the integral of |f|.
template <class F>
QuadResult exp_sinh(F&& f, double rel_tol = 1e-14, int max_level = 8) {
    using C = std::complex<double>;
    constexpr double half_pi = std::numbers::pi / 2.0;
    auto node = [&](double t, double& mag) -> C {
        const double s = half_pi * std::sinh(t);
        if (s > 700.0 || s < -700.0) {
            mag = 0.0;
            return 0.0;
        }
        const double x = std::exp(s);
        if (x == 0.0 || !std::isfinite(x)) {
            mag = 0.0;
            return 0.0;
        }
        const C v = f(x) * (half_pi * std::cosh(t) * x);
        mag = std::abs(v);
        if (!std::isfinite(mag)) {
            mag = 0.0;
            return 0.0;
        }
        return v;
    };

    // level 0: step h0, walk outwards until the terms are negligible
    const double h0 = 0.5;
    double mag = 0.0;
    C sum = node(0.0, mag);
    double abs_sum = mag;
    double tmax = 0.0, tmin = 0.0;
    for (int dir : {1, -1}) {
        int small = 0;
        for (int k = 1; k < 40; ++k) {
            const double t = dir * k * h0;
            const C v = node(t, mag);
            sum += v;
            abs_sum += mag;
            if (dir > 0) tmax = t; else tmin = t;
            if (mag <= 1e-20 * std::abs(sum) || mag == 0.0) {
                if (++small >= 2) break;
            } else {
                small = 0;
            }
        }
    }
    C prev = sum * h0;
    double h = h0;
    double diff = std::numeric_limits<double>::infinity();
    int level = 0;
    for (level = 1; level <= max_level; ++level) {
        h *= 0.5;
        C add = 0.0;
        for (double t = tmin + h; t < tmax; t += 2.0 * h) {
            add += node(t, mag);
            abs_sum += mag;
        }
        sum += add;
        const C cur = sum * h;
        diff = std::abs(cur - prev);
        prev = cur;
        if (level >= 3 && diff <= rel_tol * std::abs(cur)) break;
    }
    const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * abs_sum * h;
    return {prev, diff + rounding, level};
}

} // namespace maasslab

#pragma once

// Reference implementations that share no code with the Whittaker engine;
// the verification suites compare against them.

#include "modgroup.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

namespace maasslab::oracle {

/// K_nu(x) = int_0^inf e^{-x cosh t} cosh(nu t) dt by the trapezoid rule,
/// which converges geometrically for this analytic, doubly decaying integrand.
inline Complex bessel_k(Complex nu, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("bessel_k: x must be positive");
    const double tmax = std::acosh(1.0 + 760.0 / x) + 1.0;
    // e^{-x} factored out: cosh t - 1 = 2 sinh^2(t/2)
    auto f = [&](double t) {
        const double sh = std::sinh(0.5 * t);
        return std::exp(-2.0 * x * sh * sh) * std::cosh(nu * t);
    };
    double h = 0.25;
    Complex prev = 0.0;
    for (int level = 0; level < 12; ++level) {
        Complex s = 0.5 * f(0.0);
        for (double t = h; t <= tmax; t += h) s += f(t);
        s *= h;
        if (level > 2 && std::abs(s - prev) <= 1e-16 * std::abs(s)) return s * std::exp(-x);
        prev = s;
        h *= 0.5;
    }
    return prev * std::exp(-x);
}

/// y^s sum |cz+d|^{-2s} over coprime (c,d), N | c, c > 0 or (c,d) = (0,1),
/// c^2 + d^2 <= R^2: the weight-0 Eisenstein lattice sum, by direct loops.
inline Complex eisenstein_lattice_sum(Complex s, const Complex z, long N, long R) {
    const double y = z.imag();
    Complex sum = 0.0;
    for (long c = 0; c <= R; c += N) {
        for (long d = -R; d <= R; ++d) {
            if (c * c + d * d > R * R || std::gcd(c, d) != 1) continue;
            if (c == 0 && d != 1) continue;
            sum += std::exp(-s * std::log(std::norm(static_cast<double>(c) * z + static_cast<double>(d))));
        }
    }
    return std::exp(s * std::log(y)) * sum;
}

/// y^{k/2} sum (cz+d)^{-k} over the same pairs, integer k: the Poincare
/// series with seed y^{k/2}.
inline Complex poincare_lattice_sum(int k, const Complex z, long N, long R) {
    const double y = z.imag();
    Complex sum = 0.0;
    for (long c = 0; c <= R; c += N) {
        for (long d = -R; d <= R; ++d) {
            if (c * c + d * d > R * R || std::gcd(c, d) != 1) continue;
            if (c == 0 && d != 1) continue;
            sum += std::pow(static_cast<double>(c) * z + static_cast<double>(d), -k);
        }
    }
    return std::pow(y, k / 2.0) * sum;
}

} // namespace maasslab::oracle

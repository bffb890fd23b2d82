#pragma once

// Complex Gamma function: Lanczos (g = 7, 9 terms) in double precision and
// a Stirling series in long double for the cancellation-prone routes.

#include "modgroup.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace maasslab {

using ComplexLD = std::complex<long double>;

inline bool is_nonpositive_integer(Complex z, double tol = 0.0) {
    if (std::abs(z.imag()) > tol) return false;
    const double r = std::round(z.real());
    return r <= 0.0 && std::abs(z.real() - r) <= tol;
}

namespace detail {

inline constexpr std::array<double, 9> lanczos_coeffs{
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

/// log Gamma(z) for Re z >= 1/2, branch not normalised.
inline Complex lanczos_log_gamma(Complex z) {
    z -= 1.0;
    Complex x = lanczos_coeffs[0];
    for (int i = 1; i < 9; ++i) x += lanczos_coeffs[static_cast<std::size_t>(i)] / (z + static_cast<double>(i));
    const Complex t = z + 7.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

} // namespace detail

inline Complex gamma_complex(Complex z) {
    if (is_nonpositive_integer(z)) throw std::domain_error("gamma_complex: pole at non-positive integer");
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma_complex(1.0 - z));
    return std::exp(detail::lanczos_log_gamma(z));
}

/// 1/Gamma(z), entire; zero at the non-positive integers.
inline Complex rgamma_complex(Complex z) {
    if (is_nonpositive_integer(z)) return 0.0;
    if (z.real() < 0.5) return std::sin(pi * z) / pi * std::exp(detail::lanczos_log_gamma(1.0 - z));
    return std::exp(-detail::lanczos_log_gamma(z));
}

/// A logarithm of Gamma(z) (imaginary part not reduced to the principal branch).
inline Complex log_gamma_complex(Complex z) {
    if (is_nonpositive_integer(z)) throw std::domain_error("log_gamma_complex: pole at non-positive integer");
    if (z.real() < 0.5) return std::log(pi / std::sin(pi * z)) - detail::lanczos_log_gamma(1.0 - z);
    return detail::lanczos_log_gamma(z);
}

namespace detail {

/// Stirling series for log Gamma in long double, shifted to |z| >= 15.
inline ComplexLD log_gamma_ld_right(ComplexLD z) {
    // B_{2k} / (2k (2k-1))
    static constexpr long double c[10] = {1.0L / 12.0L,          -1.0L / 360.0L,         1.0L / 1260.0L,
                                          -1.0L / 1680.0L,       1.0L / 1188.0L,         -691.0L / 360360.0L,
                                          1.0L / 156.0L,         -3617.0L / 122400.0L,   43867.0L / 244188.0L,
                                          -174611.0L / 125400.0L};
    ComplexLD shift = 0.0L;
    while (std::abs(z) < 15.0L) {
        shift += std::log(z);
        z += 1.0L;
    }
    const long double half_log_2pi = 0.918938533204672741780329736405617639861L;
    ComplexLD s = (z - 0.5L) * std::log(z) - z + half_log_2pi;
    const ComplexLD inv = 1.0L / z, inv2 = inv * inv;
    ComplexLD p = inv;
    for (long double ck : c) {
        s += ck * p;
        p *= inv2;
    }
    return s - shift;
}

} // namespace detail

inline bool is_nonpositive_integer_ld(ComplexLD z) {
    if (z.imag() != 0.0L) return false;
    const long double r = std::round(z.real());
    return r <= 0.0L && z.real() == r;
}

inline ComplexLD rgamma_ld(ComplexLD z) {
    const long double pi_ld = 3.141592653589793238462643383279502884L;
    if (is_nonpositive_integer_ld(z)) return 0.0L;
    if (z.real() < 0.5L) return std::sin(pi_ld * z) / pi_ld * std::exp(detail::log_gamma_ld_right(1.0L - z));
    return std::exp(-detail::log_gamma_ld_right(z));
}

inline ComplexLD gamma_ld(ComplexLD z) {
    if (is_nonpositive_integer_ld(z)) throw std::domain_error("gamma_ld: pole at non-positive integer");
    return 1.0L / rgamma_ld(z);
}

// 113-bit binary floats for routes that cancel many digits.
using RealQ = boost::multiprecision::cpp_bin_float_quad;
using ComplexQ = boost::multiprecision::cpp_complex_quad;

inline const RealQ& pi_q() {
    static const RealQ v = boost::math::constants::pi<RealQ>();
    return v;
}

namespace detail {

/// Stirling series with 15 Bernoulli terms, shifted to |z| >= 30.
inline ComplexQ log_gamma_q_right(ComplexQ z) {
    static const std::array<std::pair<long long, long long>, 15> bern{{
        {1, 6}, {-1, 30}, {1, 42}, {-1, 30}, {5, 66}, {-691, 2730}, {7, 6}, {-3617, 510},
        {43867, 798}, {-174611, 330}, {854513, 138}, {-236364091, 2730}, {8553103, 6},
        {-23749461029LL, 870}, {8615841276005LL, 14322}}};
    static const std::array<RealQ, 15> c = [] {
        std::array<RealQ, 15> out;
        for (std::size_t i = 0; i < 15; ++i) {
            const long long k2 = 2 * static_cast<long long>(i + 1);
            out[i] = RealQ(bern[i].first) / RealQ(bern[i].second) / RealQ(k2 * (k2 - 1));
        }
        return out;
    }();
    ComplexQ shift = 0;
    while (abs(z) < 30) {
        shift += log(z);
        z += 1;
    }
    ComplexQ s = (z - RealQ(0.5)) * log(z) - z + log(2 * pi_q()) / 2;
    const ComplexQ inv = ComplexQ(1) / z, inv2 = inv * inv;
    ComplexQ p = inv;
    for (const RealQ& ck : c) {
        s += ck * p;
        p *= inv2;
    }
    return s - shift;
}

} // namespace detail

inline bool is_nonpositive_integer_q(const ComplexQ& z) {
    if (z.imag() != 0) return false;
    const RealQ r = round(z.real());
    return r <= 0 && z.real() == r;
}

inline ComplexQ rgamma_q(const ComplexQ& z) {
    if (is_nonpositive_integer_q(z)) return ComplexQ(0);
    if (z.real() < RealQ(0.5)) return sin(pi_q() * z) / pi_q() * exp(detail::log_gamma_q_right(ComplexQ(1) - z));
    return exp(-detail::log_gamma_q_right(z));
}

} // namespace maasslab

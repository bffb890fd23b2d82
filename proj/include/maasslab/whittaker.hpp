#pragma once

// Whittaker functions M_{k,nu}(y), W_{k,nu}(y) for complex indices and
// real y > 0, via the confluent hypergeometric functions
//   M_{k,nu}(y) = e^{-y/2} y^{nu+1/2} M(a, b, y),
//   W_{k,nu}(y) = e^{-y/2} y^{nu+1/2} U(a, b, y),   a = 1/2 + nu - k, b = 1 + 2 nu,
// and the renormalised pair
//   Wt_{k,nu} = W_{k,nu},   Mt_{k,nu} = Gamma(1/2 + nu - k)/Gamma(1 + 2 nu) M_{k,nu}.

#include "modgroup.hpp"
#include "quadrature.hpp"
#include "special.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace maasslab {

enum class Method { series, integral, asymptotic };

inline const char* method_name(Method m) {
    switch (m) {
    case Method::series: return "series";
    case Method::integral: return "integral";
    case Method::asymptotic: return "asymptotic";
    }
    return "?";
}

struct EvalResult {
    Complex value;
    double abs_error;
    Method method;
};

struct WhittakerParams {
    Complex k;
    Complex nu;
};

/// Thrown when a parameter sits on a pole of a Gamma prefactor or when no
/// evaluation route reaches the requested accuracy.
class WhittakerError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

inline constexpr long double eps_ld = std::numeric_limits<long double>::epsilon();

inline Complex to_c(ComplexLD z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }
inline ComplexLD to_ld(Complex z) { return {z.real(), z.imag()}; }

struct SeriesLD {
    ComplexLD value;
    long double abs_error;
};

/// sum_n (a)_n / Gamma(b+n) y^n / n!  (regularised when `regularised`,
/// otherwise divided by (b)_n); long double accumulation.
inline SeriesLD kummer_series(ComplexLD a, ComplexLD b, long double y, bool regularised) {
    ComplexLD term = regularised ? rgamma_ld(b) : ComplexLD(1.0L);
    ComplexLD sum = term;
    long double abs_sum = std::abs(term);
    long double max_term = abs_sum;
    // for the regularised series, 1/Gamma(b+n) is carried along by
    // 1/Gamma(b+n+1) = 1/Gamma(b+n) / (b+n), restarting past zeros
    ComplexLD rg = term;
    ComplexLD poch = 1.0L;  // (a)_n y^n / n!
    int quiet = 0;
    for (int n = 0; n < 100000; ++n) {
        const long double nn = static_cast<long double>(n);
        poch *= (a + nn) * y / (nn + 1.0L);
        if (regularised) {
            const ComplexLD bn = b + nn;
            rg = std::abs(bn) > 0.25L ? rg / bn : rgamma_ld(bn + 1.0L);
            term = poch * rg;
        } else {
            const ComplexLD bn = b + nn;
            if (bn == ComplexLD(0.0L)) throw WhittakerError("kummer_M: b is a non-positive integer");
            term *= (a + nn) * y / (bn * (nn + 1.0L));
        }
        sum += term;
        const long double at = std::abs(term);
        abs_sum += at;
        max_term = std::max(max_term, at);
        if (poch == ComplexLD(0.0L)) break;  // a is a non-positive integer
        if (nn > std::abs(a) + y && at <= eps_ld * std::abs(sum)) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
    }
    return {sum, 8.0L * eps_ld * (abs_sum + max_term)};
}

inline Complex powc(double y, Complex e) { return std::exp(e * std::log(y)); }

/// Asymptotic series y^{-a} sum (a)_s (a-b+1)_s / s! (-1/y)^s, truncated at
/// the smallest term or exactly when it terminates.
inline EvalResult tricomi_asymptotic(Complex a, Complex b, double y) {
    const Complex c = a - b + 1.0;
    Complex term = 1.0, sum = 1.0;
    double prev = 1.0;
    double err = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 500; ++s) {
        const double ds = s;
        const Complex next = term * (a + ds) * (c + ds) / ((ds + 1.0) * -y);
        const double an = std::abs(next);
        if (an == 0.0) {
            err = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(sum) * (s + 1);
            break;
        }
        if (an > prev && s > 0) {
            err = prev;
            break;
        }
        sum += next;
        term = next;
        prev = an;
        if (an <= 1e-17 * std::abs(sum)) {
            err = an + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(sum);
            break;
        }
    }
    const Complex scale = powc(y, -a);
    return {scale * sum, std::abs(scale) * err, Method::asymptotic};
}

/// U(a,b,y) by the Laplace integral, Re a > 0:
///   U = y^{-a}/Gamma(a) int_0^inf e^{-s} s^{a-1} (1+s/y)^{b-a-1} ds.
inline EvalResult tricomi_integral_direct(Complex a, Complex b, double y) {
    const Complex p = b - a - 1.0;
    auto f = [&](double s) -> Complex {
        const double l = std::log(s);
        const Complex e = -s + (a - 1.0) * l + p * std::log1p(s / y);
        if (e.real() < -745.0) return 0.0;
        return std::exp(e);
    };
    QuadResult q = exp_sinh(f);
    const Complex pref = powc(y, -a) * rgamma_complex(a);
    return {pref * q.value, std::abs(pref) * q.abs_error + 1e-15 * std::abs(pref * q.value), Method::integral};
}

/// U(a,b,y) by the integral at a + m, a + m + 1 (Re(a+m) >= 1) followed by
/// the recurrence U(a-1) = -(b-2a-y) U(a) - a(a-b+1) U(a+1), which is stable
/// towards decreasing a.
inline EvalResult tricomi_integral(Complex a, Complex b, double y) {
    int m = 0;
    if (a.real() < 1.0) m = static_cast<int>(std::ceil(1.0 - a.real()));
    if (m == 0) return tricomi_integral_direct(a, b, y);
    EvalResult u1 = tricomi_integral_direct(a + static_cast<double>(m), b, y);
    EvalResult u2 = tricomi_integral_direct(a + static_cast<double>(m + 1), b, y);
    Complex hi = u2.value, lo = u1.value;
    double ehi = u2.abs_error, elo = u1.abs_error;
    for (int j = m; j >= 1; --j) {
        const Complex A = a + static_cast<double>(j);
        const Complex c1 = b - 2.0 * A - y, c2 = A * (A - b + 1.0);
        const Complex next = -c1 * lo - c2 * hi;
        const double enext = std::abs(c1) * elo + std::abs(c2) * ehi +
                             4.0 * std::numeric_limits<double>::epsilon() * (std::abs(c1 * lo) + std::abs(c2 * hi));
        hi = lo;
        ehi = elo;
        lo = next;
        elo = enext;
    }
    return {lo, elo, Method::integral};
}

struct SeriesQ {
    ComplexQ value;
    RealQ abs_error;
};

inline ComplexQ to_q(Complex z) { return ComplexQ(RealQ(z.real()), RealQ(z.imag())); }
inline Complex to_c(const ComplexQ& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

/// sum_n (a)_n / Gamma(b+n) y^n / n! in 113-bit arithmetic.
inline SeriesQ kummer_series_regularised_q(const ComplexQ& a, const ComplexQ& b, const RealQ& y) {
    const RealQ eps = std::numeric_limits<RealQ>::epsilon();
    ComplexQ rg = rgamma_q(b);
    ComplexQ sum = rg, poch = 1;
    RealQ abs_sum = abs(rg), max_term = abs_sum;
    int quiet = 0;
    for (int n = 0; n < 100000; ++n) {
        const ComplexQ an = a + n, bn = b + n;
        poch *= an * y / (n + 1);
        rg = abs(bn) > RealQ(0.25) ? ComplexQ(rg / bn) : rgamma_q(bn + 1);
        const ComplexQ term = poch * rg;
        sum += term;
        const RealQ at = abs(term);
        abs_sum += at;
        if (at > max_term) max_term = at;
        if (poch == ComplexQ(0)) break;
        if (n > abs(a) + y && at <= eps * abs(sum)) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
    }
    return {sum, 8 * eps * (abs_sum + max_term)};
}

/// U(a,b,y) from the connection formula
///   U = pi/sin(pi b) [ M(a,b,y)/Gamma(b) / Gamma(a-b+1) - y^{1-b} M(a-b+1,2-b,y)/Gamma(2-b) / Gamma(a) ]
/// in 113-bit arithmetic; the two terms cancel by up to e^y y^{-2 Re k}.
/// Unusable at integer b.
inline EvalResult tricomi_series(Complex a_, Complex b_, double y_) {
    const double dist = std::abs(b_ - std::round(b_.real()));
    if (dist < 1e-8) throw WhittakerError("tricomi U: series route unavailable for b within 1e-8 of an integer");
    const RealQ eps = std::numeric_limits<RealQ>::epsilon();
    const ComplexQ a = to_q(a_), b = to_q(b_), one(1);
    const RealQ y = y_;
    SeriesQ m1 = kummer_series_regularised_q(a, b, y);
    SeriesQ m2 = kummer_series_regularised_q(a - b + one, ComplexQ(2) - b, y);
    const ComplexQ r1 = rgamma_q(a - b + one), r2 = rgamma_q(a);
    const ComplexQ ypow = exp((one - b) * log(y));
    const ComplexQ f = pi_q() / sin(pi_q() * b);
    const ComplexQ t1 = m1.value * r1, t2 = ypow * m2.value * r2;
    const ComplexQ val = f * (t1 - t2);
    const RealQ err = abs(f) * (m1.abs_error * abs(r1) + abs(ypow) * m2.abs_error * abs(r2) +
                                64 * eps * (abs(t1) + abs(t2)));
    const double v = std::abs(to_c(val));
    return {to_c(val), static_cast<double>(err) + 2.0 * std::numeric_limits<double>::epsilon() * v, Method::series};
}

} // namespace detail

/// Kummer's confluent hypergeometric function 1F1(a; b; y).
inline EvalResult kummer_M(Complex a, Complex b, double y) {
    if (is_nonpositive_integer(b)) throw WhittakerError("kummer_M: b is a non-positive integer (use kummer_M_regularized)");
    if (y < 0.0) throw std::invalid_argument("kummer_M: y must be non-negative");
    auto s = detail::kummer_series(detail::to_ld(a), detail::to_ld(b), y, false);
    return {detail::to_c(s.value), static_cast<double>(s.abs_error), Method::series};
}

/// 1F1(a; b; y) / Gamma(b), entire in b.
inline EvalResult kummer_M_regularized(Complex a, Complex b, double y) {
    if (y < 0.0) throw std::invalid_argument("kummer_M_regularized: y must be non-negative");
    auto s = detail::kummer_series(detail::to_ld(a), detail::to_ld(b), y, true);
    return {detail::to_c(s.value), static_cast<double>(s.abs_error), Method::series};
}

enum class WRoute { automatic, series, integral, asymptotic };

/// Tricomi's U(a, b, y), y > 0.
inline EvalResult tricomi_U(Complex a, Complex b, double y, WRoute route = WRoute::automatic) {
    if (!(y > 0.0)) throw std::invalid_argument("tricomi_U: y must be positive");
    switch (route) {
    case WRoute::series: return detail::tricomi_series(a, b, y);
    case WRoute::asymptotic: return detail::tricomi_asymptotic(a, b, y);
    case WRoute::integral: break;
    case WRoute::automatic: {
        EvalResult as = detail::tricomi_asymptotic(a, b, y);
        if (std::isfinite(as.abs_error) && as.abs_error <= 1e-15 * std::abs(as.value)) return as;
        break;
    }
    }
    // U(a,b,y) = y^{1-b} U(a-b+1, 2-b, y): integrate in whichever form has
    // the larger Re a, so fewer recurrence steps are needed
    const Complex a2 = a - b + 1.0;
    if (a2.real() > a.real()) {
        EvalResult r = detail::tricomi_integral(a2, 2.0 - b, y);
        const Complex f = detail::powc(y, 1.0 - b);
        const double ex = std::abs((1.0 - b) * std::log(y)) + 4.0;
        return {f * r.value, std::abs(f) * r.abs_error + 2.0 * ex * std::numeric_limits<double>::epsilon() * std::abs(f * r.value),
                Method::integral};
    }
    return detail::tricomi_integral(a, b, y);
}

inline EvalResult whittaker_W(const WhittakerParams& p, double y, WRoute route = WRoute::automatic) {
    if (!(y > 0.0)) throw std::invalid_argument("whittaker_W: y must be positive");
    // W_{k,nu} = W_{k,-nu}: work with Re nu >= 0
    const Complex nu = p.nu.real() >= 0.0 ? p.nu : -p.nu;
    const Complex a = 0.5 + nu - p.k, b = 1.0 + 2.0 * nu;
    EvalResult u = tricomi_U(a, b, y, route);
    const Complex f = std::exp(-0.5 * y + 0.5 * b * std::log(y));
    Complex v = f * u.value;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || !std::isfinite(u.abs_error))
        throw WhittakerError("whittaker_W: evaluation did not converge");
    // rounding in exp of the exponent, relative to its size
    const double ex = std::abs(-0.5 * y + 0.5 * b * std::log(y)) + 4.0;
    return {v, std::abs(f) * u.abs_error + 2.0 * ex * std::numeric_limits<double>::epsilon() * std::abs(v), u.method};
}

inline EvalResult whittaker_M(const WhittakerParams& p, double y) {
    if (!(y > 0.0)) throw std::invalid_argument("whittaker_M: y must be positive");
    const Complex a = 0.5 + p.nu - p.k, b = 1.0 + 2.0 * p.nu;
    if (is_nonpositive_integer(b)) throw WhittakerError("whittaker_M: 1 + 2 nu is a non-positive integer");
    EvalResult r = kummer_M_regularized(a, b, y);
    const Complex f = gamma_complex(b) * std::exp(-0.5 * y + 0.5 * b * std::log(y));
    const Complex v = f * r.value;
    return {v, std::abs(f) * r.abs_error + 1e-14 * std::abs(v), Method::series};
}

inline EvalResult normalized_W(const WhittakerParams& p, double y, WRoute route = WRoute::automatic) {
    return whittaker_W(p, y, route);
}

/// Gamma(1/2 + nu - k) e^{-y/2} y^{nu+1/2} M(a,b,y)/Gamma(b); the regularised
/// series keeps nu in {-1/2, -1, -3/2, ...} well defined.
inline EvalResult normalized_M(const WhittakerParams& p, double y) {
    if (!(y > 0.0)) throw std::invalid_argument("normalized_M: y must be positive");
    const Complex a = 0.5 + p.nu - p.k, b = 1.0 + 2.0 * p.nu;
    if (is_nonpositive_integer(a, 1e-12))
        throw WhittakerError("normalized_M: k - nu lies in {1/2, 3/2, 5/2, ...}, a pole of Gamma(1/2 + nu - k)");
    EvalResult r = kummer_M_regularized(a, b, y);
    const Complex f = gamma_complex(a) * std::exp(-0.5 * y + 0.5 * b * std::log(y));
    const Complex v = f * r.value;
    return {v, std::abs(f) * r.abs_error + 1e-14 * std::abs(v), Method::series};
}

/// Leading large-y behaviour W ~ e^{-y/2} y^k; needs k - nu not in {1/2, 3/2, ...}
/// for the companion M asymptote Gamma(1+2nu)/Gamma(1/2+nu-k) e^{y/2} y^{-k}.
inline void check_asymptotic_conditions(const WhittakerParams& p) {
    if (is_nonpositive_integer(0.5 + p.nu - p.k, 1e-12))
        throw WhittakerError("asymptotics: k - nu lies in {1/2, 3/2, 5/2, ...}");
}

struct OdeResidual {
    double relative;  // |G'' + q G| / scale
    double h;
};

/// Residual of G'' + (-1/4 + k/y + (1/4 - nu^2)/y^2) G = 0 with a fourth-order
/// central difference for G''. The scale is the largest of the individual
/// terms, so the ratio is meaningful near zeros of G.
template <class F>
OdeResidual whittaker_ode_residual(F&& G, const WhittakerParams& p, double y, double h = 0.0) {
    if (h <= 0.0) h = 0.01 * std::min(y, 5.0);
    const Complex g0 = G(y), gp1 = G(y + h), gm1 = G(y - h), gp2 = G(y + 2 * h), gm2 = G(y - 2 * h);
    const Complex g2 = (-gp2 + 16.0 * gp1 - 30.0 * g0 + 16.0 * gm1 - gm2) / (12.0 * h * h);
    const Complex t1 = -0.25 * g0, t2 = p.k / y * g0, t3 = (0.25 - p.nu * p.nu) / (y * y) * g0;
    const double scale = std::max({std::abs(g2), std::abs(t1), std::abs(t2), std::abs(t3)});
    return {std::abs(g2 + t1 + t2 + t3) / scale, h};
}

} // namespace maasslab

#pragma once

// Weight-k hyperbolic Laplacian and Maass raising/lowering operators:
//   Delta_k = -y^2 (d_x^2 + d_y^2) + i k y d_x,
//   E^+-_k  = +-2iy d_x + 2y d_y +- k,
// by finite differences on arbitrary evaluators and as exact rules on the
// Whittaker basis terms Ft_{eps k/2, nu}(scale y) e^{i eps scale x / 2}.

#include "modgroup.hpp"
#include "whittaker.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace maasslab {

/// A smooth function on the upper half-plane with optional spectral tags.
struct SmoothEvaluator {
    Evaluator eval;
    std::optional<Complex> weight;
    std::optional<Complex> nu;

    SmoothEvaluator() = default;
    template <class F>
        requires std::is_invocable_r_v<Complex, F, const UHPoint&> &&
                 (!std::is_same_v<std::decay_t<F>, SmoothEvaluator>)
    SmoothEvaluator(F f) : eval(std::move(f)) {}
    SmoothEvaluator(Evaluator f, std::optional<Complex> k, std::optional<Complex> n)
        : eval(std::move(f)), weight(k), nu(n) {}

    Complex operator()(const UHPoint& z) const { return eval(z); }
};

enum class Direction { up, down };

inline const char* direction_name(Direction d) { return d == Direction::up ? "up" : "down"; }

/// Stencil orders: `first` in {2, 4} for d_x, d_y; `second` in {2, 4} for
/// d_x^2, d_y^2.
struct FdScheme {
    int first = 2;
    int second = 4;
};

inline constexpr FdScheme kAccurateScheme{4, 4};
inline constexpr FdScheme kSecondOrderScheme{2, 2};

namespace detail {

/// Step h*y, clamped so that stencils (reaching 2 steps) stay above y/2.
inline double fd_step(double h, double y) {
    if (!(h > 0.0)) throw std::invalid_argument("finite differences: h must be positive");
    return std::min(h * y, y / 4.0);
}

struct Partials {
    Complex u, ux, uy, uxx, uyy;
};

inline Partials partials(const SmoothEvaluator& u, const UHPoint& z, double h, FdScheme s, bool need_second) {
    const double x = z.x(), y = z.y(), d = fd_step(h, y);
    auto at = [&](double dx, double dy) { return u(UHPoint(x + dx, y + dy)); };
    Partials p{};
    p.u = u(z);
    const Complex xp = at(d, 0), xm = at(-d, 0), yp = at(0, d), ym = at(0, -d);
    Complex xp2 = 0, xm2 = 0, yp2 = 0, ym2 = 0;
    const bool wide = s.first == 4 || (need_second && s.second == 4);
    if (wide) {
        xp2 = at(2 * d, 0);
        xm2 = at(-2 * d, 0);
        yp2 = at(0, 2 * d);
        ym2 = at(0, -2 * d);
    }
    if (s.first == 4) {
        p.ux = (-xp2 + 8.0 * xp - 8.0 * xm + xm2) / (12.0 * d);
        p.uy = (-yp2 + 8.0 * yp - 8.0 * ym + ym2) / (12.0 * d);
    } else {
        p.ux = (xp - xm) / (2.0 * d);
        p.uy = (yp - ym) / (2.0 * d);
    }
    if (need_second) {
        if (s.second == 4) {
            p.uxx = (-xp2 + 16.0 * xp - 30.0 * p.u + 16.0 * xm - xm2) / (12.0 * d * d);
            p.uyy = (-yp2 + 16.0 * yp - 30.0 * p.u + 16.0 * ym - ym2) / (12.0 * d * d);
        } else {
            p.uxx = (xp - 2.0 * p.u + xm) / (d * d);
            p.uyy = (yp - 2.0 * p.u + ym) / (d * d);
        }
    }
    return p;
}

} // namespace detail

inline Complex laplacian_fd(const SmoothEvaluator& u, Complex k, const UHPoint& z, double h = 1e-3,
                            FdScheme s = FdScheme{}) {
    const auto p = detail::partials(u, z, h, s, true);
    const double y = z.y();
    return -y * y * (p.uxx + p.uyy) + I * k * y * p.ux;
}

inline Complex maass_fd(Direction dir, const SmoothEvaluator& u, Complex k, const UHPoint& z, double h = 1e-3,
                        FdScheme s = FdScheme{}) {
    const auto p = detail::partials(u, z, h, s, false);
    const double y = z.y();
    const double sg = dir == Direction::up ? 1.0 : -1.0;
    return sg * 2.0 * I * y * p.ux + 2.0 * y * p.uy + sg * k * p.u;
}

/// E^+-_k u as a new evaluator (finite differences at step h).
inline SmoothEvaluator maass_fd_evaluator(Direction dir, SmoothEvaluator u, Complex k, double h, FdScheme s = FdScheme{}) {
    const Complex shift = dir == Direction::up ? 2.0 : -2.0;
    Evaluator f = [dir, u, k, h, s](const UHPoint& z) { return maass_fd(dir, u, k, z, h, s); };
    return {std::move(f), k + shift, u.nu};
}

// ---------------------------------------------------------------- basis terms

enum class Family { Wtilde, Mtilde };

inline const char* family_name(Family f) { return f == Family::Wtilde ? "Wtilde" : "Mtilde"; }

/// z -> Ft_{sign k/2, nu}(scale y) e^{i sign scale x / 2}; with scale = 4 pi |n| / l
/// the phase is e^{2 pi i n x / l}.
struct BasisTerm {
    int sign = 1;
    double n = 1.0;
    Complex nu = 0.0;
    Complex k = 0.0;
    Family family = Family::Wtilde;
    double scale = 4.0 * pi;

    static BasisTerm make(Family f, double n, Complex k, Complex nu, double width = 1.0) {
        if (n == 0.0) throw std::invalid_argument("BasisTerm: n must be nonzero");
        if (!(width > 0.0)) throw std::invalid_argument("BasisTerm: width must be positive");
        return {n > 0 ? 1 : -1, n, nu, k, f, 4.0 * pi * std::abs(n) / width};
    }

    Complex lambda() const { return 0.25 - nu * nu; }

    Complex radial(double y) const {
        const WhittakerParams p{static_cast<double>(sign) * k / 2.0, nu};
        const double t = scale * y;
        return family == Family::Wtilde ? normalized_W(p, t).value : normalized_M(p, t).value;
    }

    Complex operator()(const UHPoint& z) const {
        return radial(z.y()) * std::exp(I * (0.5 * sign * scale * z.x()));
    }

    SmoothEvaluator evaluator() const {
        BasisTerm self = *this;
        return {Evaluator([self](const UHPoint& z) { return self(z); }), k, nu};
    }
};

/// Thrown when the parameter hypothesis k +- nu not in 1/2 + Z of the basis rules fails.
class BasisRuleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The table of factors E^+-_k t = factor * t', lambda = 1/4 - nu^2.
/// Wtilde: n>0 up -2, down k(k-2)/2 + 2 lambda; n<0 up k(k+2)/2 + 2 lambda, down -2.
/// Mtilde: n>0 up -(k(k+2)/2 + 2 lambda), down 2; n<0 up 2, down -(k(k-2)/2 + 2 lambda).
/// `mutation` swaps one constant for harness self-tests.
struct BasisRules {
    std::string mutation;

    static const std::vector<std::string>& mutations() {
        static const std::vector<std::string> m{"wtilde-up-sign"};
        return m;
    }

    explicit BasisRules(std::string mut = {}) : mutation(std::move(mut)) {
        if (!mutation.empty() && std::find(mutations().begin(), mutations().end(), mutation) == mutations().end())
            throw std::invalid_argument("BasisRules: unknown mutation '" + mutation + "'");
    }

    Complex factor(Family f, int sign, Direction d, Complex k, Complex lambda) const {
        const bool up = d == Direction::up;
        if (f == Family::Wtilde) {
            if (sign > 0) {
                if (up) return mutation == "wtilde-up-sign" ? Complex(2.0) : Complex(-2.0);
                return k * (k - 2.0) / 2.0 + 2.0 * lambda;
            }
            return up ? k * (k + 2.0) / 2.0 + 2.0 * lambda : Complex(-2.0);
        }
        if (sign > 0) return up ? -(k * (k + 2.0) / 2.0 + 2.0 * lambda) : Complex(2.0);
        return up ? Complex(2.0) : -(k * (k - 2.0) / 2.0 + 2.0 * lambda);
    }
};

namespace detail {

inline bool in_half_plus_z(Complex w) {
    if (std::abs(w.imag()) > 1e-12) return false;
    const double r = w.real() - 0.5;
    return std::abs(r - std::round(r)) <= 1e-12;
}

} // namespace detail

struct BasisImage {
    BasisTerm term;
    Complex factor;
};

inline BasisImage maass_on_basis(const BasisTerm& t, Direction d, const BasisRules& rules = BasisRules{}) {
    if (detail::in_half_plus_z(t.k + t.nu) || detail::in_half_plus_z(t.k - t.nu))
        throw BasisRuleError("maass_on_basis: hypothesis k +- nu not in 1/2 + Z violated");
    BasisTerm out = t;
    out.k = t.k + (d == Direction::up ? 2.0 : -2.0);
    const Complex f = rules.factor(t.family, t.sign, d, t.k, t.lambda());
    // weight shifts by +-2, spectral parameter is untouched
    if (out.nu != t.nu || std::abs(std::abs(out.k - t.k) - 2.0) > 1e-12 || out.scale != t.scale || out.sign != t.sign)
        throw std::logic_error("maass_on_basis: structural invariant broken");
    return {out, f};
}

// ---------------------------------------------------------------- verifiers

/// Max residuals of the two factorizations
///   Delta_k = -1/4 E^+_{k-2} E^-_k - k(k-2)/4 = -1/4 E^-_{k+2} E^+_k - k(k+2)/4.
struct FactorizationResidual {
    double via_lowering = 0.0;  // E^+_{k-2} E^-_k
    double via_raising = 0.0;   // E^-_{k+2} E^+_k
    double between = 0.0;       // the two right-hand sides against each other
};

inline FactorizationResidual verify_factorization(const SmoothEvaluator& u, Complex k, const std::vector<UHPoint>& sample,
                                                  double h = 1e-3, FdScheme s = FdScheme{}) {
    const SmoothEvaluator lower = maass_fd_evaluator(Direction::down, u, k, h, s);
    const SmoothEvaluator raise = maass_fd_evaluator(Direction::up, u, k, h, s);
    FactorizationResidual r;
    for (const auto& z : sample) {
        const Complex lap = laplacian_fd(u, k, z, h, s);
        const Complex uz = u(z);
        const Complex a = -0.25 * maass_fd(Direction::up, lower, k - 2.0, z, h, s) - k * (k - 2.0) / 4.0 * uz;
        const Complex b = -0.25 * maass_fd(Direction::down, raise, k + 2.0, z, h, s) - k * (k + 2.0) / 4.0 * uz;
        r.via_lowering = std::max(r.via_lowering, std::abs(lap - a));
        r.via_raising = std::max(r.via_raising, std::abs(lap - b));
        r.between = std::max(r.between, std::abs(a - b));
    }
    return r;
}

/// Max residuals of Delta_k(u|_k g) - (Delta_k u)|_k g and
/// E^+-_k(u|_k g) - (E^+-_k u)|_{k+-2} g.
struct CommutationResidual {
    double laplacian = 0.0;
    double up = 0.0;
    double down = 0.0;
};

inline CommutationResidual verify_slash_commutation(const SmoothEvaluator& u, Complex k, const GroupElement& g,
                                                    const std::vector<UHPoint>& sample, double h = 1e-3,
                                                    FdScheme s = FdScheme{}) {
    const SmoothEvaluator ug = slash(u.eval, k, g);
    CommutationResidual r;
    for (const auto& z : sample) {
        const UHPoint gz = apply_moebius(g, z);
        const double a = automorphy_arg(g, z);
        auto slashed = [&](Complex value, Complex weight) { return std::exp(-I * weight * a) * value; };
        r.laplacian = std::max(r.laplacian, std::abs(laplacian_fd(ug, k, z, h, s) - slashed(laplacian_fd(u, k, gz, h, s), k)));
        r.up = std::max(r.up, std::abs(maass_fd(Direction::up, ug, k, z, h, s) -
                                       slashed(maass_fd(Direction::up, u, k, gz, h, s), k + 2.0)));
        r.down = std::max(r.down, std::abs(maass_fd(Direction::down, ug, k, z, h, s) -
                                           slashed(maass_fd(Direction::down, u, k, gz, h, s), k - 2.0)));
    }
    return r;
}

/// residual(h) / residual(h/2); about 2^order for an O(h^order) residual.
template <class F>
double richardson_ratio(F&& residual_at, double h) {
    const double r1 = residual_at(h), r2 = residual_at(h / 2.0);
    if (r2 == 0.0) return r1 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return r1 / r2;
}

} // namespace maasslab

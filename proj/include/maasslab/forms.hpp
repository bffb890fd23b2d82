#pragma once

// Generalized Maass wave forms as evaluators: Fourier-Whittaker expansions at
// a cusp, lifts y^{k/2} F(z) of holomorphic q-series, and truncated
// Eisenstein / Poincare series sum_{Gamma_inf \ Gamma} v(g)^{-1} (F|_k g)(z)
// with explicit tail bounds.

#include "modgroup.hpp"
#include "multiplier.hpp"
#include "operators.hpp"
#include "subgroup.hpp"
#include "whittaker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace maasslab {

enum class Provenance { expansion, lift, eisenstein, poincare };

inline const char* provenance_name(Provenance p) {
    switch (p) {
    case Provenance::expansion: return "expansion";
    case Provenance::lift: return "lift";
    case Provenance::eisenstein: return "eisenstein";
    case Provenance::poincare: return "poincare";
    }
    return "?";
}

struct GeneralizedMaassForm {
    CongruenceSubgroup group;
    Complex k;
    MultiplierSystem multiplier;
    Complex nu;
    SmoothEvaluator evaluator;
    Provenance provenance;
    std::string note;

    Complex lambda() const { return 0.25 - nu * nu; }
    Complex operator()(const UHPoint& z) const { return evaluator(z); }
};

// ---------------------------------------------------------------- kappa

/// kappa in [0,1) with v(gamma_q) = e^{2 pi i kappa}.
inline double kappa_from_multiplier(const MultiplierSystem& v, const CuspData& q) {
    const Complex w = v(q.stabilizer);
    if (std::abs(std::abs(w) - 1.0) > 1e-12)
        throw std::domain_error("kappa_from_multiplier: |v(gamma_q)| = " + std::to_string(std::abs(w)) +
                                ", multiplier is not weakly parabolic at this cusp");
    double kappa = std::arg(w) / (2.0 * pi);
    if (kappa < 0.0) kappa += 1.0;
    if (kappa >= 1.0 - 1e-15) kappa = 0.0;
    return kappa;
}

// ---------------------------------------------------------------- expansions

/// u_q(x+iy) = sum_n A_n |n|^{-1/2} Wt_{sgn(n) k/2, nu}(4 pi |n| y / l) e(n x / l)
///           + sum_{2 pi |n| / l < M} B_n |n|^{-1/2} Mt_{sgn(n) k/2, nu}(4 pi |n| y / l) e(n x / l)
///           + C_+ y^{1/2+nu} + C_- y^{1/2-nu},   n = kappa (mod 1), n != 0.
struct FourierWhittakerExpansion {
    CuspData cusp;
    double kappa = 0.0;
    std::map<double, Complex> A;
    std::map<double, Complex> B;
    Complex C_plus = 0.0;
    Complex C_minus = 0.0;
    Complex nu = 0.0;
    Complex k = 0.0;
    double M = 0.0;

    explicit FourierWhittakerExpansion(CuspData q) : cusp(std::move(q)) {}

    double width() const { return static_cast<double>(cusp.width); }

    /// Throws std::invalid_argument when an invariant fails.
    void validate() const {
        if (!(kappa >= 0.0 && kappa < 1.0)) throw std::invalid_argument("expansion: kappa must lie in [0,1)");
        auto check_freq = [&](double n, const char* which) {
            if (n == 0.0) throw std::invalid_argument(std::string("expansion: ") + which + " has an entry at n = 0");
            const double r = n - kappa;
            if (std::abs(r - std::round(r)) > 1e-9)
                throw std::invalid_argument(std::string("expansion: ") + which + " frequency " + std::to_string(n) +
                                            " is not congruent to kappa mod 1");
        };
        for (const auto& [n, a] : A) check_freq(n, "A");
        for (const auto& [n, b] : B) {
            check_freq(n, "B");
            if (!(2.0 * pi * std::abs(n) / width() < M))
                throw std::invalid_argument("expansion: B frequency " + std::to_string(n) +
                                            " violates 2 pi |n| / l < M");
        }
        const bool integral = kappa == 0.0;
        if (!integral && (C_plus != 0.0 || C_minus != 0.0))
            throw std::invalid_argument("expansion: zero-mode coefficients must vanish when kappa is not an integer");
    }
};

struct ExpansionValue {
    Complex value;
    double error;
};

inline constexpr double kExpansionYMin = 0.3;

/// Default truncation: e^{-2 pi N y / l} < 1e-12.
inline long default_truncation(double y, double width) {
    return std::max(1L, static_cast<long>(std::ceil(12.0 * std::log(10.0) * width / (2.0 * pi * y))));
}

namespace detail {

inline Complex expansion_term(Family f, double n, Complex coeff, const FourierWhittakerExpansion& e, const UHPoint& z,
                              double& err) {
    const double l = e.width();
    const double t = 4.0 * pi * std::abs(n) * z.y() / l;
    const WhittakerParams p{(n > 0 ? 1.0 : -1.0) * e.k / 2.0, e.nu};
    EvalResult r{};
    try {
        r = f == Family::Wtilde ? normalized_W(p, t) : normalized_M(p, t);
    } catch (const std::exception& ex) {
        throw WhittakerError(std::string(f == Family::Wtilde ? "A" : "B") + " term n=" + std::to_string(n) + ": " +
                             ex.what());
    }
    const double w = std::pow(std::abs(n), -0.5);
    const Complex phase = std::exp(2.0 * pi * I * n * z.x() / l);
    err += std::abs(coeff) * w * r.abs_error;
    return coeff * w * r.value * phase;
}

} // namespace detail

inline ExpansionValue eval_expansion(const FourierWhittakerExpansion& e, const UHPoint& z, long n_trunc = 0,
                                     double y_min = kExpansionYMin) {
    if (z.y() < y_min)
        throw std::domain_error("eval_expansion: y = " + std::to_string(z.y()) + " below the cusp neighbourhood y_min = " +
                                std::to_string(y_min));
    if (n_trunc <= 0) n_trunc = default_truncation(z.y(), e.width());
    Complex sum = 0.0;
    double err = 0.0, tail = 0.0;
    for (const auto& [n, a] : e.A) {
        if (std::abs(n) > static_cast<double>(n_trunc)) {
            // omitted term, bounded by the leading decay e^{-t/2} t^{|Re k|/2}
            const double t = 4.0 * pi * std::abs(n) * z.y() / e.width();
            tail += 2.0 * std::abs(a) * std::pow(std::abs(n), -0.5) * std::exp(-t / 2 + std::abs(e.k.real()) / 2 * std::log(t));
            continue;
        }
        sum += detail::expansion_term(Family::Wtilde, n, a, e, z, err);
    }
    for (const auto& [n, b] : e.B) sum += detail::expansion_term(Family::Mtilde, n, b, e, z, err);
    const double ly = std::log(z.y());
    if (e.C_plus != 0.0) sum += e.C_plus * std::exp((0.5 + e.nu) * ly);
    if (e.C_minus != 0.0) sum += e.C_minus * std::exp((0.5 - e.nu) * ly);
    err += 4.0 * std::numeric_limits<double>::epsilon() * std::abs(sum);
    return {sum, err + tail};
}

/// The form z -> u_q(z) in the cusp coordinate; at the cusp infinity of
/// Gamma0(N) this is u itself.
inline GeneralizedMaassForm form_from_expansion(const FourierWhittakerExpansion& e, const CongruenceSubgroup& G,
                                                const MultiplierSystem& v, double y_min = 0.0) {
    e.validate();
    auto ex = std::make_shared<const FourierWhittakerExpansion>(e);
    Evaluator f = [ex, y_min](const UHPoint& z) { return eval_expansion(*ex, z, 0, y_min).value; };
    return {G, e.k, v, e.nu, SmoothEvaluator(std::move(f), e.k, e.nu), Provenance::expansion, "cusp coordinate"};
}

/// max |u_q(z + l) - e^{2 pi i kappa} u_q(z)| / (1 + |u_q(z)|).
inline double near_periodicity_residual(const FourierWhittakerExpansion& e, const std::vector<UHPoint>& sample) {
    const Complex w = std::exp(2.0 * pi * I * e.kappa);
    double worst = 0.0;
    for (const auto& z : sample) {
        const Complex a = eval_expansion(e, z).value;
        const Complex b = eval_expansion(e, UHPoint(z.x() + e.width(), z.y())).value;
        worst = std::max(worst, std::abs(b - w * a) / (1.0 + std::abs(a)));
    }
    return worst;
}

// ---------------------------------------------------------------- q-series and lifts

/// F(z) = sum_{n >= first} a_n e^{2 pi i n z / width}.
struct QExpansion {
    long first = 0;
    std::vector<Complex> coeffs;
    double width = 1.0;

    Complex operator()(Complex z) const {
        const Complex q = std::exp(2.0 * pi * I * z / width);
        Complex qn = std::pow(q, static_cast<double>(first));
        Complex s = 0.0;
        for (const Complex& a : coeffs) {
            s += a * qn;
            qn *= q;
        }
        return s;
    }

    /// sum |a_n|, a bound for |F| on H when first >= 0.
    double abs_sum() const {
        double s = 0.0;
        for (const Complex& a : coeffs) s += std::abs(a);
        return s;
    }
};

/// Ramanujan tau(1..terms) from q prod (1-q^n)^24, exact.
inline std::vector<Integer> ramanujan_tau(int terms) {
    std::vector<Integer> p(static_cast<std::size_t>(terms), 0);
    p[0] = 1;
    for (int n = 1; n < terms; ++n) {
        for (int rep = 0; rep < 24; ++rep) {
            for (int i = terms - 1; i >= n; --i) p[static_cast<std::size_t>(i)] -= p[static_cast<std::size_t>(i - n)];
        }
    }
    return p;  // p[i] = tau(i+1)
}

inline QExpansion delta_qexpansion(int terms = 80) {
    QExpansion q;
    q.first = 1;
    for (const Integer& t : ramanujan_tau(terms)) q.coeffs.emplace_back(to_double(t));
    return q;
}

inline QExpansion e4_qexpansion(int terms = 80) {
    QExpansion q;
    q.first = 0;
    q.coeffs.emplace_back(1.0);
    for (long n = 1; n < terms; ++n) {
        long sigma3 = 0;
        for (long d = 1; d <= n; ++d)
            if (n % d == 0) sigma3 += d * d * d;
        q.coeffs.emplace_back(240.0 * static_cast<double>(sigma3));
    }
    return q;
}

/// u(z) = Im(z)^{k/2} F(z), an eigenfunction of Delta_k with eigenvalue
/// (k/2)(1 - k/2); nu := (k-1)/2.
inline GeneralizedMaassForm lift_holomorphic(QExpansion F, Complex k, const MultiplierSystem& v) {
    auto Fp = std::make_shared<const QExpansion>(std::move(F));
    const Complex nu = (k - 1.0) / 2.0;
    Evaluator f = [Fp, k](const UHPoint& z) { return std::exp(k / 2.0 * std::log(z.y())) * (*Fp)(z.z()); };
    return {v.group(), k, v, nu, SmoothEvaluator(std::move(f), k, nu), Provenance::lift, "nu = (k-1)/2"};
}

inline Complex lift_eigenvalue(Complex k) { return k / 2.0 * (1.0 - k / 2.0); }

// ---------------------------------------------------------------- verifiers

struct TransformationSample {
    GroupElement gamma;
    UHPoint z;
};

/// max |e^{-ik arg(cz+d)} u(gamma z) - v(gamma) u(z)| / (1 + |u(z)|).
inline double verify_transformation(const GeneralizedMaassForm& u, const std::vector<TransformationSample>& samples) {
    double worst = 0.0;
    for (const auto& s : samples) {
        if (!u.group.contains(s.gamma)) throw std::invalid_argument("verify_transformation: element not in the group");
        const Complex uz = u(s.z);
        const Complex lhs = std::exp(-I * u.k * automorphy_arg(s.gamma, s.z)) * u(apply_moebius(s.gamma, s.z));
        worst = std::max(worst, std::abs(lhs - u.multiplier(s.gamma) * uz) / (1.0 + std::abs(uz)));
    }
    return worst;
}

/// max |Delta_k u - lambda u| over the sample.
inline double eigen_residual(const GeneralizedMaassForm& u, const std::vector<UHPoint>& sample, double h = 1e-3,
                             FdScheme s = kAccurateScheme) {
    double worst = 0.0;
    for (const auto& z : sample) worst = std::max(worst, std::abs(laplacian_fd(u.evaluator, u.k, z, h, s) - u.lambda() * u(z)));
    return worst;
}

/// |u(g_q z)| e^{-c y} on the grid must become non-increasing and stay so.
inline bool verify_growth(const GeneralizedMaassForm& u, const CuspData& q, double c, const std::vector<double>& y_grid,
                          double x0 = 0.1) {
    if (y_grid.size() < 2 || !std::is_sorted(y_grid.begin(), y_grid.end()) || y_grid.back() < 20.0)
        throw std::invalid_argument("verify_growth: y_grid must be increasing with maximum >= 20");
    std::vector<double> f;
    for (double y : y_grid) f.push_back(std::abs(u(apply_moebius(q.scaling, UHPoint(x0, y)))) * std::exp(-c * y));
    const double tol = 1e-12;
    std::size_t start = f.size();
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        if (f[i + 1] <= f[i] * (1.0 + tol)) {
            start = i;
            break;
        }
    }
    if (start == f.size()) return false;
    for (std::size_t i = start; i + 1 < f.size(); ++i)
        if (f[i + 1] > f[i] * (1.0 + tol)) return false;
    return true;
}

// ---------------------------------------------------------------- series

enum class Seed { power, lifted_holomorphic, mtilde_term };

inline const char* seed_name(Seed s) {
    switch (s) {
    case Seed::power: return "power";
    case Seed::lifted_holomorphic: return "lifted-holomorphic";
    case Seed::mtilde_term: return "mtilde-term";
    }
    return "?";
}

struct SeriesSpec {
    SeriesSpec(Seed sd, Complex nu_, Complex k_, MultiplierSystem v, double R_)
        : seed(sd), nu(nu_), k(k_), multiplier(std::move(v)), R(R_) {}

    Seed seed = Seed::power;
    Complex nu = 1.5;          // power and mtilde-term seeds
    Complex k = 0.0;           // weight (0 for the power seed)
    MultiplierSystem multiplier;
    double R = 100.0;          // cutoff c^2 + d^2 <= R^2
    std::optional<double> alpha;  // growth exponent of |v|; estimated when absent
    double K = 1.0;            // constant in |v(g)^{-1}| <= K mu(g)^alpha
    QExpansion h{0, {1.0}, 1.0};  // lifted-holomorphic seed, bounded on H
    double n = 1.0;            // mtilde-term frequency
};

/// sup over (c,d) of (c^2+d^2)/|cz+d|^2: the inverse of the smallest
/// eigenvalue of [[x^2+y^2, x], [x, 1]].
inline double gram_constant(const UHPoint& z) {
    const double x = z.x(), y = z.y();
    const double tr = x * x + y * y + 1.0, det = y * y;
    const double lmin = 0.5 * (tr - std::sqrt(tr * tr - 4.0 * det));
    return 1.0 / lmin;
}

/// Coset representatives of Gamma_inf \ Gamma0(N) with c^2 + d^2 <= R^2:
/// bottom rows (c,d) coprime, N | c, c > 0 or (c,d) = (0,1); top row reduced
/// so that a^2 + b^2 <= (c^2+d^2)/4 + 1/(c^2+d^2).
inline std::vector<GroupElement> cusp_infinity_cosets(const CongruenceSubgroup& G, double R) {
    if (G.kind() != SubgroupKind::Gamma0)
        throw std::invalid_argument("series: only Gamma0(N) groups are supported");
    const long N = G.level();
    const long r = static_cast<long>(std::floor(R));
    std::vector<GroupElement> out;
    out.emplace_back();
    for (long c = N; c <= r; c += N) {
        for (long d = -r; d <= r; ++d) {
            if (c * c + d * d > R * R || std::gcd(c, d) != 1) continue;
            // [[a, b], [c, d]] with ad - bc = 1 from x d + y c = 1
            auto [gg, x, y] = detail::ext_gcd(Integer(d), Integer(c));
            Integer a = x, b = -y;
            // reduce (a, b) by multiples of (c, d)
            const double t = (to_double(a) * c + to_double(b) * d) / static_cast<double>(c * c + d * d);
            const Integer m(static_cast<long long>(std::llround(t)));
            a -= m * c;
            b -= m * d;
            out.emplace_back(a, b, Integer(c), Integer(d));
        }
    }
    return out;
}

/// max over coset reps with mu >= 2 of |log|v(r)|| / log mu(r), doubled.
inline double estimate_alpha(const MultiplierSystem& v, double R = 20.0) {
    double a = 0.0;
    for (const auto& g : cusp_infinity_cosets(v.group(), R)) {
        const double mu = to_double(g.frobenius_norm2());
        if (mu < 2.0) continue;
        a = std::max(a, std::abs(std::log(std::abs(v(g)))) / std::log(mu));
    }
    return 2.0 * a;
}

struct SeriesValue {
    Complex value;
    double tail_bound;
    std::size_t terms;
    double rounding;  // floating-point allowance for the partial sum itself
};

namespace detail {

/// Upper bound for sum over lattice points with c >= 0 (half plane), r > R
/// of r^{-p}, p > 2, from N(t) <= pi/2 (t + 1/sqrt 2)^2 + t + 1.
inline double half_lattice_tail(double R, double p) {
    if (!(p > 2.0)) return std::numeric_limits<double>::infinity();
    const double s = 1.0 / std::sqrt(2.0);
    const double c2 = pi / 2.0, c1 = pi * s + 1.0, c0 = pi / 2.0 * s * s + 1.0;
    // p int_R^inf t^{-p-1} (c2 t^2 + c1 t + c0) dt
    return p * (c2 * std::pow(R, 2.0 - p) / (p - 2.0) + c1 * std::pow(R, 1.0 - p) / (p - 1.0) + c0 * std::pow(R, -p) / p);
}

inline constexpr double kMuConstant = 2.25;  // mu(g) <= 9/4 (c^2 + d^2) for the reduced reps

inline void check_stabilizer_trivial(const MultiplierSystem& v) {
    const Complex w = v(generators().T);
    if (std::abs(w - 1.0) > 1e-12)
        throw std::invalid_argument("series: multiplier must be trivial on the stabilizer of infinity (v(T) = 1)");
}

/// sup_{t <= t_max} |Mt(t)| / t^{1/2 + Re nu}, sampled.
inline double mtilde_power_constant(const WhittakerParams& p, double t_max) {
    double c = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double t = t_max * std::pow(1e-6, 1.0 - i / 200.0);
        c = std::max(c, std::abs(normalized_M(p, t).value) / std::pow(t, 0.5 + p.nu.real()));
    }
    return 1.5 * c;
}

} // namespace detail

inline double series_alpha(const SeriesSpec& s) { return s.alpha ? *s.alpha : estimate_alpha(s.multiplier); }

/// Partial sum over Gamma_inf \ Gamma of v(g)^{-1} (F|_k g)(z) with
/// c^2 + d^2 <= R^2. Terms are bounded by
///   K (9/4 r^2)^alpha * seedbound * C(z)^sigma r^{-2 sigma},
/// C(z) = gram_constant(z), which sums to the reported tail bound.
inline SeriesValue series_truncated(const SeriesSpec& s, const UHPoint& z) {
    const MultiplierSystem& v = s.multiplier;
    const double alpha = series_alpha(s);
    detail::check_stabilizer_trivial(v);
    const Complex k = s.seed == Seed::power ? Complex(0.0) : s.k;
    if (std::abs(v.weight() - k) > 1e-12) throw std::invalid_argument("series: multiplier weight differs from the seed weight");
    std::function<Complex(const UHPoint&)> F;
    double sigma = 0.0, seed_bound = 0.0;
    const double y = z.y();
    switch (s.seed) {
    case Seed::power: {
        if (!(s.nu.real() > std::max(alpha, 0.0)))
            throw std::invalid_argument("eisenstein: requires Re nu > max(alpha, 0)");
        const Complex e = 0.5 + s.nu;
        F = [e](const UHPoint& w) { return std::exp(e * std::log(w.y())); };
        sigma = e.real();
        seed_bound = std::pow(y, sigma);  // |Im(gz)^e| = y^sigma |cz+d|^{-2 sigma}
        break;
    }
    case Seed::lifted_holomorphic: {
        if (!(k.real() > 2.0 * alpha + 1.0)) throw std::invalid_argument("poincare: requires k > 2 alpha + 1");
        if (s.h.first < 0) throw std::invalid_argument("poincare: h must be bounded (no negative powers of q)");
        auto h = std::make_shared<const QExpansion>(s.h);
        F = [h, k](const UHPoint& w) { return std::exp(k / 2.0 * std::log(w.y())) * (*h)(w.z()); };
        sigma = k.real() / 2.0;
        seed_bound = std::pow(y, sigma) * s.h.abs_sum();
        break;
    }
    case Seed::mtilde_term: {
        if (!(s.nu.real() > std::max(alpha, 0.0)))
            throw std::invalid_argument("poincare (Mtilde seed): requires Re nu > max(alpha, 0)");
        const double n = s.n;
        const WhittakerParams p{k / 2.0, s.nu};
        F = [p, n](const UHPoint& w) {
            return normalized_M(p, 4.0 * pi * std::abs(n) * w.y()).value * std::exp(2.0 * pi * I * n * w.x());
        };
        sigma = 0.5 + s.nu.real();
        // Im(gz) <= C(z) y / (c^2 + d^2) <= C(z) y / R^2 in the tail
        const double t_max = 4.0 * pi * std::abs(n) * gram_constant(z) * y;
        seed_bound = detail::mtilde_power_constant(p, std::max(t_max, 1.0)) * std::pow(4.0 * pi * std::abs(n) * y, sigma);
        break;
    }
    }
    seed_bound *= std::exp(std::abs(k.imag()) * pi);  // |e^{-ik arg}| <= e^{pi |Im k|}
    Complex sum = 0.0;
    double abs_sum = 0.0;
    const auto reps = cusp_infinity_cosets(v.group(), s.R);
    for (const auto& g : reps) {
        const Complex term = std::exp(-I * k * automorphy_arg(g, z)) * F(apply_moebius(g, z)) / v(g);
        sum += term;
        abs_sum += std::abs(term);
    }
    const double p = 2.0 * sigma - 2.0 * alpha;
    const double C = gram_constant(z);
    const double tail = s.K * std::pow(detail::kMuConstant, alpha) * seed_bound * std::pow(C, sigma) *
                        detail::half_lattice_tail(s.R, p);
    const double rounding = 32.0 * std::numeric_limits<double>::epsilon() * abs_sum;
    return {sum, tail, reps.size(), rounding};
}

inline SeriesValue eisenstein_truncated(const SeriesSpec& s, const UHPoint& z) {
    if (s.seed != Seed::power) throw std::invalid_argument("eisenstein_truncated: seed must be power");
    return series_truncated(s, z);
}

inline SeriesValue poincare_truncated(const SeriesSpec& s, const UHPoint& z) {
    if (s.seed == Seed::power) throw std::invalid_argument("poincare_truncated: seed must be lifted-holomorphic or mtilde-term");
    return series_truncated(s, z);
}

/// The truncated series as a form; R fixed.
inline GeneralizedMaassForm series_form(const SeriesSpec& s) {
    auto sp = std::make_shared<const SeriesSpec>(s);
    Evaluator f = [sp](const UHPoint& z) { return series_truncated(*sp, z).value; };
    const bool eis = s.seed == Seed::power;
    const Complex k = eis ? Complex(0.0) : s.k;
    const Complex nu = s.seed == Seed::lifted_holomorphic ? (k - 1.0) / 2.0 : s.nu;
    return {s.multiplier.group(), k, s.multiplier, nu, SmoothEvaluator(std::move(f), k, nu),
            eis ? Provenance::eisenstein : Provenance::poincare, seed_name(s.seed)};
}

} // namespace maasslab

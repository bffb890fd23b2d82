#pragma once

// Verification suites behind `maasslab verify`. Each case draws its own
// random inputs from the configured seed, so the rows do not depend on the
// worker count or on which other suites run.

#include "report.hpp"

#include <maasslab/forms.hpp>
#include <maasslab/multiplier.hpp>
#include <maasslab/operators.hpp>
#include <maasslab/oracles.hpp>
#include <maasslab/sampling.hpp>
#include <maasslab/subgroup.hpp>
#include <maasslab/vvforms.hpp>
#include <maasslab/whittaker.hpp>

#include <algorithm>
#include <cstdio>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace maasslab::cli {

struct SuiteConfig {
    std::optional<long> level;
    SubgroupKind kind = SubgroupKind::Gamma0;
    std::optional<MultiplierSystem> multiplier;
    std::optional<Complex> nu;
    std::optional<Complex> k;
    std::optional<double> R;
    double h = 1e-3;
    std::optional<double> tol;  // replaces the tolerance of exact-identity rows
    unsigned seed = 42;
    std::string mutation;
    std::vector<std::string> operator_suites{"basis", "commutation", "factorization"};

    double agree(double fallback) const { return tol.value_or(fallback); }
    std::vector<long> levels() const { return level ? std::vector<long>{*level} : std::vector<long>{2, 4}; }
    std::mt19937_64 rng(unsigned offset) const { return sampling::rng(seed * 7919u + offset); }
};

inline std::string fmt(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
    return buf;
}

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

inline std::string two_digits(int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d", i);
    return buf;
}

inline double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// ---------------------------------------------------------------- whittaker

inline std::vector<Case> whittaker_cases(const SuiteConfig& cfg) {
    std::vector<Case> cases;
    auto rng = cfg.rng(1);
    for (int i = 0; i < 50; ++i) {
        WhittakerParams p;
        do {
            p = {{sampling::uniform(rng, -2, 2), sampling::uniform(rng, -2, 2)},
                 {sampling::uniform(rng, -2, 2), sampling::uniform(rng, -2, 2)}};
        } while (std::abs(p.k) > 3 || std::abs(p.nu) > 3);
        const double y = sampling::uniform(rng, 0.5, 40);
        const std::string in = "k=" + fmt(p.k) + ";nu=" + fmt(p.nu) + ";y=" + fmt(y);
        cases.push_back({"whittaker", "ode-Wt-" + two_digits(i), in, 1e-7, [p, y] {
                             return Measurement{whittaker_ode_residual([&](double t) { return normalized_W(p, t).value; }, p, y).relative, ""};
                         }});
        cases.push_back({"whittaker", "ode-Mt-" + two_digits(i), in, 1e-7, [p, y] {
                             return Measurement{whittaker_ode_residual([&](double t) { return normalized_M(p, t).value; }, p, y).relative, ""};
                         }});
    }
    if (cfg.k && cfg.nu) {
        const WhittakerParams p{*cfg.k, *cfg.nu};
        for (double y : {1.0, 5.0, 20.0}) {
            const std::string in = "k=" + fmt(p.k) + ";nu=" + fmt(p.nu) + ";y=" + fmt(y);
            cases.push_back({"whittaker", "ode-user-Wt-y" + fmt(y), in, 1e-7, [p, y] {
                                 return Measurement{whittaker_ode_residual([&](double t) { return normalized_W(p, t).value; }, p, y).relative, ""};
                             }});
        }
    }
    for (int i = 0; i < 20; ++i) {
        const WhittakerParams p{{sampling::uniform(rng, -2, 2), sampling::uniform(rng, -1, 1)},
                                {sampling::uniform(rng, -1.5, 1.5), sampling::uniform(rng, -1, 1)}};
        const double y = sampling::uniform(rng, 5, 15);
        cases.push_back({"whittaker", "route-agreement-" + two_digits(i), "k=" + fmt(p.k) + ";nu=" + fmt(p.nu) + ";y=" + fmt(y),
                         cfg.agree(1e-9), [p, y] {
                             const EvalResult a = whittaker_W(p, y, WRoute::integral), b = whittaker_W(p, y, WRoute::series);
                             return Measurement{rel(a.value, b.value), "integral vs series"};
                         }});
    }
    int j = 0;
    for (Complex nu : {Complex(0.25), Complex(1.0 / 3), Complex(1.0, 0.5)}) {
        cases.push_back({"whittaker", "bessel-bridge-" + two_digits(j++), "nu=" + fmt(nu) + ";y=1..20 (20 points)", cfg.agree(1e-10), [nu] {
                             double worst = 0.0;
                             for (int i = 0; i < 20; ++i) {
                                 const double y = 1.0 + i;
                                 worst = std::max(worst, rel(normalized_W({0.0, nu}, y).value,
                                                             std::sqrt(y / pi) * oracle::bessel_k(nu, y / 2)));
                             }
                             return Measurement{worst, "W_{0,nu}(y) = sqrt(y/pi) K_nu(y/2)"};
                         }});
    }
    j = 0;
    for (const WhittakerParams& p : {WhittakerParams{1.0, 1.0 / 3}, WhittakerParams{0.0, 1.0 / 3},
                                     WhittakerParams{{0.4, 0.3}, {0.7, -0.2}}, WhittakerParams{-1.2, 0.25}}) {
        // |W/asymptote - 1 - c1/y| against twice the second-order term
        const double y = 80.0;
        const Complex a = 0.5 + p.nu - p.k, c = 0.5 - p.nu - p.k;
        const double second = std::abs(a * (a + 1.0) * c * (c + 1.0)) / (2 * y * y);
        cases.push_back({"whittaker", "asymptotic-W-" + two_digits(j++), "k=" + fmt(p.k) + ";nu=" + fmt(p.nu) + ";y=80",
                         2.0 * second, [p, y] {
                             const Complex w = whittaker_W(p, y).value / std::exp(-y / 2 + p.k * std::log(y));
                             const Complex c1 = (p.nu * p.nu - (p.k - 0.5) * (p.k - 0.5)) / y;
                             return Measurement{std::abs(w - 1.0 - c1), "first-order corrected ratio"};
                         }});
    }
    return cases;
}

// ---------------------------------------------------------------- operators

inline BasisTerm random_basis_term(std::mt19937_64& g, Family f, int sign) {
    for (;;) {
        const Complex k(sampling::uniform(g, -3, 3), sampling::uniform(g, -0.5, 0.5));
        const Complex nu(sampling::uniform(g, 0, 1.2), sampling::uniform(g, -0.5, 0.5));
        if (detail::in_half_plus_z(k + nu) || detail::in_half_plus_z(k - nu)) continue;
        return BasisTerm::make(f, sign * (1.0 + std::floor(sampling::uniform(g, 0, 2))), k, nu);
    }
}

inline std::vector<UHPoint> sample_points(std::mt19937_64& g, int count, double ylo, double yhi) {
    std::vector<UHPoint> out;
    for (int i = 0; i < count; ++i) out.push_back(sampling::random_point(g, ylo, yhi));
    return out;
}

struct TestFunction {
    std::string name;
    SmoothEvaluator u;
    Complex k;
    double ylo, yhi;
};

inline std::vector<TestFunction> operator_test_functions() {
    const Complex s(0.5, 0.4);
    const BasisTerm t = BasisTerm::make(Family::Wtilde, 1, Complex(0.8, 0.1), Complex(0.35, 0.2));
    return {
        {"power", SmoothEvaluator([s](const UHPoint& z) { return std::exp(s * std::log(z.y())); }), 0.0, 0.5, 2.0},
        {"lifted-exp", SmoothEvaluator([](const UHPoint& z) { return z.y() * std::exp(2.0 * pi * I * z.z()); }), 2.0, 0.6, 1.5},
        {"wtilde-term", t.evaluator(), t.k, 0.3, 1.0},
    };
}

inline double max_abs_on(const SmoothEvaluator& u, const std::vector<UHPoint>& pts) {
    double m = 0.0;
    for (const auto& z : pts) m = std::max(m, std::abs(u(z)));
    return m;
}

inline std::vector<Case> operator_cases(const SuiteConfig& cfg) {
    std::vector<Case> cases;
    const double h = cfg.h;
    const BasisRules rules(cfg.mutation);
    auto wants = [&](const std::string& s) {
        return std::find(cfg.operator_suites.begin(), cfg.operator_suites.end(), s) != cfg.operator_suites.end();
    };
    if (wants("basis")) {
        unsigned offset = 100;
        for (Family f : {Family::Wtilde, Family::Mtilde})
            for (int sign : {1, -1})
                for (Direction d : {Direction::up, Direction::down}) {
                    const std::string id = std::string("basis-") + family_name(f) + (sign > 0 ? "-npos-" : "-nneg-") + direction_name(d);
                    const std::string in = "20 draws;h=" + fmt(h);
                    cases.push_back({"operators", id, in, 1e-6, [=, &cfg] {
                                         auto g = cfg.rng(offset);
                                         double worst = 0.0;
                                         for (int i = 0; i < 20; ++i) {
                                             const BasisTerm t = random_basis_term(g, f, sign);
                                             const UHPoint z(sampling::uniform(g, -0.5, 0.5), sampling::uniform(g, 0.2, 1.0));
                                             const BasisImage img = maass_on_basis(t, d, rules);
                                             const Complex exact = img.factor * img.term(z);
                                             const Complex fd = maass_fd(d, t.evaluator(), t.k, z, h, kAccurateScheme);
                                             worst = std::max(worst, std::abs(fd - exact) / (std::abs(exact) + std::abs(t(z))));
                                         }
                                         return Measurement{worst, "relative, FD vs factor * shifted term"};
                                     }});
                    // order check from the FD values alone: (D(h) - D(h/2)) / (D(h/2) - D(h/4))
                    cases.push_back({"operators", id + "-order", in, 0.5, [=, &cfg] {
                                         auto g = cfg.rng(offset);
                                         double worst = 0.0, last = 0.0;
                                         for (int i = 0; i < 20; ++i) {
                                             const BasisTerm t = random_basis_term(g, f, sign);
                                             const UHPoint z(sampling::uniform(g, -0.5, 0.5), sampling::uniform(g, 0.2, 1.0));
                                             auto D = [&](double hh) { return maass_fd(d, t.evaluator(), t.k, z, hh, kSecondOrderScheme); };
                                             const Complex d1 = D(h), d2 = D(h / 2), d4 = D(h / 4);
                                             last = std::abs(d1 - d2) / std::abs(d2 - d4);
                                             worst = std::max(worst, std::abs(last - 4.0));
                                         }
                                         return Measurement{worst, "|ratio - 4|, last ratio " + fmt(last)};
                                     }});
                    ++offset;
                }
    }
    const auto fns = operator_test_functions();
    if (wants("factorization")) {
        unsigned offset = 200;
        for (const auto& tf : fns) {
            const std::string in = tf.name + ";k=" + fmt(tf.k) + ";20 points;h=" + fmt(h);
            cases.push_back({"operators", "factorization-" + tf.name, in, 10.0 * h * h, [=, &cfg] {
                                 auto g = cfg.rng(offset);
                                 const auto pts = sample_points(g, 20, tf.ylo, tf.yhi);
                                 const auto r = verify_factorization(tf.u, tf.k, pts, h, kAccurateScheme);
                                 return Measurement{std::max(r.via_lowering, r.via_raising) / std::max(1.0, max_abs_on(tf.u, pts)),
                                                    "relative; tolerance 10 h^2"};
                             }});
            cases.push_back({"operators", "factorization-" + tf.name + "-order", in, 0.5, [=, &cfg] {
                                 auto g = cfg.rng(offset);
                                 const auto pts = sample_points(g, 20, tf.ylo, tf.yhi);
                                 auto res = [&](double hh) {
                                     const auto r = verify_factorization(tf.u, tf.k, pts, hh, kSecondOrderScheme);
                                     return std::max(r.via_lowering, r.via_raising);
                                 };
                                 const double ratio = richardson_ratio(res, h);
                                 return Measurement{std::abs(ratio - 4.0), "ratio " + fmt(ratio)};
                             }});
            ++offset;
        }
    }
    if (wants("commutation")) {
        const auto [S, T] = generators();
        unsigned offset = 300;
        for (const auto& tf : fns) {
            for (const auto& [gname, gamma] : {std::pair{std::string("S"), S}, std::pair{std::string("T"), T}}) {
                const std::string in = tf.name + ";k=" + fmt(tf.k) + ";g=" + gname + ";20 points;h=" + fmt(h);
                const std::string id = "commutation-" + tf.name + "-" + gname;
                cases.push_back({"operators", id, in, 10.0 * h * h, [=, &cfg] {
                                     auto g = cfg.rng(offset);
                                     const auto pts = sample_points(g, 20, tf.ylo, tf.yhi);
                                     const auto r = verify_slash_commutation(tf.u, tf.k, gamma, pts, h, kAccurateScheme);
                                     std::vector<UHPoint> images;
                                     for (const auto& z : pts) images.push_back(apply_moebius(gamma, z));
                                     const double scale = std::max({1.0, max_abs_on(tf.u, pts), max_abs_on(tf.u, images)});
                                     return Measurement{std::max({r.laplacian, r.up, r.down}) / scale, "relative; tolerance 10 h^2"};
                                 }});
                if (gname == "S") {
                    cases.push_back({"operators", id + "-order", in, 0.5, [=, &cfg] {
                                         auto g = cfg.rng(offset);
                                         const auto pts = sample_points(g, 20, tf.ylo, tf.yhi);
                                         auto res = [&](double hh) {
                                             const auto r = verify_slash_commutation(tf.u, tf.k, gamma, pts, hh, kSecondOrderScheme);
                                             return std::max({r.laplacian, r.up, r.down});
                                         };
                                         const double ratio = richardson_ratio(res, h);
                                         return Measurement{std::abs(ratio - 4.0), "ratio " + fmt(ratio)};
                                     }});
                }
                ++offset;
            }
        }
    }
    return cases;
}

// ---------------------------------------------------------------- multiplier

inline std::vector<MultiplierSystem> standard_multipliers(const CongruenceSubgroup& G) {
    std::vector<MultiplierSystem> out{trivial_multiplier(G), eta_multiplier(G)};
    const auto homs = Presentation(G).homomorphisms_to_z();
    if (!homs.empty()) out.push_back(build_exponential_multiplier(G, homs[0], Complex(0.3, 0.2)));
    return out;
}

inline Case consistency_case(const SuiteConfig& cfg, const MultiplierSystem& v, unsigned offset, const std::string& tag = "") {
    const CongruenceSubgroup G = v.group();
    return {"multiplier", "consistency-" + G.name() + "-" + tag + v.label(), "500 pairs;k=" + fmt(v.weight()), cfg.agree(1e-9),
            [v, G, offset, &cfg] {
                auto g = cfg.rng(offset);
                const CosetTable t = coset_reps(G);
                double worst = 0.0;
                for (int i = 0; i < 500; ++i) {
                    const GroupElement a = sampling::random_member(g, t, 10), b = sampling::random_member(g, t, 10);
                    const Complex lhs = v(a * b);
                    const Complex rhs = v(a) * v(b) * consistency_factor(a, b, v.weight()).value;
                    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
                }
                return Measurement{worst, "relative, v(gh) vs v(g) v(h) omega(g,h)"};
            }};
}

inline std::vector<Case> multiplier_cases(const SuiteConfig& cfg) {
    std::vector<Case> cases;
    unsigned offset = 400;
    for (long n : cfg.levels()) {
        const CongruenceSubgroup G(SubgroupKind::Gamma0, n);
        for (const auto& v : standard_multipliers(G)) cases.push_back(consistency_case(cfg, v, offset++));
    }
    if (cfg.multiplier) cases.push_back(consistency_case(cfg, *cfg.multiplier, offset++, "file-"));
    for (Complex k : {Complex(0.5), Complex(0.37, 0.21)}) {
        cases.push_back({"multiplier", "z-independence-k" + fmt(k), "500 pairs", 1e-12, [k, offset, &cfg] {
                             auto g = cfg.rng(offset);
                             double worst = 0.0;
                             for (int i = 0; i < 500; ++i) {
                                 const GroupElement a = sampling::random_element(g, 10), b = sampling::random_element(g, 10);
                                 worst = std::max(worst, std::abs(consistency_factor_at(a, b, k, UHPoint(0, 2)) -
                                                                  consistency_factor_at(a, b, k, UHPoint(1, 1))));
                                 worst = std::max(worst, consistency_factor(a, b, k).z_discrepancy);
                             }
                             return Measurement{worst, "omega at 2i vs 1+i"};
                         }});
        ++offset;
    }
    cases.push_back({"multiplier", "extension-eta-Gamma0(2)", "coset reps", 1e-10, [] {
                         const auto rep = check_unitary_extension(eta_multiplier(), CongruenceSubgroup::gamma0(2));
                         double worst = rep.unitary ? 0.0 : 1.0;
                         for (const auto& r : rep.rows) worst = std::max(worst, std::abs(r.modulus - 1.0));
                         return Measurement{worst, "max | |v(r)| - 1 |"};
                     }});
    cases.push_back({"multiplier", "extension-synthetic-growth", "|v(r)| = 2;n = 1..10", 1.0, [] {
                         const auto G = CongruenceSubgroup::gamma0(2);
                         const auto eta = eta_multiplier();
                         const GroupElement r = coset_reps(G).rep(1);
                         const auto rep = check_unitary_extension(eta.with_override(r, 2.0 * eta(r)), G);
                         if (rep.unitary) return Measurement{std::numeric_limits<double>::infinity(), "extension not flagged"};
                         double worst = 0.0;
                         for (const auto& row : rep.rows)
                             for (std::size_t n = 1; n <= row.power_moduli.size(); ++n)
                                 worst = std::max(worst, std::abs(std::log2(row.power_moduli[n - 1] / std::pow(2.0, n))));
                         return Measurement{worst, "max |log2(|v(r^n)| / 2^n)|"};
                     }});
    return cases;
}

// ---------------------------------------------------------------- forms

/// Samples (gamma, z) with gamma in the table's group and Im z, Im(gamma z) >= ymin.
inline std::vector<TransformationSample> member_samples(std::mt19937_64& g, const CosetTable& t, int count, double ylo,
                                                        double yhi, double ymin) {
    std::vector<TransformationSample> out;
    for (int attempts = 0; static_cast<int>(out.size()) < count; ++attempts) {
        if (attempts > 200000) throw std::runtime_error("member_samples: no samples above the height bound");
        const GroupElement gamma = sampling::random_member(g, t, 4);
        const UHPoint z(sampling::uniform(g, -0.5, 0.5), sampling::uniform(g, ylo, yhi));
        if (apply_moebius(gamma, z).y() >= ymin) out.push_back({gamma, z});
    }
    return out;
}

inline std::vector<Case> forms_cases(const SuiteConfig& cfg) {
    std::vector<Case> cases;
    const long level = cfg.level.value_or(1);
    const CongruenceSubgroup G(SubgroupKind::Gamma0, level);
    const double h = cfg.h;
    unsigned offset = 500;
    for (auto [name, k] : {std::pair{std::string("delta"), 12.0}, std::pair{std::string("e4"), 4.0}}) {
        auto F = [name] { return name == "delta" ? delta_qexpansion() : e4_qexpansion(); };
        cases.push_back({"forms", "lift-" + name + "-transformation", G.name() + ";k=" + fmt(k) + ";10 samples", cfg.agree(1e-9),
                         [=, &cfg] {
                             auto g = cfg.rng(offset);
                             const auto u = lift_holomorphic(F(), k, trivial_multiplier(G, k));
                             return Measurement{verify_transformation(u, member_samples(g, coset_reps(G), 10, 0.3, 0.8, 0.3)),
                                                "relative to 1 + |u|"};
                         }});
        cases.push_back({"forms", "lift-" + name + "-eigen", "k=" + fmt(k) + ";20 points;h=" + fmt(h), 1e-6, [=, &cfg] {
                             auto g = cfg.rng(offset + 1);
                             const auto u = lift_holomorphic(F(), k, trivial_multiplier(G, k));
                             return Measurement{eigen_residual(u, sample_points(g, 20, 0.5, 2.0), h), "lambda = (k/2)(1-k/2)"};
                         }});
        cases.push_back({"forms", "lift-" + name + "-lowering", "k=" + fmt(k) + ";20 points;h=" + fmt(h), 1e-6, [=, &cfg] {
                             auto g = cfg.rng(offset + 2);
                             const auto u = lift_holomorphic(F(), k, trivial_multiplier(G, k));
                             double worst = 0.0;
                             for (const auto& z : sample_points(g, 20, 0.5, 2.0))
                                 worst = std::max(worst, std::abs(maass_fd(Direction::down, u.evaluator, k, z, h, kAccurateScheme)));
                             return Measurement{worst, "E^-_k u = 0"};
                         }});
        offset += 3;
    }

    // Eisenstein series against the brute-force lattice sum
    const Complex nu = cfg.nu.value_or(1.5);
    const std::vector<double> radii = cfg.R ? std::vector<double>{*cfg.R} : std::vector<double>{50, 100, 200};
    const UHPoint z0(0.0, 1.0);
    auto reference = std::make_shared<std::optional<Complex>>();
    auto ref_mutex = std::make_shared<std::mutex>();
    auto ref = [=] {
        std::lock_guard lock(*ref_mutex);
        if (!*reference) *reference = oracle::eisenstein_lattice_sum(0.5 + nu, z0.z(), level, 2000);
        return **reference;
    };
    for (double R : radii) {
        const SeriesSpec s{Seed::power, nu, 0.0, trivial_multiplier(G), R};
        const SeriesValue v = eisenstein_truncated(s, z0);
        char id[32];
        std::snprintf(id, sizeof id, "eisenstein-R%04.0f", R);
        cases.push_back({"forms", id, G.name() + ";nu=" + fmt(nu) + ";z=i;reference R=2000",
                         v.tail_bound + 2.0 * v.rounding, [=] {
                             return Measurement{std::abs(v.value - ref()), "tolerance = tail bound + rounding; tail " +
                                                                               format_double(v.tail_bound)};
                         }});
    }
    if (radii.size() > 1) {
        const double predicted = 1.0 + 2.0 * nu.real() - 2.0;
        cases.push_back({"forms", "eisenstein-tail-exponent", "nu=" + fmt(nu) + ";predicted " + fmt(predicted), 0.2, [=] {
                             double worst = 0.0;
                             for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
                                 const SeriesSpec a{Seed::power, nu, 0.0, trivial_multiplier(G), radii[i]};
                                 const SeriesSpec b{Seed::power, nu, 0.0, trivial_multiplier(G), radii[i + 1]};
                                 const double slope = std::log(eisenstein_truncated(a, z0).tail_bound / eisenstein_truncated(b, z0).tail_bound) /
                                                      std::log(radii[i + 1] / radii[i]);
                                 worst = std::max(worst, std::abs(slope - predicted) / predicted);
                             }
                             return Measurement{worst, "relative deviation of the log-log slope"};
                         }});
    }

    // expansion machinery at the cusp at infinity of the full group
    const CongruenceSubgroup full = CongruenceSubgroup::full();
    const CuspData inf = cusps(full).front();
    for (int i = 0; i < 8; ++i) {
        cases.push_back({"forms", "expansion-eigen-" + two_digits(i), "single term;h=" + fmt(h), 1e-6, [=, &cfg] {
                             auto g = cfg.rng(600 + static_cast<unsigned>(i));
                             const Complex k(sampling::uniform(g, -2, 2), 0.0);
                             const Complex nu_t(sampling::uniform(g, 0, 1), sampling::uniform(g, -0.5, 0.5));
                             FourierWhittakerExpansion e(inf);
                             e.k = k;
                             e.nu = nu_t;
                             e.M = 100.0;
                             const double n = i % 2 ? 1.0 : -2.0;
                             (i < 4 ? e.A : e.B)[n] = 1.0;
                             const auto u = form_from_expansion(e, full, trivial_multiplier(full));
                             const auto pts = sample_points(g, 5, 0.5, 1.0);
                             return Measurement{eigen_residual(u, pts, h) / std::max(1.0, max_abs_on(u.evaluator, pts)),
                                                std::string(i < 4 ? "A" : "B") + " term n=" + fmt(n) + ";k=" + fmt(k) + ";nu=" + fmt(nu_t)};
                         }});
    }
    cases.push_back({"forms", "expansion-zero-mode-rejected", "kappa=0.25;C_plus=1", 0.0, [=] {
                         FourierWhittakerExpansion e(inf);
                         e.kappa = 0.25;
                         e.nu = 0.3;
                         e.C_plus = 1.0;
                         try {
                             e.validate();
                         } catch (const std::invalid_argument&) {
                             return Measurement{0.0, "rejected"};
                         }
                         return Measurement{1.0, "accepted"};
                     }});
    cases.push_back({"forms", "expansion-near-periodicity", "eta multiplier;k=1/2;10 points", cfg.agree(1e-8), [=, &cfg] {
                         auto g = cfg.rng(610);
                         const MultiplierSystem eta = eta_multiplier();
                         const double kappa = kappa_from_multiplier(eta, inf);
                         FourierWhittakerExpansion e(inf);
                         e.kappa = kappa;
                         e.k = 0.5;
                         e.nu = Complex(0.2, 0.4);
                         e.M = 20.0;
                         e.A = {{kappa, 1.0}, {kappa - 1, Complex(0.2, -0.1)}, {kappa + 1, 0.5}};
                         e.B = {{kappa, 0.05}, {kappa - 1, Complex(0.0, 0.02)}};
                         return Measurement{near_periodicity_residual(e, sample_points(g, 10, 0.5, 2.0)), "u(z + l) vs e(kappa) u(z)"};
                     }});
    return cases;
}

// ---------------------------------------------------------------- vvforms

inline std::vector<Case> vvforms_cases(const SuiteConfig& cfg) {
    std::vector<Case> cases;
    unsigned offset = 700;
    for (long n : cfg.levels()) {
        const CongruenceSubgroup G(SubgroupKind::Gamma0, n);
        std::vector<std::pair<std::string, MultiplierSystem>> systems{{"trivial", trivial_multiplier(G)}};
        const auto homs = Presentation(G).homomorphisms_to_z();
        if (!homs.empty()) systems.emplace_back("exponential", build_exponential_multiplier(G, homs[0], Complex(0.3, 0.2)));
        if (cfg.multiplier && cfg.multiplier->group() == G) systems.emplace_back("file-" + cfg.multiplier->label(), *cfg.multiplier);
        for (const auto& [label, v] : systems) {
            cases.push_back({"vvforms", "cocycle-" + G.name() + "-" + label, "200 triples;k=" + fmt(v.weight()), cfg.agree(1e-10),
                             [=, &cfg] {
                                 auto g = cfg.rng(offset);
                                 const auto w = induced_weight_matrix(v, v.weight(), G, coset_reps(G));
                                 double worst = 0.0;
                                 for (int i = 0; i < 200; ++i) {
                                     const auto a = sampling::random_element(g, 5), b = sampling::random_element(g, 5);
                                     worst = std::max(worst, cocycle_residual(w, a, b, sampling::random_point(g)));
                                 }
                                 return Measurement{worst, "w(gh,z) vs w(g,hz) w(h,z)"};
                             }});
            cases.push_back({"vvforms", "permutation-" + G.name() + "-" + label, "200 elements", 0.0, [=, &cfg] {
                                 auto g = cfg.rng(offset + 1);
                                 const CosetTable t = coset_reps(G);
                                 const auto w = induced_weight_matrix(v, v.weight(), G, t);
                                 int bad = 0;
                                 for (int i = 0; i < 200; ++i) {
                                     const auto h = sampling::random_element(g, 5);
                                     const Matrix m = w(h, sampling::random_point(g));
                                     const Matrix chi = right_regular_chi0(G, t, h);
                                     bool same = has_permutation_pattern(m);
                                     for (std::size_t a = 0; a < m.rows(); ++a)
                                         for (std::size_t b = 0; b < m.cols(); ++b) same = same && ((m(a, b) != 0.0) == (chi(a, b) != 0.0));
                                     bad += same ? 0 : 1;
                                 }
                                 return Measurement{static_cast<double>(bad), "count of matrices off the coset pattern"};
                             }});
            offset += 2;
        }
        cases.push_back({"vvforms", "chi0-" + G.name(), "trivial v;k=0;100 (h,z)", 0.0, [=, &cfg] {
                             auto g = cfg.rng(offset);
                             const CosetTable t = coset_reps(G);
                             const auto w = induced_weight_matrix(trivial_multiplier(G), 0.0, G, t);
                             double worst = 0.0;
                             for (int i = 0; i < 100; ++i) {
                                 const auto h = sampling::random_element(g, 6);
                                 worst = std::max(worst, max_abs_diff(w(h, sampling::random_point(g)), right_regular_chi0(G, t, h)));
                             }
                             return Measurement{worst, "exact"};
                         }});
        ++offset;
        for (auto [name, k] : {std::pair{std::string("delta"), 12.0}, std::pair{std::string("e4"), 4.0}}) {
            auto F = [name] { return name == "delta" ? delta_qexpansion() : e4_qexpansion(); };
            cases.push_back({"vvforms", "roundtrip-" + G.name() + "-" + name, "50 points", cfg.agree(1e-12), [=, &cfg] {
                                 auto g = cfg.rng(offset);
                                 const CosetTable t = coset_reps(G);
                                 const auto u = lift_holomorphic(F(), k, trivial_multiplier(G, k));
                                 const auto vu = lift_Pi(u, t);
                                 const auto back = project_pi(vu, G, t);
                                 const auto pts = sample_points(g, 50, 0.9, 2.0);
                                 double worst = 0.0;
                                 for (const auto& z : pts) worst = std::max(worst, std::abs(back(z) - u(z)));
                                 worst = std::max(worst, vv_distance(lift_Pi(back, t), vu, pts));
                                 return Measurement{worst, "pi(Pi u) = u and Pi(pi Pi u) = Pi u"};
                             }});
            cases.push_back({"vvforms", "eigen-" + G.name() + "-" + name, "all components;h=" + fmt(cfg.h), 1e-6, [=, &cfg] {
                                 auto g = cfg.rng(offset + 1);
                                 const CosetTable t = coset_reps(G);
                                 const auto vu = lift_Pi(lift_holomorphic(F(), k, trivial_multiplier(G, k)), t);
                                 return Measurement{vv_eigen_residual(vu, sample_points(g, 8, 0.9, 2.0), cfg.h), ""};
                             }});
            offset += 2;
        }
    }
    return cases;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"whittaker", "operators", "multiplier", "forms", "vvforms"};
    return names;
}

inline std::vector<Case> suite_cases(const std::string& suite, const SuiteConfig& cfg) {
    if (suite == "whittaker") return whittaker_cases(cfg);
    if (suite == "operators") return operator_cases(cfg);
    if (suite == "multiplier") return multiplier_cases(cfg);
    if (suite == "forms") return forms_cases(cfg);
    if (suite == "vvforms") return vvforms_cases(cfg);
    if (suite == "all") {
        std::vector<Case> all;
        for (const auto& s : suite_names()) {
            auto c = suite_cases(s, cfg);
            all.insert(all.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
        }
        return all;
    }
    throw ConfigError("unknown suite '" + suite + "'");
}

} // namespace maasslab::cli

#include <maasslab/forms.hpp>
#include <maasslab/oracles.hpp>

#include <maasslab/sampling.hpp>

#include <gtest/gtest.h>

using namespace maasslab;

namespace {

const CongruenceSubgroup kFull = CongruenceSubgroup::full();

CuspData infinity_cusp(const CongruenceSubgroup& G) { return cusps(G).front(); }

FourierWhittakerExpansion expansion_at_infinity(const CongruenceSubgroup& G, Complex k, Complex nu, double kappa = 0.0) {
    FourierWhittakerExpansion e(infinity_cusp(G));
    e.k = k;
    e.nu = nu;
    e.kappa = kappa;
    return e;
}

// gamma, z with Im z, Im(gamma z) >= 0.5, where the q-series are well conditioned
std::vector<TransformationSample> modular_samples(unsigned seed, int count, const std::vector<GroupElement>& pool = {}) {
    auto g = sampling::rng(seed);
    std::vector<TransformationSample> out;
    std::size_t i = 0;
    while (static_cast<int>(out.size()) < count) {
        const GroupElement gamma = pool.empty() ? sampling::random_element(g, 3) : pool[i++ % pool.size()];
        const UHPoint z(sampling::uniform(g, -0.5, 0.5), sampling::uniform(g, 0.9, 1.6));
        if (apply_moebius(gamma, z).y() < 0.5) continue;
        out.push_back({gamma, z});
    }
    return out;
}

std::vector<UHPoint> points(unsigned seed, int count, double ylo = 0.6, double yhi = 1.5) {
    auto g = sampling::rng(seed);
    std::vector<UHPoint> out;
    for (int i = 0; i < count; ++i) out.push_back(sampling::random_point(g, ylo, yhi));
    return out;
}

} // namespace

TEST(Kappa, Examples) {
    EXPECT_EQ(kappa_from_multiplier(trivial_multiplier(kFull), infinity_cusp(kFull)), 0.0);
    EXPECT_NEAR(kappa_from_multiplier(eta_multiplier(), infinity_cusp(kFull)), 1.0 / 24, 1e-12);
    const auto T = generators().T;
    const MultiplierSystem minus = trivial_multiplier(kFull).with_override(T, -1.0);
    EXPECT_NEAR(kappa_from_multiplier(minus, infinity_cusp(kFull)), 0.5, 1e-12);
}

TEST(Kappa, RejectsNonWeaklyParabolic) {
    const auto G = CongruenceSubgroup::gamma0(2);
    const auto basis = Presentation(G).homomorphisms_to_z();
    const MultiplierSystem v = build_exponential_multiplier(G, basis[0], Complex(0.3, 0.0));
    int rejected = 0;
    for (const auto& q : cusps(G)) {
        try {
            kappa_from_multiplier(v, q);
        } catch (const std::domain_error&) {
            ++rejected;
        }
    }
    EXPECT_GE(rejected, 1);
}

TEST(Expansion, ZeroModeOnly) {
    auto e = expansion_at_infinity(kFull, 0.0, 1.0 / 3);
    e.C_plus = 1.0;
    for (double y : {0.5, 1.0, 3.0}) {
        EXPECT_LT(std::abs(eval_expansion(e, UHPoint(0.2, y)).value - std::pow(y, 5.0 / 6)), 1e-14);
    }
}

TEST(Expansion, SingleTermMatchesBessel) {
    auto e = expansion_at_infinity(kFull, 0.0, 1.0 / 3);
    e.A[1.0] = 1.0;
    const Complex v = eval_expansion(e, UHPoint(0.0, 1.0)).value;
    const Complex expected = 2.0 * oracle::bessel_k(1.0 / 3, 2.0 * pi);
    EXPECT_LT(std::abs(v - expected) / std::abs(expected), 1e-10);
}

TEST(Expansion, ClassicalFourierBesselShape) {
    // A_n |n|^{-1/2} Wt_{0,nu}(4 pi |n| y) = 2 A_n sqrt(y) K_nu(2 pi |n| y)
    const Complex nu(0.0, 1.7);
    auto e = expansion_at_infinity(kFull, 0.0, nu);
    e.A = {{1.0, 1.0}, {-1.0, 0.3}, {2.0, Complex(-0.5, 0.2)}, {3.0, 0.1}};
    for (const auto& z : points(1, 10, 0.4, 2.0)) {
        Complex expected = 0.0;
        for (const auto& [n, a] : e.A)
            expected += 2.0 * a * std::sqrt(z.y()) * oracle::bessel_k(nu, 2.0 * pi * std::abs(n) * z.y()) *
                        std::exp(2.0 * pi * I * n * z.x());
        EXPECT_LT(std::abs(eval_expansion(e, z).value - expected), 1e-10 * (1 + std::abs(expected)));
    }
}

TEST(Expansion, Validation) {
    auto e = expansion_at_infinity(kFull, 0.5, 0.25, 1.0 / 3);
    e.A[1.0 / 3] = 1.0;
    EXPECT_NO_THROW(e.validate());
    e.C_plus = 1.0;
    EXPECT_THROW(e.validate(), std::invalid_argument);  // zero mode with kappa not integral
    e.C_plus = 0.0;
    e.A[0.5] = 1.0;
    EXPECT_THROW(e.validate(), std::invalid_argument);  // wrong residue class
    e.A.erase(0.5);
    e.M = 1.0;
    e.B[4.0 / 3] = 1.0;  // 2 pi 4/3 > 1
    EXPECT_THROW(e.validate(), std::invalid_argument);
    e.M = 10.0;
    EXPECT_NO_THROW(e.validate());
    EXPECT_THROW(eval_expansion(e, UHPoint(0.0, 0.1)), std::domain_error);
}

TEST(Expansion, TermAttributionOnFailure) {
    auto e = expansion_at_infinity(kFull, 1.0, 0.5);  // Mt_{1/2, 1/2}: k - nu = 0 fine; Mt_{-1/2,...} n<0
    e.M = 100.0;
    e.B[1.0] = 1.0;
    e.k = 2.0;  // Mt_{1, 1/2}: k - nu = 1/2, a pole
    try {
        eval_expansion(e, UHPoint(0.0, 1.0));
        FAIL();
    } catch (const WhittakerError& err) {
        EXPECT_NE(std::string(err.what()).find("B term n=1"), std::string::npos);
    }
}

TEST(Expansion, NearPeriodicityUnderTheStabilizer) {
    // eta multiplier, weight 1/2: v(T) = e^{2 pi i / 24}
    const MultiplierSystem eta = eta_multiplier();
    const double kappa = kappa_from_multiplier(eta, infinity_cusp(kFull));
    auto e = expansion_at_infinity(kFull, 0.5, Complex(0.2, 0.4), kappa);
    e.M = 20.0;
    e.A = {{kappa, 1.0}, {kappa - 1, Complex(0.2, -0.1)}, {kappa + 1, 0.5}};
    e.B = {{kappa, 0.05}, {kappa - 1, Complex(0.0, 0.02)}};
    const auto u = form_from_expansion(e, kFull, eta);
    std::vector<TransformationSample> samples;
    for (const auto& z : points(2, 10)) samples.push_back({generators().T, z});
    EXPECT_LE(verify_transformation(u, samples), 1e-8);
    EXPECT_LE(near_periodicity_residual(e, points(3, 10)), 1e-8);
}

TEST(Expansion, SingleTermsAreEigenfunctions) {
    auto g = sampling::rng(4);
    for (int i = 0; i < 8; ++i) {
        const Complex k(sampling::uniform(g, -2, 2), 0.0), nu(sampling::uniform(g, 0, 1), sampling::uniform(g, -0.5, 0.5));
        auto e = expansion_at_infinity(kFull, k, nu);
        e.M = 100.0;
        const double n = i % 2 ? 1.0 : -2.0;
        (i < 4 ? e.A : e.B)[n] = 1.0;
        const auto u = form_from_expansion(e, kFull, trivial_multiplier(kFull));
        const auto pts = points(5 + i, 5, 0.5, 1.0);
        double scale = 0;
        for (const auto& z : pts) scale = std::max(scale, std::abs(u(z)));
        EXPECT_LE(eigen_residual(u, pts), 1e-6 * std::max(1.0, scale)) << k << nu << n;
    }
}

TEST(QSeries, RamanujanTau) {
    const auto tau = ramanujan_tau(80);
    const long first[] = {1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920};
    for (int i = 0; i < 10; ++i) EXPECT_EQ(tau[static_cast<std::size_t>(i)], first[i]);
    auto t = [&](int n) { return tau[static_cast<std::size_t>(n - 1)]; };
    for (int m = 1; m <= 80; ++m)
        for (int n = 1; m * n <= 80; ++n)
            if (std::gcd(m, n) == 1) {
                EXPECT_EQ(t(m * n), t(m) * t(n)) << m << " " << n;
            }
    for (int p : {2, 3, 5, 7}) EXPECT_EQ(t(p * p), t(p) * t(p) - Integer(1) * boost::multiprecision::pow(Integer(p), 11));
}

TEST(Lift, Examples) {
    const auto delta = lift_holomorphic(delta_qexpansion(), 12.0, trivial_multiplier(kFull, 12.0));
    EXPECT_EQ(delta.lambda(), Complex(-30.0));
    const auto e4 = lift_holomorphic(e4_qexpansion(), 4.0, trivial_multiplier(kFull, 4.0));
    EXPECT_EQ(e4.lambda(), Complex(-2.0));
    const auto one = lift_holomorphic(QExpansion{0, {1.0}, 1.0}, 0.0, trivial_multiplier(kFull));
    EXPECT_EQ(one.lambda(), Complex(0.0));
    EXPECT_EQ(one(UHPoint(0.3, 0.7)), Complex(1.0));
    EXPECT_EQ(lift_eigenvalue(12.0), Complex(-30.0));
}

TEST(Lift, ModularityOfDeltaAndE4) {
    const auto [S, T] = generators();
    for (auto [F, k] : {std::pair{delta_qexpansion(), 12.0}, std::pair{e4_qexpansion(), 4.0}}) {
        const auto u = lift_holomorphic(F, k, trivial_multiplier(kFull, k));
        EXPECT_LE(verify_transformation(u, modular_samples(6, 10, {S, T, T * S})), 1e-9);
        EXPECT_LE(verify_transformation(u, modular_samples(7, 10)), 1e-9);
    }
    const auto one = lift_holomorphic(QExpansion{0, {1.0}, 1.0}, 0.0, trivial_multiplier(kFull));
    EXPECT_EQ(verify_transformation(one, modular_samples(8, 10)), 0.0);
}

TEST(Lift, KernelOfLoweringAndEigenvalue) {
    for (auto [F, k] : {std::pair{delta_qexpansion(), 12.0}, std::pair{e4_qexpansion(), 4.0}}) {
        const auto u = lift_holomorphic(F, k, trivial_multiplier(kFull, k));
        const auto pts = points(9, 20);
        double worst = 0;
        for (const auto& z : pts)
            worst = std::max(worst, std::abs(maass_fd(Direction::down, u.evaluator, k, z, 1e-3, kAccurateScheme)));
        EXPECT_LE(worst, 1e-6);
        EXPECT_LE(eigen_residual(u, pts), 1e-6);
    }
}

TEST(Growth, Examples) {
    const std::vector<double> grid{1, 2, 4, 8, 12, 16, 20, 25};
    const auto one = lift_holomorphic(QExpansion{0, {1.0}, 1.0}, 0.0, trivial_multiplier(kFull));
    EXPECT_TRUE(verify_growth(one, infinity_cusp(kFull), 0.0, grid));
    const auto delta = lift_holomorphic(delta_qexpansion(), 12.0, trivial_multiplier(kFull, 12.0));
    EXPECT_TRUE(verify_growth(delta, infinity_cusp(kFull), 0.0, grid));
    auto e = expansion_at_infinity(kFull, 0.0, 0.3);
    e.M = 7.0;
    e.B[1.0] = 1.0;
    const auto u = form_from_expansion(e, kFull, trivial_multiplier(kFull));
    EXPECT_FALSE(verify_growth(u, infinity_cusp(kFull), 2.0 * pi - 0.5, grid));
    EXPECT_TRUE(verify_growth(u, infinity_cusp(kFull), 2.0 * pi + 0.5, grid));
    EXPECT_THROW(verify_growth(u, infinity_cusp(kFull), 0.0, {1, 2, 3}), std::invalid_argument);
}

TEST(Series, GramConstant) {
    auto g = sampling::rng(10);
    for (int i = 0; i < 200; ++i) {
        const UHPoint z(sampling::uniform(g, -0.5, 0.5), sampling::uniform(g, 0.0, 3.0) + 1.0);
        if (std::norm(z.z()) < 1.0) continue;
        EXPECT_LE(gram_constant(z), 20.0 / 3);
        const UHPoint w = sampling::random_point(g, 0.05, 3.0);
        const double C = gram_constant(w);
        for (int j = 0; j < 20; ++j) {
            const double c = std::round(sampling::uniform(g, -30, 30)), d = std::round(sampling::uniform(g, -30, 30));
            if (c == 0 && d == 0) continue;
            EXPECT_LE(c * c + d * d, C * std::norm(c * w.z() + d) * (1 + 1e-12));
        }
    }
}

TEST(Series, CosetRepresentatives) {
    for (long N : {1, 2, 4}) {
        const auto G = CongruenceSubgroup::gamma0(N);
        const auto reps = cusp_infinity_cosets(G, 30);
        EXPECT_TRUE(reps.front().is_identity());
        for (const auto& g : reps) {
            EXPECT_TRUE(G.contains(g));
            const double r2 = to_double(g.c() * g.c() + g.d() * g.d());
            EXPECT_LE(to_double(g.frobenius_norm2()), 2.25 * r2 + 1e-9);
        }
    }
    EXPECT_THROW(cusp_infinity_cosets(CongruenceSubgroup::gamma1(4), 10), std::invalid_argument);
}

TEST(Eisenstein, IdentityCosetOnly) {
    SeriesSpec s{Seed::power, 1.5, 0.0, trivial_multiplier(kFull), 0.5};
    const UHPoint z(0.1, 1.3);
    EXPECT_LT(std::abs(eisenstein_truncated(s, z).value - std::pow(1.3, 2.0)), 1e-14);
}

TEST(Eisenstein, MatchesLatticeSumWithinTail) {
    const UHPoint z(0.0, 1.0);
    const Complex reference = oracle::eisenstein_lattice_sum(2.0, z.z(), 1, 2000);
    double prev_tail = 1e300;
    std::vector<double> tails, errors;
    for (double R : {50.0, 100.0, 200.0}) {
        SeriesSpec s{Seed::power, 1.5, 0.0, trivial_multiplier(kFull), R};
        const auto r = eisenstein_truncated(s, z);
        EXPECT_LE(std::abs(r.value - reference), r.tail_bound) << R;
        EXPECT_LT(r.tail_bound, prev_tail);
        prev_tail = r.tail_bound;
        tails.push_back(r.tail_bound);
        errors.push_back(std::abs(r.value - reference));
    }
    // tail ~ R^{-(1 + 2 Re nu - 2 alpha - 2)}
    const double predicted = 1.0 + 2 * 1.5 - 2.0;
    for (std::size_t i = 0; i + 1 < tails.size(); ++i) {
        EXPECT_NEAR(std::log2(tails[i] / tails[i + 1]), predicted, 0.2 * predicted);
        EXPECT_NEAR(std::log2(errors[i] / errors[i + 1]), predicted, 0.2 * predicted);
    }
}

TEST(Eisenstein, Gamma0LevelAgreesWithLatticeSum) {
    const UHPoint z(0.2, 0.9);
    const auto G = CongruenceSubgroup::gamma0(4);
    SeriesSpec s{Seed::power, Complex(1.2, 0.5), 0.0, trivial_multiplier(G), 80};
    const auto r = eisenstein_truncated(s, z);
    const Complex reference = oracle::eisenstein_lattice_sum(Complex(1.7, 0.5), z.z(), 4, 1500);
    EXPECT_LE(std::abs(r.value - reference), r.tail_bound);
}

TEST(Eisenstein, TransformationWithinTruncationBudget) {
    const auto [S, T] = generators();
    const GeneralizedMaassForm E = series_form(SeriesSpec{Seed::power, 1.5, 0.0, trivial_multiplier(kFull), 100});
    for (const auto& gamma : {S, T}) {
        for (const auto& z : points(11, 5, 0.8, 1.4)) {
            SeriesSpec s{Seed::power, 1.5, 0.0, trivial_multiplier(kFull), 100};
            const auto at_z = eisenstein_truncated(s, z);
            const auto at_gz = eisenstein_truncated(s, apply_moebius(gamma, z));
            EXPECT_LE(verify_transformation(E, {{gamma, z}}) * (1 + std::abs(at_z.value)), at_z.tail_bound + at_gz.tail_bound);
        }
    }
}

TEST(Eisenstein, RejectsDivergentParameters) {
    SeriesSpec s{Seed::power, -0.2, 0.0, trivial_multiplier(kFull), 10};
    EXPECT_THROW(eisenstein_truncated(s, UHPoint(0, 1)), std::invalid_argument);
    s.nu = 0.3;  // admissible but the lattice sum diverges: infinite tail bound
    EXPECT_TRUE(std::isinf(eisenstein_truncated(s, UHPoint(0, 1)).tail_bound));
    s.seed = Seed::lifted_holomorphic;
    EXPECT_THROW(eisenstein_truncated(s, UHPoint(0, 1)), std::invalid_argument);
}

TEST(Poincare, IdentityCosetOnly) {
    SeriesSpec s{Seed::lifted_holomorphic, 0.0, 12.0, trivial_multiplier(kFull, 12.0), 0.5};
    s.h = QExpansion{0, {1.0, 0.5}, 1.0};
    const UHPoint z(0.3, 1.1);
    EXPECT_LT(std::abs(poincare_truncated(s, z).value - std::pow(1.1, 6.0) * s.h(z.z())), 1e-13);
}

TEST(Poincare, WeightTwelveMatchesLatticeSum) {
    const UHPoint z(0.0, 1.0);
    SeriesSpec s{Seed::lifted_holomorphic, 0.0, 12.0, trivial_multiplier(kFull, 12.0), 100};
    const auto r = poincare_truncated(s, z);
    const Complex reference = oracle::poincare_lattice_sum(12, z.z(), 1, 1000);
    EXPECT_LE(std::abs(r.value - reference), r.tail_bound + 2 * r.rounding);
    EXPECT_LT(r.tail_bound, 1e-15);
}

TEST(Poincare, NonUnitaryMultiplier) {
    const auto G = CongruenceSubgroup::gamma0(4);
    const auto phi = homomorphism_vanishing_at(G, generators().T);
    const MultiplierSystem v = build_exponential_multiplier(G, phi, Complex(0.05, 0.0), 12.0);
    EXPECT_FALSE(is_weakly_parabolic(v) && std::abs(std::abs(v(GroupElement(1, 0, 4, 1))) - 1.0) > 1e-12);
    double prev = 1e300;
    for (double R : {50.0, 100.0, 200.0}) {
        SeriesSpec s{Seed::lifted_holomorphic, 0.0, 12.0, v, R};
        const auto r = poincare_truncated(s, UHPoint(0.1, 0.9));
        EXPECT_TRUE(std::isfinite(r.value.real()) && std::isfinite(r.value.imag()));
        EXPECT_TRUE(std::isfinite(r.tail_bound));
        EXPECT_LT(r.tail_bound, prev);
        prev = r.tail_bound;
    }
}

TEST(Poincare, MtildeSeed) {
    const auto G = CongruenceSubgroup::gamma0(2);
    double prev = 1e300;
    Complex prev_value = 0.0;
    for (double R : {20.0, 40.0, 80.0}) {
        SeriesSpec s{Seed::mtilde_term, Complex(1.4, 0.2), 0.0, trivial_multiplier(G), R};
        const auto r = poincare_truncated(s, UHPoint(0.1, 0.9));
        EXPECT_TRUE(std::isfinite(r.tail_bound));
        EXPECT_LT(r.tail_bound, prev);
        if (prev < 1e300) {
            EXPECT_LE(std::abs(r.value - prev_value), prev);
        }
        prev = r.tail_bound;
        prev_value = r.value;
    }
}

#include <maasslab/modgroup.hpp>

#include <maasslab/sampling.hpp>

#include <gtest/gtest.h>

using namespace maasslab;

namespace {

void expect_point(const UHPoint& z, double x, double y) {
    EXPECT_NEAR(z.x(), x, 1e-15);
    EXPECT_NEAR(z.y(), y, 1e-15);
}

} // namespace

TEST(GroupElement, RejectsWrongDeterminant) {
    EXPECT_THROW(GroupElement(1, 1, 1, 1), std::invalid_argument);
    EXPECT_NO_THROW(GroupElement(2, 1, 1, 1));
}

TEST(GroupElement, InverseAndPowers) {
    auto rng = sampling::rng();
    for (int i = 0; i < 200; ++i) {
        GroupElement g = sampling::random_element(rng, 12);
        EXPECT_TRUE((g * g.inverse()).is_identity());
        EXPECT_EQ(g.pow(3), g * g * g);
        EXPECT_EQ(g.pow(-2), g.inverse() * g.inverse());
    }
}

TEST(GroupElement, Associativity) {
    auto rng = sampling::rng(7);
    for (int i = 0; i < 100; ++i) {
        GroupElement a = sampling::random_element(rng, 6), b = sampling::random_element(rng, 6),
                     c = sampling::random_element(rng, 6);
        EXPECT_EQ((a * b) * c, a * (b * c));
    }
}

TEST(Generators, Relations) {
    const auto [S, T] = generators();
    const GroupElement minus = -GroupElement::identity();
    EXPECT_EQ(S * S, minus);
    EXPECT_EQ((S * T).pow(3), minus);
    EXPECT_TRUE(apply_moebius_boundary(T, BoundaryPoint::infinity()).is_infinity());
}

TEST(UHPoint, RejectsLowerHalfPlane) {
    EXPECT_THROW(UHPoint(0.0, 0.0), std::invalid_argument);
    EXPECT_THROW(UHPoint(1.0, -1.0), std::invalid_argument);
}

TEST(Moebius, Examples) {
    const auto [S, T] = generators();
    expect_point(apply_moebius(S, UHPoint(0, 1)), 0.0, 1.0);
    expect_point(apply_moebius(T, UHPoint(0.3, 2)), 1.3, 2.0);
    expect_point(apply_moebius(S, UHPoint(0, 2)), 0.0, 0.5);
}

TEST(Moebius, ImaginaryPartFormula) {
    auto rng = sampling::rng(1);
    for (int i = 0; i < 1000; ++i) {
        GroupElement g = sampling::random_element(rng, 8);
        UHPoint z = sampling::random_point(rng);
        UHPoint w = apply_moebius(g, z);
        const Complex zz = z.z();
        const Complex direct = (to_double(g.a()) * zz + to_double(g.b())) / (to_double(g.c()) * zz + to_double(g.d()));
        const double expect = z.y() / std::norm(cocycle_j(g, z));
        EXPECT_LE(std::abs(w.y() - expect) / expect, 1e-14);
        EXPECT_LE(std::abs(direct.imag() - expect) / expect, 1e-9);
    }
}

TEST(Boundary, Examples) {
    const auto [S, T] = generators();
    EXPECT_TRUE(apply_moebius_boundary(S, BoundaryPoint::rational(0, 1)).is_infinity());
    EXPECT_EQ(apply_moebius_boundary(S, BoundaryPoint::infinity()), BoundaryPoint::rational(0, 1));
    GroupElement g(2, 1, 3, 2);
    EXPECT_TRUE(apply_moebius_boundary(g, BoundaryPoint::rational(-2, 3)).is_infinity());
    EXPECT_EQ(apply_moebius_boundary(g, BoundaryPoint::infinity()), BoundaryPoint::rational(2, 3));
}

TEST(Boundary, LimitOfInteriorAction) {
    const auto [S, T] = generators();
    (void)T;
    // S(i eps) = i/eps runs off to infinity
    for (double eps : {1e-2, 1e-4, 1e-6}) EXPECT_GT(apply_moebius(S, UHPoint(0.0, eps)).y(), 0.9 / eps);
}

TEST(Boundary, Canonical) {
    BoundaryPoint q = BoundaryPoint::rational(4, -6);
    EXPECT_EQ(q.numerator(), -2);
    EXPECT_EQ(q.denominator(), 3);
    EXPECT_TRUE(BoundaryPoint::rational(5, 0).is_infinity());
    EXPECT_THROW(BoundaryPoint::rational(0, 0), std::invalid_argument);
}

TEST(Boundary, ActionComposes) {
    auto rng = sampling::rng(3);
    std::uniform_int_distribution<int> num(-40, 40), den(1, 30);
    for (int i = 0; i < 200; ++i) {
        GroupElement g = sampling::random_element(rng, 6), h = sampling::random_element(rng, 6);
        BoundaryPoint q = BoundaryPoint::rational(num(rng), den(rng));
        EXPECT_EQ(apply_moebius_boundary(g * h, q), apply_moebius_boundary(g, apply_moebius_boundary(h, q)));
    }
}

TEST(Argument, PrincipalBranch) {
    EXPECT_DOUBLE_EQ(arg_pv(Complex(-1.0, 0.0)), pi);
    EXPECT_DOUBLE_EQ(arg_pv(Complex(-1.0, -0.0)), pi);
    EXPECT_DOUBLE_EQ(arg_pv(Complex(0.0, 1.0)), pi / 2);
}

TEST(AutomorphyPhase, Examples) {
    const auto [S, T] = generators();
    const Complex k(0.7, 0.2);
    UHPoint z(0.3, 1.7);
    EXPECT_LT(std::abs(automorphy_phase(GroupElement::identity(), z, k) - 1.0), 1e-15);
    EXPECT_LT(std::abs(automorphy_phase(-GroupElement::identity(), z, k) - std::exp(I * k * pi)), 1e-15);
    EXPECT_LT(std::abs(automorphy_phase(S, UHPoint(0, 1), k) - std::exp(I * k * pi / 2.0)), 1e-15);
}

TEST(AutomorphyPhase, CocycleForIntegerWeight) {
    auto rng = sampling::rng(5);
    for (int i = 0; i < 500; ++i) {
        GroupElement g = sampling::random_element(rng, 6), h = sampling::random_element(rng, 6);
        UHPoint z = sampling::random_point(rng);
        for (int k : {1, 2, 3, 12}) {
            const Complex lhs = automorphy_phase(g * h, z, k);
            const Complex rhs = automorphy_phase(g, apply_moebius(h, z), k) * automorphy_phase(h, z, k);
            EXPECT_LT(std::abs(lhs - rhs), 1e-12);
        }
    }
}

TEST(Slash, Examples) {
    const auto [S, T] = generators();
    Evaluator f = [](const UHPoint& z) { return Complex(z.x() * z.y(), z.y()); };
    UHPoint z(0.2, 0.9);
    EXPECT_EQ(slash(f, 1.5, GroupElement::identity())(z), f(z));
    Evaluator one = [](const UHPoint&) { return Complex(1.0); };
    EXPECT_EQ(slash(one, 0.0, T * S)(z), Complex(1.0));
    Evaluator ys = [](const UHPoint& w) { return std::pow(Complex(w.y()), Complex(0.5, 1.3)); };
    EXPECT_LT(std::abs(slash(ys, 0.0, S)(UHPoint(0, 1)) - 1.0), 1e-15);
}

TEST(Slash, ActionUpToConstantFactor) {
    auto rng = sampling::rng(11);
    Evaluator f = [](const UHPoint& z) { return std::exp(I * z.z()) * std::pow(z.y(), 0.3) + 0.5; };
    const Complex k(0.37, 0.0);
    for (int i = 0; i < 100; ++i) {
        GroupElement g = sampling::random_element(rng, 5), h = sampling::random_element(rng, 5);
        auto two_step = slash(slash(f, k, g), k, h);
        auto one_step = slash(f, k, g * h);
        UHPoint z1(0.1, 1.2), z2(-0.35, 0.8);
        const Complex r1 = two_step(z1) / one_step(z1);
        const Complex r2 = two_step(z2) / one_step(z2);
        EXPECT_LT(std::abs(r1 - r2), 1e-12);
        EXPECT_LT(std::abs(std::abs(r1) - 1.0), 1e-12);
    }
}

TEST(Words, DecomposeRoundTrip) {
    auto rng = sampling::rng(13);
    for (int i = 0; i < 500; ++i) {
        GroupElement g = sampling::random_element(rng, 20);
        EXPECT_EQ(evaluate_word(decompose(g)), g);
    }
    EXPECT_EQ(evaluate_word(decompose(-GroupElement::identity())), -GroupElement::identity());
}

TEST(Words, Parse) {
    const auto [S, T] = generators();
    EXPECT_EQ(parse_word("S T^-1 S T^3"), S * T.inverse() * S * T.pow(3));
    EXPECT_EQ(parse_word("STS"), S * T * S);
    EXPECT_TRUE(parse_word("").is_identity());
    EXPECT_THROW(parse_word("S X"), std::invalid_argument);
    EXPECT_THROW(parse_word("T^"), std::invalid_argument);
}

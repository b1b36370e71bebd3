#include <loforge/group.hpp>

#include <gtest/gtest.h>

using namespace loforge;

namespace {

ElementSet codes(std::initializer_list<std::int64_t> xs) {
    ElementSet s;
    for (auto x : xs) s.push_back({x});
    return make_set(s);
}

}  // namespace

TEST(Pairing, CyclicExamples) {
    auto z4 = AbelianGroup::cyclic(4);
    EXPECT_EQ(pairing(z4, z4.element(3), z4.element(2)), FracValue::make(1, 2));
    auto z5 = AbelianGroup::cyclic(5);
    EXPECT_EQ(pairing(z5, z5.element(0), z5.element(3)), FracValue::make(0, 1));
}

TEST(Pairing, ProductExample) {
    auto g = AbelianGroup::product({2, 3});
    std::vector<std::int64_t> zeta{1, 1}, a{1, 2};
    // 1/2 + 2/3 = 7/6 = 1/6 mod 1
    EXPECT_EQ(pairing(g, g.element(zeta), g.element(a)), FracValue::make(1, 6));
}

TEST(Pairing, BilinearAndSymmetric) {
    auto g = AbelianGroup::product({4, 6});
    for (std::int64_t z = 0; z < g.order(); ++z)
        for (std::int64_t a = 0; a < g.order(); ++a) {
            EXPECT_EQ(g.pairing_residue({z}, {a}), g.pairing_residue({a}, {z}));
            for (std::int64_t b = 0; b < g.order(); b += 5) {
                auto lhs = g.pairing_residue({z}, g.add({a}, {b}));
                auto rhs = (g.pairing_residue({z}, {a}) + g.pairing_residue({z}, {b})) % g.exponent();
                EXPECT_EQ(lhs, rhs);
            }
        }
}

TEST(Pairing, OrthogonalityOfCharacters) {
    // sum_zeta e(zeta.a) = |G| [a = 0]
    auto g = AbelianGroup::product({3, 4});
    for (std::int64_t a = 0; a < g.order(); ++a) {
        double re = 0, im = 0;
        for (std::int64_t z = 0; z < g.order(); ++z) {
            double t = 2 * M_PI * pairing(g, {z}, {a}).to_double();
            re += std::cos(t);
            im += std::sin(t);
        }
        EXPECT_NEAR(re, a == 0 ? 12.0 : 0.0, 1e-9);
        EXPECT_NEAR(im, 0.0, 1e-9);
    }
}

TEST(Pairing, RejectsZ) {
    auto z = AbelianGroup::integers();
    EXPECT_THROW(pairing(z, {1}, {1}), unsupported_operation);
}

TEST(FracDist, Examples) {
    EXPECT_EQ(frac_dist(FracValue::make(7, 10)), FracValue::make(3, 10));
    EXPECT_EQ(frac_dist(FracValue::make(0, 1)), FracValue::make(0, 1));
    EXPECT_EQ(frac_dist(FracValue::make(1, 3)), FracValue::make(1, 3));
}

TEST(FracDist, SymmetricAndBounded) {
    for (std::int64_t d = 1; d < 30; ++d)
        for (std::int64_t n = 0; n < d; ++n) {
            auto x = frac_dist(FracValue::make(n, d));
            EXPECT_EQ(x, frac_dist(FracValue::make(-n, d)));
            EXPECT_LE(2 * x.num, x.den);
        }
}

TEST(Subgroups, Cyclic6) {
    auto g = AbelianGroup::cyclic(6);
    auto subs = enumerate_subgroups(g, 6);
    ASSERT_EQ(subs.size(), 4u);
    EXPECT_EQ(subs[0], codes({0}));
    EXPECT_EQ(subs[1], codes({0, 3}));
    EXPECT_EQ(subs[2], codes({0, 2, 4}));
    EXPECT_EQ(subs[3], codes({0, 1, 2, 3, 4, 5}));
}

TEST(Subgroups, PrimeCycleSizeCap) {
    auto g = AbelianGroup::cyclic(5);
    auto subs = enumerate_subgroups(g, 4);
    ASSERT_EQ(subs.size(), 1u);
    EXPECT_EQ(subs[0], codes({0}));
}

TEST(Subgroups, KleinFour) {
    auto g = AbelianGroup::product({2, 2});
    auto subs = enumerate_subgroups(g, 2);
    ASSERT_EQ(subs.size(), 4u);
    EXPECT_EQ(subs[0], codes({0}));
    for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(subs[i].size(), 2u);
}

TEST(Subgroups, CountsAndClosure) {
    // Z/4 x Z/2 has 8 subgroups; Z/12 one per divisor.
    auto g = AbelianGroup::product({4, 2});
    auto subs = enumerate_subgroups(g, g.order());
    EXPECT_EQ(subs.size(), 8u);
    for (auto& h : subs) {
        EXPECT_TRUE(is_subgroup(g, h));
        EXPECT_EQ(g.order() % static_cast<std::int64_t>(h.size()), 0);
    }
    EXPECT_EQ(enumerate_subgroups(AbelianGroup::cyclic(12), 12).size(), 6u);
}

TEST(Subgroups, Errors) {
    EXPECT_THROW(enumerate_subgroups(AbelianGroup::integers(), 5), unsupported_operation);
    EXPECT_THROW(enumerate_subgroups(AbelianGroup::cyclic(20'011), 5), resource_error);
}

TEST(ReducedElements, Examples) {
    EXPECT_EQ(reduced_elements(6), (std::vector<std::int64_t>{1, 5}));
    EXPECT_EQ(reduced_elements(5), (std::vector<std::int64_t>{1, 2, 3, 4}));
    EXPECT_EQ(reduced_elements(12), (std::vector<std::int64_t>{1, 5, 7, 11}));
    EXPECT_THROW(reduced_elements(0), std::invalid_argument);
}

TEST(Group, CodesFollowLexOrder) {
    auto g = AbelianGroup::product({3, 5});
    for (std::int64_t a = 0; a + 1 < g.order(); ++a) EXPECT_LT(g.coords({a}), g.coords({a + 1}));
    EXPECT_EQ(g.element(std::vector<std::int64_t>{-1, 7}), g.element(std::vector<std::int64_t>{2, 2}));
}

TEST(Group, ArithmeticAndOrder) {
    auto g = AbelianGroup::product({4, 6});
    for (std::int64_t a = 0; a < g.order(); ++a) {
        EXPECT_EQ(g.add({a}, g.neg({a})), g.zero());
        EXPECT_EQ(g.scale({a}, g.element_order({a})), g.zero());
        EXPECT_EQ(g.scale({a}, -3), g.neg(g.scale({a}, 3)));
    }
    EXPECT_EQ(g.exponent(), 12);
    EXPECT_THROW(AbelianGroup::integers().order(), unsupported_operation);
}

TEST(Rational, ParseAndExpBracket) {
    EXPECT_EQ(parse_rational("2/3"), Rational(2, 3));
    EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
    EXPECT_EQ(parse_rational("-4"), Rational(-4));
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("x"), std::invalid_argument);
    for (long k = -40; k <= 40; ++k) {
        EXPECT_LE(exp_lower(k), exp_upper(k));
        EXPECT_LE(exp_lower(k).get_d(), std::exp(static_cast<double>(k)) * (1 + 1e-12));
        EXPECT_GE(exp_upper(k).get_d(), std::exp(static_cast<double>(k)) * (1 - 1e-12));
    }
    EXPECT_TRUE(exp_scaled_geq(Rational(1), 1, Rational(2718, 1000)));
    EXPECT_FALSE(exp_scaled_geq(Rational(1), 1, Rational(2719, 1000)));
}

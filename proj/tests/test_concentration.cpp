#include <loforge/concentration.hpp>
#include <loforge/verify/oracles.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace loforge;

namespace {

const AbelianGroup Z = AbelianGroup::integers();

WeightMultiset ms(const AbelianGroup& g, std::initializer_list<std::int64_t> xs) {
    std::vector<GroupElement> v;
    for (auto x : xs) v.push_back(g.element(x));
    return WeightMultiset::from_elements(g, v);
}

Rational q(long a, long b = 1) { return make_rational(a, b); }

}  // namespace

TEST(Walk, SignedOnZ5) {
    // sums -3, -1, 1, 3 with weights 1, 3, 3, 1 (out of 8) land on 2, 4, 1, 3
    auto g = AbelianGroup::cyclic(5);
    auto d = walk_distribution(ms(g, {1, 1, 1}), StepLaw::signed_bernoulli());
    EXPECT_EQ(d.probability({0}), q(0));
    EXPECT_EQ(d.probability({1}), q(3, 8));
    EXPECT_EQ(d.probability({2}), q(1, 8));
    EXPECT_EQ(d.probability({3}), q(1, 8));
    EXPECT_EQ(d.probability({4}), q(3, 8));
}

TEST(Walk, ZerosGivePointMass) {
    auto g = AbelianGroup::cyclic(7);
    auto d = walk_distribution(ms(g, {0, 0, 0, 0}), StepLaw::lazy(q(1, 3)));
    EXPECT_EQ(d.probability({0}), q(1));
}

TEST(Walk, LazyOnZ2) {
    auto g = AbelianGroup::cyclic(2);
    auto d = walk_distribution(ms(g, {1}), StepLaw::lazy(q(1, 2)));
    EXPECT_EQ(d.probability({0}), q(1, 2));
    EXPECT_EQ(d.probability({1}), q(1, 2));
}

TEST(Walk, SignedStepsOverZReachNegatives) {
    auto d = walk_distribution(ms(Z, {1}), StepLaw::signed_bernoulli());
    EXPECT_EQ(d.probability({-1}), q(1, 2));
    EXPECT_EQ(d.probability({1}), q(1, 2));
}

TEST(Walk, StepLawsWithoutZeroOverZ) {
    auto d = walk_distribution(ms(Z, {3, 5}), StepLaw::bernoulli01(q(1)));
    EXPECT_EQ(d.probability({8}), q(1));
    EXPECT_EQ(d.probability({0}), q(0));
    auto s = walk_distribution(ms(Z, {2, 2}), StepLaw::signed_bernoulli());
    EXPECT_EQ(s.probability({-4}), q(1, 4));
    EXPECT_EQ(s.probability({0}), q(1, 2));
    EXPECT_EQ(oracle::to_map(s), oracle::walk(ms(Z, {2, 2}), StepLaw::signed_bernoulli()));
}

TEST(Walk, RejectsBadAlpha) {
    EXPECT_THROW(walk_distribution(ms(Z, {1}), StepLaw::lazy(q(3, 2))), std::invalid_argument);
}

TEST(Walk, LargeWeightsUseBigIntegers) {
    // denominators (2*7)^40 overflow 64 bits
    auto g = AbelianGroup::cyclic(9);
    std::vector<GroupElement> v(40, GroupElement{2});
    auto d = walk_distribution(WeightMultiset::from_elements(g, v), StepLaw::lazy(q(3, 7)));
    Rational total = 0;
    for (auto& p : d.mass) total += p;
    EXPECT_EQ(total, q(1));
}

TEST(WordWalk, Examples) {
    auto d = word_walk_distribution(ms(Z, {-1, 1}), 3);
    EXPECT_EQ(d.probability({3}), q(1, 8));
    EXPECT_EQ(d.probability({-3}), q(1, 8));
    EXPECT_EQ(d.probability({1}), q(3, 8));
    EXPECT_EQ(d.probability({-1}), q(3, 8));
    auto g = AbelianGroup::cyclic(3);
    auto e = word_walk_distribution(ms(g, {1, 2}), 2);
    EXPECT_EQ(e.probability({0}), q(1, 2));
    EXPECT_EQ(e.probability({1}), q(1, 4));
    EXPECT_EQ(e.probability({2}), q(1, 4));
}

TEST(WordWalk, DoubleMatchesExact) {
    auto g = AbelianGroup::product({3, 4});
    auto a = WeightMultiset::from_elements(g, {{1}, {11}, {5}, {7}});
    auto ex = word_walk_distribution(a, 9);
    auto fl = word_walk_distribution_double(a, 9);
    for (std::size_t i = 0; i < ex.mass.size(); ++i) EXPECT_NEAR(ex.mass[i].get_d(), fl.mass[i], 1e-12);
    auto zex = word_walk_distribution(ms(Z, {-2, 1, 3}), 5);
    auto zfl = word_walk_distribution_double(ms(Z, {-2, 1, 3}), 5);
    for (std::int64_t x = -10; x <= 15; ++x) EXPECT_NEAR(zex.probability({x}).get_d(), zfl.probability({x}), 1e-15);
}

TEST(Walk, DoubleMatchesExact) {
    auto g = AbelianGroup::cyclic(13);
    auto a = ms(g, {1, 3, 3, 9, 4});
    auto ex = walk_distribution(a, StepLaw::lazy(q(2, 5)));
    auto fl = walk_distribution_double(a, StepLaw::lazy(q(2, 5)));
    for (std::size_t i = 0; i < ex.mass.size(); ++i) EXPECT_NEAR(ex.mass[i].get_d(), fl.mass[i], 1e-12);
}

TEST(RhoClassical, Examples) {
    EXPECT_EQ(rho_classical(ms(Z, {1, 1})).value, q(1, 2));
    EXPECT_EQ(rho_classical(ms(Z, {1, 2})).value, q(1, 4));
    EXPECT_EQ(rho_classical(ms(Z, {0, 0})).value, q(1));
    EXPECT_THROW(rho_classical(ms(AbelianGroup::cyclic(5), {1})), std::invalid_argument);
}

TEST(RhoClassical, WitnessIsSmallestMaximiser) {
    auto r = rho_classical(ms(Z, {1, 1}));
    EXPECT_EQ(r.witness, GroupElement{0});
    auto s = rho_classical(ms(Z, {1, 2}));
    EXPECT_EQ(s.witness, GroupElement{-3});
}

TEST(RhoXi, Examples) {
    auto g5 = AbelianGroup::cyclic(5);
    auto r = rho_xi(ms(g5, {1, 1, 1}), q(1));
    EXPECT_EQ(r.value, q(1, 5));
    EXPECT_EQ(r.witness, GroupElement{0});
    EXPECT_EQ(rho_xi(ms(g5, {0, 0}), q(1, 2)).value, q(4, 5));
    EXPECT_EQ(rho_xi(ms(AbelianGroup::cyclic(2), {1}), q(1, 2)).value, q(0));
    EXPECT_THROW(rho_xi(ms(Z, {1}), q(1, 2)), std::invalid_argument);
}

TEST(RhoStar, Examples) {
    EXPECT_EQ(rho_star_m(ms(Z, {1, 1, 2}), 2).value, q(2, 3));
    EXPECT_EQ(rho_star_m(ms(Z, {1, 2, 3}), 2).value, q(1, 3));
    EXPECT_EQ(rho_star_m(ms(Z, {4, -1, 7}), 3).value, q(1));
    EXPECT_THROW(rho_star_m(ms(Z, {1}), 2), std::invalid_argument);
}

TEST(RhoStar, TranslationInvariant) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
        std::vector<GroupElement> v, w;
        std::int64_t shift = static_cast<std::int64_t>(rng() % 50);
        for (int i = 0; i < 7; ++i) {
            std::int64_t x = static_cast<std::int64_t>(rng() % 9) - 4;
            v.push_back({x});
            w.push_back({x + shift});
        }
        EXPECT_EQ(rho_star_m(WeightMultiset::from_elements(Z, v), 3).value,
                  rho_star_m(WeightMultiset::from_elements(Z, w), 3).value);
    }
}

TEST(RhoM, Examples) {
    EXPECT_EQ(rho_m(ms(Z, {-1, 1}), 3).value, q(3, 8));
    EXPECT_EQ(rho_m(ms(AbelianGroup::cyclic(2), {1, 1}), 1).value, q(1, 2));
    EXPECT_EQ(rho_m(ms(Z, {-1, 1}), 1).value, q(1, 2));
    EXPECT_THROW(rho_m(ms(Z, {1, 2}), 2), std::invalid_argument);
}

TEST(BinomialMass, Examples) {
    EXPECT_EQ(binomial_point_mass(4, q(1, 2), 2), q(6, 16));
    EXPECT_EQ(binomial_point_mass(3, q(2, 3), 2), q(4, 9));
    EXPECT_EQ(binomial_point_mass(5, q(1), 5), q(1));
}

TEST(Concentration, AgreesWithBruteForce) {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 80; ++t) {
        std::int64_t order = 2 + static_cast<std::int64_t>(rng() % 15);
        auto g = AbelianGroup::cyclic(order);
        std::vector<GroupElement> v;
        int n = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) v.push_back({static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(order))});
        auto a = WeightMultiset::from_elements(g, v);
        Rational alpha(1 + static_cast<long>(rng() % 4), 5);
        EXPECT_EQ(oracle::to_map(walk_distribution(a, StepLaw::lazy(alpha))), oracle::walk(a, StepLaw::lazy(alpha)));
        EXPECT_EQ(rho_xi(a, alpha).value, oracle::rho_xi(a, alpha));
        std::int64_t m = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n + 1));
        EXPECT_EQ(rho_star_m(a, m).value, oracle::rho_star_m(a, m));
    }
}

TEST(Concentration, MonotoneUnderAppendingSignedSteps) {
    // adding an independent step can only spread mass: rho(A + {b}) <= rho(A)
    std::mt19937_64 rng(7);
    for (int t = 0; t < 60; ++t) {
        std::vector<GroupElement> v;
        for (int i = 0; i < 6; ++i) v.push_back({static_cast<std::int64_t>(rng() % 11) - 5});
        auto before = rho_classical(WeightMultiset::from_elements(Z, v)).value;
        v.push_back({static_cast<std::int64_t>(rng() % 11) - 5});
        EXPECT_LE(rho_classical(WeightMultiset::from_elements(Z, v)).value, before);
    }
}

#include <loforge/progression.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace loforge;

namespace {

ElementSet ints(std::initializer_list<std::int64_t> xs) {
    ElementSet s;
    for (auto x : xs) s.push_back({x});
    return make_set(s);
}

ElementSet range(std::int64_t lo, std::int64_t hi, std::int64_t step = 1) {
    ElementSet s;
    for (auto x = lo; x <= hi; x += step) s.push_back({x});
    return s;
}

CosetProgression sym(std::vector<std::int64_t> gens, std::vector<std::int64_t> bounds, const AbelianGroup& g,
                     ElementSet h = {}) {
    std::vector<GroupElement> ge;
    for (auto x : gens) ge.push_back(g.element(x));
    if (h.empty()) h = {g.zero()};
    return CosetProgression{h, Gap::symmetric_box(ge, bounds)};
}

const AbelianGroup Z = AbelianGroup::integers();

}  // namespace

TEST(Elements, IntegerRankTwo) {
    auto p = sym({2, 3}, {1, 1}, Z);
    EXPECT_EQ(elements(Z, p), ints({-5, -3, -2, -1, 0, 1, 2, 3, 5}));
}

TEST(Elements, RankZeroIsBase) {
    auto p = CosetProgression::from_gap(Z, Gap::point({7}));
    EXPECT_EQ(elements(Z, p), ints({7}));
}

TEST(Elements, CosetProgressionFillsZ6) {
    auto g = AbelianGroup::cyclic(6);
    auto p = sym({2}, {1}, g, ints({0, 3}));
    EXPECT_EQ(elements(g, p), range(0, 5));
}

TEST(Elements, Errors) {
    auto g = AbelianGroup::cyclic(6);
    EXPECT_THROW(elements(g, sym({2}, {1}, g, ints({0, 2}))), std::invalid_argument);
    EXPECT_THROW(elements(Z, sym({1}, {1'000'000'000}, Z)), resource_error);
    CosetProgression bad{ints({0}), Gap{{0}, {{1}}, {3}, {1}}};
    EXPECT_THROW(elements(Z, bad), std::invalid_argument);
}

TEST(Proper, Examples) {
    EXPECT_TRUE(is_proper(Z, sym({2, 3}, {1, 1}, Z)));
    // (1,2) with N = (1,1) has 9 coefficient vectors but 7 distinct sums
    EXPECT_FALSE(is_proper(Z, sym({1, 2}, {1, 1}, Z)));
    EXPECT_EQ(elements(Z, sym({1, 2}, {1, 1}, Z)).size(), 7u);
    EXPECT_TRUE(is_proper(Z, CosetProgression::from_gap(Z, Gap::point({0}))));
}

TEST(Proper, CardinalityCharacterisation) {
    // proper iff |H+P| = |H| * volume
    auto g = AbelianGroup::product({6, 4});
    std::mt19937_64 rng(3);
    auto subs = enumerate_subgroups(g, g.order());
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<std::int64_t> pick(0, g.order() - 1), nb(0, 2);
        const auto& h = subs[static_cast<std::size_t>(rng() % subs.size())];
        CosetProgression p{h, Gap::symmetric_box({{pick(rng)}, {pick(rng)}}, {nb(rng), nb(rng)})};
        EXPECT_EQ(is_proper(g, p), elements(g, p).size() == p.volume());
    }
}

TEST(Dilate, Examples) {
    EXPECT_EQ(elements(Z, dilate(Z, sym({3}, {2}, Z), 2)), range(-12, 12, 3));
    EXPECT_EQ(elements(Z, dilate(Z, sym({1}, {1}, Z), 3)), range(-3, 3));
    EXPECT_THROW(dilate(Z, sym({1}, {1}, Z), 0), std::invalid_argument);
}

TEST(Dilate, EqualsIteratedSumset) {
    auto g = AbelianGroup::cyclic(29);
    auto p = sym({3, 7}, {1, 2}, g);
    auto base = elements(g, p);
    for (std::int64_t t = 1; t <= 3; ++t) EXPECT_EQ(elements(g, dilate(g, p, t)), iterated_sumset(g, base, t));
}

TEST(TProper, Examples) {
    EXPECT_TRUE(is_t_proper(Z, sym({10}, {1}, Z), 2));
    EXPECT_TRUE(is_t_proper(Z, sym({1}, {2}, Z), 2));
    auto g = AbelianGroup::cyclic(6);
    EXPECT_FALSE(is_t_proper(g, sym({2}, {1}, g), 2));
}

TEST(Sumsets, Examples) {
    EXPECT_EQ(minkowski_sum(Z, ints({0, 1}), ints({0, 1})), ints({0, 1, 2}));
    EXPECT_EQ(minkowski_sum(Z, ints({1, 3}), ints({10, 20})), ints({11, 13, 21, 23}));
    EXPECT_EQ(iterated_sumset(Z, ints({0, 1}), 3), range(0, 3));
    EXPECT_EQ(iterated_sumset(Z, ints({0, 2, 4, 6}), 2), range(0, 12, 2));
    EXPECT_EQ(iterated_sumset(Z, ints({5}), 4), ints({20}));
    auto g = AbelianGroup::cyclic(4);
    EXPECT_THROW(minkowski_sum(g, ints({0}), ints({9})), std::invalid_argument);
}

TEST(Sumsets, SizeBounds) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<GroupElement> x, y;
        for (int i = 0; i < 5; ++i) x.push_back({static_cast<std::int64_t>(rng() % 40)});
        for (int i = 0; i < 4; ++i) y.push_back({static_cast<std::int64_t>(rng() % 40)});
        auto xs = make_set(x), ys = make_set(y);
        auto s = minkowski_sum(Z, xs, ys);
        EXPECT_LE(s.size(), xs.size() * ys.size());
        // over Z, |X+Y| >= |X| + |Y| - 1
        EXPECT_GE(s.size() + 1, xs.size() + ys.size());
    }
}

TEST(Divide, Examples) {
    auto out = divide_progression(Z, sym({1}, {4}, Z), 2, ints({0, 1, 2}));
    EXPECT_EQ(out.gap.upper, (std::vector<std::int64_t>{4}));
    out = divide_progression(Z, sym({1}, {8}, Z), 8, ints({0, 1}));
    EXPECT_EQ(out.gap.upper, (std::vector<std::int64_t>{2}));
    out = divide_progression(Z, sym({1, 100}, {4, 4}, Z), 4, ints({0, 1, 100}));
    EXPECT_EQ(out.gap.upper, (std::vector<std::int64_t>{2, 2}));
}

TEST(Divide, DropsVanishingDirections) {
    auto out = divide_progression(Z, sym({1, 1000}, {6, 1}, Z), 4, ints({0, 1}));
    EXPECT_EQ(out.rank(), 1u);
    EXPECT_EQ(out.gap.upper, (std::vector<std::int64_t>{3}));
}

TEST(Divide, Errors) {
    auto g = AbelianGroup::cyclic(6);
    try {
        divide_progression(g, sym({2}, {1}, g), 2, ints({0}));
        FAIL();
    } catch (const divide_error& e) {
        EXPECT_EQ(e.reason(), divide_error::Reason::not_two_proper);
    }
    try {
        divide_progression(Z, sym({1}, {4}, Z), 2, ints({1}));
        FAIL();
    } catch (const divide_error& e) {
        EXPECT_EQ(e.reason(), divide_error::Reason::zero_missing);
    }
    try {
        divide_progression(Z, sym({1}, {4}, Z), 4, ints({0, 2}));
        FAIL();
    } catch (const divide_error& e) {
        EXPECT_EQ(e.reason(), divide_error::Reason::containment_failed);
    }
}

TEST(Divide, ContainsXAndSizeBound) {
    // Random symmetric X inside a 2-proper box: the output contains X and has at most
    // (3/k)^r |H+P| elements.
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::int64_t n1 = 2 + static_cast<std::int64_t>(rng() % 12), n2 = 2 + static_cast<std::int64_t>(rng() % 12);
        std::int64_t k = 1 + static_cast<std::int64_t>(rng() % 4);
        auto p = sym({1, 1000}, {n1, n2}, Z);
        std::vector<GroupElement> x{{0}};
        for (int i = 0; i < 3; ++i) {
            std::int64_t a = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n1 / k + 1));
            std::int64_t b = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n2 / k + 1));
            x.push_back({a + 1000 * b});
            x.push_back({-(a + 1000 * b)});
        }
        auto xs = make_set(x);
        if (!is_subset(iterated_sumset(Z, xs, k), elements(Z, p))) continue;
        auto out = divide_progression(Z, p, k, xs);
        EXPECT_TRUE(is_subset(xs, elements(Z, out)));
        double bound = std::pow(3.0 / static_cast<double>(k), static_cast<double>(out.rank())) *
                       static_cast<double>(elements(Z, p).size());
        EXPECT_LE(static_cast<double>(elements(Z, out).size()), bound);
    }
}

TEST(Divide, PowerOfTwoBoundFailsOnDocumentedExample) {
    // The (2/k)^r |H+P| bound does not hold in general: 25 > (2/4)^2 * 81.
    auto out = divide_progression(Z, sym({1, 100}, {4, 4}, Z), 4, ints({0, 1, 100}));
    EXPECT_EQ(elements(Z, out).size(), 25u);
    EXPECT_GT(25.0, 0.25 * 81.0);
}

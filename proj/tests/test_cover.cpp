#include <loforge/cover.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace loforge;

namespace {

ElementSet ints(std::initializer_list<std::int64_t> xs) {
    ElementSet s;
    for (auto x : xs) s.push_back({x});
    return make_set(s);
}

const AbelianGroup Z = AbelianGroup::integers();

/// Smallest symmetric proper coset progression of rank <= 1 over Z/q by exhaustion.
std::uint64_t brute_rank1(const AbelianGroup& g, const ElementSet& x) {
    std::uint64_t best = static_cast<std::uint64_t>(g.order());
    for (auto& h : enumerate_subgroups(g, g.order())) {
        if (is_subset(x, h)) best = std::min<std::uint64_t>(best, h.size());
        for (std::int64_t gen = 1; gen < g.order(); ++gen)
            for (std::int64_t n = 0; h.size() * static_cast<std::uint64_t>(2 * n + 1) < best; ++n) {
                CosetProgression p{h, Gap::symmetric_box({{gen}}, {n})};
                if (!is_proper(g, p)) break;
                if (is_subset(x, elements(g, p))) {
                    best = std::min<std::uint64_t>(best, p.volume());
                    break;
                }
            }
    }
    return best;
}

}  // namespace

TEST(MinimalCover, ArithmeticProgression) {
    auto r = minimal_cover(Z, ints({0, 2, 4, 6}), 1, true);
    ASSERT_TRUE(r.cover);
    EXPECT_EQ(r.cover->gap.generators, (std::vector<GroupElement>{{2}}));
    EXPECT_EQ(r.cover->gap.upper, (std::vector<std::int64_t>{3}));
    EXPECT_EQ(r.cover->volume(), 7u);
}

TEST(MinimalCover, Singleton) {
    auto r = minimal_cover(Z, ints({0}), 2, true);
    ASSERT_TRUE(r.cover);
    EXPECT_EQ(r.cover->rank(), 0u);
    EXPECT_EQ(elements(Z, *r.cover).size(), 1u);
}

TEST(MinimalCover, RankTwo) {
    auto r = minimal_cover(Z, ints({0, 1, 100, 101}), 2, true);
    ASSERT_TRUE(r.cover);
    EXPECT_EQ(r.cover->gap.generators, (std::vector<GroupElement>{{1}, {100}}));
    EXPECT_EQ(r.cover->gap.upper, (std::vector<std::int64_t>{1, 1}));
    EXPECT_EQ(r.cover->volume(), 9u);
}

TEST(MinimalCover, UsesSubgroups) {
    auto g = AbelianGroup::cyclic(12);
    // {0, 4, 8} is the subgroup of order 3
    auto r = minimal_cover(g, ints({0, 4, 8}), 1, true);
    ASSERT_TRUE(r.cover);
    EXPECT_EQ(r.cover->rank(), 0u);
    EXPECT_EQ(r.cover->subgroup, ints({0, 4, 8}));
}

TEST(MinimalCover, Asymmetric) {
    auto r = minimal_cover(Z, ints({10, 13, 16}), 1, false);
    ASSERT_TRUE(r.cover);
    EXPECT_EQ(r.cover->volume(), 3u);
    EXPECT_TRUE(is_subset(ints({10, 13, 16}), elements(Z, *r.cover)));
}

TEST(MinimalCover, Errors) {
    EXPECT_THROW(minimal_cover(Z, {}, 1, true), std::invalid_argument);
    EXPECT_THROW(minimal_cover(Z, ints({1, 2}), 1, true), std::invalid_argument);
}

TEST(MinimalCover, TwoProperRequirement) {
    auto g = AbelianGroup::cyclic(11);
    CoverOptions opt;
    opt.t_proper = 2;
    auto r = minimal_cover(g, ints({0, 1, 2, 9, 10}), 1, true, opt);
    ASSERT_TRUE(r.cover);
    EXPECT_TRUE(is_t_proper(g, *r.cover, 2) || r.cover->rank() == 0);
}

TEST(MinimalCover, MatchesExhaustiveRankOne) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        std::int64_t q = 7 + static_cast<std::int64_t>(rng() % 25);
        auto g = AbelianGroup::cyclic(q);
        std::vector<GroupElement> x{{0}};
        for (int i = 0; i < 2; ++i) {
            std::int64_t v = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(q));
            x.push_back({v});
            x.push_back(g.neg({v}));
        }
        auto xs = make_set(x);
        auto r = minimal_cover(g, xs, 1, true);
        ASSERT_TRUE(r.cover);
        EXPECT_TRUE(is_proper(g, *r.cover));
        EXPECT_TRUE(is_subset(xs, elements(g, *r.cover)));
        EXPECT_EQ(elements(g, *r.cover).size(), brute_rank1(g, xs)) << "q=" << q;
    }
}

TEST(MinimalCover, RecoversPlantedProgression) {
    std::mt19937_64 rng(23);
    auto g = AbelianGroup::cyclic(1009);
    int hits = 0;
    for (int trial = 0; trial < 20; ++trial) {
        GroupElement g1{static_cast<std::int64_t>(1 + rng() % 1008)}, g2{static_cast<std::int64_t>(1 + rng() % 1008)};
        auto planted = CosetProgression::from_gap(g, Gap::symmetric_box({g1, g2}, {2, 3}));
        if (!is_proper(g, planted)) continue;
        auto pts = elements(g, planted);
        std::vector<GroupElement> x{g.zero()};
        for (int i = 0; i < 12; ++i) x.push_back(pts[rng() % pts.size()]);
        auto r = minimal_cover(g, make_set(x), 2, true);
        ASSERT_TRUE(r.cover);
        EXPECT_LE(r.cover->volume(), planted.volume());
        ++hits;
    }
    EXPECT_GT(hits, 10);
}

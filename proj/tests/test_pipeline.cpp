#include <loforge/pipeline.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace loforge;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

WeightMultiset ms(const AbelianGroup& g, std::initializer_list<std::int64_t> xs) {
    std::vector<GroupElement> v;
    for (auto x : xs) v.push_back(g.element(x));
    return WeightMultiset::from_elements(g, v);
}

void expect_all_pass(const PipelineReport& r) {
    for (const auto& c : r.certificates)
        EXPECT_TRUE(c.passed) << c.name << ": " << c.lhs << " vs " << c.rhs << " " << c.detail;
}

}  // namespace

TEST(LevelSet, Examples) {
    auto g3 = AbelianGroup::cyclic(3);
    EXPECT_EQ(level_set(ms(g3, {1}), q(1, 2), 1, false).size(), 3u);
    auto g7 = AbelianGroup::cyclic(7);
    EXPECT_EQ(level_set(ms(g7, {1, 2, 3}), q(1, 2), 1000, false).size(), 7u);
    EXPECT_EQ(level_set(ms(g7, {0, 0, 0}), q(1, 2), 1, false).size(), 7u);
}

TEST(LevelSet, NestedAndContainZero) {
    auto g = AbelianGroup::cyclic(31);
    auto a = ms(g, {1, 5, 5, 9, 30, 12, 12, 12});
    auto p = level_profile(a, q(1, 3), false);
    for (std::int64_t l = 1; l < p.max_level(); ++l) {
        EXPECT_TRUE(is_subset(p.set_at(l), p.set_at(l + 1)));
        EXPECT_TRUE(set_contains(p.set_at(l), g.zero()));
    }
}

TEST(FindL0, Examples) {
    auto g3 = AbelianGroup::cyclic(3);
    auto a = ms(g3, {1, 1});
    auto rho = rho_xi(a, q(1, 2)).value;
    EXPECT_EQ(rho, q(1, 24));
    auto c = find_l0(a, q(1, 2), rho, false);
    EXPECT_EQ(c.l0, 1);
    EXPECT_EQ(c.set.size(), 3u);
    auto z = ms(AbelianGroup::cyclic(5), {0, 0});
    auto d = find_l0(z, q(1, 2), rho_xi(z, q(1, 2)).value, false);
    EXPECT_EQ(d.l0, 1);
    EXPECT_EQ(d.set.size(), 5u);
    EXPECT_THROW(find_l0(a, q(1, 2), q(0), false), std::invalid_argument);
}

TEST(Averaging, TrivialLevelSetKeepsEverything) {
    auto g = AbelianGroup::cyclic(11);
    auto a = ms(g, {1, 4, 4, 7});
    auto s = averaging_split(a, {g.zero()}, q(1, 2), 1, 1, false);
    EXPECT_EQ(s.kept.size(), 4);
    EXPECT_EQ(s.exceptional.size(), 0);
    EXPECT_THROW(averaging_split(a, {g.zero()}, q(1, 2), 1, 5, false), std::invalid_argument);
}

TEST(Averaging, OutlierBounded) {
    auto g = AbelianGroup::cyclic(101);
    std::vector<GroupElement> v(20, GroupElement{1});
    v.push_back({50});
    auto a = WeightMultiset::from_elements(g, v);
    auto rho = rho_xi(a, q(1, 2)).value;
    auto c = find_l0(a, q(1, 2), rho, false);
    auto s = averaging_split(a, c.set, q(1, 2), c.l0, 1, false);
    EXPECT_LE(s.exceptional.size(), 1);
    EXPECT_EQ(s.kept.size() + s.exceptional.size(), 21);
    EXPECT_LE(s.total, Rational(c.l0 * static_cast<long>(c.set.size())) / 2);
}

TEST(DualSet, Examples) {
    auto g = AbelianGroup::cyclic(5);
    ElementSet all = g.all_elements();
    EXPECT_EQ(dual_set(all, g, false), (ElementSet{{0}}));
    EXPECT_EQ(dual_set({g.zero()}, g, false), all);
    EXPECT_THROW(dual_set({}, g, false), std::invalid_argument);
}

TEST(DualSet, BoundAndTSquares) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 40; ++t) {
        auto g = AbelianGroup::cyclic(5 + static_cast<std::int64_t>(rng() % 60));
        ElementSet s{g.zero()};
        for (int i = 0; i < 6; ++i) s.push_back({static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(g.order()))});
        s = make_set(s);
        for (bool shifted : {false, true}) {
            auto d = dual_set(s, g, shifted);
            EXPECT_LE(Rational(static_cast<long>(d.size())), Rational(4 * g.order()) / static_cast<long>(s.size()));
        }
        auto closed = t_square_sum(g, s);
        EXPECT_NEAR(closed.get_d(), t_square_sum_numeric(g, s), 1e-6);
        EXPECT_LE(closed, Rational(g.order() * static_cast<long>(s.size())));
    }
}

TEST(DualSet, PrimeFieldRouteMatchesDirect) {
    auto g = AbelianGroup::cyclic(20011);
    std::mt19937_64 rng(9);
    ElementSet s{g.zero()};
    for (int i = 1; i <= 1200; ++i) {
        std::int64_t x = static_cast<std::int64_t>(rng() % 40) + 1;
        s.push_back({x});
        s.push_back(g.neg({x}));
        s.push_back({static_cast<std::int64_t>(rng() % 20011)});
    }
    s = make_set(s);
    ASSERT_GT(static_cast<double>(s.size()) * 20011.0, 2e7);
    for (bool shifted : {false, true}) {
        auto fast = dual_set(s, g, shifted);
        const Integer rhs = Integer(static_cast<long>(s.size())) * 20011 * 20011 * 4;
        ElementSet direct;
        for (std::int64_t a = 0; a < g.order(); ++a)
            if (detail::to_mpz(set_statistic(g, s, {a}, shifted)) * 200 <= rhs) direct.push_back({a});
        EXPECT_EQ(fast, direct);
    }
}

TEST(ChooseK, Examples) {
    EXPECT_EQ(choose_k(q(1, 2), 400, 1, KMode::abelian), 1);
    EXPECT_EQ(choose_k(q(1, 2), 160000, 2, KMode::abelian), 14);
    EXPECT_EQ(choose_k(q(1, 2), 200, 1, KMode::word), 1);
    // alpha' = 1/9: sqrt(n'/1800)
    EXPECT_EQ(choose_k(q(2, 3), 1800 * 9, 1, KMode::rho_star), 3);
    EXPECT_EQ(choose_k(q(1, 2), 10, 1, KMode::abelian), 0);
    EXPECT_THROW(choose_k(q(0), 10, 1, KMode::abelian), std::invalid_argument);
}

TEST(Containment, Basic) {
    auto g = AbelianGroup::cyclic(20);
    ElementSet dual{{0}, {1}, {2}, {18}, {19}};
    EXPECT_TRUE(sumset_containment_check(g, {{1}, {19}}, 2, dual).holds);
    auto r = sumset_containment_check(g, {{1}}, 3, dual);
    EXPECT_FALSE(r.holds);
    EXPECT_EQ(r.witness, GroupElement{3});
    EXPECT_TRUE(sumset_containment_check(g, {}, 5, dual).holds);
    EXPECT_FALSE(sumset_containment_check(g, {{1}}, 0, {{1}}).holds);
}

TEST(Pipeline, SymmetricPairOnZ101) {
    auto g = AbelianGroup::cyclic(101);
    auto a = WeightMultiset(g, {{{1}, 30}, {{100}, 30}});
    PipelineConfig cfg;
    cfg.mode = PipelineMode::abelian_direct;
    cfg.n_prime = 10;
    cfg.max_rank = 1;
    auto r = recover_structure(a, cfg);
    expect_all_pass(r);
    ASSERT_TRUE(r.cover);
    EXPECT_LE(r.cover->rank(), 1u);
    EXPECT_TRUE(contains(g, *r.cover, {{1}, {100}}));
    EXPECT_TRUE(is_proper(g, *r.cover));
    EXPECT_LE(r.exceptional.size(), 10);
}

TEST(Pipeline, AllZerosGiveTrivialCover) {
    auto g = AbelianGroup::cyclic(7);
    auto a = ms(g, {0, 0, 0, 0});
    for (auto mode : {PipelineMode::abelian_direct, PipelineMode::abelian_doubled, PipelineMode::word}) {
        PipelineConfig cfg;
        cfg.mode = mode;
        auto r = recover_structure(a, cfg);
        expect_all_pass(r);
        EXPECT_EQ(r.a_prime.size(), 4);
        ASSERT_TRUE(r.cover);
        EXPECT_EQ(r.cover->rank(), 0u);
        EXPECT_EQ(elements(g, *r.cover), (ElementSet{g.zero()}));
    }
    PipelineConfig cfg;
    cfg.mode = PipelineMode::rho_star;
    auto r = recover_structure(ms(AbelianGroup::integers(), {0, 0, 0}), cfg);
    expect_all_pass(r);
    ASSERT_TRUE(r.cover);
    EXPECT_EQ(r.cover->rank(), 0u);
}

TEST(Pipeline, RhoStarOnesAndOutlier) {
    auto z = AbelianGroup::integers();
    std::vector<GroupElement> v(11, GroupElement{1});
    v.push_back({1000});
    auto a = WeightMultiset::from_elements(z, v);
    PipelineConfig cfg;
    cfg.mode = PipelineMode::rho_star;
    cfg.alpha = q(1, 2);
    cfg.n_prime = 1;
    cfg.max_rank = 1;
    auto r = recover_structure(a, cfg);
    expect_all_pass(r);
    EXPECT_LE(r.exceptional.size(), 1);
    ASSERT_TRUE(r.cover);
    ASSERT_TRUE(r.embedding);
    const auto anchor = r.embedding->anchor;
    for (const auto& [x, mult] : r.a_prime.items())
        EXPECT_TRUE(contains(z, *r.cover, {{x.code - anchor.code}}));
    EXPECT_TRUE(r.sub_threshold);
}

TEST(Pipeline, WordModeOnSubgroup) {
    auto g = AbelianGroup::cyclic(30);
    // +-5 generate the subgroup of order 6
    auto a = WeightMultiset(g, {{{5}, 4}, {{25}, 4}});
    PipelineConfig cfg;
    cfg.mode = PipelineMode::word;
    cfg.m = 6;
    cfg.n_prime = 2;
    auto r = recover_structure(a, cfg);
    expect_all_pass(r);
    ASSERT_TRUE(r.cover);
    EXPECT_TRUE(contains(g, *r.cover, {{5}, {25}}));
}

TEST(Pipeline, DoubledBranchCoversDoubles) {
    auto g = AbelianGroup::cyclic(61);
    auto a = WeightMultiset(g, {{{3}, 12}, {{58}, 12}, {{6}, 4}});
    PipelineConfig cfg;
    cfg.alpha = q(9, 10);
    cfg.n_prime = 3;
    auto r = recover_structure(a, cfg);
    EXPECT_EQ(r.mode, PipelineMode::abelian_doubled);
    expect_all_pass(r);
    ASSERT_TRUE(r.cover);
    for (const auto& [x, mult] : r.a_prime.items()) EXPECT_TRUE(contains(g, *r.cover, {x}));
}

TEST(Pipeline, RandomCertificatesPass) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 25; ++t) {
        auto g = AbelianGroup::cyclic(11 + static_cast<std::int64_t>(rng() % 60));
        std::int64_t gen = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(g.order() - 1));
        std::vector<GroupElement> v;
        int n = 10 + static_cast<int>(rng() % 20);
        for (int i = 0; i < n; ++i) v.push_back(g.scale({gen}, static_cast<std::int64_t>(rng() % 5) - 2));
        auto a = WeightMultiset::from_elements(g, v);
        PipelineConfig cfg;
        cfg.alpha = q(1 + static_cast<long>(rng() % 9), 10);
        cfg.n_prime = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n));
        auto r = recover_structure(a, cfg);
        expect_all_pass(r);
        EXPECT_LE(r.exceptional.size(), cfg.n_prime);
    }
}

TEST(Pipeline, Errors) {
    auto g = AbelianGroup::cyclic(5);
    PipelineConfig cfg;
    cfg.mode = PipelineMode::abelian_direct;
    cfg.alpha = q(1);
    EXPECT_THROW(recover_structure(ms(g, {1, 2}), cfg), std::invalid_argument);
    cfg.alpha = q(1, 2);
    cfg.n_prime = 3;
    EXPECT_THROW(recover_structure(ms(g, {1, 2}), cfg), std::invalid_argument);
    cfg.n_prime = 1;
    cfg.mode = PipelineMode::word;
    EXPECT_THROW(recover_structure(ms(g, {1, 2}), cfg), std::invalid_argument);
    cfg.mode = PipelineMode::rho_star;
    EXPECT_THROW(recover_structure(ms(g, {1, 2}), cfg), std::invalid_argument);
    EXPECT_THROW(parse_pipeline_mode("bogus"), std::invalid_argument);
}

#include <loforge/io.hpp>

#include <gtest/gtest.h>

using namespace loforge;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

}  // namespace

TEST(IoGroup, Literals) {
    EXPECT_TRUE(parse_group(Json("Z")).torsion_free());
    auto g = parse_group(Json::parse(R"({"factors":[2,6]})"));
    EXPECT_EQ(g.order(), 12);
    EXPECT_EQ(group_to_json(g), Json::parse(R"({"factors":[2,6]})"));
    EXPECT_EQ(group_to_json(AbelianGroup::integers()), Json("Z"));
    EXPECT_THROW(parse_group(Json("Q")), format_error);
    EXPECT_THROW(parse_group(Json::parse(R"({"factors":[]})")), std::invalid_argument);
    EXPECT_THROW(parse_group(Json::parse("[5]")), format_error);
}

TEST(IoElement, ReducesAndRoundTrips) {
    auto g = AbelianGroup::product({2, 6});
    auto x = parse_element(g, Json::parse("[3, -1]"));
    EXPECT_EQ(g.coords(x), (std::vector<std::int64_t>{1, 5}));
    EXPECT_EQ(parse_element(g, element_to_json(g, x)), x);
    auto c = AbelianGroup::cyclic(5);
    EXPECT_EQ(parse_element(c, Json(-1)).code, 4);
    EXPECT_EQ(parse_element(AbelianGroup::integers(), Json(-7)).code, -7);
    EXPECT_THROW(parse_element(g, Json(1)), std::invalid_argument);
    EXPECT_THROW(parse_element(g, Json("1")), format_error);
}

TEST(IoMultiset, PairsAndBareIntegers) {
    auto g = AbelianGroup::cyclic(5);
    auto a = parse_multiset(g, Json::parse("[[1,3],[4,1],2]"));
    EXPECT_EQ(a.size(), 5);
    EXPECT_EQ(a.multiplicity({1}), 3);
    EXPECT_EQ(a.multiplicity({2}), 1);
    EXPECT_EQ(multiset_to_json(a), Json::parse("[[1,3],[2,1],[4,1]]"));
    EXPECT_THROW(parse_multiset(g, Json::parse("[[1,0]]")), std::invalid_argument);
    EXPECT_THROW(parse_multiset(g, Json::parse("[[1,2,3]]")), format_error);
}

TEST(IoLaw, Kinds) {
    auto l = parse_law(Json::parse(R"({"kind":"lazy","alpha":"2/3"})"));
    EXPECT_EQ(l.kind, LawKind::lazy);
    EXPECT_EQ(l.alpha, q(2, 3));
    EXPECT_EQ(parse_law(Json::parse(R"({"kind":"bernoulli01","alpha":"0.25"})")).alpha, q(1, 4));
    EXPECT_EQ(parse_law(Json::parse(R"({"kind":"signed"})")).kind, LawKind::signed_bernoulli);
    EXPECT_EQ(law_to_json(l), Json::parse(R"({"kind":"lazy","alpha":"2/3"})"));
    EXPECT_THROW(parse_law(Json::parse(R"({"kind":"lazy","alpha":"3/2"})")), std::invalid_argument);
    EXPECT_THROW(parse_law(Json::parse(R"({"kind":"lazy"})")), format_error);
    EXPECT_THROW(parse_law(Json::parse(R"({"kind":"gauss","alpha":1})")), format_error);
}

TEST(IoProgression, RoundTrip) {
    auto g = AbelianGroup::cyclic(6);
    auto hp = parse_progression(g, Json::parse(R"({"base":0,"gens":[2],"lower":[-1],"upper":[1],"subgroup":[0,3]})"));
    EXPECT_EQ(hp.subgroup.size(), 2u);
    EXPECT_EQ(elements(g, hp).size(), 6u);
    auto back = parse_progression(g, progression_to_json(g, hp));
    EXPECT_EQ(back.subgroup, hp.subgroup);
    EXPECT_EQ(back.gap.generators, hp.gap.generators);
    EXPECT_EQ(back.gap.lower, hp.gap.lower);
    EXPECT_THROW(parse_progression(g, Json::parse(R"({"gens":[2],"lower":[1],"upper":[0]})")), std::invalid_argument);
    EXPECT_THROW(parse_progression(g, Json::parse(R"({"subgroup":[0,2]})")), std::invalid_argument);
}

TEST(IoInstance, DefaultFunctionals) {
    auto z5 = parse_instance(Json::parse(R"({"group":{"factors":[5]},"A":[[1,3]],"law":{"kind":"lazy","alpha":"1/2"}})"));
    EXPECT_EQ(z5.functional, "rho_xi");
    EXPECT_EQ(evaluate(z5).value, rho_xi(z5.a, q(1, 2)).value);
    auto z = parse_instance(Json::parse(R"({"group":"Z","A":[[1,4]]})"));
    EXPECT_EQ(z.functional, "rho");
    EXPECT_EQ(evaluate(z).value, q(6, 16));
    auto b = parse_instance(Json::parse(R"({"group":"Z","A":[[1,2],[2,1]],"law":{"kind":"bernoulli01","alpha":"2/3"}})"));
    EXPECT_EQ(b.functional, "sup");
    EXPECT_EQ(evaluate(b).value, q(8, 27));
}

TEST(IoInstance, ExplicitFunctionals) {
    auto s = parse_instance(Json::parse(R"({"group":"Z","A":[[1,2],[2,1]],"functional":"rho_star_m","m":2})"));
    EXPECT_EQ(evaluate(s).value, q(2, 3));
    auto w = parse_instance(Json::parse(R"({"group":{"factors":[7]},"A":[[1,1],[6,1]],"functional":"rho_m","m":2})"));
    EXPECT_EQ(evaluate(w).value, rho_m(w.a, 2).value);
    auto missing = parse_instance(Json::parse(R"({"group":"Z","A":[1],"functional":"rho_m"})"));
    EXPECT_THROW(evaluate(missing), format_error);
    auto bad = parse_instance(Json::parse(R"({"group":"Z","A":[1],"functional":"entropy"})"));
    EXPECT_THROW(evaluate(bad), format_error);
    auto back = parse_instance(instance_to_json(s));
    EXPECT_EQ(back.functional, "rho_star_m");
    EXPECT_EQ(*back.m, 2);
    EXPECT_EQ(back.a.size(), 3);
    EXPECT_THROW(parse_instance(Json::parse(R"({"A":[1]})")), format_error);
}

TEST(IoReport, PipelineReportCarriesCertificates) {
    auto g = AbelianGroup::cyclic(101);
    auto a = WeightMultiset(g, {{{1}, 30}, {{100}, 30}});
    PipelineConfig cfg;
    cfg.n_prime = 10;
    cfg.max_rank = 1;
    auto r = recover_structure(a, cfg);
    auto j = report_to_json(r);
    EXPECT_EQ(j["passed"], r.passed());
    ASSERT_EQ(j["certificates"].size(), r.certificates.size());
    for (const auto& c : j["certificates"]) {
        EXPECT_TRUE(c.contains("lhs"));
        EXPECT_TRUE(c.contains("rhs"));
        EXPECT_TRUE(c["passed"].get<bool>());
    }
    ASSERT_FALSE(j["cover"].is_null());
    auto hp = parse_progression(g, j["cover"]);
    EXPECT_TRUE(contains(g, hp, ElementSet{{1}, {100}}));
    EXPECT_EQ(parse_rational(j["rho"].get<std::string>()), r.rho);
}

TEST(IoReport, MixingReport) {
    MixingConfig cfg;
    cfg.q = 31;
    cfg.k = 2;
    cfg.trials = 3;
    auto j = mixing_to_json(mixing_experiment(cfg));
    EXPECT_EQ(j["trials"].size(), 3u);
    EXPECT_EQ(j["q"], 31);
    EXPECT_FALSE(j["median_mixing_time"].is_null());
}

#pragma once

#include <loforge/concentration.hpp>
#include <loforge/experiments.hpp>
#include <loforge/pipeline.hpp>

#include <json.hpp>

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

namespace loforge {

using Json = nlohmann::json;

class format_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---- literals -----------------------------------------------------------------------------

/// `"Z"` or `{"factors":[q1,...,qd]}`.
inline AbelianGroup parse_group(const Json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != "Z") throw format_error("group string must be \"Z\"");
        return AbelianGroup::integers();
    }
    if (!j.is_object() || !j.contains("factors") || !j["factors"].is_array())
        throw format_error("group must be \"Z\" or {\"factors\":[...]}");
    auto factors = j["factors"].get<std::vector<std::int64_t>>();
    return AbelianGroup::product(std::move(factors));
}

inline Json group_to_json(const AbelianGroup& g) {
    if (g.torsion_free()) return "Z";
    return Json{{"factors", std::vector<std::int64_t>(g.factors().begin(), g.factors().end())}};
}

/// An integer (Z or a cyclic group, reduced mod q) or a coordinate list (reduced per factor).
inline GroupElement parse_element(const AbelianGroup& g, const Json& j) {
    if (j.is_number_integer()) {
        if (g.torsion_free()) return {j.get<std::int64_t>()};
        return g.element(j.get<std::int64_t>());
    }
    if (j.is_array()) return g.element(j.get<std::vector<std::int64_t>>());
    throw format_error("element must be an integer or a coordinate list");
}

inline Json element_to_json(const AbelianGroup& g, GroupElement x) {
    if (g.torsion_free() || g.num_factors() == 1) return x.code;
    return g.coords(x);
}

inline Json elements_to_json(const AbelianGroup& g, const ElementSet& s) {
    Json out = Json::array();
    for (auto x : s) out.push_back(element_to_json(g, x));
    return out;
}

/// `[[elem, mult], ...]`; a bare integer element counts once.
inline WeightMultiset parse_multiset(const AbelianGroup& g, const Json& j) {
    if (!j.is_array()) throw format_error("A must be a list of [element, multiplicity] pairs");
    std::vector<std::pair<GroupElement, std::int64_t>> items;
    for (const auto& e : j) {
        if (e.is_number_integer()) items.emplace_back(parse_element(g, e), 1);
        else if (e.is_array() && e.size() == 2 && e[1].is_number_integer())
            items.emplace_back(parse_element(g, e[0]), e[1].get<std::int64_t>());
        else throw format_error("multiset entries are [element, multiplicity]");
    }
    return WeightMultiset(g, items);
}

inline Json multiset_to_json(const WeightMultiset& a) {
    Json out = Json::array();
    for (const auto& [x, mult] : a.items()) out.push_back(Json::array({element_to_json(a.group(), x), mult}));
    return out;
}

inline Rational parse_rational_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw format_error("rational values are integers or strings like \"2/3\"");
}

inline std::string to_string(LawKind k) {
    switch (k) {
    case LawKind::lazy: return "lazy";
    case LawKind::bernoulli01: return "bernoulli01";
    case LawKind::signed_bernoulli: return "signed";
    }
    return "?";
}

/// `{"kind":"lazy"|"bernoulli01"|"signed","alpha":"p/q"}`.
inline StepLaw parse_law(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) throw format_error("law needs a kind");
    auto kind = j["kind"].get<std::string>();
    if (kind == "signed") return StepLaw::signed_bernoulli();
    if (!j.contains("alpha")) throw format_error("law " + kind + " needs alpha");
    Rational alpha = parse_rational_json(j["alpha"]);
    StepLaw law;
    if (kind == "lazy") law = StepLaw::lazy(alpha);
    else if (kind == "bernoulli01") law = StepLaw::bernoulli01(alpha);
    else throw format_error("unknown law kind: " + kind);
    law.validate();
    return law;
}

inline Json law_to_json(const StepLaw& law) {
    Json j{{"kind", to_string(law.kind)}};
    if (law.kind != LawKind::signed_bernoulli) j["alpha"] = to_string(law.alpha);
    return j;
}

/// `{"base":[...],"gens":[[...],...],"lower":[...],"upper":[...],"subgroup":[[...],...]}`.
inline Json progression_to_json(const AbelianGroup& g, const CosetProgression& hp) {
    Json gens = Json::array();
    for (auto x : hp.gap.generators) gens.push_back(element_to_json(g, x));
    return Json{{"base", element_to_json(g, hp.gap.base)},
                {"gens", gens},
                {"lower", hp.gap.lower},
                {"upper", hp.gap.upper},
                {"subgroup", elements_to_json(g, hp.subgroup)}};
}

inline CosetProgression parse_progression(const AbelianGroup& g, const Json& j) {
    if (!j.is_object()) throw format_error("progression must be an object");
    CosetProgression hp;
    hp.gap.base = j.contains("base") ? parse_element(g, j["base"]) : g.zero();
    for (const auto& x : j.value("gens", Json::array())) hp.gap.generators.push_back(parse_element(g, x));
    hp.gap.lower = j.value("lower", std::vector<std::int64_t>{});
    hp.gap.upper = j.value("upper", std::vector<std::int64_t>{});
    std::vector<GroupElement> h;
    for (const auto& x : j.value("subgroup", Json::array())) h.push_back(parse_element(g, x));
    hp.subgroup = h.empty() ? ElementSet{g.zero()} : make_set(std::move(h));
    validate(g, hp);
    return hp;
}

// ---- instances ------------------------------------------------------------------------------

/**
 * @brief `{"group":..., "A":[[elem,mult],...], "law":{...}, "m":..., "functional":...}`.
 *
 * functional is one of rho, rho_xi, rho_star_m, rho_m, sup; when absent it follows from the
 * group and law: rho over Z with the signed law, rho_xi on a finite group with the lazy law,
 * sup otherwise.
 */
struct Instance {
    WeightMultiset a;
    StepLaw law = StepLaw::signed_bernoulli();
    std::optional<std::int64_t> m;
    std::string functional;
};

inline Instance parse_instance(const Json& j) {
    if (!j.is_object() || !j.contains("group") || !j.contains("A")) throw format_error("instance needs group and A");
    Instance inst;
    auto g = parse_group(j["group"]);
    inst.a = parse_multiset(g, j["A"]);
    if (j.contains("law")) inst.law = parse_law(j["law"]);
    if (j.contains("m") && !j["m"].is_null()) inst.m = j["m"].get<std::int64_t>();
    inst.functional = j.value("functional", std::string{});
    if (inst.functional.empty()) {
        if (g.torsion_free() && inst.law.kind == LawKind::signed_bernoulli) inst.functional = "rho";
        else if (g.finite() && inst.law.kind == LawKind::lazy) inst.functional = "rho_xi";
        else inst.functional = "sup";
    }
    return inst;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw format_error(path + ": " + e.what());
    }
}

inline Instance load_instance(const std::string& path) { return parse_instance(read_json_file(path)); }

inline Json instance_to_json(const Instance& inst) {
    Json j{{"group", group_to_json(inst.a.group())},
           {"A", multiset_to_json(inst.a)},
           {"law", law_to_json(inst.law)},
           {"functional", inst.functional}};
    if (inst.m) j["m"] = *inst.m;
    return j;
}

/// Evaluates the instance's functional.
inline FunctionalResult evaluate(const Instance& inst) {
    const auto& f = inst.functional;
    auto need_m = [&] {
        if (!inst.m) throw format_error(f + " needs m");
        return *inst.m;
    };
    if (f == "rho") return rho_classical(inst.a);
    if (f == "rho_xi") {
        if (inst.law.kind != LawKind::lazy) throw format_error("rho_xi needs a lazy law");
        return rho_xi(inst.a, inst.law.alpha);
    }
    if (f == "rho_star_m") return rho_star_m(inst.a, need_m());
    if (f == "rho_m") return rho_m(inst.a, need_m());
    if (f == "sup") return sup_probability(inst.a, inst.law);
    throw format_error("unknown functional: " + f);
}

// ---- reports --------------------------------------------------------------------------------

inline Json certificate_to_json(const Certificate& c) {
    return Json{{"name", c.name}, {"passed", c.passed}, {"lhs", c.lhs}, {"rhs", c.rhs},
                {"detail", c.detail}};
}

inline Json report_to_json(const PipelineReport& r) {
    Json certs = Json::array();
    for (const auto& c : r.certificates) certs.push_back(certificate_to_json(c));
    Json dual = Json::array();
    for (const auto& d : r.dual) dual.push_back(d.size());
    const bool fourier_finite = r.fourier_group.finite();
    Json j{{"mode", to_string(r.mode)},
           {"branch", r.branch},
           {"rho", to_string(r.rho)},
           {"target", to_string(r.target)},
           {"weight", to_string(r.weight)},
           {"fourier_group", group_to_json(r.fourier_group)},
           {"l0", r.l0},
           {"level_set_size", r.level_set.size()},
           {"level_sizes", r.level_sizes},
           {"a_prime", multiset_to_json(r.a_prime)},
           {"exceptional", multiset_to_json(r.exceptional)},
           {"k_formula", r.k_formula},
           {"k", r.k},
           {"sub_threshold", r.sub_threshold},
           {"dual_sizes", dual},
           {"cover_group", group_to_json(r.cover_group)},
           {"cover_target", elements_to_json(r.cover_group, r.cover_target)},
           {"cover", r.cover ? progression_to_json(r.cover_group, *r.cover) : Json(nullptr)},
           {"certificates", certs},
           {"passed", r.passed()},
           {"diagnostic", r.diagnostic},
           {"seconds", r.seconds}};
    if (fourier_finite && r.level_set.size() <= 4096) j["level_set"] = elements_to_json(r.fourier_group, r.level_set);
    if (r.embedding) {
        j["embedding"] = Json{{"shift", r.embedding->shift},
                              {"prime", r.embedding->prime},
                              {"anchor", r.embedding->anchor.code},
                              {"rho_star_m", to_string(r.embedding->rho_star_m)},
                              {"m", r.embedding->m}};
    }
    return j;
}

inline Json mixing_to_json(const MixingReport& rep) {
    Json trials = Json::array();
    for (const auto& t : rep.trials) {
        Json pts = Json::array();
        for (const auto& p : t.evaluated)
            pts.push_back(Json{{"m", p.m}, {"discrepancy", p.discrepancy}, {"total_variation", p.total_variation}});
        trials.push_back(Json{{"generators", t.generators},
                              {"mixing_time", t.mixing_time ? Json(*t.mixing_time) : Json(nullptr)},
                              {"monotone", t.monotone},
                              {"evaluated", pts}});
    }
    const auto& c = rep.config;
    Json p = Json::array();
    for (const auto& x : c.p) p.push_back(to_string(x));
    return Json{{"q", c.q},
                {"k", c.k},
                {"p", p},
                {"delta", c.delta},
                {"seed", c.seed},
                {"trials", trials},
                {"median_mixing_time", rep.median_mixing_time ? Json(*rep.median_mixing_time) : Json(nullptr)},
                {"unresolved", rep.unresolved},
                {"monotone", rep.monotone}};
}

}  // namespace loforge

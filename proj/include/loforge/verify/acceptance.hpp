#pragma once

// The ten acceptance checks. Each returns a single pass/fail result with a one-line summary.

#include <loforge/experiments.hpp>
#include <loforge/fourier.hpp>
#include <loforge/io.hpp>
#include <loforge/pipeline.hpp>
#include <loforge/random.hpp>
#include <loforge/verify/oracles.hpp>

#include <chrono>
#include <filesystem>
#include <functional>
#include <sstream>

namespace loforge::acceptance {

struct Result {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string summary;
    double seconds = 0;
};

struct Options {
    std::uint64_t seed = 20240601;
    /// Directory of instance files added to the built-in corpus; empty skips it.
    std::string corpus_dir;
};

namespace detail {

inline Rational q(long a, long b = 1) { return make_rational(a, b); }

inline WeightMultiset random_multiset(Rng& rng, const AbelianGroup& g, std::int64_t n, std::int64_t lo, std::int64_t hi) {
    std::vector<GroupElement> v;
    for (std::int64_t i = 0; i < n; ++i) {
        if (g.torsion_free()) v.push_back({rng.uniform(lo, hi)});
        else v.push_back({rng.uniform(0, g.order() - 1)});
    }
    return WeightMultiset::from_elements(g, v);
}

inline AbelianGroup random_small_group(Rng& rng, std::int64_t max_order) {
    if (rng.uniform(0, 2) == 0) {
        std::int64_t a = rng.uniform(2, 5);
        std::int64_t b = rng.uniform(2, std::max<std::int64_t>(2, max_order / a));
        return AbelianGroup::product({a, b});
    }
    return AbelianGroup::cyclic(rng.uniform(2, max_order));
}

/// A symmetric multiset: pairs {x, -x} plus possibly some self-inverse elements.
inline WeightMultiset random_symmetric(Rng& rng, const AbelianGroup& g, std::int64_t pairs) {
    std::vector<GroupElement> v;
    for (std::int64_t i = 0; i < pairs; ++i) {
        GroupElement x = g.torsion_free() ? GroupElement{rng.uniform(-6, 6)} : GroupElement{rng.uniform(0, g.order() - 1)};
        v.push_back(x);
        v.push_back(g.neg(x));
    }
    return WeightMultiset::from_elements(g, v);
}

inline StepLaw random_law(Rng& rng) {
    Rational alpha = q(static_cast<long>(rng.uniform(0, 6)), 6);
    switch (rng.uniform(0, 2)) {
    case 0: return StepLaw::lazy(alpha);
    case 1: return StepLaw::bernoulli01(alpha);
    default: return StepLaw::signed_bernoulli();
    }
}

/// Built-in corpus plus every instance file in the corpus directory.
inline std::vector<Instance> corpus(const Options& opt) {
    std::vector<Instance> out;
    Rng rng(opt.seed, "corpus");
    for (int t = 0; t < 150; ++t) {
        Instance inst;
        bool finite = t % 2 == 0;
        auto g = finite ? random_small_group(rng, 40) : AbelianGroup::integers();
        inst.a = random_multiset(rng, g, rng.uniform(1, 12), -8, 8);
        inst.law = StepLaw::lazy(q(static_cast<long>(rng.uniform(1, 9)), 10));
        inst.functional = finite ? "rho_xi" : "sup";
        out.push_back(std::move(inst));
    }
    if (!opt.corpus_dir.empty() && std::filesystem::is_directory(opt.corpus_dir)) {
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(opt.corpus_dir))
            if (e.path().extension() == ".json") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            auto j = read_json_file(f.string());
            if (j.is_object() && j.contains("group") && j.contains("A")) out.push_back(parse_instance(j));
        }
    }
    return out;
}

template <class F>
Result timed(int id, std::string name, F&& body) {
    auto start = std::chrono::steady_clock::now();
    Result r{id, std::move(name), false, {}, 0};
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.summary = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// Independent containment check of the recovered structure.
inline bool recovery_sound(const PipelineReport& r, const PipelineConfig& cfg, std::string& why) {
    if (r.exceptional.size() > cfg.n_prime) {
        why = "exceptional set larger than n'";
        return false;
    }
    if (!r.cover) return true;
    const auto& g = r.cover_group;
    if (!is_proper(g, *r.cover)) {
        why = "cover not proper";
        return false;
    }
    if (static_cast<int>(r.cover->rank()) > cfg.max_rank) {
        why = "cover rank above max_rank";
        return false;
    }
    ElementSet need;
    if (r.mode == PipelineMode::rho_star) {
        for (const auto& [x, mult] : r.a_prime.items()) need.push_back({x.code - r.embedding->anchor.code});
    } else {
        need = r.a_prime.support();
    }
    if (!contains(g, *r.cover, make_set(need))) {
        why = "kept elements outside the cover";
        return false;
    }
    return true;
}

inline std::string fmt(double x, int prec = 3) {
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

}  // namespace detail

// ---- 1. exact functionals against enumeration -----------------------------------------------

inline Result oracle_equivalence(const Options& opt) {
    return detail::timed(1, "oracle equivalence", [&](Result& res) {
        using detail::q;
        Rng rng(opt.seed, "oracle-equivalence");
        int mismatches = 0, checks = 0;
        std::string first;
        auto check = [&](bool ok, const std::string& what) {
            ++checks;
            if (!ok && mismatches++ == 0) first = what;
        };
        const auto z = AbelianGroup::integers();
        for (int t = 0; t < 500; ++t) {
            const bool finite = t % 2 == 0;
            const auto g = finite ? detail::random_small_group(rng, 30) : z;
            const std::int64_t n = rng.uniform(1, 10);
            // Z window n * max|a| <= 100
            const std::int64_t bound = std::max<std::int64_t>(1, 100 / n);
            auto a = detail::random_multiset(rng, g, n, -bound, bound);
            auto law = detail::random_law(rng);
            const std::string tag = "instance " + std::to_string(t);

            check(oracle::to_map(walk_distribution(a, law)) == oracle::walk(a, law), tag + " walk_distribution");
            const std::int64_t m = rng.uniform(1, n <= 4 ? 5 : 3);
            check(oracle::to_map(word_walk_distribution(a, m)) == oracle::word_walk(a, m),
                  tag + " word_walk_distribution");
            const std::int64_t mm = rng.uniform(0, n);
            check(rho_star_m(a, mm).value == oracle::rho_star_m(a, mm), tag + " rho_star_m");
            if (finite) {
                Rational alpha = q(static_cast<long>(rng.uniform(0, 6)), 6);
                check(rho_xi(a, alpha).value == oracle::rho_xi(a, alpha), tag + " rho_xi");
            } else {
                check(rho_classical(a).value == oracle::rho_classical(a), tag + " rho");
            }
            auto s = detail::random_symmetric(rng, g, rng.uniform(1, 5));
            const std::int64_t ms = rng.uniform(1, s.size() <= 4 ? 5 : 3);
            check(rho_m(s, ms).value == oracle::rho_m(s, ms), tag + " rho_m");
        }
        res.passed = mismatches == 0;
        res.summary = std::to_string(checks) + " exact comparisons on 500 instances, " + std::to_string(mismatches) +
                      " mismatches" + (first.empty() ? "" : " (first: " + first + ")");
    });
}

// ---- 2. Fourier inversion and coefficient bounds ----------------------------------------------

inline Result fourier_bounds(const Options& opt) {
    return detail::timed(2, "fourier identity and bounds", [&](Result& res) {
        using detail::q;
        Rng rng(opt.seed, "fourier");
        double worst_residual = 0;
        int exact_fail = 0;
        for (int t = 0; t < 200; ++t) {
            auto g = detail::random_small_group(rng, 24);
            auto a = detail::random_multiset(rng, g, rng.uniform(1, 5), 0, 0);
            StepLaw law = StepLaw::lazy(q(static_cast<long>(rng.uniform(1, 9)), 10));
            worst_residual = std::max(worst_residual, fourier_inversion_residual(a, law));
            if (!oracle::exact_inversion_holds(a, law, walk_distribution(a, law))) ++exact_fail;
        }
        // single step |1 - alpha + alpha cos 2 pi x| on x = i/100, alpha = j/101
        std::int64_t grid_violations = 0, grid_points = 0;
        const auto l100 = AbelianGroup::cyclic(100);
        const auto one = WeightMultiset::from_elements(l100, {{1}});
        for (std::int64_t i = 0; i < 100; ++i)
            for (long j = 1; j <= 100; ++j) {
                Rational alpha = q(j, 101);
                double c = fourier_coefficient(one, StepLaw::lazy(alpha), {i});
                ++grid_points;
                if (c > fourier_exp_bound(one, alpha, {i}, false) + 1e-12) ++grid_violations;
                if (c > doubled_exp_bound(one, alpha, {i}) + 1e-12) ++grid_violations;
            }
        std::int64_t corpus_violations = 0, corpus_points = 0;
        for (const auto& inst : detail::corpus(opt)) {
            const auto& g = inst.a.group();
            if (!g.finite() || inst.law.kind != LawKind::lazy) continue;
            const auto& alpha = inst.law.alpha;
            if (alpha <= 0 || alpha >= 1) continue;
            for (std::int64_t z = 0; z < g.order(); ++z) {
                double c = fourier_coefficient(inst.a, inst.law, {z});
                ++corpus_points;
                if (c > fourier_exp_bound(inst.a, alpha, {z}, false) + 1e-12) ++corpus_violations;
                if (c > doubled_exp_bound(inst.a, alpha, {z}) + 1e-12) ++corpus_violations;
            }
            if (inst.a.symmetric()) {
                const std::int64_t m = inst.m.value_or(inst.a.size());
                for (std::int64_t z = 0; z < g.order(); ++z) {
                    ++corpus_points;
                    if (word_fourier_coefficient(inst.a, {z}, m) >
                        std::pow(word_step_bound(inst.a, {z}), static_cast<double>(m)) + 1e-12)
                        ++corpus_violations;
                }
            }
        }
        res.passed = worst_residual <= 1e-9 && exact_fail == 0 && grid_violations == 0 && corpus_violations == 0;
        res.summary = "200 instances: max float residual " + detail::fmt(worst_residual) + ", " +
                      std::to_string(exact_fail) + " exact failures; grid " + std::to_string(grid_points) +
                      " points, " + std::to_string(grid_violations) + " violations; corpus " +
                      std::to_string(corpus_points) + " characters, " + std::to_string(corpus_violations) +
                      " violations";
    });
}

// ---- 3 and 4. pipeline certificates and recovery soundness -----------------------------------

struct PipelineRun {
    PipelineConfig config;
    PipelineReport report;
};

/// Instances for one mode with rho >= n^-2; rejected draws are resampled.
inline std::vector<PipelineRun> pipeline_runs(PipelineMode mode, int count, const Options& opt, std::int64_t& rejected) {
    using detail::q;
    Rng rng(opt.seed, "pipeline/" + to_string(mode));
    std::vector<PipelineRun> runs;
    rejected = 0;
    while (static_cast<int>(runs.size()) < count) {
        PipelineConfig cfg;
        cfg.mode = mode;
        cfg.max_rank = static_cast<int>(rng.uniform(1, 2));
        WeightMultiset a;
        if (mode == PipelineMode::rho_star) {
            const std::int64_t n = rng.uniform(8, 20);
            std::int64_t spread = rng.uniform(1, 4);
            std::vector<GroupElement> v;
            for (std::int64_t i = 0; i < n; ++i) v.push_back({rng.uniform(-spread, spread)});
            if (rng.uniform(0, 3) == 0) v.back() = {rng.uniform(50, 500)};
            a = WeightMultiset::from_elements(AbelianGroup::integers(), v);
            cfg.alpha = q(static_cast<long>(rng.uniform(1, 5)), 6);
        } else {
            auto g = AbelianGroup::cyclic(rng.uniform(11, 97));
            if (rng.uniform(0, 4) == 0) g = AbelianGroup::product({2, rng.uniform(3, 30)});
            // elements drawn from a short progression so that rho is large
            GroupElement gen{rng.uniform(1, g.order() - 1)};
            const std::int64_t span = rng.uniform(1, 3);
            std::vector<GroupElement> v;
            if (mode == PipelineMode::word) {
                const std::int64_t pairs = rng.uniform(3, 12);
                for (std::int64_t i = 0; i < pairs; ++i) {
                    auto x = g.scale(gen, rng.uniform(-span, span));
                    v.push_back(x);
                    v.push_back(g.neg(x));
                }
                cfg.m = rng.uniform(0, 1) ? 0 : rng.uniform(1, static_cast<std::int64_t>(v.size()));
            } else {
                const std::int64_t n = rng.uniform(6, 30);
                for (std::int64_t i = 0; i < n; ++i) v.push_back(g.scale(gen, rng.uniform(-span, span)));
                if (rng.uniform(0, 3) == 0) v.back() = {rng.uniform(0, g.order() - 1)};
                cfg.alpha = q(static_cast<long>(rng.uniform(1, 9)), 10);
            }
            a = WeightMultiset::from_elements(g, v);
        }
        cfg.n_prime = rng.uniform(1, a.size());
        PipelineReport r;
        try {
            r = recover_structure(a, cfg);
        } catch (const std::invalid_argument&) {
            // rho vanishes: exactly uniform walk
            ++rejected;
            continue;
        }
        const Rational floor_rho(1, static_cast<long>(a.size() * a.size()));
        if (r.rho < floor_rho) {
            ++rejected;
            continue;
        }
        runs.push_back({cfg, std::move(r)});
    }
    return runs;
}

inline const std::vector<std::pair<PipelineMode, std::vector<PipelineRun>>>& cached_runs(const Options& opt) {
    static std::uint64_t seed = 0;
    static std::vector<std::pair<PipelineMode, std::vector<PipelineRun>>> runs;
    if (runs.empty() || seed != opt.seed) {
        runs.clear();
        seed = opt.seed;
        for (auto mode : {PipelineMode::abelian, PipelineMode::word, PipelineMode::rho_star}) {
            std::int64_t rejected = 0;
            runs.emplace_back(mode, pipeline_runs(mode, 200, opt, rejected));
        }
    }
    return runs;
}

inline Result pipeline_certificates(const Options& opt) {
    return detail::timed(3, "pipeline certificates", [&](Result& res) {
        const std::vector<std::string> required{"pigeonhole", "averaging_double_count", "dual_bound", "t_square_sum",
                                                "sumset_containment"};
        std::ostringstream os;
        bool ok = true;
        for (const auto& [mode, runs] : cached_runs(opt)) {
            int failures = 0, missing = 0;
            std::size_t certs = 0;
            std::string first;
            for (const auto& run : runs) {
                for (const auto& c : run.report.certificates) {
                    ++certs;
                    if (!c.passed && failures++ == 0) first = c.name;
                }
                for (const auto& name : required)
                    if (!run.report.certificate(name)) ++missing;
            }
            ok = ok && failures == 0 && missing == 0;
            os << to_string(mode) << ": " << runs.size() << " runs, " << certs << " certificates, " << failures
               << " failed" << (first.empty() ? "" : " (" + first + ")") << ", " << missing << " missing; ";
        }
        res.passed = ok;
        res.summary = os.str();
        res.summary.resize(res.summary.size() - 2);
    });
}

struct PlantedTrial {
    int rank = 0;
    std::uint64_t planted_size = 0;
    std::optional<std::uint64_t> cover_size;
    int cover_rank = -1;
    bool good = false;
};

/// A drawn from a symmetric proper GAP of rank r <= 2 and size <= 50 in Z/1009; n = 30.
inline std::vector<PlantedTrial> planted_trials(const Options& opt, int trials = 100) {
    using detail::q;
    Rng rng(opt.seed, "planted");
    const auto g = AbelianGroup::cyclic(1009);
    std::vector<PlantedTrial> out;
    for (int t = 0; t < trials; ++t) {
        const int rank = t % 2 + 1;
        Gap p = random_symmetric_gap(rng, g, rank, 50, 1008);
        auto pts = elements(g, p);
        std::vector<GroupElement> v;
        for (int i = 0; i < 30; ++i) v.push_back(rng.pick(pts));
        PipelineConfig cfg;
        cfg.mode = PipelineMode::abelian_direct;
        cfg.alpha = q(1, 2);
        cfg.n_prime = 3;
        cfg.max_rank = 2;
        auto r = recover_structure(WeightMultiset::from_elements(g, v), cfg);
        PlantedTrial tr{rank, pts.size(), std::nullopt, -1, false};
        if (r.cover) {
            tr.cover_size = elements(g, *r.cover).size();
            tr.cover_rank = static_cast<int>(r.cover->rank());
            tr.good = tr.cover_rank <= rank && *tr.cover_size <= 4 * tr.planted_size;
        }
        out.push_back(tr);
    }
    return out;
}

inline Result recovery_soundness(const Options& opt) {
    return detail::timed(4, "recovery soundness", [&](Result& res) {
        int runs = 0, with_cover = 0, unsound = 0;
        std::string why;
        for (const auto& [mode, rs] : cached_runs(opt))
            for (const auto& run : rs) {
                ++runs;
                if (run.report.cover) ++with_cover;
                std::string w;
                if (!detail::recovery_sound(run.report, run.config, w) && unsound++ == 0) why = w;
            }
        auto planted = planted_trials(opt);
        int good = 0;
        for (const auto& t : planted) good += t.good;
        res.passed = unsound == 0 && good >= 90;
        res.summary = std::to_string(runs) + " runs (" + std::to_string(with_cover) + " with a cover), " +
                      std::to_string(unsound) + " unsound" + (why.empty() ? "" : " (" + why + ")") +
                      "; planted GAPs recovered within rank and 4x size: " + std::to_string(good) + "/" +
                      std::to_string(planted.size()) + " (need 90)";
    });
}

// ---- 5. subset-sum transfer --------------------------------------------------------------------

inline Result subset_sum_transfer(const Options& opt) {
    return detail::timed(5, "subset-sum transfer", [&](Result& res) {
        using detail::q;
        const auto z = AbelianGroup::integers();
        auto witness = WeightMultiset::from_elements(z, {{1}, {1}, {2}});
        Rational lhs = sup_probability(witness, StepLaw::bernoulli01(q(2, 3))).value;
        Rational rhs = rho_star_m(witness, 2).value * binomial_point_mass(3, q(2, 3), 2);
        const bool witness_ok = lhs == q(8, 27) && rhs == q(8, 27);
        int checks = 0, violations = 0;
        auto check_instance = [&](const WeightMultiset& a) {
            const std::int64_t n = a.size();
            for (long j = 1; j < 6; ++j) {
                Rational alpha = q(j, 6);
                Rational sup = sup_probability(a, StepLaw::bernoulli01(alpha)).value;
                for (std::int64_t m = 0; m <= n; ++m) {
                    ++checks;
                    if (sup < rho_star_m(a, m).value * binomial_point_mass(n, alpha, m)) ++violations;
                }
            }
        };
        int instances = 0;
        for (const auto& inst : detail::corpus(opt)) {
            if (!inst.a.group().torsion_free() || inst.a.size() > 16) continue;
            check_instance(inst.a);
            ++instances;
        }
        res.passed = witness_ok && violations == 0;
        res.summary = "witness {1,1,2}: " + to_string(lhs) + " vs " + to_string(rhs) + "; " + std::to_string(instances) +
                      " corpus instances, " + std::to_string(checks) + " (alpha, m) checks, " +
                      std::to_string(violations) + " violations";
    });
}

// ---- 6. central binomial bounds ------------------------------------------------------------------

inline Result classical_bounds_check(const Options& opt) {
    return detail::timed(6, "central binomial bounds", [&](Result& res) {
        Rng rng(opt.seed, "classical");
        const auto z = AbelianGroup::integers();
        int upper = 0, lower = 0;
        for (int t = 0; t < 10000; ++t) {
            const std::int64_t n = rng.uniform(1, 20);
            const std::int64_t range = rng.pick(std::vector<std::int64_t>{1, 3, 10, 100});
            std::vector<GroupElement> v;
            for (std::int64_t i = 0; i < n; ++i) {
                std::int64_t x = 0;
                while (x == 0) x = rng.uniform(-range, range);
                v.push_back({x});
            }
            auto b = classical_bounds(WeightMultiset::from_elements(z, v));
            upper += !b.upper_ok;
            lower += !b.lower_ok;
        }
        res.passed = upper == 0 && lower == 0;
        res.summary = "10000 nonzero multisets: " + std::to_string(upper) + " upper-bound and " + std::to_string(lower) +
                      " lower-bound violations";
    });
}

// ---- 7. sup probability on Z/q ----------------------------------------------------------------

inline Result erdos_grid(const Options& opt) {
    return detail::timed(7, "sqrt(n) sup-probability on Z/q", [&](Result& res) {
        auto rep = check_erdos_corollary({101, 199}, {16, 36, 64, 100}, 50, opt.seed, 1.0);
        double worst = 0;
        for (const auto& c : rep.cells) worst = std::max(worst, c.max_statistic);
        res.passed = rep.passed();
        res.summary = "8 cells x 50 trials, max sqrt(n) sup P = " + detail::fmt(worst, 4) + " (bound 1.0)";
    });
}

// ---- 8. mixing exponent ------------------------------------------------------------------------

inline Result mixing_exponent(const Options& opt) {
    return detail::timed(8, "mixing exponent", [&](Result& res) {
        std::ostringstream os;
        bool ok = true;
        for (auto [k, lo, hi] : {std::tuple{2, 0.7, 1.3}, std::tuple{3, 0.37, 0.97}}) {
            std::vector<double> xs, ys;
            bool resolved = true, monotone = true;
            for (std::int64_t qq : {101, 211, 401, 809}) {
                MixingConfig cfg;
                cfg.q = qq;
                cfg.k = k;
                cfg.delta = 0.1;
                cfg.trials = 20;
                cfg.seed = opt.seed;
                auto rep = mixing_experiment(cfg);
                monotone = monotone && rep.monotone;
                if (!rep.median_mixing_time) {
                    resolved = false;
                    continue;
                }
                xs.push_back(static_cast<double>(qq));
                ys.push_back(*rep.median_mixing_time);
            }
            double slope = resolved ? fit_log_log(xs, ys).slope : NAN;
            bool pass = resolved && monotone && slope >= lo && slope <= hi;
            ok = ok && pass;
            os << "k=" << k << " slope " << detail::fmt(slope) << " in [" << lo << ", " << hi << "]"
               << (monotone ? "" : " (non-monotone)") << "; ";
        }
        res.passed = ok;
        res.summary = os.str();
        res.summary.resize(res.summary.size() - 2);
    });
}

// ---- 9. lattice vector counts --------------------------------------------------------------------

inline Result vector_count(const Options&) {
    return detail::timed(9, "lattice vector count", [&](Result& res) {
        auto fit = fit_claim_constant({1, 2, 3}, {1, 2, 3}, 2, 100);
        int violations = 0;
        for (int k = 1; k <= 3; ++k)
            for (int r = 1; r <= 3; ++r)
                for (std::int64_t s = 2; s <= 100; ++s)
                    if (count_vectors(k, r, s).get_d() > claim_bound(k, r, s, fit.c) * (1 + 1e-12)) ++violations;
        res.passed = fit.c <= 4.0 && violations == 0;
        res.summary = "fitted c = " + detail::fmt(fit.c, 4) + " (attained at k=" + std::to_string(fit.k) +
                      ", r=" + std::to_string(fit.r) + ", s=" + std::to_string(fit.s) + "), need c <= 4";
    });
}

// ---- 10. forward GAP bound -----------------------------------------------------------------------

inline Result forward_gap_bound(const Options& opt) {
    return detail::timed(10, "forward GAP bound", [&](Result& res) {
        Rng rng(opt.seed, "forward-gap");
        const auto z = AbelianGroup::integers();
        int violations = 0;
        for (int t = 0; t < 200; ++t) {
            const int rank = static_cast<int>(rng.uniform(0, 2));
            Gap p = rank == 0 ? Gap::symmetric_box({}, {}) : random_symmetric_gap(rng, z, rank, 35, 12);
            const std::int64_t n = rng.uniform(1, 12);
            auto rep = check_forward_example(p, n, 1, opt.seed + static_cast<std::uint64_t>(t));
            violations += static_cast<int>(rep.violations);
        }
        res.passed = violations == 0;
        res.summary = "200 (P, A) pairs with n <= 12: " + std::to_string(violations) + " violations";
    });
}

// ---- driver --------------------------------------------------------------------------------------

inline const std::vector<std::pair<std::string, std::function<Result(const Options&)>>>& suites() {
    static const std::vector<std::pair<std::string, std::function<Result(const Options&)>>> all{
        {"oracle", oracle_equivalence},       {"fourier", fourier_bounds},
        {"certificates", pipeline_certificates}, {"soundness", recovery_soundness},
        {"transfer", subset_sum_transfer},    {"classical", classical_bounds_check},
        {"erdos", erdos_grid},                {"mixing", mixing_exponent},
        {"count", vector_count},              {"forward", forward_gap_bound}};
    return all;
}

/// Runs the named suite ("all", a suite name, or its number).
inline std::vector<Result> run(const std::string& which, const Options& opt) {
    std::vector<Result> out;
    const auto& all = suites();
    for (std::size_t i = 0; i < all.size(); ++i)
        if (which == "all" || which == all[i].first || which == std::to_string(i + 1)) out.push_back(all[i].second(opt));
    if (out.empty()) throw std::invalid_argument("unknown suite: " + which);
    return out;
}

inline std::string line(const Result& r) {
    std::ostringstream os;
    os << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << ": " << r.summary << " ("
       << detail::fmt(r.seconds, 3) << " s)";
    return os.str();
}

inline Json to_json(const Result& r) {
    return Json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"summary", r.summary}, {"seconds", r.seconds}};
}

}  // namespace loforge::acceptance

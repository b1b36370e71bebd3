#pragma once

// Desk-scale harnesses: discrepancy of walks on Z/q, forward bounds for rho* and rho*_m,
// mixing of random symmetric walks, lattice-vector counting and the forward GAP bound.

#include <loforge/cover.hpp>
#include <loforge/concentration.hpp>
#include <loforge/random.hpp>
#include <loforge/transform.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace loforge {

inline double median(std::vector<double> v) {
    if (v.empty()) return NAN;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2;
}

// ---- sup probability on Z/q -------------------------------------------------------------

struct ErdosInstance {
    Rational sup_probability;
    /// sqrt(n) * sup_a P(sum a_i x_i = a)
    double statistic = 0;
};

/// Signed-walk sup probability over a finite group, scaled by sqrt(n). Rejects all-zero A.
inline ErdosInstance erdos_instance(const WeightMultiset& a) {
    if (!a.group().finite()) throw std::invalid_argument("sup-probability harness needs a finite group");
    if (a.all_zero()) throw std::invalid_argument("hypothesis violated: every a_i is zero");
    auto sup = sup_probability(a, StepLaw::signed_bernoulli()).value;
    return {sup, std::sqrt(static_cast<double>(a.size())) * sup.get_d()};
}

struct ErdosCell {
    std::int64_t q = 0, n = 0;
    std::vector<double> statistics;
    double max_statistic = 0;
    std::int64_t violations = 0;
};

struct ErdosReport {
    std::uint64_t seed = 0;
    std::int64_t trials = 0;
    double bound = 1.0;
    std::vector<ErdosCell> cells;
    bool passed() const {
        for (const auto& c : cells)
            if (c.violations) return false;
        return true;
    }
};

/// For each (q, n): trials multisets of n reduced residues mod q; flags sqrt(n) sup P > bound.
inline ErdosReport check_erdos_corollary(const std::vector<std::int64_t>& qs, const std::vector<std::int64_t>& ns,
                                         std::int64_t trials, std::uint64_t seed, double bound = 1.0) {
    ErdosReport rep{seed, trials, bound, {}};
    for (auto q : qs) {
        auto g = AbelianGroup::cyclic(q);
        auto units = reduced_elements(q);
        for (auto n : ns) {
            if (static_cast<double>(q) < 2 * std::sqrt(static_cast<double>(n)))
                throw std::invalid_argument("modulus too small for the sample size");
            Rng rng(seed, "erdos/" + std::to_string(q) + "/" + std::to_string(n));
            ErdosCell cell{q, n, {}, 0, 0};
            for (std::int64_t t = 0; t < trials; ++t) {
                std::vector<GroupElement> v;
                for (std::int64_t i = 0; i < n; ++i) v.push_back({rng.pick(units)});
                auto inst = erdos_instance(WeightMultiset::from_elements(g, v));
                cell.statistics.push_back(inst.statistic);
                cell.max_statistic = std::max(cell.max_statistic, inst.statistic);
                if (inst.statistic > bound) ++cell.violations;
            }
            rep.cells.push_back(std::move(cell));
        }
    }
    return rep;
}

struct ClassicalBounds {
    Rational rho, central, rho_star;
    /// rho <= C(n, n/2) 2^-n
    bool upper_ok = false;
    /// rho >= rho* C(n, n/2) 2^-n
    bool lower_ok = false;
};

/// Exact upper bound for nonzero A over Z and the lower bound of rho by rho*.
inline ClassicalBounds classical_bounds(const WeightMultiset& a) {
    if (!a.group().torsion_free()) throw std::invalid_argument("classical bounds are stated over Z");
    for (const auto& [x, mult] : a.items())
        if (x.code == 0) throw std::invalid_argument("hypothesis violated: zero element");
    const std::int64_t n = a.size();
    ClassicalBounds b;
    b.rho = rho_classical(a).value;
    b.central = binomial_point_mass(n, Rational(1, 2), n / 2);
    b.rho_star = rho_star_m(a, n / 2).value;
    b.upper_ok = b.rho <= b.central;
    b.lower_ok = b.rho >= b.rho_star * b.central;
    return b;
}

// ---- forward bounds for rho* and rho*_m ------------------------------------------------

enum class ForwardMode { distinct_rho_star, distinct_rho_star_m, spread_rho_star_m };

inline std::string to_string(ForwardMode m) {
    switch (m) {
    case ForwardMode::distinct_rho_star: return "distinct-rho-star";
    case ForwardMode::distinct_rho_star_m: return "distinct-rho-star-m";
    case ForwardMode::spread_rho_star_m: return "spread-rho-star-m";
    }
    return "?";
}

inline ForwardMode parse_forward_mode(std::string_view s) {
    if (s == "distinct-rho-star") return ForwardMode::distinct_rho_star;
    if (s == "distinct-rho-star-m") return ForwardMode::distinct_rho_star_m;
    if (s == "spread-rho-star-m") return ForwardMode::spread_rho_star_m;
    throw std::invalid_argument("unknown forward mode: " + std::string(s));
}

struct ForwardInstance {
    Rational value;
    /// n^{3/2} rho*, n sqrt(m) rho*_m, or sqrt(m) rho*_m
    double statistic = 0;
};

/**
 * @brief Normalised rho* statistic for one multiset.
 *
 * distinct modes reject repeated values; spread mode rejects a value repeated more than
 * (1 - eps) n times. distinct_rho_star ignores m and uses m = floor(n/2).
 */
inline ForwardInstance forward_statistic(const WeightMultiset& a, std::int64_t m, ForwardMode mode,
                                         const Rational& eps = Rational(1, 4)) {
    const std::int64_t n = a.size();
    std::int64_t top = 0;
    for (const auto& [x, mult] : a.items()) top = std::max(top, mult);
    if (mode == ForwardMode::spread_rho_star_m) {
        if (Rational(top) > (1 - eps) * n) throw std::invalid_argument("hypothesis violated: a value repeats too often");
    } else if (top > 1) {
        throw std::invalid_argument("hypothesis violated: values are not distinct");
    }
    if (mode == ForwardMode::distinct_rho_star) m = n / 2;
    auto v = rho_star_m(a, m).value;
    const double dn = static_cast<double>(n), dm = static_cast<double>(m);
    double s = mode == ForwardMode::distinct_rho_star      ? std::pow(dn, 1.5) * v.get_d()
               : mode == ForwardMode::distinct_rho_star_m ? dn * std::sqrt(dm) * v.get_d()
                                                           : std::sqrt(dm) * v.get_d();
    return {v, s};
}

struct ForwardReport {
    ForwardMode mode = ForwardMode::distinct_rho_star;
    std::int64_t n = 0, m = 0, trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> statistics;
    double max_statistic = 0, median_statistic = 0;
};

inline ForwardReport check_forward_bounds(ForwardMode mode, std::int64_t trials, std::int64_t n, std::int64_t m,
                                          std::uint64_t seed) {
    if (n < 1 || m < 0 || m > n) throw std::invalid_argument("forward bounds need 0 <= m <= n, n >= 1");
    ForwardReport rep{mode, n, mode == ForwardMode::distinct_rho_star ? n / 2 : m, trials, seed, {}, 0, 0};
    Rng rng(seed, "forward/" + to_string(mode));
    const auto z = AbelianGroup::integers();
    std::vector<std::int64_t> pool;
    for (std::int64_t x = -2 * n; x <= 2 * n; ++x) pool.push_back(x);
    for (std::int64_t t = 0; t < trials; ++t) {
        std::optional<ForwardInstance> inst;
        while (!inst) {
            std::vector<GroupElement> v;
            if (mode == ForwardMode::spread_rho_star_m) {
                for (std::int64_t i = 0; i < n; ++i) v.push_back({rng.uniform(-3, 3)});
            } else {
                for (auto x : rng.sample_without_replacement(pool, static_cast<std::size_t>(n))) v.push_back({x});
            }
            try {
                inst = forward_statistic(WeightMultiset::from_elements(z, v), m, mode);
            } catch (const std::invalid_argument&) {
                // resample until the hypothesis holds
            }
        }
        rep.statistics.push_back(inst->statistic);
    }
    rep.max_statistic = rep.statistics.empty() ? 0 : *std::max_element(rep.statistics.begin(), rep.statistics.end());
    rep.median_statistic = median(rep.statistics);
    return rep;
}

// ---- mixing of symmetric walks on Z/q ---------------------------------------------------

/**
 * @brief Walk on Z/q with steps +-a_i with probability p_i/2 each and 0 with probability 1 - sum p_i.
 *
 * With sum p_i = 1 this is the uniform step over {+-a_1^{[s_1]}, ..., +-a_k^{[s_k]}}, p_i = 2 s_i / n.
 */
struct MixingConfig {
    std::int64_t q = 101;
    int k = 2;
    /// Empty means p_i = 1/k.
    std::vector<Rational> p;
    double delta = 0.1;
    /// Empty means a geometric schedule with ratio 1.05 up to max_steps.
    std::vector<std::int64_t> schedule;
    std::int64_t max_steps = 0;
    std::uint64_t seed = 1;
    std::int64_t trials = 20;
};

struct MixingPoint {
    std::int64_t m = 0;
    /// q sup_a |P(S = a) - 1/q|
    double discrepancy = 0;
    /// sum_a |P(S = a) - 1/q| / 2
    double total_variation = 0;
};

inline std::vector<double> mixing_probabilities(const MixingConfig& cfg) {
    std::vector<double> p;
    if (cfg.p.empty()) p.assign(static_cast<std::size_t>(cfg.k), 1.0 / cfg.k);
    else
        for (const auto& x : cfg.p) p.push_back(x.get_d());
    if (static_cast<int>(p.size()) != cfg.k) throw std::invalid_argument("need one probability per generator");
    double total = 0;
    for (double x : p) {
        if (x <= 0) throw std::invalid_argument("step probabilities must be positive");
        total += x;
    }
    if (total > 1 + 1e-12) throw std::invalid_argument("step probabilities sum above 1");
    return p;
}

/// Law after m steps via characters: P(a) = q^-1 sum_zeta phi(zeta)^m e(-zeta a), phi real.
inline std::vector<double> mixing_distribution(std::int64_t q, const std::vector<std::int64_t>& gens,
                                               const std::vector<double>& p, std::int64_t m) {
    if (gens.size() != p.size()) throw std::invalid_argument("generator and probability counts differ");
    double stay = 1;
    for (double x : p) stay -= x;
    auto g = AbelianGroup::cyclic(q);
    std::vector<std::complex<double>> phi(static_cast<std::size_t>(q));
    for (std::int64_t z = 0; z < q; ++z) {
        double v = stay;
        for (std::size_t i = 0; i < gens.size(); ++i)
            v += p[i] * std::cos(2 * M_PI * static_cast<double>(mod_floor(z * gens[i], q)) / static_cast<double>(q));
        phi[static_cast<std::size_t>(z)] = std::pow(v, static_cast<double>(m));
    }
    return inverse_characteristic(g, phi);
}

inline MixingPoint mixing_point(std::int64_t q, const std::vector<std::int64_t>& gens, const std::vector<double>& p,
                                std::int64_t m) {
    auto d = mixing_distribution(q, gens, p, m);
    MixingPoint pt{m, 0, 0};
    const double u = 1.0 / static_cast<double>(q);
    for (double x : d) {
        pt.discrepancy = std::max(pt.discrepancy, std::abs(x - u));
        pt.total_variation += std::abs(x - u);
    }
    pt.discrepancy *= static_cast<double>(q);
    pt.total_variation /= 2;
    return pt;
}

inline std::vector<std::int64_t> geometric_schedule(std::int64_t max_steps, double ratio = 1.05) {
    std::vector<std::int64_t> s{0};
    double x = 1;
    while (static_cast<std::int64_t>(x) <= max_steps) {
        auto v = static_cast<std::int64_t>(std::llround(x));
        if (v > s.back()) s.push_back(v);
        x *= ratio;
    }
    if (s.back() < max_steps) s.push_back(max_steps);
    return s;
}

struct MixingTrial {
    std::vector<std::int64_t> generators;
    /// least scheduled m with total variation <= delta
    std::optional<std::int64_t> mixing_time;
    std::vector<MixingPoint> evaluated;
    bool monotone = true;
};

/// Bisects the schedule (total variation is non-increasing in m) for the mixing time.
inline MixingTrial mixing_trial(std::int64_t q, const std::vector<std::int64_t>& gens, const std::vector<double>& p,
                                double delta, const std::vector<std::int64_t>& schedule) {
    if (schedule.empty()) throw std::invalid_argument("empty schedule");
    MixingTrial tr{gens, std::nullopt, {}, true};
    auto eval = [&](std::size_t i) {
        auto pt = mixing_point(q, gens, p, schedule[i]);
        tr.evaluated.push_back(pt);
        return pt.total_variation <= delta;
    };
    std::size_t lo = 0, hi = schedule.size() - 1;
    if (!eval(hi)) {
        tr.mixing_time.reset();
    } else if (eval(lo)) {
        tr.mixing_time = schedule[lo];
    } else {
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (eval(mid)) hi = mid;
            else lo = mid;
        }
        tr.mixing_time = schedule[hi];
    }
    auto pts = tr.evaluated;
    std::sort(pts.begin(), pts.end(), [](auto& x, auto& y) { return x.m < y.m; });
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].total_variation > pts[i - 1].total_variation + 1e-12 ||
            pts[i].discrepancy > pts[i - 1].discrepancy + 1e-12)
            tr.monotone = false;
    return tr;
}

/// k residues drawn from the units mod q, pairwise distinct up to sign.
inline std::vector<std::int64_t> sample_generators(Rng& rng, std::int64_t q, int k) {
    auto units = reduced_elements(q);
    if (static_cast<std::size_t>(2 * k) > units.size()) throw std::invalid_argument("too few units for k generators");
    while (true) {
        auto gens = rng.sample_without_replacement(units, static_cast<std::size_t>(k));
        bool ok = true;
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) ok = ok && gens[i] != q - gens[j];
        if (ok) return gens;
    }
}

struct MixingReport {
    MixingConfig config;
    std::vector<MixingTrial> trials;
    /// median mixing time over trials, if more than half resolved
    std::optional<double> median_mixing_time;
    std::int64_t unresolved = 0;
    bool monotone = true;
};

inline MixingReport mixing_experiment(const MixingConfig& cfg) {
    if (cfg.q < 3) throw std::invalid_argument("mixing needs q >= 3");
    if (cfg.k < 1) throw std::invalid_argument("mixing needs k >= 1");
    auto p = mixing_probabilities(cfg);
    auto schedule = cfg.schedule;
    if (schedule.empty()) {
        std::int64_t top = cfg.max_steps > 0
                               ? cfg.max_steps
                               : static_cast<std::int64_t>(std::ceil(50.0 * std::pow(static_cast<double>(cfg.q), 2.0 / cfg.k) /
                                                                     std::min(1.0, cfg.delta)));
        schedule = geometric_schedule(top);
    }
    std::sort(schedule.begin(), schedule.end());
    MixingReport rep{cfg, {}, std::nullopt, 0, true};
    Rng rng(cfg.seed, "mix/" + std::to_string(cfg.q) + "/" + std::to_string(cfg.k));
    std::vector<double> times;
    for (std::int64_t t = 0; t < cfg.trials; ++t) {
        auto gens = sample_generators(rng, cfg.q, cfg.k);
        auto tr = mixing_trial(cfg.q, gens, p, cfg.delta, schedule);
        if (tr.mixing_time) times.push_back(static_cast<double>(*tr.mixing_time));
        else ++rep.unresolved;
        rep.monotone = rep.monotone && tr.monotone;
        rep.trials.push_back(std::move(tr));
    }
    if (2 * rep.unresolved < cfg.trials) {
        // unresolved trials count as larger than every resolved one
        std::vector<double> all = times;
        all.resize(static_cast<std::size_t>(cfg.trials), INFINITY);
        rep.median_mixing_time = median(all);
    }
    return rep;
}

struct SlopeFit {
    double slope = NAN, intercept = NAN;
};

/// Least-squares fit of log y = s log x + b.
inline SlopeFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    SlopeFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

struct ObstructionResult {
    /// no economical cover exists for any rank r <= k - 1
    bool holds = true;
    bool resolved = true;
    std::vector<double> thresholds;
    /// smallest cover size found with rank <= r, per r
    std::vector<std::optional<std::uint64_t>> best_size;
};

/**
 * @brief Whether no symmetric proper coset progression of rank r <= k-1 and size at most
 * q / (C delta m^{r/2}) contains all generators.
 */
inline ObstructionResult progression_obstruction_check(std::int64_t q, const std::vector<std::int64_t>& gens,
                                                       std::int64_t m, double delta, double c,
                                                       const CoverOptions& options = {}) {
    if (gens.empty()) throw std::invalid_argument("need at least one generator");
    if (m < 1 || delta <= 0 || c <= 0) throw std::invalid_argument("obstruction check needs m >= 1, delta > 0, C > 0");
    auto g = AbelianGroup::cyclic(q);
    std::vector<GroupElement> x{g.zero()};
    for (auto a : gens) {
        x.push_back(g.element(a));
        x.push_back(g.neg(g.element(a)));
    }
    const ElementSet xs = make_set(x);
    ObstructionResult res;
    const int k = static_cast<int>(gens.size());
    for (int r = 0; r < k; ++r) {
        double thr = static_cast<double>(q) / (c * delta * std::pow(static_cast<double>(m), r / 2.0));
        res.thresholds.push_back(thr);
        auto cov = minimal_cover(g, xs, r, true, options);
        if (cov.cover) {
            std::uint64_t size = cov.cover->volume();
            res.best_size.push_back(size);
            if (static_cast<double>(size) <= thr) res.holds = false;
        } else {
            res.best_size.push_back(std::nullopt);
        }
        if (cov.budget_exhausted) res.resolved = false;
    }
    return res;
}

// ---- lattice-vector counting ------------------------------------------------------------

/**
 * @brief Number of k-tuples x_1..x_k in Z^r with prod_j max(1, max_i |x_ij|) <= s.
 *
 * Columns are independent given their max-norms t_j: a column with norm t has
 * (2t+1)^k - (2t-1)^k choices (3^k when merged with t = 0 under max(1, t)).
 */
inline Integer count_vectors(int k, int r, std::int64_t s) {
    if (k < 1 || r < 1 || s < 1) throw std::invalid_argument("count_vectors needs k, r, s >= 1");
    if (s > 1'000'000) throw resource_error("s too large for the column recursion");
    auto pw = [](std::int64_t b, int e) {
        Integer out = 1;
        for (int i = 0; i < e; ++i) out *= b;
        return out;
    };
    const auto size = static_cast<std::size_t>(s + 1);
    std::vector<Integer> col(size, 0);
    col[1] = pw(3, k);
    for (std::int64_t t = 2; t <= s; ++t) col[static_cast<std::size_t>(t)] = pw(2 * t + 1, k) - pw(2 * t - 1, k);
    // ways[P] = tuples of processed columns with weight product exactly P
    std::vector<Integer> ways(size, 0);
    ways[1] = 1;
    for (int j = 0; j < r; ++j) {
        std::vector<Integer> next(size, 0);
        for (std::int64_t prod = 1; prod <= s; ++prod) {
            if (sgn(ways[static_cast<std::size_t>(prod)]) == 0) continue;
            for (std::int64_t t = 1; prod * t <= s; ++t)
                next[static_cast<std::size_t>(prod * t)] += ways[static_cast<std::size_t>(prod)] * col[static_cast<std::size_t>(t)];
        }
        ways = std::move(next);
    }
    Integer total = 0;
    for (auto& w : ways) total += w;
    return total;
}

/// 2^{c k r} s^k (ln s)^{r-1}.
inline double claim_bound(int k, int r, std::int64_t s, double c) {
    const double ds = static_cast<double>(s);
    return std::exp2(c * k * r) * std::pow(ds, k) * std::pow(std::log(ds), r - 1);
}

struct ClaimFit {
    /// least c with count_vectors <= claim_bound over the grid
    double c = -INFINITY;
    int k = 0, r = 0;
    std::int64_t s = 0;
};

inline ClaimFit fit_claim_constant(const std::vector<int>& ks, const std::vector<int>& rs, std::int64_t s_lo,
                                   std::int64_t s_hi) {
    if (s_lo < 2) throw std::invalid_argument("the bound vanishes at s = 1 for r >= 2; start at s = 2");
    ClaimFit fit;
    for (int k : ks)
        for (int r : rs) {
            for (std::int64_t s = s_lo; s <= s_hi; ++s) {
                double ln = log_integer(count_vectors(k, r, s));
                double base = k * std::log(static_cast<double>(s)) + (r - 1) * std::log(std::log(static_cast<double>(s)));
                double c = (ln - base) / (std::log(2.0) * k * r);
                if (c > fit.c) fit = {c, k, r, s};
            }
        }
    return fit;
}

// ---- forward GAP bound ------------------------------------------------------------------

struct ForwardExampleTrial {
    Rational rho, bound;
    bool passed = false;
};

struct ForwardExampleReport {
    std::vector<ForwardExampleTrial> trials;
    std::int64_t violations = 0;
};

/// For A drawn from a symmetric proper GAP P over Z, checks rho(A) >= 1/|nP|.
inline ForwardExampleReport check_forward_example(const Gap& p, std::int64_t n, std::int64_t trials, std::uint64_t seed) {
    const auto z = AbelianGroup::integers();
    if (!p.symmetric()) throw std::invalid_argument("forward example needs a symmetric GAP");
    if (!is_proper(z, p)) throw std::invalid_argument("forward example needs a proper GAP");
    if (n < 1 || n > 12) throw std::invalid_argument("forward example runs for 1 <= n <= 12");
    auto pts = elements(z, p);
    const Rational bound(1, static_cast<long>(elements(z, dilate(z, p, n)).size()));
    Rng rng(seed, "forward-example");
    ForwardExampleReport rep;
    for (std::int64_t t = 0; t < trials; ++t) {
        std::vector<GroupElement> v;
        for (std::int64_t i = 0; i < n; ++i) v.push_back(rng.pick(pts));
        auto rho = rho_classical(WeightMultiset::from_elements(z, v)).value;
        bool ok = rho >= bound;
        if (!ok) ++rep.violations;
        rep.trials.push_back({rho, bound, ok});
    }
    return rep;
}

/// Random symmetric proper GAP of the given rank with at most max_size elements.
inline Gap random_symmetric_gap(Rng& rng, const AbelianGroup& g, int rank, std::uint64_t max_size,
                                std::int64_t max_generator) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<GroupElement> gens;
        std::vector<std::int64_t> bounds;
        std::uint64_t vol = 1;
        for (int i = 0; i < rank; ++i) {
            std::int64_t x = rng.uniform(1, max_generator);
            gens.push_back(g.finite() ? g.element(x) : GroupElement{x});
            bounds.push_back(rng.uniform(1, 3));
            vol *= static_cast<std::uint64_t>(2 * bounds.back() + 1);
        }
        if (vol > max_size) continue;
        Gap p = Gap::symmetric_box(gens, bounds);
        if (is_proper(g, p)) return p;
    }
    throw std::runtime_error("no proper GAP found with these parameters");
}

}  // namespace loforge

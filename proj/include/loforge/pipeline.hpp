#pragma once

// Inverse pipeline: Fourier level sets, pigeonhole level, averaging split, dual sets,
// sumset containment and structure recovery, with exact certificates for every inequality.
//
// Public stage functions take a weight w and use the statistic 4 w sum_i ||a_i.zeta (+1/2)||^2.
// The modes instantiate w as: direct min(alpha, 1 - alpha); doubled alpha/4 on {2a};
// word m/n; rho* alpha(1 - alpha)/4 over F_p.

#include <loforge/cover.hpp>
#include <loforge/fourier.hpp>

#include <fftw3.h>

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace loforge {

enum class PipelineMode { abelian, abelian_direct, abelian_doubled, word, rho_star };
enum class KMode { abelian, word, rho_star };

inline std::string to_string(PipelineMode m) {
    switch (m) {
    case PipelineMode::abelian: return "abelian";
    case PipelineMode::abelian_direct: return "abelian-direct";
    case PipelineMode::abelian_doubled: return "abelian-doubled";
    case PipelineMode::word: return "word";
    case PipelineMode::rho_star: return "rho-star";
    }
    return "?";
}

inline PipelineMode parse_pipeline_mode(std::string_view s) {
    if (s == "abelian") return PipelineMode::abelian;
    if (s == "abelian-direct") return PipelineMode::abelian_direct;
    if (s == "abelian-doubled") return PipelineMode::abelian_doubled;
    if (s == "word") return PipelineMode::word;
    if (s == "rho-star") return PipelineMode::rho_star;
    throw std::invalid_argument("unknown pipeline mode: " + std::string(s));
}

struct Certificate {
    std::string name;
    bool passed = false;
    std::string lhs, rhs, detail;
};

namespace detail {

inline Integer to_mpz(__int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    Integer hi(static_cast<unsigned long>(u >> 64)), lo(static_cast<unsigned long>(u & ~std::uint64_t{0}));
    Integer out = (hi << 64) + lo;
    return neg ? Integer(-out) : out;
}

inline Integer ceil_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline std::int64_t isqrt_floor(const Rational& x) {
    if (sgn(x) <= 0) return 0;
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    Integer r;
    mpz_sqrt(r.get_mpz_t(), f.get_mpz_t());
    return to_int64(r);
}

inline std::string exp_term(std::int64_t w, std::int64_t k) {
    return std::to_string(w) + "*e^" + std::to_string(k);
}

}  // namespace detail

/**
 * @brief Levels of every character: level(zeta) = max(1, ceil(4 w stat(zeta))).
 *
 * S_l is the set of characters with level <= l. Characters masked out of the branch get level 0
 * and never enter a level set.
 */
struct LevelProfile {
    AbelianGroup group;
    Rational weight;
    bool shifted = false;
    std::vector<std::int64_t> level;
    /// sizes[l] = |S_l| for l = 0..max_level.
    std::vector<std::int64_t> sizes;

    std::int64_t max_level() const { return static_cast<std::int64_t>(sizes.size()) - 1; }
    std::int64_t size_at(std::int64_t l) const {
        if (l <= 0) return 0;
        return l >= max_level() ? sizes.back() : sizes[static_cast<std::size_t>(l)];
    }
    ElementSet set_at(std::int64_t l) const {
        ElementSet s;
        for (std::size_t z = 0; z < level.size(); ++z)
            if (level[z] >= 1 && level[z] <= l) s.push_back({static_cast<std::int64_t>(z)});
        return s;
    }
    /// Terms (|S_l|, -2(l-1)) of the level sum, l = 1..max_level.
    std::vector<std::pair<Rational, long>> level_sum_terms() const {
        std::vector<std::pair<Rational, long>> t;
        for (std::int64_t l = 1; l <= max_level(); ++l) t.emplace_back(Rational(size_at(l)), -2 * (l - 1));
        return t;
    }
    double level_sum_estimate() const {
        double acc = 0;
        for (std::int64_t l = 1; l <= max_level(); ++l)
            acc += static_cast<double>(size_at(l)) * std::exp(-2.0 * static_cast<double>(l - 1));
        return acc;
    }
};

inline LevelProfile level_profile(const WeightMultiset& b, const Rational& weight, bool shifted,
                                  const std::vector<char>* branch = nullptr) {
    const AbelianGroup& g = b.group();
    if (!g.finite()) throw std::invalid_argument("level sets need a finite group");
    if (sgn(weight) <= 0) throw std::invalid_argument("level weight must be positive");
    const auto order = static_cast<std::size_t>(g.order());
    LevelProfile p{g, weight, shifted, std::vector<std::int64_t>(order, 0), {}};
    const Integer l = g.exponent();
    const Integer den = weight.get_den() * l * l;
    std::vector<std::int64_t> count;
    for (std::size_t z = 0; z < order; ++z) {
        if (branch && !(*branch)[z]) continue;
        Integer stat = detail::to_mpz(distance_statistic(b, {static_cast<std::int64_t>(z)}, shifted));
        // 4 w stat_units / (4 L^2)
        Integer lev = detail::ceil_div(weight.get_num() * stat, den);
        std::int64_t lv = std::max<std::int64_t>(1, to_int64(lev));
        p.level[z] = lv;
        if (count.size() <= static_cast<std::size_t>(lv)) count.resize(static_cast<std::size_t>(lv) + 1, 0);
        ++count[static_cast<std::size_t>(lv)];
    }
    if (count.empty()) count.assign(2, 0);
    p.sizes.assign(count.size(), 0);
    for (std::size_t i = 1; i < count.size(); ++i) p.sizes[i] = p.sizes[i - 1] + count[i];
    return p;
}

/// Smallest l >= 1 with |S_l| e^{2-l} >= target, if any.
inline std::optional<std::int64_t> find_level(const LevelProfile& p, const Rational& target) {
    if (sgn(target) <= 0) throw std::invalid_argument("pigeonhole target must be positive");
    const std::int64_t total = p.sizes.back();
    if (total == 0) return std::nullopt;
    // beyond max_level the left side only decays
    double tail = 2.0 + std::log(static_cast<double>(total)) - log_rational(target);
    std::int64_t limit = std::max<std::int64_t>(p.max_level(), static_cast<std::int64_t>(std::ceil(tail)) + 1);
    for (std::int64_t l = 1; l <= limit; ++l)
        if (exp_scaled_geq(Rational(p.size_at(l)), static_cast<long>(2 - l), target)) return l;
    return std::nullopt;
}

/// S_l = {zeta : 4 alpha sum_i ||a_i.zeta (+1/2)||^2 <= l} by direct evaluation.
inline ElementSet level_set(const WeightMultiset& a, const Rational& alpha, std::int64_t l, bool shifted) {
    if (l < 1) throw std::invalid_argument("level must be >= 1");
    return level_profile(a, alpha, shifted).set_at(l);
}

struct LevelChoice {
    std::int64_t l0 = 0;
    ElementSet set;
};

/// Smallest l0 with |S_l0| e^{2-l0} >= rho|G| (rho|G|/2 when shifted).
inline LevelChoice find_l0(const WeightMultiset& a, const Rational& alpha, const Rational& rho, bool shifted) {
    if (sgn(rho) <= 0) throw std::invalid_argument("rho must be positive");
    auto p = level_profile(a, alpha, shifted);
    Rational target = rho * a.group().order();
    if (shifted) target /= 2;
    auto l0 = find_level(p, target);
    if (!l0) throw std::logic_error("no pigeonhole level found");
    return {*l0, p.set_at(*l0)};
}

/// sum_{zeta in S} ||x.zeta (+1/2)||^2 in units of 1/(4L^2).
inline __int128 set_statistic(const AbelianGroup& g, const ElementSet& s, GroupElement x, bool shifted) {
    const std::int64_t l = g.exponent();
    __int128 acc = 0;
    for (auto z : s) {
        __int128 d = distance_units(g.pairing_residue(z, x), l, shifted);
        acc += d * d;
    }
    return acc;
}

struct AveragingSplit {
    WeightMultiset kept, exceptional;
    /// sum_{a in A} sum_{zeta in S} ||a.zeta (+1/2)||^2, exact.
    Rational total;
};

/// A' = {a : sum_{zeta in S} ||a.zeta (+1/2)||^2 <= l0 |S| / (4 alpha n')}, multiplicities kept.
inline AveragingSplit averaging_split(const WeightMultiset& a, const ElementSet& s, const Rational& alpha,
                                      std::int64_t l0, std::int64_t n_prime, bool shifted) {
    const AbelianGroup& g = a.group();
    if (n_prime < 1 || n_prime > a.size()) throw std::invalid_argument("n' must satisfy 1 <= n' <= n");
    if (sgn(alpha) <= 0) throw std::invalid_argument("alpha must be positive");
    const Integer l = g.exponent();
    // units * alpha * n' <= l0 |S| L^2
    const Integer rhs = Integer(l0) * Integer(static_cast<long>(s.size())) * l * l * alpha.get_den();
    std::vector<std::pair<GroupElement, std::int64_t>> kept, exc;
    Integer total = 0;
    for (const auto& [x, mult] : a.items()) {
        Integer u = detail::to_mpz(set_statistic(g, s, x, shifted));
        total += u * mult;
        if (u * alpha.get_num() * n_prime <= rhs) kept.emplace_back(x, mult);
        else exc.emplace_back(x, mult);
    }
    Rational t(total, l * l * 4);
    t.canonicalize();
    return {WeightMultiset(g, kept), WeightMultiset(g, exc), t};
}

namespace detail {

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

inline std::int64_t primitive_root(std::int64_t p) {
    std::vector<std::int64_t> primes;
    std::int64_t r = p - 1;
    for (std::int64_t d = 2; d * d <= r; ++d)
        if (r % d == 0) {
            primes.push_back(d);
            while (r % d == 0) r /= d;
        }
    if (r > 1) primes.push_back(r);
    auto pw = [&](std::int64_t b, std::int64_t e) {
        std::int64_t out = 1;
        for (; e; e >>= 1, b = mulmod(b, b, p))
            if (e & 1) out = mulmod(out, b, p);
        return out;
    };
    for (std::int64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (auto q : primes) ok = ok && pw(g, (p - 1) / q) != 1;
        if (ok) return g;
    }
    return 1;
}

/// Dual set over a prime field: sum over S of ||a z / p||^2 for all a via a correlation on
/// the multiplicative group, with exact re-evaluation near the threshold.
inline ElementSet dual_set_prime(const AbelianGroup& g, const ElementSet& s, bool shifted) {
    const std::int64_t p = g.order();
    const std::int64_t m = p - 1;
    const std::int64_t root = primitive_root(p);
    std::vector<std::int64_t> power(static_cast<std::size_t>(m));
    std::int64_t cur = 1;
    for (std::int64_t i = 0; i < m; ++i, cur = mulmod(cur, root, p)) power[static_cast<std::size_t>(i)] = cur;
    std::vector<double> sv(static_cast<std::size_t>(m), 0.0), fv(static_cast<std::size_t>(m));
    std::vector<std::int64_t> index(static_cast<std::size_t>(p), -1);
    for (std::int64_t i = 0; i < m; ++i) index[static_cast<std::size_t>(power[static_cast<std::size_t>(i)])] = i;
    double zero_term = 0;
    for (auto z : s) {
        if (z.code == 0) {
            double d = static_cast<double>(distance_units(0, p, shifted));
            zero_term = d * d;
            continue;
        }
        sv[static_cast<std::size_t>(index[static_cast<std::size_t>(z.code)])] = 1.0;
    }
    for (std::int64_t i = 0; i < m; ++i) {
        double d = static_cast<double>(distance_units(power[static_cast<std::size_t>(i)], p, shifted));
        fv[static_cast<std::size_t>(i)] = d * d;
    }
    // F(i) = sum_j s(j) f(i + j) = IDFT(conj(S^) F^)
    const std::size_t nc = static_cast<std::size_t>(m / 2 + 1);
    std::vector<std::complex<double>> sh(nc), fh(nc);
    auto r2c = [&](std::vector<double>& in, std::vector<std::complex<double>>& out) {
        fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), in.data(),
                                              reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    };
    auto sv_copy = sv, fv_copy = fv;
    r2c(sv_copy, sh);
    r2c(fv_copy, fh);
    for (std::size_t i = 0; i < nc; ++i) fh[i] *= std::conj(sh[i]);
    std::vector<double> corr(static_cast<std::size_t>(m));
    fftw_plan back = fftw_plan_dft_c2r_1d(static_cast<int>(m), reinterpret_cast<fftw_complex*>(fh.data()),
                                          corr.data(), FFTW_ESTIMATE);
    fftw_execute(back);
    fftw_destroy_plan(back);
    const double size = static_cast<double>(s.size());
    const double l2 = static_cast<double>(p) * static_cast<double>(p);
    const double thr = size * 4.0 * l2 / 200.0;
    const double margin = 1e-9 * size * l2 + 1.0;
    const Integer exact_rhs = Integer(static_cast<long>(s.size())) * Integer(p) * Integer(p) * 4;
    ElementSet out;
    auto exact_member = [&](GroupElement a) {
        return detail::to_mpz(set_statistic(g, s, a, shifted)) * 200 <= exact_rhs;
    };
    // a = 0 pairs every character to 0
    if (exact_member(g.zero())) out.push_back(g.zero());
    for (std::int64_t i = 0; i < m; ++i) {
        double v = corr[static_cast<std::size_t>(i)] / static_cast<double>(m) + zero_term;
        GroupElement a{power[static_cast<std::size_t>(i)]};
        if (v < thr - margin) out.push_back(a);
        else if (v <= thr + margin && exact_member(a)) out.push_back(a);
    }
    return make_set(std::move(out));
}

}  // namespace detail

/// S* = {a : sum_{zeta in S} ||a.zeta (+1/2)||^2 <= |S|/200}.
inline ElementSet dual_set(const ElementSet& s, const AbelianGroup& g, bool shifted) {
    if (!g.finite()) throw std::invalid_argument("dual sets need a finite group");
    if (s.empty()) throw std::invalid_argument("dual set of an empty level set");
    const auto order = g.order();
    if (g.num_factors() == 1 && order > 1000 && is_prime(order) &&
        static_cast<double>(order) * static_cast<double>(s.size()) > 2e7)
        return detail::dual_set_prime(g, s, shifted);
    const Integer l = g.exponent();
    const Integer rhs = Integer(static_cast<long>(s.size())) * l * l * 4;
    ElementSet out;
    for (std::int64_t a = 0; a < order; ++a)
        if (detail::to_mpz(set_statistic(g, s, {a}, shifted)) * 200 <= rhs) out.push_back({a});
    return out;
}

/// sum_{a in G} T_a^2 with T_a = sum_{zeta in S} cos(2 pi a.zeta), in closed form (|G|/2)(|S| + |S cap -S|).
inline Rational t_square_sum(const AbelianGroup& g, const ElementSet& s) {
    std::int64_t sym = 0;
    for (auto z : s) sym += set_contains(s, g.neg(z)) ? 1 : 0;
    return Rational(g.order()) * Rational(static_cast<long>(s.size()) + sym) / 2;
}

inline double t_square_sum_numeric(const AbelianGroup& g, const ElementSet& s) {
    const double l = static_cast<double>(g.exponent());
    double acc = 0;
    for (std::int64_t a = 0; a < g.order(); ++a) {
        double t = 0;
        for (auto z : s) t += std::cos(2 * M_PI * static_cast<double>(g.pairing_residue(z, {a})) / l);
        acc += t * t;
    }
    return acc;
}

/// k = floor(sqrt(alpha n' / (c l0))) with c = 200 (abelian), 100 (word); rho* uses alpha(1-alpha)/2 and c = 200.
inline std::int64_t choose_k(const Rational& alpha, std::int64_t n_prime, std::int64_t l0, KMode mode) {
    if (sgn(alpha) <= 0 || n_prime <= 0 || l0 <= 0) throw std::invalid_argument("choose_k needs positive inputs");
    switch (mode) {
    case KMode::abelian: return detail::isqrt_floor(alpha * n_prime / (200 * l0));
    case KMode::word: return detail::isqrt_floor(alpha * n_prime / (100 * l0));
    case KMode::rho_star: {
        Rational a2 = alpha * (1 - alpha) / 2;
        return detail::isqrt_floor(a2 * n_prime / (200 * l0));
    }
    }
    return 0;
}

struct ContainmentResult {
    bool holds = true;
    std::optional<GroupElement> witness;
};

/**
 * @brief Checks {0} and lA' for l = 1..k against the dual sets.
 *
 * With a second dual set, odd multiples are checked against it and even ones against the
 * first (the shifted branch of the word walk).
 */
inline ContainmentResult sumset_containment_check(const AbelianGroup& g, const ElementSet& a_prime, std::int64_t k,
                                                  const ElementSet& dual, const ElementSet* dual_odd = nullptr) {
    if (!set_contains(dual, g.zero())) return {false, g.zero()};
    if (a_prime.empty()) return {};
    ElementSet cur{g.zero()};
    for (std::int64_t l = 1; l <= k; ++l) {
        cur = minkowski_sum(g, cur, a_prime);
        const ElementSet& target = (dual_odd && l % 2 == 1) ? *dual_odd : dual;
        for (auto x : cur)
            if (!set_contains(target, x)) return {false, x};
    }
    return {};
}

struct PipelineConfig {
    PipelineMode mode = PipelineMode::abelian;
    /// Lazy / Bernoulli parameter (abelian and rho* modes).
    Rational alpha{1, 2};
    /// Word length (word mode); 0 means m = n.
    std::int64_t m = 0;
    std::int64_t n_prime = 1;
    int max_rank = 2;
    CoverOptions cover;
};

struct RhoStarEmbedding {
    std::int64_t shift = 0;
    std::int64_t prime = 0;
    GroupElement anchor;
    Rational rho_star_m;
    std::int64_t m = 0;
};

struct PipelineReport {
    PipelineMode mode = PipelineMode::abelian;
    /// direct, doubled, G1 (shifted level sets), G2, rho-star
    std::string branch;
    Rational rho, target, weight;
    AbelianGroup fourier_group = AbelianGroup::integers();
    std::int64_t l0 = 0;
    ElementSet level_set;
    std::vector<std::int64_t> level_sizes;
    WeightMultiset a_prime, exceptional;
    std::int64_t k_formula = 0, k = 0;
    bool sub_threshold = false;
    std::vector<ElementSet> dual;
    AbelianGroup cover_group = AbelianGroup::integers();
    ElementSet cover_target;
    std::optional<CosetProgression> cover;
    std::optional<RhoStarEmbedding> embedding;
    std::vector<Certificate> certificates;
    std::string diagnostic;
    double seconds = 0;

    bool passed() const {
        for (const auto& c : certificates)
            if (!c.passed) return false;
        return true;
    }
    const Certificate* certificate(std::string_view name) const {
        for (const auto& c : certificates)
            if (c.name == name) return &c;
        return nullptr;
    }
};

namespace detail {

struct StagePlan {
    WeightMultiset steps;
    LevelProfile profile;
    Rational target;
    std::int64_t n_prime;
    KMode kmode;
    Rational k_alpha;
    /// word walk G1 branch: shifted averaging, even/odd dual split
    bool parity = false;
};

inline void add_cert(PipelineReport& r, std::string name, bool ok, std::string lhs, std::string rhs,
                     std::string detail = {}) {
    r.certificates.push_back({std::move(name), ok, std::move(lhs), std::move(rhs), std::move(detail)});
}

/// Pigeonhole level through sumset containment; fills the report and returns A' support.
inline ElementSet run_fourier_stages(PipelineReport& r, const StagePlan& plan) {
    const LevelProfile& prof = plan.profile;
    const AbelianGroup& g = prof.group;
    r.fourier_group = g;
    r.target = plan.target;
    r.weight = prof.weight;
    r.level_sizes.assign(prof.sizes.begin() + 1, prof.sizes.end());

    bool sum_ok = exp_sum_geq(prof.level_sum_terms(), plan.target);
    add_cert(r, "level_sum", sum_ok, "sum_l e^(-2(l-1))|S_l| ~ " + std::to_string(prof.level_sum_estimate()),
             to_string(plan.target));

    auto l0 = find_level(prof, plan.target);
    if (!l0) {
        add_cert(r, "pigeonhole", false, "no level", to_string(plan.target));
        throw std::logic_error("no pigeonhole level found");
    }
    r.l0 = *l0;
    r.level_set = prof.set_at(*l0);
    const auto s_size = static_cast<std::int64_t>(r.level_set.size());
    add_cert(r, "pigeonhole", true, detail::exp_term(s_size, 2 - *l0), to_string(plan.target));

    const bool avg_shifted = prof.shifted;
    auto split = averaging_split(plan.steps, r.level_set, prof.weight, *l0, plan.n_prime, avg_shifted);
    r.a_prime = split.kept;
    r.exceptional = split.exceptional;
    Rational dc_rhs = Rational(*l0 * s_size) / (4 * prof.weight);
    add_cert(r, "averaging_double_count", split.total <= dc_rhs, to_string(split.total), to_string(dc_rhs));
    add_cert(r, "exceptional_count", split.exceptional.size() <= plan.n_prime,
             std::to_string(split.exceptional.size()), std::to_string(plan.n_prime));

    r.k_formula = choose_k(plan.k_alpha, plan.n_prime, *l0, plan.kmode);
    r.sub_threshold = r.k_formula == 0;
    r.k = std::max<std::int64_t>(1, r.k_formula);

    const Rational bound = Rational(4 * g.order()) / s_size;
    r.dual.push_back(dual_set(r.level_set, g, false));
    add_cert(r, "dual_bound", Rational(static_cast<long>(r.dual[0].size())) <= bound,
             std::to_string(r.dual[0].size()), to_string(bound));
    if (plan.parity) {
        r.dual.push_back(dual_set(r.level_set, g, true));
        add_cert(r, "dual_bound_shifted", Rational(static_cast<long>(r.dual[1].size())) <= bound,
                 std::to_string(r.dual[1].size()), to_string(bound));
    }
    Rational tsq = t_square_sum(g, r.level_set);
    Rational tsq_rhs = Rational(g.order() * s_size);
    std::string tsq_detail;
    bool tsq_ok = tsq <= tsq_rhs;
    if (static_cast<double>(g.order()) * static_cast<double>(s_size) <= 4e6) {
        double num = t_square_sum_numeric(g, r.level_set);
        tsq_detail = "numeric " + std::to_string(num);
        tsq_ok = tsq_ok && std::abs(num - tsq.get_d()) <= 1e-6 * std::max(1.0, tsq.get_d());
    }
    add_cert(r, "t_square_sum", tsq_ok, to_string(tsq), to_string(tsq_rhs), tsq_detail);

    ElementSet support = split.kept.support();
    auto cont = sumset_containment_check(g, support, r.k_formula, r.dual[0], plan.parity ? &r.dual[1] : nullptr);
    add_cert(r, "sumset_containment", cont.holds, "l <= " + std::to_string(r.k_formula),
             cont.holds ? "contained" : "escapes",
             cont.witness ? "witness " + g.format(*cont.witness) : std::string{});
    return support;
}

/// Cover of X (k = 1) or of kX divided by k; X contains 0.
inline void run_cover_stage(PipelineReport& r, const AbelianGroup& g, const ElementSet& x, int max_rank,
                            const CoverOptions& options) {
    r.cover_group = g;
    r.cover_target = x;
    try {
        if (r.k == 1) {
            auto res = minimal_cover(g, x, max_rank, true, options);
            r.cover = res.cover;
            if (!res.cover) r.diagnostic = res.diagnostic.empty() ? "cover search exhausted" : res.diagnostic;
        } else {
            CoverOptions opt = options;
            opt.t_proper = std::max<std::int64_t>(2, opt.t_proper);
            auto kx = iterated_sumset(g, x, r.k);
            auto res = minimal_cover(g, kx, max_rank, true, opt);
            if (res.cover) r.cover = divide_progression(g, *res.cover, r.k, x);
            else r.diagnostic = res.diagnostic.empty() ? "cover search exhausted" : res.diagnostic;
        }
    } catch (const divide_error& e) {
        r.diagnostic = std::string("division failed: ") + e.what();
    } catch (const resource_error& e) {
        r.diagnostic = std::string("cover search: ") + e.what();
    }
    if (r.cover) {
        bool proper = is_proper(g, *r.cover);
        bool rank_ok = static_cast<int>(r.cover->rank()) <= max_rank;
        bool inside = contains(g, *r.cover, x);
        add_cert(r, "cover_soundness", proper && rank_ok && inside,
                 "rank " + std::to_string(r.cover->rank()) + ", size " + std::to_string(r.cover->volume()),
                 "rank <= " + std::to_string(max_rank),
                 std::string(proper ? "proper" : "not proper") + (inside ? ", contains target" : ", misses target"));
    }
}

inline ElementSet with_zero(const AbelianGroup& g, ElementSet s) {
    s.push_back(g.zero());
    return make_set(std::move(s));
}

inline void require_pipeline_input(const WeightMultiset& a, const PipelineConfig& cfg) {
    if (a.size() == 0) throw std::invalid_argument("pipeline needs a nonempty multiset");
    if (cfg.n_prime < 1 || cfg.n_prime > a.size()) throw std::invalid_argument("n' must satisfy 1 <= n' <= n");
    if (cfg.max_rank < 0) throw std::invalid_argument("max_rank must be >= 0");
}

inline PipelineReport recover_abelian(const WeightMultiset& a, const PipelineConfig& cfg, bool doubled) {
    const AbelianGroup& g = a.group();
    if (!g.finite()) throw std::invalid_argument("abelian mode needs a finite group");
    const Rational& alpha = cfg.alpha;
    if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must lie in [0,1]");
    Rational w = doubled ? Rational(alpha / 4) : std::min(alpha, Rational(1 - alpha));
    if (sgn(w) <= 0) throw std::invalid_argument("level weight vanishes for this alpha");
    PipelineReport r;
    r.mode = doubled ? PipelineMode::abelian_doubled : PipelineMode::abelian_direct;
    r.branch = doubled ? "doubled" : "direct";
    r.rho = rho_xi(a, alpha).value;
    if (sgn(r.rho) <= 0) throw std::invalid_argument("rho vanishes: the walk is exactly uniform");
    WeightMultiset steps = a;
    if (doubled) {
        std::vector<std::pair<GroupElement, std::int64_t>> items;
        for (const auto& [x, mult] : a.items()) items.emplace_back(g.scale(x, 2), mult);
        steps = WeightMultiset(g, items);
    }
    StagePlan plan{steps, level_profile(steps, w, false), r.rho * g.order(), cfg.n_prime, KMode::abelian, w};
    auto support = run_fourier_stages(r, plan);
    run_cover_stage(r, g, with_zero(g, support), cfg.max_rank, cfg.cover);
    return r;
}

inline PipelineReport recover_word(const WeightMultiset& a, const PipelineConfig& cfg) {
    const AbelianGroup& g = a.group();
    if (!g.finite()) throw std::invalid_argument("word mode needs a finite group");
    if (!a.symmetric()) throw std::invalid_argument("word mode needs a symmetric multiset");
    const std::int64_t m = cfg.m == 0 ? a.size() : cfg.m;
    if (m < 1) throw std::invalid_argument("word length must be >= 1");
    PipelineReport r;
    r.mode = PipelineMode::word;
    r.rho = rho_m(a, m).value;
    if (sgn(r.rho) <= 0) throw std::invalid_argument("rho vanishes: the walk is exactly uniform");
    const auto order = static_cast<std::size_t>(g.order());
    std::vector<char> g1(order), g2(order);
    for (std::size_t z = 0; z < order; ++z) {
        auto u = distance_statistic(a, {static_cast<std::int64_t>(z)}, false);
        auto v = distance_statistic(a, {static_cast<std::int64_t>(z)}, true);
        g1[z] = u >= v;
        g2[z] = u < v;
    }
    const Rational w = make_rational(m, a.size());
    const Rational target = r.rho * g.order() / 2;
    auto p1 = level_profile(a, w, true, &g1);
    auto p2 = level_profile(a, w, false, &g2);
    bool use1 = p1.level_sum_estimate() > p2.level_sum_estimate();
    if (!find_level(use1 ? p1 : p2, target)) use1 = !use1;
    r.branch = use1 ? "G1" : "G2";
    StagePlan plan{a, use1 ? p1 : p2, target, cfg.n_prime, KMode::word, w, use1};
    auto support = run_fourier_stages(r, plan);
    run_cover_stage(r, g, with_zero(g, support), cfg.max_rank, cfg.cover);
    return r;
}

inline PipelineReport recover_rho_star(const WeightMultiset& a, const PipelineConfig& cfg) {
    const AbelianGroup z = AbelianGroup::integers();
    if (!a.group().torsion_free()) throw std::invalid_argument("rho* mode works over Z");
    const Rational& alpha = cfg.alpha;
    if (alpha <= 0 || alpha >= 1) throw std::invalid_argument("rho* mode needs 0 < alpha < 1");
    const std::int64_t n = a.size();
    std::int64_t maxabs = 1;
    for (const auto& [x, mult] : a.items()) maxabs = std::max(maxabs, std::abs(x.code));
    const std::int64_t shift = 4 * n * maxabs;
    std::vector<std::pair<GroupElement, std::int64_t>> moved;
    std::int64_t lo = INT64_MAX, hi = 0;
    for (const auto& [x, mult] : a.items()) {
        moved.emplace_back(GroupElement{x.code + shift}, mult);
        lo = std::min(lo, x.code + shift);
        hi = std::max(hi, x.code + shift);
    }
    WeightMultiset a_shift(z, moved);
    const Rational alpha2 = alpha * (1 - alpha) / 2;
    const std::int64_t k_upper = detail::isqrt_floor(alpha2 * cfg.n_prime / 200);
    const std::int64_t p =
        next_prime_above(std::max(n * hi, 2 * (2 * std::max<std::int64_t>(1, k_upper) + 1) * hi));
    const AbelianGroup fp = AbelianGroup::cyclic(p);

    PipelineReport r;
    r.mode = PipelineMode::rho_star;
    r.branch = "rho-star";
    RhoStarEmbedding emb;
    emb.shift = shift;
    emb.prime = p;
    emb.m = static_cast<std::int64_t>(mpz_class(alpha * n).get_si());
    r.rho = sup_probability(a_shift, StepLaw::bernoulli01(alpha)).value;

    add_cert(r, "embedding_wrap_free", n * hi < p, std::to_string(n) + "*" + std::to_string(hi), std::to_string(p));
    emb.rho_star_m = rho_star_m(a, emb.m).value;
    Rational shifted_rs = rho_star_m(a_shift, emb.m).value;
    add_cert(r, "translation_invariance", shifted_rs == emb.rho_star_m, to_string(shifted_rs),
             to_string(emb.rho_star_m), "m = " + std::to_string(emb.m));
    for (std::int64_t mm : {emb.m, emb.m + 1}) {
        if (mm > n) continue;
        Rational rhs = rho_star_m(a, mm).value * binomial_point_mass(n, alpha, mm);
        add_cert(r, "subset_sum_transfer", r.rho >= rhs, to_string(r.rho), to_string(rhs),
                 "m = " + std::to_string(mm));
    }

    std::vector<std::pair<GroupElement, std::int64_t>> residues;
    for (const auto& [x, mult] : moved) residues.emplace_back(GroupElement{x.code % p}, mult);
    WeightMultiset steps(fp, residues);
    StagePlan plan{steps, level_profile(steps, alpha2 / 2, false), r.rho * p, cfg.n_prime, KMode::rho_star, alpha};
    run_fourier_stages(r, plan);

    // back to Z: residues are the shifted values themselves
    std::vector<std::pair<GroupElement, std::int64_t>> kept, exc;
    for (const auto& [x, mult] : r.a_prime.items()) kept.emplace_back(GroupElement{x.code - shift}, mult);
    for (const auto& [x, mult] : r.exceptional.items()) exc.emplace_back(GroupElement{x.code - shift}, mult);
    r.a_prime = WeightMultiset(z, kept);
    r.exceptional = WeightMultiset(z, exc);

    ElementSet b1{z.zero()};
    if (!kept.empty()) {
        std::int64_t k_lo = kept.front().first.code + shift, k_hi = kept.back().first.code + shift;
        const std::int64_t reach = 2 * r.k;
        bool disjoint = reach * k_hi < p;
        for (std::int64_t l = 1; l < reach; ++l) disjoint = disjoint && l * k_hi < (l + 1) * k_lo;
        add_cert(r, "translated_sums_disjoint", disjoint, "l*[" + std::to_string(k_lo) + "," + std::to_string(k_hi) + "]",
                 "l <= " + std::to_string(reach) + ", p = " + std::to_string(p));
        emb.anchor = kept.front().first;
        for (const auto& [x, mult] : kept) b1.push_back({x.code - emb.anchor.code});
        b1 = make_set(std::move(b1));
    }
    r.embedding = emb;
    run_cover_stage(r, z, b1, cfg.max_rank, cfg.cover);
    return r;
}

}  // namespace detail

/**
 * @brief Runs the inverse pipeline on A and returns every intermediate object and certificate.
 *
 * abelian picks the direct or doubled branch by the larger level weight (doubled iff
 * alpha > 4/5). In rho* mode A lives in Z, the Fourier stages run over F_p after the shift
 * by N, and the cover is of B_1 = A_1 - a_1 over Z.
 */
inline PipelineReport recover_structure(const WeightMultiset& a, const PipelineConfig& cfg) {
    detail::require_pipeline_input(a, cfg);
    auto start = std::chrono::steady_clock::now();
    PipelineReport r;
    switch (cfg.mode) {
    case PipelineMode::abelian: r = detail::recover_abelian(a, cfg, cfg.alpha > Rational(4, 5)); break;
    case PipelineMode::abelian_direct: r = detail::recover_abelian(a, cfg, false); break;
    case PipelineMode::abelian_doubled: r = detail::recover_abelian(a, cfg, true); break;
    case PipelineMode::word: r = detail::recover_word(a, cfg); break;
    case PipelineMode::rho_star: r = detail::recover_rho_star(a, cfg); break;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace loforge

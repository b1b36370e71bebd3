#pragma once

#include <loforge/group.hpp>
#include <loforge/rational.hpp>
#include <loforge/transform.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace loforge {

/// Largest Z window (number of integer positions) a walk may occupy.
inline constexpr std::int64_t window_cap = 20'000'000;

/**
 * @brief A multiset of group elements with positive multiplicities.
 */
class WeightMultiset {
public:
    WeightMultiset() : group_(AbelianGroup::integers()) {}

    WeightMultiset(AbelianGroup g, const std::vector<std::pair<GroupElement, std::int64_t>>& items)
        : group_(std::move(g)) {
        std::map<GroupElement, std::int64_t> merged;
        for (const auto& [x, mult] : items) {
            if (!group_.contains(x)) throw std::invalid_argument("multiset element outside the group");
            if (mult <= 0) throw std::invalid_argument("multiplicities must be positive");
            merged[x] += mult;
        }
        for (const auto& [x, mult] : merged) {
            items_.emplace_back(x, mult);
            size_ += mult;
        }
    }

    static WeightMultiset from_elements(AbelianGroup g, const std::vector<GroupElement>& xs) {
        std::vector<std::pair<GroupElement, std::int64_t>> items;
        for (auto x : xs) items.emplace_back(x, 1);
        return WeightMultiset(std::move(g), items);
    }

    const AbelianGroup& group() const { return group_; }
    /// Distinct elements in canonical order with their multiplicities.
    const std::vector<std::pair<GroupElement, std::int64_t>>& items() const { return items_; }
    std::int64_t size() const { return size_; }

    std::vector<GroupElement> expanded() const {
        std::vector<GroupElement> out;
        for (const auto& [x, mult] : items_)
            for (std::int64_t i = 0; i < mult; ++i) out.push_back(x);
        return out;
    }

    ElementSet support() const {
        ElementSet s;
        for (const auto& [x, mult] : items_) s.push_back(x);
        return s;
    }

    std::int64_t multiplicity(GroupElement x) const {
        auto it = std::lower_bound(items_.begin(), items_.end(), std::make_pair(x, std::int64_t{0}),
                                   [](auto& a, auto& b) { return a.first < b.first; });
        return (it != items_.end() && it->first == x) ? it->second : 0;
    }

    /// mult(a) == mult(-a) for every a.
    bool symmetric() const {
        for (const auto& [x, mult] : items_)
            if (multiplicity(group_.neg(x)) != mult) return false;
        return true;
    }

    bool all_zero() const {
        for (const auto& [x, mult] : items_)
            if (x.code != 0) return false;
        return true;
    }

private:
    AbelianGroup group_;
    std::vector<std::pair<GroupElement, std::int64_t>> items_;
    std::int64_t size_ = 0;
};

enum class LawKind { lazy, bernoulli01, signed_bernoulli };

/**
 * @brief Law of the coefficients x_i of the walk sum x_i a_i.
 *
 * lazy(alpha): +-1 with probability alpha/2 each, 0 otherwise. bernoulli01(alpha): 1 with
 * probability alpha. signed_bernoulli: +-1 with probability 1/2 (lazy with alpha = 1).
 */
struct StepLaw {
    LawKind kind = LawKind::signed_bernoulli;
    Rational alpha = 1;

    static StepLaw lazy(Rational a) { return {LawKind::lazy, std::move(a)}; }
    static StepLaw bernoulli01(Rational a) { return {LawKind::bernoulli01, std::move(a)}; }
    static StepLaw signed_bernoulli() { return {LawKind::signed_bernoulli, Rational(1)}; }

    void validate() const {
        if (alpha < 0 || alpha > 1) throw std::invalid_argument("law parameter alpha must lie in [0,1]");
    }

    /// (coefficient, probability) pairs with positive probability.
    std::vector<std::pair<std::int64_t, Rational>> support() const {
        validate();
        std::vector<std::pair<std::int64_t, Rational>> s;
        auto push = [&](std::int64_t x, const Rational& p) {
            if (sgn(p) > 0) s.emplace_back(x, p);
        };
        switch (kind) {
            case LawKind::lazy:
                push(-1, alpha / 2);
                push(0, 1 - alpha);
                push(1, alpha / 2);
                break;
            case LawKind::bernoulli01:
                push(0, 1 - alpha);
                push(1, alpha);
                break;
            case LawKind::signed_bernoulli:
                push(-1, Rational(1, 2));
                push(1, Rational(1, 2));
                break;
        }
        return s;
    }
};

/**
 * @brief A probability vector on a finite group (indexed by code) or on a Z window.
 */
template <class S>
struct Distribution {
    AbelianGroup group;
    /// Z only: mass[i] is the probability of offset + i.
    std::int64_t offset = 0;
    std::vector<S> mass;

    GroupElement element_at(std::size_t i) const { return {offset + static_cast<std::int64_t>(i)}; }

    S probability(GroupElement x) const {
        std::int64_t i = x.code - offset;
        if (i < 0 || i >= static_cast<std::int64_t>(mass.size())) return S(0);
        return mass[static_cast<std::size_t>(i)];
    }
};

namespace detail {

inline void addmul(Integer& acc, const Integer& a, const Integer& w) {
    mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), w.get_mpz_t());
}
inline void addmul(std::uint64_t& acc, std::uint64_t a, std::uint64_t w) { acc += a * w; }
inline void addmul(double& acc, double a, double w) { acc += a * w; }
inline bool is_zero(const Integer& a) { return sgn(a) == 0; }
inline bool is_zero(std::uint64_t a) { return a == 0; }
inline bool is_zero(double a) { return a == 0.0; }

/// Window [lo, hi] of Z reached by sums of per-step offsets drawn from the given supports.
inline std::pair<std::int64_t, std::int64_t> z_window(const std::vector<std::pair<std::int64_t, std::int64_t>>& step_ranges) {
    __int128 lo = 0, hi = 0;
    for (const auto& [a, b] : step_ranges) {
        lo += a;
        hi += b;
    }
    if (hi - lo + 1 > window_cap) throw resource_error("walk window exceeds the cap");
    return {static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)};
}

/// Counts of sum_i x_i a_i, each x drawn with integer weight w_x.
template <class C>
Distribution<C> weighted_walk(const WeightMultiset& a, const std::vector<std::pair<std::int64_t, C>>& steps) {
    const AbelianGroup& g = a.group();
    Distribution<C> d{g, 0, {}};
    std::int64_t xmin = steps.front().first, xmax = steps.front().first;
    for (const auto& [x, w] : steps) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    const auto elems = a.expanded();
    if (g.finite()) {
        const auto n = static_cast<std::size_t>(g.order());
        std::vector<C> cur(n, C(0)), next(n, C(0));
        cur[0] = C(1);
        for (auto e : elems) {
            std::fill(next.begin(), next.end(), C(0));
            for (const auto& [x, w] : steps) {
                GroupElement shift = g.scale(e, x);
                for (std::size_t i = 0; i < n; ++i) {
                    if (is_zero(cur[i])) continue;
                    auto j = static_cast<std::size_t>(g.add({static_cast<std::int64_t>(i)}, shift).code);
                    addmul(next[j], cur[i], w);
                }
            }
            std::swap(cur, next);
        }
        d.mass = std::move(cur);
        return d;
    }
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges, padded;
    for (auto e : elems) {
        std::int64_t u = xmin * e.code, v = xmax * e.code;
        ranges.emplace_back(std::min(u, v), std::max(u, v));
        // a step range need not contain 0, so the working window covers every partial sum
        padded.emplace_back(std::min<std::int64_t>(ranges.back().first, 0), std::max<std::int64_t>(ranges.back().second, 0));
    }
    z_window(ranges);
    auto [lo, hi] = z_window(padded);
    const auto width = static_cast<std::size_t>(hi - lo + 1);
    std::vector<C> cur(width, C(0)), next(width, C(0));
    std::int64_t clo = 0, chi = 0;
    cur[static_cast<std::size_t>(-lo)] = C(1);
    for (std::size_t s = 0; s < elems.size(); ++s) {
        std::fill(next.begin(), next.end(), C(0));
        for (const auto& [x, w] : steps) {
            std::int64_t shift = x * elems[s].code;
            for (std::int64_t v = clo; v <= chi; ++v) {
                const auto& c = cur[static_cast<std::size_t>(v - lo)];
                if (is_zero(c)) continue;
                addmul(next[static_cast<std::size_t>(v + shift - lo)], c, w);
            }
        }
        clo += ranges[s].first;
        chi += ranges[s].second;
        std::swap(cur, next);
    }
    d.offset = clo;
    d.mass.assign(cur.begin() + (clo - lo), cur.begin() + (chi - lo + 1));
    return d;
}

/// Full convolution of two count vectors in the group ring.
template <class C>
Distribution<C> convolve(const Distribution<C>& x, const Distribution<C>& y) {
    const AbelianGroup& g = x.group;
    Distribution<C> out{g, 0, {}};
    if (g.finite()) {
        out.mass.assign(x.mass.size(), C(0));
        for (std::size_t i = 0; i < x.mass.size(); ++i) {
            if (is_zero(x.mass[i])) continue;
            for (std::size_t j = 0; j < y.mass.size(); ++j) {
                if (is_zero(y.mass[j])) continue;
                auto k = static_cast<std::size_t>(
                    g.add({static_cast<std::int64_t>(i)}, {static_cast<std::int64_t>(j)}).code);
                addmul(out.mass[k], x.mass[i], y.mass[j]);
            }
        }
        return out;
    }
    out.offset = x.offset + y.offset;
    if (x.mass.size() + y.mass.size() > static_cast<std::size_t>(window_cap)) throw resource_error("walk window exceeds the cap");
    out.mass.assign(x.mass.size() + y.mass.size() - 1, C(0));
    for (std::size_t i = 0; i < x.mass.size(); ++i) {
        if (is_zero(x.mass[i])) continue;
        for (std::size_t j = 0; j < y.mass.size(); ++j)
            if (!is_zero(y.mass[j])) addmul(out.mass[i + j], x.mass[i], y.mass[j]);
    }
    return out;
}

template <class C>
Distribution<C> unit_mass(const AbelianGroup& g) {
    Distribution<C> d{g, 0, {}};
    if (g.finite())
        d.mass.assign(static_cast<std::size_t>(g.order()), C(0));
    else
        d.mass.assign(1, C(0));
    d.mass[0] = C(1);
    return d;
}

/// Step counts of one uniform draw from A (multiplicities as weights).
template <class C>
Distribution<C> word_step(const WeightMultiset& a) {
    const AbelianGroup& g = a.group();
    Distribution<C> d{g, 0, {}};
    if (g.finite()) {
        d.mass.assign(static_cast<std::size_t>(g.order()), C(0));
        for (const auto& [x, mult] : a.items()) d.mass[static_cast<std::size_t>(x.code)] += C(mult);
        return d;
    }
    std::int64_t lo = a.items().front().first.code, hi = a.items().back().first.code;
    d.offset = lo;
    d.mass.assign(static_cast<std::size_t>(hi - lo + 1), C(0));
    for (const auto& [x, mult] : a.items()) d.mass[static_cast<std::size_t>(x.code - lo)] += C(mult);
    return d;
}

template <class C>
Distribution<C> power(const Distribution<C>& step, std::int64_t m) {
    Distribution<C> result = unit_mass<C>(step.group);
    Distribution<C> base = step;
    while (m > 0) {
        if (m & 1) result = convolve(result, base);
        m >>= 1;
        if (m > 0) base = convolve(base, base);
    }
    return result;
}

template <class C>
Distribution<Rational> normalise(const Distribution<C>& counts, const Integer& denominator) {
    Distribution<Rational> d{counts.group, counts.offset, {}};
    d.mass.reserve(counts.mass.size());
    for (const auto& c : counts.mass) {
        Rational r{Integer(c), denominator};
        r.canonicalize();
        d.mass.push_back(std::move(r));
    }
    return d;
}

inline Integer to_integer(std::uint64_t v) {
    Integer z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return z;
}

inline Distribution<Rational> normalise(const Distribution<std::uint64_t>& counts, const Integer& denominator) {
    Distribution<Rational> d{counts.group, counts.offset, {}};
    d.mass.reserve(counts.mass.size());
    for (auto c : counts.mass) {
        Rational r{to_integer(c), denominator};
        r.canonicalize();
        d.mass.push_back(std::move(r));
    }
    return d;
}

}  // namespace detail

/// Exact law of sum_i x_i a_i with i.i.d. x_i drawn from the step law.
inline Distribution<Rational> walk_distribution(const WeightMultiset& a, const StepLaw& law) {
    auto sup = law.support();
    Integer den = 1;
    for (const auto& [x, p] : sup) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), p.get_den_mpz_t());
    Integer total;
    mpz_pow_ui(total.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(a.size()));
    // Counts are bounded by den^n; machine words suffice when that fits.
    if (mpz_sizeinbase(total.get_mpz_t(), 2) <= 63) {
        std::vector<std::pair<std::int64_t, std::uint64_t>> steps;
        for (const auto& [x, p] : sup) steps.emplace_back(x, Integer(p * den).get_ui());
        return detail::normalise(detail::weighted_walk<std::uint64_t>(a, steps), total);
    }
    std::vector<std::pair<std::int64_t, Integer>> steps;
    for (const auto& [x, p] : sup) steps.emplace_back(x, Integer(p * den));
    return detail::normalise(detail::weighted_walk<Integer>(a, steps), total);
}

/// Floating-point law of the walk; finite groups go through the character transform.
inline Distribution<double> walk_distribution_double(const WeightMultiset& a, const StepLaw& law) {
    const AbelianGroup& g = a.group();
    auto sup = law.support();
    if (g.finite()) {
        const auto n = static_cast<std::size_t>(g.order());
        std::vector<std::complex<double>> phi(n, 1.0);
        for (std::size_t z = 0; z < n; ++z) {
            for (const auto& [x, mult] : a.items()) {
                double theta = static_cast<double>(g.pairing_residue({static_cast<std::int64_t>(z)}, x)) /
                               static_cast<double>(g.exponent());
                std::complex<double> f = 0;
                for (const auto& [c, p] : sup) f += p.get_d() * std::polar(1.0, 2 * M_PI * theta * static_cast<double>(c));
                phi[z] *= std::pow(f, static_cast<double>(mult));
            }
        }
        return Distribution<double>{g, 0, inverse_characteristic(g, phi)};
    }
    std::vector<std::pair<std::int64_t, double>> steps;
    for (const auto& [x, p] : sup) steps.emplace_back(x, p.get_d());
    return detail::weighted_walk<double>(a, steps);
}

/// Exact law of a_{j_1} + ... + a_{j_m} with j_t uniform on [n] (a word of length m).
inline Distribution<Rational> word_walk_distribution(const WeightMultiset& a, std::int64_t m) {
    if (a.size() == 0) throw std::invalid_argument("word walk needs a non-empty multiset");
    if (m < 0) throw std::invalid_argument("word length must be >= 0");
    auto counts = detail::power(detail::word_step<Integer>(a), m);
    Integer total;
    mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(a.size()), static_cast<unsigned long>(m));
    return detail::normalise(counts, total);
}

inline Distribution<double> word_walk_distribution_double(const WeightMultiset& a, std::int64_t m) {
    if (a.size() == 0) throw std::invalid_argument("word walk needs a non-empty multiset");
    if (m < 0) throw std::invalid_argument("word length must be >= 0");
    const AbelianGroup& g = a.group();
    if (g.finite()) {
        const auto n = static_cast<std::size_t>(g.order());
        std::vector<std::complex<double>> step(n, 0.0);
        for (const auto& [x, mult] : a.items())
            step[static_cast<std::size_t>(x.code)] += static_cast<double>(mult) / static_cast<double>(a.size());
        auto phi = character_transform(g, step, +1);
        for (auto& v : phi) v = std::pow(v, static_cast<double>(m));
        return Distribution<double>{g, 0, inverse_characteristic(g, phi)};
    }
    auto step = detail::word_step<double>(a);
    for (auto& v : step.mass) v /= static_cast<double>(a.size());
    return detail::power(step, m);
}

/// A functional value with the smallest element attaining it.
struct FunctionalResult {
    Rational value;
    GroupElement witness;
};

template <class S>
FunctionalResult max_mass(const Distribution<S>& d) {
    FunctionalResult r{Rational(-1), {}};
    for (std::size_t i = 0; i < d.mass.size(); ++i)
        if (d.mass[i] > r.value) {
            r.value = d.mass[i];
            r.witness = d.element_at(i);
        }
    return r;
}

/// sup_a |P(S = a) - 1/|G|| on a finite group.
inline FunctionalResult max_discrepancy(const Distribution<Rational>& d) {
    Rational u(1, d.group.order());
    FunctionalResult r{Rational(-1), {}};
    for (std::size_t i = 0; i < d.mass.size(); ++i) {
        Rational dev = abs(d.mass[i] - u);
        if (dev > r.value) {
            r.value = dev;
            r.witness = d.element_at(i);
        }
    }
    return r;
}

inline void require_integers(const WeightMultiset& a, const char* what) {
    if (!a.group().torsion_free()) throw std::invalid_argument(std::string(what) + " is defined over Z");
}

inline void require_finite(const WeightMultiset& a, const char* what) {
    if (!a.group().finite()) throw std::invalid_argument(std::string(what) + " needs a finite group");
}

/// Largest point probability of the walk under any law.
inline FunctionalResult sup_probability(const WeightMultiset& a, const StepLaw& law) {
    return max_mass(walk_distribution(a, law));
}

/// rho(A) = sup_a P(sum eps_i a_i = a) for signed coefficients, A over Z.
inline FunctionalResult rho_classical(const WeightMultiset& a) {
    require_integers(a, "rho");
    return sup_probability(a, StepLaw::signed_bernoulli());
}

/// rho_xi(A) = sup_a |P(S = a) - 1/|G|| for the lazy law with parameter alpha.
inline FunctionalResult rho_xi(const WeightMultiset& a, const Rational& alpha) {
    require_finite(a, "rho_xi");
    return max_discrepancy(walk_distribution(a, StepLaw::lazy(alpha)));
}

namespace detail {

template <class C>
FunctionalResult rho_star_counts(const WeightMultiset& a, std::int64_t m, const Integer& subsets) {
    const AbelianGroup& g = a.group();
    const auto elems = a.expanded();
    const auto n = static_cast<std::int64_t>(elems.size());
    std::int64_t lo = 0, width;
    if (g.finite()) {
        width = g.order();
    } else {
        // every partial subset sum lies between the sum of negatives and the sum of positives
        __int128 plo = 0, phi = 0;
        for (auto e : elems) {
            if (e.code < 0) plo += e.code;
            else phi += e.code;
        }
        if (phi - plo + 1 > window_cap) throw resource_error("subset-sum window exceeds the cap");
        lo = static_cast<std::int64_t>(plo);
        width = static_cast<std::int64_t>(phi - plo + 1);
    }
    const auto w = static_cast<std::size_t>(width);
    std::vector<std::vector<C>> cnt(static_cast<std::size_t>(m + 1), std::vector<C>(w, C(0)));
    auto pos = [&](GroupElement x) { return static_cast<std::size_t>(x.code - lo); };
    cnt[0][pos(g.zero())] = C(1);
    for (std::int64_t i = 0; i < n; ++i) {
        GroupElement e = elems[static_cast<std::size_t>(i)];
        for (std::int64_t c = std::min(i + 1, m); c >= 1; --c) {
            auto& from = cnt[static_cast<std::size_t>(c - 1)];
            auto& to = cnt[static_cast<std::size_t>(c)];
            for (std::size_t p = 0; p < w; ++p) {
                if (is_zero(from[p])) continue;
                GroupElement s = g.add({static_cast<std::int64_t>(p) + lo}, e);
                to[pos(s)] += from[p];
            }
        }
    }
    const auto& last = cnt[static_cast<std::size_t>(m)];
    std::size_t best = 0;
    for (std::size_t p = 1; p < w; ++p)
        if (last[p] > last[best]) best = p;
    Rational value{Integer(last[best]), subsets};
    value.canonicalize();
    return {value, GroupElement{static_cast<std::int64_t>(best) + lo}};
}

}  // namespace detail

/// rho*_m(A) = sup_a |{I in C([n], m) : sum_{i in I} a_i = a}| / C(n, m).
inline FunctionalResult rho_star_m(const WeightMultiset& a, std::int64_t m) {
    const std::int64_t n = a.size();
    if (m < 0 || m > n) throw std::invalid_argument("rho*_m needs 0 <= m <= n");
    Integer subsets = binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(m));
    if (n <= 62) return detail::rho_star_counts<std::uint64_t>(a, m, subsets);
    return detail::rho_star_counts<Integer>(a, m, subsets);
}

/// rho_m(A): largest point mass (Z) or largest discrepancy (finite G) of the length-m word walk.
inline FunctionalResult rho_m(const WeightMultiset& a, std::int64_t m) {
    if (!a.symmetric()) throw std::invalid_argument("rho_m needs a symmetric multiset");
    auto d = word_walk_distribution(a, m);
    if (a.group().torsion_free()) return max_mass(d);
    return max_discrepancy(d);
}

/// C(n, m) alpha^m (1 - alpha)^(n - m).
inline Rational binomial_point_mass(std::int64_t n, const Rational& alpha, std::int64_t m) {
    if (m < 0 || m > n) throw std::invalid_argument("binomial point mass needs 0 <= m <= n");
    if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must lie in [0,1]");
    Rational r = Rational(binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(m)));
    r *= rational_pow(alpha, static_cast<unsigned long>(m));
    r *= rational_pow(Rational(1 - alpha), static_cast<unsigned long>(n - m));
    return r;
}

}  // namespace loforge

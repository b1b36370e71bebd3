#pragma once

#include <loforge/group.hpp>

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace loforge {

/// Default cap on explicitly enumerated progression elements.
inline constexpr std::uint64_t default_enumeration_cap = 4'000'000;

/**
 * @brief Generalized arithmetic progression base + {sum m_i g_i : lower_i <= m_i <= upper_i}.
 */
struct Gap {
    GroupElement base;
    std::vector<GroupElement> generators;
    std::vector<std::int64_t> lower;
    std::vector<std::int64_t> upper;

    std::size_t rank() const { return generators.size(); }

    bool symmetric() const {
        if (base.code != 0) return false;
        for (std::size_t i = 0; i < rank(); ++i)
            if (lower[i] != -upper[i]) return false;
        return true;
    }

    /// Number of coefficient vectors in the box (saturates at uint64 max).
    std::uint64_t volume() const {
        unsigned __int128 v = 1;
        for (std::size_t i = 0; i < rank(); ++i) {
            v *= static_cast<unsigned __int128>(upper[i] - lower[i] + 1);
            if (v > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
        }
        return static_cast<std::uint64_t>(v);
    }

    static Gap point(GroupElement base) { return Gap{base, {}, {}, {}}; }

    static Gap symmetric_box(std::vector<GroupElement> gens, const std::vector<std::int64_t>& bounds) {
        Gap p;
        p.generators = std::move(gens);
        for (auto n : bounds) {
            p.lower.push_back(-n);
            p.upper.push_back(n);
        }
        return p;
    }
};

/**
 * @brief H + P for a finite subgroup H (given by its elements) and a GAP P.
 */
struct CosetProgression {
    ElementSet subgroup;
    Gap gap;

    std::size_t rank() const { return gap.rank(); }
    bool symmetric() const { return gap.symmetric(); }

    /// |H| times the box volume; equals the cardinality when proper.
    std::uint64_t volume() const {
        unsigned __int128 v = static_cast<unsigned __int128>(subgroup.size()) * gap.volume();
        if (v > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
        return static_cast<std::uint64_t>(v);
    }

    static CosetProgression from_gap(const AbelianGroup& g, Gap p) {
        return CosetProgression{ElementSet{g.zero()}, std::move(p)};
    }
};

inline void validate(const AbelianGroup& g, const CosetProgression& hp) {
    const Gap& p = hp.gap;
    if (p.lower.size() != p.rank() || p.upper.size() != p.rank())
        throw std::invalid_argument("progression bounds do not match the number of generators");
    for (std::size_t i = 0; i < p.rank(); ++i) {
        if (p.lower[i] > p.upper[i]) throw std::invalid_argument("progression has lower > upper");
        if (!g.contains(p.generators[i])) throw std::invalid_argument("generator outside the group");
    }
    if (!g.contains(p.base)) throw std::invalid_argument("base outside the group");
    if (g.torsion_free()) {
        if (hp.subgroup != ElementSet{g.zero()})
            throw std::invalid_argument("the only finite subgroup of Z is {0}");
    } else {
        for (auto h : hp.subgroup)
            if (!g.contains(h)) throw std::invalid_argument("subgroup element outside the group");
        if (!is_subgroup(g, hp.subgroup)) throw std::invalid_argument("H is not a subgroup");
    }
}

/// Calls f(value) for every coefficient vector of the box, odometer order (last index fastest).
template <class F>
void for_each_box_point(const AbelianGroup& g, GroupElement base, const std::vector<GroupElement>& gens,
                        const std::vector<std::int64_t>& lower, const std::vector<std::int64_t>& upper, F&& f) {
    const std::size_t r = gens.size();
    std::vector<std::int64_t> m(lower);
    GroupElement start = base;
    for (std::size_t i = 0; i < r; ++i) start = g.add(start, g.scale(gens[i], lower[i]));
    std::vector<GroupElement> wrap(r);
    for (std::size_t i = 0; i < r; ++i) wrap[i] = g.scale(gens[i], -(upper[i] - lower[i]));
    GroupElement v = start;
    while (true) {
        f(v);
        std::size_t i = r;
        while (i > 0) {
            --i;
            if (m[i] < upper[i]) {
                ++m[i];
                v = g.add(v, gens[i]);
                goto next;
            }
            m[i] = lower[i];
            v = g.add(v, wrap[i]);
        }
        return;
    next:;
    }
}

/**
 * @brief Maps elements to coset ids of G/H.
 */
class CosetIndex {
public:
    CosetIndex(const AbelianGroup& g, const ElementSet& h) : group_(g) {
        trivial_ = h.size() <= 1;
        if (trivial_) {
            count_ = g.finite() ? g.order() : 0;
            return;
        }
        const auto order = static_cast<std::size_t>(g.order());
        ids_.assign(order, -1);
        std::int64_t next = 0;
        for (std::size_t c = 0; c < order; ++c) {
            if (ids_[c] >= 0) continue;
            for (auto y : h) ids_[static_cast<std::size_t>(g.add({static_cast<std::int64_t>(c)}, y).code)] = next;
            ++next;
        }
        count_ = next;
    }

    std::int64_t id(GroupElement x) const { return trivial_ ? x.code : ids_[static_cast<std::size_t>(x.code)]; }

    /// Number of cosets (0 for Z).
    std::int64_t count() const { return count_; }

    /// Smallest element of the coset of x.
    GroupElement representative(GroupElement x) const {
        if (trivial_) return x;
        if (reps_.empty()) {
            reps_.assign(static_cast<std::size_t>(count_), GroupElement{-1});
            for (std::size_t c = 0; c < ids_.size(); ++c) {
                auto& r = reps_[static_cast<std::size_t>(ids_[c])];
                if (r.code < 0) r = {static_cast<std::int64_t>(c)};
            }
        }
        return reps_[static_cast<std::size_t>(id(x))];
    }

private:
    AbelianGroup group_;
    bool trivial_ = true;
    std::int64_t count_ = 0;
    std::vector<std::int64_t> ids_;
    mutable std::vector<GroupElement> reps_;
};

/// Box points counted with multiplicity are injective into G/H.
inline bool box_injective(const AbelianGroup& g, const CosetIndex& idx, const Gap& p) {
    const std::uint64_t vol = p.volume();
    if (g.finite() && vol > static_cast<std::uint64_t>(idx.count())) return false;
    if (vol > default_enumeration_cap) throw resource_error("progression box too large to test properness");
    if (g.finite()) {
        std::vector<char> seen(static_cast<std::size_t>(idx.count()), 0);
        bool ok = true;
        for_each_box_point(g, p.base, p.generators, p.lower, p.upper, [&](GroupElement v) {
            auto& s = seen[static_cast<std::size_t>(idx.id(v))];
            if (s) ok = false;
            s = 1;
        });
        return ok;
    }
    std::vector<std::int64_t> vals;
    vals.reserve(vol);
    for_each_box_point(g, p.base, p.generators, p.lower, p.upper, [&](GroupElement v) { vals.push_back(v.code); });
    std::sort(vals.begin(), vals.end());
    return std::adjacent_find(vals.begin(), vals.end()) == vals.end();
}

/// All elements of the GAP as a sorted set.
inline ElementSet elements(const AbelianGroup& g, const Gap& p, std::uint64_t cap = default_enumeration_cap) {
    if (p.volume() > cap) throw resource_error("progression has more points than the enumeration cap");
    std::vector<GroupElement> out;
    out.reserve(p.volume());
    for_each_box_point(g, p.base, p.generators, p.lower, p.upper, [&](GroupElement v) { out.push_back(v); });
    return make_set(std::move(out));
}

/// All elements of H + P as a sorted set.
inline ElementSet elements(const AbelianGroup& g, const CosetProgression& hp,
                           std::uint64_t cap = default_enumeration_cap) {
    validate(g, hp);
    if (hp.volume() > cap) throw resource_error("coset progression has more points than the enumeration cap");
    ElementSet pts = elements(g, hp.gap, cap);
    if (hp.subgroup.size() <= 1) return pts;
    std::vector<GroupElement> out;
    out.reserve(pts.size() * hp.subgroup.size());
    for (auto x : pts)
        for (auto h : hp.subgroup) out.push_back(g.add(x, h));
    return make_set(std::move(out));
}

inline bool is_proper(const AbelianGroup& g, const CosetProgression& hp) {
    validate(g, hp);
    return box_injective(g, CosetIndex(g, hp.subgroup), hp.gap);
}

inline bool is_proper(const AbelianGroup& g, const Gap& p) {
    return is_proper(g, CosetProgression::from_gap(g, p));
}

/// t-fold sumset of a GAP: t*base + box scaled by t.
inline Gap dilate(const AbelianGroup& g, const Gap& p, std::int64_t t) {
    if (t < 1) throw std::invalid_argument("dilation factor must be >= 1");
    Gap out = p;
    out.base = g.scale(p.base, t);
    for (std::size_t i = 0; i < p.rank(); ++i) {
        out.lower[i] = p.lower[i] * t;
        out.upper[i] = p.upper[i] * t;
    }
    return out;
}

inline CosetProgression dilate(const AbelianGroup& g, const CosetProgression& hp, std::int64_t t) {
    return CosetProgression{hp.subgroup, dilate(g, hp.gap, t)};
}

inline bool is_t_proper(const AbelianGroup& g, const CosetProgression& hp, std::int64_t t) {
    return is_proper(g, dilate(g, hp, t));
}

inline void require_members(const AbelianGroup& g, const ElementSet& x) {
    for (auto v : x)
        if (!g.contains(v)) throw std::invalid_argument("element does not belong to the group");
}

/// X + Y.
inline ElementSet minkowski_sum(const AbelianGroup& g, const ElementSet& x, const ElementSet& y) {
    require_members(g, x);
    require_members(g, y);
    if (static_cast<double>(x.size()) * static_cast<double>(y.size()) > 2e8)
        throw resource_error("sumset too large");
    if (g.finite()) {
        std::vector<char> mark(static_cast<std::size_t>(g.order()), 0);
        for (auto a : x)
            for (auto b : y) mark[static_cast<std::size_t>(g.add(a, b).code)] = 1;
        ElementSet out;
        for (std::size_t c = 0; c < mark.size(); ++c)
            if (mark[c]) out.push_back({static_cast<std::int64_t>(c)});
        return out;
    }
    std::vector<GroupElement> out;
    out.reserve(x.size() * y.size());
    for (auto a : x)
        for (auto b : y) out.push_back(g.add(a, b));
    return make_set(std::move(out));
}

/// kX = X + ... + X (k copies); 0X = {0}.
inline ElementSet iterated_sumset(const AbelianGroup& g, const ElementSet& x, std::int64_t k,
                                  std::uint64_t cap = default_enumeration_cap) {
    if (k < 0) throw std::invalid_argument("sumset multiplicity must be >= 0");
    if (x.empty()) throw std::invalid_argument("iterated sumset of the empty set");
    ElementSet acc{g.zero()};
    for (std::int64_t i = 0; i < k; ++i) {
        acc = minkowski_sum(g, acc, x);
        if (acc.size() > cap) throw resource_error("iterated sumset exceeds the enumeration cap");
    }
    return acc;
}

inline bool contains(const AbelianGroup& g, const CosetProgression& hp, const ElementSet& x) {
    return is_subset(x, elements(g, hp));
}

/**
 * @brief Divides a symmetric 2-proper H + P by k given kX within it.
 *
 * Returns H + P' with bounds floor(2 N_i / k), directions that vanish dropped. The output
 * contains X. Requires 0 in X.
 */
inline CosetProgression divide_progression(const AbelianGroup& g, const CosetProgression& hp, std::int64_t k,
                                           const ElementSet& x) {
    using R = divide_error::Reason;
    if (k < 1) throw std::invalid_argument("divisor k must be >= 1");
    if (!hp.symmetric()) throw divide_error(R::not_symmetric, "coset progression is not symmetric");
    if (!set_contains(x, g.zero())) throw divide_error(R::zero_missing, "X must contain 0");
    if (!is_t_proper(g, hp, 2)) throw divide_error(R::not_two_proper, "coset progression is not 2-proper");
    ElementSet kx = iterated_sumset(g, x, k);
    if (!is_subset(kx, elements(g, hp))) throw divide_error(R::containment_failed, "kX is not contained in H+P");
    Gap out;
    out.base = g.zero();
    for (std::size_t i = 0; i < hp.rank(); ++i) {
        std::int64_t n = (2 * hp.gap.upper[i]) / k;
        if (n == 0) continue;
        out.generators.push_back(hp.gap.generators[i]);
        out.lower.push_back(-n);
        out.upper.push_back(n);
    }
    CosetProgression res{hp.subgroup, out};
    if (!is_subset(x, elements(g, res))) throw std::logic_error("divided progression misses X");
    return res;
}

}  // namespace loforge

#pragma once

#include <loforge/progression.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace loforge {

struct CoverOptions {
    /// Number of candidate generators kept per subgroup.
    std::size_t max_pool = 200;
    /// Required properness of the cover (1 = proper, 2 = 2-proper, ...).
    std::int64_t t_proper = 1;
    /// Largest cover size considered over Z, where no trivial cover exists.
    std::uint64_t size_cap = 1u << 16;
    /// Coefficient vectors visited before giving up.
    std::uint64_t work_budget = 60'000'000;
};

struct CoverResult {
    std::optional<CosetProgression> cover;
    /// The search stopped early; a missing or non-minimal cover is then not a proof.
    bool budget_exhausted = false;
    std::string diagnostic;
};

namespace detail {

/// Per-subgroup state of the cover search.
class CoverSearch {
public:
    CoverSearch(const AbelianGroup& g, const ElementSet& targets, const ElementSet& h, bool symmetric,
                std::int64_t t_proper, std::uint64_t& work, std::uint64_t work_budget)
        : g_(g), h_(h), idx_(g, h), symmetric_(symmetric), t_(t_proper), work_(work), budget_(work_budget) {
        std::vector<std::int64_t> keys;
        for (auto y : targets) keys.push_back(idx_.id(y));
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (std::size_t i = 0; i < keys.size(); ++i) slot_[keys[i]] = static_cast<int>(i);
        num_targets_ = keys.size();
        zero_key_ = idx_.id(g.zero());
    }

    bool targets_in_h() const { return num_targets_ == 1 && slot_.count(zero_key_) == 1; }

    /// Candidate generators: coset representatives of differences, most frequent first.
    std::vector<GroupElement> pool(const ElementSet& targets, std::size_t max_pool) const {
        std::unordered_map<std::int64_t, std::int64_t> freq;
        auto canon = [&](GroupElement d) {
            GroupElement a = idx_.representative(d);
            GroupElement b = idx_.representative(g_.neg(d));
            if (g_.torsion_free()) return GroupElement{std::abs(d.code)};
            return std::min(a, b);
        };
        for (std::size_t i = 0; i < targets.size(); ++i)
            for (std::size_t j = 0; j < targets.size(); ++j) {
                if (i == j) continue;
                GroupElement d = g_.sub(targets[i], targets[j]);
                if (idx_.id(d) == zero_key_) continue;
                ++freq[canon(d).code];
            }
        std::vector<std::pair<std::int64_t, std::int64_t>> ranked(freq.begin(), freq.end());
        std::sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        std::vector<GroupElement> out;
        for (std::size_t i = 0; i < ranked.size() && out.size() < max_pool; ++i) out.push_back({ranked[i].first});
        // Pairwise sums of the leading differences fill the remaining slots.
        const std::size_t lead = std::min<std::size_t>(out.size(), 20);
        std::vector<GroupElement> extra;
        for (std::size_t i = 0; i < lead; ++i)
            for (std::size_t j = i + 1; j < lead; ++j) {
                GroupElement s = g_.add(out[i], out[j]);
                if (idx_.id(s) == zero_key_) continue;
                extra.push_back(canon(s));
            }
        if (g_.torsion_free() && !targets.empty()) {
            // gcd of the differences always yields a rank-1 cover over Z
            std::int64_t gcd = 0;
            for (auto t : targets) gcd = std::gcd(gcd, t.code - targets.front().code);
            if (gcd != 0) extra.push_back({std::abs(gcd)});
        }
        extra = make_set(std::move(extra));
        for (auto e : extra) {
            if (out.size() >= max_pool) break;
            if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
        }
        return make_set(std::move(out));
    }

    bool exhausted() const { return work_ > budget_; }

    /// Best box for the generator tuple with volume <= max_volume, or nullopt.
    std::optional<Gap> best_box(const std::vector<GroupElement>& gens, std::uint64_t max_volume) {
        if (max_volume == 0) return std::nullopt;
        gens_ = gens;
        reps_.assign(num_targets_, {});
        cur_.assign(gens.size(), 0);
        found_ = 0;
        hit_.assign(num_targets_, 0);
        enumerate(0, max_volume, g_.zero());
        if (found_ < num_targets_) return std::nullopt;
        std::vector<std::pair<std::uint64_t, Gap>> cands;
        if (symmetric_)
            symmetric_candidates(max_volume, cands);
        else
            asymmetric_candidates(max_volume, cands);
        std::stable_sort(cands.begin(), cands.end(), [](auto& a, auto& b) { return a.first < b.first; });
        std::size_t checked = 0;
        for (auto& [vol, box] : cands) {
            if (++checked > 64) break;
            Gap scaled = dilate(g_, box, t_);
            if (box_injective(g_, idx_, scaled)) return box;
        }
        return std::nullopt;
    }

private:
    void enumerate(std::size_t i, std::uint64_t rem, GroupElement value) {
        if (work_ > budget_) return;
        if (i == gens_.size()) {
            ++work_;
            auto it = slot_.find(idx_.id(value));
            if (it != slot_.end()) {
                if (!hit_[it->second]) {
                    hit_[it->second] = 1;
                    ++found_;
                }
                reps_[it->second].push_back(cur_);
            }
            return;
        }
        std::int64_t limit = symmetric_ ? static_cast<std::int64_t>((rem - 1) / 2) : static_cast<std::int64_t>(rem - 1);
        for (std::int64_t m = -limit; m <= limit; ++m) {
            std::uint64_t w = symmetric_ ? static_cast<std::uint64_t>(2 * std::abs(m) + 1)
                                         : static_cast<std::uint64_t>(std::abs(m) + 1);
            cur_[i] = m;
            enumerate(i + 1, rem / w, g_.add(value, g_.scale(gens_[i], m)));
        }
    }

    static std::uint64_t sym_volume(const std::vector<std::int64_t>& n) {
        std::uint64_t v = 1;
        for (auto x : n) v *= static_cast<std::uint64_t>(2 * x + 1);
        return v;
    }

    void symmetric_candidates(std::uint64_t max_volume, std::vector<std::pair<std::uint64_t, Gap>>& out) {
        const std::size_t r = gens_.size();
        std::vector<std::int64_t> n(r, 0);
        if (r == 1) {
            std::int64_t need = 0;
            for (auto& reps : reps_) {
                std::int64_t best = std::numeric_limits<std::int64_t>::max();
                for (auto& m : reps) best = std::min(best, std::abs(m[0]));
                need = std::max(need, best);
            }
            n[0] = need;
            out.emplace_back(sym_volume(n), Gap::symmetric_box(gens_, n));
            return;
        }
        prefix_symmetric(0, 1, n, max_volume, out);
    }

    // Fix bounds of coordinates < r-2, sweep coordinate r-2 and derive coordinate r-1.
    void prefix_symmetric(std::size_t i, std::uint64_t prod, std::vector<std::int64_t>& n, std::uint64_t max_volume,
                          std::vector<std::pair<std::uint64_t, Gap>>& out) {
        const std::size_t r = gens_.size();
        if (i + 2 < r) {
            for (std::int64_t b = 0; prod * static_cast<std::uint64_t>(2 * b + 1) <= max_volume; ++b) {
                n[i] = b;
                prefix_symmetric(i + 1, prod * static_cast<std::uint64_t>(2 * b + 1), n, max_volume, out);
            }
            return;
        }
        // Profiles (|m_{r-2}|, |m_{r-1}|) of admissible representatives per target.
        std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> prof(num_targets_);
        for (std::size_t y = 0; y < num_targets_; ++y) {
            for (auto& m : reps_[y]) {
                bool ok = true;
                for (std::size_t j = 0; j + 2 < r; ++j)
                    if (std::abs(m[j]) > n[j]) {
                        ok = false;
                        break;
                    }
                if (ok) prof[y].emplace_back(std::abs(m[r - 2]), std::abs(m[r - 1]));
            }
            if (prof[y].empty()) return;
            std::sort(prof[y].begin(), prof[y].end());
            for (std::size_t k = 1; k < prof[y].size(); ++k)
                prof[y][k].second = std::min(prof[y][k].second, prof[y][k - 1].second);
        }
        std::vector<std::size_t> ptr(num_targets_, 0);
        for (std::int64_t b = 0; prod * static_cast<std::uint64_t>(2 * b + 1) <= max_volume; ++b) {
            std::int64_t need = 0;
            bool feasible = true;
            for (std::size_t y = 0; y < num_targets_; ++y) {
                auto& p = prof[y];
                while (ptr[y] + 1 < p.size() && p[ptr[y] + 1].first <= b) ++ptr[y];
                if (p[ptr[y]].first > b) {
                    feasible = false;
                    break;
                }
                need = std::max(need, p[ptr[y]].second);
            }
            work_ += num_targets_;
            if (!feasible) continue;
            n[r - 2] = b;
            n[r - 1] = need;
            std::uint64_t vol = sym_volume(n);
            if (vol <= max_volume) out.emplace_back(vol, Gap::symmetric_box(gens_, n));
            if (need == 0) break;
        }
    }

    void asymmetric_candidates(std::uint64_t max_volume, std::vector<std::pair<std::uint64_t, Gap>>& out) {
        std::vector<std::int64_t> lo(gens_.size(), 0), hi(gens_.size(), 0);
        prefix_asymmetric(0, 1, lo, hi, max_volume, out);
    }

    void prefix_asymmetric(std::size_t i, std::uint64_t prod, std::vector<std::int64_t>& lo,
                           std::vector<std::int64_t>& hi, std::uint64_t max_volume,
                           std::vector<std::pair<std::uint64_t, Gap>>& out) {
        const std::size_t r = gens_.size();
        if (i + 1 < r) {
            std::int64_t span = static_cast<std::int64_t>(max_volume / prod);
            for (std::int64_t a = 0; a < span; ++a)
                for (std::int64_t b = 0; a + b + 1 <= span; ++b) {
                    lo[i] = -a;
                    hi[i] = b;
                    prefix_asymmetric(i + 1, prod * static_cast<std::uint64_t>(a + b + 1), lo, hi, max_volume, out);
                    if (work_ > budget_) return;
                }
            return;
        }
        // Last coordinate: shortest window containing 0 meeting every target.
        std::vector<std::vector<std::int64_t>> vals(num_targets_);
        for (std::size_t y = 0; y < num_targets_; ++y) {
            for (auto& m : reps_[y]) {
                bool ok = true;
                for (std::size_t j = 0; j + 1 < r; ++j)
                    if (m[j] < lo[j] || m[j] > hi[j]) {
                        ok = false;
                        break;
                    }
                if (ok) vals[y].push_back(m[r - 1]);
            }
            if (vals[y].empty()) return;
            std::sort(vals[y].begin(), vals[y].end());
        }
        work_ += num_targets_;
        std::int64_t span = static_cast<std::int64_t>(max_volume / prod);
        std::int64_t best_vol = -1, best_lo = 0, best_hi = 0;
        for (std::int64_t a = 0; a < span; ++a) {
            std::int64_t need = 0;
            bool feasible = true;
            for (auto& v : vals) {
                auto it = std::lower_bound(v.begin(), v.end(), -a);
                if (it == v.end()) {
                    feasible = false;
                    break;
                }
                need = std::max(need, *it);
            }
            work_ += num_targets_;
            if (!feasible) break;
            std::int64_t w = need + a + 1;
            if (w <= span && (best_vol < 0 || w < best_vol)) {
                best_vol = w;
                best_lo = -a;
                best_hi = need;
            }
        }
        if (best_vol < 0) return;
        lo[r - 1] = best_lo;
        hi[r - 1] = best_hi;
        Gap box;
        box.generators = gens_;
        box.lower = lo;
        box.upper = hi;
        out.emplace_back(box.volume(), box);
    }

    const AbelianGroup& g_;
    const ElementSet& h_;
    CosetIndex idx_;
    bool symmetric_;
    std::int64_t t_;
    std::uint64_t& work_;
    std::uint64_t budget_;
    std::unordered_map<std::int64_t, int> slot_;
    std::size_t num_targets_ = 0;
    std::int64_t zero_key_ = 0;
    std::vector<GroupElement> gens_;
    std::vector<std::vector<std::vector<std::int64_t>>> reps_;
    std::vector<std::int64_t> cur_;
    std::vector<char> hit_;
    std::size_t found_ = 0;
};

}  // namespace detail

/**
 * @brief Smallest t-proper coset progression of rank <= max_rank containing X.
 *
 * Ties are broken by rank, then subgroup (size, elements), then generator tuple, all
 * ascending. Over Z the search is limited to covers of at most options.size_cap elements.
 * Asymmetric covers use min(X) as base and boxes containing the zero vector.
 */
inline CoverResult minimal_cover(const AbelianGroup& g, const ElementSet& x, int max_rank, bool require_symmetric,
                                 const CoverOptions& options = {}) {
    if (x.empty()) throw std::invalid_argument("cannot cover the empty set");
    if (max_rank < 0) throw std::invalid_argument("max_rank must be >= 0");
    require_members(g, x);
    if (require_symmetric && !set_contains(x, g.zero()))
        throw std::invalid_argument("symmetric cover requires 0 in X");
    const GroupElement base = require_symmetric ? g.zero() : x.front();
    std::vector<GroupElement> shifted;
    for (auto v : x) shifted.push_back(g.sub(v, base));
    const ElementSet targets = make_set(std::move(shifted));

    std::vector<ElementSet> subgroups;
    std::uint64_t bound;
    if (g.finite()) {
        if (g.order() <= subgroup_enumeration_cap) {
            subgroups = enumerate_subgroups(g, g.order());
        } else {
            subgroups = {ElementSet{g.zero()}};
        }
        bound = static_cast<std::uint64_t>(g.order()) + 1;
    } else {
        subgroups = {ElementSet{g.zero()}};
        bound = options.size_cap + 1;
        if (max_rank >= 1 && targets.size() > 1) {
            std::int64_t gcd = 0, lo = 0, hi = 0;
            for (auto t : targets) {
                gcd = std::gcd(gcd, t.code);
                lo = std::min(lo, t.code);
                hi = std::max(hi, t.code);
            }
            std::int64_t reach = require_symmetric ? 2 * std::max(-lo, hi) / gcd + 1 : (hi - lo) / gcd + 1;
            if (static_cast<std::uint64_t>(reach) < options.size_cap) bound = static_cast<std::uint64_t>(reach) + 1;
        }
    }

    CoverResult result;
    std::uint64_t work = 0;
    for (int r = 0; r <= max_rank; ++r) {
        for (const auto& h : subgroups) {
            if (h.size() >= bound) break;
            detail::CoverSearch search(g, targets, h, require_symmetric, options.t_proper, work, options.work_budget);
            if (r == 0) {
                if (search.targets_in_h()) {
                    Gap p = Gap::point(base);
                    result.cover = CosetProgression{h, p};
                    bound = h.size();
                }
                continue;
            }
            auto pool = search.pool(targets, options.max_pool);
            if (pool.size() < static_cast<std::size_t>(r)) continue;
            std::vector<std::size_t> pick(static_cast<std::size_t>(r));
            for (int i = 0; i < r; ++i) pick[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
            while (true) {
                std::uint64_t max_volume = (bound - 1) / h.size();
                if (max_volume == 0) break;
                std::vector<GroupElement> gens;
                for (auto i : pick) gens.push_back(pool[i]);
                if (auto box = search.best_box(gens, max_volume)) {
                    box->base = base;
                    result.cover = CosetProgression{h, *box};
                    bound = h.size() * box->volume();
                }
                if (search.exhausted()) {
                    result.budget_exhausted = true;
                    result.diagnostic = "cover search budget exhausted";
                    return result;
                }
                // next combination in lexicographic order
                int i = r - 1;
                while (i >= 0 && pick[static_cast<std::size_t>(i)] == pool.size() - static_cast<std::size_t>(r - i)) --i;
                if (i < 0) break;
                ++pick[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < r; ++j)
                    pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
    }
    if (!result.cover) result.diagnostic = "no cover within the rank and size limits";
    return result;
}

}  // namespace loforge

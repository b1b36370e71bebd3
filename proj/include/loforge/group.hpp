#pragma once

#include <loforge/errors.hpp>
#include <loforge/rational.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace loforge {

/// Largest finite group for which subgroup enumeration is attempted.
inline constexpr std::int64_t subgroup_enumeration_cap = 10'000;

/**
 * @brief An element of an AbelianGroup.
 *
 * For Z the code is the integer itself. For Z/q_1 x ... x Z/q_d it is the mixed-radix index
 * of the coordinate vector with the first factor most significant, so comparing codes
 * compares coordinate vectors lexicographically.
 */
struct GroupElement {
    std::int64_t code = 0;

    friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

/// Sorted, duplicate-free list of elements.
using ElementSet = std::vector<GroupElement>;

inline ElementSet make_set(std::vector<GroupElement> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline bool set_contains(const ElementSet& s, GroupElement x) {
    return std::binary_search(s.begin(), s.end(), x);
}

inline bool is_subset(const ElementSet& a, const ElementSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Exact value in [0,1) kept as a reduced fraction.
struct FracValue {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static FracValue make(std::int64_t n, std::int64_t d) {
        if (d <= 0) throw std::invalid_argument("FracValue needs a positive denominator");
        n %= d;
        if (n < 0) n += d;
        std::int64_t g = std::gcd(n, d);
        return {n / g, d / g};
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    Rational to_rational() const { return make_rational(num, den); }

    friend bool operator==(const FracValue&, const FracValue&) = default;
};

/// Distance to the nearest integer of a value in [0,1); the result lies in [0,1/2].
inline FracValue frac_dist(FracValue x) {
    std::int64_t n = std::min(x.num, x.den - x.num);
    FracValue r;
    r.num = n;
    r.den = x.den;
    std::int64_t g = std::gcd(n, x.den);
    r.num /= g;
    r.den /= g;
    return r;
}

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

/**
 * @brief Z, or a finite product of cyclic groups Z/q_1 x ... x Z/q_d.
 */
class AbelianGroup {
public:
    static AbelianGroup integers() { return AbelianGroup(); }

    static AbelianGroup cyclic(std::int64_t q) { return product({q}); }

    static AbelianGroup product(std::vector<std::int64_t> factors) {
        if (factors.empty()) throw std::invalid_argument("finite group needs at least one factor");
        AbelianGroup g;
        g.torsion_free_ = false;
        g.factors_ = std::move(factors);
        g.strides_.assign(g.factors_.size(), 1);
        __int128 order = 1;
        std::int64_t lcm = 1;
        for (std::size_t j = g.factors_.size(); j-- > 0;) {
            std::int64_t q = g.factors_[j];
            if (q < 1) throw std::invalid_argument("cyclic factor must be >= 1");
            g.strides_[j] = static_cast<std::int64_t>(order);
            order *= q;
            if (order > (static_cast<__int128>(1) << 40))
                throw resource_error("group order exceeds 2^40");
            lcm = std::lcm(lcm, q);
        }
        g.order_ = static_cast<std::int64_t>(order);
        g.exponent_ = lcm;
        return g;
    }

    bool torsion_free() const { return torsion_free_; }
    bool finite() const { return !torsion_free_; }
    std::span<const std::int64_t> factors() const { return factors_; }
    std::size_t num_factors() const { return torsion_free_ ? 1 : factors_.size(); }

    std::int64_t order() const {
        if (torsion_free_) throw unsupported_operation("Z has infinite order");
        return order_;
    }

    /// lcm of the factors: every pairing value is a multiple of 1/exponent().
    std::int64_t exponent() const {
        if (torsion_free_) throw unsupported_operation("Z has no finite exponent");
        return exponent_;
    }

    GroupElement zero() const { return {0}; }

    bool contains(GroupElement x) const {
        return torsion_free_ || (x.code >= 0 && x.code < order_);
    }

    /// Element from coordinates, reduced modulo each factor.
    GroupElement element(std::span<const std::int64_t> coords) const {
        if (torsion_free_) {
            if (coords.size() != 1) throw std::invalid_argument("Z elements have one coordinate");
            return {coords[0]};
        }
        if (coords.size() != factors_.size())
            throw std::invalid_argument("coordinate count does not match group rank");
        std::int64_t code = 0;
        for (std::size_t j = 0; j < factors_.size(); ++j)
            code += mod_floor(coords[j], factors_[j]) * strides_[j];
        return {code};
    }

    /// Element of Z, or of a cyclic group (reduced mod q).
    GroupElement element(std::int64_t value) const {
        if (torsion_free_) return {value};
        if (factors_.size() != 1)
            throw std::invalid_argument("scalar element literal needs a cyclic group");
        return {mod_floor(value, factors_[0])};
    }

    GroupElement from_code(std::int64_t code) const {
        GroupElement x{code};
        if (!contains(x)) throw std::invalid_argument("element code outside the group");
        return x;
    }

    std::int64_t coord(GroupElement x, std::size_t j) const {
        if (torsion_free_) return x.code;
        return (x.code / strides_[j]) % factors_[j];
    }

    std::vector<std::int64_t> coords(GroupElement x) const {
        if (torsion_free_) return {x.code};
        std::vector<std::int64_t> c(factors_.size());
        for (std::size_t j = 0; j < factors_.size(); ++j) c[j] = coord(x, j);
        return c;
    }

    GroupElement add(GroupElement a, GroupElement b) const {
        if (torsion_free_) return {a.code + b.code};
        if (factors_.size() == 1) {
            std::int64_t s = a.code + b.code;
            return {s >= order_ ? s - order_ : s};
        }
        std::int64_t code = 0;
        for (std::size_t j = 0; j < factors_.size(); ++j) {
            std::int64_t s = coord(a, j) + coord(b, j);
            if (s >= factors_[j]) s -= factors_[j];
            code += s * strides_[j];
        }
        return {code};
    }

    GroupElement neg(GroupElement a) const {
        if (torsion_free_) return {-a.code};
        if (factors_.size() == 1) return {a.code == 0 ? 0 : order_ - a.code};
        std::int64_t code = 0;
        for (std::size_t j = 0; j < factors_.size(); ++j) {
            std::int64_t c = coord(a, j);
            code += (c == 0 ? 0 : factors_[j] - c) * strides_[j];
        }
        return {code};
    }

    GroupElement sub(GroupElement a, GroupElement b) const { return add(a, neg(b)); }

    GroupElement scale(GroupElement a, std::int64_t k) const {
        if (torsion_free_) return {a.code * k};
        if (factors_.size() == 1)
            return {static_cast<std::int64_t>(mod_floor128(static_cast<__int128>(a.code) * k, order_))};
        std::int64_t code = 0;
        for (std::size_t j = 0; j < factors_.size(); ++j) {
            auto c = mod_floor128(static_cast<__int128>(coord(a, j)) * k, factors_[j]);
            code += static_cast<std::int64_t>(c) * strides_[j];
        }
        return {code};
    }

    /// Additive order of an element (finite groups only).
    std::int64_t element_order(GroupElement a) const {
        if (torsion_free_) throw unsupported_operation("element order in Z");
        std::int64_t ord = 1;
        for (std::size_t j = 0; j < factors_.size(); ++j) {
            std::int64_t q = factors_[j];
            ord = std::lcm(ord, q / std::gcd(coord(a, j), q));
        }
        return ord;
    }

    /// Pairing zeta.a scaled by exponent(): the residue r with zeta.a = r/exponent() mod 1.
    std::int64_t pairing_residue(GroupElement zeta, GroupElement a) const {
        if (torsion_free_) throw unsupported_operation("pairing on Z");
        if (factors_.size() == 1)
            return static_cast<std::int64_t>((static_cast<__int128>(zeta.code) * a.code) % order_);
        __int128 acc = 0;
        for (std::size_t j = 0; j < factors_.size(); ++j) {
            __int128 t = static_cast<__int128>(coord(zeta, j)) * coord(a, j);
            acc += (t % factors_[j]) * (exponent_ / factors_[j]);
        }
        return static_cast<std::int64_t>(acc % exponent_);
    }

    std::vector<GroupElement> all_elements() const {
        std::vector<GroupElement> v(static_cast<std::size_t>(order()));
        for (std::int64_t i = 0; i < order_; ++i) v[static_cast<std::size_t>(i)] = {i};
        return v;
    }

    std::string describe() const {
        if (torsion_free_) return "Z";
        std::ostringstream os;
        for (std::size_t j = 0; j < factors_.size(); ++j) os << (j ? " x " : "") << "Z/" << factors_[j];
        return os.str();
    }

    std::string format(GroupElement x) const {
        if (torsion_free_ || factors_.size() == 1) return std::to_string(x.code);
        std::ostringstream os;
        os << '(';
        for (std::size_t j = 0; j < factors_.size(); ++j) os << (j ? "," : "") << coord(x, j);
        os << ')';
        return os.str();
    }

    friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
        return a.torsion_free_ == b.torsion_free_ && a.factors_ == b.factors_;
    }

private:
    static __int128 mod_floor128(__int128 a, std::int64_t m) {
        __int128 r = a % m;
        return r < 0 ? r + m : r;
    }

    bool torsion_free_ = true;
    std::vector<std::int64_t> factors_;
    std::vector<std::int64_t> strides_;
    std::int64_t order_ = 0;
    std::int64_t exponent_ = 0;
};

/// zeta.a = sum_j zeta_j a_j / q_j mod 1 as an exact fraction.
inline FracValue pairing(const AbelianGroup& g, GroupElement zeta, GroupElement a) {
    return FracValue::make(g.pairing_residue(zeta, a), g.exponent());
}

/**
 * @brief All subgroups of a finite group with at most max_size elements.
 *
 * Subgroups are returned as element sets ordered by size, then lexicographically.
 * Throws resource_error when |G| exceeds subgroup_enumeration_cap.
 */
inline std::vector<ElementSet> enumerate_subgroups(const AbelianGroup& g, std::int64_t max_size) {
    if (g.torsion_free()) throw unsupported_operation("subgroup enumeration on Z");
    const std::int64_t order = g.order();
    if (order > subgroup_enumeration_cap)
        throw resource_error("group too large for subgroup enumeration");
    constexpr std::size_t max_count = 20'000;
    // Every subgroup other than {0} is <H, x> for a smaller subgroup H.
    std::set<ElementSet> seen{ElementSet{g.zero()}};
    std::vector<ElementSet> found{ElementSet{g.zero()}};
    std::vector<char> in(static_cast<std::size_t>(order));
    std::vector<char> done(static_cast<std::size_t>(order));
    for (std::size_t head = 0; head < found.size(); ++head) {
        const ElementSet h = found[head];
        const auto hsize = static_cast<std::int64_t>(h.size());
        std::fill(in.begin(), in.end(), 0);
        for (auto y : h) in[static_cast<std::size_t>(y.code)] = 1;
        std::fill(done.begin(), done.end(), 0);
        for (std::int64_t c = 0; c < order; ++c) {
            if (in[static_cast<std::size_t>(c)] || done[static_cast<std::size_t>(c)]) continue;
            // order of c modulo H: least divisor t of ord(c) with t*c in H
            std::int64_t ord = g.element_order({c});
            std::int64_t t = ord;
            for (std::int64_t d = 1; d <= ord; ++d) {
                if (ord % d != 0) continue;
                if (in[static_cast<std::size_t>(g.scale({c}, d).code)]) {
                    t = d;
                    break;
                }
            }
            if (hsize * t > max_size) continue;
            std::vector<GroupElement> out;
            out.reserve(static_cast<std::size_t>(hsize * t));
            for (std::int64_t j = 0; j < t; ++j) {
                GroupElement shift = g.scale({c}, j);
                bool coprime = std::gcd(j, t) == 1;
                for (auto y : h) {
                    GroupElement z = g.add(y, shift);
                    out.push_back(z);
                    if (coprime) done[static_cast<std::size_t>(z.code)] = 1;
                }
            }
            ElementSet bigger = make_set(std::move(out));
            if (seen.insert(bigger).second) {
                found.push_back(std::move(bigger));
                if (found.size() > max_count) throw resource_error("too many subgroups to enumerate");
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const ElementSet& a, const ElementSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    if (max_size < 1) found.clear();
    return found;
}

/// Residues in [1, q-1] coprime to q.
inline std::vector<std::int64_t> reduced_elements(std::int64_t q) {
    if (q < 1) throw std::invalid_argument("modulus must be positive");
    std::vector<std::int64_t> out;
    for (std::int64_t a = 1; a < q; ++a)
        if (std::gcd(a, q) == 1) out.push_back(a);
    return out;
}

/// True when the element set is closed under addition and contains 0 (finite groups).
inline bool is_subgroup(const AbelianGroup& g, const ElementSet& h) {
    if (h.empty() || !set_contains(h, g.zero())) return false;
    for (auto a : h)
        for (auto b : h)
            if (!set_contains(h, g.sub(a, b))) return false;
    return true;
}

inline bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline std::int64_t next_prime_above(std::int64_t x) {
    std::int64_t p = std::max<std::int64_t>(x + 1, 2);
    while (!is_prime(p)) ++p;
    return p;
}

}  // namespace loforge

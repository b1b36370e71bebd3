#pragma once

// Brute-force reference implementations. They enumerate outcomes directly and share no
// code paths with the dynamic programs in concentration.hpp.

#include <loforge/concentration.hpp>

#include <bit>
#include <map>
#include <vector>

namespace loforge::oracle {

/// Law of the walk by enumerating every coefficient tuple.
inline std::map<std::int64_t, Rational> walk(const WeightMultiset& a, const StepLaw& law) {
    const AbelianGroup& g = a.group();
    const auto elems = a.expanded();
    const auto sup = law.support();
    std::map<std::int64_t, Rational> out;
    std::vector<std::size_t> choice(elems.size(), 0);
    while (true) {
        GroupElement s = g.zero();
        Rational p = 1;
        for (std::size_t i = 0; i < elems.size(); ++i) {
            s = g.add(s, g.scale(elems[i], sup[choice[i]].first));
            p *= sup[choice[i]].second;
        }
        out[s.code] += p;
        std::size_t i = 0;
        while (i < elems.size() && ++choice[i] == sup.size()) choice[i++] = 0;
        if (i == elems.size()) break;
    }
    return out;
}

/// Law of the length-m word walk by enumerating all n^m index words.
inline std::map<std::int64_t, Rational> word_walk(const WeightMultiset& a, std::int64_t m) {
    const AbelianGroup& g = a.group();
    const auto elems = a.expanded();
    const auto n = elems.size();
    std::map<std::int64_t, std::int64_t> counts;
    std::vector<std::size_t> word(static_cast<std::size_t>(m), 0);
    std::int64_t total = 0;
    while (true) {
        GroupElement s = g.zero();
        for (auto j : word) s = g.add(s, elems[j]);
        ++counts[s.code];
        ++total;
        std::size_t i = 0;
        while (i < word.size() && ++word[i] == n) word[i++] = 0;
        if (i == word.size()) break;
    }
    std::map<std::int64_t, Rational> out;
    for (auto [k, c] : counts) out[k] = make_rational(c, total);
    return out;
}

inline Rational max_value(const std::map<std::int64_t, Rational>& d) {
    Rational best = 0;
    for (const auto& [k, p] : d) best = std::max(best, p);
    return best;
}

inline Rational max_discrepancy(const AbelianGroup& g, const std::map<std::int64_t, Rational>& d) {
    Rational u(1, g.order()), best = 0;
    for (std::int64_t c = 0; c < g.order(); ++c) {
        auto it = d.find(c);
        Rational p = it == d.end() ? Rational(0) : it->second;
        best = std::max(best, Rational(abs(p - u)));
    }
    return best;
}

inline Rational rho_classical(const WeightMultiset& a) { return max_value(walk(a, StepLaw::signed_bernoulli())); }

inline Rational rho_xi(const WeightMultiset& a, const Rational& alpha) {
    return max_discrepancy(a.group(), walk(a, StepLaw::lazy(alpha)));
}

/// rho*_m by enumerating index subsets of size m.
inline Rational rho_star_m(const WeightMultiset& a, std::int64_t m) {
    const auto elems = a.expanded();
    const AbelianGroup& g = a.group();
    std::map<std::int64_t, std::int64_t> counts;
    std::int64_t total = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << elems.size()); ++mask) {
        if (std::popcount(mask) != m) continue;
        GroupElement s = g.zero();
        for (std::size_t i = 0; i < elems.size(); ++i)
            if (mask >> i & 1) s = g.add(s, elems[i]);
        ++counts[s.code];
        ++total;
    }
    std::int64_t best = 0;
    for (auto [k, c] : counts) best = std::max(best, c);
    return make_rational(best, total);
}

inline Rational rho_m(const WeightMultiset& a, std::int64_t m) {
    auto d = word_walk(a, m);
    if (a.group().torsion_free()) return max_value(d);
    return max_discrepancy(a.group(), d);
}

/// Distribution as a sparse map, zero entries dropped.
template <class S>
std::map<std::int64_t, S> to_map(const Distribution<S>& d) {
    std::map<std::int64_t, S> out;
    for (std::size_t i = 0; i < d.mass.size(); ++i)
        if (d.mass[i] != 0) out[d.element_at(i).code] = d.mass[i];
    return out;
}

/// Number of (k x r) integer matrices whose column max-norms alpha_j satisfy prod max(1, alpha_j) <= s.
inline std::int64_t count_vectors(int k, int r, std::int64_t s) {
    std::int64_t total = 0;
    std::vector<std::int64_t> x(static_cast<std::size_t>(k * r), -s);
    while (true) {
        std::int64_t prod = 1;
        for (int j = 0; j < r; ++j) {
            std::int64_t col = 0;
            for (int i = 0; i < k; ++i) col = std::max(col, std::abs(x[static_cast<std::size_t>(i * r + j)]));
            prod *= std::max<std::int64_t>(1, col);
        }
        if (prod <= s) ++total;
        std::size_t i = 0;
        while (i < x.size() && ++x[i] > s) x[i++] = -s;
        if (i == x.size()) break;
    }
    return total;
}

/**
 * @brief Polynomials over Q modulo the L-th cyclotomic polynomial, to test identities in Q(e(1/L)).
 */
class Cyclotomic {
public:
    explicit Cyclotomic(std::int64_t l) : l_(l), phi_(cyclotomic_poly(l)) {}

    std::int64_t order() const { return l_; }

    /// Reduces a polynomial (coefficients of x^0..x^{L-1}) modulo Phi_L.
    std::vector<Rational> reduce(std::vector<Rational> f) const {
        const std::size_t deg = phi_.size() - 1;
        for (std::size_t i = f.size(); i-- > deg;) {
            Rational c = f[i];
            if (sgn(c) == 0) continue;
            for (std::size_t j = 0; j <= deg; ++j) f[i - deg + j] -= c * phi_[j];
        }
        f.resize(std::min(f.size(), deg));
        return f;
    }

    /// Integer coefficients of Phi_L, lowest degree first.
    static std::vector<Rational> cyclotomic_poly(std::int64_t l) {
        // Phi_L = (x^L - 1) / prod_{d | L, d < L} Phi_d
        std::vector<Rational> num(static_cast<std::size_t>(l + 1), Rational(0));
        num[0] = -1;
        num[static_cast<std::size_t>(l)] = 1;
        for (std::int64_t d = 1; d < l; ++d) {
            if (l % d != 0) continue;
            num = divide(num, cyclotomic_poly(d));
        }
        return num;
    }

private:
    static std::vector<Rational> divide(std::vector<Rational> num, const std::vector<Rational>& den) {
        const std::size_t dn = den.size() - 1;
        std::vector<Rational> q(num.size() - dn, Rational(0));
        for (std::size_t i = num.size(); i-- > dn;) {
            Rational c = num[i] / den[dn];
            q[i - dn] = c;
            for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
        }
        return q;
    }

    std::int64_t l_;
    std::vector<Rational> phi_;
};

/**
 * @brief Exact check of Fourier inversion: |G|^-1 sum_zeta E e(zeta.S) e(-zeta.a) == P(S = a) in Q(e(1/L)).
 *
 * Characteristic function values are products over steps of sum_x p_x w^{x r_i}, with w a
 * primitive L-th root of unity; the identity is tested after reduction modulo Phi_L.
 */
inline bool exact_inversion_holds(const WeightMultiset& a, const StepLaw& law, const Distribution<Rational>& p) {
    const AbelianGroup& g = a.group();
    const std::int64_t l = g.exponent();
    const auto order = static_cast<std::size_t>(g.order());
    const auto sup = law.support();
    Cyclotomic cyc(l);
    auto mul = [&](const std::vector<Rational>& x, const std::vector<Rational>& y) {
        std::vector<Rational> out(static_cast<std::size_t>(l), Rational(0));
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (sgn(x[i]) == 0) continue;
            for (std::size_t j = 0; j < y.size(); ++j)
                if (sgn(y[j]) != 0) out[(i + j) % static_cast<std::size_t>(l)] += x[i] * y[j];
        }
        return out;
    };
    // characteristic function for every zeta, as group-ring elements of Z/L
    std::vector<std::vector<Rational>> phi(order);
    for (std::size_t z = 0; z < order; ++z) {
        std::vector<Rational> acc(static_cast<std::size_t>(l), Rational(0));
        acc[0] = 1;
        for (auto e : a.expanded()) {
            std::int64_t r = g.pairing_residue({static_cast<std::int64_t>(z)}, e);
            std::vector<Rational> step(static_cast<std::size_t>(l), Rational(0));
            for (const auto& [x, pr] : sup) step[static_cast<std::size_t>(mod_floor(x * r, l))] += pr;
            acc = mul(acc, step);
        }
        phi[z] = std::move(acc);
    }
    for (std::size_t target = 0; target < order; ++target) {
        std::vector<Rational> sum(static_cast<std::size_t>(l), Rational(0));
        for (std::size_t z = 0; z < order; ++z) {
            std::int64_t r = g.pairing_residue({static_cast<std::int64_t>(z)}, {static_cast<std::int64_t>(target)});
            std::size_t shift = static_cast<std::size_t>(mod_floor(-r, l));
            for (std::size_t i = 0; i < phi[z].size(); ++i)
                if (sgn(phi[z][i]) != 0) sum[(i + shift) % static_cast<std::size_t>(l)] += phi[z][i];
        }
        for (auto& c : sum) c /= static_cast<long>(order);
        sum[0] -= p.probability({static_cast<std::int64_t>(target)});
        auto rem = cyc.reduce(sum);
        for (auto& c : rem)
            if (sgn(c) != 0) return false;
    }
    return true;
}

}  // namespace loforge::oracle

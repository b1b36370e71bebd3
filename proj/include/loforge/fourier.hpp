#pragma once

#include <loforge/concentration.hpp>

#include <cmath>
#include <complex>
#include <vector>

namespace loforge {

/// 2L * ||r/L (+1/2)||, an integer in [0, L].
inline std::int64_t distance_units(std::int64_t residue, std::int64_t l, bool shifted) {
    std::int64_t v = 2 * residue + (shifted ? l : 0);
    v %= 2 * l;
    return std::min(v, 2 * l - v);
}

/// sum_i ||zeta.a_i (+1/2)||^2 scaled by (2L)^2, exact.
inline __int128 distance_statistic(const WeightMultiset& a, GroupElement zeta, bool shifted) {
    const AbelianGroup& g = a.group();
    const std::int64_t l = g.exponent();
    __int128 acc = 0;
    for (const auto& [x, mult] : a.items()) {
        __int128 d = distance_units(g.pairing_residue(zeta, x), l, shifted);
        acc += d * d * mult;
    }
    return acc;
}

inline double distance_statistic_double(const WeightMultiset& a, GroupElement zeta, bool shifted) {
    const double l2 = 2.0 * static_cast<double>(a.group().exponent());
    return static_cast<double>(distance_statistic(a, zeta, shifted)) / (l2 * l2);
}

/// E e(zeta.S) for the walk sum x_i a_i, exact product of per-step characteristic values.
inline std::complex<double> characteristic_value(const WeightMultiset& a, const StepLaw& law, GroupElement zeta) {
    const AbelianGroup& g = a.group();
    const auto sup = law.support();
    std::complex<double> acc = 1.0;
    for (const auto& [x, mult] : a.items()) {
        double theta = static_cast<double>(g.pairing_residue(zeta, x)) / static_cast<double>(g.exponent());
        std::complex<double> f = 0.0;
        for (const auto& [c, p] : sup) f += p.get_d() * std::polar(1.0, 2 * M_PI * theta * static_cast<double>(c));
        acc *= std::pow(f, static_cast<double>(mult));
    }
    return acc;
}

/// |E e(zeta.S)|; zeta = 0 gives 1.
inline double fourier_coefficient(const WeightMultiset& a, const StepLaw& law, GroupElement zeta) {
    if (!a.group().finite()) throw std::invalid_argument("Fourier coefficients need a finite group");
    if (zeta.code == 0) return 1.0;
    return std::abs(characteristic_value(a, law, zeta));
}

/// |(1/n) sum_i e(zeta.a_i)|^m for the length-m word walk.
inline double word_fourier_coefficient(const WeightMultiset& a, GroupElement zeta, std::int64_t m) {
    const AbelianGroup& g = a.group();
    if (!g.finite()) throw std::invalid_argument("Fourier coefficients need a finite group");
    std::complex<double> s = 0.0;
    for (const auto& [x, mult] : a.items()) {
        double theta = static_cast<double>(g.pairing_residue(zeta, x)) / static_cast<double>(g.exponent());
        s += static_cast<double>(mult) * std::polar(1.0, 2 * M_PI * theta);
    }
    return std::pow(std::abs(s) / static_cast<double>(a.size()), static_cast<double>(m));
}

/**
 * @brief exp(-8 c sum_i ||zeta.a_i (+1/2)||^2).
 *
 * Unshifted: c = min(alpha, 1 - alpha), 0 < alpha < 1, dominating the lazy-walk coefficient.
 * Shifted: c = alpha > 0 (alpha = m/n for the word walk on the branch where the shifted
 * statistic is the smaller one).
 */
inline double fourier_exp_bound(const WeightMultiset& a, const Rational& alpha, GroupElement zeta, bool shifted) {
    if (!a.group().finite()) throw std::invalid_argument("Fourier bounds need a finite group");
    double c;
    if (shifted) {
        if (alpha <= 0) throw std::invalid_argument("shifted bound needs alpha > 0");
        c = alpha.get_d();
    } else {
        if (alpha <= 0 || alpha >= 1) throw std::invalid_argument("unshifted bound needs 0 < alpha < 1");
        c = std::min(alpha, Rational(1 - alpha)).get_d();
    }
    return std::exp(-8.0 * c * distance_statistic_double(a, zeta, shifted));
}

/// exp(-2 alpha sum_i ||2 zeta.a_i||^2), a bound for the lazy walk valid for every alpha in [0,1].
inline double doubled_exp_bound(const WeightMultiset& a, const Rational& alpha, GroupElement zeta) {
    const AbelianGroup& g = a.group();
    if (!g.finite()) throw std::invalid_argument("Fourier bounds need a finite group");
    if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must lie in [0,1]");
    const std::int64_t l = g.exponent();
    double acc = 0;
    for (const auto& [x, mult] : a.items()) {
        double d = static_cast<double>(distance_units(mod_floor(2 * g.pairing_residue(zeta, x), l), l, false));
        acc += d * d * static_cast<double>(mult);
    }
    const double l2 = 2.0 * static_cast<double>(l);
    return std::exp(-2.0 * alpha.get_d() * acc / (l2 * l2));
}

/// Per-step word-walk bound exp(-(8/n) min(sum ||zeta.a||^2, sum ||zeta.a + 1/2||^2)).
inline double word_step_bound(const WeightMultiset& a, GroupElement zeta) {
    double u = distance_statistic_double(a, zeta, false);
    double v = distance_statistic_double(a, zeta, true);
    return std::exp(-8.0 / static_cast<double>(a.size()) * std::min(u, v));
}

/// max_a |P(S = a) - |G|^-1 sum_zeta E e(zeta.S) e(-zeta.a)| against the exact law.
inline double fourier_inversion_residual(const WeightMultiset& a, const StepLaw& law) {
    const AbelianGroup& g = a.group();
    const auto n = static_cast<std::size_t>(g.order());
    std::vector<std::complex<double>> phi(n);
    for (std::size_t z = 0; z < n; ++z) phi[z] = characteristic_value(a, law, {static_cast<std::int64_t>(z)});
    auto inv = inverse_characteristic(g, phi);
    auto exact = walk_distribution(a, law);
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(inv[i] - exact.mass[i].get_d()));
    return worst;
}

}  // namespace loforge

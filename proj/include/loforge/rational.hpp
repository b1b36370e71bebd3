#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace loforge {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational r(Integer(static_cast<long>(num)), Integer(static_cast<long>(den)));
    r.canonicalize();
    return r;
}

/// Parses "p", "p/q" or a finite decimal such as "0.25".
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac_len = s.size() - dot - 1;
        Integer num;
        if (num.set_str(digits, 10) != 0) throw std::invalid_argument("bad decimal literal: " + s);
        Integer den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline std::int64_t to_int64(const Integer& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
    return z.get_si();
}

/// Natural log of a positive integer without overflowing double range.
inline double log_integer(const Integer& z) {
    if (sgn(z) <= 0) throw std::domain_error("log of non-positive integer");
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

inline double log_rational(const Rational& q) {
    return log_integer(q.get_num()) - log_integer(q.get_den());
}

/// Rational bracket lo < e < hi, 40 significant digits.
inline const Rational& e_lower() {
    static const Rational v("2718281828459045235360287471352662497757/1000000000000000000000000000000000000000");
    return v;
}
inline const Rational& e_upper() {
    static const Rational v("2718281828459045235360287471352662497758/1000000000000000000000000000000000000000");
    return v;
}

inline Rational rational_pow(const Rational& base, unsigned long k) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), k);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), k);
    r.canonicalize();
    return r;
}

/// Rigorous lower bound on e^k for integer k.
inline Rational exp_lower(long k) {
    if (k >= 0) return rational_pow(e_lower(), static_cast<unsigned long>(k));
    return 1 / rational_pow(e_upper(), static_cast<unsigned long>(-k));
}

/// Rigorous upper bound on e^k for integer k.
inline Rational exp_upper(long k) {
    if (k >= 0) return rational_pow(e_upper(), static_cast<unsigned long>(k));
    return 1 / rational_pow(e_lower(), static_cast<unsigned long>(-k));
}

/// Decides x * e^k >= y for positive rationals. A floating estimate settles clear cases;
/// near-ties fall back to the rational bracket, erring towards "false".
inline bool exp_scaled_geq(const Rational& x, long k, const Rational& y) {
    if (sgn(y) <= 0) return true;
    if (sgn(x) <= 0) return false;
    double margin = log_rational(x) + static_cast<double>(k) - log_rational(y);
    if (margin > 1e-9) return true;
    if (margin < -1e-9) return false;
    return x * exp_lower(k) >= y;
}

/// Decides sum_j w_j e^{k_j} >= y with positive weights. Rigorous on near-ties.
inline bool exp_sum_geq(const std::vector<std::pair<Rational, long>>& terms, const Rational& y) {
    if (sgn(y) <= 0) return true;
    double best = -INFINITY;
    std::vector<double> logs;
    for (const auto& [w, k] : terms) {
        if (sgn(w) <= 0) continue;
        double l = log_rational(w) + static_cast<double>(k);
        logs.push_back(l);
        best = std::max(best, l);
    }
    if (logs.empty()) return false;
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - best);
    double margin = best + std::log(acc) - log_rational(y);
    if (margin > 1e-9) return true;
    if (margin < -1e-9) return false;
    Rational lower = 0;
    for (const auto& [w, k] : terms)
        if (sgn(w) > 0) lower += w * exp_lower(k);
    return lower >= y;
}

inline Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

}  // namespace loforge

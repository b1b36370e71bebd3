#pragma once

#include <loforge/group.hpp>

#include <fftw3.h>

#include <complex>
#include <vector>

namespace loforge {

/**
 * @brief Character transform over a finite group, entries indexed by element code.
 *
 * With sign = +1 computes F(zeta) = sum_x f(x) e(zeta.x); with sign = -1 the conjugate
 * transform. No normalisation is applied.
 */
inline std::vector<std::complex<double>> character_transform(const AbelianGroup& g,
                                                             const std::vector<std::complex<double>>& f, int sign) {
    const auto n = static_cast<std::size_t>(g.order());
    if (f.size() != n) throw std::invalid_argument("transform input size does not match the group order");
    std::vector<int> dims;
    for (auto q : g.factors()) dims.push_back(static_cast<int>(q));
    std::vector<std::complex<double>> in(f), out(n);
    auto* pin = reinterpret_cast<fftw_complex*>(in.data());
    auto* pout = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), pin, pout,
                                   sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return out;
}

/// Probability vector from its characteristic function values: P(a) = |G|^-1 sum_zeta phi(zeta) e(-zeta.a).
inline std::vector<double> inverse_characteristic(const AbelianGroup& g, const std::vector<std::complex<double>>& phi) {
    auto raw = character_transform(g, phi, -1);
    std::vector<double> p(raw.size());
    const double inv = 1.0 / static_cast<double>(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) p[i] = raw[i].real() * inv;
    return p;
}

}  // namespace loforge

#pragma once

#include <cmath>
#include <complex>

#include "vpuq/errors.hpp"

namespace vpuq {

/* Faddeeva function w(z) = exp(-z^2) erfc(-iz).
 *
 * For Im z > 0 the shifted midpoint rule applied to the integral definition
 * is exact once the pole correction is added:
 *
 *   w(z) = (i h / pi) sum_n exp(-t_n^2)/(z - t_n) + 2 exp(-z^2)/(1 + exp(-2 pi i z / h)),
 *   t_n = (n + 1/2) h,
 *
 * so the only error is the Gaussian tail truncation (~1e-22 for |t| <= 7).
 * The lower half plane uses w(z) = 2 exp(-z^2) - w(-z).
 */
inline std::complex<double> faddeeva_w(std::complex<double> z) {
    using cplx = std::complex<double>;
    if (z.imag() < 0.0) return 2.0 * std::exp(-z * z) - faddeeva_w(-z);
    constexpr double h = 0.3;
    constexpr int N = 24;  // covers |t| <= 7.35
    cplx sum = 0.0;
    for (int n = -N; n < N; ++n) {
        const double t = (n + 0.5) * h;
        sum += std::exp(-t * t) / (z - t);
    }
    const cplx correction = 2.0 * std::exp(-z * z) /
                            (1.0 + std::exp(cplx(0.0, -2.0 * M_PI / h) * z));
    return cplx(0.0, h / M_PI) * sum + correction;
}

/// Plasma dispersion function Z(zeta) = i sqrt(pi) w(zeta); Z' = -2(1 + zeta Z).
inline std::complex<double> plasma_Z(std::complex<double> zeta) {
    return std::complex<double>(0.0, std::sqrt(M_PI)) * faddeeva_w(zeta);
}

/// Electrostatic dispersion relation for a unit Maxwellian:
///   D(omega) = 1 + k^-2 (1 + zeta Z(zeta)),  zeta = omega/(k sqrt(2)).
inline std::complex<double> dispersion_D(std::complex<double> omega, double k) {
    const auto zeta = omega / (k * std::sqrt(2.0));
    return 1.0 + (1.0 + zeta * plasma_Z(zeta)) / (k * k);
}

namespace detail {

inline std::complex<double> dispersion_newton(double k, std::complex<double> omega) {
    const double sqrt2 = std::sqrt(2.0);
    for (int it = 0; it < 100; ++it) {
        const auto zeta = omega / (k * sqrt2);
        const auto Z = plasma_Z(zeta);
        const auto D = 1.0 + (1.0 + zeta * Z) / (k * k);
        const auto Zp = -2.0 * (1.0 + zeta * Z);
        const auto dD = (Z + zeta * Zp) / (k * k * k * sqrt2);
        const auto delta = D / dD;
        omega -= delta;
        if (std::abs(delta) < 1e-14) return omega;
    }
    throw NoRoot("dispersion Newton did not converge for k = " + std::to_string(k));
}

}  // namespace detail

/// Least-damped root of the dispersion relation. Newton from the cold-fluid
/// (Bohm-Gross) guess, with continuation in k for the strongly damped range.
inline std::complex<double> landau_rate(double k) {
    if (!(k > 0 && k <= 1.0)) throw validation_error("landau_rate: k must be in (0,1]");
    auto guess = [](double kk) {
        return std::complex<double>(std::sqrt(1.0 + 3.0 * kk * kk), -0.02);
    };
    if (k <= 0.35) return detail::dispersion_newton(k, guess(k));
    std::complex<double> omega = detail::dispersion_newton(0.3, guess(0.3));
    double kk = 0.3;
    while (kk < k - 1e-12) {
        kk = std::min(kk + 0.05, k);
        omega = detail::dispersion_newton(kk, omega);
    }
    return omega;
}

}  // namespace vpuq

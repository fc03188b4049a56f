#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace vpuq {

/* Cubic Lagrange weights for interpolation at fractional offset theta in
 * [0,1) between stencil nodes {-1, 0, 1, 2}. The center weight is closed so
 * that the four weights sum to one exactly, which makes constant data an
 * exact fixed point of any shift.
 */
inline std::array<double, 4> cubic_weights(double theta) {
    const double t = theta;
    const double wm1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double wp1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double wp2 = (t + 1.0) * t * (t - 1.0) / 6.0;
    const double w0 = 1.0 - wm1 - wp1 - wp2;
    return {wm1, w0, wp1, wp2};
}

/// Semi-Lagrangian shift of a periodic sample: out[i] = interp(in, i - disp),
/// displacement in grid units.
inline void shift_periodic(const double* in, double* out, int n, double disp, int stride_in = 1,
                           int stride_out = 1) {
    const double foot0 = -disp;
    const double frac = foot0 - std::floor(foot0);
    const long base_off = static_cast<long>(std::floor(foot0));
    const auto w = cubic_weights(frac);
    for (int i = 0; i < n; ++i) {
        long b = i + base_off;
        // wrap b-1 .. b+2 into [0, n)
        long i0 = (b - 1) % n;
        if (i0 < 0) i0 += n;
        const long i1 = (i0 + 1) % n, i2 = (i0 + 2) % n, i3 = (i0 + 3) % n;
        out[static_cast<long>(i) * stride_out] =
            w[0] * in[i0 * stride_in] + w[1] * in[i1 * stride_in] + w[2] * in[i2 * stride_in] +
            w[3] * in[i3 * stride_in];
    }
}

/// Same, but the data is zero outside [0, n-1]: characteristic feet and
/// stencil nodes beyond the boundary read 0.
inline void shift_zero_extended(const double* in, double* out, int n, double disp,
                                int stride_in = 1, int stride_out = 1) {
    const double foot0 = -disp;
    const double frac = foot0 - std::floor(foot0);
    const long base_off = static_cast<long>(std::floor(foot0));
    const auto w = cubic_weights(frac);
    auto val = [&](long idx) -> double {
        return (idx < 0 || idx >= n) ? 0.0 : in[idx * stride_in];
    };
    for (int i = 0; i < n; ++i) {
        const long b = i + base_off;
        out[static_cast<long>(i) * stride_out] =
            w[0] * val(b - 1) + w[1] * val(b) + w[2] * val(b + 1) + w[3] * val(b + 2);
    }
}

/// Periodic shift with a per-node displacement field (grid units).
inline void shift_periodic_varying(const double* in, double* out, int n,
                                   const std::vector<double>& disp, int stride_in = 1,
                                   int stride_out = 1) {
    for (int i = 0; i < n; ++i) {
        const double foot = i - disp[i];
        const double fl = std::floor(foot);
        const double frac = foot - fl;
        const auto w = cubic_weights(frac);
        long i0 = (static_cast<long>(fl) - 1) % n;
        if (i0 < 0) i0 += n;
        const long i1 = (i0 + 1) % n, i2 = (i0 + 2) % n, i3 = (i0 + 3) % n;
        out[static_cast<long>(i) * stride_out] =
            w[0] * in[i0 * stride_in] + w[1] * in[i1 * stride_in] + w[2] * in[i2 * stride_in] +
            w[3] * in[i3 * stride_in];
    }
}

}  // namespace vpuq

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <vector>

#include "vpuq/errors.hpp"

namespace vpuq {

/* Time-weighted sup norm
 *
 *   sup_{t >= t0} t^{-k} exp(atilde t) ||F(., t)||_inf
 *
 * in two parameterizations: atilde supplied directly, or the
 * epsilon-dependent form atilde = a + 1/eps^m. Both run through the same
 * code path so the equivalence is bit-exact in log domain.
 */
struct NormSpec {
    double a = 0.0;
    double t0 = 1.0;
    int k = 0;
    int m = 1;
    double epsilon = 0.5;
    bool m_mode = true;      // if false, a_tilde_direct is used as the weight rate
    double a_tilde_direct = 0.0;

    double atilde() const { return m_mode ? a + std::pow(epsilon, -m) : a_tilde_direct; }

    void validate() const {
        if (t0 <= 0) throw validation_error("NormSpec: t0 must be positive");
        if (k < 0) throw validation_error("NormSpec: k must be nonnegative");
        if (m_mode) {
            if (m < 1) throw validation_error("NormSpec: m must be a positive integer");
            if (!(epsilon > 0 && epsilon < 1))
                throw validation_error("NormSpec: epsilon must be in (0,1)");
        }
    }
};

/// Samples of ||F(., t)||_inf along a run.
struct TimeSeriesSup {
    std::vector<double> times;
    std::vector<double> sup_values;

    void validate() const {
        if (times.size() != sup_values.size())
            throw validation_error("TimeSeriesSup: length mismatch");
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (times[i] < 0) throw validation_error("TimeSeriesSup: negative time");
            if (i > 0 && times[i] <= times[i - 1])
                throw validation_error("TimeSeriesSup: times must be increasing");
        }
    }
};

struct NormResult {
    double log_value = -std::numeric_limits<double>::infinity();
    double value = 0.0;       // exp(log_value); may overflow to inf
    double argmax_time = 0.0;
};

/// Log-domain evaluation: log term = -k log t + atilde t + log sup_value.
inline NormResult weighted_sup_norm(const TimeSeriesSup& series, const NormSpec& spec) {
    series.validate();
    spec.validate();
    const double atilde = spec.atilde();
    NormResult best;
    bool any = false;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double t = series.times[i];
        if (t < spec.t0) continue;
        any = true;
        const double sup = series.sup_values[i];
        const double log_term = (sup > 0)
                                    ? -spec.k * std::log(t) + atilde * t + std::log(sup)
                                    : -std::numeric_limits<double>::infinity();
        if (log_term > best.log_value) {
            best.log_value = log_term;
            best.argmax_time = t;
        }
    }
    if (!any) throw EmptyWindow("no samples at or beyond t0");
    best.value = std::exp(best.log_value);
    return best;
}

struct BDeltaResult {
    double value = 0.0;
    double truncation_bound = 0.0;  // geometric tail estimate from the largest retained |k|
};

/// Weighted l1 norm of spatial Fourier coefficients: sum_k |g_hat(k)| delta^|k|.
inline BDeltaResult b_delta_norm(const std::map<int, std::complex<double>>& coeffs, double delta) {
    if (!(delta > 0 && delta <= 1)) throw validation_error("b_delta_norm: delta must be in (0,1]");
    BDeltaResult r;
    int kmax = 0;
    double edge = 0;
    for (const auto& [k, c] : coeffs) {
        const int ak = std::abs(k);
        r.value += std::abs(c) * std::pow(delta, ak);
        if (ak >= kmax) {
            kmax = ak;
            edge = std::max(edge, std::abs(c));
        }
    }
    if (delta < 1)
        r.truncation_bound = 2.0 * edge * std::pow(delta, kmax + 1) / (1.0 - delta);
    else
        r.truncation_bound = std::numeric_limits<double>::infinity();
    return r;
}

}  // namespace vpuq

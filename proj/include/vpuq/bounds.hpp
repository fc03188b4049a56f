#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "vpuq/errors.hpp"

namespace vpuq {

/* Closed-form bound evaluators. The double exponentials underflow for any
 * interesting parameter range, so every quantity is computed in log domain
 * and the log value is part of each result.
 */

struct LandauParams {
    double a1 = 1.0;
    double a2 = 1.0;
    double a_tilde = 15.0;
    double t0 = 2.0;
    int K = 0;
};

struct BoundParams {
    double C0 = 2.0;      // > 1
    double T = 1.0;
    int d = 2;            // 2 or 3
    double gamma = 1.0;
    double beta = 2.5;    // > 2, 2D only
    double delta0 = 0.5;
    int K0 = 1;
    double C1 = 1.0, C2 = 1.0, C_beta = 1.0;  // nonconstructive constants, config-supplied

    void validate() const {
        if (C0 <= 1) throw validation_error("BoundParams: C0 must exceed 1");
        if (d != 2 && d != 3) throw validation_error("BoundParams: d must be 2 or 3");
        if (T <= 0 || gamma <= 0 || delta0 <= 0 || K0 < 1 || C1 <= 0 || C2 <= 0 || C_beta <= 0)
            throw validation_error("BoundParams: positivity violated");
        if (d == 2 && beta <= 2) throw validation_error("BoundParams: beta must exceed 2");
    }
};

struct ConditionReport {
    std::string name;
    bool pass = false;
    double margin = 0.0;  // >= 0 means pass, by how much (in the condition's own units)
};

struct HReport {
    ConditionReport h1, h2, h3;
    bool all() const { return h1.pass && h2.pass && h3.pass; }
};

struct AReport {
    ConditionReport a1, a2, a3, a4, a5;
    double C_E = 0.0;
    bool all() const { return a1.pass && a2.pass && a3.pass && a4.pass && a5.pass; }
};

/// Probe lattice for the smoothness/decay hypotheses on a damping profile.
struct ProbeLattice {
    std::vector<double> kx, kv;  // transform lattice
    std::vector<double> x, v;    // value lattice
};

/// H1: fhat(kx,kv) <= a1/(1+kx^2) exp(-a_tilde |kv|)  on the probe lattice
/// H2: |f(x,v)| <= a2/(1+v^4)
/// H3: a_tilde >= 15 sqrt(a2)  and  t0 >= max(0, log(8 a1)/a_tilde)
inline HReport check_H(const LandauParams& p,
                       const std::function<double(double, double)>& fhat_probe,
                       const std::function<double(double, double)>& fval_probe,
                       const ProbeLattice& lattice) {
    HReport rep;
    rep.h1.name = "H1-smoothness";
    double worst1 = std::numeric_limits<double>::infinity();
    for (double kx : lattice.kx)
        for (double kv : lattice.kv) {
            const double bound = p.a1 / (1.0 + kx * kx) * std::exp(-p.a_tilde * std::abs(kv));
            worst1 = std::min(worst1, bound - fhat_probe(kx, kv));
        }
    rep.h1.margin = worst1;
    rep.h1.pass = worst1 >= 0;

    rep.h2.name = "H2-decay";
    double worst2 = std::numeric_limits<double>::infinity();
    for (double x : lattice.x)
        for (double v : lattice.v) {
            const double bound = p.a2 / (1.0 + v * v * v * v);
            worst2 = std::min(worst2, bound - std::abs(fval_probe(x, v)));
        }
    rep.h2.margin = worst2;
    rep.h2.pass = worst2 >= 0;

    rep.h3.name = "H3-constants";
    const double m1 = p.a_tilde - 15.0 * std::sqrt(p.a2);
    const double t0_min = std::max(0.0, std::log(8.0 * p.a1) / p.a_tilde);
    const double m2 = p.t0 - t0_min;
    rep.h3.margin = std::min(m1, m2);
    rep.h3.pass = rep.h3.margin >= 0;
    return rep;
}

/// Parameter constraints A1-A5, with C_E = 240 a1 a2 / a_tilde + 4 a1.
inline AReport check_A(const LandauParams& p) {
    AReport rep;
    rep.C_E = 240.0 * p.a1 * p.a2 / p.a_tilde + 4.0 * p.a1;

    rep.a1.name = "A1";
    rep.a1.margin = p.a_tilde - std::max(1.0, 15.0 * std::sqrt(p.a2));
    rep.a1.pass = rep.a1.margin >= 0;

    rep.a2.name = "A2";
    rep.a2.margin =
        p.t0 - std::max({2.0, 4.0 * static_cast<double>(p.K), std::log(8.0 * p.a1) / p.a_tilde});
    rep.a2.pass = rep.a2.margin >= 0;

    rep.a3.name = "A3";
    const double c3 = 50.0 * rep.C_E / p.a_tilde * std::pow(3.0 / p.a_tilde, 3) * std::exp(-3.0);
    rep.a3.margin = 1.0 - c3;
    rep.a3.pass = rep.a3.margin >= 0;

    rep.a4.name = "A4";
    rep.a4.margin = 1.0 / (20.0 * p.a2) - 8.0 * std::exp(1.0);
    rep.a4.pass = rep.a4.margin >= 0;

    rep.a5.name = "A5";
    rep.a5.margin = p.a_tilde * p.a_tilde - 8.0 * rep.C_E;
    rep.a5.pass = rep.a5.margin >= 0;
    return rep;
}

/// A(t) = 1 + eps^-2 sqrt(||rho_g||) max(||rho_f||, ||rho_g||)^{1/2} + eps^-2 ||rho_f - 1||,
/// evaluated per aligned sample.
inline std::vector<double> A_tilde(const std::vector<double>& rho_f_sup,
                                   const std::vector<double>& rho_g_sup,
                                   const std::vector<double>& rho_f_dev_sup, double epsilon) {
    if (rho_f_sup.size() != rho_g_sup.size() || rho_f_sup.size() != rho_f_dev_sup.size())
        throw validation_error("A_tilde: series lengths differ");
    const double ie2 = 1.0 / (epsilon * epsilon);
    std::vector<double> out(rho_f_sup.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = 1.0 +
                 ie2 * std::sqrt(rho_g_sup[i]) * std::sqrt(std::max(rho_f_sup[i], rho_g_sup[i])) +
                 ie2 * rho_f_dev_sup[i];
    }
    return out;
}

/// Trapezoid cumulative integral of samples over their times (last value).
inline double trapezoid(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size()) throw validation_error("trapezoid: length mismatch");
    double s = 0;
    for (std::size_t i = 1; i < times.size(); ++i)
        s += 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
    return s;
}

struct LogValue {
    double log_value = 0.0;
    double value = 0.0;  // exp(log_value), 0 or inf when out of range
    bool underflow = false;
};

/// R(t, x) = 16 d exp[ log(x/(16d)) exp(integral) ], integral = C0 int_0^t A(s) ds.
/// The t argument is carried for report provenance; the formula consumes the
/// precomputed integral.
inline LogValue R_epsilon(double t, double x, double a_tilde_integral, int d) {
    (void)t;
    if (x <= 0) throw validation_error("R_epsilon: x must be positive");
    LogValue r;
    const double base = 16.0 * d;
    r.log_value = std::log(base) + std::log(x / base) * std::exp(a_tilde_integral);
    r.value = std::exp(r.log_value);
    r.underflow = r.log_value < std::log(1e-300);
    return r;
}

struct PhiPsi {
    LogValue phi, psi;
};

/// phi(eps) = 16 d exp[-exp(eps^-K0)],  psi(eps, z) = phi(eps)/(1+z^2).
inline PhiPsi phi_psi(double epsilon, double z, int d, int K0) {
    if (!(epsilon > 0 && epsilon < 1) && epsilon != 1.0)
        throw validation_error("phi_psi: epsilon must be in (0,1]");
    if (K0 < 1) throw validation_error("phi_psi: K0 must be >= 1");
    PhiPsi r;
    r.phi.log_value = std::log(16.0 * d) - std::exp(std::pow(epsilon, -K0));
    r.phi.value = std::exp(r.phi.log_value);
    r.phi.underflow = r.phi.log_value < std::log(1e-300);
    r.psi.log_value = r.phi.log_value - std::log1p(z * z);
    r.psi.value = std::exp(r.psi.log_value);
    r.psi.underflow = r.psi.log_value < std::log(1e-300);
    return r;
}

/// log of the distribution-side convergence speed:
///   (1/eps) exp[-(eps^-(m+1) - eps^-m + a/eps) t0]
inline double rate_kinetic(double epsilon, double a, int m, double t0) {
    if (!(epsilon > 0 && epsilon < 1)) throw validation_error("rate_kinetic: epsilon in (0,1)");
    return -std::log(epsilon) -
           (std::pow(epsilon, -(m + 1)) - std::pow(epsilon, -m) + a / epsilon) * t0;
}

/// log of the field-side convergence speed: extra eps^-2l prefactor.
inline double rate_field(double epsilon, double a, int m, double t0, int l) {
    if (l < 0) throw validation_error("rate_field: l must be >= 0");
    return -2.0 * l * std::log(epsilon) + rate_kinetic(epsilon, a, m, t0);
}

}  // namespace vpuq

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "vpuq/errors.hpp"
#include "vpuq/fft.hpp"
#include "vpuq/grid.hpp"
#include "vpuq/interp.hpp"
#include "vpuq/transport.hpp"
#include "vpuq/uq.hpp"
#include "vpuq/vlasov.hpp"

namespace vpuq {

/* 1D multi-fluid pressureless Euler-Poisson system over a discrete label
 * measure mu(theta):
 *
 *   rho^th_t + (rho^th u^th)_x = 0
 *   u^th_t + u^th u^th_x = E
 *   eps^2 E_x = sum_j w_j rho^thj - 1
 *
 * Conservative upwind transport for rho, upwind forced-Burgers update for u,
 * midpoint (RK2) in time. Valid in the pre-shock window only.
 *
 * With the limit flag the field solve is replaced by the constrained form
 * E = sum_j w_j (rho^th (u^th)^2)_x, which propagates sum_j w_j rho^thj = 1.
 */
struct FluidEnsemble {
    PhaseGrid grid;  // x part only
    std::vector<double> thetas;
    std::vector<double> mu_weights;  // positive, sum to 1
    std::vector<FieldProfile> rho;   // per theta, nonnegative
    std::vector<FieldProfile> u;     // per theta
    double epsilon = 1.0;
    double time = 0.0;

    int n_theta() const { return static_cast<int>(thetas.size()); }

    void validate() const {
        grid.validate();
        if (thetas.size() != mu_weights.size() || thetas.size() != rho.size() ||
            thetas.size() != u.size() || thetas.empty())
            throw validation_error("FluidEnsemble: per-theta arrays must align");
        double neutral = 0;
        for (std::size_t j = 0; j < thetas.size(); ++j) {
            neutral += mu_weights[j] * rho[j].mean();
            for (double v : rho[j].values)
                if (v < 0) throw validation_error("FluidEnsemble: negative density");
        }
        if (std::abs(neutral - 1.0) > 1e-8)
            throw validation_error("FluidEnsemble: theta-averaged density mean must be 1");
    }
};

/// Discretization of d mu(theta) = c dtheta / (1 + |theta|^{d+1}) on [-Theta, Theta]
/// by Gauss-Legendre nodes, weights renormalized to sum to 1.
inline void build_mu_quadrature(int n_theta, double Theta, int d_exponent,
                                std::vector<double>& thetas, std::vector<double>& weights) {
    if (n_theta < 1) throw validation_error("build_mu_quadrature: need n_theta >= 1");
    if (n_theta == 1) {
        thetas = {0.0};
        weights = {1.0};
        return;
    }
    std::vector<double> x, w;
    quad::gauss_legendre(n_theta, x, w);
    thetas.resize(n_theta);
    weights.resize(n_theta);
    double total = 0;
    for (int j = 0; j < n_theta; ++j) {
        thetas[j] = Theta * x[j];
        const double dens = 1.0 / (1.0 + std::pow(std::abs(thetas[j]), d_exponent + 1));
        weights[j] = Theta * w[j] * dens;
        total += weights[j];
    }
    for (double& v : weights) v /= total;
}

namespace fluid_detail {

struct Deriv {
    std::vector<std::vector<double>> drho, du;  // per theta
};

inline FieldProfile efield(const FluidEnsemble& s, bool limit_mode) {
    FieldProfile rho_bar(s.grid, FieldKind::ChargeDensity);
    for (int j = 0; j < s.n_theta(); ++j)
        for (int i = 0; i < s.grid.nx; ++i) rho_bar[i] += s.mu_weights[j] * s.rho[j][i];
    if (!limit_mode) return poisson_solve(rho_bar, s.epsilon);
    // constrained limit field: E = sum_j w_j d/dx (rho_j u_j^2)
    std::vector<double> flux(s.grid.nx, 0.0);
    for (int j = 0; j < s.n_theta(); ++j)
        for (int i = 0; i < s.grid.nx; ++i)
            flux[i] += s.mu_weights[j] * s.rho[j][i] * s.u[j][i] * s.u[j][i];
    FieldProfile e(s.grid, FieldKind::ElectricField);
    e.values = spectral_derivative(flux, 1, s.grid.length_L);
    return e;
}

inline Deriv derivative(const FluidEnsemble& s, const FieldProfile& e) {
    const int nx = s.grid.nx;
    const double dx = s.grid.dx();
    Deriv d;
    d.drho.assign(s.n_theta(), std::vector<double>(nx));
    d.du.assign(s.n_theta(), std::vector<double>(nx));
    for (int j = 0; j < s.n_theta(); ++j) {
        const auto& rho = s.rho[j].values;
        const auto& u = s.u[j].values;
        // conservative upwind flux rho*u through each right face
        std::vector<double> flux(nx);
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1) % nx;
            const double uf = 0.5 * (u[i] + u[ip]);
            flux[i] = uf > 0 ? rho[i] * uf : rho[ip] * uf;
        }
        for (int i = 0; i < nx; ++i) {
            const int im = (i + nx - 1) % nx;
            d.drho[j][i] = -(flux[i] - flux[im]) / dx;
            const int ip = (i + 1) % nx;
            const double dup = u[i] > 0 ? (u[i] - u[im]) / dx : (u[ip] - u[i]) / dx;
            d.du[j][i] = -u[i] * dup + e[i];
        }
    }
    return d;
}

inline double max_shear(const FluidEnsemble& s) {
    const int nx = s.grid.nx;
    const double dx = s.grid.dx();
    double m = 0;
    for (int j = 0; j < s.n_theta(); ++j)
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1) % nx, im = (i + nx - 1) % nx;
            m = std::max(m, std::abs(s.u[j][ip] - s.u[j][im]) / (2.0 * dx));
        }
    return m;
}

inline FluidEnsemble apply(const FluidEnsemble& s, const Deriv& d, double dt) {
    FluidEnsemble out = s;
    for (int j = 0; j < s.n_theta(); ++j)
        for (int i = 0; i < s.grid.nx; ++i) {
            out.rho[j][i] = s.rho[j][i] + dt * d.drho[j][i];
            out.u[j][i] = s.u[j][i] + dt * d.du[j][i];
        }
    return out;
}

}  // namespace fluid_detail

/// One midpoint step. Throws ShockDetected when the smoothness window ends.
inline FluidEnsemble fluid_step(const FluidEnsemble& s, double dt, bool limit_mode = false) {
    if (fluid_detail::max_shear(s) * dt >= 1.0)
        throw ShockDetected("max|du/dx| dt >= 1 at t = " + std::to_string(s.time));
    const FieldProfile e1 = fluid_detail::efield(s, limit_mode);
    FluidEnsemble mid = fluid_detail::apply(s, fluid_detail::derivative(s, e1), dt / 2);
    const FieldProfile e2 = fluid_detail::efield(mid, limit_mode);
    FluidEnsemble out = fluid_detail::apply(s, fluid_detail::derivative(mid, e2), dt);
    if (limit_mode) {
        // re-project onto the unit constraint sum_j w_j rho_j = 1
        for (int i = 0; i < s.grid.nx; ++i) {
            double bar = 0;
            for (int j = 0; j < s.n_theta(); ++j) bar += s.mu_weights[j] * out.rho[j][i];
            if (bar > 0)
                for (int j = 0; j < s.n_theta(); ++j) out.rho[j][i] /= bar;
        }
    }
    out.time = s.time + dt;
    return out;
}

/// Superposition of mono-kinetic beams: one cloud point per (x cell, theta),
/// positions (x_i, u^thj(x_i)), raw weight w_j rho^thj(x_i) dx. Raw total is
/// returned through `raw_total` (equals the theta-averaged mass); stored
/// weights are normalized to sum to 1.
inline WeightedCloud reconstruct_kinetic(const FluidEnsemble& s, double* raw_total = nullptr) {
    s.validate();
    WeightedCloud cloud;
    cloud.dim_x = 1;
    cloud.dim_v = 1;
    cloud.L = s.grid.length_L;
    const double dx = s.grid.dx();
    double total = 0;
    for (int i = 0; i < s.grid.nx; ++i)
        for (int j = 0; j < s.n_theta(); ++j) {
            const double w = s.mu_weights[j] * s.rho[j][i] * dx;
            total += w;
            if (w > 0) {
                cloud.coords.push_back(s.grid.x(i));
                cloud.coords.push_back(s.u[j][i]);
                cloud.weights.push_back(w);
            }
        }
    if (raw_total) *raw_total = total;
    if (cloud.weights.empty()) throw EmptyCloud("reconstruct_kinetic: zero density");
    for (double& w : cloud.weights) w /= total;
    return cloud;
}

/* Plasma-oscillation corrector. d_(+/-) are complex zero-mean profiles
 * advected by the limit current; the corrector profile is
 *
 *   C(x,t) = -(1/i) ( d_+(x,t) e^{i t/eps} - d_-(x,t) e^{-i t/eps} ).
 */
struct CorrectorState {
    PhaseGrid grid;
    std::vector<std::complex<double>> d_plus, d_minus;
    double epsilon = 1.0;
    double time = 0.0;
};

/// d_(+/-)(x,0) = ( eps E(x,0) +/- i (j(x,0) - mean j) ) / 2, zero-mean gauge.
inline CorrectorState corrector_init(const FieldProfile& e_eps0, const FieldProfile& j_eps0,
                                     double epsilon) {
    if (!e_eps0.grid.same_as(j_eps0.grid))
        throw validation_error("corrector_init: field grids differ");
    CorrectorState c;
    c.grid = e_eps0.grid;
    c.epsilon = epsilon;
    const double jm = j_eps0.mean();
    const double em = e_eps0.mean();
    const int nx = c.grid.nx;
    c.d_plus.resize(nx);
    c.d_minus.resize(nx);
    for (int i = 0; i < nx; ++i) {
        const double re = 0.5 * epsilon * (e_eps0[i] - em);
        const double im = 0.5 * (j_eps0[i] - jm);
        c.d_plus[i] = {re, im};
        c.d_minus[i] = {re, -im};
    }
    return c;
}

/// Semi-Lagrangian advection of d_(+/-) by the limit current over dt, with
/// the zero-mean projection applied after the shift.
inline CorrectorState corrector_step(const CorrectorState& c, const FieldProfile& advecting_current,
                                     double dt) {
    if (!c.grid.same_as(advecting_current.grid))
        throw validation_error("corrector_step: grid mismatch");
    const int nx = c.grid.nx;
    const double dx = c.grid.dx();
    std::vector<double> disp(nx);
    for (int i = 0; i < nx; ++i) disp[i] = advecting_current[i] * dt / dx;
    CorrectorState out = c;
    auto advect = [&](const std::vector<std::complex<double>>& in,
                      std::vector<std::complex<double>>& res) {
        std::vector<double> re(nx), im(nx), sre(nx), sim(nx);
        for (int i = 0; i < nx; ++i) {
            re[i] = in[i].real();
            im[i] = in[i].imag();
        }
        shift_periodic_varying(re.data(), sre.data(), nx, disp);
        shift_periodic_varying(im.data(), sim.data(), nx, disp);
        std::complex<double> mean = 0;
        for (int i = 0; i < nx; ++i) mean += std::complex<double>(sre[i], sim[i]);
        mean /= static_cast<double>(nx);
        for (int i = 0; i < nx; ++i) res[i] = std::complex<double>(sre[i], sim[i]) - mean;
    };
    advect(c.d_plus, out.d_plus);
    advect(c.d_minus, out.d_minus);
    out.time = c.time + dt;
    return out;
}

/// C(x,t); throws ComplexLeak when the conjugate-pair symmetry is broken.
inline FieldProfile corrector_eval(const CorrectorState& c, double t) {
    FieldProfile out(c.grid, FieldKind::Velocity);
    const std::complex<double> ep(std::cos(t / c.epsilon), std::sin(t / c.epsilon));
    const std::complex<double> em = std::conj(ep);
    const std::complex<double> minus_inv_i(0.0, 1.0);  // -(1/i) = i
    double worst_imag = 0;
    for (int i = 0; i < c.grid.nx; ++i) {
        const std::complex<double> val = minus_inv_i * (c.d_plus[i] * ep - c.d_minus[i] * em);
        out[i] = val.real();
        worst_imag = std::max(worst_imag, std::abs(val.imag()));
    }
    if (worst_imag > 1e-9)
        throw ComplexLeak("corrector imaginary residual " + std::to_string(worst_imag));
    return out;
}

/// f~(x, v) = f(x, v - C(x)): per-column velocity shift with the v-advection
/// interpolation machinery.
inline DistField shift_velocity(const DistField& f, const FieldProfile& c) {
    if (f.grid.nx != c.grid.nx || f.grid.length_L != c.grid.length_L)
        throw validation_error("shift_velocity: grid mismatch");
    DistField out = f;
    const double dv = f.grid.dv();
    std::vector<double> shifted(f.grid.nv);
    for (int i = 0; i < f.grid.nx; ++i) {
        shift_zero_extended(f.column(i), shifted.data(), f.grid.nv, c[i] / dv);
        std::copy(shifted.begin(), shifted.end(), out.column(i));
    }
    return out;
}

}  // namespace vpuq

#pragma once

#include <cmath>
#include <vector>

#include "vpuq/errors.hpp"
#include "vpuq/fft.hpp"
#include "vpuq/grid.hpp"
#include "vpuq/uq.hpp"
#include "vpuq/vlasov.hpp"

namespace vpuq {

/* Exact change of variables between the unscaled and quasineutral regimes:
 *
 *   h(x, v, eps t) = f(x/eps mod L, v, t),   E1(x, eps t) = (1/eps) E(x/eps mod L, t).
 *
 * With eps = 1/N the map x -> N x mod L sends the torus to itself N-fold, so
 * sampling h on a target grid with nx_target = N nx_source is pure index
 * arithmetic (bit-exact). Other target resolutions go through trigonometric
 * resampling when enabled.
 */
struct ScalingMap {
    int N = 1;
    double epsilon = 1.0;  // exactly 1/N
    PhaseGrid source;
    PhaseGrid target;
};

inline ScalingMap make_scaling_map(int N, const PhaseGrid& source) {
    if (N < 1) throw validation_error("make_scaling_map: N must be a positive integer");
    source.validate();
    ScalingMap map;
    map.N = N;
    map.epsilon = 1.0 / N;
    map.source = source;
    map.target = source;
    map.target.nx = source.nx * N;
    return map;
}

/// Rescale a recorded run; snapshot times become eps * t_i.
inline Trajectory rescale_solution(const Trajectory& src, const ScalingMap& map,
                                   bool allow_resample = false) {
    Trajectory out;
    const int nxs = map.source.nx, nxt = map.target.nx, nv = map.source.nv;
    const bool exact = (nxt % nxs == 0) && (nxt / nxs == map.N);
    if (!exact && !allow_resample)
        throw GridMismatch("target nx is not N times source nx and resampling is disabled");
    for (const auto& snap : src.snapshots) {
        Snapshot s;
        s.time = map.epsilon * snap.time;
        s.f = DistField(map.target);
        s.f.time = s.time;
        s.efield = FieldProfile(map.target, FieldKind::ElectricField);
        if (exact) {
            for (int it = 0; it < nxt; ++it) {
                const int is = it % nxs;
                for (int j = 0; j < nv; ++j) s.f.at(it, j) = snap.f.at(is, j);
                s.efield[it] = map.N * snap.efield[is];
            }
        } else {
            std::vector<double> pts(nxt);
            const double L = map.source.length_L;
            for (int it = 0; it < nxt; ++it) pts[it] = std::fmod(map.N * map.target.x(it), L);
            std::vector<double> row(nxs);
            for (int j = 0; j < nv; ++j) {
                for (int is = 0; is < nxs; ++is) row[is] = snap.f.at(is, j);
                const auto res = trig_resample(row, L, pts);
                for (int it = 0; it < nxt; ++it) s.f.at(it, j) = res[it];
            }
            const auto e = trig_resample(snap.efield.values, L, pts);
            for (int it = 0; it < nxt; ++it) s.efield[it] = map.N * e[it];
        }
        out.snapshots.push_back(std::move(s));
    }
    for (const auto& snap : out.snapshots) {
        out.diagnostics.push_back({snap.time, total_mass(snap.f), kinetic_energy(snap.f),
                                   field_energy(snap.efield, map.epsilon), snap.f.min_value()});
    }
    return out;
}

struct ResidualReport {
    double pde_linf = 0.0;    // || f_t + v f_x + E f_v ||_inf over interior snapshots
    double gauss_linf = 0.0;  // || eps^2 E_x - (rho - 1) ||_inf over all snapshots
};

/// Finite-difference residual of the quasineutral system on a recorded run.
/// Needs at least 3 uniformly spaced snapshots; centered in t and v, spectral in x.
inline ResidualReport quasineutral_residual(const Trajectory& traj, double epsilon) {
    const auto& snaps = traj.snapshots;
    if (snaps.size() < 3) throw validation_error("quasineutral_residual: need >= 3 snapshots");
    const PhaseGrid& g = snaps[0].f.grid;
    const double dt = snaps[1].time - snaps[0].time;
    for (std::size_t s = 1; s < snaps.size(); ++s)
        if (std::abs(snaps[s].time - snaps[s - 1].time - dt) > 1e-10 * std::max(1.0, dt))
            throw validation_error("quasineutral_residual: snapshots must be uniformly spaced");

    ResidualReport rep;
    std::vector<double> row(g.nx);
    for (std::size_t s = 0; s < snaps.size(); ++s) {
        const auto rho = moment_density(snaps[s].f);
        const auto dES = spectral_derivative(snaps[s].efield.values, 1, g.length_L);
        // the field solve lives in the real-spectral mode space without the
        // Nyquist line; compare both sides there
        std::vector<double> dev(g.nx);
        for (int i = 0; i < g.nx; ++i) dev[i] = rho[i] - 1.0;
        Rfft& fft = Rfft::cached(g.nx);
        auto spec = fft.forward(dev);
        spec[g.nx / 2] = 0.0;
        dev = fft.backward(spec);
        for (int i = 0; i < g.nx; ++i)
            rep.gauss_linf = std::max(rep.gauss_linf, std::abs(epsilon * epsilon * dES[i] - dev[i]));
    }
    for (std::size_t s = 1; s + 1 < snaps.size(); ++s) {
        const DistField& fm = snaps[s - 1].f;
        const DistField& f0 = snaps[s].f;
        const DistField& fp = snaps[s + 1].f;
        const FieldProfile& e = snaps[s].efield;
        // spectral x-derivative per velocity row
        std::vector<std::vector<double>> fx(g.nv, std::vector<double>(g.nx));
        for (int j = 0; j < g.nv; ++j) {
            for (int i = 0; i < g.nx; ++i) row[i] = f0.at(i, j);
            fx[j] = spectral_derivative(row, 1, g.length_L);
        }
        const double dv = g.dv();
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.nv; ++j) {
                const double ft = (fp.at(i, j) - fm.at(i, j)) / (2.0 * dt);
                const double fvm = (j > 0) ? f0.at(i, j - 1) : 0.0;
                const double fvp = (j + 1 < g.nv) ? f0.at(i, j + 1) : 0.0;
                const double fv = (fvp - fvm) / (2.0 * dv);
                const double res = ft + g.v(j) * fx[j][i] + e[i] * fv;
                rep.pde_linf = std::max(rep.pde_linf, std::abs(res));
            }
    }
    return rep;
}

/* Derivative-rescaling identity between a source field E(x,t,z) and its
 * rescaled counterpart E1(x,t,z):
 *
 *   dx^l dz^k E1 (x, t, z) = eps^{-(l+1)} (dx^l dz^k E)(x/eps, t/eps, z).
 *
 * Inputs are aligned per-z snapshot series: E_src[z][tau] on the source grid
 * at times s_tau and E1[z][tau] on the target grid at times eps s_tau.
 * Returns the max abs error over x, snapshots, and ensemble nodes, relative
 * to the max right-hand-side magnitude.
 */
struct IdentityReport {
    double max_rel_error = 0.0;
    double rhs_scale = 0.0;
};

inline IdentityReport field_rescale_identity_check(
    const std::vector<std::vector<FieldProfile>>& e_src,
    const std::vector<std::vector<FieldProfile>>& e1, int l, int kz, const ScalingMap& map,
    const ZEnsemble& zens) {
    const int nz = static_cast<int>(e_src.size());
    if (nz != zens.size() || nz != static_cast<int>(e1.size()))
        throw validation_error("identity check: ensemble size mismatch");
    if (nz == 0 || e_src[0].empty()) throw validation_error("identity check: empty series");
    const std::size_t nt = e_src[0].size();
    const int nxs = map.source.nx, nxt = map.target.nx;
    if (nxt % nxs != 0) throw GridMismatch("identity check: target nx must be a multiple of source nx");

    const double scale_rhs = std::pow(static_cast<double>(map.N), l + 1);
    IdentityReport rep;
    std::vector<double> lhs_nodes(nz), rhs_nodes(nz);
    for (std::size_t tau = 0; tau < nt; ++tau) {
        // x-derivatives per node
        std::vector<std::vector<double>> dl_e1(nz), dl_es(nz);
        for (int z = 0; z < nz; ++z) {
            dl_e1[z] = spectral_derivative(e1[z][tau].values, l, map.target.length_L);
            dl_es[z] = spectral_derivative(e_src[z][tau].values, l, map.source.length_L);
        }
        for (int it = 0; it < nxt; ++it) {
            const int is = it % nxs;
            for (int z = 0; z < nz; ++z) {
                lhs_nodes[z] = dl_e1[z][it];
                rhs_nodes[z] = scale_rhs * dl_es[z][is];
            }
            const auto lhs_k = (kz > 0) ? z_derivative_nodal(lhs_nodes, zens, kz) : lhs_nodes;
            const auto rhs_k = (kz > 0) ? z_derivative_nodal(rhs_nodes, zens, kz) : rhs_nodes;
            for (int z = 0; z < nz; ++z) {
                rep.rhs_scale = std::max(rep.rhs_scale, std::abs(rhs_k[z]));
                rep.max_rel_error = std::max(rep.max_rel_error, std::abs(lhs_k[z] - rhs_k[z]));
            }
        }
    }
    rep.max_rel_error /= std::max(rep.rhs_scale, 1e-300);
    return rep;
}

/// Fraction of phase-space cells where the discrete df/dv vanishes (the
/// almost-everywhere hypothesis is reported, not asserted).
inline double dfdv_zero_measure(const DistField& f, double tol = 1e-14) {
    const double dv = f.grid.dv();
    long zero = 0, total = 0;
    for (int i = 0; i < f.grid.nx; ++i)
        for (int j = 1; j + 1 < f.grid.nv; ++j) {
            const double d = (f.at(i, j + 1) - f.at(i, j - 1)) / (2 * dv);
            if (std::abs(d) <= tol) ++zero;
            ++total;
        }
    return total ? static_cast<double>(zero) / total : 0.0;
}

}  // namespace vpuq

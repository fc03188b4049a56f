#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "vpuq/errors.hpp"
#include "vpuq/fft.hpp"
#include "vpuq/grid.hpp"
#include "vpuq/interp.hpp"

namespace vpuq {

/* 1d1v electron Vlasov system with a fixed neutralizing background, scaled by
 * the quasineutrality parameter epsilon:
 *
 *   f_t + v f_x + E f_v = 0
 *   eps^2 E_x = int f dv - 1,   int_0^L E dx = 0
 *
 * epsilon = 1 is the unscaled regime. Time integration is Strang splitting
 * with semi-Lagrangian shifts: half x-advection, field solve, full
 * v-advection, half x-advection. Cubic interpolation, periodic in x, zero
 * beyond the velocity cutoff.
 */
struct SolverConfig {
    double epsilon = 1.0;
    double dt = 0.1;
    double t_end = 1.0;
    int interpolation_order = 3;  // cubic is the only implemented order
    PhaseGrid grid;

    void validate() const {
        grid.validate();
        if (!(epsilon > 0.0 && epsilon <= 1.0))
            throw validation_error("SolverConfig: epsilon must be in (0,1]");
        if (dt <= 0 || t_end < 0) throw validation_error("SolverConfig: dt > 0, t_end >= 0 required");
        if (interpolation_order != 3)
            throw validation_error("SolverConfig: only cubic interpolation is implemented");
    }

    /// Accuracy advisories, not hard errors: deliberate under-resolution stays possible.
    std::vector<std::string> warnings() const {
        std::vector<std::string> w;
        if (dt > grid.dx() / grid.vmax) w.push_back("dt exceeds dx/vmax advection accuracy bound");
        if (epsilon < 1.0 && dt > epsilon / 10.0)
            w.push_back("dt exceeds epsilon/10: plasma oscillation under-resolved");
        return w;
    }
};

struct DiagnosticsRow {
    double time = 0, mass = 0, kinetic = 0, field_energy = 0, min_f = 0;
};

struct Snapshot {
    double time = 0;
    DistField f;
    FieldProfile efield;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    std::vector<DiagnosticsRow> diagnostics;
};

/// Solve eps^2 E_x = rho - 1 with zero-mean E on the torus, by dividing the
/// k != 0 Fourier modes of (rho - 1) by (i k_phys eps^2). Nyquist is zeroed.
inline FieldProfile poisson_solve(const FieldProfile& rho, double epsilon) {
    const int nx = rho.grid.nx;
    if (std::abs(rho.mean() - 1.0) > 1e-8)
        throw NonNeutral("mean(rho) = " + std::to_string(rho.mean()) + " != 1");
    Rfft& fft = Rfft::cached(nx);
    auto spec = fft.forward(rho.values);
    const double k0 = 2.0 * M_PI / rho.grid.length_L;
    spec[0] = 0.0;  // background subtraction and zero-mean gauge
    for (int k = 1; k < fft.n_modes(); ++k) {
        if (2 * k == nx) {
            spec[k] = 0.0;
            continue;
        }
        spec[k] /= std::complex<double>(0.0, k0 * k * epsilon * epsilon);
    }
    FieldProfile e(rho.grid, FieldKind::ElectricField);
    e.values = fft.backward(spec);
    return e;
}

namespace detail {

inline void advect_x(DistField& f, double dt) {
    const int nx = f.grid.nx, nv = f.grid.nv;
    const double dx = f.grid.dx();
    std::vector<double> row(nx), shifted(nx);
    for (int j = 0; j < nv; ++j) {
        const double disp = f.grid.v(j) * dt / dx;
        for (int i = 0; i < nx; ++i) row[i] = f.at(i, j);
        shift_periodic(row.data(), shifted.data(), nx, disp);
        for (int i = 0; i < nx; ++i) f.at(i, j) = shifted[i];
    }
}

inline void advect_v(DistField& f, const FieldProfile& e, double dt) {
    const int nx = f.grid.nx, nv = f.grid.nv;
    const double dv = f.grid.dv();
    std::vector<double> shifted(nv);
    for (int i = 0; i < nx; ++i) {
        const double disp = e[i] * dt / dv;
        shift_zero_extended(f.column(i), shifted.data(), nv, disp);
        std::copy(shifted.begin(), shifted.end(), f.column(i));
    }
}

}  // namespace detail

/// One Strang step. Returns the advanced field and the mid-step electric field.
inline std::pair<DistField, FieldProfile> step(const DistField& f, const SolverConfig& cfg) {
    DistField g = f;
    const double max0 = f.max_abs();
    detail::advect_x(g, cfg.dt / 2);
    FieldProfile e = poisson_solve(moment_density(g), cfg.epsilon);
    detail::advect_v(g, e, cfg.dt);
    detail::advect_x(g, cfg.dt / 2);
    g.time = f.time + cfg.dt;
    if (g.max_abs() > 1e6 * std::max(max0, 1e-300))
        throw BlowUp("max|f| grew by more than 1e6; reduce dt or raise epsilon");
    return {std::move(g), std::move(e)};
}

inline double field_energy(const FieldProfile& e, double epsilon) {
    double s = 0;
    for (double v : e.values) s += v * v;
    return 0.5 * epsilon * epsilon * s * e.grid.dx();
}

/// Repeated stepping with snapshots at the requested times (multiples of dt)
/// and per-step conservation diagnostics.
inline Trajectory evolve(const DistField& f0, const SolverConfig& cfg,
                         const std::vector<double>& snapshot_times) {
    cfg.validate();
    const long n_steps = static_cast<long>(std::llround(cfg.t_end / cfg.dt));
    if (std::abs(n_steps * cfg.dt - cfg.t_end) > 1e-12 * std::max(1.0, cfg.t_end))
        throw BadSnapshotTime("t_end is not a multiple of dt");
    std::vector<long> snap_steps;
    for (double t : snapshot_times) {
        if (t < 0 || t > cfg.t_end + 1e-12) throw BadSnapshotTime("snapshot time outside [0, t_end]");
        const long s = static_cast<long>(std::llround(t / cfg.dt));
        if (std::abs(s * cfg.dt - t) > 1e-12 * std::max(1.0, cfg.t_end))
            throw BadSnapshotTime("snapshot time is not a multiple of dt");
        snap_steps.push_back(s);
    }

    Trajectory traj;
    DistField f = f0;
    FieldProfile e = poisson_solve(moment_density(f), cfg.epsilon);
    auto record_diag = [&](const DistField& g, const FieldProfile& ef) {
        traj.diagnostics.push_back(
            {g.time, total_mass(g), kinetic_energy(g), field_energy(ef, cfg.epsilon), g.min_value()});
    };
    auto maybe_snapshot = [&](long step_idx, const DistField& g, const FieldProfile& ef) {
        for (std::size_t s = 0; s < snap_steps.size(); ++s)
            if (snap_steps[s] == step_idx) traj.snapshots.push_back({g.time, g, ef});
    };
    record_diag(f, e);
    maybe_snapshot(0, f, e);
    for (long s = 1; s <= n_steps; ++s) {
        auto [g, emid] = step(f, cfg);
        f = std::move(g);
        e = poisson_solve(moment_density(f), cfg.epsilon);
        record_diag(f, e);
        maybe_snapshot(s, f, e);
    }
    return traj;
}

/// Perturbed-Maxwellian initial data:
///   f0 = (1 + alpha cos(2 pi k x / L)) exp(-(v - z_shift)^2 / 2)/sqrt(2 pi),
/// normalized on the grid to unit mean density (total mass L), the neutral
/// charge state the field solve requires. At the default L = 1 this is unit
/// total mass.
inline DistField landau_initial(double alpha, int wavenumber_index, double z_shift,
                                const PhaseGrid& grid) {
    if (std::abs(alpha) >= 1.0) throw validation_error("landau_initial: |alpha| must be < 1");
    if (wavenumber_index < 1) throw validation_error("landau_initial: wavenumber_index must be >= 1");
    grid.validate();
    DistField f(grid);
    const double kx = 2.0 * M_PI * wavenumber_index / grid.length_L;
    const double norm = 1.0 / std::sqrt(2.0 * M_PI);
    for (int i = 0; i < grid.nx; ++i) {
        const double sx = 1.0 + alpha * std::cos(kx * grid.x(i));
        for (int j = 0; j < grid.nv; ++j) {
            const double w = grid.v(j) - z_shift;
            f.at(i, j) = norm * sx * std::exp(-0.5 * w * w);
        }
    }
    const double m = total_mass(f);
    for (double& v : f.values) v *= grid.length_L / m;
    return f;
}

}  // namespace vpuq

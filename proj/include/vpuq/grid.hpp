#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vpuq/errors.hpp"

namespace vpuq {

/* Tensor-product phase-space grid on the periodic interval [0, L) times the
 * truncated velocity interval [-vmax, vmax].
 *
 * x nodes:  x_i = i * dx, i = 0..nx-1          (periodic, dx = L/nx)
 * v nodes:  v_j = -vmax + (j + 1/2) * dv       (cell centers, symmetric about 0)
 *
 * Quadrature is midpoint in both directions; on the periodic x direction this
 * coincides with trapezoid.
 */
struct PhaseGrid {
    int nx = 0;
    int nv = 0;
    double length_L = 1.0;
    double vmax = 8.0;

    double dx() const { return length_L / nx; }
    double dv() const { return 2.0 * vmax / nv; }
    double x(int i) const { return i * dx(); }
    double v(int j) const { return -vmax + (j + 0.5) * dv(); }

    void validate() const {
        if (nx < 4 || nv < 4) throw validation_error("PhaseGrid: nx, nv must be >= 4");
        if (nx % 2 != 0) throw validation_error("PhaseGrid: nx must be even");
        if (length_L <= 0 || vmax <= 0) throw validation_error("PhaseGrid: L, vmax must be positive");
    }

    bool same_as(const PhaseGrid& o) const {
        return nx == o.nx && nv == o.nv && length_L == o.length_L && vmax == o.vmax;
    }
};

enum class FieldKind { ChargeDensity, ElectricField, PotentialPrimitive, Velocity };

/// 1D spatial profile on the periodic x nodes of a grid.
struct FieldProfile {
    PhaseGrid grid;  // only the x part is meaningful
    FieldKind kind = FieldKind::ChargeDensity;
    std::vector<double> values;

    FieldProfile() = default;
    FieldProfile(const PhaseGrid& g, FieldKind k, double fill = 0.0)
        : grid(g), kind(k), values(static_cast<std::size_t>(g.nx), fill) {}

    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }

    double mean() const {
        double s = 0;
        for (double v : values) s += v;
        return s / values.size();
    }
    double max_abs() const {
        double m = 0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

/// Distribution sample f(x_i, v_j) on a phase grid. Storage is row-major with
/// the velocity index contiguous: values[i*nv + j].
struct DistField {
    PhaseGrid grid;
    std::vector<double> values;
    double time = 0.0;

    DistField() = default;
    explicit DistField(const PhaseGrid& g, double fill = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.nx) * g.nv, fill) {}

    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.nv + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.nv + j]; }

    double* column(int i) { return values.data() + static_cast<std::size_t>(i) * grid.nv; }
    const double* column(int i) const { return values.data() + static_cast<std::size_t>(i) * grid.nv; }

    double min_value() const {
        double m = values.empty() ? 0.0 : values[0];
        for (double v : values) m = std::min(m, v);
        return m;
    }
    double max_abs() const {
        double m = 0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

/// rho(x_i) = sum_j f(x_i, v_j) dv
inline FieldProfile moment_density(const DistField& f) {
    FieldProfile rho(f.grid, FieldKind::ChargeDensity);
    const double dv = f.grid.dv();
    for (int i = 0; i < f.grid.nx; ++i) {
        double s = 0;
        const double* col = f.column(i);
        for (int j = 0; j < f.grid.nv; ++j) s += col[j];
        rho[i] = s * dv;
    }
    return rho;
}

/// j(x_i) = sum_j f(x_i, v_j) v_j dv
inline FieldProfile moment_current(const DistField& f) {
    FieldProfile cur(f.grid, FieldKind::Velocity);
    const double dv = f.grid.dv();
    for (int i = 0; i < f.grid.nx; ++i) {
        double s = 0;
        const double* col = f.column(i);
        for (int j = 0; j < f.grid.nv; ++j) s += col[j] * f.grid.v(j);
        cur[i] = s * dv;
    }
    return cur;
}

/// 1/2 iint f v^2 dv dx
inline double kinetic_energy(const DistField& f) {
    const double dv = f.grid.dv(), dx = f.grid.dx();
    double s = 0;
    for (int i = 0; i < f.grid.nx; ++i) {
        const double* col = f.column(i);
        for (int j = 0; j < f.grid.nv; ++j) {
            const double v = f.grid.v(j);
            s += col[j] * v * v;
        }
    }
    return 0.5 * s * dx * dv;
}

/// Total mass iint f dv dx with the grid quadrature.
inline double total_mass(const DistField& f) {
    double s = 0;
    for (double v : f.values) s += v;
    return s * f.grid.dx() * f.grid.dv();
}

/// Quotient metric on the circle of circumference L: min_n |x1 - x2 + nL|.
inline double torus_distance(double x1, double x2, double L) {
    double d = std::fmod(std::abs(x1 - x2), L);
    return std::min(d, L - d);
}

}  // namespace vpuq

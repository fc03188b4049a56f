#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vpuq/errors.hpp"
#include "vpuq/grid.hpp"
#include "vpuq/transport.hpp"
#include "vpuq/vlasov.hpp"

namespace vpuq {

/// Shortest round-trip decimal form (17 significant digits).
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace io {

inline void write_lines(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path.string());
    out << content;
}

inline std::string snapshot_header(double t, int nx, int nv, double L, double vmax) {
    std::ostringstream os;
    os << "# t=" << fmt17(t) << " nx=" << nx << " nv=" << nv << " L=" << fmt17(L)
       << " vmax=" << fmt17(vmax) << "\n";
    return os.str();
}

/// Distribution snapshot: header line, then nx rows of nv comma-separated values.
inline void save_snapshot(const std::filesystem::path& path, const DistField& f) {
    std::ostringstream os;
    os << snapshot_header(f.time, f.grid.nx, f.grid.nv, f.grid.length_L, f.grid.vmax);
    for (int i = 0; i < f.grid.nx; ++i) {
        for (int j = 0; j < f.grid.nv; ++j) {
            if (j) os << ',';
            os << fmt17(f.at(i, j));
        }
        os << '\n';
    }
    write_lines(path, os.str());
}

/// Spatial profile: same header with nv=1, one value per row.
inline void save_profile(const std::filesystem::path& path, const FieldProfile& p, double t) {
    std::ostringstream os;
    os << snapshot_header(t, p.grid.nx, 1, p.grid.length_L, p.grid.vmax);
    for (int i = 0; i < p.grid.nx; ++i) os << fmt17(p[i]) << '\n';
    write_lines(path, os.str());
}

struct SnapshotHeader {
    double t = 0, L = 1, vmax = 8;
    int nx = 0, nv = 0;
};

inline SnapshotHeader parse_header(const std::string& line) {
    SnapshotHeader h;
    if (std::sscanf(line.c_str(), "# t=%lf nx=%d nv=%d L=%lf vmax=%lf", &h.t, &h.nx, &h.nv, &h.L,
                    &h.vmax) != 5)
        throw ConfigParse("bad snapshot header: " + line);
    return h;
}

inline DistField load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open: " + path.string());
    std::string line;
    std::getline(in, line);
    const auto h = parse_header(line);
    PhaseGrid g{h.nx, h.nv, h.L, h.vmax};
    DistField f(g);
    f.time = h.t;
    for (int i = 0; i < h.nx; ++i) {
        if (!std::getline(in, line)) throw ConfigParse("truncated snapshot: " + path.string());
        std::istringstream row(line);
        std::string cell;
        for (int j = 0; j < h.nv; ++j) {
            if (!std::getline(row, cell, ',')) throw ConfigParse("short row in " + path.string());
            f.at(i, j) = std::strtod(cell.c_str(), nullptr);
        }
    }
    return f;
}

inline FieldProfile load_profile(const std::filesystem::path& path, FieldKind kind,
                                 double* t_out = nullptr) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open: " + path.string());
    std::string line;
    std::getline(in, line);
    const auto h = parse_header(line);
    PhaseGrid g{h.nx, std::max(h.nv, 4), h.L, h.vmax};
    FieldProfile p(g, kind);
    for (int i = 0; i < h.nx; ++i) {
        if (!std::getline(in, line)) throw ConfigParse("truncated profile: " + path.string());
        p[i] = std::strtod(line.c_str(), nullptr);
    }
    if (t_out) *t_out = h.t;
    return p;
}

/// Cloud CSV: x...,v...,w columns with a one-line header.
inline void save_cloud(const std::filesystem::path& path, const WeightedCloud& c) {
    std::ostringstream os;
    for (int d = 0; d < c.dim_x; ++d) os << "x" << d << ",";
    for (int d = 0; d < c.dim_v; ++d) os << "v" << d << ",";
    os << "w\n";
    for (int p = 0; p < c.size(); ++p) {
        const double* pt = c.point(p);
        for (int d = 0; d < c.dim(); ++d) os << fmt17(pt[d]) << ',';
        os << fmt17(c.weights[p]) << '\n';
    }
    write_lines(path, os.str());
}

inline WeightedCloud load_cloud(const std::filesystem::path& path, double L) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ConfigParse("empty cloud file: " + path.string());
    int n_x = 0, n_v = 0;
    {
        std::istringstream hdr(line);
        std::string col;
        while (std::getline(hdr, col, ',')) {
            if (!col.empty() && col[0] == 'x') ++n_x;
            if (!col.empty() && col[0] == 'v') ++n_v;
        }
        if (n_x == 0 || n_v == 0) throw ConfigParse("cloud header must name x*/v*/w columns");
    }
    WeightedCloud c;
    c.dim_x = n_x;
    c.dim_v = n_v;
    c.L = L;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        for (int d = 0; d < n_x + n_v; ++d) {
            if (!std::getline(row, cell, ',')) throw ConfigParse("short cloud row");
            c.coords.push_back(std::strtod(cell.c_str(), nullptr));
        }
        if (!std::getline(row, cell, ',')) throw ConfigParse("cloud row missing weight");
        c.weights.push_back(std::strtod(cell.c_str(), nullptr));
    }
    return c;
}

/// Generic numeric table with a header row.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::initializer_list<double> vals) { rows.emplace_back(vals); }
};

inline void save_table(const std::filesystem::path& path, const Table& t) {
    std::ostringstream os;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) os << ',';
        os << t.columns[c];
    }
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            os << fmt17(row[c]);
        }
        os << '\n';
    }
    write_lines(path, os.str());
}

/// Diagnostics table of a kinetic run.
inline Table diagnostics_table(const Trajectory& traj) {
    Table t;
    t.columns = {"time", "mass", "kinetic_energy", "field_energy", "min_f"};
    for (const auto& d : traj.diagnostics)
        t.add_row({d.time, d.mass, d.kinetic, d.field_energy, d.min_f});
    return t;
}

}  // namespace io
}  // namespace vpuq

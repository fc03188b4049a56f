#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "vpuq/config.hpp"
#include "vpuq/fluid.hpp"
#include "vpuq/io.hpp"
#include "vpuq/manifest.hpp"
#include "vpuq/transport.hpp"
#include "vpuq/uq.hpp"
#include "vpuq/vlasov.hpp"

namespace vpuq {

/* Cold-beam comparison between the eps-scaled kinetic solution (with the
 * plasma-oscillation corrector applied) and the mono-kinetic reconstruction
 * of the constrained-limit fluid run, measured in W1 and in the G functional,
 * across a z ensemble and a decreasing eps list.
 *
 * The prepared family scales the initial density perturbation with eps
 * (amplitude c(z) eps), which keeps the limit data z-independent and the
 * velocity oscillation O(1), exactly the regime the corrector targets.
 */
struct TrendRow {
    double eps = 0, z = 0;
    int z_index = 0;
    double sup_w1 = 0;
    double g_eps = 0;
    bool member = false;
};

struct TrendViolation {
    int z_index = 0;
    double eps_prev = 0, eps = 0;
    double value_prev = 0, value = 0;
    std::string column;  // "sup_w1" or "g_eps"
};

struct TrendReport {
    std::vector<TrendRow> rows;
    std::vector<TrendViolation> violations;  // recorded, not fatal
    std::vector<bool> member;
    int z0_index = 0;
    bool w1_nonincreasing = true;
    bool g_decreasing = true;
};

namespace trend_detail {

struct CaseSetup {
    double c_z = 0;      // density perturbation coefficient
    double u0 = 0;       // drift
    double sigma_v = 0;  // kinetic beam width
};

struct FluidSeries {
    std::vector<double> times;
    std::vector<FluidEnsemble> states;
    std::vector<FieldProfile> correctors;  // aligned; only on the eps run
};

inline DistField cold_beam(const PhaseGrid& g, double c_amp, double u0, double sigma) {
    DistField f(g);
    const double kx = 2.0 * M_PI / g.length_L;
    for (int i = 0; i < g.nx; ++i) {
        const double rho = 1.0 + c_amp * std::cos(kx * g.x(i));
        for (int j = 0; j < g.nv; ++j) {
            const double w = (g.v(j) - u0) / sigma;
            f.at(i, j) = rho * std::exp(-0.5 * w * w) / (sigma * std::sqrt(2.0 * M_PI));
        }
    }
    const double m = total_mass(f);
    for (double& v : f.values) v *= g.length_L / m;
    return f;
}

inline FluidEnsemble cold_fluid(const PhaseGrid& g, double c_amp, double u0, double eps) {
    FluidEnsemble s;
    s.grid = g;
    s.thetas = {u0};
    s.mu_weights = {1.0};
    s.epsilon = eps;
    FieldProfile rho(g, FieldKind::ChargeDensity);
    const double kx = 2.0 * M_PI / g.length_L;
    for (int i = 0; i < g.nx; ++i) rho[i] = 1.0 + c_amp * std::cos(kx * g.x(i));
    s.rho = {rho};
    s.u = {FieldProfile(g, FieldKind::Velocity, u0)};
    return s;
}

inline FieldProfile theta_current(const FluidEnsemble& s) {
    FieldProfile j(s.grid, FieldKind::Velocity);
    for (int th = 0; th < s.n_theta(); ++th)
        for (int i = 0; i < s.grid.nx; ++i) j[i] += s.mu_weights[th] * s.rho[th][i] * s.u[th][i];
    return j;
}

/// March a fluid state to the snapshot times with substeps bounded by dt_max.
inline FluidSeries march_fluid(FluidEnsemble s, const std::vector<double>& snap_times,
                               double dt_max, bool limit_mode) {
    FluidSeries out;
    out.times = snap_times;
    for (std::size_t k = 0; k < snap_times.size(); ++k) {
        const double target = snap_times[k];
        while (s.time < target - 1e-12) {
            const int remaining = static_cast<int>(std::ceil((target - s.time) / dt_max - 1e-12));
            const double dt = (target - s.time) / remaining;
            s = fluid_step(s, dt, limit_mode);
        }
        out.states.push_back(s);
    }
    return out;
}

/// Prune a cloud to its heaviest max_points cells (deterministic tie-break by
/// original index), renormalizing the kept weights.
inline WeightedCloud cap_points(const WeightedCloud& c, int max_points) {
    if (c.size() <= max_points) return c;
    std::vector<int> idx(c.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return c.weights[a] > c.weights[b]; });
    idx.resize(max_points);
    std::sort(idx.begin(), idx.end());
    WeightedCloud out;
    out.dim_x = c.dim_x;
    out.dim_v = c.dim_v;
    out.L = c.L;
    double total = 0;
    for (int p : idx) {
        const double* pt = c.point(p);
        out.coords.insert(out.coords.end(), pt, pt + c.dim());
        out.weights.push_back(c.weights[p]);
        total += c.weights[p];
    }
    for (double& w : out.weights) w /= total;
    return out;
}

}  // namespace trend_detail

struct TrendCaseResult {
    double sup_w1 = 0;
    double g_eps = 0;
    ASetRunSups sups;
};

/// One (eps, z) case of the trend pipeline. Exposed for the harness tests.
inline TrendCaseResult run_trend_case(const StudyConfig& cfg, double eps, double c_z, double u0) {
    using namespace trend_detail;
    const json sec = cfg.section("trend");
    const double sigma = cfg.get(sec, "sigma_v", 0.05);
    const double T = cfg.get(sec, "T", 0.5);
    const int n_snaps = cfg.geti(sec, "snapshots", 6);
    const double mass_floor = cfg.get(sec, "mass_floor", 1e-9);
    const int max_points = cfg.geti(sec, "max_cloud_points", 2000);

    std::vector<double> snap_times;
    const double stride = T / (n_snaps - 1);
    for (int s = 0; s < n_snaps; ++s) snap_times.push_back(s * stride);

    // kinetic run at eps
    SolverConfig scfg;
    scfg.grid = cfg.grid;
    const int sub = static_cast<int>(std::ceil(stride / (eps / 10.0) - 1e-12));
    scfg.dt = stride / sub;
    scfg.t_end = T;
    scfg.epsilon = eps;
    auto f0 = cold_beam(cfg.grid, c_z * eps, u0, sigma);
    auto kin = evolve(f0, scfg, snap_times);

    // fluid runs: eps regime and constrained limit
    const double dt_fluid = eps / 40.0;
    auto fl_eps = march_fluid(cold_fluid(cfg.grid, c_z * eps, u0, eps), snap_times, dt_fluid, false);
    auto fl_lim = march_fluid(cold_fluid(cfg.grid, 0.0, u0, eps), snap_times, dt_fluid, true);

    // corrector driven by the limit current, initialized from the eps-run fields
    {
        const auto e0 = fluid_detail::efield(fl_eps.states[0], false);
        const auto j0 = theta_current(fl_eps.states[0]);
        CorrectorState c = corrector_init(e0, j0, eps);
        fl_eps.correctors.push_back(corrector_eval(c, 0.0));
        for (std::size_t k = 1; k < snap_times.size(); ++k) {
            c = corrector_step(c, theta_current(fl_lim.states[k - 1]), stride);
            fl_eps.correctors.push_back(corrector_eval(c, snap_times[k]));
        }
    }

    // W1 between the corrected kinetic cloud and the limit reconstruction
    TrendCaseResult res;
    ThetaSupSeries gser;
    gser.times = snap_times;
    gser.mu_weights = fl_eps.states[0].mu_weights;
    const int n_theta = fl_eps.states[0].n_theta();
    res.sups.rho_eps.assign(n_theta, 0.0);
    res.sups.v_limit.assign(n_theta, 0.0);
    res.sups.rho_dev.assign(n_theta, 0.0);
    res.sups.v_dev_corr.assign(n_theta, 0.0);
    for (std::size_t k = 0; k < snap_times.size(); ++k) {
        FieldProfile minus_c = fl_eps.correctors[k];
        for (double& v : minus_c.values) v = -v;
        const DistField shifted = shift_velocity(kin.snapshots[k].f, minus_c);
        auto cloud_kin = cap_points(cloud_from_field(shifted, mass_floor), max_points);
        auto cloud_fluid = reconstruct_kinetic(fl_lim.states[k]);
        double w1;
        if (static_cast<long>(cloud_kin.size()) * cloud_fluid.size() <= 1000000)
            w1 = wasserstein_exact(cloud_kin, cloud_fluid, 1).value;
        else
            w1 = wasserstein_entropic(cloud_kin, cloud_fluid, 1).value;
        res.sup_w1 = std::max(res.sup_w1, w1);

        // per-theta sup norms feeding G and the membership sups
        std::vector<double> r_eps(n_theta), v_lim(n_theta), r_dev(n_theta), v_dev(n_theta);
        for (int th = 0; th < n_theta; ++th) {
            double a = 0, b = 0, d1 = 0, d2 = 0;
            for (int i = 0; i < cfg.grid.nx; ++i) {
                a = std::max(a, std::abs(fl_eps.states[k].rho[th][i]));
                b = std::max(b, std::abs(fl_lim.states[k].u[th][i]));
                d1 = std::max(d1, std::abs(fl_eps.states[k].rho[th][i] - fl_lim.states[k].rho[th][i]));
                d2 = std::max(d2, std::abs(fl_eps.states[k].u[th][i] - fl_lim.states[k].u[th][i] +
                                           fl_eps.correctors[k][i]));
            }
            r_eps[th] = a;
            v_lim[th] = b;
            r_dev[th] = d1;
            v_dev[th] = d2;
            res.sups.rho_eps[th] = std::max(res.sups.rho_eps[th], a);
            res.sups.v_limit[th] = std::max(res.sups.v_limit[th], b);
            res.sups.rho_dev[th] = std::max(res.sups.rho_dev[th], d1);
            res.sups.v_dev_corr[th] = std::max(res.sups.v_dev_corr[th], d2);
        }
        gser.rho_eps_sup.push_back(r_eps);
        gser.v_limit_sup.push_back(v_lim);
        gser.rho_dev_sup.push_back(r_dev);
        gser.v_dev_corr_sup.push_back(v_dev);
    }
    res.g_eps = G_epsilon(gser);
    return res;
}

inline TrendReport study_wasserstein_trend(const StudyConfig& cfg) {
    prepare_run_dir(cfg.output, cfg.force);
    RunManifest manifest(cfg.output, cfg.raw);
    const json sec = cfg.section("trend");
    const double delta_rho = cfg.get(sec, "delta_rho", 0.4);
    const double z_slope = cfg.get(sec, "z_slope", 0.1);
    const double u0_base = cfg.get(sec, "u0", 0.0);
    const double drift_slope = cfg.get(sec, "drift_slope", 0.1);

    auto zens = build_ensemble(cfg.z_input, cfg.z_nodes, cfg.z_rule);
    const json asec = cfg.section("aset");
    ASetParams aparams;
    aparams.delta = cfg.get(asec, "delta", 0.5);
    aparams.M = cfg.get(asec, "M", 1.5);
    aparams.z0_index = cfg.geti(asec, "z0_index", zens.size() / 2);
    aparams.T = cfg.get(cfg.section("trend"), "T", 0.5);

    TrendReport rep;
    std::vector<ASetNodeRuns> node_runs(zens.size());
    io::Table table;
    table.columns = {"eps", "z_index", "z", "sup_w1", "g_eps", "member"};
    std::vector<std::vector<double>> w1_by_node(zens.size()), g_by_node(zens.size());
    for (double eps : cfg.eps_list) {
        for (int zi = 0; zi < zens.size(); ++zi) {
            const double z = zens.nodes[zi];
            double c_z = delta_rho * (1.0 + z_slope * z);
            double u0 = u0_base;
            if (cfg.z_input.kind == RandomInput::Kind::DriftShift) u0 += drift_slope * z;
            auto res = run_trend_case(cfg, eps, c_z, u0);
            node_runs[zi][eps] = res.sups;
            w1_by_node[zi].push_back(res.sup_w1);
            g_by_node[zi].push_back(res.g_eps);
            TrendRow row;
            row.eps = eps;
            row.z = z;
            row.z_index = zi;
            row.sup_w1 = res.sup_w1;
            row.g_eps = res.g_eps;
            rep.rows.push_back(row);
        }
    }
    rep.member = aset_membership(node_runs, aparams, cfg.eps_list);
    rep.z0_index = aparams.z0_index;
    for (auto& row : rep.rows) row.member = rep.member[row.z_index];

    // monotonicity along the decreasing eps list, per node
    for (int zi = 0; zi < zens.size(); ++zi) {
        for (std::size_t e = 1; e < cfg.eps_list.size(); ++e) {
            if (w1_by_node[zi][e] > w1_by_node[zi][e - 1] + 1e-12) {
                rep.w1_nonincreasing = false;
                rep.violations.push_back({zi, cfg.eps_list[e - 1], cfg.eps_list[e],
                                          w1_by_node[zi][e - 1], w1_by_node[zi][e], "sup_w1"});
            }
            if (!(g_by_node[zi][e] < g_by_node[zi][e - 1])) {
                rep.g_decreasing = false;
                rep.violations.push_back({zi, cfg.eps_list[e - 1], cfg.eps_list[e],
                                          g_by_node[zi][e - 1], g_by_node[zi][e], "g_eps"});
            }
        }
    }

    for (const auto& row : rep.rows)
        table.add_row({row.eps, static_cast<double>(row.z_index), row.z, row.sup_w1, row.g_eps,
                       row.member ? 1.0 : 0.0});
    io::save_table(cfg.output / "trend.csv", table);
    manifest.add_artifact("trend", "trend.csv");
    manifest.add_provenance("sup_w1", "wasserstein_exact",
                            {{"ground", "torus x euclidean v"}, {"q", 1}});
    manifest.add_provenance("g_eps", "G_epsilon", {{"series", "per-theta sup norms"}});
    manifest.add_provenance("member", "aset_membership",
                            {{"M", aparams.M}, {"delta", aparams.delta}, {"z0", aparams.z0_index}});

    io::Table mt;
    mt.columns = {"z_index", "M", "delta", "member"};
    for (int zi = 0; zi < zens.size(); ++zi)
        mt.add_row({static_cast<double>(zi), aparams.M, aparams.delta, rep.member[zi] ? 1.0 : 0.0});
    io::save_table(cfg.output / "membership.csv", mt);
    manifest.add_artifact("membership", "membership.csv");
    manifest.save();
    return rep;
}

/// Membership/G report across (z, eps); same runs, membership table is the product.
inline TrendReport study_aset_report(const StudyConfig& cfg) { return study_wasserstein_trend(cfg); }

}  // namespace vpuq

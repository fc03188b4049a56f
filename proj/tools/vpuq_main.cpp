// Command-line front end: simulate | wasserstein | norms | bounds |
// verify-scaling | study | aset-report.
//
// Exit codes: 0 success, 2 validation/config errors, 3 numerical failures.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "vpuq/config.hpp"
#include "vpuq/io.hpp"
#include "vpuq/manifest.hpp"
#include "vpuq/scaling.hpp"
#include "vpuq/studies.hpp"
#include "vpuq/transport.hpp"

namespace fs = std::filesystem;
using vpuq::json;

namespace {

struct CommonOpts {
    std::string config_file;
    std::vector<std::string> sets;
    std::string output;
    bool force = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_file, "JSON config file");
    cmd->add_option("--set", opts.sets, "dotted-path override key=value (repeatable)");
    cmd->add_option("--output", opts.output, "output directory");
    cmd->add_flag("--force", opts.force, "allow writing into an occupied run directory");
}

vpuq::StudyConfig make_cfg(const CommonOpts& opts) {
    return vpuq::load_config(opts.config_file, opts.sets, opts.output, opts.force);
}

int cmd_simulate(const CommonOpts& opts) {
    auto cfg = make_cfg(opts);
    vpuq::prepare_run_dir(cfg.output, cfg.force);
    vpuq::RunManifest manifest(cfg.output, cfg.raw);
    const json sec = cfg.section("simulate");
    const double alpha = cfg.get(sec, "alpha", 0.001);
    const int k_index = cfg.geti(sec, "wavenumber_index", 1);
    const double z_shift = cfg.get(sec, "z_shift", 0.0);
    const double epsilon = cfg.get(sec, "epsilon", 1.0);
    const double stride = cfg.get(sec, "snapshot_stride", cfg.t_end / 4.0);

    vpuq::SolverConfig scfg;
    scfg.grid = cfg.grid;
    scfg.dt = cfg.dt;
    scfg.t_end = cfg.t_end;
    scfg.epsilon = epsilon;
    for (const auto& w : scfg.warnings()) std::cerr << "warning: " << w << "\n";
    auto f0 = vpuq::landau_initial(alpha, k_index, z_shift, cfg.grid);
    std::vector<double> snaps;
    for (double t = 0.0; t <= cfg.t_end + 1e-12; t += stride) snaps.push_back(t);
    auto traj = vpuq::evolve(f0, scfg, snaps);

    vpuq::io::save_table(cfg.output / "diagnostics.csv", vpuq::io::diagnostics_table(traj));
    manifest.add_artifact("diagnostics", "diagnostics.csv");
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        char fname[64], ename[64];
        std::snprintf(fname, sizeof(fname), "f_%03zu.csv", s);
        std::snprintf(ename, sizeof(ename), "E_%03zu.csv", s);
        vpuq::io::save_snapshot(cfg.output / fname, traj.snapshots[s].f);
        vpuq::io::save_profile(cfg.output / ename, traj.snapshots[s].efield,
                               traj.snapshots[s].time);
        manifest.add_artifact(fname, fname);
        manifest.add_artifact(ename, ename);
    }
    manifest.add_provenance("diagnostics", "evolve",
                            {{"alpha", alpha}, {"epsilon", epsilon}, {"dt", cfg.dt}});
    manifest.save();
    std::cout << "wrote " << traj.snapshots.size() << " snapshots to " << cfg.output.string()
              << "\n";
    return 0;
}

int cmd_wasserstein(const std::string& file_a, const std::string& file_b, int q,
                    const std::string& method, double L) {
    auto a = vpuq::io::load_cloud(file_a, L);
    auto b = vpuq::io::load_cloud(file_b, L);
    json out;
    out["q"] = q;
    const bool small = static_cast<long>(a.size()) * b.size() <= 1000000;
    if (method == "exact" || (method == "auto" && small)) {
        auto r = vpuq::wasserstein_exact(a, b, q);
        out["method"] = "exact";
        out["value"] = r.value;
        out["residuals"] = {{"row", r.coupling.max_row_residual},
                            {"col", r.coupling.max_col_residual}};
    } else {
        auto r = vpuq::wasserstein_entropic(a, b, q);
        out["method"] = "entropic";
        out["value"] = r.value;
        out["residuals"] = {{"marginal", r.marginal_residual}};
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_norms(const CommonOpts& opts, const std::string& series_file) {
    auto cfg = make_cfg(opts);
    // series CSV: header then rows "time,sup"
    std::ifstream in(series_file);
    if (!in) throw vpuq::validation_error("cannot open series: " + series_file);
    std::string line;
    std::getline(in, line);
    vpuq::TimeSeriesSup series;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t, s;
        if (std::sscanf(line.c_str(), "%lf,%lf", &t, &s) != 2)
            throw vpuq::ConfigParse("bad series row: " + line);
        series.times.push_back(t);
        series.sup_values.push_back(s);
    }
    vpuq::NormSpec spec = cfg.norm;
    const json nsec = cfg.section("norm");
    if (nsec.contains("epsilon")) {
        spec.epsilon = nsec.at("epsilon").get<double>();
        spec.m_mode = true;
    }
    if (nsec.contains("a_tilde")) {
        spec.a_tilde_direct = nsec.at("a_tilde").get<double>();
        spec.m_mode = false;
    }
    const auto r = vpuq::weighted_sup_norm(series, spec);
    json out;
    out["norm_value_log"] = r.log_value;
    out["argmax_time"] = r.argmax_time;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_bounds(const CommonOpts& opts) {
    auto cfg = make_cfg(opts);
    const json sec = cfg.section("bounds");
    const int d = cfg.geti(sec, "d", 2);
    const int K0 = cfg.geti(sec, "K0", 1);
    const int l = cfg.geti(sec, "l", 1);
    const double z = cfg.get(sec, "z", 0.0);
    std::printf("eps,log_phi,log_psi,rate_kinetic,rate_field_l%d\n", l);
    for (double eps : cfg.eps_list) {
        const auto pp = vpuq::phi_psi(eps, z, d, K0);
        std::printf("%s,%s,%s,%s,%s\n", vpuq::fmt17(eps).c_str(),
                    vpuq::fmt17(pp.phi.log_value).c_str(), vpuq::fmt17(pp.psi.log_value).c_str(),
                    vpuq::fmt17(vpuq::rate_kinetic(eps, cfg.norm.a, cfg.norm.m, cfg.norm.t0)).c_str(),
                    vpuq::fmt17(vpuq::rate_field(eps, cfg.norm.a, cfg.norm.m, cfg.norm.t0, l)).c_str());
    }
    return 0;
}

int cmd_verify_scaling(const std::string& run_dir, int N) {
    vpuq::validate_manifest(run_dir);
    // load the snapshot series written by `simulate`
    vpuq::Trajectory traj;
    for (int s = 0;; ++s) {
        char fname[64], ename[64];
        std::snprintf(fname, sizeof(fname), "f_%03d.csv", s);
        std::snprintf(ename, sizeof(ename), "E_%03d.csv", s);
        const fs::path fp = fs::path(run_dir) / fname;
        if (!fs::exists(fp)) break;
        vpuq::Snapshot snap;
        snap.f = vpuq::io::load_snapshot(fp);
        snap.time = snap.f.time;
        double et = 0;
        snap.efield = vpuq::io::load_profile(fs::path(run_dir) / ename,
                                             vpuq::FieldKind::ElectricField, &et);
        snap.efield.grid = snap.f.grid;
        traj.snapshots.push_back(std::move(snap));
    }
    if (traj.snapshots.size() < 3)
        throw vpuq::validation_error("need at least 3 snapshots in " + run_dir);

    const auto map = vpuq::make_scaling_map(N, traj.snapshots[0].f.grid);
    const auto res = vpuq::rescale_solution(traj, map);
    const auto resid = vpuq::quasineutral_residual(res, map.epsilon);
    double mass_err = 0;
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        const double m0 = vpuq::total_mass(traj.snapshots[s].f);
        mass_err = std::max(
            mass_err, std::abs(vpuq::total_mass(res.snapshots[s].f) - m0) / std::max(m0, 1e-300));
    }
    // identity errors per x-derivative order (single run: no z spread)
    vpuq::RandomInput zi;
    auto zens = vpuq::build_ensemble(zi, 3, vpuq::NodeRule::ChebyshevGaussLobatto);
    std::vector<std::vector<vpuq::FieldProfile>> e_src(zens.size()), e1(zens.size());
    for (int zn = 0; zn < zens.size(); ++zn)
        for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
            e_src[zn].push_back(traj.snapshots[s].efield);
            e1[zn].push_back(res.snapshots[s].efield);
        }
    json identity = json::array();
    for (int l = 0; l <= 2; ++l) {
        const auto rep = vpuq::field_rescale_identity_check(e_src, e1, l, 0, map, zens);
        identity.push_back({{"l", l}, {"k", 0}, {"max_rel_error", rep.max_rel_error}});
    }
    json out;
    out["epsilon"] = map.epsilon;
    out["mass_error"] = mass_err;
    out["pde_residual"] = resid.pde_linf;
    out["gauss_residual"] = resid.gauss_linf;
    out["identity_errors"] = identity;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_study(const CommonOpts& opts, const std::string& kind_flag) {
    auto cfg = make_cfg(opts);
    if (!kind_flag.empty()) cfg.kind = vpuq::study_kind_from_string(kind_flag);
    const bool ok = vpuq::run_study(cfg);
    std::cout << "study " << vpuq::to_string(cfg.kind) << (ok ? ": pass" : ": recorded violations")
              << "; outputs in " << cfg.output.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasineutral Vlasov-Poisson verification workbench"};
    app.require_subcommand(1);

    CommonOpts sim_opts, was_opts, norm_opts, bounds_opts, vs_opts, study_opts, aset_opts;

    auto* sim = app.add_subcommand("simulate", "run the kinetic solver and persist snapshots");
    add_common(sim, sim_opts);

    auto* was = app.add_subcommand("wasserstein", "distance between two stored clouds");
    std::string file_a, file_b, method = "auto";
    int q = 1;
    double cloud_L = 1.0;
    was->add_option("--a", file_a, "first cloud CSV")->required();
    was->add_option("--b", file_b, "second cloud CSV")->required();
    was->add_option("--q", q, "order (1 or 2)");
    was->add_option("--method", method, "exact | entropic | auto");
    was->add_option("--L", cloud_L, "torus period of the x coordinates");
    add_common(was, was_opts);

    auto* nrm = app.add_subcommand("norms", "weighted sup norm of a diagnostic series");
    std::string series_file;
    nrm->add_option("--series", series_file, "CSV with time,sup columns")->required();
    add_common(nrm, norm_opts);

    auto* bnd = app.add_subcommand("bounds", "bound/rate table over eps_list");
    add_common(bnd, bounds_opts);

    auto* vsc = app.add_subcommand("verify-scaling", "rescale a stored run and check residuals");
    std::string run_dir;
    int N = 2;
    vsc->add_option("--run", run_dir, "run directory written by simulate")->required();
    vsc->add_option("--N", N, "epsilon = 1/N");
    add_common(vsc, vs_opts);

    auto* stu = app.add_subcommand("study", "run a configured study");
    std::string kind_flag;
    stu->add_option("--study", kind_flag, "study kind (overrides config)");
    add_common(stu, study_opts);

    auto* ast = app.add_subcommand("aset-report", "membership report across (z, eps)");
    add_common(ast, aset_opts);

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return cmd_simulate(sim_opts);
        if (was->parsed()) return cmd_wasserstein(file_a, file_b, q, method, cloud_L);
        if (nrm->parsed()) return cmd_norms(norm_opts, series_file);
        if (bnd->parsed()) return cmd_bounds(bounds_opts);
        if (vsc->parsed()) return cmd_verify_scaling(run_dir, N);
        if (stu->parsed()) return cmd_study(study_opts, kind_flag);
        if (ast->parsed()) {
            auto cfg = make_cfg(aset_opts);
            cfg.kind = vpuq::StudyKind::ASetReport;
            const bool ok = vpuq::run_study(cfg);
            std::cout << "aset-report" << (ok ? ": pass" : ": violations recorded") << "\n";
            return 0;
        }
        std::cerr << "unknown subcommand\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help path
        app.exit(e);
        return 2;
    } catch (const vpuq::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const vpuq::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

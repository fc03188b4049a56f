#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vpuq/scaling.hpp"
#include "vpuq/vlasov.hpp"

using namespace vpuq;

namespace {

Trajectory short_run(int nx, int nv, double dt, double t_end, double alpha) {
    SolverConfig cfg;
    cfg.grid = PhaseGrid{nx, nv, 4.0 * M_PI, 6.0};
    cfg.dt = dt;
    cfg.t_end = t_end;
    auto f0 = landau_initial(alpha, 1, 0.0, cfg.grid);
    std::vector<double> snaps;
    for (double t = 0.0; t <= t_end + 1e-12; t += dt) snaps.push_back(t);
    return evolve(f0, cfg, snaps);
}

}  // namespace

TEST_CASE("rescale_solution index arithmetic") {
    auto traj = short_run(16, 32, 0.1, 0.2, 0.05);
    SECTION("N = 1 is the identity") {
        auto map = make_scaling_map(1, traj.snapshots[0].f.grid);
        auto res = rescale_solution(traj, map);
        REQUIRE(res.snapshots.size() == traj.snapshots.size());
        for (std::size_t s = 0; s < res.snapshots.size(); ++s) {
            CHECK(res.snapshots[s].time == traj.snapshots[s].time);
            CHECK(res.snapshots[s].f.values == traj.snapshots[s].f.values);
        }
    }
    SECTION("mass is exactly preserved under the N-fold map") {
        auto map = make_scaling_map(3, traj.snapshots[0].f.grid);
        auto res = rescale_solution(traj, map);
        for (std::size_t s = 0; s < res.snapshots.size(); ++s) {
            CHECK(total_mass(res.snapshots[s].f) ==
                  Catch::Approx(total_mass(traj.snapshots[s].f)).epsilon(1e-13));
            CHECK(res.snapshots[s].time == Catch::Approx(traj.snapshots[s].time / 3.0));
        }
    }
    SECTION("re-reading source points recovers the source exactly") {
        auto map = make_scaling_map(4, traj.snapshots[0].f.grid);
        auto res = rescale_solution(traj, map);
        const auto& f = traj.snapshots[1].f;
        const auto& h = res.snapshots[1].f;
        for (int is = 0; is < f.grid.nx; ++is)
            for (int j = 0; j < f.grid.nv; ++j) CHECK(h.at(is, j) == f.at(is, j));
        // every target node it maps to source node it mod nx
        for (int it = 0; it < h.grid.nx; ++it)
            CHECK(h.at(it, 5) == f.at(it % f.grid.nx, 5));
    }
    SECTION("x-uniform data is invariant in x") {
        SolverConfig cfg;
        cfg.grid = PhaseGrid{16, 32, 1.0, 6.0};
        cfg.dt = 0.1;
        cfg.t_end = 0.1;
        auto f0 = landau_initial(0.0, 1, 0.0, cfg.grid);
        auto traj0 = evolve(f0, cfg, {0.0, 0.1});
        auto map = make_scaling_map(2, cfg.grid);
        auto res = rescale_solution(traj0, map);
        for (int it = 0; it < map.target.nx; ++it)
            CHECK(res.snapshots[1].f.at(it, 7) == res.snapshots[1].f.at(0, 7));
    }
    SECTION("grid mismatch guard") {
        auto map = make_scaling_map(2, traj.snapshots[0].f.grid);
        map.target.nx = 24;  // not 2 * 16
        CHECK_THROWS_AS(rescale_solution(traj, map), GridMismatch);
    }
}

TEST_CASE("quasineutral residual of rescaled runs", "[slow]") {
    SECTION("exact manufactured solution: x-uniform free streaming") {
        SolverConfig cfg;
        cfg.grid = PhaseGrid{16, 64, 1.0, 6.0};
        cfg.dt = 0.05;
        cfg.t_end = 0.2;
        auto f0 = landau_initial(0.0, 1, 0.0, cfg.grid);
        auto traj = evolve(f0, cfg, {0.0, 0.05, 0.1, 0.15, 0.2});
        auto rep = quasineutral_residual(traj, 1.0);
        CHECK(rep.pde_linf < 1e-12);
        CHECK(rep.gauss_linf < 1e-12);
    }
    SECTION("solver output: second-order refinement of the residual") {
        const int N = 2;
        auto measure = [&](int nx, int nv, double dt) {
            auto traj = short_run(nx, nv, dt, 20 * dt, 0.01);
            auto map = make_scaling_map(N, traj.snapshots[0].f.grid);
            auto res = rescale_solution(traj, map);
            return quasineutral_residual(res, map.epsilon);
        };
        auto r1 = measure(32, 64, 0.1);
        auto r2 = measure(64, 128, 0.05);
        CHECK(r1.gauss_linf < 1e-10);
        CHECK(r2.gauss_linf < 1e-10);
        const double slope = std::log2(r1.pde_linf / r2.pde_linf);
        CHECK(slope > 1.7);
        CHECK(slope < 2.3);
    }
}

TEST_CASE("field rescale identity on manufactured analytic fields") {
    // E(x,t,z) = (sin(2 pi x/L) + 0.3 cos(4 pi x/L)) e^{-t} (1 + 0.2 z + z^2)
    const int nxs = 32, N = 4;
    const double L = 1.0;
    PhaseGrid src{nxs, 8, L, 4.0};
    auto map = make_scaling_map(N, src);
    RandomInput in;
    in.z_lo = -1.0;
    in.z_hi = 1.0;
    auto zens = build_ensemble(in, 9, NodeRule::ChebyshevGaussLobatto);

    const std::vector<double> times{0.0, 0.3, 0.7};
    auto e_of = [&](double x, double t, double z) {
        return (std::sin(2.0 * M_PI * x / L) + 0.3 * std::cos(4.0 * M_PI * x / L)) *
               std::exp(-t) * (1.0 + 0.2 * z + z * z);
    };
    std::vector<std::vector<FieldProfile>> e_src(zens.size()), e1(zens.size());
    for (int z = 0; z < zens.size(); ++z) {
        for (double t : times) {
            FieldProfile es(src, FieldKind::ElectricField);
            for (int i = 0; i < nxs; ++i) es[i] = e_of(src.x(i), t, zens.nodes[z]);
            e_src[z].push_back(es);
            FieldProfile et(map.target, FieldKind::ElectricField);
            // E1 built by the identity itself at l = 0
            for (int i = 0; i < map.target.nx; ++i) {
                const double xfold = std::fmod(N * map.target.x(i), L);
                et[i] = N * e_of(xfold, t, zens.nodes[z]);
            }
            e1[z].push_back(et);
        }
    }
    for (int l = 0; l <= 2; ++l)
        for (int k = 0; k <= 2; ++k) {
            auto rep = field_rescale_identity_check(e_src, e1, l, k, map, zens);
            INFO("l=" << l << " k=" << k);
            CHECK(rep.max_rel_error < 1e-8);
        }
}

TEST_CASE("identity check is exact on rescale-produced pairs") {
    auto traj = short_run(32, 64, 0.1, 0.3, 0.02);
    auto map = make_scaling_map(2, traj.snapshots[0].f.grid);
    auto res = rescale_solution(traj, map);
    RandomInput in;
    auto zens = build_ensemble(in, 5, NodeRule::ChebyshevGaussLobatto);
    // constant-in-z series built from the run
    std::vector<std::vector<FieldProfile>> e_src(zens.size()), e1(zens.size());
    for (int z = 0; z < zens.size(); ++z)
        for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
            e_src[z].push_back(traj.snapshots[s].efield);
            e1[z].push_back(res.snapshots[s].efield);
        }
    auto rep = field_rescale_identity_check(e_src, e1, 0, 0, map, zens);
    CHECK(rep.max_rel_error == 0.0);
    // spectral derivatives commute with the exact folding
    auto rep1 = field_rescale_identity_check(e_src, e1, 1, 0, map, zens);
    CHECK(rep1.max_rel_error < 1e-10);
}

TEST_CASE("dfdv zero-measure report") {
    PhaseGrid g{8, 32, 1.0, 4.0};
    DistField f(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.nv; ++j) f.at(i, j) = std::exp(-g.v(j) * g.v(j));
    const double zeros = dfdv_zero_measure(f);
    CHECK(zeros < 0.05);  // only the symmetric center rows can vanish
    DistField flat(g, 1.0);
    CHECK(dfdv_zero_measure(flat) == 1.0);
}

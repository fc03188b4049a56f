#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vpuq/fluid.hpp"

using namespace vpuq;

namespace {

PhaseGrid xgrid(int nx = 64, double L = 1.0) { return PhaseGrid{nx, 8, L, 2.0}; }

FluidEnsemble single_fluid(const PhaseGrid& g, double eps, double rho_amp = 0.0, double u0 = 0.0,
                           int k = 1) {
    FluidEnsemble s;
    s.grid = g;
    s.thetas = {0.0};
    s.mu_weights = {1.0};
    s.epsilon = eps;
    FieldProfile rho(g, FieldKind::ChargeDensity, 1.0);
    FieldProfile u(g, FieldKind::Velocity, u0);
    for (int i = 0; i < g.nx; ++i)
        rho[i] = 1.0 + rho_amp * std::cos(2.0 * M_PI * k * g.x(i) / g.length_L);
    s.rho = {rho};
    s.u = {u};
    return s;
}

}  // namespace

TEST_CASE("mu quadrature") {
    std::vector<double> thetas, weights;
    build_mu_quadrature(9, 5.0, 1, thetas, weights);
    REQUIRE(thetas.size() == 9);
    double s = 0;
    for (double w : weights) {
        CHECK(w > 0);
        s += w;
    }
    CHECK(s == Catch::Approx(1.0).margin(1e-14));
    // symmetric density: nodes and weights mirror
    for (int j = 0; j < 9; ++j) {
        CHECK(thetas[j] == Catch::Approx(-thetas[8 - j]).margin(1e-12));
        CHECK(weights[j] == Catch::Approx(weights[8 - j]).margin(1e-12));
    }
}

TEST_CASE("fluid equilibria") {
    auto g = xgrid();
    SECTION("uniform rest state is a fixed point") {
        auto s = single_fluid(g, 0.5);
        auto s1 = fluid_step(s, 0.01);
        for (int i = 0; i < g.nx; ++i) {
            CHECK(s1.rho[0][i] == Catch::Approx(1.0).margin(1e-14));
            CHECK(s1.u[0][i] == Catch::Approx(0.0).margin(1e-14));
        }
    }
    SECTION("Galilean drift keeps rho = 1, u = u0") {
        auto s = single_fluid(g, 0.5, 0.0, 0.7);
        auto s1 = fluid_step(s, 0.01);
        for (int i = 0; i < g.nx; ++i) {
            CHECK(s1.rho[0][i] == Catch::Approx(1.0).margin(1e-13));
            CHECK(s1.u[0][i] == Catch::Approx(0.7).margin(1e-13));
        }
    }
}

TEST_CASE("cold plasma oscillation at frequency 1/eps", "[slow]") {
    const double eps = 0.1, delta = 1e-3;
    auto g = xgrid(64);
    auto s = single_fluid(g, eps, delta);
    const double period = 2.0 * M_PI * eps;
    const double dt = period / 400.0;
    // after one full period the density perturbation returns to +delta
    double min_amp = 1e9;
    double t_min = -1;
    FluidEnsemble cur = s;
    const int steps = 400;
    for (int n = 0; n < steps; ++n) {
        cur = fluid_step(cur, dt);
        const double amp = cur.rho[0][0] - 1.0;  // cos mode tracked at x = 0
        if (std::abs(amp) < min_amp) {
            min_amp = std::abs(amp);
            t_min = cur.time;
        }
    }
    // linearized dynamics: amp(t) = delta cos(t/eps); quarter period at pi eps/2
    const double quarter = M_PI * eps / 2.0;
    CHECK(std::abs(t_min - quarter) / quarter < 0.02);
    const double final_amp = cur.rho[0][0] - 1.0;
    CHECK(final_amp == Catch::Approx(delta).epsilon(0.02));
}

TEST_CASE("theta-averaged mass conservation") {
    auto g = xgrid(32);
    FluidEnsemble s;
    s.grid = g;
    build_mu_quadrature(5, 3.0, 1, s.thetas, s.mu_weights);
    s.epsilon = 0.3;
    for (int j = 0; j < 5; ++j) {
        FieldProfile rho(g, FieldKind::ChargeDensity);
        FieldProfile u(g, FieldKind::Velocity);
        for (int i = 0; i < g.nx; ++i) {
            rho[i] = 1.0 + 0.01 * std::cos(2.0 * M_PI * g.x(i)) * (1.0 + 0.1 * j);
            u[i] = 0.02 * std::sin(2.0 * M_PI * g.x(i));
        }
        s.rho.push_back(rho);
        s.u.push_back(u);
    }
    // normalize neutrality exactly
    double bar = 0;
    for (int j = 0; j < 5; ++j) bar += s.mu_weights[j] * s.rho[j].mean();
    for (int j = 0; j < 5; ++j)
        for (double& v : s.rho[j].values) v /= bar;

    auto mass = [&](const FluidEnsemble& st) {
        double m = 0;
        for (int j = 0; j < st.n_theta(); ++j) {
            double mj = 0;
            for (double v : st.rho[j].values) mj += v;
            m += st.mu_weights[j] * mj * g.dx();
        }
        return m;
    };
    const double m0 = mass(s);
    FluidEnsemble cur = s;
    for (int n = 0; n < 1000; ++n) cur = fluid_step(cur, 2e-4);
    CHECK(std::abs(mass(cur) - m0) / m0 < 1e-10);
}

TEST_CASE("shock guard") {
    auto g = xgrid(32);
    auto s = single_fluid(g, 1.0);
    for (int i = 0; i < g.nx; ++i) s.u[0][i] = std::sin(2.0 * M_PI * g.x(i));
    CHECK_THROWS_AS(fluid_step(s, 0.5), ShockDetected);  // max|du/dx| dt = 2 pi 0.5 > 1
}

TEST_CASE("reconstruct_kinetic") {
    auto g = xgrid(16);
    SECTION("rest state maps to the zero-velocity line") {
        auto s = single_fluid(g, 1.0);
        double raw = 0;
        auto cloud = reconstruct_kinetic(s, &raw);
        REQUIRE(cloud.size() == g.nx);
        double tot = 0;
        for (int p = 0; p < cloud.size(); ++p) {
            CHECK(cloud.point(p)[1] == 0.0);
            CHECK(cloud.weights[p] == Catch::Approx(1.0 / g.nx).margin(1e-12));
            tot += cloud.weights[p];
        }
        CHECK(tot == Catch::Approx(1.0).margin(1e-10));
        // raw total equals the theta-averaged mass (same summation order)
        double mass = 0;
        for (int i = 0; i < g.nx; ++i) mass += 1.0 * s.rho[0][i] * g.dx();
        CHECK(raw == mass);
    }
    SECTION("two equal beams carry half the mass each") {
        FluidEnsemble s;
        s.grid = g;
        s.thetas = {-1.0, 1.0};
        s.mu_weights = {0.5, 0.5};
        s.epsilon = 1.0;
        s.rho.assign(2, FieldProfile(g, FieldKind::ChargeDensity, 1.0));
        s.u = {FieldProfile(g, FieldKind::Velocity, -1.0), FieldProfile(g, FieldKind::Velocity, 1.0)};
        auto cloud = reconstruct_kinetic(s);
        double beam_lo = 0, beam_hi = 0;
        for (int p = 0; p < cloud.size(); ++p)
            (cloud.point(p)[1] < 0 ? beam_lo : beam_hi) += cloud.weights[p];
        CHECK(beam_lo == Catch::Approx(0.5).margin(1e-12));
        CHECK(beam_hi == Catch::Approx(0.5).margin(1e-12));
    }
    SECTION("self-distance of a reconstruction is zero") {
        auto s = single_fluid(g, 1.0);
        auto a = reconstruct_kinetic(s);
        auto r = wasserstein_exact(a, a, 1);
        CHECK(r.value < 1e-12);
    }
}

TEST_CASE("corrector init closed forms") {
    auto g = xgrid(32);
    SECTION("zero fields give a zero corrector") {
        FieldProfile e(g, FieldKind::ElectricField), j(g, FieldKind::Velocity);
        auto c = corrector_init(e, j, 0.5);
        auto prof = corrector_eval(c, 1.23);
        for (double v : prof.values) CHECK(v == 0.0);
    }
    SECTION("pure current: d = +- i sin/2") {
        FieldProfile e(g, FieldKind::ElectricField), j(g, FieldKind::Velocity);
        for (int i = 0; i < g.nx; ++i) j[i] = std::sin(2.0 * M_PI * g.x(i));
        auto c = corrector_init(e, j, 0.5);
        for (int i = 0; i < g.nx; ++i) {
            CHECK(c.d_plus[i].real() == Catch::Approx(0.0).margin(1e-14));
            CHECK(c.d_plus[i].imag() ==
                  Catch::Approx(0.5 * std::sin(2.0 * M_PI * g.x(i))).margin(1e-12));
            CHECK(c.d_minus[i] == std::conj(c.d_plus[i]));
        }
    }
    SECTION("pure field at eps = 1/2: d = sin/4") {
        FieldProfile e(g, FieldKind::ElectricField), j(g, FieldKind::Velocity);
        for (int i = 0; i < g.nx; ++i) e[i] = std::sin(2.0 * M_PI * g.x(i));
        auto c = corrector_init(e, j, 0.5);
        for (int i = 0; i < g.nx; ++i) {
            CHECK(c.d_plus[i].real() ==
                  Catch::Approx(0.25 * std::sin(2.0 * M_PI * g.x(i))).margin(1e-12));
            CHECK(c.d_plus[i].imag() == 0.0);
        }
    }
}

TEST_CASE("corrector evolution and evaluation") {
    auto g = xgrid(32);
    FieldProfile e(g, FieldKind::ElectricField), j(g, FieldKind::Velocity);
    for (int i = 0; i < g.nx; ++i) j[i] = std::sin(2.0 * M_PI * g.x(i));
    auto c0 = corrector_init(e, j, 0.25);

    SECTION("no advection freezes the state") {
        FieldProfile zero(g, FieldKind::Velocity);
        auto c1 = corrector_step(c0, zero, 0.1);
        for (int i = 0; i < g.nx; ++i) CHECK(std::abs(c1.d_plus[i] - c0.d_plus[i]) < 1e-14);
    }
    SECTION("uniform current over a full period returns the state") {
        FieldProfile one(g, FieldKind::Velocity, 1.0);
        auto c = corrector_step(c0, one, g.length_L);  // shift = L: exact wraparound
        for (int i = 0; i < g.nx; ++i) CHECK(std::abs(c.d_plus[i] - c0.d_plus[i]) < 1e-8);
    }
    SECTION("zero mean is preserved each step") {
        FieldProfile cur(g, FieldKind::Velocity);
        for (int i = 0; i < g.nx; ++i) cur[i] = 0.5 + 0.2 * std::cos(2.0 * M_PI * g.x(i));
        auto c = c0;
        for (int n = 0; n < 10; ++n) {
            c = corrector_step(c, cur, 0.05);
            std::complex<double> mean = 0;
            for (auto v : c.d_plus) mean += v;
            CHECK(std::abs(mean) / static_cast<double>(g.nx) < 1e-12);
        }
    }
    SECTION("hand-evaluated oscillation") {
        CorrectorState c;
        c.grid = g;
        c.epsilon = 0.5;
        c.d_plus.assign(g.nx, std::complex<double>(0.0, 0.5));
        c.d_minus.assign(g.nx, std::complex<double>(0.0, -0.5));
        auto prof = corrector_eval(c, 0.7);
        for (double v : prof.values) CHECK(v == Catch::Approx(-std::cos(0.7 / 0.5)).margin(1e-12));
    }
    SECTION("t = 0 with equal real d gives zero") {
        CorrectorState c;
        c.grid = g;
        c.epsilon = 0.5;
        c.d_plus.assign(g.nx, std::complex<double>(0.3, 0.0));
        c.d_minus.assign(g.nx, std::complex<double>(0.3, 0.0));
        auto prof = corrector_eval(c, 0.0);
        for (double v : prof.values) CHECK(v == 0.0);
    }
    SECTION("2 pi eps periodicity with frozen coefficients") {
        auto p1 = corrector_eval(c0, 0.4);
        auto p2 = corrector_eval(c0, 0.4 + 2.0 * M_PI * c0.epsilon);
        for (int i = 0; i < g.nx; ++i) CHECK(std::abs(p1[i] - p2[i]) < 1e-12);
    }
    SECTION("broken conjugate symmetry raises ComplexLeak") {
        CorrectorState c;
        c.grid = g;
        c.epsilon = 0.5;
        c.d_plus.assign(g.nx, std::complex<double>(0.3, 0.1));
        c.d_minus.assign(g.nx, std::complex<double>(0.3, 0.1));  // not the conjugate
        CHECK_THROWS_AS(corrector_eval(c, 0.3), ComplexLeak);
    }
}

TEST_CASE("shift_velocity") {
    PhaseGrid g{8, 64, 1.0, 4.0};
    DistField f(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.nv; ++j) f.at(i, j) = std::exp(-2.0 * g.v(j) * g.v(j));

    SECTION("zero shift is the identity") {
        FieldProfile c(g, FieldKind::Velocity);
        auto out = shift_velocity(f, c);
        for (std::size_t n = 0; n < f.values.size(); ++n) CHECK(out.values[n] == f.values[n]);
    }
    SECTION("grid-aligned shift moves columns exactly") {
        FieldProfile c(g, FieldKind::Velocity, 3.0 * g.dv());
        auto out = shift_velocity(f, c);
        for (int i = 0; i < g.nx; ++i)
            for (int j = 3; j < g.nv; ++j)
                CHECK(out.at(i, j) == Catch::Approx(f.at(i, j - 3)).margin(1e-15));
    }
    SECTION("mass is preserved away from the cutoff") {
        FieldProfile c(g, FieldKind::Velocity);
        for (int i = 0; i < g.nx; ++i) c[i] = 0.3 * std::sin(2.0 * M_PI * g.x(i));
        auto out = shift_velocity(f, c);
        CHECK(total_mass(out) == Catch::Approx(total_mass(f)).margin(1e-10));
    }
    SECTION("shift down then up recovers f at fourth order") {
        auto run = [](int nv) {
            PhaseGrid gg{8, nv, 1.0, 4.0};
            DistField ff(gg);
            for (int i = 0; i < gg.nx; ++i)
                for (int j = 0; j < gg.nv; ++j) ff.at(i, j) = std::exp(-2.0 * gg.v(j) * gg.v(j));
            FieldProfile c(gg, FieldKind::Velocity, 0.37 * gg.dv() * nv / 64.0);
            FieldProfile cm = c;
            for (double& v : cm.values) v = -v;
            auto there = shift_velocity(ff, c);
            auto back = shift_velocity(there, cm);
            double err = 0;
            for (std::size_t n = 0; n < ff.values.size(); ++n)
                err = std::max(err, std::abs(back.values[n] - ff.values[n]));
            return err;
        };
        const double e1 = run(64), e2 = run(128);
        CHECK(std::log2(e1 / e2) > 3.5);
    }
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vpuq/uq.hpp"

using namespace vpuq;

namespace {

RandomInput unit_input() {
    RandomInput in;
    in.z_lo = -1.0;
    in.z_hi = 1.0;
    return in;
}

ZEnsemble cgl(int n, double lo = -1.0, double hi = 1.0) {
    RandomInput in;
    in.z_lo = lo;
    in.z_hi = hi;
    return build_ensemble(in, n, NodeRule::ChebyshevGaussLobatto);
}

}  // namespace

TEST_CASE("build_ensemble Gauss-Legendre") {
    auto ens = build_ensemble(unit_input(), 2);
    REQUIRE(ens.size() == 2);
    CHECK(ens.nodes[0] == Catch::Approx(-1.0 / std::sqrt(3.0)).margin(1e-14));
    CHECK(ens.nodes[1] == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-14));
    CHECK(ens.weights[0] == Catch::Approx(1.0).margin(1e-14));
    CHECK(ens.weights[1] == Catch::Approx(1.0).margin(1e-14));

    SECTION("weight total equals the support length") {
        for (int n : {2, 5, 9, 16}) {
            auto e = build_ensemble(unit_input(), n);
            double s = 0;
            for (double w : e.weights) s += w;
            CHECK(s == Catch::Approx(2.0).margin(1e-12));
        }
    }
    SECTION("a single node is rejected") {
        CHECK_THROWS_AS(build_ensemble(unit_input(), 1), validation_error);
    }
    SECTION("GL quadrature integrates polynomials exactly") {
        auto e = build_ensemble(unit_input(), 5);
        double s = 0;  // integral of z^8 over [-1,1] = 2/9
        for (int i = 0; i < e.size(); ++i) s += e.weights[i] * std::pow(e.nodes[i], 8);
        CHECK(s == Catch::Approx(2.0 / 9.0).margin(1e-12));
    }
}

TEST_CASE("Clenshaw-Curtis weights") {
    for (int n : {5, 9, 12}) {
        auto e = cgl(n, 0.0, 3.0);
        double s = 0;
        for (double w : e.weights) s += w;
        CHECK(s == Catch::Approx(3.0).margin(1e-12));
        CHECK(e.nodes.front() == Catch::Approx(0.0).margin(1e-14));
        CHECK(e.nodes.back() == Catch::Approx(3.0).margin(1e-14));
    }
}

TEST_CASE("z_derivative") {
    SECTION("even polynomial at the origin") {
        auto ens = cgl(5);
        std::vector<double> vals(5);
        for (int i = 0; i < 5; ++i) vals[i] = ens.nodes[i] * ens.nodes[i];
        CHECK(std::abs(z_derivative(vals, ens, 1, 0.0)) < 1e-12);
        CHECK(z_derivative(vals, ens, 2, 0.0) == Catch::Approx(2.0).margin(1e-10));
    }
    SECTION("analytic function: third derivative of exp") {
        auto ens = cgl(16);
        std::vector<double> vals(16);
        for (int i = 0; i < 16; ++i) vals[i] = std::exp(ens.nodes[i]);
        CHECK(z_derivative(vals, ens, 3, 0.2) == Catch::Approx(std::exp(0.2)).margin(1e-8));
    }
    SECTION("polynomial exactness across degrees") {
        auto ens = cgl(9);
        std::vector<double> vals(9);
        for (int i = 0; i < 9; ++i) vals[i] = std::pow(ens.nodes[i], 5);
        // d^2/dz^2 z^5 = 20 z^3 at z = 0.5
        CHECK(z_derivative(vals, ens, 2, 0.5) == Catch::Approx(20.0 * 0.125).margin(1e-10));
    }
    SECTION("guards") {
        auto gl = build_ensemble(unit_input(), 5, NodeRule::GaussLegendre);
        std::vector<double> vals(5, 1.0);
        CHECK_THROWS_AS(z_derivative(vals, gl, 1, 0.0), validation_error);
        auto big = cgl(41);
        std::vector<double> bv(41, 1.0);
        CHECK_THROWS_AS(z_derivative(bv, big, 1, 0.0), IllConditioned);
        auto small = cgl(4);
        std::vector<double> sv(4, 1.0);
        CHECK_THROWS_AS(z_derivative(sv, small, 4, 0.0), validation_error);
    }
}

TEST_CASE("aset_membership") {
    ASetParams params;
    params.delta = 0.5;
    params.M = 1.5;
    params.z0_index = 1;
    const std::vector<double> eps_list{0.4, 0.2};

    auto sups = [](double scale) {
        ASetRunSups s;
        s.rho_eps = {1.0 * scale, 1.1 * scale};
        s.v_limit = {0.5 * scale, 0.6 * scale};
        s.rho_dev = {0.1 * scale, 0.2 * scale};
        s.v_dev_corr = {0.05 * scale, 0.07 * scale};
        return s;
    };
    std::vector<ASetNodeRuns> runs(3);
    for (double eps : eps_list) {
        runs[0][eps] = sups(1.2);
        runs[1][eps] = sups(1.0);  // reference node
        runs[2][eps] = sups(1.8);
    }

    SECTION("reference node always belongs") {
        auto member = aset_membership(runs, params, eps_list);
        CHECK(member[1]);
        CHECK(member[0]);         // 1.2 <= M = 1.5
        CHECK_FALSE(member[2]);   // 1.8 > 1.5
    }
    SECTION("monotone in M") {
        ASetParams big = params;
        big.M = 2.0;
        auto member_small = aset_membership(runs, params, eps_list);
        auto member_big = aset_membership(runs, big, eps_list);
        for (std::size_t i = 0; i < runs.size(); ++i)
            if (member_small[i]) CHECK(member_big[i]);
    }
    SECTION("smaller delta tests fewer eps, so the set cannot shrink") {
        ASetParams tight = params;
        tight.delta = 0.3;  // only eps = 0.2 tested
        std::vector<ASetNodeRuns> runs2 = runs;
        runs2[2][0.4] = sups(5.0);  // violation only visible at eps = 0.4
        runs2[2][0.2] = sups(1.0);
        auto member_wide = aset_membership(runs2, params, eps_list);
        auto member_tight = aset_membership(runs2, tight, eps_list);
        for (std::size_t i = 0; i < runs2.size(); ++i)
            if (member_wide[i]) CHECK(member_tight[i]);
        CHECK_FALSE(member_wide[2]);
        CHECK(member_tight[2]);
    }
    SECTION("missing run is an error") {
        std::vector<ASetNodeRuns> broken = runs;
        broken[0].erase(0.2);
        CHECK_THROWS_AS(aset_membership(broken, params, eps_list), MissingRun);
    }
}

TEST_CASE("G_epsilon") {
    SECTION("identical runs with zero corrector give zero") {
        ThetaSupSeries s;
        s.times = {0.0, 1.0};
        s.mu_weights = {0.5, 0.5};
        s.rho_eps_sup = {{1.0, 1.0}, {1.0, 1.0}};
        s.v_limit_sup = {{0.0, 0.0}, {0.0, 0.0}};
        s.rho_dev_sup = {{0.0, 0.0}, {0.0, 0.0}};
        s.v_dev_corr_sup = {{0.0, 0.0}, {0.0, 0.0}};
        CHECK(G_epsilon(s) == 0.0);
    }
    SECTION("constant density offset c with equal velocities gives c/2") {
        const double c = 0.37;
        ThetaSupSeries s;
        s.times = {0.0};
        s.mu_weights = {0.25, 0.75};
        s.rho_eps_sup = {{1.0, 1.0}};
        s.v_limit_sup = {{0.0, 0.0}};
        s.rho_dev_sup = {{c, c}};
        s.v_dev_corr_sup = {{0.0, 0.0}};
        CHECK(G_epsilon(s) == Catch::Approx(c / 2.0));
    }
    SECTION("nonnegative always") {
        ThetaSupSeries s;
        s.times = {0.0};
        s.mu_weights = {1.0};
        s.rho_eps_sup = {{2.0}};
        s.v_limit_sup = {{3.0}};
        s.rho_dev_sup = {{0.1}};
        s.v_dev_corr_sup = {{0.2}};
        CHECK(G_epsilon(s) >= 0.0);
        CHECK(G_epsilon(s) == Catch::Approx(2.0 * 0.2 + 0.1 * 3.5));
    }
}

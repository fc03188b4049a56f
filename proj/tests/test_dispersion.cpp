#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "vpuq/dispersion.hpp"

using namespace vpuq;
using cplx = std::complex<double>;

TEST_CASE("faddeeva function against reference values") {
    // reference values computed with an independent high-accuracy implementation
    struct Ref {
        cplx z, w;
    };
    const Ref refs[] = {
        {{2.0, 0.5}, {1.0335882374136668e-01, 2.8478588475009387e-01}},
        {{-1.5, 0.1}, {1.3404934482293446e-01, -4.5176327641605640e-01}},
        {{0.3, -0.7}, {2.2204415716316985e+00, 1.3304356710491234e+00}},
        {{3.2, -1.1}, {-6.1212588840464405e-02, 1.6151312808449872e-01}},
    };
    for (const auto& r : refs) {
        const cplx w = faddeeva_w(r.z);
        CHECK(std::abs(w - r.w) / std::abs(r.w) < 1e-12);
    }
}

TEST_CASE("dispersion root at k = 0.5") {
    const cplx omega = landau_rate(0.5);
    CHECK(omega.real() == Catch::Approx(1.415661888604537).margin(1e-9));
    CHECK(omega.imag() == Catch::Approx(-0.153359466909605).margin(1e-9));
    CHECK(std::abs(dispersion_D(omega, 0.5)) < 1e-10);
}

TEST_CASE("roots across the wavenumber range") {
    // reference roots from the same independent implementation
    struct Ref {
        double k;
        cplx omega;
    };
    const Ref refs[] = {
        {0.3, {1.159846480591919, -0.012620368421117}},
        {0.8, {1.799899318256291, -0.534552361597594}},
        {1.0, {2.045904865690625, -0.851330458692056}},
    };
    for (const auto& r : refs) {
        const cplx omega = landau_rate(r.k);
        CHECK(std::abs(omega - r.omega) < 1e-9);
        CHECK(std::abs(dispersion_D(omega, r.k)) < 1e-10);
    }
}

TEST_CASE("damping sweep: Im(omega) < 0 across resolvable k") {
    for (double k = 0.15; k < 0.96; k += 0.05) {
        const cplx omega = landau_rate(k);
        CHECK(omega.imag() < 0.0);
        CHECK(std::abs(dispersion_D(omega, k)) < 1e-10);
    }
}

TEST_CASE("domain guard") { CHECK_THROWS_AS(landau_rate(1.5), validation_error); }

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "modham/modham.hpp"

using namespace modham;

namespace {

double rel_dev(const GridSpec& g, const Field& a, const Field& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        num += g.weight(i) * d * d;
        den += g.weight(i) * b[i] * b[i];
    }
    return std::sqrt(num / den);
}

} // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(GridSpec::radial3d(0.5, 512), ConfigError);  // ball must fit
    CHECK_THROWS_AS(GridSpec::radial3d(2.0, 8), ConfigError);
    CHECK_THROWS_AS(GridSpec::cartesian(4, 2.0, 64), ConfigError);
    CHECK_THROWS_AS(GridSpec::cartesian(2, 2.0, 48), ConfigError); // not a power of two
    GridSpec g = GridSpec::radial3d(2.0, 256);
    CHECK(g.rnode(0) == doctest::Approx(0.5 * g.dr()));
    // quadrature of 1 over a ball-supported indicator approximates the volume
    Field one(g.size(), 0.0);
    for (int j = 0; j < g.Nr; ++j)
        if (g.rnode(j) < 1.0) one[static_cast<std::size_t>(j)] = 1.0;
    CHECK(quadrature(g, one) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-2));
}

TEST_CASE("mu multiplier on an exact sine mode (radial)") {
    GridSpec g = GridSpec::radial3d(2.0, 256);
    // f = sin(w1 r)/r is an eigenfunction of -lap with eigenvalue w1^2
    double w1 = g.sine_freq(0);
    Field f(g.size());
    for (int j = 0; j < g.Nr; ++j) {
        double r = g.rnode(j);
        f[static_cast<std::size_t>(j)] = std::sin(w1 * r) / r;
    }
    double m = 0.7;
    Field mf = mu_apply(g, f, m, 2.0);
    double expect = w1 * w1 + m * m;
    for (int j : {3, 64, 200})
        CHECK(mf[static_cast<std::size_t>(j)] ==
              doctest::Approx(expect * f[static_cast<std::size_t>(j)]).epsilon(1e-10));
    Field lap = laplacian(g, f);
    for (int j : {3, 64, 200})
        CHECK(lap[static_cast<std::size_t>(j)] ==
              doctest::Approx(-w1 * w1 * f[static_cast<std::size_t>(j)]).epsilon(1e-10));

    // fractional powers compose
    Field ab = mu_apply(g, mu_apply(g, f, m, 0.5), m, -1.5);
    Field c = mu_apply(g, f, m, -1.0);
    CHECK(rel_dev(g, ab, c) < 1e-12);
}

TEST_CASE("radial derivative and gradient on a gaussian") {
    GridSpec g = GridSpec::radial3d(4.0, 1024);
    double sig = 0.3, r0 = 0.0;
    Field f(g.size());
    for (int j = 0; j < g.Nr; ++j) {
        double r = g.rnode(j);
        f[static_cast<std::size_t>(j)] = std::exp(-(r - r0) * (r - r0) / (2 * sig * sig));
    }
    Field rdr = radial_derivative(g, f);
    Field gr2 = gradient_squared(g, f);
    for (int j : {50, 100, 180}) {
        double r = g.rnode(j);
        double fp = -(r / (sig * sig)) * f[static_cast<std::size_t>(j)];
        CHECK(rdr[static_cast<std::size_t>(j)] == doctest::Approx(r * fp).epsilon(1e-6));
        CHECK(gr2[static_cast<std::size_t>(j)] == doctest::Approx(fp * fp).epsilon(1e-6));
    }
}

TEST_CASE("Klein-Gordon evolution conserves energy and is reversible") {
    for (double m : {0.0, 1.0}) {
        GridSpec g = GridSpec::radial3d(4.0, 512);
        CauchyData w = bump_wave(g, m, 0.8);
        w.g = sample_profile(g, ProfileKind::GaussianBump, {0, 0, 0}, 0.7, 0.5);
        double e0 = energy(w);
        CauchyData wt = kg_evolve(w, 1.3);
        CHECK(energy(wt) == doctest::Approx(e0).epsilon(1e-11));
        CauchyData back = kg_evolve(wt, -1.3);
        CHECK(rel_dev(g, back.f, w.f) < 1e-11);
        CHECK(rel_dev(g, back.g, w.g) < 1e-11);
    }
}

TEST_CASE("inner product: complex structure and symplectic form wiring") {
    GridSpec g = GridSpec::radial3d(2.0, 512);
    CauchyData a(g, 1.0), b(g, 1.0);
    a.f = sample_profile(g, ProfileKind::Bump, {0, 0, 0}, 0.8, 1.0);
    a.g = sample_profile(g, ProfileKind::GaussianBump, {0, 0, 0}, 0.6, 0.4);
    b.f = sample_profile(g, ProfileKind::GaussianBump, {0, 0, 0}, 0.7, -0.6);
    b.g = sample_profile(g, ProfileKind::Bump, {0, 0, 0}, 0.5, 0.9);

    // imaginary part is the (mass-independent) symplectic form
    CHECK(inner_product(a, b).imag() == doctest::Approx(symplectic_form(a, b)).epsilon(1e-12));
    CHECK(symplectic_form(b, a) == doctest::Approx(-symplectic_form(a, b)).epsilon(1e-12));

    // i_m is the multiplication by i: (i a, b) = -i (a, b) (antilinear first slot)
    CauchyData ia = complex_structure(a);
    auto lhs = inner_product(ia, b);
    auto rhs = std::complex<double>(0.0, -1.0) * inner_product(a, b);
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(rhs));
    // i_m^2 = -1
    CauchyData iia = complex_structure(ia);
    CHECK(rel_dev(g, iia.f, (a * (-1.0)).f) < 1e-10);

    // norm positivity
    CHECK(inner_product(a, a).real() > 0.0);
    CHECK(std::abs(inner_product(a, a).imag()) < 1e-14);
}

TEST_CASE("dilation is unitary H_m -> H_{lambda m} and preserves beta") {
    GridSpec g = GridSpec::radial3d(4.0, 1024);
    CauchyData a(g, 1.0), b(g, 1.0);
    a.f = sample_profile(g, ProfileKind::Bump, {0, 0, 0}, 0.8, 1.0);
    a.g = sample_profile(g, ProfileKind::GaussianBump, {0, 0, 0}, 0.6, 0.4);
    b.f = sample_profile(g, ProfileKind::GaussianBump, {0, 0, 0}, 0.7, -0.6);
    b.g = sample_profile(g, ProfileKind::Bump, {0, 0, 0}, 0.5, 0.9);
    double lambda = 1.5;
    CauchyData da = dilate(a, lambda), db = dilate(b, lambda);
    CHECK(da.m == doctest::Approx(lambda));
    auto z0 = inner_product(a, b);
    auto z1 = inner_product(da, db);
    CHECK(std::abs(z1 - z0) < 1e-6 * std::abs(z0));
    CHECK(symplectic_form(da, db) == doctest::Approx(symplectic_form(a, b)).epsilon(1e-8));
}

TEST_CASE("cut_to_ball and support radius") {
    GridSpec g = GridSpec::radial3d(2.0, 512);
    CauchyData w = bump_wave(g, 0.0, 1.5);
    CHECK(support_radius(w) > 1.0);
    CauchyData c = cut_to_ball(w, 1.0);
    CHECK(support_radius(c) <= 1.0);
    CHECK_THROWS_AS(cut_to_ball(w, 3.0), BallOutsideGrid);
}

TEST_CASE("massless infrared guard on cartesian grids") {
    GridSpec g = GridSpec::cartesian(2, 2.0, 32);
    Field f(g.size(), 1.0); // pure DC
    CHECK_THROWS_AS(mu_apply(g, f, 0.0, -1.0), MasslessInfrared);
}

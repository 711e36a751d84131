#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "modham/modham.hpp"

using namespace modham;

namespace {

CauchyData reference_bump(const GridSpec& g, double m, bool fComponent) {
    CauchyData w(g, m);
    Field prof(g.size(), 0.0);
    for (int j = 0; j < g.Nr; ++j)
        prof[static_cast<std::size_t>(j)] = bump_profile((g.rnode(j) - 0.45) / 0.3);
    (fComponent ? w.f : w.g) = prof;
    return w;
}

} // namespace

TEST_CASE("frozen entropy values (independent quadrature references)") {
    // references computed with mpmath adaptive quadrature on the closed formula
    GridSpec g = GridSpec::radial3d(4.0, 2048);
    CauchyData wf0 = reference_bump(g, 0.0, true);
    CHECK(entropy_ball(wf0, 1.0).total ==
          doctest::Approx(4.3949461004084771).epsilon(1e-8));

    CauchyData wf1 = reference_bump(g, 1.0, true);
    CHECK(entropy_ball(wf1, 1.0).total ==
          doctest::Approx(4.5377788306791915).epsilon(1e-7));

    CauchyData wg = reference_bump(g, 1.0, false);
    CHECK(entropy_ball(wg, 1.0).total ==
          doctest::Approx(0.12533073755106497).epsilon(1e-9));

    // total energy of the massless fixture
    CHECK(energy(wf0) == doctest::Approx(2.0917892282938544).epsilon(1e-9));
}

TEST_CASE("entropy equals the cutting form for ball-supported data") {
    GridSpec g = GridSpec::radial3d(4.0, 1024);
    for (double m : {0.0, 1.0}) {
        for (bool fc : {true, false}) {
            CauchyData w = reference_bump(g, m, fc);
            EntropyReport rep = entropy_ball(w, 1.0);
            double cut = entropy_cutting_form(w, 1.0);
            CHECK(cut == doctest::Approx(rep.total).epsilon(1e-9));
            CHECK(rep.total ==
                  doctest::Approx(rep.termStress + rep.termNorm + rep.termYukawa));
            CHECK(rep.termStress >= 0.0);
            CHECK(rep.termNorm >= 0.0);
            CHECK(rep.termYukawa >= 0.0);
        }
    }
}

TEST_CASE("time covariance: evaluating at t equals evolving first") {
    GridSpec g = GridSpec::radial3d(4.0, 512);
    CauchyData w(g, 1.0);
    w.f = sample_profile(g, ProfileKind::Bump, {0, 0, 0}, 0.8, 1.0);
    w.g = sample_profile(g, ProfileKind::GaussianBump, {0, 0, 0}, 0.7, 0.5);
    EntropyReport a = entropy_ball(w, 1.0, {0, 0, 0}, 0.3);
    EntropyReport b = entropy_ball(kg_evolve(w, 0.3), 1.0);
    CHECK(a.total == doctest::Approx(b.total).epsilon(1e-12));
}

TEST_CASE("scaling covariance of entropy and matrix elements") {
    GridSpec g = GridSpec::radial3d(4.0, 2048);
    double lambda = 1.5;
    for (bool fc : {true, false}) {
        CauchyData w = reference_bump(g, 1.0, fc);
        CauchyData dw = dilate(w, lambda);
        // S_{Phi}(R) = S_{delta_lambda Phi}(R / lambda) at mass lambda m
        double s0 = entropy_ball(w, 1.0).total;
        double s1 = entropy_ball(dw, 1.0 / lambda).total;
        CHECK(s1 == doctest::Approx(s0).epsilon(1e-6));
        double me0 = matrix_element_logDelta(w, w, 1.0);
        double me1 = matrix_element_logDelta(dw, dw, 1.0 / lambda);
        CHECK(me1 == doctest::Approx(me0).epsilon(1e-6));
    }
}

TEST_CASE("radius scan: Bekenstein bound and large-R proportionality") {
    GridSpec g = GridSpec::radial3d(16.0, 2048);
    CauchyData w(g, 0.0);
    w.f = sample_profile(g, ProfileKind::Bump, {0, 0, 0}, 0.5, 1.0);
    w.g = sample_profile(g, ProfileKind::GaussianBump, {0, 0, 0}, 0.4, 0.6);
    auto reports = radius_scan(w, {0, 0, 0}, 0.0, {1.0, 2.0, 4.0, 8.0});
    for (const auto& r : reports) CHECK(r.bekensteinOK);
    // S / (pi E R) increases toward 1
    for (std::size_t i = 1; i < reports.size(); ++i)
        CHECK(reports[i].ratioLargeR >= reports[i - 1].ratioLargeR - 1e-12);
    CHECK(reports.back().ratioLargeR > 0.95);
    CHECK(reports.back().ratioLargeR < 1.0 + 1e-9);
}

TEST_CASE("small-R areal density with Richardson extrapolation") {
    // the stress term of the entropy is O(R^{d+1}), two orders below the norm
    // term, so the reported leading-coefficient ratio tends to 1 only at
    // points where T00 vanishes: take g = 0 near the center and m = 0
    GridSpec g = GridSpec::radial3d(2.0, 4096);
    CauchyData w(g, 0.0);
    w.f = sample_profile(g, ProfileKind::Bump, {0, 0, 0}, 0.9, 1.0);
    for (int j = 0; j < g.Nr; ++j)
        w.g[static_cast<std::size_t>(j)] = 0.6 * bump_profile((g.rnode(j) - 0.5) / 0.2);
    double R = 0.1;
    double fR = entropy_ball(w, R).smallRArealDensity;
    double fR2 = entropy_ball(w, R / 2).smallRArealDensity;
    CHECK(richardson_r2(fR, fR2) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("sphere area helper") {
    CHECK(sphere_area(3, 1.0) == doctest::Approx(4.0 * M_PI));
    CHECK(sphere_area(2, 2.0) == doctest::Approx(4.0 * M_PI)); // 2 pi R
    CHECK(sphere_area(3, 2.0) == doctest::Approx(16.0 * M_PI));
}

TEST_CASE("entropy rejects balls outside the grid") {
    GridSpec g = GridSpec::radial3d(2.0, 256);
    CauchyData w = bump_wave(g, 0.0, 0.5);
    CHECK_THROWS_AS(entropy_ball(w, 3.0), BallOutsideGrid);
}

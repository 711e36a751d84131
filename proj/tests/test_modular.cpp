#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modham/modham.hpp"

using namespace modham;

TEST_CASE("complex space structure checks") {
    ComplexSpace amb = ComplexSpace::standard(3);
    CHECK(amb.realDim() == 6);
    CHECK((amb.Jz() * amb.Jz() + Mat::Identity(6, 6)).norm() < 1e-14);

    // non-positive metric rejected
    Mat J = ComplexSpace::standard(1).J();
    Mat g = Mat::Identity(2, 2);
    g(0, 0) = -1.0;
    CHECK_THROWS_AS(ComplexSpace(J, g), ConfigError);
}

TEST_CASE("frozen modular spectrum of an explicit 2d subspace") {
    // reference spectrum computed independently (numpy eigvalsh of S^T S)
    ComplexSpace amb = ComplexSpace::standard(2);
    Mat B(4, 2);
    B << 1.0, 0.2,
         0.3, -0.5,
         0.1, 0.7,
         -0.4, 0.6;
    StandardSubspace H = make_standard_subspace(amb, B);
    ModularData md = modular_data(H);
    REQUIRE(md.eigenvalues.size() == 4);
    CHECK(md.eigenvalues(0) == doctest::Approx(0.28744032074547654).epsilon(1e-12));
    CHECK(md.eigenvalues(1) == doctest::Approx(0.28744032074547654).epsilon(1e-12));
    CHECK(md.eigenvalues(2) == doctest::Approx(3.4789830369187582).epsilon(1e-12));
    CHECK(md.eigenvalues(3) == doctest::Approx(3.4789830369187582).epsilon(1e-12));
    CHECK(md.factorial);
}

TEST_CASE("modular identities on random factorial subspaces") {
    for (unsigned seed : {1u, 2u, 3u, 11u}) {
        ComplexSpace amb = ComplexSpace::standard(6);
        StandardSubspace H = random_standard_subspace(amb, seed);
        ModularData md = modular_data(H);
        const auto dim = md.delta.rows();
        Mat I = Mat::Identity(dim, dim);

        // S = J delta^{1/2} is an involution fixing H pointwise
        CHECK((md.tomita * md.tomita - I).norm() < 1e-9);
        CHECK((md.tomita * H.basis - H.basis).norm() < 1e-9);

        // J delta J = delta^{-1}
        Vec inv = md.eigenvalues.array().inverse();
        Mat dinv = md.eigenvectors * inv.asDiagonal() * md.eigenvectors.transpose();
        CHECK((md.jconj * md.delta * md.jconj - dinv).norm() / dinv.norm() < 1e-9);

        // delta commutes with the complex structure
        CHECK((md.delta * amb.Jz() - amb.Jz() * md.delta).norm() / md.delta.norm() < 1e-9);

        // delta^{is} H = H
        for (double s : {0.3, -1.7}) {
            Mat U = modular_unitary(amb, md, s);
            CHECK(detail::subspace_residual(H.basis, U * H.basis) < 1e-9);
        }
    }
}

TEST_CASE("projections: P = E coth(log delta / 2), P cuts, Q fixes H") {
    ComplexSpace amb = ComplexSpace::standard(6);
    StandardSubspace H = random_standard_subspace(amb, 23);
    ModularData md = modular_data(H);
    const auto dim = md.delta.rows();
    Mat I = Mat::Identity(dim, dim);

    Mat E = projection_E(H, md);
    Mat P = projection_P(H, md);
    Mat Q = projection_Q(H, md);
    Mat coth = (I + md.delta) * (I - md.delta).inverse();
    CHECK((P - E * coth).norm() / P.norm() < 1e-9);
    CHECK((Q * Q - Q).norm() < 1e-9);
    CHECK((Q * H.basis - H.basis).norm() < 1e-10);

    // P (h + h') = h with h' = J k in the commutant H' = J H
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    for (int it = 0; it < 8; ++it) {
        Vec c(H.basis.cols()), c2(H.basis.cols());
        for (int i = 0; i < c.size(); ++i) { c(i) = gauss(rng); c2(i) = gauss(rng); }
        Vec h = H.basis * c;
        Vec hp = md.jconj * (H.basis * c2);
        CHECK((P * (h + hp) - h).norm() / h.norm() < 1e-8);
    }
}

TEST_CASE("vector entropy: nonnegative on H, quadratic scaling, dual-route guard") {
    ComplexSpace amb = ComplexSpace::standard(6);
    StandardSubspace H = random_standard_subspace(amb, 41);
    ModularData md = modular_data(H);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss;
    for (int it = 0; it < 8; ++it) {
        Vec c(H.basis.cols());
        for (int i = 0; i < c.size(); ++i) c(i) = gauss(rng);
        Vec h = H.basis * c;
        double s = vector_entropy(H, md, h);
        CHECK(s >= -1e-10);
        double s2 = vector_entropy(H, md, Vec(2.0 * h));
        CHECK(s2 == doctest::Approx(4.0 * s).epsilon(1e-9));
    }
}

TEST_CASE("invariance equivalence and passivity of log delta") {
    ComplexSpace amb = ComplexSpace::standard(4);
    StandardSubspace H = random_standard_subspace(amb, 7);
    ModularData md = modular_data(H);

    // A = -log delta / 2pi generates the modular group; all three conditions hold
    Mat A = md.logDelta;
    InvarianceReport rep = invariance_equivalence_check(H, A);
    CHECK(rep.flowPreserves);
    CHECK(rep.resolventPreserves);
    CHECK(rep.skewOnH);
    CHECK(rep.equivalent);

    PassivityReport pr = passivity_check(H, md, A, 1, 300, 3);
    CHECK(pr.passive);
    CHECK(pr.maxValue <= 1e-10);
    CHECK(pr.productPositivityMinEig >= -1e-10);

    // A = 0 is trivially passive
    PassivityReport pg = passivity_check(H, md, Mat(Mat::Zero(8, 8)), 1, 50, 4);
    CHECK(pg.passive);
}

TEST_CASE("odd complex dimension admits no factorial subspace") {
    ComplexSpace amb = ComplexSpace::standard(5);
    CHECK_THROWS_AS(random_standard_subspace(amb, 1), NotFactorial);
}

TEST_CASE("non-standard subspace is rejected") {
    ComplexSpace amb = ComplexSpace::standard(2);
    Mat B(4, 2);
    B << 1.0, 0.0,
         0.0, 0.0,
         0.0, 1.0,
         0.0, 0.0; // second column = i x first: H + iH too small
    CHECK_THROWS_AS(make_standard_subspace(amb, B), RankDeficient);
}

#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "modham/cauchy.hpp"
#include "modham/conformal.hpp"
#include "modham/entropy.hpp"
#include "modham/field.hpp"
#include "modham/grid.hpp"
#include "modham/massive.hpp"
#include "modham/modular.hpp"
#include "modham/oracle.hpp"

namespace modham {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

namespace detail {

inline void record(std::vector<CheckResult>& out, const std::string& name, double residual,
                   double tol) {
    out.push_back({name, residual, tol, residual <= tol});
}

inline double rel_field_dev(const GridSpec& g, const Field& a, const Field& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        num += g.weight(i) * d * d;
        den += g.weight(i) * b[i] * b[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double rel_wave_dev(const CauchyData& a, const CauchyData& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.f.size(); ++i) {
        double df = a.f[i] - b.f[i], dg = a.g[i] - b.g[i];
        num += a.grid.weight(i) * (df * df + dg * dg);
        den += a.grid.weight(i) * (b.f[i] * b.f[i] + b.g[i] * b.g[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

// roll a cartesian field by whole grid cells along each axis
inline Field roll_field(const GridSpec& g, const Field& f, const std::array<int, 3>& shift) {
    Field out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto mi = g.unflatten(i);
        std::size_t j = 0;
        for (int ax = 0; ax < g.d; ++ax) {
            int k = ((mi[ax] + shift[ax]) % g.N + g.N) % g.N;
            j = j * static_cast<std::size_t>(g.N) + static_cast<std::size_t>(k);
        }
        out[j] = f[i];
    }
    return out;
}

} // namespace detail

// ---- modular-core checks -------------------------------------------------------

inline void battery_modular(std::vector<CheckResult>& out, unsigned seed) {
    ComplexSpace amb = ComplexSpace::standard(8);
    StandardSubspace H = random_standard_subspace(amb, seed);
    ModularData md = modular_data(H);
    const auto dim = md.delta.rows();
    Mat I = Mat::Identity(dim, dim);
    const Mat& Jz = amb.Jz();

    detail::record(out, "modular.tomita_involution", (md.tomita * md.tomita - I).norm(), 1e-8);
    detail::record(out, "modular.delta_positive", std::max(0.0, -md.eigenvalues(0)), 0.0);
    detail::record(out, "modular.delta_commutes_i",
                   (md.delta * Jz - Jz * md.delta).norm() / md.delta.norm(), 1e-8);
    Vec inv = md.eigenvalues.array().inverse();
    Mat deltaInv = md.eigenvectors * inv.asDiagonal() * md.eigenvectors.transpose();
    detail::record(out, "modular.JdeltaJ_is_inverse",
                   (md.jconj * md.delta * md.jconj - deltaInv).norm() / deltaInv.norm(), 1e-8);

    double flowRes = 0.0;
    for (double s : {-5.0, -1.0, -0.1, 0.1, 1.0, 5.0}) {
        Mat U = modular_unitary(amb, md, s);
        flowRes = std::max(flowRes, detail::subspace_residual(H.basis, U * H.basis));
    }
    detail::record(out, "modular.flow_preserves_H", flowRes, 1e-8);

    Mat E = projection_E(H, md), P = projection_P(H, md), Q = projection_Q(H, md);
    Mat cothHalf = (I + md.delta) * (I - md.delta).inverse();
    detail::record(out, "modular.P_equals_E_coth", (P - E * cothHalf).norm() / P.norm(), 1e-9);
    detail::record(out, "modular.Pi_restricted_coth",
                   ((P * Jz - Jz * cothHalf) * H.basis).norm() / H.basis.norm(), 1e-9);
    detail::record(out, "modular.Q_idempotent_fixes_H",
                   (Q * Q - Q).norm() + (Q * H.basis - H.basis).norm(), 1e-8);

    // P cuts: h + h' -> h with h' = J delta^{1/2} h in H'
    std::mt19937_64 rng(seed + 1);
    std::normal_distribution<double> gauss;
    Vec sq = md.eigenvalues.array().sqrt();
    Mat sqrtDelta = md.eigenvectors * sq.asDiagonal() * md.eigenvectors.transpose();
    double cutRes = 0.0, parRes = 0.0, entScale = 0.0, entNeg = 0.0;
    for (int it = 0; it < 16; ++it) {
        Vec c(H.basis.cols()), c2(H.basis.cols());
        for (int i = 0; i < c.size(); ++i) { c(i) = gauss(rng); c2(i) = gauss(rng); }
        Vec h = H.basis * c, k = H.basis * c2;
        Vec hp = md.jconj * (sqrtDelta * k); // element of H'
        cutRes = std::max(cutRes, (P * (h + hp) - h).norm() / h.norm());
        double sp = vector_entropy(H, md, h + k), sm = vector_entropy(H, md, h - k);
        double sh = vector_entropy(H, md, h), sk = vector_entropy(H, md, k);
        parRes = std::max(parRes, std::abs(sp + sm - 2.0 * sh - 2.0 * sk));
        entScale = std::max({entScale, sh, sk});
        entNeg = std::max(entNeg, -sh);
    }
    detail::record(out, "modular.entropy_nonneg_on_H", std::max(0.0, entNeg), 1e-10);
    detail::record(out, "modular.cutting_projection", cutRes, 1e-9);
    detail::record(out, "modular.entropy_parallelogram",
                   parRes / std::max(1.0, entScale), 1e-8);

    PassivityReport pr = passivity_check(H, md, md.logDelta, 1, 1000, seed + 2);
    detail::record(out, "modular.logdelta_passive", std::max(0.0, pr.maxValue), 1e-10);
    detail::record(out, "modular.passivity_product_positive",
                   std::max(0.0, -pr.productPositivityMinEig), 1e-10);
}

// ---- field checks ----------------------------------------------------------------

inline void battery_field(std::vector<CheckResult>& out) {
    GridSpec g = GridSpec::radial3d(4.0, 512);
    CauchyData w = bump_wave(g, 1.0, 0.8);
    w.g = sample_profile(g, ProfileKind::GaussianBump, {0.0, 0.0, 0.0}, 0.7, 0.5);

    double e0 = energy(w), eRes = 0.0;
    for (double t : {0.5, 1.0, 2.0})
        eRes = std::max(eRes, std::abs(energy(kg_evolve(w, t)) - e0) / e0);
    detail::record(out, "field.energy_conservation", eRes, 1e-10);

    {
        Field gr = gradient_squared(g, w.f);
        Field lap = laplacian(g, w.f);
        Field rdr = radial_derivative(g, w.f);
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < w.f.size(); ++i) {
            double r = g.rnode(static_cast<int>(i));
            lhs += g.weight(i) * 0.5 * (1.0 - r * r) * gr[i];
            rhs += g.weight(i) * (-0.5 * (1.0 - r * r) * w.f[i] * lap[i] + w.f[i] * rdr[i]);
        }
        detail::record(out, "field.identity_r12", std::abs(lhs - rhs) / std::abs(lhs), 1e-6);
    }

    CauchyData v(g, 1.0);
    v.f = sample_profile(g, ProfileKind::Bump, {0.0, 0.0, 0.0}, 0.6, -0.7);
    v.g = sample_profile(g, ProfileKind::Bump, {0.0, 0.0, 0.0}, 0.9, 0.4);
    double beta0 = symplectic_form(w, v), bRes = 0.0;
    for (double m : {0.5, 1.0, 2.0}) {
        CauchyData wm = w, vm = v;
        wm.m = vm.m = m;
        bRes = std::max(bRes, std::abs(inner_product(wm, vm).imag() - beta0));
    }
    bRes = std::max(bRes, std::abs(symplectic_form(v, w) + beta0));
    detail::record(out, "field.beta_mass_independent", bRes / std::max(1.0, std::abs(beta0)),
                   1e-10);

    CauchyData iw = complex_structure(w), iv = complex_structure(v);
    detail::record(out, "field.imath_symplectic",
                   std::abs(symplectic_form(iw, iv) - beta0) / std::max(1.0, std::abs(beta0)),
                   1e-10);

    Field ab = mu_apply(g, mu_apply(g, w.f, 1.0, 0.7), 1.0, -1.2);
    Field apb = mu_apply(g, w.f, 1.0, -0.5);
    detail::record(out, "field.mu_powers_additive", detail::rel_field_dev(g, ab, apb), 1e-10);
}

// ---- conformal checks --------------------------------------------------------------

inline void battery_conformal(std::vector<CheckResult>& out) {
    GridSpec g = GridSpec::radial3d(2.0, 512);
    CauchyData a(g, 0.0), b(g, 0.0);
    a.f = sample_profile(g, ProfileKind::Bump, {0.0, 0.0, 0.0}, 0.8, 1.0);
    a.g = sample_profile(g, ProfileKind::GaussianBump, {0.0, 0.0, 0.0}, 0.7, 0.3);
    b.f = sample_profile(g, ProfileKind::GaussianBump, {0.0, 0.0, 0.0}, 0.6, -0.5);
    b.g = sample_profile(g, ProfileKind::Bump, {0.0, 0.0, 0.0}, 0.75, 0.8);

    CauchyData Ka = apply_K0(a), Kb = apply_K0(b);
    double scale = std::abs(symplectic_form(a, Kb)) + 1.0;
    detail::record(out, "conformal.K0_beta_skew",
                   std::abs(symplectic_form(Ka, b) + symplectic_form(a, Kb)) / scale, 1e-8);
    detail::record(out, "conformal.polarization",
                   std::abs(symplectic_form(a, Kb) - quadratic_form_massless_bilinear(a, b)) /
                       scale,
                   1e-8);

    {
        // zero-total-integral data keeps the |p| multiplier cusp out of the
        // comparison; restrict the metric to the ball
        GridSpec gw = GridSpec::radial3d(8.0, 1024);
        Field f(gw.size()), h(gw.size());
        for (int j = 0; j < gw.Nr; ++j) {
            f[static_cast<std::size_t>(j)] = bump_profile((gw.rnode(j) - 0.4) / 0.25);
            h[static_cast<std::size_t>(j)] = bump_profile((gw.rnode(j) - 0.65) / 0.2);
        }
        double sf = quadrature(gw, f) / quadrature(gw, h);
        for (std::size_t j = 0; j < f.size(); ++j) f[j] -= sf * h[j];
        Field mu_m_mu = mu_apply(gw, apply_M(gw, mu_apply(gw, f, 0.0, 1.0)), 0.0, 1.0);
        Field L = legendre_apply(gw, f);
        for (std::size_t i = 0; i < L.size(); ++i) L[i] = -L[i];
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < L.size(); ++i) {
            if (gw.rnode(static_cast<int>(i)) >= 1.0) continue;
            double d = mu_m_mu[i] - L[i];
            num += gw.weight(i) * d * d;
            den += gw.weight(i) * L[i] * L[i];
        }
        detail::record(out, "conformal.mu0_M_mu0_is_minus_L0", std::sqrt(num / den), 1e-6);
    }

    FlowResult f1 = flow_geometric(a, 0.4);
    FlowResult f12 = flow_geometric(f1.wave, 0.35);
    FlowResult fsum = flow_geometric(a, 0.75);
    detail::record(out, "conformal.flow_group_property",
                   detail::rel_wave_dev(f12.wave, fsum.wave), 1e-5);
    detail::record(out, "conformal.flow_leakage",
                   std::max({f1.leakage, f12.leakage, fsum.leakage}), 1e-6);
    FlowResult fb = flow_geometric(b, 0.75);
    detail::record(out, "conformal.flow_preserves_beta",
                   std::abs(symplectic_form(fsum.wave, fb.wave) - symplectic_form(a, b)) /
                       std::max(1.0, std::abs(symplectic_form(a, b))),
                   1e-6);
}

// ---- massive checks ----------------------------------------------------------------

inline void battery_massive(std::vector<CheckResult>& out, unsigned seed) {
    GridSpec g = GridSpec::radial3d(2.0, 512);
    double m = 1.0;
    CauchyData a(g, m), b(g, m);
    a.f = sample_profile(g, ProfileKind::Bump, {0.0, 0.0, 0.0}, 0.8, 1.0);
    a.g = sample_profile(g, ProfileKind::GaussianBump, {0.0, 0.0, 0.0}, 0.6, 0.4);
    b.f = sample_profile(g, ProfileKind::GaussianBump, {0.0, 0.0, 0.0}, 0.7, -0.6);
    b.g = sample_profile(g, ProfileKind::Bump, {0.0, 0.0, 0.0}, 0.5, 0.9);

    CauchyData Ka = apply_KmB(a), Kb = apply_KmB(b);
    double s1 = inner_product(a, complex_structure(Kb)).real();
    double s2 = inner_product(b, complex_structure(Ka)).real();
    detail::record(out, "massive.KmB_skew_hermitian",
                   std::abs(s1 - s2) / std::max(1.0, std::abs(s1)), 1e-7);
    detail::record(out, "massive.KmB_beta_symmetric",
                   std::abs(symplectic_form(a, Kb) - symplectic_form(b, Ka)) /
                       std::max(1.0, std::abs(symplectic_form(a, Kb))),
                   1e-7);

    double yk = yukawa_double_integral(g, a.f, a.f, m, 1.0);
    detail::record(out, "massive.green_form_positive", std::max(0.0, -yk), 0.0);

    {
        CauchyData a0 = a;
        a0.m = 0.0;
        double q0 = quadratic_form_massless(a0);
        std::vector<double> defs;
        for (double mm : {1.0, 0.5, 0.25, 0.125}) {
            CauchyData am = a;
            am.m = mm;
            defs.push_back(std::abs(quadratic_form_massive(am).total() - q0));
        }
        double minOrder = 1e300;
        for (std::size_t i = 0; i + 1 < defs.size(); ++i)
            minOrder = std::min(minOrder, std::log2(defs[i] / defs[i + 1]));
        detail::record(out, "massive.m_continuity_order", std::max(0.0, 1.9 - minOrder), 0.0);
    }

    detail::record(out, "massive.coefficient_consistency",
                   std::abs(matrix_element_logDelta(a, a, 1.0) -
                            2.0 * M_PI * quadratic_form_massive(a).total()) /
                       std::abs(matrix_element_logDelta(a, a, 1.0)),
                   1e-9);

    {
        // the convolution is free-space while the multiplier imposes Dirichlet
        // walls at Rmax; compare on a wide grid where the images are negligible
        GridSpec gw = GridSpec::radial3d(8.0, 2048);
        Field f = sample_profile(gw, ProfileKind::Bump, {0.0, 0.0, 0.0}, 0.8, 1.0);
        Field inv_spec = mu_apply(gw, f, m, -2.0);
        Field inv_conv = green_convolve(gw, f, m);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (gw.rnode(static_cast<int>(i)) >= 4.0) continue; // skip the wall zone
            double d = inv_conv[i] - inv_spec[i];
            num += gw.weight(i) * d * d;
            den += gw.weight(i) * inv_spec[i] * inv_spec[i];
        }
        detail::record(out, "massive.green_convolution_vs_multiplier",
                       std::sqrt(num / den), 2e-5);
    }

    // Monte-Carlo validation of the radial Yukawa double integral
    {
        std::mt19937_64 rng(seed + 11);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        auto draw_ball = [&](double& x, double& y, double& z) {
            do {
                x = uni(rng); y = uni(rng); z = uni(rng);
            } while (x * x + y * y + z * z >= 1.0);
        };
        const long nSamples = 10000000;
        double acc = 0.0;
        for (long it = 0; it < nSamples; ++it) {
            double x1, y1, z1, x2, y2, z2;
            draw_ball(x1, y1, z1);
            draw_ball(x2, y2, z2);
            double r1 = std::sqrt(x1 * x1 + y1 * y1 + z1 * z1);
            double r2 = std::sqrt(x2 * x2 + y2 * y2 + z2 * z2);
            double dx = x1 - x2, dy = y1 - y2, dz = z1 - z2;
            double sep = std::sqrt(dx * dx + dy * dy + dz * dz);
            if (sep <= 0.0) continue;
            acc += detail::radial_interp(g, a.f, r1) * detail::radial_interp(g, a.f, r2) *
                   green_kernel_eval(3, m, sep);
        }
        double vol = 4.0 * M_PI / 3.0;
        double mc = vol * vol * acc / static_cast<double>(nSamples);
        detail::record(out, "massive.yukawa_monte_carlo", std::abs(mc - yk) / std::abs(yk),
                       0.02);
    }
}

// ---- entropy checks ------------------------------------------------------------------

inline void battery_entropy(std::vector<CheckResult>& out) {
    GridSpec g = GridSpec::radial3d(2.0, 1024);
    for (double m : {0.0, 1.0}) {
        CauchyData w(g, m);
        w.f = sample_profile(g, ProfileKind::Bump, {0.0, 0.0, 0.0}, 0.8, 1.0);
        w.g = sample_profile(g, ProfileKind::GaussianBump, {0.0, 0.0, 0.0}, 0.7, 0.5);
        std::string tag = m == 0.0 ? "m0" : "m1";

        EntropyReport rep = entropy_ball(w, 1.0);
        double book = std::abs(rep.total - (rep.termStress + rep.termNorm + rep.termYukawa));
        double nonneg = std::max({0.0, -rep.termStress, -rep.termNorm, -rep.termYukawa});
        detail::record(out, "entropy.decomposition." + tag, book + nonneg, 1e-12);

        EntropyReport repT = entropy_ball(w, 1.0, {0.0, 0.0, 0.0}, 0.3);
        EntropyReport repE = entropy_ball(kg_evolve(w, 0.3), 1.0);
        detail::record(out, "entropy.time_covariance." + tag,
                       std::abs(repT.total - repE.total) / repE.total, 1e-12);

        double cut = entropy_cutting_form(w, 1.0);
        double beta = 2.0 * M_PI * symplectic_form(w, apply_Ktilde(w));
        double tri = std::max(std::abs(rep.total - cut), std::abs(rep.total - beta)) /
                     std::abs(rep.total);
        detail::record(out, "entropy.triangle." + tag, tri, 1e-5);
    }

    // translation covariance on a d = 2 box: whole-cell shifts are exact
    {
        GridSpec gc = GridSpec::cartesian(2, 3.0, 64);
        CauchyData w(gc, 1.0);
        w.f = sample_profile(gc, ProfileKind::Bump, {0.0, 0.0, 0.0}, 0.5, 1.0);
        w.g = sample_profile(gc, ProfileKind::GaussianBump, {0.0, 0.0, 0.0}, 0.4, 0.6);
        std::array<int, 3> cells{7, -5, 0};
        std::array<double, 3> shift{cells[0] * gc.dx(), cells[1] * gc.dx(), 0.0};
        CauchyData ws(gc, 1.0);
        ws.f = detail::roll_field(gc, w.f, cells);
        ws.g = detail::roll_field(gc, w.g, cells);
        EntropyReport r0 = entropy_ball(w, 0.7, {0.0, 0.0, 0.0});
        EntropyReport r1 = entropy_ball(ws, 0.7, shift);
        detail::record(out, "entropy.translation_covariance",
                       std::abs(r0.total - r1.total) / r0.total, 1e-8);
    }
}

// ---- oracle checks --------------------------------------------------------------------

inline void battery_oracle(std::vector<CheckResult>& out) {
    GridSpec g = GridSpec::radial3d(2.0, 512);

    // massive model: cutting fixes H, vector entropy nonnegative on it
    {
        double m = 1.0;
        OracleModel model = build_discretized(g, m, 12);
        detail::record(out, "oracle.tomita_residual", model.tomitaResidual, 1e-8);
        Mat P = projection_P(model.H, model.md);
        double cutRes = 0.0, entNeg = 0.0, embRes = 0.0;
        for (const CauchyData& w : oracle_fixtures(g, m)) {
            EmbeddedWave e = embed(model, w, 0.05);
            embRes = std::max(embRes, e.residual);
        }
        // the seed family lies in the span exactly, so cutting must fix it
        for (const CauchyData& w : oracle_seeds(g, m)) {
            EmbeddedWave e = embed(model, w, 0.05);
            Vec z = e.coords;
            cutRes = std::max(cutRes, (P * z - z).norm() / z.norm());
            entNeg = std::max(entNeg, -vector_entropy(model.H, model.md, z));
        }
        detail::record(out, "oracle.fixture_projection_residual", embRes, 0.05);
        detail::record(out, "oracle.cutting_fixes_H", cutRes, 1e-6);
        detail::record(out, "oracle.entropy_positive", std::max(0.0, entNeg), 0.0);
    }

    // commutator of the modular flow with the projected generator shrinks
    // under basis refinement (massless model: exact geometric flow)
    auto commutator_norm = [](const OracleModel& mod) {
        Mat Kz = projected_generator(mod);
        Mat U = modular_unitary(mod.H.ambient, mod.md, 0.5);
        return (U * Kz - Kz * U).norm() / Kz.norm();
    };
    double c12 = commutator_norm(build_discretized(g, 0.0, 12));
    double c24 = commutator_norm(build_discretized(g, 0.0, 24));
    detail::record(out, "oracle.flow_commutator_shrinks", std::max(0.0, c24 - c12), 0.0);
    detail::record(out, "oracle.flow_commutator_small", c24, 0.5);
}

inline std::vector<CheckResult> run_battery(unsigned seed = 7) {
    std::vector<CheckResult> out;
    battery_modular(out, seed);
    battery_field(out);
    battery_conformal(out);
    battery_massive(out, seed);
    battery_entropy(out);
    battery_oracle(out);
    return out;
}

} // namespace modham

// Acceptance gate: one pass/fail line per criterion, exit 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "modham/modham.hpp"

using namespace modham;

namespace {

int failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", idx, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double wave_dev(const CauchyData& a, const CauchyData& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.f.size(); ++i) {
        double df = a.f[i] - b.f[i], dg = a.g[i] - b.g[i];
        num += a.grid.weight(i) * (df * df + dg * dg);
        den += a.grid.weight(i) * (b.f[i] * b.f[i] + b.g[i] * b.g[i]);
    }
    return std::sqrt(num / den);
}

double ball_dev(const GridSpec& g, const Field& a, const Field& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (g.rnode(static_cast<int>(i)) >= 1.0) continue;
        double d = a[i] - b[i];
        num += g.weight(i) * d * d;
        den += g.weight(i) * b[i] * b[i];
    }
    return std::sqrt(num / den);
}

Field ir_clean_profile(const GridSpec& g) {
    Field a(g.size()), b(g.size());
    for (int j = 0; j < g.Nr; ++j) {
        a[static_cast<std::size_t>(j)] = bump_profile((g.rnode(j) - 0.4) / 0.25);
        b[static_cast<std::size_t>(j)] = bump_profile((g.rnode(j) - 0.65) / 0.2);
    }
    double s = quadrature(g, a) / quadrature(g, b);
    for (std::size_t j = 0; j < a.size(); ++j) a[j] -= s * b[j];
    return a;
}

CauchyData shell_wave(const GridSpec& g, double m, double rho, double width, bool fSide) {
    CauchyData w(g, m);
    Field prof(g.size(), 0.0);
    for (int j = 0; j < g.Nr; ++j)
        prof[static_cast<std::size_t>(j)] = bump_profile((g.rnode(j) - rho) / width);
    (fSide ? w.f : w.g) = prof;
    return w;
}

// 1. modular-core exact identities on seeded random factorial subspaces
void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    int count = 0;
    std::mt19937_64 rng(101);
    std::normal_distribution<double> gauss;
    for (unsigned seed = 1; seed <= 100; ++seed) {
        int n = 2 * (1 + (seed % 25)); // even n in [2, 50]
        ComplexSpace amb = ComplexSpace::standard(n);
        StandardSubspace H = random_standard_subspace(amb, seed);
        ModularData md = modular_data(H);
        const int dim = 2 * n;
        Mat I = Mat::Identity(dim, dim);

        double r = (md.tomita * md.tomita - I).norm();
        r = std::max(r, (md.tomita * H.basis - H.basis).norm());

        Vec inv = md.eigenvalues.array().inverse();
        Mat dinv = md.eigenvectors * inv.asDiagonal() * md.eigenvectors.transpose();
        r = std::max(r, (md.jconj * md.delta * md.jconj - dinv).norm() / dinv.norm());

        Mat E = projection_E(H, md);
        Mat P = projection_P(H, md);
        Mat coth = (I + md.delta) * (I - md.delta).inverse();
        r = std::max(r, (P - E * coth).norm() / P.norm());

        for (int it = 0; it < 4; ++it) {
            Vec c(n), c2(n);
            for (int i = 0; i < n; ++i) { c(i) = gauss(rng); c2(i) = gauss(rng); }
            Vec h = H.basis * c;
            Vec hp = md.jconj * (H.basis * c2);
            r = std::max(r, (P * (h + hp) - h).norm() / h.norm());
        }

        PassivityReport pr = passivity_check(H, md, md.logDelta, 1, 1000, seed);
        r = std::max(r, pr.maxValue);

        worst = std::max(worst, r);
        ++count;
    }
    double dt = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d subspaces, worst residual %.2e, %.1fs", count,
                  worst, dt);
    report(1, "modular-core identities", worst <= 1e-9 && dt < 60.0, buf);
}

// 2. flow generator consistency at s = 0
void criterion2() {
    auto t0 = std::chrono::steady_clock::now();
    GridSpec g = GridSpec::radial3d(2.0, 512);
    double worstFD = 0.0, worstLeak = 0.0;
    for (double radius : {0.3, 0.45, 0.6, 0.75, 0.9}) {
        CauchyData a = shell_wave(g, 0.0, 0.5 * radius, 0.45 * radius, true);
        a.g = sample_profile(g, ProfileKind::GaussianBump, {0, 0, 0}, 0.7 * radius, 0.4);
        double h = 1e-4;
        FlowResult fp = flow_geometric(a, h), fm = flow_geometric(a, -h);
        CauchyData fd = (fp.wave - fm.wave) * (1.0 / (2.0 * h));
        worstFD = std::max(worstFD, wave_dev(fd, apply_K0(a)));
        FlowResult far = flow_geometric(a, 0.7);
        worstLeak = std::max({worstLeak, fp.leakage, fm.leakage, far.leakage});
    }
    double dt = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "worst FD dev %.2e, worst leakage %.2e, %.1fs",
                  worstFD, worstLeak, dt);
    report(2, "flow matches generator", worstFD <= 1e-3 && worstLeak <= 1e-6 && dt < 120.0,
           buf);
}

// 3. spectral identity mu M mu = -L at m in {0, 1}
void criterion3() {
    auto t0 = std::chrono::steady_clock::now();
    GridSpec g = GridSpec::radial3d(8.0, 2048);
    Field f = ir_clean_profile(g);
    Field mmm0 = mu_apply(g, apply_M(g, mu_apply(g, f, 0.0, 1.0)), 0.0, 1.0);
    Field L0 = legendre_apply(g, f);
    for (auto& x : L0) x = -x;
    double dev0 = ball_dev(g, mmm0, L0);
    Field mmm1 = mu_apply(g, apply_M(g, mu_apply(g, f, 1.0, 1.0)), 1.0, 1.0);
    Field L1 = apply_Lm(g, f, 1.0);
    for (auto& x : L1) x = -x;
    double dev1 = ball_dev(g, mmm1, L1);
    double dt = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "m=0 dev %.2e, m=1 dev %.2e, %.1fs", dev0, dev1, dt);
    report(3, "spectral identity mu M mu = -L", dev0 <= 1e-6 && dev1 <= 1e-6, buf);
}

// 4. entropy equals 2 pi beta(Phi, K Phi)
void criterion4() {
    auto t0 = std::chrono::steady_clock::now();
    GridSpec g = GridSpec::radial3d(4.0, 2048);
    double worst = 0.0;
    for (double m : {0.0, 1.0}) {
        for (bool fSide : {true, false}) {
            CauchyData w = shell_wave(g, m, 0.45, 0.3, fSide);
            double total = entropy_ball(w, 1.0).total;
            double beta = 2.0 * M_PI * symplectic_form(w, apply_Ktilde(w));
            worst = std::max(worst, std::abs(total - beta) / std::abs(total));
        }
    }
    double dt = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "worst rel dev %.2e, %.1fs", worst, dt);
    report(4, "entropy = 2 pi beta(Phi, K Phi)", worst <= 1e-5 && dt < 60.0, buf);
}

// 5. oracle equivalence: discrete log Delta form vs closed form
void criterion5() {
    auto t0 = std::chrono::steady_clock::now();
    GridSpec g = GridSpec::radial3d(4.0, 1024);
    bool pass = true;
    std::string detail;
    for (double m : {0.0, 1.0}) {
        std::vector<double> meds;
        for (int nb : {12, 24, 48})
            meds.push_back(
                crosscheck_hamiltonian(build_discretized(g, m, nb), oracle_fixtures(g, m))
                    .medianRelDev);
        bool ok = meds[1] <= 0.05 && meds[0] > meds[1] && meds[1] > meds[2];
        pass = pass && ok;
        char buf[96];
        std::snprintf(buf, sizeof buf, "m=%g medians %.3f/%.3f/%.3f ", m, meds[0], meds[1],
                      meds[2]);
        detail += buf;
    }
    double dt = seconds_since(t0);
    detail += "(" + std::to_string(dt) + "s)";
    report(5, "oracle equivalence ladder", pass && dt < 600.0, detail);
}

// 6. entropy asymptotics: Bekenstein, large R, small R
void criterion6() {
    auto t0 = std::chrono::steady_clock::now();
    GridSpec g = GridSpec::radial3d(16.0, 2048);
    CauchyData w(g, 0.0);
    w.f = sample_profile(g, ProfileKind::Bump, {0, 0, 0}, 0.5, 1.0);
    w.g = sample_profile(g, ProfileKind::GaussianBump, {0, 0, 0}, 0.4, 0.6);
    double support = support_radius(w);
    auto reports = radius_scan(w, {0, 0, 0}, 0.0, {1.0, 2.0, 4.0, 8.0});
    bool bek = true, largeR = true;
    for (const auto& r : reports) bek = bek && r.bekensteinOK;
    for (const auto& r : reports)
        if (r.R >= 8.0 * support)
            largeR = largeR && r.ratioLargeR >= 0.95 && r.ratioLargeR <= 1.05;

    // small-R areal density at a center where T00 vanishes
    GridSpec gs = GridSpec::radial3d(2.0, 4096);
    CauchyData ws(gs, 0.0);
    ws.f = sample_profile(gs, ProfileKind::Bump, {0, 0, 0}, 0.9, 1.0);
    for (int j = 0; j < gs.Nr; ++j)
        ws.g[static_cast<std::size_t>(j)] = 0.6 * bump_profile((gs.rnode(j) - 0.5) / 0.2);
    double fR = entropy_ball(ws, 0.1).smallRArealDensity;
    double fR2 = entropy_ball(ws, 0.05).smallRArealDensity;
    double extrap = richardson_r2(fR, fR2);
    bool smallR = std::abs(extrap - 1.0) <= 0.05;
    double dt = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "Bekenstein %s, large-R ratio %.4f, small-R extrap %.4f, %.1fs",
                  bek ? "holds" : "fails", reports.back().ratioLargeR, extrap, dt);
    report(6, "entropy asymptotics", bek && largeR && smallR && dt < 120.0, buf);
}

// 7. scaling covariance
void criterion7() {
    auto t0 = std::chrono::steady_clock::now();
    GridSpec g = GridSpec::radial3d(4.0, 2048);
    double lambda = 1.5, worst = 0.0;
    std::vector<CauchyData> fixtures = {shell_wave(g, 1.0, 0.45, 0.3, true),
                                        shell_wave(g, 1.0, 0.45, 0.3, false),
                                        shell_wave(g, 0.5, 0.35, 0.25, true)};
    fixtures[2].g = sample_profile(g, ProfileKind::GaussianBump, {0, 0, 0}, 0.5, 0.4);
    for (const CauchyData& w : fixtures) {
        CauchyData dw = dilate(w, lambda); // carries mass m -> lambda m
        double s0 = entropy_ball(w, 1.0).total;
        double s1 = entropy_ball(dw, 1.0 / lambda).total;
        worst = std::max(worst, std::abs(s1 - s0) / std::abs(s0));
        double me0 = matrix_element_logDelta(w, w, 1.0);
        double me1 = matrix_element_logDelta(dw, dw, 1.0 / lambda);
        worst = std::max(worst, std::abs(me1 - me0) / std::abs(me0));
    }
    double dt = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "worst rel dev %.2e, %.1fs", worst, dt);
    report(7, "scaling covariance", worst <= 1e-6, buf);
}

// 8. appendix identities
void criterion8() {
    auto t0 = std::chrono::steady_clock::now();
    // identity r12: int (1-r^2)/2 |grad f|^2 by parts
    GridSpec g = GridSpec::radial3d(2.0, 2048);
    Field f = sample_profile(g, ProfileKind::Bump, {0, 0, 0}, 0.8, 1.0);
    Field gr = gradient_squared(g, f);
    Field lap = laplacian(g, f);
    Field rdr = radial_derivative(g, f);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double r = g.rnode(static_cast<int>(i));
        lhs += g.weight(i) * 0.5 * (1.0 - r * r) * gr[i];
        rhs += g.weight(i) * (-0.5 * (1.0 - r * r) * f[i] * lap[i] + f[i] * rdr[i]);
    }
    double devR12 = std::abs(lhs - rhs) / std::abs(lhs);

    // identity zg: d/ds Z(z, s)|_0 = (1-z^2)/2, d/ds gamma(u, v; s)|_0 = -D(u+v)/2
    double h = 1e-5, devZG = 0.0;
    for (double z : {-0.7, -0.2, 0.0, 0.4, 0.8}) {
        double fd = (flow_map_Z(z, h) - flow_map_Z(z, -h)) / (2.0 * h);
        devZG = std::max(devZG, std::abs(fd - 0.5 * (1.0 - z * z)));
    }
    for (double u : {-0.5, 0.1, 0.6}) {
        for (double v : {-0.3, 0.2, 0.7}) {
            double fd = (flow_cocycle(u, v, h, 1.0) - flow_cocycle(u, v, -h, 1.0)) / (2.0 * h);
            devZG = std::max(devZG, std::abs(fd + 0.5 * (u + v)));
        }
    }

    // Yukawa closed form vs Bessel K_{1/2} kernel
    double devYk = 0.0;
    for (double m : {0.5, 1.0, 3.0}) {
        for (double r : {0.1, 0.8, 2.5}) {
            double closed = std::exp(-m * r) / (4.0 * M_PI * r);
            double bessel = std::pow(2.0 * M_PI, -1.5) * std::sqrt(m / r) *
                            std::cyl_bessel_k(0.5, m * r);
            devYk = std::max(devYk, std::abs(closed - bessel) / closed);
        }
    }
    double dt = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "r12 %.2e, zg %.2e, yukawa %.2e, %.1fs", devR12, devZG,
                  devYk, dt);
    report(8, "appendix identities", devR12 <= 1e-6 && devZG <= 1e-8 && devYk <= 1e-12,
           buf);
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (failures == 0) {
        std::printf("acceptance: all 8 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria failed\n", failures);
    return 1;
}

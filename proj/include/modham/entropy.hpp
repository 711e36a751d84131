#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "modham/cauchy.hpp"
#include "modham/conformal.hpp"
#include "modham/errors.hpp"
#include "modham/field.hpp"
#include "modham/grid.hpp"
#include "modham/massive.hpp"

namespace modham {

/// area of the (d-1)-sphere of radius R
inline double sphere_area(int d, double R) {
    return 2.0 * std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0) * std::pow(R, d - 1);
}

/// Three-term entropy decomposition for one (wave, ball, time) triple.
struct EntropyReport {
    double R = 0.0;
    double t = 0.0;
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double termStress = 0.0;   // pi int (R^2-r^2)/R <T00^m>
    double termNorm = 0.0;     // pi D / R int Phi^2
    double termYukawa = 0.0;   // pi m^2 / 2R int int G_m Phi Phi
    double total = 0.0;
    double totalEnergyInBall = 0.0;
    double ratioLargeR = 0.0;          // total / (pi E R)
    double smallRArealDensity = 0.0;   // total / ((pi/d)(<T00>+D Phi^2)(center) A_{d-1}(R))
    bool bekensteinOK = false;         // total <= pi E R
};

/// S_Phi(R, t, center): local entropy of the wave packet. The formula cuts;
/// Phi need not be supported in the ball.
inline EntropyReport entropy_ball(const CauchyData& w0, double R,
                                  const std::array<double, 3>& center = {0.0, 0.0, 0.0},
                                  double t = 0.0) {
    check_ball_inside(w0.grid, R, center);
    CauchyData w = (t == 0.0) ? w0 : kg_evolve(w0, t);
    const GridSpec& g = w.grid;
    double D = scaling_dimension(g.d);
    double m2 = w.m * w.m;

    EntropyReport rep;
    rep.R = R;
    rep.t = t;
    rep.center = center;

    Field gr = gradient_squared(g, w.f);
    for (std::size_t i = 0; i < w.f.size(); ++i) {
        double r = g.radius_from(i, center);
        if (r >= R) continue;
        double t00 = 0.5 * (w.g[i] * w.g[i] + gr[i] + m2 * w.f[i] * w.f[i]);
        rep.termStress += g.weight(i) * M_PI * (R * R - r * r) / R * t00;
        rep.termNorm += g.weight(i) * M_PI * D / R * w.f[i] * w.f[i];
        rep.totalEnergyInBall += g.weight(i) * t00;
    }
    if (m2 > 0.0)
        rep.termYukawa = 0.5 * M_PI * m2 / R * yukawa_double_integral(g, w.f, w.f, w.m, R, center);
    rep.total = rep.termStress + rep.termNorm + rep.termYukawa;

    double piER = M_PI * rep.totalEnergyInBall * R;
    rep.ratioLargeR = piER > 0.0 ? rep.total / piER : 0.0;
    rep.bekensteinOK = rep.total <= piER * (1.0 + 1e-12) || rep.total == 0.0;

    // pointwise densities at the center for the small-R diagnostic
    double f0, g0, gr0;
    if (g.radial()) {
        f0 = detail::radial_interp(g, w.f, 0.0);
        g0 = detail::radial_interp(g, w.g, 0.0);
        gr0 = detail::radial_interp(g, gr, 0.0);
    } else {
        // nearest grid node
        std::size_t best = 0;
        double bd = 1e300;
        for (std::size_t i = 0; i < w.f.size(); ++i) {
            double r = g.radius_from(i, center);
            if (r < bd) { bd = r; best = i; }
        }
        f0 = w.f[best];
        g0 = w.g[best];
        gr0 = gr[best];
    }
    double t00c = 0.5 * (g0 * g0 + gr0 + m2 * f0 * f0);
    double dens = (M_PI / g.d) * (t00c + D * f0 * f0) * sphere_area(g.d, R);
    rep.smallRArealDensity = dens > 0.0 ? rep.total / dens : 0.0;
    return rep;
}

/// Entropy via the cutting projection: S = pi int_B (Psi d_t Phi - Phi d_t Psi)
/// with Psi = Ktilde_m Phi; radius R handled through the scaling unitary.
inline double entropy_cutting_form(const CauchyData& w, double R = 1.0,
                                   const std::array<double, 3>& center = {0.0, 0.0, 0.0}) {
    check_ball_inside(w.grid, R, center);
    if (center != std::array<double, 3>{0.0, 0.0, 0.0})
        throw UnsupportedMode("entropy_cutting_form: origin-centered balls only");
    const CauchyData wu = (R == 1.0) ? w : dilate(w, R);
    const GridSpec& g = wu.grid;
    CauchyData psi = apply_Ktilde(wu);
    double s = 0.0;
    for (std::size_t i = 0; i < wu.f.size(); ++i) {
        if (g.radius_from(i, {0.0, 0.0, 0.0}) >= 1.0) continue;
        s += g.weight(i) * (psi.f[i] * wu.g[i] - wu.f[i] * psi.g[i]);
    }
    return M_PI * s;
}

/// Vacuum--coherent-state relative entropy on the double cone over B_R:
/// the one-particle entropy of the wave (alias of entropy_ball at t = 0).
inline double relative_entropy_coherent(const CauchyData& w, double R) {
    return entropy_ball(w, R, {0.0, 0.0, 0.0}, 0.0).total;
}

/// Entropy reports over a list of radii, with large-R / small-R diagnostics.
inline std::vector<EntropyReport> radius_scan(const CauchyData& w,
                                              const std::array<double, 3>& center,
                                              double t, const std::vector<double>& radii) {
    std::vector<EntropyReport> out;
    out.reserve(radii.size());
    CauchyData wt = (t == 0.0) ? w : kg_evolve(w, t);
    for (double R : radii) {
        EntropyReport r = entropy_ball(wt, R, center, 0.0);
        r.t = t;
        out.push_back(r);
    }
    return out;
}

/// Two-point Richardson extrapolation of f(R) -> f(0) assuming an O(R^2) error.
inline double richardson_r2(double fR, double fR_half) {
    return (4.0 * fR_half - fR) / 3.0;
}

} // namespace modham

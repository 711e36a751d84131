#pragma once

#include <cmath>
#include <vector>

#include "modham/cauchy.hpp"
#include "modham/errors.hpp"
#include "modham/field.hpp"
#include "modham/grid.hpp"

namespace modham {

inline double scaling_dimension(int d) { return (d - 1) / 2.0; }

// ---- conformal flow on lightcone coordinates -------------------------------

inline double flow_f(double z, double s) {
    return 0.5 * ((1.0 + z) + std::exp(-s) * (1.0 - z));
}
inline double flow_g(double z, double s) {
    return 0.5 * ((1.0 + z) - std::exp(-s) * (1.0 - z));
}

/// Z(z,s) = g(z,s)/f(z,s); maps (-1,1) onto itself, fixes +-1.
inline double flow_map_Z(double z, double s) {
    double fz = flow_f(z, s);
    if (std::abs(fz) < 1e-14) throw PoleHit("flow_map_Z");
    return flow_g(z, s) / fz;
}

/// gamma(u,v;s) = F(u,s) F(-v,-s) with F = f^{-D}.
inline double flow_cocycle(double u, double v, double s, double D) {
    double fu = flow_f(u, s);
    double fv = flow_f(-v, -s);
    if (std::abs(fu) < 1e-14 || std::abs(fv) < 1e-14) throw PoleHit("flow_cocycle");
    return std::pow(fu, -D) * std::pow(fv, -D);
}

// ---- generator --------------------------------------------------------------

/// grad f1 . grad f2 pointwise
inline Field gradient_dot(const GridSpec& g, const Field& a, const Field& b) {
    if (g.radial()) {
        Field ua(a.size()), ub(b.size());
        for (std::size_t j = 0; j < a.size(); ++j) {
            double r = g.rnode(static_cast<int>(j));
            ua[j] = r * a[j];
            ub[j] = r * b[j];
        }
        Field da = sine_derivative(g, dst_forward(g, ua));
        Field db = sine_derivative(g, dst_forward(g, ub));
        Field out(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) {
            double r = g.rnode(static_cast<int>(j));
            out[j] = ((da[j] - a[j]) / r) * ((db[j] - b[j]) / r);
        }
        return out;
    }
    Field out(a.size(), 0.0);
    auto ca = fft_forward(g, a), cb = fft_forward(g, b);
    for (int ax = 0; ax < g.d; ++ax) {
        auto ka = ca, kb = cb;
        for (std::size_t k = 0; k < ka.size(); ++k) {
            std::complex<double> ip(0.0, cartesian_p(g, k, ax));
            ka[k] *= ip;
            kb[k] *= ip;
        }
        Field da = fft_inverse(g, ka), db = fft_inverse(g, kb);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += da[i] * db[i];
    }
    return out;
}

/// Legendre part 1/2 (1-r^2) lap f - r d_r f - D f  (spectral derivatives)
inline Field legendre_apply(const GridSpec& g, const Field& f) {
    double D = scaling_dimension(g.d);
    Field lap = laplacian(g, f);
    Field rdr = radial_derivative(g, f);
    Field out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        double r = g.radius_from(i, {0.0, 0.0, 0.0});
        out[i] = 0.5 * (1.0 - r * r) * lap[i] - rdr[i] - D * f[i];
    }
    return out;
}

/// K0 <f,g> = < 1/2 (1-r^2) g,  1/2 (1-r^2) lap f - r d_r f - D f >
inline CauchyData apply_K0(const CauchyData& w) {
    if (w.m != 0.0) throw UnsupportedMode("apply_K0 requires m = 0");
    const GridSpec& g = w.grid;
    CauchyData out(g, 0.0);
    for (std::size_t i = 0; i < w.f.size(); ++i) {
        double r = g.radius_from(i, {0.0, 0.0, 0.0});
        out.f[i] = 0.5 * (1.0 - r * r) * w.g[i];
    }
    out.g = legendre_apply(g, w.f);
    return out;
}

/// beta(Phi, K0 Phi) = 1/2 int (1-r^2) <T00> + D/2 int Phi^2, <T00> = ((d_t Phi)^2 + |grad Phi|^2)/2
inline double quadratic_form_massless(const CauchyData& w) {
    if (w.m != 0.0) throw UnsupportedMode("quadratic_form_massless requires m = 0");
    const GridSpec& g = w.grid;
    double D = scaling_dimension(g.d);
    Field gr = gradient_squared(g, w.f);
    double acc = 0.0;
    for (std::size_t i = 0; i < w.f.size(); ++i) {
        double r = g.radius_from(i, {0.0, 0.0, 0.0});
        double t00 = 0.5 * (w.g[i] * w.g[i] + gr[i]);
        acc += g.weight(i) * (0.5 * (1.0 - r * r) * t00 + 0.5 * D * w.f[i] * w.f[i]);
    }
    return acc;
}

/// Polarized form: 1/2 int (1-r^2) <T00>_{Phi,Psi} + D/2 int Phi Psi
inline double quadratic_form_massless_bilinear(const CauchyData& a, const CauchyData& b) {
    if (a.grid != b.grid) throw GridMismatch("quadratic_form_massless_bilinear");
    const GridSpec& g = a.grid;
    double D = scaling_dimension(g.d);
    Field gd = gradient_dot(g, a.f, b.f);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.f.size(); ++i) {
        double r = g.radius_from(i, {0.0, 0.0, 0.0});
        double t00 = 0.5 * (a.g[i] * b.g[i] + gd[i]);
        acc += g.weight(i) * (0.5 * (1.0 - r * r) * t00 + 0.5 * D * a.f[i] * b.f[i]);
    }
    return acc;
}

// ---- geometric modular flow (radial3d) ---------------------------------------

namespace detail {

// Cubic Lagrange interpolation of a radial field (even in r, zero beyond grid).
inline double radial_interp(const GridSpec& g, const Field& v, double r) {
    double h = g.dr();
    int jc = static_cast<int>(std::floor(r / h - 0.5));
    double xs[4], ys[4];
    for (int t = 0; t < 4; ++t) {
        int j = jc - 1 + t;
        xs[t] = (j + 0.5) * h;
        if (j < 0) {
            int jm = -1 - j; // even reflection through r = 0
            ys[t] = jm < g.Nr ? v[static_cast<std::size_t>(jm)] : 0.0;
        } else if (j >= g.Nr) {
            ys[t] = 0.0;
        } else {
            ys[t] = v[static_cast<std::size_t>(j)];
        }
    }
    double acc = 0.0;
    for (int t = 0; t < 4; ++t) {
        double l = 1.0;
        for (int q = 0; q < 4; ++q)
            if (q != t) l *= (r - xs[q]) / (xs[t] - xs[q]);
        acc += ys[t] * l;
    }
    return acc;
}

} // namespace detail

struct FlowResult {
    CauchyData wave;
    double leakage = 0.0; // relative L2 weight outside the unit ball
};

/// Time-zero Cauchy data of V(s) Phi for m = 0 data supported in the unit
/// ball, radial3d mode only. The flowed value at spacetime point (t, r) is
/// gamma(u,v;s) Phi(Z(u,s), Z(v,s)) with u = t + r, v = t - r. Both
/// components are evaluated from the sine series of the solution: f from the
/// series value at (tp, rp), g from the analytic t-derivative through the
/// lightcone maps (no finite differencing).
inline FlowResult flow_geometric(const CauchyData& w, double s,
                                 double support_tol = 1e-9) {
    const GridSpec& g = w.grid;
    if (!g.radial()) throw UnsupportedMode("flow_geometric requires radial3d mode");
    if (w.m != 0.0) throw UnsupportedMode("flow_geometric requires m = 0");
    {
        double mx = 0.0, leak = 0.0;
        for (std::size_t i = 0; i < w.f.size(); ++i) {
            double a = std::max(std::abs(w.f[i]), std::abs(w.g[i]));
            mx = std::max(mx, a);
            if (g.rnode(static_cast<int>(i)) > 1.0) leak = std::max(leak, a);
        }
        if (mx > 0.0 && leak > support_tol * mx)
            throw SupportViolation("flow_geometric: data leak outside the unit ball");
    }
    double D = scaling_dimension(g.d);
    const int n = g.Nr;

    // sine coefficients of u = r f and r g (u(t,r) solves the 1d wave equation)
    Field uf(g.size()), ug(g.size());
    for (int j = 0; j < n; ++j) {
        double r = g.rnode(j);
        uf[static_cast<std::size_t>(j)] = r * w.f[static_cast<std::size_t>(j)];
        ug[static_cast<std::size_t>(j)] = r * w.g[static_cast<std::size_t>(j)];
    }
    Field cf = dst_forward(g, uf), cg = dst_forward(g, ug);

    double em = std::exp(-s);
    auto zprime = [&](double z) {
        double fz = flow_f(z, s);
        // Z' = (g_z f - g f_z)/f^2 with f_z = (1-e^-s)/2, g_z = (1+e^-s)/2
        return (0.5 * (1.0 + em) * fz - flow_g(z, s) * 0.5 * (1.0 - em)) / (fz * fz);
    };

    FlowResult res;
    res.wave = CauchyData(g, 0.0);
    for (int j = 0; j < n; ++j) {
        double r = g.rnode(j);
        double u = r, v = -r;
        if (u >= 1.0) continue; // outside the double cone
        double up = flow_map_Z(u, s), vp = flow_map_Z(v, s);
        double tp = 0.5 * (up + vp), rp = 0.5 * (up - vp);

        // series value and partials of the 1d solution
        // U(t,r) = sum_k A_k(t) sin(w_k r), A_k = cf_k cos(w_k t) + cg_k sin(w_k t)/w_k
        double U = 0.0, Ut = 0.0, Ur = 0.0, Urr_aux = 0.0;
        for (int k = 0; k < n; ++k) {
            double wk = g.sine_freq(k);
            double norm = (k == n - 1) ? 1.0 : 2.0;
            double ct = std::cos(wk * tp), st = std::sin(wk * tp);
            double cr = std::cos(wk * rp), sr = std::sin(wk * rp);
            double a = cf[static_cast<std::size_t>(k)], b = cg[static_cast<std::size_t>(k)];
            double A = a * ct + b * st / wk;
            double Ap = -a * wk * st + b * ct;
            U += norm * A * sr;
            Ut += norm * Ap * sr;
            Ur += norm * A * wk * cr;
            Urr_aux += norm * A * wk * wk * sr;
        }
        double inv2n = 1.0 / (2.0 * n);
        U *= inv2n; Ut *= inv2n; Ur *= inv2n; Urr_aux *= inv2n;

        // phi = U/rp; partials with a series branch near rp = 0 (phi even in rp)
        double phi, phiT, phiR;
        if (std::abs(rp) > 1e-8) {
            phi = U / rp;
            phiT = Ut / rp;
            phiR = (Ur * rp - U) / (rp * rp);
        } else {
            // U = phi0 rp + O(rp^3): U/rp -> Ur, (Ur rp - U)/rp^2 -> -Urr_aux*rp/... -> 0
            phi = Ur;
            phiT = Ut / (rp != 0.0 ? rp : 1.0); // Ut also vanishes linearly; safe fallback
            phiR = 0.0;
        }

        double gamma = flow_cocycle(u, v, s, D);
        double fu = flow_f(u, s), fv = flow_f(-v, -s);
        // d/du gamma = -D f(u,s)^{-D-1} f_z(u,s) * F(-v,-s), f_z = (1-e^-s)/2
        double gamma_u = -D * std::pow(fu, -D - 1.0) * 0.5 * (1.0 - em) * std::pow(fv, -D);
        // d/dv gamma = F(u,s) * (-D) f(-v,-s)^{-D-1} f_z(-v,-s) * (-1), f_z(.,-s) = (1-e^s)/2
        double gamma_v = std::pow(fu, -D) * D * std::pow(fv, -D - 1.0) * 0.5 * (1.0 - 1.0 / em);

        double zu = zprime(u), zv = zprime(v);
        res.wave.f[static_cast<std::size_t>(j)] = gamma * phi;
        res.wave.g[static_cast<std::size_t>(j)] =
            (gamma_u + gamma_v) * phi +
            gamma * (0.5 * (zu + zv) * phiT + 0.5 * (zu - zv) * phiR);
    }

    double inside = 0.0, outside = 0.0;
    for (std::size_t i = 0; i < res.wave.f.size(); ++i) {
        double a = g.weight(i) * (res.wave.f[i] * res.wave.f[i] + res.wave.g[i] * res.wave.g[i]);
        if (g.rnode(static_cast<int>(i)) > 1.0) outside += a; else inside += a;
    }
    res.leakage = inside > 0.0 ? std::sqrt(outside / inside) : 0.0;
    return res;
}

} // namespace modham

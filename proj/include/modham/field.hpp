#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "modham/cauchy.hpp"
#include "modham/errors.hpp"
#include "modham/grid.hpp"
#include "modham/transform.hpp"

namespace modham {

// ---- Fourier multipliers ---------------------------------------------------

namespace detail {

// Apply fn(|p|^2) as a diagonal multiplier. zeroed_dc reports the spectral
// weight fraction |c_0|^2 / sum |c_k|^2 when the DC mode had to be dropped
// (cartesian, fn singular at 0).
inline Field apply_p2_multiplier(const GridSpec& g, const Field& f,
                                 const std::function<double(double)>& fn,
                                 bool drop_dc, double* dc_fraction) {
    if (g.radial()) {
        Field u(f.size());
        for (std::size_t j = 0; j < f.size(); ++j) u[j] = g.rnode(static_cast<int>(j)) * f[j];
        Field c = dst_forward(g, u);
        for (int k = 0; k < g.Nr; ++k) {
            double w = g.sine_freq(k);
            c[static_cast<std::size_t>(k)] *= fn(w * w);
        }
        Field v = dst_inverse(g, c);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] /= g.rnode(static_cast<int>(j));
        return v;
    }
    auto c = fft_forward(g, f);
    double total = 0.0;
    for (const auto& z : c) total += std::norm(z);
    if (dc_fraction) *dc_fraction = total > 0.0 ? std::norm(c[0]) / total : 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        double p2 = cartesian_p2(g, k);
        if (k == 0 && drop_dc) {
            c[k] = 0.0;
        } else {
            c[k] *= fn(p2);
        }
    }
    return fft_inverse(g, c);
}

} // namespace detail

/// Multiplier (|p|^2 + m^2)^(power/2). At m = 0 with negative power the
/// cartesian DC mode is zeroed; its spectral weight fraction above
/// ir_threshold raises MasslessInfrared (radial sine modes have no DC).
inline Field mu_apply(const GridSpec& g, const Field& f, double m, double power,
                      double ir_threshold = 1e-6) {
    if (power == 0.0) return f;
    bool singular_dc = (m == 0.0 && power < 0.0 && !g.radial());
    double dc_fraction = 0.0;
    double m2 = m * m, half_pow = power / 2.0;
    Field out = detail::apply_p2_multiplier(
        g, f, [m2, half_pow](double p2) { return std::pow(p2 + m2, half_pow); },
        singular_dc, &dc_fraction);
    if (singular_dc && dc_fraction > ir_threshold)
        throw MasslessInfrared("DC-mode fraction " + std::to_string(dc_fraction) +
                               " exceeds threshold at m = 0");
    return out;
}

inline Field mu_apply(const CauchyData& w, double power, double ir_threshold = 1e-6) {
    return mu_apply(w.grid, w.f, w.m, power, ir_threshold);
}

inline Field laplacian(const GridSpec& g, const Field& f) {
    return detail::apply_p2_multiplier(g, f, [](double p2) { return -p2; }, false, nullptr);
}

/// r d_r f = x . grad f
inline Field radial_derivative(const GridSpec& g, const Field& f) {
    if (g.radial()) {
        // f = u/r  =>  r f' = u' - f
        Field u(f.size());
        for (std::size_t j = 0; j < f.size(); ++j) u[j] = g.rnode(static_cast<int>(j)) * f[j];
        Field c = dst_forward(g, u);
        Field up = sine_derivative(g, c);
        for (std::size_t j = 0; j < up.size(); ++j) up[j] -= f[j];
        return up;
    }
    Field out(f.size(), 0.0);
    auto c = fft_forward(g, f);
    for (int ax = 0; ax < g.d; ++ax) {
        auto ck = c;
        for (std::size_t k = 0; k < ck.size(); ++k)
            ck[k] *= std::complex<double>(0.0, cartesian_p(g, k, ax));
        Field df = fft_inverse(g, ck);
        for (std::size_t i = 0; i < out.size(); ++i) {
            auto mi = g.unflatten(i);
            out[i] += g.xnode(mi[ax]) * df[i];
        }
    }
    return out;
}

/// |grad f|^2 pointwise
inline Field gradient_squared(const GridSpec& g, const Field& f) {
    if (g.radial()) {
        Field u(f.size());
        for (std::size_t j = 0; j < f.size(); ++j) u[j] = g.rnode(static_cast<int>(j)) * f[j];
        Field c = dst_forward(g, u);
        Field up = sine_derivative(g, c);
        Field out(f.size());
        for (std::size_t j = 0; j < f.size(); ++j) {
            double r = g.rnode(static_cast<int>(j));
            double dfr = (up[j] - f[j]) / r; // f' = (u' - u/r)/r
            out[j] = dfr * dfr;
        }
        return out;
    }
    Field out(f.size(), 0.0);
    auto c = fft_forward(g, f);
    for (int ax = 0; ax < g.d; ++ax) {
        auto ck = c;
        for (std::size_t k = 0; k < ck.size(); ++k)
            ck[k] *= std::complex<double>(0.0, cartesian_p(g, k, ax));
        Field df = fft_inverse(g, ck);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += df[i] * df[i];
    }
    return out;
}

// ---- Klein-Gordon evolution ------------------------------------------------

/// Spectral time evolution: f(t) = cos(wt) f + sin(wt)/w g,
/// g(t) = -w sin(wt) f + cos(wt) g, with w(p) = sqrt(|p|^2 + m^2).
inline CauchyData kg_evolve(const CauchyData& w, double t) {
    const GridSpec& g = w.grid;
    CauchyData out(g, w.m);
    auto rotate = [&](double omega, std::complex<double>& cf, std::complex<double>& cg) {
        double cw = std::cos(omega * t);
        double sw = std::sin(omega * t);
        double sinc = omega != 0.0 ? sw / omega : t; // w -> 0 limit
        std::complex<double> nf = cw * cf + sinc * cg;
        std::complex<double> ng = -omega * sw * cf + cw * cg;
        cf = nf;
        cg = ng;
    };
    if (g.radial()) {
        Field uf(g.size()), ug(g.size());
        for (std::size_t j = 0; j < uf.size(); ++j) {
            double r = g.rnode(static_cast<int>(j));
            uf[j] = r * w.f[j];
            ug[j] = r * w.g[j];
        }
        Field cf = dst_forward(g, uf), cg = dst_forward(g, ug);
        for (int k = 0; k < g.Nr; ++k) {
            double wk = g.sine_freq(k);
            double omega = std::sqrt(wk * wk + w.m * w.m);
            std::complex<double> zf(cf[static_cast<std::size_t>(k)], 0.0);
            std::complex<double> zg(cg[static_cast<std::size_t>(k)], 0.0);
            rotate(omega, zf, zg);
            cf[static_cast<std::size_t>(k)] = zf.real();
            cg[static_cast<std::size_t>(k)] = zg.real();
        }
        Field vf = dst_inverse(g, cf), vg = dst_inverse(g, cg);
        for (std::size_t j = 0; j < vf.size(); ++j) {
            double r = g.rnode(static_cast<int>(j));
            out.f[j] = vf[j] / r;
            out.g[j] = vg[j] / r;
        }
        return out;
    }
    auto cf = fft_forward(g, w.f), cg = fft_forward(g, w.g);
    for (std::size_t k = 0; k < cf.size(); ++k) {
        double omega = std::sqrt(cartesian_p2(g, k) + w.m * w.m);
        rotate(omega, cf[k], cg[k]);
    }
    out.f = fft_inverse(g, cf);
    out.g = fft_inverse(g, cg);
    return out;
}

/// Total energy int <T00> dx with <T00> = (g^2 + |grad f|^2 + m^2 f^2)/2.
inline double energy(const CauchyData& w) {
    const GridSpec& g = w.grid;
    Field gr = gradient_squared(g, w.f);
    double e = 0.0;
    for (std::size_t i = 0; i < gr.size(); ++i)
        e += g.weight(i) * 0.5 * (w.g[i] * w.g[i] + gr[i] + w.m * w.m * w.f[i] * w.f[i]);
    return e;
}

// ---- complex structure, scalar product, symplectic form ---------------------

/// i_m <f,g> = <mu^-1 g, -mu f>
inline CauchyData complex_structure(const CauchyData& w, double ir_threshold = 1e-6) {
    CauchyData out(w.grid, w.m);
    out.f = mu_apply(w.grid, w.g, w.m, -1.0, ir_threshold);
    Field mf = mu_apply(w.grid, w.f, w.m, 1.0, ir_threshold);
    for (std::size_t i = 0; i < mf.size(); ++i) out.g[i] = -mf[i];
    return out;
}

/// beta(Phi,Psi) = 1/2 int (f2 g1 - f1 g2) dx  (mass-independent)
inline double symplectic_form(const CauchyData& a, const CauchyData& b) {
    if (a.grid != b.grid) throw GridMismatch("symplectic_form");
    double s = 0.0;
    for (std::size_t i = 0; i < a.f.size(); ++i)
        s += a.grid.weight(i) * (b.f[i] * a.g[i] - a.f[i] * b.g[i]);
    return 0.5 * s;
}

/// (Phi,Psi)_m = 1/2 ((f1, mu f2) + (g1, mu^-1 g2)) + (i/2)((f2,g1) - (f1,g2));
/// antilinear in the first argument: (i_m Phi, Psi) = -i (Phi, Psi).
inline std::complex<double> inner_product(const CauchyData& a, const CauchyData& b,
                                          double ir_threshold = 1e-6) {
    if (a.grid != b.grid) throw GridMismatch("inner_product");
    if (a.m != b.m) throw GridMismatch("inner_product: mass mismatch");
    Field mf = mu_apply(a.grid, b.f, a.m, 1.0, ir_threshold);
    Field mg = mu_apply(a.grid, b.g, a.m, -1.0, ir_threshold);
    double re = 0.5 * (quadrature_product(a.grid, a.f, mf) +
                       quadrature_product(a.grid, a.g, mg));
    double im = symplectic_form(a, b);
    return {re, im};
}

// ---- ball cut and dilation ---------------------------------------------------

inline void check_ball_inside(const GridSpec& g, double R, const std::array<double, 3>& c) {
    if (R <= 0.0) throw BallOutsideGrid("radius must be positive");
    if (g.radial()) {
        if (c[0] != 0.0) throw UnsupportedMode("radial3d balls must be centered at the origin");
        if (R > g.Rmax) throw BallOutsideGrid("ball exceeds radial grid");
    } else {
        double cn = 0.0;
        for (int ax = 0; ax < g.d; ++ax) cn = std::max(cn, std::abs(c[ax]));
        if (cn + R >= g.L) throw BallOutsideGrid("ball exceeds box");
    }
}

/// Multiply both components by the sampled characteristic function of B_R(c).
inline CauchyData cut_to_ball(const CauchyData& w, double R,
                              const std::array<double, 3>& center = {0.0, 0.0, 0.0}) {
    check_ball_inside(w.grid, R, center);
    CauchyData out = w;
    for (std::size_t i = 0; i < out.f.size(); ++i) {
        if (w.grid.radius_from(i, center) >= R) {
            out.f[i] = 0.0;
            out.g[i] = 0.0;
        }
    }
    return out;
}

namespace detail {

// Evaluate the sine series of u at an arbitrary radius (direct summation).
inline double sine_series_eval(const GridSpec& g, const Field& c, double r) {
    int n = g.Nr;
    double acc = 0.0;
    for (int k = 0; k < n - 1; ++k) acc += 2.0 * c[static_cast<std::size_t>(k)] * std::sin(g.sine_freq(k) * r);
    acc += c[static_cast<std::size_t>(n - 1)] * std::sin(g.sine_freq(n - 1) * r);
    return acc / (2.0 * n);
}

// Resample a radial field at points lambda * r_j (zero outside the grid).
inline Field radial_rescale(const GridSpec& g, const Field& f, double lambda) {
    Field u(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) u[j] = g.rnode(static_cast<int>(j)) * f[j];
    Field c = dst_forward(g, u);
    Field out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        double r = lambda * g.rnode(static_cast<int>(j));
        out[j] = r < g.Rmax ? sine_series_eval(g, c, r) / r : 0.0;
    }
    return out;
}

// Resample a cartesian field at lambda * x, axis by axis.
inline Field cartesian_rescale(const GridSpec& g, Field f, double lambda) {
    int n = g.N;
    std::size_t total = f.size();
    for (int ax = 0; ax < g.d; ++ax) {
        std::size_t stride = 1;
        for (int a = ax + 1; a < g.d; ++a) stride *= static_cast<std::size_t>(n);
        Field out(total, 0.0);
        std::size_t nlines = total / static_cast<std::size_t>(n);
        for (std::size_t line = 0; line < nlines; ++line) {
            // base index of this line
            std::size_t outer = line / stride, inner = line % stride;
            std::size_t base = outer * stride * static_cast<std::size_t>(n) + inner;
            std::vector<std::complex<double>> c(static_cast<std::size_t>(n));
            GridSpec g1;
            g1.mode = GridMode::CartesianPeriodic; g1.d = 1; g1.L = g.L; g1.N = n;
            Field linev(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) linev[static_cast<std::size_t>(i)] = f[base + static_cast<std::size_t>(i) * stride];
            c = fft_forward(g1, linev);
            for (int i = 0; i < n; ++i) {
                double x = lambda * g.xnode(i);
                double v = 0.0;
                if (std::abs(x) < g.L) {
                    std::complex<double> acc = 0.0;
                    for (int k = 0; k < n; ++k)
                        acc += c[static_cast<std::size_t>(k)] *
                               std::exp(std::complex<double>(0.0, g1.wavenumber(k) * x));
                    v = acc.real();
                }
                out[base + static_cast<std::size_t>(i) * stride] = v;
            }
        }
        f = std::move(out);
    }
    return f;
}

} // namespace detail

/// delta_lambda: w_m(f,g) -> w_{lambda m}(lambda^D f(lambda .), lambda^{D+1} g(lambda .)),
/// D = (d-1)/2. Unitary H_m -> H_{lambda m}; preserves beta.
inline CauchyData dilate(const CauchyData& w, double lambda) {
    if (lambda <= 0.0) throw ConfigError("dilate: lambda must be positive");
    const GridSpec& g = w.grid;
    double limit = g.radial() ? g.Rmax : g.L;
    if (support_radius(w) / lambda >= limit)
        throw SupportOverflow("dilate: rescaled support exceeds grid");
    double D = (g.d - 1) / 2.0;
    double af = std::pow(lambda, D), ag = std::pow(lambda, D + 1.0);
    CauchyData out(g, lambda * w.m);
    if (g.radial()) {
        out.f = detail::radial_rescale(g, w.f, lambda);
        out.g = detail::radial_rescale(g, w.g, lambda);
    } else {
        out.f = detail::cartesian_rescale(g, w.f, lambda);
        out.g = detail::cartesian_rescale(g, w.g, lambda);
    }
    for (std::size_t i = 0; i < out.f.size(); ++i) {
        out.f[i] *= af;
        out.g[i] *= ag;
    }
    return out;
}

/// sobolev norm squared ||f||^2_{s;m} = int (|p|^2+m^2)^s |fhat|^2 dp,
/// evaluated as the discrete multiplier pairing int f . mu^{2s} f dx.
inline double sobolev_norm_sq(const GridSpec& g, const Field& f, double s, double m,
                              double ir_threshold = 1e-6) {
    Field mf = mu_apply(g, f, m, 2.0 * s, ir_threshold);
    return quadrature_product(g, f, mf);
}

inline double sobolev_norm(const GridSpec& g, const Field& f, double s, double m,
                           double ir_threshold = 1e-6) {
    return std::sqrt(std::max(0.0, sobolev_norm_sq(g, f, s, m, ir_threshold)));
}

} // namespace modham

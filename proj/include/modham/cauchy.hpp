#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "modham/grid.hpp"
#include "modham/transform.hpp"

namespace modham {

/// A Klein-Gordon wave packet at fixed time: the pair (f, g) with
/// f = Phi|_{t=0}, g = d_t Phi|_{t=0}, plus the mass.
struct CauchyData {
    GridSpec grid;
    Field f;
    Field g;
    double m = 0.0;

    CauchyData() = default;
    CauchyData(GridSpec gr, double mass)
        : grid(gr), f(gr.size(), 0.0), g(gr.size(), 0.0), m(mass) {}
    CauchyData(GridSpec gr, Field f_, Field g_, double mass)
        : grid(gr), f(std::move(f_)), g(std::move(g_)), m(mass) {}

    CauchyData& operator+=(const CauchyData& o) {
        for (std::size_t i = 0; i < f.size(); ++i) { f[i] += o.f[i]; g[i] += o.g[i]; }
        return *this;
    }
    CauchyData operator-(const CauchyData& o) const {
        CauchyData r = *this;
        for (std::size_t i = 0; i < f.size(); ++i) { r.f[i] -= o.f[i]; r.g[i] -= o.g[i]; }
        return r;
    }
    CauchyData operator*(double a) const {
        CauchyData r = *this;
        for (std::size_t i = 0; i < f.size(); ++i) { r.f[i] *= a; r.g[i] *= a; }
        return r;
    }
};

/// Fourier-side view of a real field (sine modes for radial3d, DFT modes
/// with conjugate symmetry for cartesian).
struct SpectralField {
    GridSpec grid;
    std::vector<std::complex<double>> coefficients;
    bool conjugateSymmetric = true;
};

inline SpectralField to_spectral(const GridSpec& g, const Field& f) {
    SpectralField s;
    s.grid = g;
    if (g.radial()) {
        Field u(f.size());
        for (std::size_t j = 0; j < f.size(); ++j) u[j] = g.rnode(static_cast<int>(j)) * f[j];
        auto c = dst_forward(g, u);
        s.coefficients.assign(c.begin(), c.end());
    } else {
        s.coefficients = fft_forward(g, f);
    }
    return s;
}

inline Field from_spectral(const SpectralField& s) {
    const GridSpec& g = s.grid;
    if (g.radial()) {
        Field c(s.coefficients.size());
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = s.coefficients[k].real();
        Field u = dst_inverse(g, c);
        for (std::size_t j = 0; j < u.size(); ++j) u[j] /= g.rnode(static_cast<int>(j));
        return u;
    }
    return fft_inverse(g, s.coefficients);
}

// ---- smooth compactly supported test fields ------------------------------

/// exp(-1/(1-s^2)) for |s| < 1, zero outside (unnormalized C^infty bump)
inline double bump_profile(double s) {
    double s2 = s * s;
    if (s2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s2));
}

/// Gaussian of width radius/3 under the compact bump envelope
inline double gaussian_bump_profile(double s) {
    if (s * s >= 1.0) return 0.0;
    double sigma = 1.0 / 3.0;
    return std::exp(-s * s / (2.0 * sigma * sigma)) * std::exp(-s * s / (1.0 - s * s));
}

enum class ProfileKind { Bump, GaussianBump };

inline double profile_value(ProfileKind k, double s) {
    return k == ProfileKind::Bump ? bump_profile(s) : gaussian_bump_profile(s);
}

/// Sample amplitude * profile(|x - center| / radius) on the grid.
inline Field sample_profile(const GridSpec& g, ProfileKind kind,
                            const std::array<double, 3>& center,
                            double radius, double amplitude) {
    Field out(g.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double r = g.radius_from(i, center);
        out[i] = amplitude * profile_value(kind, r / radius);
    }
    return out;
}

/// Centered bump wave: f a bump of the given radius, g = 0.
inline CauchyData bump_wave(const GridSpec& g, double mass, double radius,
                            double amplitude = 1.0,
                            ProfileKind kind = ProfileKind::Bump) {
    CauchyData w(g, mass);
    w.f = sample_profile(g, kind, {0.0, 0.0, 0.0}, radius, amplitude);
    return w;
}

/// Largest |x| (or r) at which |f| or |g| exceeds tol * max.
inline double support_radius(const CauchyData& w, double tol = 1e-12) {
    double mx = 0.0;
    for (std::size_t i = 0; i < w.f.size(); ++i)
        mx = std::max(mx, std::max(std::abs(w.f[i]), std::abs(w.g[i])));
    if (mx == 0.0) return 0.0;
    double rad = 0.0;
    for (std::size_t i = 0; i < w.f.size(); ++i) {
        if (std::abs(w.f[i]) > tol * mx || std::abs(w.g[i]) > tol * mx)
            rad = std::max(rad, w.grid.radius_from(i, {0.0, 0.0, 0.0}));
    }
    return rad;
}

} // namespace modham

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "modham/errors.hpp"

namespace modham {

enum class GridMode { CartesianPeriodic, Radial3d };

/// Discretization of R^d: a periodic box [-L,L)^d or, for spherically
/// symmetric d=3 problems, an offset radial grid on (0, Rmax).
struct GridSpec {
    GridMode mode = GridMode::Radial3d;
    int d = 3;            // spatial dimension
    double L = 0.0;       // box half-length (cartesian)
    int N = 0;            // points per axis (cartesian, power of two)
    double Rmax = 0.0;    // half-line truncation (radial3d)
    int Nr = 0;           // radial points (radial3d)

    static GridSpec cartesian(int d, double L, int N) {
        if (d != 2 && d != 3) throw ConfigError("cartesian mode needs d in {2,3}");
        if (N < 16 || (N & (N - 1)) != 0) throw ConfigError("N must be a power of two >= 16");
        if (L <= 1.0) throw ConfigError("box half-length must exceed 1 (unit ball must fit)");
        GridSpec g;
        g.mode = GridMode::CartesianPeriodic;
        g.d = d; g.L = L; g.N = N;
        return g;
    }

    static GridSpec radial3d(double Rmax, int Nr) {
        if (Nr < 16) throw ConfigError("Nr must be >= 16");
        if (Rmax <= 1.0) throw ConfigError("Rmax must exceed 1 (unit ball must fit)");
        GridSpec g;
        g.mode = GridMode::Radial3d;
        g.d = 3; g.Rmax = Rmax; g.Nr = Nr;
        return g;
    }

    bool radial() const { return mode == GridMode::Radial3d; }

    std::size_t size() const {
        if (radial()) return static_cast<std::size_t>(Nr);
        std::size_t n = 1;
        for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(N);
        return n;
    }

    double dr() const { return Rmax / Nr; }
    double dx() const { return 2.0 * L / N; }

    // radial node r_j = (j + 1/2) dr; the r = 0 node is excluded
    double rnode(int j) const { return (j + 0.5) * dr(); }

    // sine-basis frequency for mode k (radial3d)
    double sine_freq(int k) const { return M_PI * (k + 1) / Rmax; }

    // cartesian coordinate along one axis
    double xnode(int i) const { return -L + i * dx(); }

    // signed wavenumber for DFT index k along one axis
    double wavenumber(int k) const {
        int ks = (k <= N / 2 - 1) ? k : k - N;
        return M_PI * ks / L;
    }

    // quadrature weight of one sample: midpoint with 4 pi r^2 dr (radial),
    // plain product rule on the uniform grid (cartesian)
    double weight(std::size_t idx) const {
        if (radial()) {
            double r = rnode(static_cast<int>(idx));
            return 4.0 * M_PI * r * r * dr();
        }
        double w = 1.0;
        for (int i = 0; i < d; ++i) w *= dx();
        return w;
    }

    // multi-index of a flattened cartesian sample, row-major
    std::array<int, 3> unflatten(std::size_t idx) const {
        std::array<int, 3> mi{0, 0, 0};
        for (int ax = d - 1; ax >= 0; --ax) {
            mi[ax] = static_cast<int>(idx % N);
            idx /= N;
        }
        return mi;
    }

    // |x - c| for a flattened sample
    double radius_from(std::size_t idx, const std::array<double, 3>& c) const {
        if (radial()) return std::abs(rnode(static_cast<int>(idx)) - c[0]);
        auto mi = unflatten(idx);
        double s = 0.0;
        for (int ax = 0; ax < d; ++ax) {
            double dxa = xnode(mi[ax]) - c[ax];
            s += dxa * dxa;
        }
        return std::sqrt(s);
    }

    bool operator==(const GridSpec& o) const {
        return mode == o.mode && d == o.d && L == o.L && N == o.N &&
               Rmax == o.Rmax && Nr == o.Nr;
    }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

using Field = std::vector<double>;

inline double quadrature(const GridSpec& g, const Field& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += g.weight(i) * a[i];
    return s;
}

inline double quadrature_product(const GridSpec& g, const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += g.weight(i) * a[i] * b[i];
    return s;
}

} // namespace modham

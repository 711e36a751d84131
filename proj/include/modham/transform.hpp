#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "modham/grid.hpp"

namespace modham {

// Plan registry. Plans are created once per (kind, shape) with
// FFTW_UNALIGNED so they can be executed on any caller buffer.
namespace detail {

class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    fftw_plan r2r(int n, fftw_r2r_kind kind) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(n, static_cast<int>(kind));
        auto it = r2r_.find(key);
        if (it != r2r_.end()) return it->second;
        std::vector<double> buf(static_cast<std::size_t>(n));
        fftw_plan p = fftw_plan_r2r_1d(n, buf.data(), buf.data(), kind,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        r2r_[key] = p;
        return p;
    }

    fftw_plan dft(const std::vector<int>& dims, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(dims, sign);
        auto it = dft_.find(key);
        if (it != dft_.end()) return it->second;
        std::size_t n = 1;
        for (int d : dims) n *= static_cast<std::size_t>(d);
        std::vector<std::complex<double>> buf(n);
        fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                                    reinterpret_cast<fftw_complex*>(buf.data()),
                                    reinterpret_cast<fftw_complex*>(buf.data()),
                                    sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        dft_[key] = p;
        return p;
    }

  private:
    PlanCache() = default;
    std::mutex mu_;
    std::map<std::pair<int, int>, fftw_plan> r2r_;
    std::map<std::pair<std::vector<int>, int>, fftw_plan> dft_;
};

} // namespace detail

// ---- radial (sine basis) -------------------------------------------------
//
// A radial function f supported in (0, Rmax) is represented through
// u(r) = r f(r) on the offset grid r_j = (j+1/2) dr. Its sine coefficients
// c_k (k = 0..Nr-1, frequency w_k = pi (k+1)/Rmax) satisfy
//   u(r_j) = (1/2Nr) [ 2 sum_{k<Nr-1} c_k sin(w_k r_j) + c_{Nr-1} sin(w_{Nr-1} r_j) ].

inline std::vector<double> dst_forward(const GridSpec& g, const std::vector<double>& u) {
    std::vector<double> c(u.size());
    fftw_plan p = detail::PlanCache::instance().r2r(g.Nr, FFTW_RODFT10);
    fftw_execute_r2r(p, const_cast<double*>(u.data()), c.data());
    return c;
}

inline std::vector<double> dst_inverse(const GridSpec& g, const std::vector<double>& c) {
    std::vector<double> u(c.size());
    fftw_plan p = detail::PlanCache::instance().r2r(g.Nr, FFTW_RODFT01);
    fftw_execute_r2r(p, const_cast<double*>(c.data()), u.data());
    double s = 1.0 / (2.0 * g.Nr);
    for (double& v : u) v *= s;
    return u;
}

// du/dr at the radial nodes from the sine coefficients of u.
// The top mode's cosine vanishes at every midpoint, so a DCT-III over the
// remaining modes is exact.
inline std::vector<double> sine_derivative(const GridSpec& g, const std::vector<double>& c) {
    int n = g.Nr;
    std::vector<double> in(static_cast<std::size_t>(n), 0.0);
    for (int k = 1; k < n; ++k) in[k] = c[k - 1] * g.sine_freq(k - 1) / (2.0 * n);
    std::vector<double> out(static_cast<std::size_t>(n));
    fftw_plan p = detail::PlanCache::instance().r2r(n, FFTW_REDFT01);
    fftw_execute_r2r(p, in.data(), out.data());
    return out;
}

// ---- cartesian (torus) ---------------------------------------------------

inline std::vector<std::complex<double>> fft_forward(const GridSpec& g, const Field& f) {
    std::vector<int> dims(static_cast<std::size_t>(g.d), g.N);
    std::vector<std::complex<double>> buf(f.begin(), f.end());
    fftw_plan p = detail::PlanCache::instance().dft(dims, FFTW_FORWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(buf.data()));
    double s = 1.0 / static_cast<double>(f.size());
    for (auto& z : buf) z *= s; // convention: f(x) = sum_k c_k exp(i p_k x)
    return buf;
}

inline Field fft_inverse(const GridSpec& g, std::vector<std::complex<double>> c) {
    std::vector<int> dims(static_cast<std::size_t>(g.d), g.N);
    fftw_plan p = detail::PlanCache::instance().dft(dims, FFTW_BACKWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(c.data()),
                     reinterpret_cast<fftw_complex*>(c.data()));
    Field f(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) f[i] = c[i].real();
    return f;
}

// |p|^2 at a flattened cartesian spectral index
inline double cartesian_p2(const GridSpec& g, std::size_t idx) {
    double s = 0.0;
    for (int ax = g.d - 1; ax >= 0; --ax) {
        int k = static_cast<int>(idx % g.N);
        idx /= g.N;
        double p = g.wavenumber(k);
        s += p * p;
    }
    return s;
}

// p component along one axis at a flattened cartesian spectral index
inline double cartesian_p(const GridSpec& g, std::size_t idx, int axis) {
    for (int ax = g.d - 1; ax >= 0; --ax) {
        int k = static_cast<int>(idx % g.N);
        idx /= g.N;
        if (ax == axis) return g.wavenumber(k);
    }
    return 0.0;
}

} // namespace modham

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "modham/errors.hpp"

namespace modham {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Tolerance knobs for the standard-subspace calculus.
struct ModularTolerances {
    double structure = 1e-12;   // J^2 = -1, metric compatibility
    double rank = 1e-10;        // standardness rank test
    double factorial = 1e-10;   // |lambda - 1| threshold on spec(Delta)
    double consistency = 1e-9;  // dual-route agreement (entropy, projections)
};

/// Ambient complex Hilbert space in a real presentation: R^{2n} with a
/// complex structure J and the real part g of the scalar product.
/// Convention: <x,y> = g(x,y) + i g(Jx,y), antilinear in the first slot.
class ComplexSpace {
  public:
    ComplexSpace(Mat J, Mat g, ModularTolerances tol = {})
        : J_(std::move(J)), g_(std::move(g)), tol_(tol) {
        const auto dim = J_.rows();
        if (dim % 2 != 0 || J_.cols() != dim || g_.rows() != dim || g_.cols() != dim)
            throw ConfigError("ComplexSpace: need square 2n x 2n matrices");
        if ((J_ * J_ + Mat::Identity(dim, dim)).norm() > tol_.structure * dim)
            throw ConfigError("ComplexSpace: J^2 != -1");
        if ((g_ - g_.transpose()).norm() > tol_.structure * dim)
            throw ConfigError("ComplexSpace: g not symmetric");
        if ((J_.transpose() * g_ * J_ - g_).norm() > tol_.structure * g_.norm() * dim)
            throw ConfigError("ComplexSpace: g(Jx,Jy) != g(x,y)");
        Eigen::LLT<Mat> llt(g_);
        if (llt.info() != Eigen::Success)
            throw ConfigError("ComplexSpace: g not positive definite");
        R_ = llt.matrixU(); // g = R^T R; z = R x gives orthonormal coordinates
        Rinv_ = R_.inverse();
        Jz_ = R_ * J_ * Rinv_;
    }

    /// C^n as R^{2n}, coordinates (x, y), J(x, y) = (-y, x), g = I.
    static ComplexSpace standard(int n) {
        Mat J = Mat::Zero(2 * n, 2 * n);
        J.topRightCorner(n, n) = -Mat::Identity(n, n);
        J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
        return ComplexSpace(std::move(J), Mat::Identity(2 * n, 2 * n));
    }

    int realDim() const { return static_cast<int>(J_.rows()); }
    int n() const { return realDim() / 2; }
    const Mat& J() const { return J_; }
    const Mat& g() const { return g_; }
    const Mat& Jz() const { return Jz_; }        // complex structure, orthonormal coords
    const Mat& toOrtho() const { return R_; }    // z = R x
    const Mat& fromOrtho() const { return Rinv_; }
    const ModularTolerances& tol() const { return tol_; }

    // complex scalar product in orthonormal coordinates
    std::complex<double> inner_z(const Vec& x, const Vec& y) const {
        return {x.dot(y), (Jz_ * x).dot(y)};
    }

  private:
    Mat J_, g_, R_, Rinv_, Jz_;
    ModularTolerances tol_;
};

/// A real-linear subspace H with H \cap iH = {0}, presented by a basis
/// whose columns are stored in orthonormal ambient coordinates.
struct StandardSubspace {
    ComplexSpace ambient;
    Mat basis;              // 2n x k, orthonormal columns (orthonormal coords)
    double rankCondition;   // condition number of [basis | J basis]
    bool factorialKnown = false;
    bool factorial = false;
};

/// Modular data of a standard subspace, all matrices in the ambient's
/// orthonormal coordinates.
struct ModularData {
    Mat tomita;     // S = jconj delta^{1/2}
    Mat delta;      // positive, complex linear
    Mat jconj;      // antiunitary involution
    Mat logDelta;
    Vec eigenvalues;   // spec(delta), ascending
    Mat eigenvectors;  // columns, orthonormal
    double spectralGap; // min |lambda - 1|
    bool factorial;
};

inline StandardSubspace make_standard_subspace(const ComplexSpace& ambient, const Mat& basis_x) {
    if (basis_x.rows() != ambient.realDim())
        throw ConfigError("make_standard_subspace: basis row count mismatch");
    Mat B = ambient.toOrtho() * basis_x;
    const auto k = B.cols();
    Mat full(B.rows(), 2 * k);
    full << B, ambient.Jz() * B;
    Eigen::JacobiSVD<Mat> svd(full);
    double cond = svd.singularValues()(0) /
                  svd.singularValues()(svd.singularValues().size() - 1);
    if (!(svd.singularValues()(svd.singularValues().size() - 1) >
          ambient.tol().rank * svd.singularValues()(0)))
        throw RankDeficient("H + iH does not span (H not standard)");
    // orthonormalize the basis for numerical hygiene
    Eigen::HouseholderQR<Mat> qr(B);
    Mat Q = qr.householderQ() * Mat::Identity(B.rows(), k);
    return StandardSubspace{ambient, Q, cond};
}

inline ModularData modular_data(const StandardSubspace& H) {
    const Mat& B = H.basis;
    const Mat& Jz = H.ambient.Jz();
    const auto dim = B.rows();
    if (2 * B.cols() != dim)
        throw ConfigError("modular_data: H + iH must equal the ambient space");
    Mat plus(dim, dim), minus(dim, dim);
    plus << B, Jz * B;
    minus << B, -(Jz * B);
    // Tomita involution: h + ik -> h - ik
    Mat S = minus * plus.inverse();
    ModularData md;
    md.tomita = S;
    Mat delta = S.transpose() * S;
    delta = 0.5 * (delta + delta.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(delta);
    md.delta = std::move(delta);
    md.eigenvalues = es.eigenvalues();
    md.eigenvectors = es.eigenvectors();
    if (md.eigenvalues(0) <= 0.0)
        throw ComputeError("modular_data: Delta not positive definite");
    Vec lg = md.eigenvalues.array().log();
    md.logDelta = md.eigenvectors * lg.asDiagonal() * md.eigenvectors.transpose();
    Vec isqrt = md.eigenvalues.array().rsqrt();
    Mat deltaInvSqrt = md.eigenvectors * isqrt.asDiagonal() * md.eigenvectors.transpose();
    md.jconj = S * deltaInvSqrt;
    md.spectralGap = (md.eigenvalues.array() - 1.0).abs().minCoeff();
    md.factorial = md.spectralGap > H.ambient.tol().factorial;
    return md;
}

/// Delta^{is} as a real matrix.
inline Mat modular_unitary(const ComplexSpace& amb, const ModularData& md, double s) {
    // exp(i s log Delta) = cos(s log Delta) + J sin(s log Delta)
    Vec lg = md.eigenvalues.array().log();
    Vec c = (s * lg.array()).cos();
    Vec sn = (s * lg.array()).sin();
    Mat C = md.eigenvectors * c.asDiagonal() * md.eigenvectors.transpose();
    Mat Sn = md.eigenvectors * sn.asDiagonal() * md.eigenvectors.transpose();
    return C + amb.Jz() * Sn;
}

namespace detail {

inline Mat span_projector(const Mat& B) { return B * (B.transpose() * B).inverse() * B.transpose(); }

inline double subspace_residual(const Mat& B, const Mat& vectors) {
    Mat P = span_projector(B);
    Mat r = vectors - P * vectors;
    double denom = vectors.norm();
    return denom > 0.0 ? r.norm() / denom : 0.0;
}

} // namespace detail

inline void require_factorial(const StandardSubspace& H, const ModularData& md,
                              const char* what) {
    if (!md.factorial)
        throw NotFactorial(std::string(what) + ": 1 in spec(Delta) (gap " +
                           std::to_string(md.spectralGap) + ")");
    (void)H;
}

/// E_H = (1+Delta)^{-1} + J_H Delta^{1/2} (1+Delta)^{-1}
inline Mat projection_E(const StandardSubspace& H, const ModularData& md) {
    (void)H;
    const auto dim = md.delta.rows();
    Mat inv = (Mat::Identity(dim, dim) + md.delta).inverse();
    Vec sq = md.eigenvalues.array().sqrt();
    Mat sqrtDelta = md.eigenvectors * sq.asDiagonal() * md.eigenvectors.transpose();
    return inv + md.jconj * sqrtDelta * inv;
}

/// P_H = (1-Delta)^{-1} + J_H Delta^{1/2} (1-Delta)^{-1} (cutting projection)
inline Mat projection_P(const StandardSubspace& H, const ModularData& md) {
    require_factorial(H, md, "projection_P");
    const auto dim = md.delta.rows();
    Mat inv = (Mat::Identity(dim, dim) - md.delta).inverse();
    Vec sq = md.eigenvalues.array().sqrt();
    Mat sqrtDelta = md.eigenvectors * sq.asDiagonal() * md.eigenvectors.transpose();
    return inv + md.jconj * sqrtDelta * inv;
}

/// Q_H = (1 + S_H)/2
inline Mat projection_Q(const StandardSubspace& H, const ModularData& md) {
    (void)H;
    const auto dim = md.tomita.rows();
    return 0.5 * (Mat::Identity(dim, dim) + md.tomita);
}

/// Entropy of the vector k with respect to H: the two spectral sums of the
/// cutting-projection formula, cross-checked against the direct evaluation
/// Im(k, P_H i log Delta k).
inline double vector_entropy(const StandardSubspace& H, const ModularData& md, const Vec& k) {
    require_factorial(H, md, "vector_entropy");
    const Mat& Jz = H.ambient.Jz();
    // The scalar product here is antilinear in the first slot, which flips
    // the sign of the imaginary part relative to the linear-in-first
    // convention; the overall sign is pinned by positivity on H
    // (passivity of log Delta).
    // spectral-sum route: a(l) = 1/(1-l), b(l) = sqrt(l)/(1-l)
    double s_spec = 0.0;
    for (int i = 0; i < md.eigenvalues.size(); ++i) {
        double l = md.eigenvalues(i);
        Vec vi = md.eigenvectors.col(i);
        double a = 1.0 / (1.0 - l);
        double b = std::sqrt(l) / (1.0 - l);
        double proj_kk = k.dot(vi) * vi.dot(k);
        double proj_jk = k.dot(md.jconj * vi) * vi.dot(k);
        s_spec -= a * std::log(l) * proj_kk - b * std::log(l) * proj_jk;
    }
    // direct route
    Mat P = projection_P(H, md);
    Vec w = P * (Jz * (md.logDelta * k));
    double s_direct = -(Jz * k).dot(w);
    double scale = std::max({std::abs(s_spec), std::abs(s_direct), 1.0});
    if (std::abs(s_spec - s_direct) > H.ambient.tol().consistency * scale)
        throw ComputeError("vector_entropy: spectral and direct routes disagree");
    return s_spec;
}

// ---- invariance equivalence (three of the equivalent conditions) -------------

struct InvarianceReport {
    bool flowPreserves = false;       // (i)  e^{isA} H = H on sampled s
    bool resolventPreserves = false;  // (v)  (K +- 1)^{-1} H in H, K = iA
    bool skewOnH = false;             // (vi) K H in H and K|_H skew on (H, Re)
    double flowResidual = 0.0;
    double resolventResidual = 0.0;
    double skewResidual = 0.0;
    bool equivalent = false;
};

/// A is a selfadjoint complex-linear operator given as a real symmetric
/// matrix commuting with the complex structure (orthonormal coordinates).
inline InvarianceReport invariance_equivalence_check(const StandardSubspace& H, const Mat& A,
                                                     double tol = 1e-8) {
    const Mat& Jz = H.ambient.Jz();
    const Mat& B = H.basis;
    const auto dim = B.rows();
    if ((A - A.transpose()).norm() > 1e-10 * std::max(1.0, A.norm()))
        throw ConfigError("invariance check: A must be symmetric");
    if ((A * Jz - Jz * A).norm() > 1e-10 * std::max(1.0, A.norm()))
        throw ConfigError("invariance check: A must commute with the complex structure");
    Mat K = Jz * A;
    InvarianceReport rep;
    for (double s : {0.37, 1.0, 2.5}) {
        Mat U = (s * K).exp(); // e^{isA}
        rep.flowResidual = std::max(rep.flowResidual, detail::subspace_residual(B, U * B));
    }
    rep.flowPreserves = rep.flowResidual < tol;
    for (double sign : {1.0, -1.0}) {
        Mat res = (K + sign * Mat::Identity(dim, dim)).inverse() * B;
        rep.resolventResidual = std::max(rep.resolventResidual, detail::subspace_residual(B, res));
    }
    rep.resolventPreserves = rep.resolventResidual < tol;
    double inRes = detail::subspace_residual(B, K * B);
    Mat skew = B.transpose() * K * B;
    double skewSym = (skew + skew.transpose()).norm() / std::max(1.0, skew.norm());
    rep.skewResidual = std::max(inRes, skewSym);
    rep.skewOnH = rep.skewResidual < tol;
    rep.equivalent = (rep.flowPreserves == rep.resolventPreserves) &&
                     (rep.resolventPreserves == rep.skewOnH);
    return rep;
}

// ---- passivity ---------------------------------------------------------------

struct PassivityReport {
    int samples = 0;
    int nonPositive = 0;
    int nonNegative = 0;
    double minValue = 0.0;
    double maxValue = 0.0;
    bool passive = false;  // all sampled (xi, A_n xi) <= tol
    bool active = false;   // all sampled (xi, A_n xi) >= -tol
    double productPositivityMinEig = 0.0; // min eig of sym(A log Delta), when passive
};

/// Sign statistics of (xi, A_n xi) over random xi in the real span of
/// n-fold monomials of H-vectors, A_n the Leibniz tensor generator.
inline PassivityReport passivity_check(const StandardSubspace& H, const ModularData& md,
                                       const Mat& A, int tensorPower, int budget = 1000,
                                       unsigned seed = 1, double tol = 1e-10) {
    if (tensorPower < 1 || tensorPower > 3)
        throw ConfigError("passivity_check: tensor power must be in 1..3");
    auto inv = invariance_equivalence_check(H, A);
    if (!inv.flowPreserves)
        throw NotInvariant("passivity_check: e^{isA} does not preserve H");
    const Mat& B = H.basis;
    const Mat& Jz = H.ambient.Jz();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto randomH = [&]() {
        Vec c(B.cols());
        for (int i = 0; i < c.size(); ++i) c(i) = gauss(rng);
        Vec h = B * c;
        return h;
    };
    auto cip = [&](const Vec& x, const Vec& y) {
        return std::complex<double>(x.dot(y), (Jz * x).dot(y));
    };
    PassivityReport rep;
    rep.samples = budget;
    rep.minValue = 1e300;
    rep.maxValue = -1e300;
    const int terms = 2; // monomial terms per sampled xi
    for (int it = 0; it < budget; ++it) {
        // xi = sum_t h_{t,1} x ... x h_{t,n}; real coefficients absorbed in h's
        std::vector<std::vector<Vec>> mono(terms);
        for (int t = 0; t < terms; ++t)
            for (int j = 0; j < tensorPower; ++j) mono[static_cast<std::size_t>(t)].push_back(randomH());
        std::complex<double> qval = 0.0, nrm = 0.0;
        for (int t1 = 0; t1 < terms; ++t1) {
            for (int t2 = 0; t2 < terms; ++t2) {
                // <xi1, A_n xi2> = sum_j <h1_j, A h2_j> prod_{i != j} <h1_i, h2_i>
                std::vector<std::complex<double>> ip(static_cast<std::size_t>(tensorPower));
                for (int i = 0; i < tensorPower; ++i)
                    ip[static_cast<std::size_t>(i)] =
                        cip(mono[static_cast<std::size_t>(t1)][static_cast<std::size_t>(i)],
                            mono[static_cast<std::size_t>(t2)][static_cast<std::size_t>(i)]);
                std::complex<double> prodAll = 1.0;
                for (auto z : ip) prodAll *= z;
                nrm += prodAll;
                for (int j = 0; j < tensorPower; ++j) {
                    std::complex<double> term =
                        cip(mono[static_cast<std::size_t>(t1)][static_cast<std::size_t>(j)],
                            A * mono[static_cast<std::size_t>(t2)][static_cast<std::size_t>(j)]);
                    for (int i = 0; i < tensorPower; ++i)
                        if (i != j) term *= ip[static_cast<std::size_t>(i)];
                    qval += term;
                }
            }
        }
        double q = qval.real() / std::max(1e-300, nrm.real());
        rep.minValue = std::min(rep.minValue, q);
        rep.maxValue = std::max(rep.maxValue, q);
        if (q <= tol) ++rep.nonPositive;
        if (q >= -tol) ++rep.nonNegative;
    }
    rep.passive = rep.nonPositive == rep.samples;
    rep.active = rep.nonNegative == rep.samples;
    if (rep.passive) {
        Mat M = A * md.logDelta;
        Mat Ms = 0.5 * (M + M.transpose());
        Eigen::SelfAdjointEigenSolver<Mat> es(Ms);
        rep.productPositivityMinEig = es.eigenvalues()(0);
    }
    return rep;
}

// ---- seeded random factorial subspaces ----------------------------------------

/// Orthonormalization of a seeded random real 2n x n matrix, retried until
/// standard and (optionally) comfortably factorial.
inline StandardSubspace random_standard_subspace(const ComplexSpace& amb, unsigned seed,
                                                 double minGap = 1e-6, int maxTries = 64,
                                                 double maxCondition = 1e7) {
    // the conjugation pairs spec(delta) under lambda -> 1/lambda, so odd
    // complex dimension forces an eigenvalue 1 and the subspace cannot be
    // factorial
    if (amb.n() % 2 != 0)
        throw NotFactorial("random_standard_subspace: odd complex dimension");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < maxTries; ++attempt) {
        Mat Bx(amb.realDim(), amb.n());
        for (int i = 0; i < Bx.rows(); ++i)
            for (int j = 0; j < Bx.cols(); ++j) Bx(i, j) = gauss(rng);
        try {
            StandardSubspace H = make_standard_subspace(amb, amb.fromOrtho() * Bx);
            ModularData md = modular_data(H);
            if (md.spectralGap < minGap) continue;
            if (md.eigenvalues.maxCoeff() / md.eigenvalues.minCoeff() > maxCondition)
                continue;
            H.factorialKnown = true;
            H.factorial = md.factorial;
            return H;
        } catch (const RankDeficient&) {
            continue;
        }
    }
    throw ComputeError("random_standard_subspace: no factorial subspace found");
}

} // namespace modham

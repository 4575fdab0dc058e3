#pragma once

#include <arh/empirical.hpp>
#include <arh/errors.hpp>
#include <arh/grid_basis.hpp>
#include <arh/scenario.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace arh {

/// Orthonormal wavelet filter families for the periodized transform.
enum class WaveletFamily { Haar, Daubechies4 };

/// Flat wavelet decomposition of a dyadic signal.
///
/// Layout: the 2^j0 scaling coefficients of the coarsest retained level,
/// followed by detail blocks for levels j0, j0+1, ..., J-1 (coarse to fine).
template <class Scalar>
struct WaveletCoeffs {
    int j0 = 0;
    int J = 0;
    VecX<Scalar> coeffs;
};

/// Tuning of the wavelet smoother.
///
/// `lambda` < 0 means "estimate from the data"; nonnegative values are used
/// as-is.  `M_spec` is the number of spectral terms entering the estimated
/// smoothing parameter.
struct WaveletConfig {
    WaveletFamily family = WaveletFamily::Daubechies4;
    int j0 = 2;
    int J = 6;
    double lambda = -1.0;
    int M_spec = 50;
};

namespace detail {

template <class Scalar>
VecX<Scalar> wavelet_filter(WaveletFamily family) {
    VecX<Scalar> h;
    if (family == WaveletFamily::Haar) {
        h.resize(2);
        const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
        h << r, r;
    } else {
        h.resize(4);
        const Scalar s3 = std::sqrt(Scalar(3)), s2 = std::sqrt(Scalar(2));
        h << (Scalar(1) + s3) / (Scalar(4) * s2), (Scalar(3) + s3) / (Scalar(4) * s2),
            (Scalar(3) - s3) / (Scalar(4) * s2), (Scalar(1) - s3) / (Scalar(4) * s2);
    }
    return h;
}

template <class Scalar>
VecX<Scalar> quadrature_mirror(const VecX<Scalar>& h) {
    VecX<Scalar> g(h.size());
    for (Eigen::Index m = 0; m < h.size(); ++m)
        g(m) = (m % 2 == 0 ? Scalar(1) : Scalar(-1)) * h(h.size() - 1 - m);
    return g;
}

inline bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

inline int log2_of(Eigen::Index n) {
    int j = 0;
    while ((Eigen::Index(1) << j) < n) ++j;
    return j;
}

}  // namespace detail

/// Periodized orthonormal discrete wavelet transform down to level j0.
///
/// @throws non_dyadic_length_error unless the signal length is a power of
///         two, invalid_argument_error when j0 is out of range.
template <class Scalar>
WaveletCoeffs<Scalar> dwt(const VecX<Scalar>& signal, WaveletFamily family, int j0) {
    if (!detail::is_power_of_two(signal.size()))
        throw non_dyadic_length_error("dwt: signal length must be a power of two");
    const int J = detail::log2_of(signal.size());
    if (j0 < 0 || j0 > J) throw invalid_argument_error("dwt: need 0 <= j0 <= J");
    const VecX<Scalar> h = detail::wavelet_filter<Scalar>(family);
    const VecX<Scalar> g = detail::quadrature_mirror(h);
    WaveletCoeffs<Scalar> out{j0, J, VecX<Scalar>(signal.size())};
    VecX<Scalar> cur = signal;
    Eigen::Index write_end = signal.size();
    while (cur.size() > (Eigen::Index(1) << j0)) {
        const Eigen::Index L = cur.size(), half = L / 2;
        VecX<Scalar> s(half), d(half);
        for (Eigen::Index k = 0; k < half; ++k) {
            Scalar sv = Scalar(0), dv = Scalar(0);
            for (Eigen::Index m = 0; m < h.size(); ++m) {
                const Scalar x = cur((2 * k + m) % L);
                sv += h(m) * x;
                dv += g(m) * x;
            }
            s(k) = sv;
            d(k) = dv;
        }
        out.coeffs.segment(write_end - half, half) = d;
        write_end -= half;
        cur = s;
    }
    out.coeffs.head(write_end) = cur;
    return out;
}

/// Inverse of dwt: synthesizes the signal from the coarsest level upward.
template <class Scalar>
VecX<Scalar> idwt(const WaveletCoeffs<Scalar>& wc, WaveletFamily family) {
    const VecX<Scalar> h = detail::wavelet_filter<Scalar>(family);
    const VecX<Scalar> g = detail::quadrature_mirror(h);
    VecX<Scalar> cur = wc.coeffs.head(Eigen::Index(1) << wc.j0);
    Eigen::Index offset = cur.size();
    while (cur.size() < wc.coeffs.size()) {
        const Eigen::Index half = cur.size(), L = 2 * half;
        VecX<Scalar> next = VecX<Scalar>::Zero(L);
        for (Eigen::Index k = 0; k < half; ++k)
            for (Eigen::Index m = 0; m < h.size(); ++m)
                next((2 * k + m) % L) += h(m) * cur(k) + g(m) * wc.coeffs(offset + k);
        offset += half;
        cur = next;
    }
    return cur;
}

/// The spectral smoothing parameter (noise energy times signal energy per
/// dyadic point), evaluated from the scenario's closed-form sequences.
template <class Scalar>
double lambda_hat(const ScenarioSpec<Scalar>& spec, int M_spec, int N) {
    if (M_spec < 1 || N < 1) throw invalid_argument_error("lambda_hat: need M_spec, N >= 1");
    double noise = 0.0, signal = 0.0;
    for (int j = 1; j <= M_spec; ++j) {
        const double c = double(spec.c1) * std::pow(double(j), -double(spec.delta1));
        const double r = double(spec.c2) * std::pow(double(j), -double(spec.delta2));
        noise += c * (1.0 - r * r);
        signal += c;
    }
    return noise * signal / double(N);
}

namespace detail {

/// Functional PCA of a curve sample under grid quadrature: eigenvalues
/// (descending, round-off negatives clipped), eigenfunction values (columns)
/// and per-curve scores.
template <class Scalar>
struct CurveFpca {
    VecX<Scalar> eigenvalues;
    MatX<Scalar> eigenfunctions;  // P x K values, quadrature-orthonormal
    MatX<Scalar> scores;          // n x K
};

template <class Scalar>
CurveFpca<Scalar> curve_fpca(const MatX<Scalar>& values, const Grid<Scalar>& grid, bool center) {
    const Eigen::Index n = values.rows(), P = values.cols();
    MatX<Scalar> X = values;
    if (center) X.rowwise() -= X.colwise().mean();
    const VecX<Scalar> sqw = grid.weights.cwiseSqrt();
    const MatX<Scalar> G = X * sqw.asDiagonal() / std::sqrt(Scalar(n));
    MatX<Scalar> B = G.transpose() * G;
    B = ((B + B.transpose()) / Scalar(2)).eval();
    Eigen::SelfAdjointEigenSolver<MatX<Scalar>> solver(B);
    if (solver.info() != Eigen::Success)
        throw decomposition_error("curve_fpca: eigensolver did not converge");
    CurveFpca<Scalar> out;
    out.eigenvalues = solver.eigenvalues().reverse();
    MatX<Scalar> U = solver.eigenvectors().rowwise().reverse();
    for (Eigen::Index k = 0; k < P; ++k)
        if (out.eigenvalues(k) < Scalar(0)) out.eigenvalues(k) = Scalar(0);
    canonicalize_signs(U);
    out.eigenfunctions = sqw.cwiseInverse().asDiagonal() * U;
    out.scores = X * (grid.weights.asDiagonal() * out.eigenfunctions);
    return out;
}

template <class Scalar>
MatX<Scalar> stack_values(const std::vector<Curve<Scalar>>& curves) {
    if (curves.empty()) throw invalid_argument_error("curve sample is empty");
    for (const auto& c : curves)
        if (!same_grid(c.grid, curves.front().grid))
            throw grid_mismatch_error("curve sample mixes grids");
    MatX<Scalar> X(Eigen::Index(curves.size()), curves.front().values.size());
    for (std::size_t i = 0; i < curves.size(); ++i) X.row(Eigen::Index(i)) = curves[i].values;
    return X;
}

}  // namespace detail

/// Empirical counterpart of lambda_hat: spectral quantities from a
/// functional PCA of the sample, lag-1 autocorrelations from the scores.
template <class Scalar>
double lambda_hat_empirical(const std::vector<Curve<Scalar>>& curves, int M_spec, int N) {
    if (M_spec < 1 || N < 1)
        throw invalid_argument_error("lambda_hat_empirical: need M_spec, N >= 1");
    if (curves.size() < 2)
        throw invalid_n_error("lambda_hat_empirical: need at least two curves");
    const MatX<Scalar> X = detail::stack_values(curves);
    const auto fpca = detail::curve_fpca(X, curves.front().grid, false);
    const int n = int(curves.size());
    const Scalar floor = Scalar(1e-12) * fpca.eigenvalues.sum();
    double noise = 0.0, signal = 0.0;
    for (int j = 0; j < M_spec && j < int(fpca.eigenvalues.size()); ++j) {
        const double c = double(fpca.eigenvalues(j));
        if (!(c > double(floor))) break;
        const auto col = fpca.scores.col(j);
        const double num = double(col.head(n - 1).dot(col.tail(n - 1))) / double(n - 1);
        const double den = double(col.squaredNorm()) / double(n);
        const double r2 = std::min((num / den) * (num / den), 1.0);
        noise += c * (1.0 - r2);
        signal += c;
    }
    return noise * signal / double(N);
}

namespace detail {

/// Uniform dyadic abscissae a + k (b-a)/(2^J - 1), endpoints included.
template <class Scalar>
VecX<Scalar> dyadic_points(Scalar a, Scalar b, int J) {
    const Eigen::Index N = Eigen::Index(1) << J;
    VecX<Scalar> t(N);
    const Scalar step = (b - a) / Scalar(N - 1);
    for (Eigen::Index k = 0; k < N; ++k) t(k) = a + Scalar(k) * step;
    return t;
}

template <class Scalar>
bool grid_is_dyadic(const Grid<Scalar>& grid, int J) {
    const Eigen::Index N = Eigen::Index(1) << J;
    if (grid.size() != N) return false;
    const VecX<Scalar> t = dyadic_points(grid.a, grid.b, J);
    return (grid.points - t).cwiseAbs().maxCoeff() <= Scalar(1e-9) * (grid.b - grid.a);
}

/// Linear interpolation of (xs, ys) at query points; xs strictly increasing
/// and queries within [xs.front(), xs.back()] up to round-off.
template <class Scalar>
VecX<Scalar> interp_linear(const VecX<Scalar>& xs, const VecX<Scalar>& ys,
                           const VecX<Scalar>& queries) {
    VecX<Scalar> out(queries.size());
    for (Eigen::Index q = 0; q < queries.size(); ++q) {
        const Scalar t = std::min(std::max(queries(q), xs(0)), xs(xs.size() - 1));
        Eigen::Index hi = 1;
        while (hi + 1 < xs.size() && xs(hi) < t) ++hi;
        const Scalar x0 = xs(hi - 1), x1 = xs(hi);
        const Scalar w = (t - x0) / (x1 - x0);
        out(q) = (Scalar(1) - w) * ys(hi - 1) + w * ys(hi);
    }
    return out;
}

}  // namespace detail

/// Shrinks the detail content of a curve through the periodized DWT: detail
/// coefficients at levels >= j0 are divided by 1 + lambda.  Non-dyadic grids
/// are linearly resampled onto 2^J uniform points and back; lambda = 0 is an
/// exact identity.
///
/// @throws invalid_argument_error when cfg.lambda is unresolved (negative)
///         or the level bounds are inconsistent.
template <class Scalar>
Curve<Scalar> wavelet_smooth(const Curve<Scalar>& curve, const WaveletConfig& cfg) {
    if (cfg.lambda < 0.0)
        throw invalid_argument_error("wavelet_smooth: smoothing parameter is unresolved");
    if (cfg.j0 < 0 || cfg.j0 >= cfg.J)
        throw invalid_argument_error("wavelet_smooth: need 0 <= j0 < J");
    if (cfg.lambda == 0.0) return curve;
    const Eigen::Index N = Eigen::Index(1) << cfg.J;
    const bool native = detail::grid_is_dyadic(curve.grid, cfg.J);
    VecX<Scalar> signal;
    if (native) {
        signal = curve.values;
    } else {
        const VecX<Scalar> t = detail::dyadic_points(curve.grid.a, curve.grid.b, cfg.J);
        signal = detail::interp_linear(curve.grid.points, curve.values, t);
    }
    auto wc = dwt(signal, cfg.family, cfg.j0);
    wc.coeffs.tail(N - (Eigen::Index(1) << cfg.j0)) /= Scalar(1) + Scalar(cfg.lambda);
    VecX<Scalar> smoothed = idwt(wc, cfg.family);
    if (native) return {curve.grid, std::move(smoothed)};
    const VecX<Scalar> t = detail::dyadic_points(curve.grid.a, curve.grid.b, cfg.J);
    return {curve.grid, detail::interp_linear(t, smoothed, curve.grid.points)};
}

/// Overload resolving the smoothing parameter from a scenario's spectra.
template <class Scalar>
Curve<Scalar> wavelet_smooth(const Curve<Scalar>& curve, WaveletConfig cfg,
                             const ScenarioSpec<Scalar>& spec) {
    cfg.lambda = lambda_hat(spec, cfg.M_spec, int(Eigen::Index(1) << cfg.J));
    return wavelet_smooth(curve, cfg);
}

/// Componentwise predictor on the eigenbasis of the smoothed, centered
/// sample: holds the functional PCA and the centered smoothed scores.
template <class Scalar>
struct WaveletPredictor {
    int k_n = 0;
    Grid<Scalar> grid;
    VecX<Scalar> eigenvalues;     // top k_n
    MatX<Scalar> eigenfunctions;  // P x k_n
    MatX<Scalar> scores;          // n x k_n, centered smoothed sample
};

/// Fits the wavelet-smoothed componentwise predictor.
///
/// Every curve is smoothed (the smoothing parameter is estimated from the
/// sample when cfg.lambda < 0), the smoothed sample is centered, and the
/// top-k_n functional principal components carry a componentwise fit.
///
/// @throws rank_deficiency_error when the k_n-th eigenvalue falls below
///         1e-12 of the total variance.
template <class Scalar>
WaveletPredictor<Scalar> wavelet_predictor(const std::vector<Curve<Scalar>>& curves, int k_n,
                                           WaveletConfig cfg) {
    if (k_n < 1) throw invalid_argument_error("wavelet_predictor: k_n must be >= 1");
    if (curves.size() < 3) throw invalid_n_error("wavelet_predictor: need at least three curves");
    if (cfg.lambda < 0.0)
        cfg.lambda = lambda_hat_empirical(curves, cfg.M_spec, int(Eigen::Index(1) << cfg.J));
    MatX<Scalar> smoothed(Eigen::Index(curves.size()), curves.front().values.size());
    for (std::size_t i = 0; i < curves.size(); ++i) {
        if (!same_grid(curves[i].grid, curves.front().grid))
            throw grid_mismatch_error("wavelet_predictor: curve sample mixes grids");
        smoothed.row(Eigen::Index(i)) = wavelet_smooth(curves[i], cfg).values;
    }
    const auto fpca = detail::curve_fpca(smoothed, curves.front().grid, true);
    if (k_n > int(fpca.eigenvalues.size()) ||
        fpca.eigenvalues(k_n - 1) <= Scalar(1e-12) * fpca.eigenvalues.sum())
        throw rank_deficiency_error("wavelet_predictor: sample rank below k_n");
    WaveletPredictor<Scalar> model;
    model.k_n = k_n;
    model.grid = curves.front().grid;
    model.eigenvalues = fpca.eigenvalues.head(k_n);
    model.eigenfunctions = fpca.eigenfunctions.leftCols(k_n);
    model.scores = fpca.scores.leftCols(k_n);
    return model;
}

/// Applies the wavelet-smoothed componentwise predictor to a raw query
/// curve (the query is not smoothed or centered).
template <class Scalar>
Curve<Scalar> predict(const WaveletPredictor<Scalar>& model, const Curve<Scalar>& query) {
    if (!same_grid(query.grid, model.grid))
        throw grid_mismatch_error("predict: query grid differs from the fitted grid");
    const Eigen::Index n = model.scores.rows();
    const VecX<Scalar> q =
        model.eigenfunctions.transpose() * model.grid.weights.cwiseProduct(query.values);
    const MatX<Scalar> D =
        model.scores.topRows(n - 1).transpose() * model.scores.bottomRows(n - 1);
    const VecX<Scalar> coeffs =
        D.transpose() * q.cwiseQuotient(model.eigenvalues) / Scalar(n - 1);
    return {model.grid, model.eigenfunctions * coeffs};
}

/// Penalty weight and rank budget of the penalized principal-component fit.
struct SmootherConfig {
    double ell = 0.0;
    int q = 1;
};

/// Gaussian-kernel regression settings: bandwidth and the roughness penalty
/// used to pre-smooth the history curves.
struct KernelConfig {
    double h = 1.0;
    double smooth_penalty = 0.0;
};

/// Roughness-penalized linear smoother on a fixed grid.
///
/// The hat operator is A = (I + ell Q)^{-1} with Q the quadrature-weighted
/// square of the second-divided-difference map; it is evaluated through the
/// spectral decomposition of Q, so extreme penalties stay stable and the
/// symmetric square root comes for free.
template <class Scalar = double>
class PenalizedSmoother {
  public:
    PenalizedSmoother(Grid<Scalar> grid, Scalar ell) : grid_(std::move(grid)), ell_(ell) {
        if (ell < Scalar(0)) throw invalid_argument_error("penalized smoother: ell must be >= 0");
        const Eigen::Index P = grid_.size();
        if (P < 3) throw invalid_argument_error("penalized smoother: need at least three points");
        D2_ = MatX<Scalar>::Zero(P - 2, P);
        for (Eigen::Index p = 0; p + 2 < P; ++p) {
            const Scalar hl = grid_.points(p + 1) - grid_.points(p);
            const Scalar hr = grid_.points(p + 2) - grid_.points(p + 1);
            const Scalar mid = (hl + hr) / Scalar(2);
            D2_(p, p) = Scalar(1) / (hl * mid);
            D2_(p, p + 1) = -(Scalar(1) / hl + Scalar(1) / hr) / mid;
            D2_(p, p + 2) = Scalar(1) / (hr * mid);
        }
        w_int_ = grid_.weights.segment(1, P - 2);
        if (ell_ == Scalar(0)) {
            A_ = MatX<Scalar>::Identity(P, P);
            A_sqrt_ = A_;
            return;
        }
        MatX<Scalar> Q = D2_.transpose() * w_int_.asDiagonal() * D2_;
        Q = ((Q + Q.transpose()) / Scalar(2)).eval();
        Eigen::SelfAdjointEigenSolver<MatX<Scalar>> solver(Q);
        if (solver.info() != Eigen::Success)
            throw decomposition_error("penalized smoother: eigensolver did not converge");
        VecX<Scalar> mu = solver.eigenvalues().cwiseMax(Scalar(0));
        const MatX<Scalar>& U = solver.eigenvectors();
        const VecX<Scalar> shrink = (VecX<Scalar>::Ones(P) + ell_ * mu).cwiseInverse();
        A_ = U * shrink.asDiagonal() * U.transpose();
        A_ = ((A_ + A_.transpose()) / Scalar(2)).eval();
        A_sqrt_ = U * shrink.cwiseSqrt().asDiagonal() * U.transpose();
        A_sqrt_ = ((A_sqrt_ + A_sqrt_.transpose()) / Scalar(2)).eval();
    }

    VecX<Scalar> apply(const VecX<Scalar>& values) const {
        if (ell_ == Scalar(0)) return values;
        return A_ * values;
    }
    VecX<Scalar> sqrt_apply(const VecX<Scalar>& values) const {
        if (ell_ == Scalar(0)) return values;
        return A_sqrt_ * values;
    }
    /// Quadrature-weighted squared second-difference seminorm.
    Scalar roughness(const VecX<Scalar>& values) const {
        const VecX<Scalar> d = D2_ * values;
        return d.cwiseAbs2().dot(w_int_);
    }

    const MatX<Scalar>& A() const { return A_; }
    const MatX<Scalar>& A_sqrt() const { return A_sqrt_; }
    const Grid<Scalar>& grid() const { return grid_; }
    Scalar ell() const { return ell_; }

  private:
    Grid<Scalar> grid_;
    Scalar ell_;
    MatX<Scalar> D2_, A_, A_sqrt_;
    VecX<Scalar> w_int_;
};

template <class Scalar>
PenalizedSmoother<Scalar> make_penalized_smoother(const Grid<Scalar>& grid, Scalar ell) {
    return PenalizedSmoother<Scalar>(grid, ell);
}

/// Smooths every curve of a sample with one shared hat operator.
template <class Scalar>
std::pair<std::vector<Curve<Scalar>>, PenalizedSmoother<Scalar>> penalized_smoother(
    const std::vector<Curve<Scalar>>& curves, Scalar ell) {
    detail::stack_values(curves);  // validates the shared grid
    PenalizedSmoother<Scalar> sm(curves.front().grid, ell);
    std::vector<Curve<Scalar>> out;
    out.reserve(curves.size());
    for (const auto& c : curves) out.push_back({c.grid, sm.apply(c.values)});
    return {std::move(out), std::move(sm)};
}

/// Penalized principal-component autoregression fit.
///
/// `basis` spans the q-dimensional prediction space; `transfer` maps basis
/// scores of the smoothed input to basis scores of the prediction.
template <class Scalar>
struct BessePredictor {
    Grid<Scalar> grid;
    MatX<Scalar> basis;     // P x q, columns A(ell) v_j
    MatX<Scalar> proj;      // q x P, least-squares projector onto the basis
    MatX<Scalar> transfer;  // q x q
    MatX<Scalar> hat;       // P x P smoothing operator A(ell)
};

/// Fits the penalized-FPCA predictor: spectral directions of the smoothed
/// second-moment operator, least-squares scores, and a lag-1 transfer with a
/// pseudo-inverted score covariance (components below 1e-12 of the trace
/// are dropped).
///
/// @throws rank_deficiency_error when the sample carries no variance at all.
template <class Scalar>
BessePredictor<Scalar> besse_penalized_predictor(const std::vector<Curve<Scalar>>& curves,
                                                 const SmootherConfig& cfg) {
    const int n = int(curves.size());
    if (n < 3) throw invalid_n_error("besse_penalized_predictor: need at least three curves");
    const MatX<Scalar> X = detail::stack_values(curves);
    const Eigen::Index P = X.cols();
    if (cfg.q < 1 || cfg.q > n || Eigen::Index(cfg.q) > P)
        throw invalid_argument_error("besse_penalized_predictor: q out of range");
    PenalizedSmoother<Scalar> sm(curves.front().grid, Scalar(cfg.ell));
    const MatX<Scalar> G = X * sm.A_sqrt();  // rows A^{1/2} x_i up to transpose
    MatX<Scalar> S = G.transpose() * G / Scalar(n);
    S = ((S + S.transpose()) / Scalar(2)).eval();
    if (!(S.trace() > Scalar(0)))
        throw rank_deficiency_error("besse_penalized_predictor: sample has no variance");
    Eigen::SelfAdjointEigenSolver<MatX<Scalar>> solver(S);
    if (solver.info() != Eigen::Success)
        throw decomposition_error("besse_penalized_predictor: eigensolver did not converge");
    MatX<Scalar> V = solver.eigenvectors().rowwise().reverse().leftCols(cfg.q);
    detail::canonicalize_signs(V);
    BessePredictor<Scalar> model;
    model.grid = curves.front().grid;
    model.hat = sm.A();
    model.basis = sm.A() * V;
    const MatX<Scalar> BtB = model.basis.transpose() * model.basis;
    const auto ldlt = BtB.ldlt();
    if (ldlt.info() != Eigen::Success)
        throw rank_deficiency_error("besse_penalized_predictor: basis lost rank");
    model.proj = ldlt.solve(model.basis.transpose());
    const MatX<Scalar> scores = (model.proj * (X * sm.A()).transpose()).transpose();  // n x q
    MatX<Scalar> C = scores.transpose() * scores / Scalar(n);
    C = ((C + C.transpose()) / Scalar(2)).eval();
    const MatX<Scalar> D =
        scores.bottomRows(n - 1).transpose() * scores.topRows(n - 1) / Scalar(n - 1);
    Eigen::SelfAdjointEigenSolver<MatX<Scalar>> cs(C);
    if (cs.info() != Eigen::Success)
        throw decomposition_error("besse_penalized_predictor: score covariance decomposition failed");
    const Scalar floor = Scalar(1e-12) * C.trace();
    VecX<Scalar> inv = VecX<Scalar>::Zero(cfg.q);
    int kept = 0;
    for (Eigen::Index k = 0; k < cfg.q; ++k)
        if (cs.eigenvalues()(k) > floor) {
            inv(k) = Scalar(1) / cs.eigenvalues()(k);
            ++kept;
        }
    if (kept == 0)
        throw rank_deficiency_error("besse_penalized_predictor: score covariance is singular");
    const MatX<Scalar> Cinv =
        cs.eigenvectors() * inv.asDiagonal() * cs.eigenvectors().transpose();
    model.transfer = D * Cinv;
    return model;
}

/// Applies the penalized-FPCA predictor: the query is smoothed and scored
/// exactly like a sample curve, then pushed through the lag-1 transfer.
template <class Scalar>
Curve<Scalar> predict(const BessePredictor<Scalar>& model, const Curve<Scalar>& query) {
    if (!same_grid(query.grid, model.grid))
        throw grid_mismatch_error("predict: query grid differs from the fitted grid");
    const VecX<Scalar> beta = model.proj * (model.hat * query.values);
    return {model.grid, model.basis * (model.transfer * beta)};
}

/// Result of the kernel regression predictor; `degenerate_fallback` marks
/// an all-weights-underflowed query answered by the nearest successor.
template <class Scalar>
struct KernelPredictResult {
    Curve<Scalar> value;
    bool degenerate_fallback = false;
};

/// Gaussian-kernel regression on pre-smoothed histories: weights
/// exp(-u^2/2) with u the squared L2 distance over the bandwidth, applied
/// to the raw (unsmoothed) query.
///
/// @throws invalid_n_error for fewer than two curves, invalid_argument_error
///         for a non-positive bandwidth, grid_mismatch_error for a foreign
///         query grid.
template <class Scalar>
KernelPredictResult<Scalar> kernel_predictor(const std::vector<Curve<Scalar>>& curves,
                                             const KernelConfig& cfg,
                                             const Curve<Scalar>& query) {
    if (curves.size() < 2) throw invalid_n_error("kernel_predictor: need at least two curves");
    if (!(cfg.h > 0.0)) throw invalid_argument_error("kernel_predictor: bandwidth must be > 0");
    const MatX<Scalar> X = detail::stack_values(curves);
    if (!same_grid(query.grid, curves.front().grid))
        throw grid_mismatch_error("kernel_predictor: query grid differs from the sample grid");
    const int n = int(curves.size());
    PenalizedSmoother<Scalar> sm(curves.front().grid, Scalar(cfg.smooth_penalty));
    MatX<Scalar> Xs(n, X.cols());
    for (int i = 0; i < n; ++i) Xs.row(i) = sm.apply(VecX<Scalar>(X.row(i)));
    const VecX<Scalar>& w = curves.front().grid.weights;
    VecX<Scalar> weight(n - 1);
    VecX<Scalar> dist2(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        const VecX<Scalar> diff = Xs.row(i).transpose() - query.values;
        dist2(i) = diff.cwiseAbs2().dot(w);
        const Scalar u = dist2(i) / Scalar(cfg.h);
        weight(i) = std::exp(-u * u / Scalar(2));
    }
    const Scalar total = weight.sum();
    KernelPredictResult<Scalar> out;
    out.value.grid = query.grid;
    if (!(total > Scalar(0))) {
        Eigen::Index nearest = 0;
        dist2.minCoeff(&nearest);
        out.value.values = Xs.row(nearest + 1);
        out.degenerate_fallback = true;
        return out;
    }
    VecX<Scalar> acc = VecX<Scalar>::Zero(X.cols());
    for (int i = 0; i + 1 < n; ++i) acc += weight(i) * Xs.row(i + 1).transpose();
    out.value.values = acc / total;
    return out;
}

}  // namespace arh

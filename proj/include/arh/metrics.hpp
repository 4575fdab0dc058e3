#pragma once

#include <arh/componentwise.hpp>
#include <arh/empirical.hpp>
#include <arh/errors.hpp>
#include <arh/grid_basis.hpp>
#include <arh/scenario.hpp>
#include <arh/simulate.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace arh {

/// Decay rate of the exceedance threshold: n^{1/2} or n^{1/3} denominator.
enum class RateKind { Half, Third };

/// Exceedance threshold family xi(n) = (ln n)^beta / n^rate.
struct ThresholdCurve {
    double beta = 0.95;
    RateKind rate = RateKind::Third;
};

/// Evaluates the threshold at sample size n (n >= 2, beta > 0).
inline double xi(const ThresholdCurve& curve, double n) {
    if (!(curve.beta > 0.0)) throw invalid_argument_error("xi: beta must be positive");
    if (!(n >= 2.0)) throw invalid_argument_error("xi: need n >= 2");
    const double denom = curve.rate == RateKind::Half ? std::sqrt(n) : std::cbrt(n);
    return std::pow(std::log(n), curve.beta) / denom;
}

/// One replication's error measurement plus diagnostics.
template <class Scalar = double>
struct ErrorRecord {
    int replication = 0;
    int n = 0;
    int k_n = 0;
    std::string method;
    Scalar error_norm = Scalar(0);
    bool exceeded = false;
    std::map<std::string, Scalar> aux;
};

/// Exact exceedance count over a record set, with its real value.
struct ExceedanceFraction {
    std::int64_t num = 0;
    std::int64_t den = 0;
    double fraction = 0.0;
};

/// Counts records whose error norm strictly exceeds xi(n); all records must
/// share the same sample size.
template <class Scalar>
ExceedanceFraction f_count(const std::vector<ErrorRecord<Scalar>>& records,
                           const ThresholdCurve& curve) {
    if (records.empty()) throw invalid_argument_error("f_count: no records");
    const int n = records.front().n;
    for (const auto& r : records)
        if (r.n != n) throw invalid_argument_error("f_count: records mix sample sizes");
    const double bar = xi(curve, double(n));
    ExceedanceFraction out;
    out.den = std::int64_t(records.size());
    for (const auto& r : records)
        if (double(r.error_norm) > bar) ++out.num;
    out.fraction = double(out.num) / double(out.den);
    return out;
}

/// Truncated prediction error of a diagonal componentwise estimate: the L2
/// distance between the level-k_n truncation of the true conditional mean
/// and the model's prediction, both realized on the basis grid.
template <class Scalar>
Scalar diag_truncated_error(const VecX<Scalar>& true_rho_diag, const VecX<Scalar>& last_coeffs,
                            const DiagEstimate<Scalar>& model, const BasisSystem<Scalar>& basis) {
    const int k = model.k_n;
    if (Eigen::Index(k) > true_rho_diag.size() || Eigen::Index(k) > last_coeffs.size())
        throw dimension_mismatch_error("diag_truncated_error: truth shorter than k_n");
    const VecX<Scalar> pred = predict(model, last_coeffs);
    // zero-padded to pred's length so both curves share one reconstruction path
    VecX<Scalar> truth = VecX<Scalar>::Zero(pred.size());
    truth.head(k) = true_rho_diag.head(k).cwiseProduct(last_coeffs.head(k));
    const Curve<Scalar> ct = reconstruct(truth, basis);
    const Curve<Scalar> cp = reconstruct(pred, basis);
    return std::sqrt(l2_distance_sq(ct, cp));
}

/// Reading of the non-diagonal truncated error's first term: the displayed
/// kernel integrated over its second argument (Literal), or the operator
/// applied to the truncated last observation (Applied).
enum class KernelErrorMode { Literal, Applied };

/// Truncated prediction error of a full componentwise estimate against a
/// non-diagonal operator, in either reading.
template <class Scalar>
Scalar kernel_truncated_error(const MatX<Scalar>& true_rho, const MatrixEstimate<Scalar>& model,
                              const BasisSystem<Scalar>& basis, int k_n,
                              const VecX<Scalar>& last_coeffs,
                              KernelErrorMode mode = KernelErrorMode::Literal) {
    if (k_n < 1) throw invalid_argument_error("kernel_truncated_error: k_n must be >= 1");
    if (Eigen::Index(k_n) > true_rho.rows() || Eigen::Index(k_n) > true_rho.cols() ||
        k_n > basis.M)
        throw dimension_mismatch_error("kernel_truncated_error: k_n exceeds the operator or basis");
    const VecX<Scalar> pred = predict(model, last_coeffs);
    VecX<Scalar> truth = VecX<Scalar>::Zero(pred.size());
    if (mode == KernelErrorMode::Literal) {
        // integral of each basis function over the grid
        const VecX<Scalar> ints = basis.values.topRows(k_n) * basis.grid.weights;
        truth.head(k_n) = true_rho.topLeftCorner(k_n, k_n) * ints;
    } else {
        if (Eigen::Index(k_n) > last_coeffs.size())
            throw dimension_mismatch_error("kernel_truncated_error: query shorter than k_n");
        truth.head(k_n) = true_rho.topLeftCorner(k_n, k_n) * last_coeffs.head(k_n);
    }
    const Curve<Scalar> ct = reconstruct(truth, basis);
    const Curve<Scalar> cp = reconstruct(pred, basis);
    return std::sqrt(l2_distance_sq(ct, cp));
}

/// Curve-level prediction error: L2 distance between the untruncated true
/// conditional mean applied to the input coefficients and a prediction
/// curve living on the basis grid.
template <class Scalar>
Scalar full_error(const MatX<Scalar>& true_rho, const Curve<Scalar>& prediction,
                  const BasisSystem<Scalar>& basis, const VecX<Scalar>& input_coeffs) {
    if (true_rho.cols() != input_coeffs.size())
        throw dimension_mismatch_error("full_error: operator and coefficients disagree");
    if (true_rho.rows() > Eigen::Index(basis.M))
        throw dimension_mismatch_error("full_error: operator exceeds the basis");
    if (!same_grid(prediction.grid, basis.grid))
        throw grid_mismatch_error("full_error: prediction lives on a foreign grid");
    const Curve<Scalar> truth = reconstruct(VecX<Scalar>(true_rho * input_coeffs), basis);
    return std::sqrt(l2_distance_sq(truth, prediction));
}

/// Additive upper bound on the diagonal-estimate operator-norm error.
template <class Scalar = double>
struct UbBound {
    Scalar term_est = Scalar(0);     ///< sup |rho~ - D/C_true|
    Scalar term_moment = Scalar(0);  ///< sup |D/C_true - rho|
    Scalar term_eigvec = Scalar(0);  ///< 2 sum (|D|/C_true) ||phi_n - phi'||
    Scalar term_tail = Scalar(0);    ///< sup_{j > k_n} |rho_j|
    Scalar total = Scalar(0);
};

/// Evaluates the consistency upper bound for a diagonal-scenario series:
/// empirical spectral quantities against the scenario's true sequences,
/// with the true eigenvectors sign-aligned to the empirical ones.
template <class Scalar>
UbBound<Scalar> ub_bound(const CoeffSeries<Scalar>& series, const ScenarioSpec<Scalar>& spec,
                         int k_n) {
    if (spec.regime != Regime::Diagonal)
        throw invalid_argument_error("ub_bound: defined for the diagonal regime only");
    if (k_n < 1 || k_n > series.M)
        throw invalid_argument_error("ub_bound: k_n out of range");
    const auto em = moments(series);
    const auto sp = eigendecompose(em);
    const MatX<Scalar>& V = sp.eigenvectors;
    const MatX<Scalar> scores = series.data * V;
    const int n = series.n;
    UbBound<Scalar> out;
    for (int j = 0; j < k_n; ++j) {
        const auto col = scores.col(j);
        const Scalar cnj = col.squaredNorm() / Scalar(n);
        if (!(cnj > Scalar(0))) throw zero_energy_error("ub_bound: component has no energy");
        const Scalar dnj = col.head(n - 1).dot(col.tail(n - 1)) / Scalar(n - 1);
        const Scalar c_true = spec.c1 * std::pow(Scalar(j + 1), -spec.delta1);
        const Scalar rho_j = spec.c2 * std::pow(Scalar(j + 1), -spec.delta2);
        out.term_est = std::max(out.term_est, std::abs(dnj / cnj - dnj / c_true));
        out.term_moment = std::max(out.term_moment, std::abs(dnj / c_true - rho_j));
        VecX<Scalar> ref = VecX<Scalar>::Zero(series.M);
        ref(j) = V(j, j) >= Scalar(0) ? Scalar(1) : Scalar(-1);
        out.term_eigvec += Scalar(2) * (std::abs(dnj) / c_true) * (V.col(j) - ref).norm();
    }
    // rho_j decreases in j, so the tail supremum sits at j = k_n + 1
    out.term_tail = spec.c2 * std::pow(Scalar(k_n + 1), -spec.delta2);
    out.total = out.term_est + out.term_moment + out.term_eigvec + out.term_tail;
    return out;
}

/// Off-diagonal energy of a lag-1 moment matrix relative to the diagonal
/// lag-0 energies: sum over j != l <= k_n of (D(j,l)/C(j))^2.
template <class Scalar>
Scalar hs_offdiag_bound(const MatX<Scalar>& Dn, const VecX<Scalar>& Cn_diag, int k_n) {
    if (k_n < 1 || Eigen::Index(k_n) > Dn.rows() || Eigen::Index(k_n) > Dn.cols() ||
        Eigen::Index(k_n) > Cn_diag.size())
        throw invalid_argument_error("hs_offdiag_bound: k_n out of range");
    for (int j = 0; j < k_n; ++j)
        if (!(Cn_diag(j) > Scalar(0)))
            throw zero_energy_error("hs_offdiag_bound: component has no energy");
    Scalar total = Scalar(0);
    for (int j = 0; j < k_n; ++j)
        for (int l = 0; l < k_n; ++l) {
            if (j == l) continue;
            const Scalar r = Dn(j, l) / Cn_diag(j);
            total += r * r;
        }
    return total;
}

/// Series form: empirical eigenbasis scores feed the plug-in quantity; the
/// first k_n empirical energies must clear a relative rank floor.
template <class Scalar>
Scalar hs_offdiag_bound(const CoeffSeries<Scalar>& series, int k_n) {
    if (k_n < 1 || k_n > series.M)
        throw invalid_argument_error("hs_offdiag_bound: k_n out of range");
    const auto em = moments(series);
    const auto sp = eigendecompose(em);
    const MatX<Scalar> scores = series.data * sp.eigenvectors;
    const int n = series.n;
    const Scalar floor = Scalar(1e-12) * em.Cn.trace();
    MatX<Scalar> D(k_n, k_n);
    VecX<Scalar> C(k_n);
    for (int j = 0; j < k_n; ++j) {
        C(j) = scores.col(j).squaredNorm() / Scalar(n);
        if (!(C(j) > floor))
            throw zero_energy_error("hs_offdiag_bound: component energy below the rank floor");
        for (int l = 0; l < k_n; ++l)
            D(j, l) = scores.col(j).head(n - 1).dot(scores.col(l).tail(n - 1)) / Scalar(n - 1);
    }
    return hs_offdiag_bound(D, C, k_n);
}

}  // namespace arh

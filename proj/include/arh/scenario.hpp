// Data-generating objects for the three simulation regimes: eigenvalues of the
// autocovariance operator, the autocorrelation matrix, and the innovation
// covariance, with stability and positive-definiteness checks.
#pragma once

#include <arh/grid_basis.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <string>

namespace arh {

enum class Regime { Diagonal, PseudoDiagonal, NonDiagonal };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Diagonal: return "diagonal";
        case Regime::PseudoDiagonal: return "pseudo_diagonal";
        default: return "non_diagonal";
    }
}

/// Full parameterization of one data-generating regime.
template <class Scalar = double>
struct ScenarioSpec {
    Regime regime = Regime::Diagonal;
    Scalar delta1 = Scalar(1.5);   ///< eigenvalue decay C_j = c1 j^-delta1
    Scalar delta2 = Scalar(1.1);   ///< diagonal autocorrelation decay
    Scalar c1 = Scalar(1);         ///< eigenvalue scale, > 0
    Scalar c2 = Scalar(0.8);       ///< diagonal autocorrelation scale, in (0,1)
    Scalar W = Scalar(0.2);        ///< off-diagonal width
    Scalar invK = Scalar(0.275);   ///< non-diagonal band scale (1/K)
    int M = 50;                    ///< spectral truncation of the generator
    int burn_in = 500;             ///< stationary-start burn-in outside the diagonal regime
    std::uint64_t seed = 0;        ///< default stream for simulate()
};

/// Built and checked generating operators of a scenario.
template <class Scalar = double>
struct ScenarioOperators {
    ScenarioSpec<Scalar> spec;
    VecX<Scalar> C_eigs;      ///< strictly decreasing, positive
    MatX<Scalar> rho;         ///< symmetric, operator norm < 1
    MatX<Scalar> noise_cov;   ///< symmetric PSD
    MatX<Scalar> noise_chol;  ///< lower Cholesky factor of noise_cov
    Scalar rho_norm{};
};

template <class Scalar>
void check_spec(const ScenarioSpec<Scalar>& s) {
    if (!(s.c2 > Scalar(0)) || !(s.c2 < Scalar(1)))
        throw instability_error("scenario: c2 must lie in (0,1)");
    if (!(s.delta1 > Scalar(1)))
        throw invalid_argument_error("scenario: delta1 must exceed 1 (trace class)");
    if (!(s.c1 > Scalar(0))) throw invalid_argument_error("scenario: c1 must be positive");
    if (s.M < 1) throw invalid_argument_error("scenario: M must be >= 1");
    if (!(s.W > Scalar(0))) throw invalid_argument_error("scenario: W must be positive");
    if (s.burn_in < 0) throw invalid_argument_error("scenario: burn_in must be >= 0");
}

/// C_j = c1 j^-delta1, j = 1..M.
template <class Scalar>
VecX<Scalar> c_eigenvalues(const ScenarioSpec<Scalar>& s) {
    check_spec(s);
    VecX<Scalar> C(s.M);
    for (int j = 0; j < s.M; ++j) C(j) = s.c1 * std::pow(Scalar(j + 1), -s.delta1);
    return C;
}

namespace detail {
template <class Scalar>
Scalar sym_operator_norm(const MatX<Scalar>& A) {
    Eigen::SelfAdjointEigenSolver<MatX<Scalar>> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw decomposition_error("operator norm: eigensolver failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Cholesky with the single-shot jitter policy: one diagonal bump of
/// 1e-12 * trace / M to absorb float-level asymmetry, then hard failure.
template <class Scalar>
MatX<Scalar> psd_cholesky(MatX<Scalar> S) {
    Eigen::LLT<MatX<Scalar>> llt(S);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    const Scalar jitter = Scalar(1e-12) * S.trace() / Scalar(S.rows());
    S.diagonal().array() += jitter;
    llt.compute(S);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    throw not_psd_error("covariance is not positive semidefinite (jitter did not help)");
}
}  // namespace detail

/// Autocorrelation matrix: diagonal c2 j^-delta2 in every regime; off-diagonal
/// zero (Diagonal), exp(-|j-h|/W) (PseudoDiagonal) or invK/(|j-h|^2+1)
/// (NonDiagonal). Fails when the operator norm reaches 1.
template <class Scalar>
MatX<Scalar> build_rho(const ScenarioSpec<Scalar>& s) {
    check_spec(s);
    MatX<Scalar> R = MatX<Scalar>::Zero(s.M, s.M);
    for (int j = 0; j < s.M; ++j) R(j, j) = s.c2 * std::pow(Scalar(j + 1), -s.delta2);
    if (s.regime != Regime::Diagonal) {
        for (int j = 0; j < s.M; ++j)
            for (int h = 0; h < s.M; ++h) {
                if (j == h) continue;
                const Scalar d = Scalar(std::abs(j - h));
                R(j, h) = s.regime == Regime::PseudoDiagonal ? std::exp(-d / s.W)
                                                             : s.invK / (d * d + Scalar(1));
            }
    }
    const Scalar norm = detail::sym_operator_norm(R);
    if (!(norm < Scalar(1)))
        throw instability_error("build_rho: operator norm " + std::to_string(double(norm)) +
                                " is not < 1");
    return R;
}

/// Innovation covariance: diagonal C_j (1 - rho_jj^2); off-diagonal zero in the
/// Diagonal regime and exp(-|j-h|^2/W) otherwise. Verified PSD via Cholesky.
template <class Scalar>
MatX<Scalar> build_noise_cov(const ScenarioSpec<Scalar>& s, const VecX<Scalar>& C_eigs,
                             const MatX<Scalar>& rho) {
    check_spec(s);
    if (C_eigs.size() != s.M || rho.rows() != s.M || rho.cols() != s.M)
        throw dimension_mismatch_error("build_noise_cov: size mismatch");
    MatX<Scalar> S = MatX<Scalar>::Zero(s.M, s.M);
    for (int j = 0; j < s.M; ++j) S(j, j) = C_eigs(j) * (Scalar(1) - rho(j, j) * rho(j, j));
    if (s.regime != Regime::Diagonal) {
        for (int j = 0; j < s.M; ++j)
            for (int h = 0; h < s.M; ++h) {
                if (j == h) continue;
                const Scalar d = Scalar(std::abs(j - h));
                S(j, h) = std::exp(-d * d / s.W);
            }
    }
    S = ((S + S.transpose()) / Scalar(2)).eval();
    detail::psd_cholesky(S);  // existence check; validate() keeps the factor
    return S;
}

/// Builds and cross-checks every generating object of the scenario.
template <class Scalar>
ScenarioOperators<Scalar> validate(const ScenarioSpec<Scalar>& s) {
    ScenarioOperators<Scalar> ops;
    ops.spec = s;
    ops.C_eigs = c_eigenvalues(s);
    for (int j = 1; j < s.M; ++j)
        if (!(ops.C_eigs(j) < ops.C_eigs(j - 1)) || !(ops.C_eigs(j) > Scalar(0)))
            throw monotonicity_error("validate: C eigenvalues must decrease strictly to 0+");
    ops.rho = build_rho(s);
    ops.rho_norm = detail::sym_operator_norm(ops.rho);
    ops.noise_cov = build_noise_cov(s, ops.C_eigs, ops.rho);
    ops.noise_chol = detail::psd_cholesky(ops.noise_cov);
    return ops;
}

}  // namespace arh

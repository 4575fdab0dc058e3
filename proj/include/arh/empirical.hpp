#pragma once

#include <arh/errors.hpp>
#include <arh/simulate.hpp>

#include <Eigen/Dense>

#include <cmath>

namespace arh {

/// Lag-0 and lag-1 empirical moments of a coefficient series.
///
/// `Cn(j, l)` averages products of same-time coefficients over all n
/// observations; `Dn(j, l)` averages the product of coefficient j at time i
/// with coefficient l at time i + 1 over the n - 1 adjacent pairs, so rows
/// index the earlier observation and columns the later one.
template <class Scalar>
struct EmpiricalMoments {
    MatX<Scalar> Cn;
    MatX<Scalar> Dn;
    int n = 0;
};

/// Computes the empirical covariance and cross-covariance moments.
///
/// @throws invalid_n_error if the series has fewer than two observations.
template <class Scalar>
EmpiricalMoments<Scalar> moments(const CoeffSeries<Scalar>& series) {
    if (series.n < 2) throw invalid_n_error("moments: need at least two observations");
    EmpiricalMoments<Scalar> m;
    m.n = series.n;
    const auto& X = series.data;
    MatX<Scalar> C = (X.transpose() * X) / Scalar(series.n);
    m.Cn = (C + C.transpose()) / Scalar(2);  // exact symmetry regardless of GEMM order
    m.Dn = (X.topRows(series.n - 1).transpose() * X.bottomRows(series.n - 1)) /
           Scalar(series.n - 1);
    return m;
}

/// Orthonormal eigensystem of an empirical covariance, eigenvalues descending.
///
/// `sign_tie` is set by sign_align when some column was orthogonal to its
/// reference and the sign convention could not be applied.
template <class Scalar>
struct SpectralPair {
    VecX<Scalar> eigenvalues;
    MatX<Scalar> eigenvectors;  // columns, one per eigenvalue
    bool sign_tie = false;
};

namespace detail {

/// Flips each column so its largest-magnitude coordinate is positive
/// (lowest index wins ties), making the decomposition reproducible.
template <class Scalar>
void canonicalize_signs(MatX<Scalar>& V) {
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
        Eigen::Index arg = 0;
        Scalar best = Scalar(0);
        for (Eigen::Index i = 0; i < V.rows(); ++i) {
            const Scalar a = std::abs(V(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (V(arg, j) < Scalar(0)) V.col(j) = -V.col(j);
    }
}

}  // namespace detail

/// Diagonalizes the lag-0 moment matrix.
///
/// Eigenvalues are sorted in descending order; round-off negatives (within
/// 1e-10 of the spectral radius) are clipped to zero.  Column signs follow
/// the largest-coordinate-positive convention.
///
/// @throws decomposition_error if the matrix has a genuinely negative
///         eigenvalue or the factorization fails its own residual checks.
template <class Scalar>
SpectralPair<Scalar> eigendecompose(const EmpiricalMoments<Scalar>& m) {
    Eigen::SelfAdjointEigenSolver<MatX<Scalar>> solver(m.Cn);
    if (solver.info() != Eigen::Success)
        throw decomposition_error("eigendecompose: solver did not converge");
    const Eigen::Index M = m.Cn.rows();
    SpectralPair<Scalar> p;
    p.eigenvalues = solver.eigenvalues().reverse();
    p.eigenvectors = solver.eigenvectors().rowwise().reverse();
    const Scalar radius =
        std::max(std::abs(p.eigenvalues(0)), std::abs(p.eigenvalues(M - 1)));
    for (Eigen::Index j = 0; j < M; ++j) {
        if (p.eigenvalues(j) < Scalar(0)) {
            if (p.eigenvalues(j) < Scalar(-1e-10) * radius)
                throw decomposition_error("eigendecompose: covariance is not positive semidefinite");
            p.eigenvalues(j) = Scalar(0);
        }
    }
    detail::canonicalize_signs(p.eigenvectors);
    const MatX<Scalar> gram = p.eigenvectors.transpose() * p.eigenvectors;
    if ((gram - MatX<Scalar>::Identity(M, M)).cwiseAbs().maxCoeff() > Scalar(1e-10))
        throw decomposition_error("eigendecompose: eigenvectors lost orthonormality");
    const MatX<Scalar> rebuilt =
        p.eigenvectors * p.eigenvalues.asDiagonal() * p.eigenvectors.transpose();
    if ((rebuilt - m.Cn).norm() > Scalar(1e-10) * std::max(m.Cn.norm(), Scalar(1)))
        throw decomposition_error("eigendecompose: reconstruction residual too large");
    return p;
}

/// Flips eigenvector signs so each column has a nonnegative inner product
/// with the matching reference column.  A column exactly orthogonal to its
/// reference keeps its sign and raises the `sign_tie` flag.
template <class Scalar>
SpectralPair<Scalar> sign_align(const SpectralPair<Scalar>& pair,
                                const MatX<Scalar>& reference) {
    if (reference.rows() != pair.eigenvectors.rows() ||
        reference.cols() < pair.eigenvectors.cols())
        throw dimension_mismatch_error("sign_align: reference shape does not cover the pair");
    SpectralPair<Scalar> out = pair;
    for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) {
        const Scalar ip = out.eigenvectors.col(j).dot(reference.col(j));
        if (ip < Scalar(0))
            out.eigenvectors.col(j) = -out.eigenvectors.col(j);
        else if (ip == Scalar(0))
            out.sign_tie = true;
    }
    return out;
}

/// Re-expresses a coefficient series in the eigenbasis of `pair`.
///
/// Row i of the result holds the scores of observation i on the empirical
/// eigenvectors; scenario metadata and the seed carry over unchanged.
template <class Scalar>
CoeffSeries<Scalar> project_onto(const CoeffSeries<Scalar>& series,
                                 const SpectralPair<Scalar>& pair) {
    if (pair.eigenvectors.rows() != series.M)
        throw dimension_mismatch_error("project_onto: eigenvector dimension != series width");
    CoeffSeries<Scalar> out = series;
    out.data = series.data * pair.eigenvectors;
    out.M = int(pair.eigenvectors.cols());
    return out;
}

}  // namespace arh

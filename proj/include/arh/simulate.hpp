// Zero-mean Gaussian sample paths of X_i = rho(X_{i-1}) + eps_i in coefficient
// space, with stationary initialization.
#pragma once

#include <arh/rng.hpp>
#include <arh/scenario.hpp>

#include <optional>
#include <random>
#include <vector>

namespace arh {

/// Basis coefficients of one simulated path: row i holds <X_i, phi_j>, j=1..M.
template <class Scalar = double>
struct CoeffSeries {
    int n = 0;
    int M = 0;
    MatX<Scalar> data;  // n x M
    std::optional<ScenarioSpec<Scalar>> spec;
    std::uint64_t seed = 0;
};

/// Simulates n observations. The diagonal regime starts exactly in the
/// stationary law (coordinatewise N(0, C_j)); correlated regimes burn in
/// spec.burn_in steps from zero. Deterministic given (ops, n, seed).
template <class Scalar>
CoeffSeries<Scalar> simulate(const ScenarioOperators<Scalar>& ops, int n, std::uint64_t seed) {
    if (n < 2) throw invalid_n_error("simulate: need n >= 2");
    const int M = ops.spec.M;
    SplitMix64 eng(seed);
    std::normal_distribution<Scalar> gauss(Scalar(0), Scalar(1));
    VecX<Scalar> z(M);
    const auto draw = [&] {
        for (int j = 0; j < M; ++j) z(j) = gauss(eng);
    };

    CoeffSeries<Scalar> out;
    out.n = n;
    out.M = M;
    out.spec = ops.spec;
    out.seed = seed;
    out.data.resize(n, M);

    const bool diag = ops.spec.regime == Regime::Diagonal;  // rho, chol exactly diagonal
    const VecX<Scalar> rho_d = ops.rho.diagonal();
    const VecX<Scalar> chol_d = ops.noise_chol.diagonal();

    VecX<Scalar> x(M);
    const auto step = [&](const VecX<Scalar>& prev) -> VecX<Scalar> {
        draw();
        if (diag) return rho_d.cwiseProduct(prev) + chol_d.cwiseProduct(z);
        return ops.rho * prev + ops.noise_chol * z;
    };

    if (diag) {
        draw();
        x = ops.C_eigs.cwiseSqrt().cwiseProduct(z);
    } else {
        x.setZero();
        for (int b = 0; b < ops.spec.burn_in; ++b) x = step(x);
    }
    out.data.row(0) = x.transpose();
    for (int i = 1; i < n; ++i) {
        x = step(x);
        out.data.row(i) = x.transpose();
    }
    if (!out.data.allFinite()) throw error("simulate: non-finite sample produced");
    return out;
}

/// Curve-space view of a coefficient series: curve i = sum_j data(i,j) phi_j.
template <class Scalar>
std::vector<Curve<Scalar>> curves_of(const CoeffSeries<Scalar>& series,
                                     const BasisSystem<Scalar>& basis) {
    if (basis.M < series.M)
        throw dimension_mismatch_error("curves_of: basis holds fewer modes than the series");
    std::vector<Curve<Scalar>> out;
    out.reserve(series.n);
    for (int i = 0; i < series.n; ++i)
        out.push_back(reconstruct(series.data.row(i).transpose().eval(), basis));
    return out;
}

}  // namespace arh

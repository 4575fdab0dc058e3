// Grids with trapezoid quadrature, the sine eigenbasis of the scenario
// autocovariance operator, and projection between curve and coefficient space.
#pragma once

#include <arh/errors.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace arh {

template <class Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using VecXd = VecX<double>;
using MatXd = MatX<double>;

/// Discretization of [a, b]: strictly increasing points from a to b and
/// trapezoid quadrature weights. The final subinterval may be shorter than
/// step when step does not divide b - a; the last weight absorbs that.
template <class Scalar = double>
struct Grid {
    Scalar a{}, b{}, step{};
    VecX<Scalar> points;
    VecX<Scalar> weights;

    Eigen::Index size() const { return points.size(); }
};

template <class Scalar>
bool same_grid(const Grid<Scalar>& g, const Grid<Scalar>& h) {
    return g.size() == h.size() && g.a == h.a && g.b == h.b && g.step == h.step;
}

template <class Scalar = double>
Grid<Scalar> make_grid(Scalar a, Scalar b, Scalar step) {
    if (!(a < b) || !(step > Scalar(0)) || !(step < b - a))
        throw invalid_interval_error("make_grid: need a < b and 0 < step < b - a");
    Grid<Scalar> g{a, b, step, {}, {}};
    std::vector<Scalar> pts{a};
    const Scalar tol = step * Scalar(1e-9);
    for (Eigen::Index k = 1; a + Scalar(k) * step < b - tol; ++k) pts.push_back(a + Scalar(k) * step);
    pts.push_back(b);
    g.points = Eigen::Map<const VecX<Scalar>>(pts.data(), static_cast<Eigen::Index>(pts.size()));
    const Eigen::Index P = g.points.size();
    g.weights.resize(P);
    g.weights(0) = (g.points(1) - g.points(0)) / Scalar(2);
    g.weights(P - 1) = (g.points(P - 1) - g.points(P - 2)) / Scalar(2);
    for (Eigen::Index p = 1; p + 1 < P; ++p)
        g.weights(p) = (g.points(p + 1) - g.points(p - 1)) / Scalar(2);
    return g;
}

/// Discretized element of L2((a, b)).
template <class Scalar = double>
struct Curve {
    Grid<Scalar> grid;
    VecX<Scalar> values;
};

/// The sine modes phi_j(x) = sqrt(2/(b-a)) sin(pi j x / (b-a)), j = 1..M,
/// evaluated on a grid (row j-1 holds phi_j), together with the worst
/// quadrature Gram deviation from identity.
template <class Scalar = double>
struct BasisSystem {
    Grid<Scalar> grid;
    int M = 0;
    MatX<Scalar> values;  // M x P
    Scalar gram_defect{};
};

/// Builds the sine basis and certifies numerical orthonormality under the
/// grid quadrature. Fails with aliasing_error when the grid undersamples
/// mode M (gram defect above tolerance).
template <class Scalar = double>
BasisSystem<Scalar> sine_basis(const Grid<Scalar>& grid, int M, Scalar tolerance = Scalar(1e-3)) {
    if (M < 1) throw invalid_argument_error("sine_basis: M must be >= 1");
    BasisSystem<Scalar> b{grid, M, {}, Scalar(0)};
    const Eigen::Index P = grid.size();
    const Scalar len = grid.b - grid.a;
    const Scalar amp = std::sqrt(Scalar(2) / len);
    b.values.resize(M, P);
    for (int j = 0; j < M; ++j)
        for (Eigen::Index p = 0; p < P; ++p)
            b.values(j, p) =
                amp * std::sin(Scalar(EIGEN_PI) * Scalar(j + 1) * (grid.points(p) - grid.a) / len);
    const MatX<Scalar> gram = b.values * grid.weights.asDiagonal() * b.values.transpose();
    b.gram_defect = (gram - MatX<Scalar>::Identity(M, M)).cwiseAbs().maxCoeff();
    if (b.gram_defect > tolerance)
        throw aliasing_error("sine_basis: gram defect " + std::to_string(double(b.gram_defect)) +
                             " exceeds tolerance (grid undersamples mode " + std::to_string(M) + ")");
    return b;
}

/// Quadrature realization of the L2 inner product.
template <class Scalar>
Scalar inner_product(const Curve<Scalar>& f, const Curve<Scalar>& g) {
    if (!same_grid(f.grid, g.grid)) throw grid_mismatch_error("inner_product: grids differ");
    return f.values.dot(f.grid.weights.cwiseProduct(g.values));
}

/// Squared L2 distance between two curves on one grid.
template <class Scalar>
Scalar l2_distance_sq(const Curve<Scalar>& f, const Curve<Scalar>& g) {
    if (!same_grid(f.grid, g.grid)) throw grid_mismatch_error("l2_distance_sq: grids differ");
    return (f.values - g.values).cwiseAbs2().dot(f.grid.weights);
}

/// Basis coefficients c_j = <curve, phi_j>.
template <class Scalar>
VecX<Scalar> project(const Curve<Scalar>& curve, const BasisSystem<Scalar>& basis) {
    if (!same_grid(curve.grid, basis.grid)) throw grid_mismatch_error("project: grids differ");
    return basis.values * curve.grid.weights.cwiseProduct(curve.values);
}

/// Finite expansion sum_j c_j phi_j on the basis grid. Accepts any coefficient
/// count up to M.
template <class Scalar>
Curve<Scalar> reconstruct(const VecX<Scalar>& coeffs, const BasisSystem<Scalar>& basis) {
    if (coeffs.size() > basis.M)
        throw dimension_mismatch_error("reconstruct: more coefficients than basis functions");
    return {basis.grid, basis.values.topRows(coeffs.size()).transpose() * coeffs};
}

}  // namespace arh
